//! Experiment configuration: a TOML file, with command-line overrides
//! applied on top.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use qaoa_bo::bo::{BoConfig, EtaSchedule, GridMode};
use qaoa_bo::gp::Smoothness;
use qaoa_bo::graph::{random_regular_graph, ring_graph, Graph};
use qaoa_bo::hamiltonian::maxcut_hamiltonian;
use qaoa_bo::simulator::{EstimatorMode, NoisyQaoaObjective, Objective, PauliChannel, QaoaObjective};
use qaoa_bo::{Channel, Hamiltonian};

use crate::error::{config_err, CliResult};

/// Environment variable that overrides the configured output directory.
pub const OUT_DIR_ENV: &str = "QAOA_BO_OUT";
pub const DEFAULT_OUT_DIR: &str = "out";
pub const DEFAULT_MAX_RUNS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    Ring { n: usize },
    Regular { n: usize, d: usize, seed: u64 },
    EdgeList { path: PathBuf },
}

impl ProblemSpec {
    pub fn graph(&self) -> CliResult<Graph> {
        Ok(match self {
            ProblemSpec::Ring { n } => ring_graph(*n)?,
            ProblemSpec::Regular { n, d, seed } => random_regular_graph(*n, *d, *seed)?,
            ProblemSpec::EdgeList { path } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| config_err(format!("problem.path {}: {e}", path.display())))?;
                Graph::from_edge_list(&text)?
            }
        })
    }

    /// Copy with the vertex count replaced, for sweeps over `n`.
    pub fn with_n(&self, n: usize) -> CliResult<Self> {
        match self {
            ProblemSpec::Ring { .. } => Ok(ProblemSpec::Ring { n }),
            ProblemSpec::Regular { d, seed, .. } => Ok(ProblemSpec::Regular { n, d: *d, seed: *seed }),
            ProblemSpec::EdgeList { .. } => Err(config_err("sweep.n cannot vary an edge-list problem")),
        }
    }

    /// Parses `ring:N`, `regular:N:D:SEED` or `file:PATH`.
    pub fn parse_flag(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.parse::<u64>()
                .map_err(|_| config_err(format!("graph: {t:?} is not a nonnegative integer")))
        };
        match parts.as_slice() {
            ["ring", n] => Ok(ProblemSpec::Ring { n: num(n)? as usize }),
            ["regular", n, d, seed] => Ok(ProblemSpec::Regular {
                n: num(n)? as usize,
                d: num(d)? as usize,
                seed: num(seed)?,
            }),
            ["file", _, ..] => Ok(ProblemSpec::EdgeList {
                path: PathBuf::from(&s["file:".len()..]),
            }),
            _ => Err(config_err(format!(
                "graph: expected ring:N, regular:N:D:SEED or file:PATH, got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseSpec {
    #[default]
    None,
    /// `q_X = q_Y = q_Z = q`; `q = 0` is noiseless.
    Symmetric { q: f64 },
    Pauli { q_x: f64, q_y: f64, q_z: f64 },
}

impl NoiseSpec {
    pub fn channel(&self) -> CliResult<Option<Channel>> {
        match *self {
            NoiseSpec::None => Ok(None),
            NoiseSpec::Symmetric { q: 0.0 } => Ok(None),
            NoiseSpec::Symmetric { q } => Ok(Some(PauliChannel::symmetric(q)?)),
            NoiseSpec::Pauli { q_x, q_y, q_z } => {
                Ok(Some(PauliChannel::degenerate(1.0 - q_x - q_y - q_z, q_x, q_y, q_z)?))
            }
        }
    }

    /// The channel strength, 0 when noiseless.
    pub fn strength(&self) -> f64 {
        match *self {
            NoiseSpec::None => 0.0,
            NoiseSpec::Symmetric { q } => q,
            NoiseSpec::Pauli { q_x, q_y, q_z } => q_x.max(q_y).max(q_z),
        }
    }
}

/// BO settings shared by every seed; the seed and target scale are filled
/// in per run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoSection {
    pub steps: usize,
    pub initial: Option<usize>,
    pub measurements: u64,
    pub estimator: EstimatorMode,
    pub delta: f64,
    pub nu: Smoothness,
    pub length_scale: f64,
    pub eta: EtaSchedule,
    pub grid: GridMode,
    pub refine: bool,
    pub normalize_targets: bool,
}

impl Default for BoSection {
    fn default() -> Self {
        let b = BoConfig::new(20, 1000, 0);
        Self {
            steps: b.steps,
            initial: b.initial,
            measurements: b.measurements,
            estimator: b.estimator,
            delta: b.delta,
            nu: b.nu,
            length_scale: b.length_scale,
            eta: b.eta,
            grid: b.grid,
            refine: b.refine,
            normalize_targets: b.normalize_targets,
        }
    }
}

impl BoSection {
    pub fn to_config(&self, seed: u64, target_scale: f64) -> BoConfig {
        BoConfig {
            steps: self.steps,
            initial: self.initial,
            measurements: self.measurements,
            estimator: self.estimator,
            delta: self.delta,
            nu: self.nu,
            length_scale: self.length_scale,
            eta: self.eta,
            grid: self.grid,
            refine: self.refine,
            normalize_targets: self.normalize_targets,
            target_scale,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSection {
    /// Points per dimension; `None` is four times the acquisition default.
    pub resolution: Option<usize>,
    pub refine: bool,
}

impl Default for OracleSection {
    fn default() -> Self {
        Self {
            resolution: None,
            refine: true,
        }
    }
}

/// Axes of a parameter sweep. An omitted axis keeps the base value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub n: Option<Vec<usize>>,
    pub p: Option<Vec<usize>>,
    /// Symmetric channel strengths; 0 is noiseless.
    pub q: Option<Vec<f64>>,
    #[serde(rename = "M")]
    pub m: Option<Vec<u64>>,
    #[serde(default = "default_max_runs")]
    pub max_runs: usize,
}

fn default_max_runs() -> usize {
    DEFAULT_MAX_RUNS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub p: usize,
    pub seeds: Vec<u64>,
    /// Not echoed into outputs, so results do not depend on where they were
    /// written.
    #[serde(skip_serializing)]
    pub out_dir: Option<PathBuf>,
    pub problem: Option<ProblemSpec>,
    pub noise: NoiseSpec,
    pub bo: BoSection,
    pub oracle: OracleSection,
    pub sweep: Option<SweepSpec>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            p: 1,
            seeds: vec![0],
            out_dir: None,
            problem: None,
            noise: NoiseSpec::None,
            bo: BoSection::default(),
            oracle: OracleSection::default(),
            sweep: None,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub graph: Option<String>,
    pub p: Option<usize>,
    pub q: Option<f64>,
    pub seeds: Option<String>,
    pub steps: Option<usize>,
    pub initial: Option<usize>,
    pub measurements: Option<u64>,
    pub estimator: Option<EstimatorMode>,
    pub delta: Option<f64>,
    pub eta: Option<String>,
    pub nu: Option<f64>,
    pub length_scale: Option<f64>,
    pub grid_per_dim: Option<usize>,
    pub refine: bool,
    pub no_normalize: bool,
    pub oracle_resolution: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Parses `0..20` (half-open) or a comma list `1,5,9`.
pub fn parse_seeds(s: &str) -> CliResult<Vec<u64>> {
    let bad = || config_err(format!("seeds: cannot parse {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        return Ok((a..b).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

/// Parses `constant:C`, `sqrt-log:C` or `theorem1:V_HAT`.
pub fn parse_eta(s: &str) -> CliResult<EtaSchedule> {
    let (kind, val) = s
        .split_once(':')
        .ok_or_else(|| config_err(format!("eta: expected KIND:VALUE, got {s:?}")))?;
    let v: f64 = val.parse().map_err(|_| config_err(format!("eta: bad value {val:?}")))?;
    match kind {
        "constant" => Ok(EtaSchedule::Constant { c: v }),
        "sqrt-log" => Ok(EtaSchedule::SqrtLog { c: v }),
        "theorem1" => Ok(EtaSchedule::Theorem1 { v_hat: v }),
        _ => Err(config_err(format!("eta: unknown schedule {kind:?}"))),
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| config_err(e.to_string()))
    }

    /// Reads a config file; relative edge-list paths resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        if let Some(ProblemSpec::EdgeList { path: p }) = &mut cfg.problem {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) -> CliResult<()> {
        if let Some(g) = &o.graph {
            self.problem = Some(ProblemSpec::parse_flag(g)?);
        }
        if let Some(p) = o.p {
            self.p = p;
        }
        if let Some(q) = o.q {
            self.noise = NoiseSpec::Symmetric { q };
        }
        if let Some(s) = &o.seeds {
            self.seeds = parse_seeds(s)?;
        }
        let b = &mut self.bo;
        if let Some(v) = o.steps {
            b.steps = v;
        }
        if let Some(v) = o.initial {
            b.initial = Some(v);
        }
        if let Some(v) = o.measurements {
            b.measurements = v;
        }
        if let Some(v) = o.estimator {
            b.estimator = v;
        }
        if let Some(v) = o.delta {
            b.delta = v;
        }
        if let Some(e) = &o.eta {
            b.eta = parse_eta(e)?;
        }
        if let Some(nu) = o.nu {
            b.nu = Smoothness::from_value(nu)?;
        }
        if let Some(l) = o.length_scale {
            b.length_scale = l;
        }
        if let Some(g) = o.grid_per_dim {
            b.grid = GridMode::Fixed { per_dim: Some(g) };
        }
        if o.refine {
            b.refine = true;
        }
        if o.no_normalize {
            b.normalize_targets = false;
        }
        if let Some(r) = o.oracle_resolution {
            self.oracle.resolution = Some(r);
        }
        if let Some(out) = &o.out {
            self.out_dir = Some(out.clone());
        }
        Ok(())
    }

    /// Flag, then environment, then file, then the default.
    pub fn resolve_out_dir(&self, flag: Option<&Path>) -> PathBuf {
        if let Some(f) = flag {
            return f.to_path_buf();
        }
        if let Some(env) = std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()) {
            return PathBuf::from(env);
        }
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }

    /// Checks everything that does not require running anything.
    pub fn validate(&self) -> CliResult<()> {
        if self.p == 0 {
            return Err(config_err("p: depth must be at least 1"));
        }
        if self.seeds.is_empty() {
            return Err(config_err("seeds: need at least one seed"));
        }
        if self.problem.is_none() {
            return Err(config_err("problem: no graph given (set [problem] or --graph)"));
        }
        self.noise.channel()?;
        self.bo.to_config(0, 1.0).validate(self.p)?;
        Ok(())
    }

    /// JSON echo embedded in every output.
    pub fn echo(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// A resolved problem instance.
pub struct Instance {
    pub graph: Graph,
    pub hamiltonian: Arc<Hamiltonian>,
    pub channel: Option<Channel>,
    pub p: usize,
}

impl Instance {
    pub fn new(problem: &ProblemSpec, noise: &NoiseSpec, p: usize) -> CliResult<Self> {
        if p == 0 {
            return Err(config_err("p: depth must be at least 1"));
        }
        let graph = problem.graph()?;
        let hamiltonian = Arc::new(maxcut_hamiltonian(&graph)?);
        Ok(Self {
            graph,
            hamiltonian,
            channel: noise.channel()?,
            p,
        })
    }

    pub fn from_config(cfg: &ExperimentConfig) -> CliResult<Self> {
        let problem = cfg.problem.as_ref().ok_or_else(|| config_err("problem: no graph given"))?;
        Self::new(problem, &cfg.noise, cfg.p)
    }

    pub fn noiseless(&self) -> QaoaObjective<f64> {
        QaoaObjective::new(self.hamiltonian.clone(), self.p)
    }

    /// The objective BO sees: noisy when a channel is configured.
    pub fn objective(&self) -> Box<dyn Objective<f64>> {
        match self.channel {
            Some(ch) => Box::new(NoisyQaoaObjective::new(self.hamiltonian.clone(), self.p, ch)),
            None => Box::new(self.noiseless()),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.graph.num_edges()
    }
}
