//! The experiment subcommands. Each renders its outputs in memory; the
//! caller decides where they go.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qaoa_bo::bo::export::CSV_COLUMNS;
use qaoa_bo::bo::{
    bo_information_gain, optimization_error, regret_bound_lemma11, run_bo, trace_information_gain,
    trace_to_csv_annotated, EtaSchedule,
};
use qaoa_bo::landscape::{default_oracle_resolution, landscape_csv, landscape_rows, oracle_max, OracleResult};
use qaoa_bo::simulator::Objective;
use qaoa_bo::{Error, Trace};

use crate::config::{ExperimentConfig, Instance, NoiseSpec, OracleSection};
use crate::error::{config_err, CliResult};
use crate::output::{csv_preamble, to_json, OutputSet, SCHEMA};

pub const DEFAULT_LANDSCAPE_RESOLUTION: usize = 64;

pub fn compute_oracle(
    objective: &dyn Objective<f64>,
    p: usize,
    section: &OracleSection,
    warm_starts: &[Vec<f64>],
) -> CliResult<OracleResult<f64>> {
    let res = section.resolution.unwrap_or_else(|| default_oracle_resolution(p));
    Ok(oracle_max(objective, res, section.refine, warm_starts)?)
}

/// Per-seed scalars of a finished run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub best_y: f64,
    pub best_f: f64,
    pub theta_plus_by_y: Vec<f64>,
    pub theta_plus_by_f: Vec<f64>,
    /// Final `r_T`; `None` when no BO steps ran.
    pub r_final: Option<f64>,
    /// Information gain of the BO steps.
    pub g_bo: f64,
    /// Information gain of every record, initial design included.
    pub g_total: f64,
    pub eta_final: Option<f64>,
    pub eta_clamped: bool,
    /// Regret bound from the measured gain and the final `η`.
    pub regret_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub t: usize,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub schema: u32,
    pub config: ExperimentConfig,
    pub eta_schedule: EtaSchedule,
    pub edge_count: usize,
    pub oracle: OracleResult<f64>,
    pub median_best_f: f64,
    /// Quantiles of `r_t` across seeds for each BO step.
    pub r_quantiles: Vec<Quantiles>,
    pub runs: Vec<SeedSummary>,
}

/// One trace file: the run plus everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceFile {
    pub schema: u32,
    pub config: ExperimentConfig,
    pub seed: u64,
    pub f_star: f64,
    pub trace: Trace,
}

pub struct RunOutcome {
    pub oracle: OracleResult<f64>,
    pub traces: Vec<Trace>,
    pub summary: RunSummary,
    pub outputs: OutputSet,
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let (lo, hi) = (h.floor() as usize, h.ceil() as usize);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    quantile(&v, 0.5)
}

pub fn summarize_seed(trace: &Trace, f_star: f64) -> CliResult<SeedSummary> {
    let last = trace.records.last().expect("trace is never empty");
    let r = optimization_error(trace, f_star)?;
    let bo = trace.bo_records();
    let g_bo = bo_information_gain(trace)?;
    let eta_final = bo.last().and_then(|r| r.eta);
    let regret_bound = match eta_final {
        Some(eta) if !bo.is_empty() => Some(regret_bound_lemma11(bo.len(), eta, g_bo, trace.config.measurements)?),
        _ => None,
    };
    Ok(SeedSummary {
        seed: trace.seed,
        best_y: trace.records[last.best_index].y,
        best_f: *trace.best_f()?.last().unwrap(),
        theta_plus_by_y: trace.theta_plus_by_y.clone(),
        theta_plus_by_f: trace.theta_plus_by_f.clone().unwrap_or_default(),
        r_final: r.last().copied(),
        g_bo,
        g_total: trace_information_gain(trace)?,
        eta_final,
        eta_clamped: bo.iter().any(|r| r.eta_clamped),
        regret_bound,
    })
}

fn trace_csv(trace: &Trace, f_star: f64, echo: &str) -> CliResult<String> {
    let seed = trace.seed.to_string();
    let fs = f_star.to_string();
    Ok(trace_to_csv_annotated(
        trace,
        Some(f_star),
        &[("experiment", echo), ("seed", &seed), ("f_star", &fs)],
    )?)
}

pub fn cmd_run(cfg: &ExperimentConfig) -> CliResult<RunOutcome> {
    cfg.validate()?;
    let inst = Instance::from_config(cfg)?;
    let objective = inst.objective();
    let obj = objective.as_ref();
    let oracle = compute_oracle(obj, cfg.p, &cfg.oracle, &[])?;
    let scale = inst.edge_count() as f64;

    let traces: Vec<Trace> = cfg
        .seeds
        .par_iter()
        .map(|&seed| run_bo(obj, Some(obj), &cfg.bo.to_config(seed, scale)))
        .collect::<Result<_, Error>>()?;

    let runs: Vec<SeedSummary> = traces
        .iter()
        .map(|t| summarize_seed(t, oracle.f_star))
        .collect::<CliResult<_>>()?;
    let mut r_quantiles = Vec::new();
    for t in 0..cfg.bo.steps {
        let mut col: Vec<f64> = traces
            .iter()
            .map(|tr| optimization_error(tr, oracle.f_star).map(|r| r[t]))
            .collect::<Result<_, Error>>()?;
        col.sort_by(f64::total_cmp);
        r_quantiles.push(Quantiles {
            t: t + 1,
            min: col[0],
            q25: quantile(&col, 0.25),
            median: quantile(&col, 0.5),
            q75: quantile(&col, 0.75),
            max: col[col.len() - 1],
        });
    }
    let best: Vec<f64> = runs.iter().map(|r| r.best_f).collect();
    let summary = RunSummary {
        schema: SCHEMA,
        config: cfg.clone(),
        eta_schedule: cfg.bo.eta,
        edge_count: inst.edge_count(),
        oracle: oracle.clone(),
        median_best_f: median(&best),
        r_quantiles,
        runs,
    };

    let echo = cfg.echo();
    let mut outputs = OutputSet::default();
    for trace in &traces {
        let file = TraceFile {
            schema: SCHEMA,
            config: cfg.clone(),
            seed: trace.seed,
            f_star: oracle.f_star,
            trace: trace.clone(),
        };
        outputs.add(format!("trace_seed{}.json", trace.seed), to_json(&file));
        outputs.add(format!("trace_seed{}.csv", trace.seed), trace_csv(trace, oracle.f_star, &echo)?);
    }
    outputs.add("summary.json", to_json(&summary));
    Ok(RunOutcome {
        oracle,
        traces,
        summary,
        outputs,
    })
}

/// One sweep cell and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRun {
    pub run_id: usize,
    pub n: usize,
    pub p: usize,
    pub q: f64,
    pub m: u64,
    pub seed: u64,
    pub f_star: f64,
    pub oracle_resolution: usize,
    pub summary: SeedSummary,
}

pub struct SweepOutcome {
    pub runs: Vec<SweepRun>,
    pub outputs: OutputSet,
}

fn axis<T: Clone>(name: &str, values: &Option<Vec<T>>, base: T) -> CliResult<Vec<T>> {
    match values {
        None => Ok(vec![base]),
        Some(v) if v.is_empty() => Err(config_err(format!("sweep.{name}: empty range"))),
        Some(v) => Ok(v.clone()),
    }
}

fn problem_n(cfg: &ExperimentConfig) -> CliResult<usize> {
    use crate::config::ProblemSpec;
    match cfg.problem.as_ref().ok_or_else(|| config_err("problem: no graph given"))? {
        ProblemSpec::Ring { n } | ProblemSpec::Regular { n, .. } => Ok(*n),
        ProblemSpec::EdgeList { .. } => Ok(cfg.problem.as_ref().unwrap().graph()?.num_vertices()),
    }
}

pub fn cmd_sweep(cfg: &ExperimentConfig) -> CliResult<SweepOutcome> {
    cfg.validate()?;
    let spec = cfg.sweep.as_ref().ok_or_else(|| config_err("sweep: no [sweep] section"))?;
    let base_problem = cfg.problem.clone().expect("validated");
    let ns = match &spec.n {
        None => vec![problem_n(cfg)?],
        some => axis("n", some, 0)?,
    };
    let ps = axis("p", &spec.p, cfg.p)?;
    let qs = axis("q", &spec.q, cfg.noise.strength())?;
    let ms = axis("M", &spec.m, cfg.bo.measurements)?;
    let total = [ns.len(), ps.len(), qs.len(), ms.len(), cfg.seeds.len()]
        .iter()
        .try_fold(1usize, |acc, &k| acc.checked_mul(k))
        .unwrap_or(usize::MAX);
    if total > spec.max_runs {
        return Err(Error::BudgetExceeded(format!("sweep has {total} runs, budget is {}", spec.max_runs)).into());
    }
    if ps.contains(&0) {
        return Err(config_err("sweep.p: depth must be at least 1"));
    }
    for &p in &ps {
        cfg.bo.to_config(0, 1.0).validate(p)?;
    }

    let noise_for = |q: f64| -> NoiseSpec {
        if spec.q.is_some() {
            NoiseSpec::Symmetric { q }
        } else {
            cfg.noise.clone()
        }
    };

    // Oracles per (n, q), deepest last, each warm-started from the
    // shallower optimum padded with zero angles.
    let mut sorted_ps = ps.clone();
    sorted_ps.sort_unstable();
    sorted_ps.dedup();
    let mut oracles: BTreeMap<(usize, usize, usize), OracleResult<f64>> = BTreeMap::new();
    for (ni, &n) in ns.iter().enumerate() {
        let problem = if spec.n.is_some() { base_problem.with_n(n)? } else { base_problem.clone() };
        for (qi, &q) in qs.iter().enumerate() {
            let mut prev: Option<Vec<f64>> = None;
            for &p in &sorted_ps {
                let inst = Instance::new(&problem, &noise_for(q), p)?;
                let warm: Vec<Vec<f64>> = prev
                    .iter()
                    .map(|t| {
                        let mut w = t.clone();
                        w.resize(2 * p, 0.0);
                        w
                    })
                    .collect();
                let o = compute_oracle(inst.objective().as_ref(), p, &cfg.oracle, &warm)?;
                prev = Some(o.theta_star.clone());
                oracles.insert((ni, qi, p), o);
            }
        }
    }

    let mut jobs = Vec::with_capacity(total);
    for (ni, &n) in ns.iter().enumerate() {
        for &p in &ps {
            for (qi, &q) in qs.iter().enumerate() {
                for &m in &ms {
                    for &seed in &cfg.seeds {
                        jobs.push((jobs.len(), ni, n, p, qi, q, m, seed));
                    }
                }
            }
        }
    }
    let echo = cfg.echo();
    let results: Vec<(SweepRun, String)> = jobs
        .par_iter()
        .map(|&(run_id, ni, n, p, qi, q, m, seed)| {
            let problem = if spec.n.is_some() { base_problem.with_n(n)? } else { base_problem.clone() };
            let inst = Instance::new(&problem, &noise_for(q), p)?;
            let objective = inst.objective();
            let obj = objective.as_ref();
            let mut section = cfg.bo.clone();
            section.measurements = m;
            let trace = run_bo(obj, Some(obj), &section.to_config(seed, inst.edge_count() as f64))?;
            let oracle = &oracles[&(ni, qi, p)];
            let summary = summarize_seed(&trace, oracle.f_star)?;
            let csv = trace_csv(&trace, oracle.f_star, &echo)?;
            let prefix = format!("{run_id},{n},{p},{q},{m},{seed},");
            let body: String = csv
                .lines()
                .filter(|l| !l.starts_with('#'))
                .skip(1)
                .map(|l| format!("{prefix}{l}\n"))
                .collect();
            let run = SweepRun {
                run_id,
                n,
                p,
                q,
                m,
                seed,
                f_star: oracle.f_star,
                oracle_resolution: oracle.resolution,
                summary,
            };
            Ok((run, body))
        })
        .collect::<CliResult<_>>()?;

    let mut long = csv_preamble(&echo);
    long.push_str(&format!("run_id,n,p,q,M,seed,{}\n", CSV_COLUMNS.join(",")));
    let mut short = csv_preamble(&echo);
    short.push_str("run_id,n,p,q,M,seed,f_star,oracle_resolution,best_f,best_y,r_T,g_T,eta_T,regret_bound\n");
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for (r, body) in &results {
        long.push_str(body);
        let s = &r.summary;
        short.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.run_id,
            r.n,
            r.p,
            r.q,
            r.m,
            r.seed,
            r.f_star,
            r.oracle_resolution,
            s.best_f,
            s.best_y,
            opt(s.r_final),
            s.g_bo,
            opt(s.eta_final),
            opt(s.regret_bound),
        ));
    }
    let mut outputs = OutputSet::default();
    outputs.add("sweep_long.csv", long);
    outputs.add("sweep_summary.csv", short);
    Ok(SweepOutcome {
        runs: results.into_iter().map(|(r, _)| r).collect(),
        outputs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub schema: u32,
    pub config: ExperimentConfig,
    pub noisy: bool,
    #[serde(flatten)]
    pub result: OracleResult<f64>,
}

pub fn cmd_oracle(cfg: &ExperimentConfig) -> CliResult<(OracleReport, OutputSet)> {
    if cfg.p == 0 {
        return Err(config_err("p: depth must be at least 1; there is nothing to optimize at p = 0"));
    }
    let inst = Instance::from_config(cfg)?;
    let result = compute_oracle(inst.objective().as_ref(), cfg.p, &cfg.oracle, &[])?;
    let report = OracleReport {
        schema: SCHEMA,
        config: cfg.clone(),
        noisy: inst.channel.is_some(),
        result,
    };
    let mut out = OutputSet::default();
    out.add("oracle.json", to_json(&report));
    Ok((report, out))
}

pub fn cmd_landscape(cfg: &ExperimentConfig, resolution: usize) -> CliResult<(String, OutputSet)> {
    if !(1..=2).contains(&cfg.p) {
        return Err(config_err("p: landscapes are exported for p = 1 or 2 only"));
    }
    let inst = Instance::from_config(cfg)?;
    let clean = inst.noiseless();
    let noisy = inst.channel.is_some().then(|| inst.objective());
    let rows = landscape_rows(&clean, noisy.as_deref(), resolution)?;
    let mut csv = csv_preamble(&cfg.echo());
    csv.push_str(&landscape_csv(&rows, 2 * cfg.p));
    let mut out = OutputSet::default();
    out.add("landscape.csv", csv.clone());
    Ok((csv, out))
}
