use std::path::Path;
use std::process::{Command, Output};

use qaoa_bo::bo::trace_csv_rows;
use qaoa_bo_cli::commands::TraceFile;
use qaoa_bo_cli::config::ExperimentConfig;

fn qaoa(args: &[&str], out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qaoa-bo"));
    cmd.args(args).env_remove("QAOA_BO_OUT");
    if let Some(o) = out {
        cmd.arg("--out").arg(o);
    }
    cmd.output().unwrap()
}

fn stdout_json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

/// Data rows of a CSV with `#` comment lines and a header.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap_or(f64::NAN)).collect())
        .collect();
    (header, rows)
}

#[test]
fn run_outputs_are_reproducible_and_self_describing() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["run", "--graph", "ring:4", "--seeds", "0..3", "--T", "6"];
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    stdout_json(&qaoa(&args, Some(&a)));
    stdout_json(&qaoa(&args, Some(&b)));
    for name in ["trace_seed0.json", "trace_seed2.csv", "summary.json"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }

    let csv = std::fs::read_to_string(a.join("trace_seed1.csv")).unwrap();
    assert!(csv.starts_with("# schema: 1\n# config: "));
    assert!(csv.contains("# seed: 1\n"));
    let rows = trace_csv_rows(&csv).unwrap();
    assert_eq!(rows.len(), 3 + 6);

    let file: TraceFile = serde_json::from_str(&std::fs::read_to_string(a.join("trace_seed1.json")).unwrap()).unwrap();
    assert_eq!(file.schema, 1);
    assert_eq!(file.seed, 1);
    assert_eq!(file.config.seeds, vec![0, 1, 2]);
    assert_eq!(file.trace.records.len(), 9);

    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(a.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["runs"].as_array().unwrap().len(), 3);
    assert_eq!(summary["r_quantiles"].as_array().unwrap().len(), 6);
    assert!((summary["oracle"]["f_star"].as_f64().unwrap() - 3.0).abs() < 1e-2);
}

#[test]
fn invalid_delta_exits_with_config_code() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qaoa(&["run", "--graph", "ring:4", "--delta", "1.5"], Some(&tmp.path().join("x")));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("delta"));
    assert!(!tmp.path().join("x").exists(), "no partial output on failure");
}

#[test]
fn missing_graph_and_unknown_commands_exit_1() {
    assert_eq!(qaoa(&["run"], None).status.code(), Some(1));
    assert_eq!(qaoa(&["theory", "nonsense"], None).status.code(), Some(1));
    assert_eq!(qaoa(&["frobnicate"], None).status.code(), Some(1));
    assert_eq!(qaoa(&["run", "--graph", "ring:4", "--eta", "wild:3"], None).status.code(), Some(1));
}

#[test]
fn oracle_cases() {
    let tmp = tempfile::tempdir().unwrap();
    let v = stdout_json(&qaoa(&["oracle", "--graph", "ring:4", "--oracle-resolution", "64"], Some(tmp.path())));
    assert!((v["f_star"].as_f64().unwrap() - 3.0).abs() < 1e-2);
    assert_eq!(v["resolution"], 64);
    assert!(tmp.path().join("oracle.json").exists());

    let v = stdout_json(&qaoa(
        &["oracle", "--graph", "ring:4", "--q", "0.25", "--oracle-resolution", "16"],
        Some(tmp.path()),
    ));
    assert!((v["f_star"].as_f64().unwrap() - 2.0).abs() < 1e-12);

    assert_eq!(qaoa(&["oracle", "--graph", "ring:4", "--p", "0"], None).status.code(), Some(1));
    let o = qaoa(&["oracle", "--graph", "ring:4", "--p", "2", "--oracle-resolution", "100"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn landscape_export() {
    let tmp = tempfile::tempdir().unwrap();
    stdout_json(&qaoa(&["landscape", "--graph", "ring:4", "--resolution", "64"], Some(tmp.path())));
    let text = std::fs::read_to_string(tmp.path().join("landscape.csv")).unwrap();
    assert!(text.starts_with("# schema: 1\n"));
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["theta_1", "theta_2", "f"]);
    assert_eq!(rows.len(), 4096);
    assert_eq!(&rows[0][..2], &[0.0, 0.0]);
    assert!((rows[0][2] - 2.0).abs() < 1e-12);
    let max = rows.iter().map(|r| r[2]).fold(f64::MIN, f64::max);
    assert!((max - 3.0).abs() < 0.05, "{max}");

    stdout_json(&qaoa(&["landscape", "--graph", "ring:4", "--resolution", "32", "--q", "0.05"], Some(tmp.path())));
    let (header, rows) = csv_rows(&std::fs::read_to_string(tmp.path().join("landscape.csv")).unwrap());
    assert_eq!(header, ["theta_1", "theta_2", "f", "f_noisy"]);
    let (lo, hi) = rows.iter().fold((f64::MAX, f64::MIN), |(a, b), r| (a.min(r[2]), b.max(r[2])));
    for r in &rows {
        assert!(r[3] > lo && r[3] < hi);
        assert!((r[3] - 2.0).abs() <= (r[2] - 2.0).abs() + 1e-12);
    }

    assert_eq!(qaoa(&["landscape", "--graph", "ring:4", "--p", "3"], None).status.code(), Some(1));
}

#[test]
fn theory_calculators() {
    let v = stdout_json(&qaoa(&["theory", "depth-noiseless", "--epsilon", "0.5", "--nu", "2.5", "--T", "10000"], None));
    let (e2, nu, t) = (0.25_f64, 2.5_f64, 10000_f64);
    let want = 0.5 * (e2 - nu + ((e2 - nu).powi(2) + 4.0 * nu * e2 * (1.0 + (t / t.ln()).ln())).sqrt());
    assert!((v["value"].as_f64().unwrap() - want).abs() < 1e-12);

    let v = stdout_json(&qaoa(&["theory", "lipschitz-noisy", "--d", "2", "--n", "4", "--q", "0.1", "--p", "1"], None));
    assert!((v["value"].as_f64().unwrap() - 8.0 * 4f64.powf(3.5) * 1e-3).abs() < 1e-12);

    let v = stdout_json(&qaoa(&["theory", "depth-noisy", "--n", "64", "--d", "3", "--q", "0.1", "--T", "100"], None));
    assert_eq!(v["constants_defaulted"], true);
    assert_eq!(v["in_band"], true);
    let v = stdout_json(&qaoa(&["theory", "regret-bound", "--T", "1", "--eta", "1", "--gain", "1", "--M", "1"], None));
    let want = (8.0 / 5f64.ln()).sqrt() + std::f64::consts::PI.powi(2) / 6.0;
    assert!((v["value"].as_f64().unwrap() - want).abs() < 1e-12);
    assert_eq!(qaoa(&["theory", "lipschitz-noiseless", "--v-hat", "1", "--delta", "2"], None).status.code(), Some(1));
}

#[test]
fn sweep_over_noise() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("sweep.toml");
    std::fs::write(
        &cfg,
        "p = 1\nseeds = [0]\n[problem]\nkind = \"ring\"\nn = 4\n[bo]\nsteps = 3\n[sweep]\nq = [0.0, 0.02, 0.05, 0.1]\n",
    )
    .unwrap();
    stdout_json(&qaoa(&["sweep", "--config", cfg.to_str().unwrap()], Some(tmp.path())));
    let (header, rows) = csv_rows(&std::fs::read_to_string(tmp.path().join("sweep_summary.csv")).unwrap());
    assert_eq!(rows.len(), 4);
    let fs = header.iter().position(|h| h == "f_star").unwrap();
    assert!((rows[0][fs] - 3.0).abs() < 1e-2);
    assert!(rows.windows(2).all(|w| w[1][fs] < w[0][fs]), "noise flattens the optimum");
    let (long_header, long) = csv_rows(&std::fs::read_to_string(tmp.path().join("sweep_long.csv")).unwrap());
    assert_eq!(long.len(), 4 * (3 + 3));
    assert_eq!(long_header[..7], ["run_id", "n", "p", "q", "M", "seed", "t"]);
}

#[test]
fn sweep_over_depth_has_monotone_optimum() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("sweep.toml");
    std::fs::write(
        &cfg,
        "seeds = [0]\n[problem]\nkind = \"ring\"\nn = 4\n[bo]\nsteps = 1\n[oracle]\nresolution = 8\n[sweep]\np = [1, 2, 3]\n",
    )
    .unwrap();
    stdout_json(&qaoa(&["sweep", "--config", cfg.to_str().unwrap()], Some(tmp.path())));
    let (header, rows) = csv_rows(&std::fs::read_to_string(tmp.path().join("sweep_summary.csv")).unwrap());
    let fs = header.iter().position(|h| h == "f_star").unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.windows(2).all(|w| w[1][fs] >= w[0][fs]), "{rows:?}");
}

#[test]
fn sweep_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let write = |body: &str| {
        let p = tmp.path().join("s.toml");
        std::fs::write(&p, format!("[problem]\nkind = \"ring\"\nn = 4\n{body}")).unwrap();
        p
    };
    let empty = write("[sweep]\nq = []\n");
    assert_eq!(qaoa(&["sweep", "--config", empty.to_str().unwrap()], None).status.code(), Some(1));
    let big = write("[sweep]\nM = [1, 2, 3]\nmax_runs = 2\n");
    assert_eq!(qaoa(&["sweep", "--config", big.to_str().unwrap()], None).status.code(), Some(2));
}

#[test]
fn config_file_with_edge_list_and_env_out_dir() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("square.txt"), "4 4\n0 1\n1 2\n2 3\n0 3\n").unwrap();
    std::fs::write(
        tmp.path().join("exp.toml"),
        "p = 1\nseeds = [4]\n[problem]\nkind = \"edge_list\"\npath = \"square.txt\"\n[bo]\nsteps = 2\n",
    )
    .unwrap();
    let out = tmp.path().join("from_env");
    let o = Command::new(env!("CARGO_BIN_EXE_qaoa-bo"))
        .args(["run", "--config"])
        .arg(tmp.path().join("exp.toml"))
        .env("QAOA_BO_OUT", &out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("trace_seed4.json").exists());
}

#[test]
fn shipped_configs_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["cycle4.toml", "noise_sweep.toml"] {
        let cfg = ExperimentConfig::load(&root.join(name)).unwrap();
        cfg.validate().unwrap();
    }
}
