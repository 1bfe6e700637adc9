use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use motifsearch_core::evo::{Search, SearchConfig};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_motifsearch"))
}

fn run(cmd: &str, config: Option<&str>, dir: &Path, extra: &[&str]) -> Output {
    let out = dir.join("out");
    let mut c = bin();
    c.arg(cmd).arg("--out").arg(&out);
    if let Some(text) = config {
        let path = dir.join("config.json");
        fs::write(&path, text).unwrap();
        c.arg("--config").arg(path);
    }
    c.args(extra).output().unwrap()
}

fn ok(o: &Output) {
    assert!(
        o.status.success(),
        "exit {:?}\n{}",
        o.status.code(),
        String::from_utf8_lossy(&o.stderr)
    );
}

fn read_csv(path: PathBuf) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(&path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

const TINY_SEARCH: &str = r#"{"budget_steps": 0, "pool_seed_count": 4, "sizes": [3, 4],
  "optimizer": {"restarts": 2, "max_evals": 300}}"#;

#[test]
fn search_with_zero_budget_writes_seeded_pool() {
    let dir = TempDir::new().unwrap();
    let o = run("search", Some(TINY_SEARCH), dir.path(), &["--seed", "5"]);
    ok(&o);
    let out = dir.path().join("out");
    let pool = fs::read_to_string(out.join("pool.jsonl")).unwrap();

    let mut cfg: SearchConfig = serde_json::from_str(TINY_SEARCH).unwrap();
    cfg.seed = 5;
    let expected = Search::new(cfg).unwrap().snapshot_jsonl();
    assert_eq!(pool, expected);
    assert_eq!(pool.lines().count(), 4);

    let (header, rows) = read_csv(out.join("log.csv"));
    assert_eq!(header, ["step", "best_fitness", "best_class", "pool_unique", "wallclock_s"]);
    assert!(rows.is_empty());
    let best = fs::read_to_string(out.join("best_genome.txt")).unwrap();
    assert!(!best.trim().is_empty());
    assert_eq!(fs::read_to_string(out.join("config.json")).unwrap(), TINY_SEARCH);
    let prov: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("provenance.json")).unwrap()).unwrap();
    assert_eq!(prov["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(prov["command"], "search");
    assert_eq!(prov["seed_override"], 5);
}

#[test]
fn search_log_has_one_row_per_step() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"budget_steps": 2, "pool_seed_count": 4, "sizes": [3],
      "optimizer": {"restarts": 1, "max_evals": 200}}"#;
    ok(&run("search", Some(cfg), dir.path(), &["--workers", "2"]));
    let (_, rows) = read_csv(dir.path().join("out/log.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "1");
    assert_eq!(rows[1][0], "2");
}

#[test]
fn invalid_configs_exit_with_code_two() {
    let cases = [
        ("search", r#"{"rho": 2.0}"#),
        ("search", r#"{"unknown_key": 1}"#),
        ("search", "not json"),
        ("eval", r#"{"sizes": []}"#),
        ("lmg-figures", r#"{"error_fields": []}"#),
        ("tfim-figures", r#"{"sizes": [4, 5]}"#),
        ("robustness", r#"{"seeds": []}"#),
    ];
    for (cmd, text) in cases {
        let dir = TempDir::new().unwrap();
        let o = run(cmd, Some(text), dir.path(), &[]);
        assert_eq!(o.status.code(), Some(2), "{cmd} {text}");
        assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
        assert!(!dir.path().join("out").exists(), "no output before validation");
    }
    let dir = TempDir::new().unwrap();
    let o = run("eval", None, dir.path(), &["--workers", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run("eval", None, dir.path(), &["--config", "/nonexistent/config.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn runtime_failure_exits_with_code_three() {
    let dir = TempDir::new().unwrap();
    let blocker = dir.path().join("out");
    fs::write(&blocker, "a file, not a directory").unwrap();
    let o = run("tfim-figures", Some(r#"{"sizes": [4], "fields": [0.0]}"#), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn eval_table() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"ansatz": "original", "model": "tfim", "J": 1.0, "h": 0.5, "sizes": [3, 4],
      "optimizer": {"restarts": 4, "max_evals": 1000}}"#;
    ok(&run("eval", Some(cfg), dir.path(), &[]));
    let (header, rows) = read_csv(dir.path().join("out/eval.csv"));
    assert_eq!(
        header,
        ["N", "energy", "exact_energy", "rel_err", "structural", "variational", "params"]
    );
    assert_eq!(rows.len(), 2);
    for r in &rows {
        let (e, exact) = (num(&r[1]), num(&r[2]));
        assert!(e >= exact - 1e-12);
        assert!(num(&r[3]) < 0.05);
        assert_eq!(r[4], "3.0");
        assert_eq!(r[5], "2");
    }
}

#[test]
fn lmg_tables() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"magnetisation_sizes": [12], "magnetisation_fields": [0.0, 0.3, 0.8],
      "error_sizes": [10, 25], "error_fields": [0.5, 1.0]}"#;
    ok(&run("lmg-figures", Some(cfg), dir.path(), &[]));
    let (h2, fig2) = read_csv(dir.path().join("out/fig2.csv"));
    assert_eq!(h2, ["N", "h", "m_rms_ansatz", "m_rms_exact"]);
    assert_eq!(fig2.len(), 3);
    let zero: Vec<_> = fig2.iter().filter(|r| num(&r[1]) == 0.0).collect();
    assert_eq!(zero.len(), 1);
    assert!((num(&zero[0][2]) - 0.5).abs() < 1e-9);
    assert!((num(&zero[0][3]) - 0.5).abs() < 1e-9);

    let (h3, fig3) = read_csv(dir.path().join("out/fig3.csv"));
    assert_eq!(h3, ["N", "h", "rel_err_symmetrized", "rel_err_meanfield"]);
    assert_eq!(fig3.len(), 4);
    for r in &fig3 {
        assert!(num(&r[3]) > num(&r[2]), "{r:?}");
        if r[0] == "25" && num(&r[1]) == 0.5 {
            assert!(num(&r[2]) <= 1e-5);
        }
    }
}

#[test]
fn tfim_table() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"sizes": [4, 16], "fields": [0.0, 0.5, 0.7, 0.9, 1.2]}"#;
    ok(&run("tfim-figures", Some(cfg), dir.path(), &[]));
    let (header, rows) = read_csv(dir.path().join("out/figA1.csv"));
    assert_eq!(
        header,
        ["N", "h", "corr_parity_ansatz", "corr_exact", "corr_meanfield", "corr_thermo_ansatz"]
    );
    assert_eq!(rows.len(), 10);
    let (hc, ans, exact, mf, thermo) = (
        col(&header, "h"),
        col(&header, "corr_parity_ansatz"),
        col(&header, "corr_exact"),
        col(&header, "corr_meanfield"),
        col(&header, "corr_thermo_ansatz"),
    );
    let h_c = (1.0 + 2f64.sqrt()) / 4.0;
    for r in &rows {
        let h = num(&r[hc]);
        if r[0] == "16" {
            assert!(r[exact].is_empty(), "no exact value beyond the state-vector limit");
        } else {
            let e = num(&r[exact]);
            assert!((0.0..=0.25 + 1e-12).contains(&e));
        }
        if h == 0.0 {
            assert!((num(&r[ans]) - 0.25).abs() < 1e-9);
            assert!((num(&r[mf]) - 0.25).abs() < 1e-12);
            if r[0] == "4" {
                assert!((num(&r[exact]) - 0.25).abs() < 1e-9);
            }
        }
        assert_eq!(num(&r[thermo]) == 0.0, h > h_c, "thermo at h={h}");
        assert_eq!(num(&r[mf]) == 0.0, h >= 1.0, "mean field at h={h}");
    }
}

#[test]
fn robustness_fractions_sum_to_one() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"search": {"budget_steps": 2, "pool_seed_count": 4, "sizes": [3],
        "optimizer": {"restarts": 1, "max_evals": 200}},
      "penalty_pairs": [[0.0, 0.0], [0.01, 0.01]], "seeds": [1, 2]}"#;
    ok(&run("robustness", Some(cfg), dir.path(), &["--workers", "2"]));
    let (header, rows) = read_csv(dir.path().join("out/robustness.csv"));
    assert_eq!(header, ["l1", "l2", "step", "class", "fraction"]);
    let mut sums = std::collections::BTreeMap::new();
    for r in &rows {
        *sums.entry((r[0].clone(), r[2].clone())).or_insert(0.0) += num(&r[4]);
    }
    assert_eq!(sums.len(), 4);
    for v in sums.values() {
        assert!((v - 1.0).abs() < 1e-12);
    }
    let (rh, runs) = read_csv(dir.path().join("out/robustness_runs.csv"));
    assert_eq!(
        rh,
        ["l1", "l2", "seed", "best_class", "best_fitness", "best_max_structural", "best_genome"]
    );
    assert_eq!(runs.len(), 4);
}

#[test]
fn figure_tables_are_reproducible() {
    let cfg = r#"{"sizes": [4, 6], "fields": [0.2, 0.6]}"#;
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    ok(&run("tfim-figures", Some(cfg), a.path(), &["--workers", "1"]));
    ok(&run("tfim-figures", Some(cfg), b.path(), &["--workers", "3"]));
    assert_eq!(
        fs::read(a.path().join("out/figA1.csv")).unwrap(),
        fs::read(b.path().join("out/figA1.csv")).unwrap()
    );
}
