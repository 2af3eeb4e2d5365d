use std::path::Path;
use std::process::{Command, Output};

use ffpage::cli::table::{table_curve, Table};

const BIN: &str = env!("CARGO_BIN_EXE_ffpage");

const SMALL_RFG: &str = r#"kind = "rfg-curve"
seed = 11
name = "small"
plot = true

[rfg-curve]
n = 16
samples = 40
sizes = [2, 4, 8, 12]
"#;

fn ffpage(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("FFPAGE_OUT_DIR");
    if let Some(p) = env_out {
        cmd.env("FFPAGE_OUT_DIR", p);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn list_experiments_names_every_kind() {
    let out = ffpage(&["list-experiments"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for kind in ["rfg-curve", "dyn-curve", "typicality", "variance", "moments", "classify", "qp", "oracle-check"] {
        assert!(text.contains(kind), "{kind} missing");
    }
}

#[test]
fn run_writes_table_sidecar_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL_RFG);
    let out_dir = dir.path().join("out");
    let out = ffpage(&["run", &cfg, "--out", out_dir.to_str().unwrap()], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let table = Table::read(&out_dir.join("small.csv")).unwrap();
    assert_eq!(table.get_meta("seed"), Some("11"));
    assert_eq!(table.get_meta("experiment"), Some("rfg-curve"));
    let hash = table.get_meta("config_sha256").unwrap();
    assert_eq!(hash, ffpage::cli::sha256_hex(SMALL_RFG));
    let curve = table_curve(&table).unwrap();
    assert_eq!(curve.points.len(), 4);

    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("small.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 11);
    assert_eq!(meta["config"], SMALL_RFG);
    assert_eq!(meta["config_sha256"], hash);
    assert!(meta["wall_clock_seconds"].as_f64().unwrap() >= 0.0);
    assert!(out_dir.join("small.series-rfg.csv").exists());
    let svg = std::fs::read_to_string(out_dir.join("small.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));
}

#[test]
fn env_var_sets_default_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL_RFG);
    let env_dir = dir.path().join("from-env");
    let out = ffpage(&["run", &cfg], Some(&env_dir));
    assert!(out.status.success());
    assert!(env_dir.join("small.csv").exists());
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL_RFG);
    let out_dir = dir.path().join("o");
    assert!(ffpage(&["run", &cfg, "--seed", "99", "--out", out_dir.to_str().unwrap()], None).status.success());
    let t = Table::read(&out_dir.join("small.csv")).unwrap();
    assert_eq!(t.get_meta("seed"), Some("99"));
}

#[test]
fn tables_are_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL_RFG);
    let mut tables = Vec::new();
    for threads in ["1", "3"] {
        let out_dir = dir.path().join(format!("t{threads}"));
        assert!(ffpage(&["run", &cfg, "--threads", threads, "--out", out_dir.to_str().unwrap()], None).status.success());
        tables.push(std::fs::read(out_dir.join("small.csv")).unwrap());
    }
    assert_eq!(tables[0], tables[1]);
}

#[test]
fn bad_config_exits_2_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let text = "kind = \"rfg-curve\"\nseed = 1\n\n[rfg-curve]\nn = 16\nsamples = 10\nsizes = [2, 40]\n";
    let cfg = write_config(dir.path(), "bad.toml", text);
    let out = ffpage(&["run", &cfg, "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.toml:7:"), "{err}");

    let cfg = write_config(dir.path(), "syntax.toml", "kind = \"rfg-curve\"\nseed = \n");
    let out = ffpage(&["run", &cfg], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("syntax.toml:2"));

    let out = ffpage(&["run", "/nonexistent/x.toml"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compare_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL_RFG);
    let out_dir = dir.path().join("o");
    assert!(ffpage(&["run", &cfg, "--out", out_dir.to_str().unwrap()], None).status.success());
    let a = out_dir.join("small.csv");
    let a = a.to_str().unwrap();

    let same = ffpage(&["compare", a, a, "--tol", "0"], None);
    assert_eq!(same.status.code(), Some(0));
    let text = String::from_utf8(same.stdout).unwrap();
    assert!(text.contains("max_abs_density_diff: 0") && text.trim_end().ends_with("PASS"));

    // Same grid, different sample: differs by Monte-Carlo noise.
    let out_b = dir.path().join("b");
    assert!(ffpage(&["run", &cfg, "--seed", "12", "--out", out_b.to_str().unwrap()], None).status.success());
    let b = out_b.join("small.csv");
    let fail = ffpage(&["compare", a, b.to_str().unwrap(), "--tol", "1e-12"], None);
    assert_eq!(fail.status.code(), Some(1));

    // Different grid.
    let series = out_dir.join("small.series-rfg.csv");
    let mismatch = ffpage(&["compare", a, series.to_str().unwrap(), "--tol", "1"], None);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn library_errors_map_to_exit_codes() {
    use ffpage::cli::RunError;
    use ffpage::Error;
    assert_eq!(RunError::Library(Error::Validation("x".into())).exit_code(), 2);
    assert_eq!(RunError::Library(Error::Invariant { name: "purity", detail: "x".into() }).exit_code(), 3);
    assert_eq!(RunError::Library(Error::Numerical("x".into())).exit_code(), 3);
    let msg = RunError::Library(Error::Invariant { name: "purity", detail: "drift 1e-3".into() }).to_string();
    assert!(msg.contains("purity"));
}

#[test]
fn every_checked_in_config_parses() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "toml") {
            ffpage::cli::ExperimentConfig::load(&p).unwrap_or_else(|e| panic!("{e}"));
            n += 1;
        }
    }
    assert!(n >= 10);
}
