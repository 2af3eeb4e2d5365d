//! The `ffpage` command-line front end.

pub mod config;
pub mod experiments;
pub mod plot;
pub mod table;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;
use sha2::{Digest, Sha256};

pub use config::{ConfigError, ExperimentConfig, ExperimentKind};
use table::{compare_curves, table_curve, Table};

use crate::error::Error;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "FFPAGE_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "results";

/// Exit status for a failed comparison.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for invalid input or an unreadable file.
pub const EXIT_INVALID: i32 = 2;
/// Exit status for a numerical failure inside an experiment.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ffpage", version, about = "Free-fermion Page curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (0 = one per core); overrides the config.
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two Page-curve tables point by point in entropy density.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        tol: f64,
    },
    /// List the experiment kinds a config can name.
    ListExperiments,
}

/// What a successful run wrote.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub files: Vec<PathBuf>,
    pub summary: serde_json::Value,
    pub wall_clock_seconds: f64,
}

/// Why a run failed, with the exit status it maps to.
#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Library(Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_INVALID,
            RunError::Library(Error::Validation(_)) => EXIT_INVALID,
            RunError::Library(_) => EXIT_NUMERICAL,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Library(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Library(e)
    }
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Output directory: `--out`, then the config's `output`, then the
/// environment override, then `results`.
pub fn resolve_out_dir(cli_out: Option<&Path>, cfg: &ExperimentConfig) -> PathBuf {
    if let Some(p) = cli_out {
        return p.to_path_buf();
    }
    if let Some(p) = &cfg.output {
        return PathBuf::from(p);
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from(DEFAULT_OUT_DIR),
    }
}

/// Runs `cfg` and writes `<name>.csv`, companion tables, `<name>.meta.json`
/// and, if requested, `<name>.svg` into `out_dir`.
pub fn run_config(cfg: &ExperimentConfig, threads: usize, out_dir: &Path) -> Result<RunRecord, RunError> {
    let started = Instant::now();
    let started_at = chrono::Utc::now();
    let outcome = crate::parallel::with_threads(threads, || experiments::run_experiment(cfg))??;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::Validation(format!("cannot create {}: {e}", out_dir.display())))?;

    let hash = sha256_hex(&cfg.source_text);
    let mut files = Vec::new();
    for (suffix, mut t) in outcome.tables {
        let mut meta = vec![
            ("generator".to_string(), format!("ffpage {}", crate::VERSION)),
            ("experiment".to_string(), cfg.kind.name().to_string()),
            ("config_sha256".to_string(), hash.clone()),
            ("seed".to_string(), cfg.seed.to_string()),
            ("units".to_string(), "entropy in bits; f = N_A / N; density = entropy / N".to_string()),
        ];
        meta.append(&mut t.meta);
        t.meta = meta;
        let file = match suffix {
            None => format!("{}.csv", cfg.name),
            Some(s) => format!("{}.{s}.csv", cfg.name),
        };
        let path = out_dir.join(file);
        t.write(&path)?;
        files.push(path);
    }
    if cfg.plot && !outcome.curves.is_empty() {
        let path = out_dir.join(format!("{}.svg", cfg.name));
        std::fs::write(&path, plot::render_svg(&cfg.name, &outcome.curves))
            .map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display())))?;
        files.push(path);
    }
    let wall = started.elapsed().as_secs_f64();
    let meta_path = out_dir.join(format!("{}.meta.json", cfg.name));
    let record = json!({
        "generator": "ffpage",
        "version": crate::VERSION,
        "experiment": cfg.kind.name(),
        "name": cfg.name,
        "seed": cfg.seed,
        "threads": threads,
        "config_file": cfg.source_name,
        "config_sha256": hash,
        "config": cfg.source_text,
        "started_at": started_at.to_rfc3339(),
        "completed_at": chrono::Utc::now().to_rfc3339(),
        "wall_clock_seconds": wall,
        "files": files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect::<Vec<_>>(),
        "summary": outcome.summary,
    });
    std::fs::write(&meta_path, serde_json::to_string_pretty(&record).unwrap() + "\n")
        .map_err(|e| Error::Validation(format!("cannot write {}: {e}", meta_path.display())))?;
    files.push(meta_path);
    Ok(RunRecord { files, summary: record["summary"].clone(), wall_clock_seconds: wall })
}

/// Parses arguments, executes, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { 0 };
        }
    };
    match cli.command {
        Command::ListExperiments => {
            for k in ExperimentKind::ALL {
                println!("{:<14} {}", k.name(), k.description());
            }
            0
        }
        Command::Run { config, seed, threads, out } => {
            let cfg = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_INVALID;
                }
            };
            let cfg = match seed {
                Some(s) => cfg.with_seed(s),
                None => cfg,
            };
            let threads = threads.unwrap_or(cfg.threads);
            let out_dir = resolve_out_dir(out.as_deref(), &cfg);
            match run_config(&cfg, threads, &out_dir) {
                Ok(r) => {
                    for f in &r.files {
                        println!("wrote {}", f.display());
                    }
                    println!("summary: {}", r.summary);
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Command::Compare { a, b, tol } => {
            let load = |p: &Path| Table::read(p).and_then(|t| table_curve(&t));
            let r = load(&a).and_then(|ca| load(&b).and_then(|cb| compare_curves(&ca, &cb, tol)));
            match r {
                Ok(c) => {
                    println!("n_a,abs_density_diff");
                    for (k, d) in c.n_a.iter().zip(&c.abs_diff) {
                        println!("{k},{d}");
                    }
                    println!("max_abs_density_diff: {}", c.max_diff);
                    println!("tolerance: {}", c.tolerance);
                    println!("{}", if c.pass { "PASS" } else { "FAIL" });
                    if c.pass {
                        0
                    } else {
                        EXIT_FAIL
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_INVALID
                }
            }
        }
    }
}
