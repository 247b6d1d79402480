use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nystrom_bench::config::{parse_rank_range, MatrixSource, Precision, Selector};
use nystrom_bench::demo::demo_counterexample;
use nystrom_bench::fetch::{builtin_manifest, fetch_dataset, parse_manifest, FetchStatus, HttpDownloader};
use nystrom_bench::matrix::build_matrix;
use nystrom_bench::{emit_csv, run_sweep, write_csv, BenchError, ExperimentConfig, Result};
use nystrom_core::colselect::{diagnostics, greedy_order, qrcp_order, refined_select, uniform_select, IndexSet, Provenance};
use nystrom_core::nystrom::default_epsilon;

#[derive(Parser)]
#[command(name = "nystrom-bench", version, about = "Nyström approximation benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a rank sweep and write one CSV row per (rank, variant).
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Inclusive range a:b:step, overrides the config.
        #[arg(long)]
        ranks: Option<String>,
        #[arg(long)]
        precision: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; standard output when neither this nor the config
        /// names one.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Naive versus stabilized Nyström on diag(1, gamma^2, 0).
    DemoCounterexample {
        #[arg(long, default_value_t = 1e-8)]
        gamma: f64,
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
    },
    /// Download a data set into a cache directory.
    Fetch {
        #[arg(long)]
        dataset: String,
        #[arg(long)]
        cache: PathBuf,
        /// Manifest file (`name url sha256` per line) replacing the
        /// built-in list.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Print stability diagnostics of a selected index set.
    Diagnose {
        /// `snn`, `diag:GAMMA`, or a sweep config file whose matrix is used.
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value = "refined")]
        selector: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Truncation threshold; default 10 u ||A||_2.
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

fn sweep(
    config: PathBuf,
    ranks: Option<String>,
    precision: Option<String>,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> Result<()> {
    let mut cfg = ExperimentConfig::load(&config)?;
    if let Some(r) = ranks {
        cfg.ranks = parse_rank_range(&r)?;
    }
    if let Some(p) = precision {
        cfg.precision = p.parse::<Precision>()?;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let records = run_sweep(&cfg)?;
    match out.or(cfg.output) {
        Some(path) => emit_csv(&records, &path),
        None => write_csv(&records, std::io::stdout().lock()),
    }
}

fn parse_matrix_arg(spec: &str) -> Result<(MatrixSource, Option<u64>)> {
    if spec == "snn" {
        return Ok((MatrixSource::Snn, None));
    }
    if let Some(g) = spec.strip_prefix("diag:") {
        let gamma = g.parse().map_err(|_| BenchError::ConfigInvalid(format!("bad gamma {g:?}")))?;
        return Ok((MatrixSource::DiagCounterexample { gamma }, None));
    }
    let path = PathBuf::from(spec);
    if path.exists() {
        let cfg = ExperimentConfig::load(&path)?;
        return Ok((cfg.matrix, Some(cfg.seed)));
    }
    Err(BenchError::ConfigInvalid(format!("matrix must be snn, diag:GAMMA or a config file, got {spec:?}")))
}

fn diagnose(matrix: &str, rank: usize, selector: &str, seed: u64, epsilon: Option<f64>) -> Result<()> {
    let (source, cfg_seed) = parse_matrix_arg(matrix)?;
    let seed = cfg_seed.unwrap_or(seed);
    let a = build_matrix(&source, seed)?;
    let n = a.n();
    let j = match selector.parse::<Selector>()? {
        Selector::Greedy => IndexSet::new(greedy_order(&a, rank)?, n, Provenance::Greedy)?,
        Selector::Qrcp => IndexSet::new(qrcp_order(&a, rank)?, n, Provenance::Qrcp)?,
        Selector::Uniform => uniform_select(n, rank, seed)?,
        Selector::Refined => {
            let start = IndexSet::new(qrcp_order(&a, rank)?, n, Provenance::Qrcp)?;
            refined_select(&a, &start, nystrom_core::colselect::DEFAULT_DELTA)?
        }
    };
    let eps = match epsilon {
        Some(e) => e,
        None => default_epsilon(&a)?,
    };
    let d = diagnostics(&a, &j, eps)?;
    let (nf, r) = (n as f64, j.len() as f64);
    println!("n = {n}, |J| = {}, selector = {}, epsilon = {eps:e}", j.len(), j.provenance());
    println!("sigma_min(Q(J,:))      {:e}   (locally max-vol bound {:e})", d.sigma_min_sq, 1.0 / (1.0 + r * (nf - r)).sqrt());
    println!("proj_norm              {:e}   (bound {:e})", d.proj_norm, (nf * r).sqrt());
    println!("eps_proj_residual      {:e}   (bound {:e})", d.eps_proj_residual, 2.0 * eps * (nf * r).sqrt());
    println!("maxnorm_err            {:e}", d.maxnorm_err);
    println!("log det A(J,J)         {:e}", d.det_value);
    Ok(())
}

fn fetch(dataset: &str, cache: PathBuf, manifest: Option<PathBuf>) -> Result<()> {
    let entries = match manifest {
        Some(p) => parse_manifest(&std::fs::read_to_string(&p)?)?,
        None => builtin_manifest(),
    };
    let rep = fetch_dataset(dataset, &cache, &entries, &HttpDownloader)?;
    match rep.status {
        FetchStatus::Cached => println!("{}: cached at {}", rep.name, rep.path.display()),
        FetchStatus::Verified => println!("{}: downloaded and verified, {}", rep.name, rep.path.display()),
        FetchStatus::Unverified { sha256 } => {
            println!("{}: downloaded to {} (no reference checksum; sha256 {sha256})", rep.name, rep.path.display())
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Sweep { config, ranks, precision, seed, out } => sweep(config, ranks, precision, seed, out)?,
        Command::DemoCounterexample { gamma, delta } => {
            let rep = demo_counterexample(gamma, delta)?;
            println!("{rep}");
            return Ok(rep.passed());
        }
        Command::Fetch { dataset, cache, manifest } => fetch(&dataset, cache, manifest)?,
        Command::Diagnose { matrix, rank, selector, seed, epsilon } => diagnose(&matrix, rank, &selector, seed, epsilon)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(2)
        }
    }
}
