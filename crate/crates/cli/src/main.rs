//! `prodec`: sweep, selftest and inspect for RS × LDPC product codes.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 selftest failure.

mod selftest;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use prodec_core::sim::{write_csv, CodeSelect, SimConfig, Simulator};
use prodec_core::{Error, LdpcCode, ProductCode, RsCode};

#[derive(Parser)]
#[command(name = "prodec", version, about = "Product codes of RS binary images and LDPC codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a Monte-Carlo BER sweep described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV output path (default: config `out`, else stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed, overriding the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Golden checks: permutation decoding and error detection examples, PG ranks.
    Selftest,
    /// Print code parameters, e.g. `cpg`, `product-m3-s3`, `rs-m5`.
    Inspect {
        #[arg(long)]
        code: String,
    },
}

enum Failure {
    Config(String),
    Io(String),
    Selftest,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Io(msg) => Failure::Io(msg),
            other => Failure::Config(other.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl Fn(io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn sweep(config: &Path, out: Option<PathBuf>, seed: Option<u64>, jobs: Option<usize>) -> Result<(), Failure> {
    let text = fs::read_to_string(config)
        .map_err(|e| Failure::Config(format!("cannot read config {}: {e}", config.display())))?;
    let mut cfg = SimConfig::parse(&text)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(o) = out {
        cfg.out = Some(o.to_string_lossy().into_owned());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Config(format!("thread pool: {e}")))?;
    let sim = Simulator::new(cfg.clone())?;
    let records = pool.install(|| {
        sim.sweep_with(|r| {
            let (lo, hi) = r.ci();
            eprintln!(
                "snr {} dB, {} SHEs: {} errors / {} bits, BER {:.3e} [{lo:.2e}, {hi:.2e}], FER {}/{}",
                r.snr_db,
                r.she_count,
                r.bit_errors,
                r.bits,
                r.ber(),
                r.frame_errors,
                r.frames
            );
        })
    })?;

    let mut csv = Vec::new();
    write_csv(&records, &mut csv)?;
    match &cfg.out {
        Some(path) => {
            let path = PathBuf::from(path);
            fs::write(&path, &csv).map_err(io_err(&path))?;
            let mut echo = path.clone().into_os_string();
            echo.push(".cfg");
            let echo = PathBuf::from(echo);
            fs::write(&echo, cfg.to_config_string()).map_err(io_err(&echo))?;
        }
        None => io::stdout()
            .write_all(&csv)
            .map_err(|e| Failure::Io(format!("stdout: {e}")))?,
    }
    Ok(())
}

fn inspect(id: &str) -> Result<(), Failure> {
    match CodeSelect::parse_id(id)? {
        CodeSelect::Cpg => print_product(&ProductCode::c_pg()),
        CodeSelect::Product { m, s } => print_product(&ProductCode::with_pg(m, s)?),
        CodeSelect::RandomLdpc { n, k, col_weight, seed } => {
            print_ldpc(&LdpcCode::random(n, k, col_weight, seed)?)
        }
        CodeSelect::Rs { m } => {
            let rs = RsCode::new(m)?;
            println!("code: RS({}, {}) over GF(2^{m})", rs.n(), rs.k());
            println!("binary image: {} x {} bits", rs.m(), rs.n());
            println!("rate: {:.4}", rs.k() as f64 / rs.n() as f64);
        }
    }
    Ok(())
}

fn print_ldpc(c: &LdpcCode) {
    println!("ldpc: {} n={} k={} rank={}", c.label(), c.n(), c.k(), c.rank());
    println!("column weight: {}", c.col_weight());
    println!("row weight: {}", c.row_weight());
    if let Some(d) = c.d_min_claimed() {
        println!("minimum distance (construction bound): {d}");
    }
}

fn print_product(p: &ProductCode) {
    let rs = p.rs();
    println!("rows code: RS({}, {}) over GF(2^{}), binary images", rs.n(), rs.k(), rs.m());
    print_ldpc(p.ldpc());
    println!("array: {} rows x {} columns", p.n2(), p.n1());
    println!("length: {}", p.length());
    println!("images: {}, zero rows: {}", p.n_images(), p.pad_rows().len());
    println!("payload bits: {}", p.payload_bits());
    println!("rate: {:.4}", p.rate());
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Sweep { config, out, seed, jobs } => sweep(&config, out, seed, jobs),
        Cmd::Selftest => {
            let checks = selftest::run();
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if checks.iter().all(|c| c.passed) {
                Ok(())
            } else {
                Err(Failure::Selftest)
            }
        }
        Cmd::Inspect { code } => inspect(&code),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Selftest) => ExitCode::from(3),
    }
}
