//! `flipzeros` command-line experiment runner.
//!
//! Exit codes: 0 success, 2 config error, 3 assertion or certificate
//! failure, 4 numerical failure budget exceeded.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use flipzeros::exec::Execution;
use flipzeros::harness::{self, ExperimentConfig, Theorem1Summary};
use flipzeros::roots::all_roots;
use flipzeros::{count_real, polygon, Error, Polynomial, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "flipzeros", version, about = "Zeros of random polynomials with flip-invariant coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment config (TOML, or JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Polynomial degree
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Output directory; results go to stdout when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (1 runs sequentially)
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw polynomials from the configured model
    Sample,
    /// Newton–Hadamard polygon of a polynomial file, or of sampled polynomials
    Vcount { input: Option<PathBuf> },
    /// Roots, real-zero count and curve counts
    Zeros { input: Option<PathBuf> },
    /// Curve-count ratio study
    Theorem1,
    /// Mean vertex count against 2·H_n
    CorollaryV,
    /// Sign-flip failure fractions
    Theorem2,
    /// Empirical Turán constant
    TuranB,
    /// Certificate sweep over random inputs
    Certify,
    /// Recompute a theorem1 summary from its CSV
    VerifyCsv {
        csv: PathBuf,
        /// Summary JSON (default: `<stem>_summary.json` next to the CSV)
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::from_path(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.master_seed = s;
    }
    if let Some(t) = cli.trials {
        cfg.trials = t;
    }
    if let Some(n) = cli.n {
        cfg.n = Some(n);
    }
    if let Some(w) = cli.workers {
        cfg.workers = Some(w);
        if w == 1 {
            cfg.execution = Execution::Sequential;
        }
    }
    Ok(cfg)
}

/// Where results go: files under `--out`, or stdout.
struct Sink<'a> {
    dir: Option<&'a Path>,
}

impl Sink<'_> {
    fn write(&self, name: &str, bytes: &[u8]) -> Result<()> {
        match self.dir {
            Some(d) => {
                fs::create_dir_all(d)?;
                fs::write(d.join(name), bytes)?;
            }
            None => io::stdout().write_all(bytes)?,
        }
        Ok(())
    }

    fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }
}

fn run(cli: &Cli) -> Result<()> {
    let mut cfg = load_config(cli)?;
    let sink = Sink { dir: cli.out.as_deref() };
    let format = cli.format.unwrap_or(Format::Json);
    let exec = cfg.execution;
    match &cli.command {
        Command::Sample => {
            cfg.trials = cli.trials.unwrap_or(1);
            let polys = harness::sample_polynomials(&cfg)?;
            match format {
                Format::Json => {
                    let rows: Vec<_> = polys
                        .iter()
                        .map(|(t, s, p)| serde_json::json!({"trial": t, "seed": s, "coeffs": p}))
                        .collect();
                    sink.json("samples.json", &rows)
                }
                Format::Csv => {
                    let mut out = String::from("trial,seed,k,re,im\n");
                    for (t, s, p) in &polys {
                        for (k, c) in p.coeffs().iter().enumerate() {
                            out.push_str(&format!("{t},{s},{k},{},{}\n", c.re, c.im));
                        }
                    }
                    sink.write("samples.csv", out.as_bytes())
                }
            }
        }
        Command::Vcount { input } => {
            let polys = inputs(&mut cfg, cli, input.as_deref())?;
            let mut rows = Vec::new();
            for (t, s, p) in &polys {
                rows.push((t, s, polygon(p)?));
            }
            match format {
                Format::Json => {
                    let rows: Vec<_> = rows
                        .iter()
                        .map(|(t, s, poly)| serde_json::json!({"trial": t, "seed": s, "polygon": poly}))
                        .collect();
                    sink.json("vcount.json", &rows)
                }
                Format::Csv => {
                    let mut out = String::from("trial,seed,V\n");
                    for (t, s, poly) in &rows {
                        out.push_str(&format!("{t},{s},{}\n", poly.vertex_count));
                    }
                    sink.write("vcount.csv", out.as_bytes())
                }
            }
        }
        Command::Zeros { input } => {
            let polys = inputs(&mut cfg, cli, input.as_deref())?;
            cfg.validate()?;
            let curves: Vec<_> = cfg.curves.iter().map(|c| c.build()).collect::<Result<_>>()?;
            let mut rows = Vec::new();
            for (t, s, p) in &polys {
                let roots = all_roots(p)?;
                let n_real = if p.is_real() && p.degree() > 0 { Some(count_real(p)?) } else { None };
                let counts: Vec<_> = cfg
                    .curves
                    .iter()
                    .zip(&curves)
                    .map(|(spec, c)| serde_json::json!({"curve": spec.label(), "count": roots.count_on_curves(c, cfg.curve_tol)}))
                    .collect();
                rows.push((t, s, roots, n_real, counts));
            }
            match format {
                Format::Json => {
                    let rows: Vec<_> = rows
                        .iter()
                        .map(|(t, s, roots, n_real, counts)| {
                            serde_json::json!({"trial": t, "seed": s, "roots": roots, "N_real": n_real, "curves": counts})
                        })
                        .collect();
                    sink.json("zeros.json", &rows)
                }
                Format::Csv => {
                    let mut out = String::from("trial,seed,re,im,multiplicity,residual\n");
                    for (t, s, roots, _, _) in &rows {
                        for c in roots.clusters() {
                            out.push_str(&format!("{t},{s},{},{},{},{}\n", c.re, c.im, c.multiplicity, c.residual));
                        }
                    }
                    sink.write("zeros.csv", out.as_bytes())
                }
            }
        }
        Command::Theorem1 => {
            let run = cfg.run(|| harness::run_theorem1(&cfg, exec))?;
            let format = cli.format.unwrap_or(Format::Csv);
            match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    run.write_csv(&mut buf)?;
                    sink.write("theorem1.csv", &buf)?;
                    if cli.out.is_some() {
                        sink.json("theorem1_summary.json", &run.summary)?;
                    } else {
                        eprintln!("{}", serde_json::to_string(&run.summary)?);
                    }
                }
                Format::Json => sink.json("theorem1.json", &run)?,
            }
            run.check()
        }
        Command::CorollaryV => {
            let run = cfg.run(|| harness::run_corollary_v(&cfg, exec))?;
            match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    run.write_csv(&mut buf)?;
                    sink.write("corollary_v.csv", &buf)?;
                    if cli.out.is_some() {
                        sink.json("corollary_v_summary.json", &run.summary)?;
                    } else {
                        eprintln!("{}", serde_json::to_string(&run.summary)?);
                    }
                }
                Format::Json => sink.json("corollary_v.json", &run.summary)?,
            }
            run.check()
        }
        Command::Theorem2 => {
            let report = cfg.run(|| harness::run_theorem2(&cfg, exec))?;
            sink.json("theorem2.json", &report)
        }
        Command::TuranB => {
            let report = cfg.run(|| harness::run_turan_b(&cfg, exec))?;
            sink.json("turan_b.json", &report)?;
            report.check()
        }
        Command::Certify => {
            let report = cfg.run(|| harness::run_certify(&cfg, exec))?;
            sink.json("certify.json", &report)?;
            for f in &report.failures {
                eprintln!(
                    "{} failed on trial {}: {}\n  coefficients: {}",
                    f.certificate,
                    f.trial,
                    f.detail,
                    serde_json::to_string(&f.coefficients)?
                );
            }
            report.check()
        }
        Command::VerifyCsv { csv, summary } => {
            let summary_path = summary.clone().unwrap_or_else(|| default_summary_path(csv));
            let text = fs::read_to_string(&summary_path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", summary_path.display())))?;
            let summary: Theorem1Summary = serde_json::from_str(&text)?;
            let file = fs::File::open(csv).map_err(|e| Error::Config(format!("cannot read {}: {e}", csv.display())))?;
            let rows = harness::read_trials_csv(file)?;
            let report = harness::verify_csv(&rows, &summary);
            sink.json("verify.json", &report)?;
            if report.ok {
                Ok(())
            } else {
                Err(Error::Assertion(format!("{} mismatches between CSV and summary", report.mismatches.len())))
            }
        }
    }
}

fn default_summary_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().and_then(|s| s.to_str()).unwrap_or("theorem1");
    csv.with_file_name(format!("{stem}_summary.json"))
}

/// A single polynomial from `input` (trial 0, seed 0), else sampled ones.
fn inputs(cfg: &mut ExperimentConfig, cli: &Cli, input: Option<&Path>) -> Result<Vec<(u64, u64, Polynomial)>> {
    match input {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            let p = Polynomial::parse(&text).map_err(|e| Error::Config(e.to_string()))?;
            Ok(vec![(0, 0, p)])
        }
        None => {
            cfg.trials = cli.trials.unwrap_or(1);
            harness::sample_polynomials(cfg)
        }
    }
}
