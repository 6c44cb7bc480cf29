use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;

use rigphase::branching::{estimate_extinction, extinction_probability_with};
use rigphase::discovery::VertexIndex;
use rigphase::harness::{read_csv, write_csv};
use rigphase::model::DEFAULT_EPSILON_C;
use rigphase::{
    build_weights, component_sizes, project, regime, run_sweep, sample_bipartite, verify_theorems,
    AttributeWeights, BipartiteSample, Explorer, Hypotheses, SolverOptions, SweepConfig,
    WeightSpec,
};

#[derive(Parser)]
#[command(
    name = "rigphase",
    version,
    about = "Random intersection graph phase transition experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the bipartite vertex/attribute graph of a weight spec.
    Sample {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the projected graph as a "u v" edge list.
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Component size summary of a sample.
    Components {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Step table of the discovery process from one vertex.
    Discover {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        start: usize,
        /// Weight spec the sample was drawn from; needed for the W column.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        max_steps: Option<usize>,
        /// Print the full trace as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Extinction probability of the associated branching process.
    Extinction {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_iter: usize,
    },
    /// Monte Carlo extinction frequency of the branching process.
    GwSim {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        runs: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        population_cap: u64,
        #[arg(long, default_value_t = 10_000)]
        generation_cap: u64,
    },
    /// Phase classification and hypothesis check of a weight spec.
    Regime {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EPSILON_C)]
        epsilon_c: f64,
    },
    /// Run a criticality sweep.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[arg(long)]
        out_report: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Check sweep records against the size laws.
    Verify {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        hypotheses: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_weights(path: &Path) -> anyhow::Result<AttributeWeights> {
    let spec = WeightSpec::from_json(&read_text(path)?)
        .with_context(|| format!("parsing {}", path.display()))?;
    build_weights(&spec).with_context(|| format!("building weights from {}", path.display()))
}

fn load_sample(path: &Path) -> anyhow::Result<BipartiteSample> {
    BipartiteSample::from_json(&read_text(path)?)
        .with_context(|| format!("parsing {}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Sample {
            spec,
            seed,
            out,
            edges,
        } => {
            let w = load_weights(&spec)?;
            let b = sample_bipartite(&w, seed);
            write_file(&out, &b.to_json())?;
            if let Some(path) = edges {
                write_file(&path, &project(&b).to_edge_list())?;
            }
            println!(
                "n = {}, m = {}, memberships = {}",
                b.n(),
                b.m(),
                b.edge_count()
            );
        }
        Command::Components { input } => {
            println!("{}", component_sizes(&load_sample(&input)?).to_json());
        }
        Command::Discover {
            input,
            start,
            spec,
            max_steps,
            json,
        } => {
            let b = load_sample(&input)?;
            if b.m() == 0 {
                bail!("{} has no attributes", input.display());
            }
            let (w, have_weights) = match &spec {
                Some(path) => (load_weights(path)?, true),
                None => (AttributeWeights::constant(b.n(), 0.0, b.m())?, false),
            };
            let index = VertexIndex::build(&b);
            let trace = Explorer::new(&b, &index, &w)?.trace(start, max_steps)?;
            if json {
                println!("{}", trace.to_json());
                return Ok(ExitCode::SUCCESS);
            }
            let mut out = std::io::stdout().lock();
            writeln!(out, "{:>8} {:>8} {:>14} {:>8}", "i", "X_i", "W_i", "|U_i|")?;
            for s in &trace.steps {
                let w_col = if have_weights {
                    format!("{:.6e}", s.attr_weight)
                } else {
                    "-".to_string()
                };
                writeln!(
                    out,
                    "{:>8} {:>8} {:>14} {:>8}",
                    s.step, s.new_vertices, w_col, s.unsaturated
                )?;
            }
            if trace.exhausted {
                writeln!(
                    out,
                    "component size {} after {} steps",
                    trace.component_size, trace.terminated_at
                )?;
            } else {
                writeln!(
                    out,
                    "{} vertices discovered in {} steps (step limit reached)",
                    trace.component_size, trace.terminated_at
                )?;
            }
        }
        Command::Extinction {
            spec,
            tol,
            max_iter,
        } => {
            if tol.is_nan() || tol <= 0.0 || max_iter == 0 {
                bail!("--tol must be positive and --max-iter at least 1");
            }
            let w = load_weights(&spec)?;
            let sol = extinction_probability_with(
                &w,
                &SolverOptions {
                    tol,
                    max_iter,
                    ..SolverOptions::default()
                },
            );
            #[derive(Serialize)]
            struct Out {
                rho: f64,
                iterations: usize,
                residual: f64,
                critical_band: bool,
            }
            print_json(&Out {
                rho: sol.rho,
                iterations: sol.iterations,
                residual: sol.residual,
                critical_band: sol.critical_band,
            })?;
            if !sol.converged {
                eprintln!("warning: no convergence within {max_iter} iterations");
            }
        }
        Command::GwSim {
            spec,
            runs,
            seed,
            population_cap,
            generation_cap,
        } => {
            if runs == 0 {
                bail!("--runs must be at least 1");
            }
            let w = load_weights(&spec)?;
            print_json(&estimate_extinction(
                &w,
                runs,
                seed,
                population_cap,
                generation_cap,
            ))?;
        }
        Command::Regime { spec, epsilon_c } => {
            print_json(&regime(&load_weights(&spec)?, epsilon_c)?)?;
        }
        Command::Sweep {
            config,
            out_csv,
            out_report,
            workers,
        } => {
            let cfg = SweepConfig::load(&config)?;
            let csv_path = out_csv.or_else(|| cfg.outputs.csv.clone());
            let report_path = out_report.or_else(|| cfg.outputs.report.clone());
            let Some(csv_path) = csv_path else {
                bail!("no CSV output: pass --out-csv or set outputs.csv")
            };
            let out = run_sweep(&cfg, workers)?;
            write_csv(&out.records, &csv_path)?;
            let report = out.report(&cfg);
            if let Some(path) = report_path {
                write_file(&path, &serde_json::to_string_pretty(&report)?)?;
            }
            println!(
                "{} records, {} failed trials, verification {}",
                out.records.len(),
                out.failures.len(),
                if report.verification.passed {
                    "passed"
                } else {
                    "failed"
                }
            );
            if !out.failures.is_empty() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Verify { csv, hypotheses } => {
            let records = read_csv(&csv)?;
            let hyp = Hypotheses::load(&hypotheses)?;
            let report = verify_theorems(&records, &hyp);
            print_json(&report)?;
            if !report.passed {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
