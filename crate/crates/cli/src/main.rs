use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use pancake_core::connectivity::{certify_connectivity, ModeRequest};
use pancake_core::suite::{self, Suite, SuiteOptions};
use pancake_core::PancakeGraph;

const BUDGET_ENV: &str = "PANCAKE_LAB_BUDGET_SECS";

#[derive(Parser)]
#[command(name = "pancake-lab", version, about = "Build pancake graphs and verify their structure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write P_n as JSON or as an edge list.
    Build {
        #[arg(long)]
        n: usize,
        /// Output file (`-` for stdout).
        #[arg(long, default_value = "-")]
        emit: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run verification suites, or print one module's certificate.
    Verify {
        /// Print the certificate of a single module instead of a suite report.
        #[arg(value_enum)]
        module: Option<Module>,
        #[arg(long)]
        n: usize,
        /// connectivity, domination, automorphisms, structure, thm31 or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Allow the n = 7 enumerations.
        #[arg(long)]
        deep: bool,
        /// Require exhaustive connectivity certificates.
        #[arg(long)]
        exhaustive: bool,
        /// Run suites concurrently.
        #[arg(long)]
        parallel: bool,
        /// Report file (`-` for stdout).
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Edgelist,
}

#[derive(Clone, Copy, ValueEnum)]
enum Module {
    Connectivity,
    Domination,
    Automorphisms,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Build { n, emit, format } => {
            let g = PancakeGraph::build(n)?;
            let mut out = open_output(&emit)?;
            match format {
                Format::Json => {
                    serde_json::to_writer(&mut out, &g.export())?;
                    writeln!(out)?;
                }
                Format::Edgelist => g.write_edge_list(&mut out)?,
            }
            out.flush()?;
            Ok(0)
        }
        Command::Verify { module: Some(module), n, exhaustive, out, .. } => {
            let value = module_certificate(module, n, exhaustive)?;
            write_json(&out, &serde_json::to_string_pretty(&value)?)?;
            Ok(0)
        }
        Command::Verify { module: None, n, suite, deep, exhaustive, parallel, out } => {
            let Some(suites) = Suite::parse(&suite) else {
                bail!("unknown suite `{suite}`");
            };
            let options = SuiteOptions { deep, exhaustive, parallel, budget: budget_from_env()? };
            let report = suite::run_suite(n, &suites, &options)?;
            write_json(&out, &serde_json::to_string_pretty(&report)?)?;
            for result in &report.suites {
                if let Some(reason) = &result.refusal {
                    eprintln!("refused: {reason}");
                }
            }
            Ok(report.exit_code() as u8)
        }
    }
}

fn module_certificate(module: Module, n: usize, exhaustive: bool) -> Result<serde_json::Value> {
    let g = PancakeGraph::build(n)?;
    Ok(match module {
        Module::Connectivity => {
            let request = if exhaustive { ModeRequest::Exhaustive } else { ModeRequest::Auto };
            serde_json::to_value(certify_connectivity(&g, request)?)?
        }
        Module::Domination => suite::domination_certificate(&g)?.1,
        Module::Automorphisms => suite::automorphism_certificate(&g)?.2,
    })
}

fn budget_from_env() -> Result<Option<Duration>> {
    let Ok(raw) = std::env::var(BUDGET_ENV) else {
        return Ok(None);
    };
    let secs: f64 = raw.trim().parse().with_context(|| format!("{BUDGET_ENV}={raw:?} is not a number"))?;
    if !secs.is_finite() || secs <= 0.0 {
        bail!("{BUDGET_ENV} must be positive, got {raw}");
    }
    Ok(Some(Duration::from_secs_f64(secs)))
}

fn open_output(path: &Path) -> Result<Box<dyn Write>> {
    if path == Path::new("-") {
        return Ok(Box::new(BufWriter::new(io::stdout().lock())));
    }
    let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(Box::new(BufWriter::new(file)))
}

fn write_json(path: &Path, body: &str) -> Result<()> {
    let mut out = open_output(path)?;
    out.write_all(body.as_bytes())?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}
