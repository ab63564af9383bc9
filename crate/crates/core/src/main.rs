use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use hopfcat::instance::Instance;
use hopfcat::pipeline::{run_build, run_verify, Suite, Target, DEFAULT_SEED};
use hopfcat::report::Report;
use hopfcat::Error;

#[derive(Parser)]
#[command(name = "hopfcat", version, about = "Build and verify Hopf categories from instance files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run law suites on an instance.
    Verify {
        path: PathBuf,
        /// `all` or a comma-separated list: backend, comonoids, functor, adapted,
        /// hopf, groupoid, lie, dy, uea, deform.
        #[arg(long, default_value = "all")]
        checks: String,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the JSON report on standard output.
        #[arg(long)]
        json: bool,
    },
    /// Run a constructor, re-verify its output and emit the structure maps.
    Build {
        path: PathBuf,
        /// hopf-monoid, hopf-category, deformed or groupoid.
        #[arg(long)]
        target: String,
        /// Truncation order for the deformed target.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

fn seed() -> Result<u64, Error> {
    match std::env::var("HOPFCAT_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("HOPFCAT_SEED must be an unsigned integer, got `{s}`"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn verify(path: &PathBuf, checks: &str) -> Report {
    let bytes = std::fs::read(path).unwrap_or_default();
    let mut report = Report::new("verify", &bytes);
    let run = || -> Result<(String, Vec<Suite>, hopfcat::verdict::Verdict), Error> {
        let suites = Suite::parse_list(checks)?;
        let inst = Instance::from_path(path)?;
        let v = run_verify(&inst, &suites, seed()?)?;
        Ok((inst.name, suites, v))
    };
    match run() {
        Ok((name, suites, v)) => {
            report.instance = name;
            report.suites = suites.iter().map(|s| s.label().to_string()).collect();
            report.with_verdict(v)
        }
        Err(e) => report.with_error(&e),
    }
}

fn build(path: &PathBuf, target: &str, order: Option<usize>) -> Report {
    let bytes = std::fs::read(path).unwrap_or_default();
    let mut report = Report::new(format!("build:{target}"), &bytes);
    let inst = match Target::parse(target).and_then(|t| Ok((t, Instance::from_path(path)?))) {
        Ok(x) => x,
        Err(e) => return report.with_error(&e),
    };
    let (t, inst) = inst;
    report.instance = inst.name.clone();
    match run_build(&inst, t, order) {
        Ok(out) => {
            report.structure = out.structure;
            report.with_verdict(out.verdict)
        }
        Err(e) => report.with_error(&e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (mut report, out, json) = match &cli.command {
        Command::Verify { path, checks, out, json } => (verify(path, checks), out.clone(), *json),
        Command::Build {
            path,
            target,
            order,
            out,
            json,
        } => (build(path, target, *order), out.clone(), *json),
    };
    report.timing_ms = start.elapsed().as_millis();
    let text = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
    if let Some(p) = out {
        if let Err(e) = std::fs::write(&p, format!("{text}\n")) {
            eprintln!("cannot write {}: {e}", p.display());
            return ExitCode::from(2);
        }
    }
    if json {
        println!("{text}");
    } else {
        eprint!("{}", report.summary_text());
    }
    ExitCode::from(report.exit_code() as u8)
}
