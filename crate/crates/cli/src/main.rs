use std::path::PathBuf;
use std::process::ExitCode;

use amalgrade::corpus::CORPUS;
use amalgrade::{run_text, InstanceReport, Options, RunReport};
use amalgrade_core::{Field, DEFAULT_BUDGET};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "amalgrade", version, about = "Grade, height and Cohen-Macaulay checks for amalgamated algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run instance files.
    Run {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the bundled corpus.
    Corpus {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Coefficient field for every ring: `qq` or `fp:P`.
    #[arg(long, value_parser = parse_field)]
    field: Option<Field>,
    /// Seed for monomial samples that do not fix one.
    #[arg(long, default_value_t = amalgrade_core::checkers::SAMPLE_SEED)]
    seed: u64,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// S-pair budget per Gröbner basis computation.
    #[arg(long, env = "AMALGRADE_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads (instances run in parallel).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn parse_field(s: &str) -> Result<Field, String> {
    match s {
        "qq" | "QQ" => Ok(Field::Rationals),
        _ => {
            let p = s.strip_prefix("fp:").ok_or("expected qq or fp:P")?;
            let p: u64 = p.parse().map_err(|_| format!("bad prime '{p}'"))?;
            Field::prime(p).map_err(|e| e.to_string())
        }
    }
}

fn print_summary(rep: &InstanceReport) {
    println!("{} [{:?}] {} ms", rep.instance, rep.status, rep.timing.total_ms);
    if let Some(e) = &rep.error {
        println!("  error: {e}");
    }
    for c in &rep.checks {
        let mark = match c.matches {
            Some(true) => "ok",
            Some(false) => "MISMATCH",
            None => "-",
        };
        let exp = c.expected.as_deref().map(|e| format!(" (expected {e})")).unwrap_or_default();
        println!("  {mark:8} {} -> {}{exp}", c.check, c.observed);
    }
}

fn main() -> ExitCode {
    // usage errors share the parse-error code so that 2 always means a verdict mismatch
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    let (inputs, common): (Vec<(String, String)>, Common) = match cli.command {
        Command::Run { files, common } => {
            let mut inputs = Vec::new();
            for f in files {
                match std::fs::read_to_string(&f) {
                    Ok(t) => inputs.push((f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(), t)),
                    Err(e) => {
                        eprintln!("{}: {e}", f.display());
                        return ExitCode::from(4);
                    }
                }
            }
            (inputs, common)
        }
        Command::Corpus { common } => (CORPUS.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect(), common),
    };
    let opts = Options { field: common.field, seed: common.seed, budget: common.budget };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(common.jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(3);
        }
    };
    let reports: Vec<InstanceReport> = pool.install(|| inputs.par_iter().map(|(name, text)| run_text(text, name, &opts)).collect());
    let run = RunReport::new(opts.seed, reports);
    for rep in &run.instances {
        print_summary(rep);
    }
    if let Some(path) = &common.json {
        if let Err(e) = std::fs::write(path, run.to_json()) {
            eprintln!("{}: {e}", path.display());
            return ExitCode::from(3);
        }
    }
    ExitCode::from(run.status().exit_code() as u8)
}
