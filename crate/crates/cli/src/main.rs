//! Batch front-end: reads a JSON job file, dispatches to the library, and
//! emits a canonical JSON report.
//!
//! Exit codes: 0 success, 2 schema error, 3 mathematical precondition
//! failure, 4 internal numerical failure.

mod job;
mod report;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use job::CliError;

#[derive(Parser)]
#[command(name = "lidstone", about = "Multi-point interpolation of entire functions", version)]
struct Args {
    /// Job file path, or `-` for stdin.
    jobfile: String,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for optional CSV side artifacts (series / partial sums).
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Ok(threads) = std::env::var("LIDSTONE_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(args: &Args) -> Result<(), CliError> {
    let text = if args.jobfile == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Schema(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(&args.jobfile)
            .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", args.jobfile)))?
    };
    let job = job::parse(&text)?;
    let (report, csv_tables) = job::execute(&job)?;

    let rendered = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Schema(format!("serialization failed: {e}")))?;
    match &args.out {
        Some(path) => std::fs::write(path, rendered + "\n")
            .map_err(|e| CliError::Schema(format!("cannot write report: {e}")))?,
        None => println!("{rendered}"),
    }

    if let Some(dir) = &args.csv {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Schema(format!("cannot create csv dir: {e}")))?;
        for (name, table) in csv_tables {
            std::fs::write(dir.join(name), table)
                .map_err(|e| CliError::Schema(format!("cannot write csv: {e}")))?;
        }
    }
    Ok(())
}
