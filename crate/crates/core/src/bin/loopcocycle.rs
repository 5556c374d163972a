use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use loopcocycle::cli::{run, Command, Report, RunConfig, RunOptions};

#[derive(Parser)]
#[command(name = "loopcocycle", version, about = "Universal central extensions of equivariant map algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the multiloop algebra and report its grading and targets.
    Construct(Common),
    /// Check bracket and cocycle identities on seeded random samples.
    Verify(Common),
    /// Compute H² weight by weight and compare with the target.
    H2Scan(Common),
    /// Error ladders for polynomial approximation of smooth functions.
    DensityDemo(Common),
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory for `<command>.tsv` and `<command>.json`; tables go to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn write_outputs(dir: &PathBuf, report: &Report, elapsed: f64) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let stem = &report.command;
    std::fs::write(dir.join(format!("{stem}.tsv")), report.to_tsv())?;
    std::fs::write(dir.join(format!("{stem}.json")), report.to_json() + "\n")?;
    let timing = serde_json::json!({ "command": stem, "seconds": elapsed });
    std::fs::write(dir.join(format!("{stem}.timing.json")), timing.to_string() + "\n")?;
    if let Some(t) = report.table("errors") {
        let mut plot = String::new();
        for row in &t.rows {
            plot.push_str(&format!("{} {}\n", row[0], row[2..].join(" ")));
        }
        std::fs::write(dir.join(format!("{stem}.plot.dat")), plot)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Cmd::Construct(c) => (Command::Construct, c),
        Cmd::Verify(c) => (Command::Verify, c),
        Cmd::H2Scan(c) => (Command::H2Scan, c),
        Cmd::DensityDemo(c) => (Command::DensityDemo, c),
    };
    let start = Instant::now();
    let result = RunConfig::from_path(&common.config)
        .and_then(|cfg| run(command, &cfg, &RunOptions { jobs: common.jobs, seed: common.seed }));
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    match &common.out {
        Some(dir) => {
            if let Err(e) = write_outputs(dir, &report, elapsed) {
                eprintln!("error: cannot write to {}: {e}", dir.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", report.to_tsv()),
    }
    eprintln!("{}: {} ({elapsed:.3}s)", report.command, report.verdict);
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("FAILED {}: {}", c.name, c.detail);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
