use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sdg_cli::{plot_csv, run, Mode, RunConfig, RunError, RunOptions};
use sdg_core::Execution;

#[derive(Parser)]
#[command(name = "sdg", version, about = "Frenet IFE / SDG interface solver studies")]
struct Cli {
    /// Worker threads for the parallel loops (defaults to all cores).
    #[arg(long, global = true, env = "SDG_THREADS")]
    threads: Option<usize>,
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble and solve every grid point, then measure errors.
    Solve(StudyArgs),
    /// Project the exact solution onto the space at every grid point.
    Project(StudyArgs),
    /// Tabulate DG / SDG / CG degree-of-freedom counts.
    Dofs(StudyArgs),
    /// Render a results CSV as a log-log SVG.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "")]
        title: String,
    },
}

#[derive(clap::Args)]
struct StudyArgs {
    #[arg(long)]
    config: PathBuf,
    /// Write timing columns as zero so outputs are byte-identical across runs.
    #[arg(long)]
    deterministic: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn study(args: StudyArgs, mode: Mode, exec: Execution) -> Result<(), RunError> {
    let config = RunConfig::load(&args.config)?;
    let options = RunOptions { out: args.out, deterministic: args.deterministic, exec };
    let summary = run(&config, mode, &options)?;
    print!("{}", summary.rates);
    if summary.failures > 0 {
        eprintln!("{} of {} grid points failed; see the error column", summary.failures, summary.rows);
    }
    println!("wrote {}", summary.dir.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = sdg_core::exec::configure_threads(t) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let result = match cli.command {
        Command::Solve(a) => study(a, Mode::Solve, exec),
        Command::Project(a) => study(a, Mode::Project, exec),
        Command::Dofs(a) => study(a, Mode::Dofs, exec),
        Command::Plot { csv, out, title } => std::fs::read_to_string(&csv)
            .map_err(|e| RunError::Runtime(format!("cannot read {}: {e}", csv.display())))
            .and_then(|text| plot_csv(&text, &title))
            .and_then(|svg| std::fs::write(&out, svg).map_err(|e| RunError::Runtime(format!("cannot write {}: {e}", out.display())))),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ RunError::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e @ RunError::Runtime(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
