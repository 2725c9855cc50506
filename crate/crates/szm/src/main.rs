use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use szm::driver::{run_file, Options, Outcome};

#[derive(Parser)]
#[command(
    name = "szm",
    version,
    about = "Type checker and interpreter for System F with sized types"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check programs, then run their `eval` items.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Evaluate the value NAME after checking.
        #[arg(long, value_name = "NAME")]
        eval: Vec<String>,
        #[arg(long, default_value_t = 8)]
        unroll_depth: usize,
        #[arg(long, default_value_t = 100_000)]
        step_budget: usize,
        #[arg(long, default_value_t = 1_000_000)]
        fuel: usize,
        /// Write the proofs of accepted values as a LaTeX document.
        #[arg(long, value_name = "PATH")]
        proof_latex: Option<PathBuf>,
        #[arg(long)]
        verbose: bool,
        /// Number of files checked in parallel.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn run_all(files: &[PathBuf], opts: &Options, latex: bool, jobs: usize) -> Vec<Outcome> {
    if jobs <= 1 || files.len() <= 1 {
        return files.iter().map(|f| run_file(f, opts, latex)).collect();
    }
    let mut out: Vec<Option<Outcome>> = (0..files.len()).map(|_| None).collect();
    let chunk = files.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = files
            .chunks(chunk)
            .map(|fs| {
                s.spawn(move || {
                    fs.iter()
                        .map(|f| run_file(f, opts, latex))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut i = 0;
        for h in handles {
            for o in h.join().expect("checker thread panicked") {
                out[i] = Some(o);
                i += 1;
            }
        }
    });
    out.into_iter()
        .map(|o| o.expect("missing outcome"))
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Check {
        files,
        eval,
        unroll_depth,
        step_budget,
        fuel,
        proof_latex,
        verbose,
        jobs,
    } = cli.command;
    let opts = Options {
        step_budget,
        unroll_depth,
        fuel,
        eval,
        verbose,
    };
    let outcomes = run_all(&files, &opts, proof_latex.is_some(), jobs);
    let mut code = 0;
    let mut bodies = Vec::new();
    let (mut stdout, mut stderr) = (std::io::stdout().lock(), std::io::stderr().lock());
    for o in outcomes {
        let _ = stdout.write_all(o.stdout.as_bytes());
        let _ = stderr.write_all(o.stderr.as_bytes());
        code = code.max(o.code);
        bodies.extend(o.latex.into_iter().map(|(_, b)| b));
    }
    if let Some(path) = proof_latex {
        if let Err(e) = std::fs::write(&path, szm::latex::document(&bodies)) {
            let _ = writeln!(stderr, "{}: {}", path.display(), e);
            code = 2;
        }
    }
    ExitCode::from(code as u8)
}
