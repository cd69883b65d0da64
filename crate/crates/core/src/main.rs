use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ordinal_ramsey::harness::{color_of, gen_prefix, run_pipeline, verify_trace, Pipeline, PipelineConfig, Trace};
use ordinal_ramsey::orders::BUILTIN_NAMES;

#[derive(Parser)]
#[command(name = "ordinal-ramsey", version, about = "Ramsey-type pipelines over non-well-ordered bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Base orders
    Orders {
        #[command(subcommand)]
        action: OrdersAction,
    },
    /// Print a prefix of a generated instance as JSON
    Gen(PipelineArgs),
    /// Colour one tuple (or exactly large set, or block union)
    Color {
        #[command(flatten)]
        args: PipelineArgs,
        /// Comma-separated increasing indices
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
    },
    /// Run a pipeline and write its trace
    Run(PipelineArgs),
    /// Re-check a trace file
    Verify {
        trace: PathBuf,
    },
}

#[derive(Subcommand)]
enum OrdersAction {
    List,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long, value_enum)]
    pipeline: Pipeline,
    #[arg(long)]
    order: Option<String>,
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    h: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
    /// Nesting depth of the ladder kind
    #[arg(long)]
    depth: Option<usize>,
    /// Largest block size tried by the block search
    #[arg(long)]
    max_block: Option<usize>,
    /// Reserved; recorded in the trace only
    #[arg(long)]
    seed: Option<u64>,
    /// Trace output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

impl PipelineArgs {
    fn config(&self) -> PipelineConfig {
        let mut c = PipelineConfig::new(self.pipeline);
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = self.$f.clone() { c.$f = v; })*};
        }
        set!(order, kind, h, n, k, window, size, count, budget, depth, max_block, seed);
        c
    }
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fail(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Orders {
            action: OrdersAction::List,
        } => {
            for name in BUILTIN_NAMES {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        Command::Gen(args) => {
            let cfg = args.config();
            let count = args.count.unwrap_or(10);
            match gen_prefix(&cfg, count) {
                Ok(terms) => {
                    let text = serde_json::to_string_pretty(&terms).expect("json") + "\n";
                    match write_out(args.out.as_ref(), &text) {
                        Ok(()) => ExitCode::SUCCESS,
                        Err(e) => fail(e),
                    }
                }
                Err(e) => fail(e),
            }
        }
        Command::Color { args, indices } => match color_of(&args.config(), &indices) {
            Ok(c) => {
                println!("{c}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Run(args) => {
            let trace = run_pipeline(&args.config());
            if let Err(e) = write_out(args.out.as_ref(), &trace.to_json_string()) {
                return fail(e);
            }
            if let Some(err) = &trace.verdicts.error {
                eprintln!("{}: {}", err.kind, err.message);
            }
            ExitCode::from(trace.exit_code() as u8)
        }
        Command::Verify { trace } => {
            let text = match fs::read_to_string(&trace) {
                Ok(t) => t,
                Err(e) => return fail(format!("cannot read {}: {e}", trace.display())),
            };
            let parsed = match Trace::from_json_str(&text) {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
            let report = verify_trace(&parsed);
            for m in &report.mismatches {
                eprintln!("mismatch: {m}");
            }
            if report.mismatches.is_empty() {
                eprintln!("outcome: {:?}, verified: {}", report.outcome, report.verified);
            }
            ExitCode::from(report.exit_code() as u8)
        }
    }
}
