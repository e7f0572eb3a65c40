use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use polykernel::KernelOptions;
use polykernel_cli::{cmd_batch, cmd_bench, cmd_check_star, cmd_kernel, cmd_verify, generate, Outcome};

/// Kernel computation for closed polyhedra.
///
/// Exit status: 0 on success, 2 for an empty kernel or a polyhedron that is
/// not star-shaped, 1 on error.
#[derive(Parser)]
#[command(name = "polykernel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct KernelArgs {
    /// Process the faces in a seeded random order.
    #[arg(long)]
    shuffle: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Distance within which a point counts as on a plane.
    #[arg(long, default_value_t = polykernel::predicates::DEFAULT_TOLERANCE)]
    tolerance: f64,
}

impl KernelArgs {
    fn options(self) -> KernelOptions {
        KernelOptions {
            shuffle: self.shuffle,
            seed: self.seed,
            tolerance: self.tolerance,
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the kernel of one OFF polyhedron.
    Kernel {
        input: PathBuf,
        /// Write the kernel here as OFF.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        kernel: KernelArgs,
    },
    /// Compute kernels of every element of a collection file.
    Batch {
        collection: PathBuf,
        /// CSV report path; stdout when omitted.
        #[arg(long, short)]
        report: Option<PathBuf>,
        /// Write 0 in the wall_time_s column for reproducible reports.
        #[arg(long)]
        omit_timing: bool,
        #[command(flatten)]
        kernel: KernelArgs,
    },
    /// Decide whether an OFF polyhedron is star-shaped.
    CheckStar {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = polykernel::predicates::DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Compare every kernel of a collection against the brute-force oracle.
    Verify {
        collection: PathBuf,
        #[arg(long, short)]
        report: Option<PathBuf>,
        #[command(flatten)]
        kernel: KernelArgs,
    },
    /// Time batch runs over datasets cloned from a collection.
    Bench {
        collection: PathBuf,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [100, 1000, 10000])]
        sizes: Vec<usize>,
        #[arg(long, short)]
        report: Option<PathBuf>,
        #[command(flatten)]
        kernel: KernelArgs,
    },
    /// Write a test model as OFF, or a random collection.
    Generate {
        /// cube, tetrahedron, l-prism, tent, ring, star, convex or random-collection.
        model: String,
        #[arg(long, short)]
        output: PathBuf,
        /// Model parameter (tent entrance, ring segments, star inner radius, convex points, collection size).
        #[arg(long)]
        param: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of midpoint refinements.
        #[arg(long, default_value_t = 0)]
        refine: usize,
    },
}

fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Kernel { input, output, kernel } => cmd_kernel(&input, output.as_deref(), &kernel.options(), out),
        Command::Batch { collection, report, omit_timing, kernel } => {
            cmd_batch(&collection, report.as_deref(), &kernel.options(), omit_timing, out)
        }
        Command::CheckStar { input, seed, tolerance } => {
            let opts = KernelOptions { shuffle: true, seed, tolerance, ..Default::default() };
            cmd_check_star(&input, &opts, out)
        }
        Command::Verify { collection, report, kernel } => cmd_verify(&collection, report.as_deref(), &kernel.options(), out),
        Command::Bench { collection, repeats, sizes, report, kernel } => {
            cmd_bench(&collection, &sizes, repeats, report.as_deref(), &kernel.options(), out)
        }
        Command::Generate { model, output, param, seed, refine } => {
            if model == "random-collection" {
                let n = param.unwrap_or(200.0) as usize;
                generate::write_dataset(&generate::random_dataset(n, seed), &output)?;
            } else {
                generate::write_model(&generate::named_model(&model, param, seed, refine)?, &output)?;
            }
            Ok(Outcome::Success)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
