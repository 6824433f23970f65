use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ga_align::cli::{self, generate::GenerateParams};

#[derive(Parser)]
#[command(
    name = "ga-align",
    version,
    about = "Weighted rigid pointcloud alignment with rotors"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x, y, z] = parts.as_slice() else {
        return Err(format!("expected x,y,z but got {s:?}"));
    };
    let f = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok([f(x)?, f(y)?, f(z)?])
}

#[derive(Subcommand)]
enum Command {
    /// Solve an alignment problem from a pairs CSV (and optional priors CSV).
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        priors: Option<PathBuf>,
        /// Report path; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a synthetic pairs CSV and a `<output>.truth.json` sidecar.
    Generate {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        noise_sigma: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Rotation angle in radians.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        angle: f64,
        #[arg(long, value_parser = parse_vec3, default_value = "0,0,1", allow_hyphen_values = true)]
        axis: [f64; 3],
        #[arg(long, value_parser = parse_vec3, default_value = "0,0,0", allow_hyphen_values = true)]
        translation: [f64; 3],
        #[arg(long)]
        output: PathBuf,
    },
    /// Time summarize+solve; prints CSV with per-n medians.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,1000000")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        repetitions: usize,
    },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = match args.command {
        Command::Solve { input, priors, output } => cli::solve(&input, priors.as_deref(), output.as_deref()),
        Command::Generate {
            n,
            noise_sigma,
            seed,
            angle,
            axis,
            translation,
            output,
        } => {
            let params = GenerateParams {
                n,
                noise_sigma,
                seed,
                angle,
                axis,
                translation,
            };
            cli::generate(&params, &output)
        }
        Command::Bench { n, repetitions } => cli::bench(&n, repetitions),
    };
    ExitCode::from(cli::finish(result) as u8)
}
