//! Command-line front end.  Subcommands mirror the job layer in the library;
//! `kr job <file.json>` replays a saved job spec verbatim.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kr_cli::{parse_mode_entries, run, Command as JobCommand, Format, JobSpec, EXIT_BAD_INPUT};

#[derive(Parser)]
#[command(
    name = "kr",
    about = "Kirillov-Reshetikhin character series, fermionic counting and string center equations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Output format.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Also write the output to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Common {
    /// Algebra, e.g. A1, B2, D4, G2.
    #[arg(long)]
    algebra: String,
    /// Truncation level l (series are computed mod y_a^(t_a l + 1)).
    #[arg(long, default_value_t = 2)]
    level: u32,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the fermionic Q-table and check the quadratic relation and
    /// convergence.
    Qsys {
        #[command(flatten)]
        common: Common,
        /// Exit nonzero if any residual survives (residuals are always
        /// reported either way).
        #[arg(long)]
        check: bool,
    },
    /// Weight multiplicities r and k of a tensor product of KR modules.
    Mult {
        #[command(flatten)]
        common: Common,
        /// Quantum space data as a:m:mult triples, e.g. "1:1:2" or JSON.
        #[arg(long)]
        nu: String,
        /// Report every weight with a nonzero count.
        #[arg(long, default_value_t = false)]
        all_weights: bool,
        /// Report a single weight, comma-separated coordinates.
        #[arg(long, conflicts_with = "all_weights")]
        weight: Option<String>,
    },
    /// Decompose a classical KR character into irreducibles.
    Char {
        #[command(flatten)]
        common: Common,
        /// KR index as "a,m".
        #[arg(long)]
        kr: String,
    },
    /// String center equation counting.
    Sce {
        #[command(subcommand)]
        sub: SceCmd,
    },
    /// Identity verification suites.
    Verify {
        /// Suite: qsys | genseries | expansion | k0 | sce | all.
        suite: String,
        #[command(flatten)]
        common: Common,
        /// Quantum space data (optional for genseries).
        #[arg(long)]
        nu: Option<String>,
        /// Total-degree cutoff for w-space checks.
        #[arg(long, default_value_t = 3)]
        degree: u32,
        /// Number of randomized SCE instances.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Seed for randomized suites.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run Weyl-invariance-dependent checks on exceptional types too.
        #[arg(long)]
        experimental: bool,
    },
    /// Run a saved job spec (JSON).
    Job {
        /// Path to the job file.
        path: PathBuf,
    },
}

#[derive(Subcommand)]
enum SceCmd {
    /// Count off-diagonal solutions three ways and report the predicates.
    Count {
        #[command(flatten)]
        common: Common,
        /// Quantum space data as a:m:mult triples.
        #[arg(long)]
        nu: String,
        /// String pattern N as a:m:mult triples.
        #[arg(long)]
        pattern: String,
        /// Brute-force guard on |det A|.
        #[arg(long, default_value_t = 1_000_000)]
        max_det: u64,
    },
}

fn bad_input(msg: &str) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "error": msg }));
    ExitCode::from(EXIT_BAD_INPUT as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format.as_str() {
        "json" => Format::Json,
        "csv" => Format::Csv,
        other => return bad_input(&format!("unknown format `{other}`")),
    };
    let base = |algebra: &str, command: JobCommand| JobSpec {
        version: 1,
        algebra: algebra.to_string(),
        command,
        nu: Vec::new(),
        pattern: Vec::new(),
        level: 2,
        degree: 3,
        kr: None,
        weight: None,
        suite: None,
        samples: 20,
        seed: 0,
        max_det: 1_000_000,
        experimental: false,
        check: true,
        format,
    };
    let job = match &cli.command {
        Cmd::Qsys { common, check } => {
            let mut job = base(&common.algebra, JobCommand::Qsys);
            job.level = common.level;
            job.check = *check;
            job
        }
        Cmd::Mult {
            common,
            nu,
            all_weights: _,
            weight,
        } => {
            let mut job = base(&common.algebra, JobCommand::Mult);
            job.level = common.level;
            job.nu = match parse_mode_entries(nu) {
                Ok(v) => v,
                Err(e) => return bad_input(&e.to_string()),
            };
            if let Some(w) = weight {
                let coords: Result<Vec<i64>, _> =
                    w.split(',').map(|x| x.trim().parse::<i64>()).collect();
                match coords {
                    Ok(coords) => job.weight = Some(coords),
                    Err(_) => return bad_input(&format!("bad weight `{w}`")),
                }
            }
            job
        }
        Cmd::Char { common, kr } => {
            let mut job = base(&common.algebra, JobCommand::Char);
            job.level = common.level;
            let parts: Vec<&str> = kr.split(',').collect();
            let parsed = (|| -> Option<(usize, u32)> {
                if parts.len() != 2 {
                    return None;
                }
                Some((parts[0].trim().parse().ok()?, parts[1].trim().parse().ok()?))
            })();
            match parsed {
                Some(am) => job.kr = Some(am),
                None => return bad_input(&format!("bad KR index `{kr}`, expected a,m")),
            }
            job
        }
        Cmd::Sce { sub } => match sub {
            SceCmd::Count {
                common,
                nu,
                pattern,
                max_det,
            } => {
                let mut job = base(&common.algebra, JobCommand::Sce);
                job.level = common.level;
                job.max_det = *max_det;
                job.nu = match parse_mode_entries(nu) {
                    Ok(v) => v,
                    Err(e) => return bad_input(&e.to_string()),
                };
                job.pattern = match parse_mode_entries(pattern) {
                    Ok(v) => v,
                    Err(e) => return bad_input(&e.to_string()),
                };
                job
            }
        },
        Cmd::Verify {
            suite,
            common,
            nu,
            degree,
            samples,
            seed,
            experimental,
        } => {
            let mut job = base(&common.algebra, JobCommand::Verify);
            job.level = common.level;
            job.suite = Some(suite.clone());
            job.degree = *degree;
            job.samples = *samples;
            job.seed = *seed;
            job.experimental = *experimental;
            if let Some(nu) = nu {
                job.nu = match parse_mode_entries(nu) {
                    Ok(v) => v,
                    Err(e) => return bad_input(&e.to_string()),
                };
            }
            job
        }
        Cmd::Job { path } => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return bad_input(&format!("cannot read {}: {e}", path.display())),
            };
            match serde_json::from_str::<JobSpec>(&text) {
                Ok(job) => job,
                Err(e) => return bad_input(&format!("bad job spec: {e}")),
            }
        }
    };
    let (output, code) = run(&job);
    print!("{output}");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &output) {
            return bad_input(&format!("cannot write {}: {e}", path.display()));
        }
    }
    ExitCode::from(code as u8)
}
