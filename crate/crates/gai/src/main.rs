//! `gai` — run good-arm-identification experiments, convert score tables
//! into instances, inspect solved constants, and self-verify the numerics.
//!
//! Every flag can also be set through an environment variable with the
//! `GAI_` prefix (e.g. `GAI_RUNS=25 gai run ...`).

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use gai::harness::{
    render_summary, run_experiment, verify, write_outputs, ExperimentPlan, DISPLAY_SCALE,
};
use gai::ingest::{convert, load_scores, AffineMap, ColumnSpec, TransformSpec};
use gai::{Algorithm, BanditInstance, LilParams, Real};

#[derive(Parser)]
#[command(name = "gai", version, about = "Good arm identification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write raw, aggregate and plot files.
    Run {
        /// Instance file (TOML with keys name, threshold, means).
        #[arg(long, env = "GAI_INSTANCE")]
        instance: PathBuf,
        /// Comma-separated algorithms: lilhdoc, hdoc, lucbg.
        #[arg(
            long,
            value_delimiter = ',',
            value_parser = parse_algorithm,
            default_value = "lilhdoc,hdoc,lucbg",
            env = "GAI_ALGOS"
        )]
        algos: Vec<Algorithm>,
        /// Independent runs per algorithm.
        #[arg(long, default_value_t = 10, env = "GAI_RUNS")]
        runs: u32,
        /// Acceptance error rate.
        #[arg(long, default_value_t = 0.01, env = "GAI_DELTA")]
        delta: Real,
        /// Base seed; run i of every algorithm draws stream (seed, i).
        #[arg(long, default_value_t = 0, env = "GAI_SEED")]
        seed: u64,
        /// Per-run pull budget (safety cap for zero-gap arms).
        #[arg(long, default_value_t = 500_000_000, env = "GAI_BUDGET")]
        budget: u64,
        /// Output directory for raw.csv, aggregate.csv and plot.csv.
        #[arg(long, env = "GAI_OUT")]
        out: PathBuf,
        /// Execute runs one after another instead of on the worker pool.
        /// Output files are byte-identical either way.
        #[arg(long, default_value_t = false, env = "GAI_SERIAL")]
        serial: bool,
    },
    /// Convert a delimited score file into an instance file.
    Convert {
        /// Delimited text file with one numeric score column.
        #[arg(long, env = "GAI_INPUT")]
        input: PathBuf,
        /// Zero-based index of the score column.
        #[arg(long, env = "GAI_COLUMN")]
        column: usize,
        /// Divide every score by this before any range map.
        #[arg(long, default_value_t = 1.0, env = "GAI_DIVIDE_BY")]
        divide_by: Real,
        /// Optional range map source_lo,source_hi,target_lo,target_hi
        /// applied after the division.
        #[arg(long, allow_hyphen_values = true, env = "GAI_AFFINE")]
        affine: Option<String>,
        /// Threshold sits between the rank-th and (rank+1)-th best item.
        #[arg(long, env = "GAI_RANK")]
        rank: usize,
        /// Instance file to write.
        #[arg(long, env = "GAI_OUT")]
        out: PathBuf,
        /// Field delimiter of the input file.
        #[arg(long, default_value_t = ',', env = "GAI_DELIMITER")]
        delimiter: char,
        /// Skip the first row of the input file.
        #[arg(long, default_value_t = false, env = "GAI_SKIP_HEADER")]
        skip_header: bool,
    },
    /// Run the numeric self-checks; nonzero exit on any failure.
    Verify {
        /// One of: solver, lemma2, crossover, theorem3, correctness.
        /// Omit to run everything.
        #[arg(long, env = "GAI_SUITE")]
        suite: Option<String>,
    },
    /// Print the solved lil'HDoC constants for a (K, delta) pair.
    Params {
        #[arg(long, env = "GAI_K")]
        k: usize,
        #[arg(long, default_value_t = 0.01, env = "GAI_DELTA")]
        delta: Real,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run {
            instance,
            algos,
            runs,
            delta,
            seed,
            budget,
            out,
            serial,
        } => {
            let instance = BanditInstance::load(&instance)?;
            let plan = ExperimentPlan {
                instance,
                algorithms: algos,
                runs,
                delta,
                base_seed: seed,
                budget,
                parallel: !serial,
            };
            let result = run_experiment(&plan)?;
            write_outputs(&result, &out)?;
            print!("{}", render_summary(&result.aggregate));
            println!(
                "wrote {}, {}, {}",
                out.join("raw.csv").display(),
                out.join("aggregate.csv").display(),
                out.join("plot.csv").display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Convert {
            input,
            column,
            divide_by,
            affine,
            rank,
            out,
            delimiter,
            skip_header,
        } => {
            if !delimiter.is_ascii() {
                bail!("delimiter must be a single ASCII character");
            }
            let column_spec = ColumnSpec {
                delimiter: delimiter as u8,
                column,
                skip_header,
            };
            let scores = load_scores(&input, &column_spec)?;
            let spec = TransformSpec {
                divide_by,
                affine: affine.as_deref().map(parse_affine).transpose()?,
                threshold_rank: rank,
            };
            let name = out
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "converted".to_string());
            let conversion = convert(&scores, &spec, &name)?;
            if conversion.zero_gap {
                eprintln!(
                    "warning: scores at ranks {rank} and {} tie; the boundary arms have zero \
                     threshold gap and can never be identified",
                    rank + 1
                );
            }
            conversion.instance.save(&out)?;
            println!(
                "wrote {} ({} arms, threshold {}, {} good)",
                out.display(),
                conversion.instance.num_arms(),
                conversion.instance.threshold(),
                conversion.instance.num_good()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite } => {
            let results = verify(suite.as_deref())?;
            let mut all_pass = true;
            for r in &results {
                let status = if r.pass { "PASS" } else { "FAIL" };
                all_pass &= r.pass;
                println!("{status}\t{}\t{}\t{}", r.suite, r.check, r.measured);
            }
            let (passed, total) = (results.iter().filter(|r| r.pass).count(), results.len());
            println!("{passed}/{total} checks passed");
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Params { k, delta } => {
            let p = LilParams::<Real>::solve(k, delta)?;
            println!("K       = {}", p.k);
            println!("delta   = {}", p.delta);
            println!("epsilon = {:e}", p.epsilon);
            println!("r       = {}", p.r);
            println!("c_eps   = {}", p.c_eps);
            println!("B       = {}", p.b);
            println!("C       = {}", p.c);
            println!("omega   = {:e}", p.omega);
            println!("T       = {}", p.t);
            println!(
                "note: summaries divide sample counts by {DISPLAY_SCALE}; files carry raw values"
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_affine(text: &str) -> anyhow::Result<AffineMap> {
    let parts: Vec<Real> = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<Real>()
                .with_context(|| format!("cannot parse affine component '{p}'"))
        })
        .collect::<Result<_, _>>()?;
    if parts.len() != 4 {
        bail!(
            "affine map needs exactly 4 comma-separated numbers \
             (source_lo,source_hi,target_lo,target_hi), got {}",
            parts.len()
        );
    }
    Ok(AffineMap {
        source_lo: parts[0],
        source_hi: parts[1],
        target_lo: parts[2],
        target_hi: parts[3],
    })
}
