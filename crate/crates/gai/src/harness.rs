//! Experiment execution, result files, and the numeric verification suites.
//!
//! [`run_experiment`] fans a plan's `runs × algorithms` episodes over a
//! worker pool (or runs them serially; the output is byte-identical either
//! way because run seeding is position-based) and aggregates per-λ sample
//! counts. Results are emitted as three delimited files with header rows:
//!
//! - `raw.csv` — one row per emitted good-arm output plus one `stop` row
//!   per run: `run_id,algorithm,lambda,tau_lambda,tau_stop,misclassified,truncated`.
//! - `aggregate.csv` — `algorithm,lambda,mean,stddev,runs`, where `runs`
//!   counts only the runs that reached that λ (truncated runs are reported,
//!   never silently dropped).
//! - `plot.csv` — `algorithm,lambda,mean_samples,stddev`, one row per
//!   `(algorithm, λ)` plus a `stop` row, values identical to the aggregate.
//!
//! [`verify`] bundles the self-check suites: the warm-up solver against a
//! linear scan, the iterated-logarithm transform against brute force, the
//! radius crossover grid, the identification-count diagnostic, and a
//! Monte-Carlo misclassification check.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::algorithms::{run_gai, validate_config, AlgoConfig, Algorithm, ConfigError};
use crate::bounds::{
    c_epsilon, hdoc_id_radius, lemma2_transform, lil_radius, solve_epsilon, solve_t,
    theorem3_bound, LilParams,
};
use crate::env::BernoulliEnv;
use crate::instance::BanditInstance;
use crate::outcome::{mean_stddev, AggregateStats, RunOutcome, StatRow};
use crate::Real;

/// Divisor used by the human-readable summary, matching the convention of
/// reporting sample counts in units of 10⁵.
pub const DISPLAY_SCALE: Real = 100_000.0;

/// The `(K, δ)` grid the solver and crossover suites sweep.
pub const VERIFY_GRID: [(usize, Real); 6] = [
    (2, 0.01),
    (2, 0.001),
    (6, 0.01),
    (6, 0.001),
    (100, 0.01),
    (100, 0.001),
];

/// Names accepted by `verify --suite`.
pub const VERIFY_SUITES: [&str; 5] = ["solver", "lemma2", "crossover", "theorem3", "correctness"];

/// Errors from planning, execution, and output writing.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("experiment plan needs at least one run")]
    NoRuns,
    #[error("experiment plan needs at least one algorithm")]
    NoAlgorithms,
    #[error("configuration for {algorithm} is invalid: {source}")]
    BadConfig {
        algorithm: Algorithm,
        source: ConfigError,
    },
    #[error("run {run} of {algorithm} failed: {source}")]
    RunFailed {
        run: u32,
        algorithm: Algorithm,
        source: ConfigError,
    },
    #[error("unknown verification suite '{0}' (expected one of solver, lemma2, crossover, theorem3, correctness)")]
    UnknownSuite(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

/// A full experiment: instance, algorithms, and run parameters.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub instance: BanditInstance,
    pub algorithms: Vec<Algorithm>,
    pub runs: u32,
    pub delta: Real,
    pub base_seed: u64,
    /// Per-run pull budget.
    pub budget: u64,
    /// Fan runs out over the rayon pool; the results are byte-identical to
    /// serial execution.
    pub parallel: bool,
}

impl ExperimentPlan {
    fn config_for(&self, algorithm: Algorithm) -> AlgoConfig {
        AlgoConfig {
            algorithm,
            delta: self.delta,
            seed: self.base_seed,
            max_total_pulls: self.budget,
        }
    }
}

/// One executed run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run_id: u32,
    pub algorithm: Algorithm,
    pub outcome: RunOutcome,
}

/// All runs of a plan plus their aggregate statistics.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub records: Vec<RunRecord>,
    pub aggregate: AggregateStats,
}

/// Executes every `(algorithm, run)` pair of the plan. Run `i` of every
/// algorithm shares the reward stream derived from `(base_seed, i)`.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentResult, HarnessError> {
    if plan.runs == 0 {
        return Err(HarnessError::NoRuns);
    }
    if plan.algorithms.is_empty() {
        return Err(HarnessError::NoAlgorithms);
    }
    // Reject bad configurations before any sampling happens.
    for &algorithm in &plan.algorithms {
        validate_config(&plan.instance, &plan.config_for(algorithm))
            .map_err(|source| HarnessError::BadConfig { algorithm, source })?;
    }

    let jobs: Vec<(Algorithm, u32)> = plan
        .algorithms
        .iter()
        .flat_map(|&algorithm| (0..plan.runs).map(move |run| (algorithm, run)))
        .collect();

    let execute = |&(algorithm, run): &(Algorithm, u32)| -> Result<RunRecord, HarnessError> {
        let config = plan.config_for(algorithm);
        let mut env = BernoulliEnv::new(&plan.instance, plan.base_seed, u64::from(run));
        run_gai(&plan.instance, &config, &mut env)
            .map(|outcome| RunRecord {
                run_id: run,
                algorithm,
                outcome,
            })
            .map_err(|source| HarnessError::RunFailed {
                run,
                algorithm,
                source,
            })
    };

    let records: Vec<RunRecord> = if plan.parallel {
        jobs.par_iter().map(execute).collect::<Result<_, _>>()?
    } else {
        jobs.iter().map(execute).collect::<Result<_, _>>()?
    };

    let aggregate = aggregate(&records, &plan.algorithms, plan.runs, DISPLAY_SCALE);
    Ok(ExperimentResult { records, aggregate })
}

/// Reduces run records to per-(algorithm, λ) and τ_stop statistics.
/// A row's `runs` column counts only the runs that reached it.
pub fn aggregate(
    records: &[RunRecord],
    algorithms: &[Algorithm],
    total_runs: u32,
    scale_divisor: Real,
) -> AggregateStats {
    let mut rows = Vec::new();
    let mut truncated_runs = Vec::new();
    for &algorithm in algorithms {
        let outcomes: Vec<&RunOutcome> = records
            .iter()
            .filter(|r| r.algorithm == algorithm)
            .map(|r| &r.outcome)
            .collect();
        let max_lambda = outcomes.iter().map(|o| o.tau_lambda.len()).max().unwrap_or(0);
        for lambda in 1..=max_lambda {
            let values: Vec<u64> = outcomes
                .iter()
                .filter_map(|o| o.tau_lambda.get(lambda - 1).copied())
                .collect();
            let (mean, stddev) = mean_stddev(&values);
            rows.push(StatRow {
                algorithm,
                lambda: Some(lambda as u32),
                mean,
                stddev,
                runs: values.len() as u32,
            });
        }
        let stops: Vec<u64> = outcomes.iter().filter_map(|o| o.tau_stop).collect();
        if !stops.is_empty() {
            let (mean, stddev) = mean_stddev(&stops);
            rows.push(StatRow {
                algorithm,
                lambda: None,
                mean,
                stddev,
                runs: stops.len() as u32,
            });
        }
        let truncated = outcomes.iter().filter(|o| o.truncated).count() as u32;
        truncated_runs.push((algorithm, truncated));
    }
    AggregateStats {
        rows,
        total_runs,
        truncated_runs,
        scale_divisor,
    }
}

// ---------------------------------------------------------------------------
// Result files
// ---------------------------------------------------------------------------

/// Raw per-run rows; see the module docs for the schema.
pub fn render_raw_csv(records: &[RunRecord]) -> String {
    let mut out = String::from("run_id,algorithm,lambda,tau_lambda,tau_stop,misclassified,truncated\n");
    for rec in records {
        let stop = rec
            .outcome
            .tau_stop
            .map(|v| v.to_string())
            .unwrap_or_default();
        for (i, tau) in rec.outcome.tau_lambda.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                rec.run_id,
                rec.algorithm,
                i + 1,
                tau,
                stop,
                rec.outcome.misclassified,
                rec.outcome.truncated
            );
        }
        let _ = writeln!(
            out,
            "{},{},stop,,{},{},{}",
            rec.run_id, rec.algorithm, stop, rec.outcome.misclassified, rec.outcome.truncated
        );
    }
    out
}

/// Aggregate rows, unscaled.
pub fn render_aggregate_csv(stats: &AggregateStats) -> String {
    let mut out = String::from("algorithm,lambda,mean,stddev,runs\n");
    for row in &stats.rows {
        let lambda = row
            .lambda
            .map(|l| l.to_string())
            .unwrap_or_else(|| "stop".to_string());
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.algorithm, lambda, row.mean, row.stddev, row.runs
        );
    }
    out
}

/// Plot-ready rows: one per `(algorithm, λ)` plus a `stop` row, values
/// exactly equal to the aggregate (no rescaling).
pub fn render_plot_csv(stats: &AggregateStats) -> String {
    let mut out = String::from("algorithm,lambda,mean_samples,stddev\n");
    for row in &stats.rows {
        let lambda = row
            .lambda
            .map(|l| l.to_string())
            .unwrap_or_else(|| "stop".to_string());
        let _ = writeln!(out, "{},{},{},{}", row.algorithm, lambda, row.mean, row.stddev);
    }
    out
}

/// Human-readable table, scaled by `scale_divisor`.
pub fn render_summary(stats: &AggregateStats) -> String {
    let mut out = format!(
        "sample counts over {} runs, divided by {}\n{:<10} {:>6} {:>14} {:>12} {:>5}\n",
        stats.total_runs, stats.scale_divisor, "algorithm", "lambda", "mean", "stddev", "runs"
    );
    for row in &stats.rows {
        let lambda = row
            .lambda
            .map(|l| l.to_string())
            .unwrap_or_else(|| "stop".to_string());
        let _ = writeln!(
            out,
            "{:<10} {:>6} {:>14.4} {:>12.4} {:>5}",
            row.algorithm.to_string(),
            lambda,
            row.mean / stats.scale_divisor,
            row.stddev / stats.scale_divisor,
            row.runs
        );
    }
    for (algorithm, truncated) in &stats.truncated_runs {
        if *truncated > 0 {
            let _ = writeln!(out, "note: {truncated} {algorithm} run(s) hit the budget cap");
        }
    }
    out
}

/// Writes `raw.csv`, `aggregate.csv` and `plot.csv` into `dir`.
pub fn write_outputs(result: &ExperimentResult, dir: impl AsRef<Path>) -> Result<(), HarnessError> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|source| HarnessError::Write {
        path: dir.display().to_string(),
        source,
    })?;
    let files = [
        ("raw.csv", render_raw_csv(&result.records)),
        ("aggregate.csv", render_aggregate_csv(&result.aggregate)),
        ("plot.csv", render_plot_csv(&result.aggregate)),
    ];
    for (name, contents) in files {
        let path = dir.join(name);
        std::fs::write(&path, contents).map_err(|source| HarnessError::Write {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

/// One verification check with its measured value.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub suite: &'static str,
    pub check: String,
    pub pass: bool,
    pub measured: String,
}

impl CheckResult {
    fn new(suite: &'static str, check: impl Into<String>, pass: bool, measured: String) -> Self {
        Self {
            suite,
            check: check.into(),
            pass,
            measured,
        }
    }
}

/// Runs one named suite, or all of them.
pub fn verify(suite: Option<&str>) -> Result<Vec<CheckResult>, HarnessError> {
    match suite {
        None => {
            let mut all = verify_solver();
            all.extend(verify_lemma2());
            all.extend(verify_crossover());
            all.extend(verify_theorem3());
            all.extend(verify_correctness());
            Ok(all)
        }
        Some("solver") => Ok(verify_solver()),
        Some("lemma2") => Ok(verify_lemma2()),
        Some("crossover") => Ok(verify_crossover()),
        Some("theorem3") => Ok(verify_theorem3()),
        Some("correctness") => Ok(verify_correctness()),
        Some(other) => Err(HarnessError::UnknownSuite(other.to_string())),
    }
}

fn rate(eps: Real) -> Real {
    (1.0 + eps.sqrt()).powi(2) * (1.0 + eps)
}

/// Warm-up solver against an independent raw-space linear scan, plus the
/// maximality and rate guarantees of the ε solver.
pub fn verify_solver() -> Vec<CheckResult> {
    let mut results = Vec::new();
    for (k, delta) in VERIFY_GRID {
        let label = format!("K={k} delta={delta}");
        let eps = match solve_epsilon(k, delta) {
            Ok(e) => e,
            Err(e) => {
                results.push(CheckResult::new("solver", label, false, e.to_string()));
                continue;
            }
        };
        let b = (k + 1) as Real;
        let c = (1.0 / delta).max(std::f64::consts::E);
        let cap = (b.ln().ln() / b.ln()).min(c.ln().ln() / c.ln());
        let maximal = rate(eps) - 1.0 <= cap && rate(eps + 1e-6) - 1.0 > cap;
        results.push(CheckResult::new(
            "solver",
            format!("epsilon maximal: {label}"),
            maximal,
            format!("eps={eps:.9e} cap={cap:.6}"),
        ));
        results.push(CheckResult::new(
            "solver",
            format!("rate below 1.5: {label}"),
            rate(eps) <= 1.5,
            format!("r={:.6}", rate(eps)),
        ));

        let t = solve_t(k, delta, eps).expect("grid parameters are valid");
        let scan = linear_scan_t(k, delta, eps);
        results.push(CheckResult::new(
            "solver",
            format!("warm-up equals linear scan: {label}"),
            t == scan,
            format!("T={t} scan={scan}"),
        ));

        // The feasibility value t²/[log((1+ε)t)]^r must be nondecreasing
        // over integers, otherwise the bisection could disagree with a scan.
        let r = rate(eps);
        let value = |t: u64| {
            let tf = t as Real;
            tf * tf / ((1.0 + eps) * tf).ln().powf(r)
        };
        let mut monotone = true;
        let mut prev = value(2);
        for t in 3..=(2 * t) {
            let v = value(t);
            if v < prev {
                monotone = false;
                break;
            }
            prev = v;
        }
        results.push(CheckResult::new(
            "solver",
            format!("feasibility nondecreasing: {label}"),
            monotone,
            format!("checked t in [2, {}]", 2 * t),
        ));
    }
    results
}

fn linear_scan_t(k: usize, delta: Real, eps: Real) -> u64 {
    let r = rate(eps);
    let ce = c_epsilon(eps).expect("eps from the solver is valid");
    let rhs = 0.25 * (k as Real).powf(r - 1.0) * (1.0 / delta).powf(r - 1.0) * ce.powf(r);
    let mut t = 2u64;
    loop {
        let tf = t as Real;
        if tf * tf / ((1.0 + eps) * tf).ln().powf(r) >= rhs {
            return t;
        }
        t += 1;
    }
}

/// Brute-force check of the iterated-logarithm transform on randomized
/// `(c, ω, ε)` triples: every integer `t` satisfying the left-hand
/// condition must lie below the closed-form bound.
pub fn verify_lemma2() -> Vec<CheckResult> {
    const TRIPLES: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(0x11_2358);
    let mut failures = 0usize;
    let mut infinite = 0usize;
    let mut first_failure = String::new();
    for _ in 0..TRIPLES {
        let c = (0.02f64.ln() + rng.gen::<Real>() * (4.0f64.ln() - 0.02f64.ln())).exp();
        let omega = 0.001 + rng.gen::<Real>() * 0.949;
        let eps = 0.01 + rng.gen::<Real>() * 0.98;
        let bound = lemma2_transform(c, omega, eps).expect("triple in domain");
        if bound.is_infinite() {
            infinite += 1;
            continue;
        }
        let limit = if bound < 1.0 {
            10_000
        } else {
            (2.0 * bound).ceil() as u64
        };
        for t in 1..=limit {
            let tf = t as Real;
            let lhs = (((1.0 + eps) * tf).ln() / omega).ln() / tf;
            if lhs >= c && tf > bound {
                failures += 1;
                if first_failure.is_empty() {
                    first_failure = format!("t={t} c={c:.4} omega={omega:.4} eps={eps:.4}");
                }
                break;
            }
        }
    }
    vec![CheckResult::new(
        "lemma2",
        format!("{TRIPLES} randomized triples"),
        failures == 0,
        if failures == 0 {
            format!("all bounded ({infinite} with infinite bound)")
        } else {
            format!("{failures} violations, first: {first_failure}")
        },
    )]
}

/// From the solved warm-up count on, the iterated-logarithm radius must
/// never exceed the HDoC radius. Swept on a 200-point log grid up to 10⁷.
pub fn verify_crossover() -> Vec<CheckResult> {
    let mut results = Vec::new();
    for (k, delta) in VERIFY_GRID {
        let label = format!("K={k} delta={delta}");
        let params = LilParams::<Real>::solve(k, delta).expect("grid parameters are valid");
        let lo = (params.t as Real).ln();
        let hi = 1e7f64.ln();
        let mut worst_gap = Real::NEG_INFINITY;
        let mut pass = true;
        for i in 0..200 {
            let n = (lo + (hi - lo) * i as Real / 199.0).exp();
            let lil = lil_radius(n, params.omega, params.epsilon).expect("valid");
            let hdoc = hdoc_id_radius(n, k, delta).expect("valid");
            let gap = lil - hdoc;
            worst_gap = worst_gap.max(gap);
            pass &= lil <= hdoc;
        }
        results.push(CheckResult::new(
            "crossover",
            format!("lil radius below hdoc radius for n >= T: {label}"),
            pass,
            format!("T={} worst lil-hdoc gap={worst_gap:.3e}", params.t),
        ));
    }
    results
}

/// The identification-count diagnostic must scale like `1/Δ²` times a
/// doubly-logarithmic factor, and degrade to `+∞` at zero gap.
pub fn verify_theorem3() -> Vec<CheckResult> {
    let eps = solve_epsilon(6, 0.01).expect("valid");
    let ratio = theorem3_bound(1e-4, 6, 0.01, eps).expect("valid")
        / theorem3_bound(1e-3, 6, 0.01, eps).expect("valid");
    let sentinel: Real = theorem3_bound(0.0, 6, 0.01, eps).expect("valid");
    vec![
        CheckResult::new(
            "theorem3",
            "bound(gap/10)/bound(gap) within [100, 105]",
            (100.0..=105.0).contains(&ratio),
            format!("ratio={ratio:.6}"),
        ),
        CheckResult::new(
            "theorem3",
            "zero gap yields infinite bound",
            sentinel.is_infinite() && sentinel > 0.0,
            format!("bound={sentinel}"),
        ),
    ]
}

/// Monte-Carlo misclassification check on an easy four-arm instance:
/// the error fraction over 200 runs stays below δ plus binomial slack.
pub fn verify_correctness() -> Vec<CheckResult> {
    const RUNS: u32 = 200;
    const DELTA: Real = 0.1;
    let instance = BanditInstance::new("easy", 0.5, vec![0.9, 0.8, 0.2, 0.1])
        .expect("hard-coded instance is valid");
    let threshold = DELTA + 3.0 * (DELTA * (1.0 - DELTA) / RUNS as Real).sqrt();
    let mut results = Vec::new();
    for algorithm in Algorithm::ALL {
        let plan = ExperimentPlan {
            instance: instance.clone(),
            algorithms: vec![algorithm],
            runs: RUNS,
            delta: DELTA,
            base_seed: 0x600D_A4A5,
            budget: 50_000_000,
            parallel: true,
        };
        let result = run_experiment(&plan).expect("plan is valid");
        let wrong = result
            .records
            .iter()
            .filter(|r| r.outcome.misclassified)
            .count();
        let fraction = wrong as Real / RUNS as Real;
        results.push(CheckResult::new(
            "correctness",
            format!("misclassification rate of {algorithm} within binomial slack"),
            fraction <= threshold,
            format!("fraction={fraction:.4} threshold={threshold:.4}"),
        ));
    }
    results
}

#[cfg(test)]
mod tests {
    use super::*;

    fn easy_instance() -> BanditInstance {
        BanditInstance::new("easy", 0.5, vec![0.9, 0.8, 0.7, 0.2]).unwrap()
    }

    fn small_plan() -> ExperimentPlan {
        ExperimentPlan {
            instance: easy_instance(),
            algorithms: vec![Algorithm::LilHdoc, Algorithm::Hdoc, Algorithm::LucbG],
            runs: 4,
            delta: 0.1,
            base_seed: 31,
            budget: 10_000_000,
            parallel: false,
        }
    }

    #[test]
    fn plan_validation_rejects_degenerate_plans() {
        let mut plan = small_plan();
        plan.runs = 0;
        assert!(matches!(run_experiment(&plan), Err(HarnessError::NoRuns)));
        let mut plan = small_plan();
        plan.algorithms.clear();
        assert!(matches!(
            run_experiment(&plan),
            Err(HarnessError::NoAlgorithms)
        ));
        let mut plan = small_plan();
        plan.delta = 0.5; // above 1/e: fine for baselines, fatal for lil'HDoC
        assert!(matches!(
            run_experiment(&plan),
            Err(HarnessError::BadConfig { .. })
        ));
    }

    #[test]
    fn single_run_reports_zero_stddev() {
        let mut plan = small_plan();
        plan.runs = 1;
        plan.algorithms = vec![Algorithm::Hdoc];
        let result = run_experiment(&plan).unwrap();
        assert!(!result.aggregate.rows.is_empty());
        for row in &result.aggregate.rows {
            assert_eq!(row.stddev, 0.0);
            assert_eq!(row.runs, 1);
        }
    }

    #[test]
    fn repeated_plans_render_identical_bytes() {
        let plan = small_plan();
        let a = run_experiment(&plan).unwrap();
        let b = run_experiment(&plan).unwrap();
        assert_eq!(render_raw_csv(&a.records), render_raw_csv(&b.records));
        assert_eq!(
            render_aggregate_csv(&a.aggregate),
            render_aggregate_csv(&b.aggregate)
        );
    }

    #[test]
    fn serial_and_parallel_execution_agree() {
        let mut serial = small_plan();
        serial.parallel = false;
        let mut parallel = small_plan();
        parallel.parallel = true;
        let a = run_experiment(&serial).unwrap();
        let b = run_experiment(&parallel).unwrap();
        assert_eq!(render_raw_csv(&a.records), render_raw_csv(&b.records));
    }

    #[test]
    fn raw_rows_reconstruct_the_aggregate() {
        let result = run_experiment(&small_plan()).unwrap();
        let raw = render_raw_csv(&result.records);

        // Recompute each aggregate row from the raw file alone.
        for row in &result.aggregate.rows {
            let lambda = row
                .lambda
                .map(|l| l.to_string())
                .unwrap_or_else(|| "stop".to_string());
            let values: Vec<u64> = raw
                .lines()
                .skip(1)
                .filter_map(|line| {
                    let fields: Vec<&str> = line.split(',').collect();
                    if fields[1] == row.algorithm.to_string() && fields[2] == lambda {
                        let cell = if lambda == "stop" { fields[4] } else { fields[3] };
                        cell.parse().ok()
                    } else {
                        None
                    }
                })
                .collect();
            assert_eq!(values.len() as u32, row.runs);
            let (mean, stddev) = mean_stddev(&values);
            assert!((mean - row.mean).abs() <= 1e-9 * row.mean.abs().max(1.0));
            assert!((stddev - row.stddev).abs() <= 1e-9 * row.stddev.abs().max(1.0));
        }
    }

    #[test]
    fn plot_file_has_one_row_per_lambda_plus_stop() {
        // Three good arms, three algorithms, complete runs: 12 data rows.
        let result = run_experiment(&small_plan()).unwrap();
        let plot = render_plot_csv(&result.aggregate);
        let lines: Vec<&str> = plot.lines().collect();
        assert_eq!(lines[0], "algorithm,lambda,mean_samples,stddev");
        assert_eq!(lines.len(), 1 + 12, "plot file:\n{plot}");
        // Values match the aggregate rows exactly.
        for (line, row) in lines[1..].iter().zip(&result.aggregate.rows) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[2].parse::<f64>().unwrap(), row.mean);
            assert_eq!(fields[3].parse::<f64>().unwrap(), row.stddev);
        }
    }

    #[test]
    fn truncated_runs_are_counted_not_dropped() {
        let plan = ExperimentPlan {
            instance: BanditInstance::new("zg", 0.5, vec![0.5, 0.9]).unwrap(),
            algorithms: vec![Algorithm::Hdoc],
            runs: 3,
            delta: 0.1,
            base_seed: 5,
            budget: 5_000,
            parallel: false,
        };
        let result = run_experiment(&plan).unwrap();
        assert_eq!(result.aggregate.truncated_runs, vec![(Algorithm::Hdoc, 3)]);
        // No stop rows exist, but the lambda-1 rows (the 0.9 arm) do.
        assert!(result.aggregate.rows.iter().all(|r| r.lambda.is_some()));
        let raw = render_raw_csv(&result.records);
        assert_eq!(raw.matches(",true\n").count(), raw.lines().count() - 1);
    }

    #[test]
    fn verify_rejects_unknown_suites() {
        assert!(matches!(
            verify(Some("nonsense")),
            Err(HarnessError::UnknownSuite(_))
        ));
    }

    #[test]
    fn fast_verification_suites_pass() {
        for suite in ["solver", "lemma2", "crossover", "theorem3"] {
            let results = verify(Some(suite)).unwrap();
            assert!(!results.is_empty());
            for r in &results {
                assert!(r.pass, "{} / {}: {}", r.suite, r.check, r.measured);
            }
        }
    }

    #[test]
    fn correctness_suite_passes() {
        for r in verify(Some("correctness")).unwrap() {
            assert!(r.pass, "{}: {}", r.check, r.measured);
        }
    }
}
