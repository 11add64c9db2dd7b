//! The GAI control loop shared by lil'HDoC, HDoC and LUCB-G.
//!
//! All three algorithms decompose into a *sampling* rule (which arm to pull
//! next) and an *identification* rule (when to output a label):
//!
//! | algorithm | sampling index              | identification radius        |
//! |-----------|-----------------------------|------------------------------|
//! | HDoC      | `μ̂ + √(log t / 2N)`         | `√(log(4KN²/δ) / 2N)`        |
//! | LUCB-G    | `μ̂ + √(log(4KN²/δ) / 2N)`   | `√(log(4KN²/δ) / 2N)`        |
//! | lil'HDoC  | `μ̂ + √(log t / 2N)`         | `U(N, δ/(c_ε K))`            |
//!
//! A run warms up every arm in index order (`T` solved pulls per arm for
//! lil'HDoC, one for the baselines), identifying each arm as soon as its
//! warm-up completes, then repeatedly pulls the argmax of the sampling
//! index over the active set and re-tests the pulled arm. Every pull —
//! warm-up included — advances the global round counter used by the
//! sampling bonus. Ties in the argmax go to the lowest arm index, so a run
//! is a pure function of its reward stream.

use thiserror::Error;

use crate::bounds::{hdoc_id_radius_raw, BoundsError, LilParams};
use crate::env::RewardSource;
use crate::instance::BanditInstance;
use crate::outcome::{score_outcome, ArmLabel, ArmState, IdentificationEvent, RunOutcome};
use crate::Real;

/// The three identification strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    LilHdoc,
    Hdoc,
    LucbG,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::LilHdoc, Algorithm::Hdoc, Algorithm::LucbG];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::LilHdoc => "lilhdoc",
            Algorithm::Hdoc => "hdoc",
            Algorithm::LucbG => "lucbg",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lilhdoc" => Ok(Algorithm::LilHdoc),
            "hdoc" => Ok(Algorithm::Hdoc),
            "lucbg" => Ok(Algorithm::LucbG),
            other => Err(format!(
                "unknown algorithm '{other}' (expected lilhdoc, hdoc or lucbg)"
            )),
        }
    }
}

/// Configuration of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgoConfig {
    pub algorithm: Algorithm,
    /// Acceptance error rate δ. Must be below 1/e for lil'HDoC, below 1 for
    /// the baselines.
    pub delta: Real,
    /// Base seed recorded with the run; the caller derives the environment
    /// from it.
    pub seed: u64,
    /// Hard cap on total pulls. Zero-gap arms are never identifiable, so
    /// runs on such instances stop here and report `truncated`.
    pub max_total_pulls: u64,
}

/// Errors detected before the first pull.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("delta must lie in (0, 1), got {0}")]
    DeltaOutOfRange(Real),
    #[error("budget must cover at least one pull per arm: budget {budget} < K = {k}")]
    BudgetTooSmall { budget: u64, k: usize },
    #[error("lil'HDoC parameterization failed: {0}")]
    Bounds(#[from] BoundsError),
}

impl AlgoConfig {
    pub fn validate(&self, k: usize) -> Result<(), ConfigError> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(ConfigError::DeltaOutOfRange(self.delta));
        }
        if self.max_total_pulls < k as u64 {
            return Err(ConfigError::BudgetTooSmall {
                budget: self.max_total_pulls,
                k,
            });
        }
        Ok(())
    }
}

/// Outcome of testing one arm against the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentifyResult {
    Good,
    Bad,
    Undecided,
}

/// Threshold test: `Good` iff `μ̂ − radius ≥ ξ`, `Bad` iff `μ̂ + radius ≤ ξ`,
/// otherwise `Undecided`. An infinite radius can never decide.
pub fn identify_check(mean: Real, radius: Real, xi: Real) -> IdentifyResult {
    if mean - radius >= xi {
        IdentifyResult::Good
    } else if mean + radius <= xi {
        IdentifyResult::Bad
    } else {
        IdentifyResult::Undecided
    }
}

/// Resolved sampling/identification rules for one run.
struct Policy {
    algorithm: Algorithm,
    k: usize,
    delta: Real,
    lil: Option<LilParams<Real>>,
}

impl Policy {
    fn new(algorithm: Algorithm, k: usize, delta: Real) -> Result<Self, ConfigError> {
        let lil = match algorithm {
            Algorithm::LilHdoc => Some(LilParams::solve(k, delta)?),
            Algorithm::Hdoc | Algorithm::LucbG => None,
        };
        Ok(Self {
            algorithm,
            k,
            delta,
            lil,
        })
    }

    fn init_pulls(&self) -> u64 {
        self.lil.as_ref().map_or(1, |p| p.t)
    }

    fn id_radius(&self, n: u64) -> Real {
        match &self.lil {
            Some(p) => p.id_radius(n),
            None => hdoc_id_radius_raw(n as Real, self.k, self.delta),
        }
    }

    fn sampling_index(&self, state: &ArmState, ln_t: Real) -> Real {
        let n = state.pulls() as Real;
        let bonus = match self.algorithm {
            Algorithm::Hdoc | Algorithm::LilHdoc => (ln_t / (2.0 * n)).sqrt(),
            Algorithm::LucbG => hdoc_id_radius_raw(n, self.k, self.delta),
        };
        state.mean() + bonus
    }
}

/// Checks a configuration against an instance without pulling anything:
/// delta and budget ranges, plus lil'HDoC's solver preconditions.
pub fn validate_config(instance: &BanditInstance, config: &AlgoConfig) -> Result<(), ConfigError> {
    config.validate(instance.num_arms())?;
    Policy::new(config.algorithm, instance.num_arms(), config.delta).map(|_| ())
}

/// Mutable state of one episode: per-arm statistics, the active set, and
/// the event log.
struct EpisodeState {
    arms: Vec<ArmState>,
    active: Vec<usize>,
    events: Vec<IdentificationEvent>,
    tau_lambda: Vec<u64>,
}

impl EpisodeState {
    fn new(k: usize) -> Self {
        Self {
            arms: vec![ArmState::default(); k],
            active: (0..k).collect(),
            events: Vec::with_capacity(k),
            tau_lambda: Vec::new(),
        }
    }

    /// Tests `arm` against the threshold; on a verdict, records the event
    /// at round `t` and removes the arm from the active set.
    fn identify(&mut self, policy: &Policy, arm: usize, xi: Real, t: u64) {
        let state = &self.arms[arm];
        let mean = state.mean();
        let radius = policy.id_radius(state.pulls());
        let label = match identify_check(mean, radius, xi) {
            IdentifyResult::Good => ArmLabel::Good,
            IdentifyResult::Bad => ArmLabel::Bad,
            IdentifyResult::Undecided => return,
        };
        if label == ArmLabel::Good {
            self.tau_lambda.push(t);
        }
        self.events.push(IdentificationEvent {
            arm,
            label,
            round: t,
            mean,
            radius,
        });
        self.active.retain(|&a| a != arm);
    }

    /// Argmax of the sampling index over the active set; the ascending scan
    /// with strict improvement sends ties to the lowest arm index.
    fn best_active_arm(&self, policy: &Policy, ln_t: Real) -> usize {
        let mut chosen = self.active[0];
        let mut best = Real::NEG_INFINITY;
        for &arm in &self.active {
            let index = policy.sampling_index(&self.arms[arm], ln_t);
            if index > best {
                best = index;
                chosen = arm;
            }
        }
        chosen
    }
}

/// Runs one GAI episode on `instance`, drawing rewards from `env`.
///
/// Deterministic: the outcome is a pure function of `(instance, config,
/// env)`. Budget exhaustion yields a truncated outcome, not an error;
/// invalid configuration errors before any pull.
pub fn run_gai<E: RewardSource>(
    instance: &BanditInstance,
    config: &AlgoConfig,
    env: &mut E,
) -> Result<RunOutcome, ConfigError> {
    let k = instance.num_arms();
    config.validate(k)?;
    let policy = Policy::new(config.algorithm, k, config.delta)?;
    let xi = instance.threshold();
    let budget = config.max_total_pulls;

    let mut state = EpisodeState::new(k);
    let mut t: u64 = 0;
    let mut truncated = false;

    // Warm-up: every arm in index order; each arm is tested as soon as its
    // own warm-up completes.
    let init_pulls = policy.init_pulls();
    'warmup: for arm in 0..k {
        for _ in 0..init_pulls {
            if t >= budget {
                truncated = true;
                break 'warmup;
            }
            state.arms[arm].record(env.draw(arm));
            t += 1;
        }
        state.identify(&policy, arm, xi, t);
    }

    if !truncated {
        while !state.active.is_empty() {
            if t >= budget {
                truncated = true;
                break;
            }
            let chosen = state.best_active_arm(&policy, (t as Real).ln());
            state.arms[chosen].record(env.draw(chosen));
            t += 1;
            state.identify(&policy, chosen, xi, t);
        }
    }

    let tau_stop = state.active.is_empty().then_some(t);
    let mut outcome = RunOutcome {
        events: state.events,
        tau_lambda: state.tau_lambda,
        tau_stop,
        truncated,
        misclassified: false,
        pulls_per_arm: state.arms.iter().map(ArmState::pulls).collect(),
    };
    outcome.misclassified = score_outcome(&outcome, instance);
    Ok(outcome)
}
