//! Per-run state and results: arm statistics, identification events, and
//! aggregates over independent runs.

use serde::{Deserialize, Serialize};

use crate::algorithms::Algorithm;
use crate::instance::BanditInstance;
use crate::Real;

/// Pull count and reward sum of one arm. The empirical mean is defined only
/// after the first pull.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ArmState {
    pulls: u64,
    reward_sum: u64,
}

impl ArmState {
    /// Records one Bernoulli reward (0 or 1).
    pub fn record(&mut self, reward: u8) {
        debug_assert!(reward <= 1, "Bernoulli rewards are 0 or 1");
        self.pulls += 1;
        self.reward_sum += u64::from(reward);
    }

    pub fn pulls(&self) -> u64 {
        self.pulls
    }

    pub fn reward_sum(&self) -> u64 {
        self.reward_sum
    }

    /// Empirical mean `μ̂`; panics before the first pull.
    pub fn mean(&self) -> Real {
        assert!(self.pulls > 0, "empirical mean needs at least one pull");
        self.reward_sum as Real / self.pulls as Real
    }
}

/// Good/bad verdict attached to an identification event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArmLabel {
    Good,
    Bad,
}

/// One identification: arm `arm` was labelled at total sample count
/// `round`, when its empirical mean and radius were as recorded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentificationEvent {
    pub arm: usize,
    pub label: ArmLabel,
    /// Total pulls across all arms at the moment the label was emitted.
    pub round: u64,
    /// Empirical mean of the arm at emission time.
    pub mean: Real,
    /// Identification radius at emission time.
    pub radius: Real,
}

/// Everything one run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// Identification events in emission order. Each arm appears at most
    /// once; in a non-truncated run, exactly once.
    pub events: Vec<IdentificationEvent>,
    /// Entry `λ-1` is the total sample count when the λ-th Good label was
    /// emitted. Shorter than the number of good arms if the run never got
    /// there.
    pub tau_lambda: Vec<u64>,
    /// Total sample count when the active set emptied; absent when the
    /// budget cap fired first.
    pub tau_stop: Option<u64>,
    /// Whether the budget cap cut the run short.
    pub truncated: bool,
    /// Whether any emitted label contradicts the ground truth.
    pub misclassified: bool,
    /// Final pull count per arm.
    pub pulls_per_arm: Vec<u64>,
}

impl RunOutcome {
    /// Total pulls spent by the run.
    pub fn total_pulls(&self) -> u64 {
        self.pulls_per_arm.iter().sum()
    }

    /// The event that labelled `arm`, if any.
    pub fn event_for(&self, arm: usize) -> Option<&IdentificationEvent> {
        self.events.iter().find(|e| e.arm == arm)
    }
}

/// True iff any event labels a good arm `Bad` or a bad arm `Good`.
/// Truncation is not an error; unlabelled arms do not count.
pub fn score_outcome(outcome: &RunOutcome, instance: &BanditInstance) -> bool {
    outcome.events.iter().any(|e| {
        let truly_good = instance.is_good(e.arm);
        match e.label {
            ArmLabel::Good => !truly_good,
            ArmLabel::Bad => truly_good,
        }
    })
}

/// One aggregate row: sample-count statistics for a `(algorithm, λ)` pair,
/// or for `τ_stop` when `lambda` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct StatRow {
    pub algorithm: Algorithm,
    /// `Some(λ)` for the λ-th good-arm output, `None` for `τ_stop`.
    pub lambda: Option<u32>,
    pub mean: Real,
    pub stddev: Real,
    /// Number of runs that contributed to this row. Runs that never reached
    /// this λ (or truncated before stopping) are excluded here and counted
    /// in `AggregateStats::truncated_runs`.
    pub runs: u32,
}

/// Per-λ and τ_stop statistics over a batch of independent runs.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateStats {
    pub rows: Vec<StatRow>,
    /// Runs executed per algorithm.
    pub total_runs: u32,
    /// Truncated run count per algorithm, in the same order the algorithms
    /// were executed. Reported, never silently dropped.
    pub truncated_runs: Vec<(Algorithm, u32)>,
    /// Divisor applied in human-readable summaries only; files carry raw
    /// values.
    pub scale_divisor: Real,
}

/// Population mean and standard deviation of integer sample counts.
/// A single value has standard deviation 0.
pub(crate) fn mean_stddev(values: &[u64]) -> (Real, Real) {
    assert!(!values.is_empty());
    let n = values.len() as Real;
    let mean = values.iter().map(|&v| v as Real).sum::<Real>() / n;
    let var = values
        .iter()
        .map(|&v| {
            let d = v as Real - mean;
            d * d
        })
        .sum::<Real>()
        / n;
    (mean, var.sqrt())
}
