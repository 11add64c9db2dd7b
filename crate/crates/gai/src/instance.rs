//! Problem instances: arm means, the goodness threshold, and derived
//! ground-truth labels and gaps.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Real;

/// Errors from instance construction and the instance file format.
#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("instance needs at least one arm")]
    NoArms,
    #[error("arm {index} has mean {mean}, outside [0, 1]")]
    MeanOutOfRange { index: usize, mean: Real },
    #[error("threshold {0} outside the open interval (0, 1)")]
    ThresholdOutOfRange(Real),
    #[error("cannot parse instance file: {0}")]
    Parse(String),
    #[error("cannot serialize instance: {0}")]
    Serialize(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

/// A Bernoulli bandit instance: one success probability per arm plus the
/// threshold `ξ` that separates good arms (`μ_i ≥ ξ`) from bad ones.
///
/// Immutable after construction; arms keep their input order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct BanditInstance {
    name: String,
    threshold: Real,
    means: Vec<Real>,
}

/// On-disk shape of an instance: a TOML document with exactly the keys
/// `name`, `threshold` and `means`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct InstanceFile {
    name: String,
    threshold: Real,
    means: Vec<Real>,
}

impl TryFrom<InstanceFile> for BanditInstance {
    type Error = InstanceError;

    fn try_from(f: InstanceFile) -> Result<Self, Self::Error> {
        BanditInstance::new(f.name, f.threshold, f.means)
    }
}

impl From<BanditInstance> for InstanceFile {
    fn from(i: BanditInstance) -> Self {
        InstanceFile {
            name: i.name,
            threshold: i.threshold,
            means: i.means,
        }
    }
}

/// The partition of arms induced by the threshold, plus per-arm gaps
/// `Δ_i = |μ_i − ξ|`. An arm with `μ_i = ξ` counts as good.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub good: Vec<usize>,
    pub bad: Vec<usize>,
    pub gaps: Vec<Real>,
}

impl BanditInstance {
    /// Validates and builds an instance: `K ≥ 1`, every mean in `[0, 1]`,
    /// `0 < ξ < 1`.
    pub fn new(
        name: impl Into<String>,
        threshold: Real,
        means: Vec<Real>,
    ) -> Result<Self, InstanceError> {
        if means.is_empty() {
            return Err(InstanceError::NoArms);
        }
        for (index, &mean) in means.iter().enumerate() {
            if !(0.0..=1.0).contains(&mean) || mean.is_nan() {
                return Err(InstanceError::MeanOutOfRange { index, mean });
            }
        }
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(InstanceError::ThresholdOutOfRange(threshold));
        }
        Ok(Self {
            name: name.into(),
            threshold,
            means,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn threshold(&self) -> Real {
        self.threshold
    }

    pub fn means(&self) -> &[Real] {
        &self.means
    }

    /// Number of arms `K`.
    pub fn num_arms(&self) -> usize {
        self.means.len()
    }

    /// Whether arm `i` is good, i.e. `μ_i ≥ ξ`.
    pub fn is_good(&self, arm: usize) -> bool {
        self.means[arm] >= self.threshold
    }

    /// Count of good arms `m`.
    pub fn num_good(&self) -> usize {
        self.means.iter().filter(|&&m| m >= self.threshold).count()
    }

    /// Threshold gap `Δ_i = |μ_i − ξ|` of arm `i`.
    pub fn gap(&self, arm: usize) -> Real {
        (self.means[arm] - self.threshold).abs()
    }

    /// Mean difference `Δ_{i,j} = μ_i − μ_j`.
    pub fn pair_gap(&self, i: usize, j: usize) -> Real {
        self.means[i] - self.means[j]
    }

    /// Hardness gap `Δ = min(min_i Δ_i, min_j Δ_{(j),(j+1)}/2)`, where the
    /// second minimum runs over adjacent arms after sorting means in
    /// descending order.
    pub fn min_gap(&self) -> Real {
        let mut delta = self
            .means
            .iter()
            .map(|&m| (m - self.threshold).abs())
            .fold(Real::INFINITY, Real::min);
        if self.means.len() > 1 {
            let mut sorted = self.means.clone();
            sorted.sort_by(|a, b| b.partial_cmp(a).expect("means are not NaN"));
            for pair in sorted.windows(2) {
                delta = delta.min((pair[0] - pair[1]) / 2.0);
            }
        }
        delta
    }

    /// Partition of the arms into good and bad, with the per-arm gaps.
    pub fn ground_truth(&self) -> GroundTruth {
        let mut good = Vec::new();
        let mut bad = Vec::new();
        let mut gaps = Vec::with_capacity(self.means.len());
        for (i, &mean) in self.means.iter().enumerate() {
            if mean >= self.threshold {
                good.push(i);
            } else {
                bad.push(i);
            }
            gaps.push((mean - self.threshold).abs());
        }
        GroundTruth { good, bad, gaps }
    }

    /// Parses the TOML instance format. Errors carry the offending
    /// line/key as reported by the parser.
    pub fn from_toml_str(text: &str) -> Result<Self, InstanceError> {
        let file: InstanceFile =
            toml::from_str(text).map_err(|e| InstanceError::Parse(e.to_string()))?;
        file.try_into()
    }

    /// Serializes to the TOML instance format. Floats round-trip exactly.
    pub fn to_toml_string(&self) -> Result<String, InstanceError> {
        toml::to_string(&InstanceFile::from(self.clone()))
            .map_err(|e| InstanceError::Serialize(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, InstanceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), InstanceError> {
        let path = path.as_ref();
        let text = self.to_toml_string()?;
        std::fs::write(path, text).map_err(|source| InstanceError::Write {
            path: path.display().to_string(),
            source,
        })
    }
}

impl fmt::Display for BanditInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (K = {}, xi = {}, {} good)",
            self.name,
            self.num_arms(),
            self.threshold,
            self.num_good()
        )
    }
}
