//! Converting per-item score tables into bandit instances.
//!
//! A score file is delimited text with one numeric column; [`load_scores`]
//! reads it and [`convert`] turns the scores into arm means by an optional
//! division and affine range map, then sets the threshold halfway between
//! the k-th and (k+1)-th largest transformed score. Three ready-made
//! recipes are shipped as presets:
//!
//! - [`covertype_recipe`] — class frequencies divided by 10, rank 3.
//! - [`jester_recipe`] — average ratings in `[-10, 10]`, divided by 10 and
//!   then mapped `[-1, 1] → [0, 1]`, i.e. `r ↦ r/20 + 0.5`; rank 25.
//! - [`movielens_recipe`] — average ratings in `[0, 5]` divided by 100,
//!   rank 168.

use std::path::Path;

use thiserror::Error;

use crate::instance::{BanditInstance, InstanceError};
use crate::Real;

/// Errors from score loading and conversion.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("divide_by must be positive and finite, got {0}")]
    BadDivisor(Real),
    #[error("affine source range is empty: lo {0} = hi {1}")]
    EmptyAffineSource(Real, Real),
    #[error("threshold rank must satisfy 1 <= k < item count; got k = {k} for {items} items")]
    RankOutOfRange { k: usize, items: usize },
    #[error("need at least 2 scores, got {0}")]
    TooFewScores(usize),
    #[error("item {index} transforms to {value}, outside [0, 1]")]
    TransformedOutOfRange { index: usize, value: Real },
    #[error("cannot open {path}: {source}")]
    Open {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot read record at line {line}: {message}")]
    BadRecord { line: u64, message: String },
    #[error("line {line} has no column {column} (found {found} fields)")]
    MissingColumn {
        line: u64,
        column: usize,
        found: usize,
    },
    #[error("line {line}, column {column}: cannot parse '{text}' as a number")]
    BadNumber {
        line: u64,
        column: usize,
        text: String,
    },
    #[error("score file is empty")]
    EmptyFile,
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Linear map from `[source_lo, source_hi]` onto `[target_lo, target_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub source_lo: Real,
    pub source_hi: Real,
    pub target_lo: Real,
    pub target_hi: Real,
}

impl AffineMap {
    pub fn apply(&self, x: Real) -> Real {
        self.target_lo
            + (x - self.source_lo) * (self.target_hi - self.target_lo)
                / (self.source_hi - self.source_lo)
    }
}

/// How raw scores become arm means, and where the threshold sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSpec {
    /// Scores are divided by this first.
    pub divide_by: Real,
    /// Optional range map applied after the division.
    pub affine: Option<AffineMap>,
    /// The threshold is the arithmetic mean of the k-th and (k+1)-th
    /// largest transformed scores, so exactly `k` items rank above it
    /// (barring ties at the boundary).
    pub threshold_rank: usize,
}

impl TransformSpec {
    fn validate(&self) -> Result<(), IngestError> {
        if !(self.divide_by > 0.0 && self.divide_by.is_finite()) {
            return Err(IngestError::BadDivisor(self.divide_by));
        }
        if let Some(a) = &self.affine {
            if a.source_lo == a.source_hi {
                return Err(IngestError::EmptyAffineSource(a.source_lo, a.source_hi));
            }
        }
        Ok(())
    }
}

/// Covertype recipe: per-class relative frequencies divided by 10,
/// threshold between the 3rd and 4th best arm.
pub fn covertype_recipe() -> TransformSpec {
    TransformSpec {
        divide_by: 10.0,
        affine: None,
        threshold_rank: 3,
    }
}

/// Jester recipe: `r ↦ r/20 + 0.5` via a ÷10 then `[-1,1] → [0,1]`,
/// threshold between the 25th and 26th best joke.
pub fn jester_recipe() -> TransformSpec {
    TransformSpec {
        divide_by: 10.0,
        affine: Some(AffineMap {
            source_lo: -1.0,
            source_hi: 1.0,
            target_lo: 0.0,
            target_hi: 1.0,
        }),
        threshold_rank: 25,
    }
}

/// MovieLens recipe: average ratings divided by 100, threshold between the
/// 168th and 169th best movie.
pub fn movielens_recipe() -> TransformSpec {
    TransformSpec {
        divide_by: 100.0,
        affine: None,
        threshold_rank: 168,
    }
}

/// Midpoint of the k-th and (k+1)-th largest values (1-based rank).
pub fn threshold_by_rank(values: &[Real], k: usize) -> Result<Real, IngestError> {
    if k == 0 || k >= values.len() {
        return Err(IngestError::RankOutOfRange {
            k,
            items: values.len(),
        });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("scores are not NaN"));
    Ok((sorted[k - 1] + sorted[k]) / 2.0)
}

/// A converted instance, plus a flag for the degenerate case where the
/// boundary scores tie and the threshold gap at the boundary is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Conversion {
    pub instance: BanditInstance,
    /// True when the k-th and (k+1)-th largest transformed scores are
    /// equal; the threshold then coincides with both and those arms can
    /// never be identified.
    pub zero_gap: bool,
}

/// Transforms `scores` into arm means (original order preserved) and
/// thresholds at the configured rank.
pub fn convert(
    scores: &[Real],
    spec: &TransformSpec,
    name: &str,
) -> Result<Conversion, IngestError> {
    spec.validate()?;
    if scores.len() < 2 {
        return Err(IngestError::TooFewScores(scores.len()));
    }
    let means: Vec<Real> = scores
        .iter()
        .map(|&s| {
            let divided = s / spec.divide_by;
            match &spec.affine {
                Some(a) => a.apply(divided),
                None => divided,
            }
        })
        .collect();
    for (index, &value) in means.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) || value.is_nan() {
            return Err(IngestError::TransformedOutOfRange { index, value });
        }
    }
    let threshold = threshold_by_rank(&means, spec.threshold_rank)?;
    let mut sorted = means.clone();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("means are not NaN"));
    let zero_gap = sorted[spec.threshold_rank - 1] == sorted[spec.threshold_rank];
    let instance = BanditInstance::new(name, threshold, means)?;
    Ok(Conversion { instance, zero_gap })
}

/// Which column of a delimited file holds the score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnSpec {
    /// Field delimiter, e.g. `b','`.
    pub delimiter: u8,
    /// Zero-based column index.
    pub column: usize,
    /// Skip the first row.
    pub skip_header: bool,
}

impl Default for ColumnSpec {
    fn default() -> Self {
        Self {
            delimiter: b',',
            column: 0,
            skip_header: false,
        }
    }
}

/// Reads the score column of a delimited text file, in file order.
/// Unparsable rows fail with their line number.
pub fn load_scores(path: impl AsRef<Path>, spec: &ColumnSpec) -> Result<Vec<Real>, IngestError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| IngestError::Open {
        path: path.display().to_string(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .has_headers(spec.skip_header)
        .flexible(true)
        .from_reader(file);

    let mut scores = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| IngestError::BadRecord {
            line: e.position().map_or(0, csv::Position::line),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, csv::Position::line);
        let field = record
            .get(spec.column)
            .ok_or(IngestError::MissingColumn {
                line,
                column: spec.column,
                found: record.len(),
            })?;
        let value: Real = field
            .trim()
            .parse()
            .map_err(|_| IngestError::BadNumber {
                line,
                column: spec.column,
                text: field.to_string(),
            })?;
        scores.push(value);
    }
    if scores.is_empty() {
        return Err(IngestError::EmptyFile);
    }
    Ok(scores)
}
