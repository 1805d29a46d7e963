//! Core observation types and the dataset container.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math;

/// Whether event times live on the continuous half-line or on the positive
/// integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeMode {
    Continuous,
    Discrete,
}

/// One observation: time at risk, event indicator and covariate vector.
///
/// `event == true` means the event was observed; `false` means the
/// observation was right-censored at `time`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalRecord {
    pub time: f64,
    pub event: bool,
    pub covariates: Vec<f64>,
}

impl SurvivalRecord {
    pub fn new(time: f64, event: bool, covariates: Vec<f64>) -> Self {
        Self {
            time,
            event,
            covariates,
        }
    }
}

/// An immutable ordered collection of records sharing a time mode and a
/// covariate layout.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalDataset {
    records: Vec<SurvivalRecord>,
    mode: TimeMode,
    covariate_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetError {
    Empty,
    CovariateDimMismatch { row: usize, expected: usize, got: usize },
    InvalidTime { row: usize, time: f64 },
    NonIntegerDiscreteTime { row: usize, time: f64 },
}

impl fmt::Display for DatasetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetError::Empty => write!(f, "empty dataset"),
            DatasetError::CovariateDimMismatch { row, expected, got } => write!(
                f,
                "row {row}: expected {expected} covariates, got {got}"
            ),
            DatasetError::InvalidTime { row, time } => {
                write!(f, "row {row}: time {time} must be finite and non-negative")
            }
            DatasetError::NonIntegerDiscreteTime { row, time } => write!(
                f,
                "row {row}: discrete mode requires times in {{1, 2, ...}}, got {time}"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DatasetError {}

impl SurvivalDataset {
    /// Validates and wraps a record list. Times must be finite and
    /// non-negative; in discrete mode they must be positive integers; all
    /// records must carry `covariate_names.len()` covariates.
    pub fn new(
        records: Vec<SurvivalRecord>,
        mode: TimeMode,
        covariate_names: Vec<String>,
    ) -> Result<Self, DatasetError> {
        if records.is_empty() {
            return Err(DatasetError::Empty);
        }
        let dim = covariate_names.len();
        for (row, rec) in records.iter().enumerate() {
            if !rec.time.is_finite() || rec.time < 0.0 {
                return Err(DatasetError::InvalidTime {
                    row,
                    time: rec.time,
                });
            }
            if mode == TimeMode::Discrete
                && (rec.time < 1.0 || math::floor(rec.time) != rec.time)
            {
                return Err(DatasetError::NonIntegerDiscreteTime {
                    row,
                    time: rec.time,
                });
            }
            if rec.covariates.len() != dim {
                return Err(DatasetError::CovariateDimMismatch {
                    row,
                    expected: dim,
                    got: rec.covariates.len(),
                });
            }
        }
        Ok(Self {
            records,
            mode,
            covariate_names,
        })
    }

    pub fn records(&self) -> &[SurvivalRecord] {
        &self.records
    }

    pub fn mode(&self) -> TimeMode {
        self.mode
    }

    pub fn covariate_names(&self) -> &[String] {
        &self.covariate_names
    }

    pub fn covariate_dim(&self) -> usize {
        self.covariate_names.len()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Sorted distinct values of one covariate column. Useful for grouping
    /// when a column holds group labels.
    pub fn distinct_covariate_values(&self, col: usize) -> Vec<f64> {
        let mut values: Vec<f64> = self.records.iter().map(|r| r.covariates[col]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup_by(|a, b| a == b);
        values
    }

    /// A copy of the dataset administratively re-censored at `horizon`:
    /// any record with `time > horizon` becomes a censored observation at
    /// `horizon`.
    pub fn censored_at(&self, horizon: f64) -> SurvivalDataset {
        let records = self
            .records
            .iter()
            .map(|r| {
                if r.time > horizon {
                    SurvivalRecord::new(horizon, false, r.covariates.clone())
                } else {
                    r.clone()
                }
            })
            .collect();
        SurvivalDataset {
            records,
            mode: self.mode,
            covariate_names: self.covariate_names.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| alloc::format!("z{i}")).collect()
    }

    #[test]
    fn rejects_empty() {
        let err = SurvivalDataset::new(vec![], TimeMode::Continuous, names(1)).unwrap_err();
        assert_eq!(err, DatasetError::Empty);
        assert_eq!(err.to_string(), "empty dataset");
    }

    #[test]
    fn rejects_negative_time() {
        let recs = vec![SurvivalRecord::new(-0.5, true, vec![0.0])];
        let err = SurvivalDataset::new(recs, TimeMode::Continuous, names(1)).unwrap_err();
        assert!(matches!(err, DatasetError::InvalidTime { row: 0, .. }));
    }

    #[test]
    fn rejects_non_integer_discrete_time() {
        let recs = vec![
            SurvivalRecord::new(1.0, true, vec![0.0]),
            SurvivalRecord::new(2.5, false, vec![0.0]),
        ];
        let err = SurvivalDataset::new(recs, TimeMode::Discrete, names(1)).unwrap_err();
        assert!(matches!(err, DatasetError::NonIntegerDiscreteTime { row: 1, .. }));
    }

    #[test]
    fn rejects_ragged_covariates() {
        let recs = vec![
            SurvivalRecord::new(1.0, true, vec![0.0, 1.0]),
            SurvivalRecord::new(2.0, false, vec![0.0]),
        ];
        let err = SurvivalDataset::new(recs, TimeMode::Continuous, names(2)).unwrap_err();
        assert!(matches!(
            err,
            DatasetError::CovariateDimMismatch {
                row: 1,
                expected: 2,
                got: 1
            }
        ));
    }

    #[test]
    fn censoring_clip_preserves_order_and_labels() {
        let recs = vec![
            SurvivalRecord::new(0.4, true, vec![1.0]),
            SurvivalRecord::new(1.7, true, vec![0.0]),
            SurvivalRecord::new(2.0, false, vec![1.0]),
        ];
        let data = SurvivalDataset::new(recs, TimeMode::Continuous, names(1)).unwrap();
        let clipped = data.censored_at(1.0);
        assert_eq!(clipped.records()[0].time, 0.4);
        assert!(clipped.records()[0].event);
        assert_eq!(clipped.records()[1].time, 1.0);
        assert!(!clipped.records()[1].event);
        assert_eq!(clipped.records()[2].time, 1.0);
        assert!(!clipped.records()[2].event);
        assert_eq!(clipped.covariate_names(), data.covariate_names());
    }

    #[test]
    fn distinct_values_sorted() {
        let recs = vec![
            SurvivalRecord::new(1.0, true, vec![1.0]),
            SurvivalRecord::new(2.0, true, vec![0.0]),
            SurvivalRecord::new(3.0, true, vec![1.0]),
        ];
        let data = SurvivalDataset::new(recs, TimeMode::Continuous, names(1)).unwrap();
        assert_eq!(data.distinct_covariate_values(0), vec![0.0, 1.0]);
    }
}
