//! Time-varying risk scores `q(t, z)`.
//!
//! Pairs are compared at the first event time of the pair: record `i`
//! outranks `j` at time `t` when `q(t, z_i) > q(t, z_j)`. Ties mean exact
//! equality; no epsilon tolerance is applied anywhere, so constant-score
//! families tie structurally and analytic coincidences tie exactly.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{ModelError, SurvivalModel};

/// Which end of a flat survival stretch a quantile refers to. The two
/// conventions coincide whenever the survival function is strictly
/// decreasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuantileConvention {
    /// Smallest `t` with `S(t) <= s` (the standard lower quantile).
    #[default]
    FirstAtOrBelow,
    /// Largest `t` with `S(t) >= s`.
    LastAtOrAbove,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RiskError {
    Model(ModelError),
    DimensionMismatch { expected: usize, got: usize },
    FixedTimeOutsideWindow { t0: f64, end: f64 },
    InvalidFixedTime { t0: f64 },
    InvalidQuantileLevel { s: f64 },
}

impl fmt::Display for RiskError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RiskError::Model(e) => write!(f, "{e}"),
            RiskError::DimensionMismatch { expected, got } => write!(
                f,
                "linear predictor has {expected} coefficients but record has {got} covariates"
            ),
            RiskError::FixedTimeOutsideWindow { t0, end } => {
                write!(f, "fixed time {t0} is outside the model window [0, {end}]")
            }
            RiskError::InvalidFixedTime { t0 } => {
                write!(f, "fixed time {t0} must be positive and finite")
            }
            RiskError::InvalidQuantileLevel { s } => {
                write!(f, "quantile level {s} must lie strictly inside (0, 1)")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RiskError {}

impl From<ModelError> for RiskError {
    fn from(e: ModelError) -> Self {
        RiskError::Model(e)
    }
}

/// A risk-score family bound to a survival model (or, for the linear
/// predictor, to a coefficient vector).
pub enum RiskScore<'a> {
    /// `q(t, z) = hazard(t | z)`.
    Hazard { model: &'a dyn SurvivalModel },
    /// `q(t, z) = -S(t | z)`: survival at the event time itself.
    Antolini { model: &'a dyn SurvivalModel },
    /// `q(t, z) = -S(t0 | z)`, constant in `t`.
    FixedTimeSurvival {
        model: &'a dyn SurvivalModel,
        t0: f64,
    },
    /// `q(t, z) = -quantile(s | z)`, constant in `t`.
    QuantileTime {
        model: &'a dyn SurvivalModel,
        s: f64,
        convention: QuantileConvention,
    },
    /// `q(t, z) = z . beta`, constant in `t`.
    LinearPredictor { beta: Vec<f64> },
}

impl<'a> RiskScore<'a> {
    pub fn hazard(model: &'a dyn SurvivalModel) -> Self {
        RiskScore::Hazard { model }
    }

    pub fn antolini(model: &'a dyn SurvivalModel) -> Self {
        RiskScore::Antolini { model }
    }

    pub fn fixed_time_survival(
        model: &'a dyn SurvivalModel,
        t0: f64,
    ) -> Result<Self, RiskError> {
        if !t0.is_finite() || t0 <= 0.0 {
            return Err(RiskError::InvalidFixedTime { t0 });
        }
        if let Some(end) = model.window_end() {
            if t0 > end {
                return Err(RiskError::FixedTimeOutsideWindow { t0, end });
            }
        }
        Ok(RiskScore::FixedTimeSurvival { model, t0 })
    }

    pub fn quantile_time(model: &'a dyn SurvivalModel, s: f64) -> Result<Self, RiskError> {
        Self::quantile_time_with(model, s, QuantileConvention::default())
    }

    pub fn quantile_time_with(
        model: &'a dyn SurvivalModel,
        s: f64,
        convention: QuantileConvention,
    ) -> Result<Self, RiskError> {
        if !(s > 0.0 && s < 1.0) {
            return Err(RiskError::InvalidQuantileLevel { s });
        }
        Ok(RiskScore::QuantileTime {
            model,
            s,
            convention,
        })
    }

    pub fn linear_predictor(beta: Vec<f64>) -> Self {
        RiskScore::LinearPredictor { beta }
    }

    /// Evaluates `q(t, z)`. Higher values indicate a propensity towards
    /// earlier events.
    pub fn evaluate(&self, t: f64, z: &[f64]) -> Result<f64, RiskError> {
        match self {
            RiskScore::Hazard { model } => Ok(model.hazard(t, z)?),
            RiskScore::Antolini { model } => Ok(-model.survival(t, z)?),
            RiskScore::FixedTimeSurvival { model, t0 } => Ok(-model.survival(*t0, z)?),
            RiskScore::QuantileTime {
                model,
                s,
                convention,
            } => Ok(-model.quantile(*s, z, *convention)?),
            RiskScore::LinearPredictor { beta } => {
                if beta.len() != z.len() {
                    return Err(RiskError::DimensionMismatch {
                        expected: beta.len(),
                        got: z.len(),
                    });
                }
                Ok(beta.iter().zip(z).map(|(b, x)| b * x).sum())
            }
        }
    }

    /// Whether the score ignores its time argument, making the per-record
    /// fast concordance path applicable.
    pub fn is_time_constant(&self) -> bool {
        matches!(
            self,
            RiskScore::FixedTimeSurvival { .. }
                | RiskScore::QuantileTime { .. }
                | RiskScore::LinearPredictor { .. }
        )
    }

    pub fn label(&self) -> String {
        match self {
            RiskScore::Hazard { .. } => String::from("hazard"),
            RiskScore::Antolini { .. } => String::from("antolini"),
            RiskScore::FixedTimeSurvival { t0, .. } => format!("surv@{t0}"),
            RiskScore::QuantileTime { s, .. } => format!("quantile@{s}"),
            RiskScore::LinearPredictor { .. } => String::from("linpred"),
        }
    }
}
