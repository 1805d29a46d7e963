//! The survival-model abstraction risk scores are built on, plus the two
//! analytic implementations (grouped piecewise hazards and grouped discrete
//! hazard tables).

use alloc::vec::Vec;
use core::fmt;

use crate::discrete::DiscreteHazard;
use crate::hazard::{HazardError, PiecewiseHazard};
use crate::math;
use crate::risk::QuantileConvention;
use crate::scenario::{GroupHazards, ScenarioSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    EmptyCovariates,
    UnknownGroup { value: f64 },
    OutOfWindow { t: f64, end: f64 },
    QuantileOutOfRange { s: f64 },
    HazardUnavailable { t: f64 },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::EmptyCovariates => write!(f, "covariate vector is empty"),
            ModelError::UnknownGroup { value } => {
                write!(f, "no group with label {value}")
            }
            ModelError::OutOfWindow { t, end } => {
                write!(f, "query time {t} is outside the model window [0, {end}]")
            }
            ModelError::QuantileOutOfRange { s } => {
                write!(f, "quantile level {s} must lie strictly inside (0, 1)")
            }
            ModelError::HazardUnavailable { t } => {
                write!(f, "hazard estimate unavailable at {t}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ModelError {}

/// Provider of `S(t|z)`, the hazard at `(t, z)` and survival quantiles.
///
/// Quantiles may return `f64::INFINITY` when the requested level is never
/// reached inside the model's window; callers compare scores, and an
/// unreached quantile legitimately ranks as the longest survival.
pub trait SurvivalModel {
    fn survival(&self, t: f64, z: &[f64]) -> Result<f64, ModelError>;

    fn hazard(&self, t: f64, z: &[f64]) -> Result<f64, ModelError>;

    fn quantile(
        &self,
        s: f64,
        z: &[f64],
        convention: QuantileConvention,
    ) -> Result<f64, ModelError>;

    /// Right edge of the window the model can be queried on, if bounded.
    fn window_end(&self) -> Option<f64> {
        None
    }
}

fn group_lookup<'a, T>(groups: &'a [(f64, T)], z: &[f64]) -> Result<&'a T, ModelError> {
    let label = *z.first().ok_or(ModelError::EmptyCovariates)?;
    groups
        .iter()
        .find(|(key, _)| *key == label)
        .map(|(_, v)| v)
        .ok_or(ModelError::UnknownGroup { value: label })
}

/// One analytic piecewise hazard per group label; a record belongs to the
/// group whose key equals its first covariate.
#[derive(Debug, Clone)]
pub struct GroupedHazardModel {
    groups: Vec<(f64, PiecewiseHazard)>,
}

impl GroupedHazardModel {
    pub fn new(groups: Vec<(f64, PiecewiseHazard)>) -> Self {
        Self { groups }
    }

    /// Group labels `0.0, 1.0, ...` in the order of the scenario's hazards.
    pub fn from_scenario(spec: &ScenarioSpec) -> Option<Self> {
        match &spec.hazards {
            GroupHazards::Continuous(hazards) => Some(Self::new(
                hazards
                    .iter()
                    .enumerate()
                    .map(|(i, h)| (i as f64, h.clone()))
                    .collect(),
            )),
            GroupHazards::Discrete(_) => None,
        }
    }

    pub fn group(&self, label: f64) -> Option<&PiecewiseHazard> {
        self.groups
            .iter()
            .find(|(key, _)| *key == label)
            .map(|(_, h)| h)
    }
}

impl SurvivalModel for GroupedHazardModel {
    fn survival(&self, t: f64, z: &[f64]) -> Result<f64, ModelError> {
        Ok(group_lookup(&self.groups, z)?.survival_at(t))
    }

    fn hazard(&self, t: f64, z: &[f64]) -> Result<f64, ModelError> {
        Ok(group_lookup(&self.groups, z)?.hazard_at(t))
    }

    fn quantile(
        &self,
        s: f64,
        z: &[f64],
        convention: QuantileConvention,
    ) -> Result<f64, ModelError> {
        let hazard = group_lookup(&self.groups, z)?;
        let lower = match hazard.quantile_time(s) {
            Ok(t) => t,
            Err(HazardError::QuantileUnreachable { .. }) => return Ok(f64::INFINITY),
            Err(HazardError::QuantileOutOfRange { s }) => {
                return Err(ModelError::QuantileOutOfRange { s })
            }
            Err(_) => unreachable!("quantile_time only fails on range or reachability"),
        };
        match convention {
            QuantileConvention::FirstAtOrBelow => Ok(lower),
            QuantileConvention::LastAtOrAbove => {
                // Extend through any zero-hazard stretch where the survival
                // stays exactly at level s.
                let mut t = lower;
                for seg in hazard.segments() {
                    if seg.end <= t {
                        continue;
                    }
                    let from = t.max(seg.start);
                    if hazard.hazard_at(from) == 0.0 && seg.slope == 0.0 {
                        if seg.end.is_finite() {
                            t = seg.end;
                        } else {
                            return Ok(f64::INFINITY);
                        }
                    } else {
                        break;
                    }
                }
                Ok(t)
            }
        }
    }
}

/// One discrete hazard table per group label.
#[derive(Debug, Clone)]
pub struct GroupedDiscreteModel {
    groups: Vec<(f64, DiscreteHazard)>,
}

impl GroupedDiscreteModel {
    pub fn new(groups: Vec<(f64, DiscreteHazard)>) -> Self {
        Self { groups }
    }

    pub fn from_scenario(spec: &ScenarioSpec) -> Option<Self> {
        match &spec.hazards {
            GroupHazards::Discrete(hazards) => Some(Self::new(
                hazards
                    .iter()
                    .enumerate()
                    .map(|(i, h)| (i as f64, h.clone()))
                    .collect(),
            )),
            GroupHazards::Continuous(_) => None,
        }
    }

    fn bin(&self, t: f64) -> Result<usize, ModelError> {
        let horizon = self
            .groups
            .first()
            .map(|(_, h)| h.horizon())
            .unwrap_or(0);
        if t < 1.0 || t > horizon as f64 || math::floor(t) != t {
            return Err(ModelError::OutOfWindow {
                t,
                end: horizon as f64,
            });
        }
        Ok(t as usize)
    }
}

impl SurvivalModel for GroupedDiscreteModel {
    fn survival(&self, t: f64, z: &[f64]) -> Result<f64, ModelError> {
        let bin = self.bin(t)?;
        Ok(group_lookup(&self.groups, z)?.survival_after(bin))
    }

    fn hazard(&self, t: f64, z: &[f64]) -> Result<f64, ModelError> {
        let bin = self.bin(t)?;
        Ok(group_lookup(&self.groups, z)?.hazard(bin))
    }

    fn quantile(
        &self,
        s: f64,
        z: &[f64],
        convention: QuantileConvention,
    ) -> Result<f64, ModelError> {
        if !(s > 0.0 && s < 1.0) {
            return Err(ModelError::QuantileOutOfRange { s });
        }
        let table = group_lookup(&self.groups, z)?;
        let horizon = table.horizon();
        match convention {
            QuantileConvention::FirstAtOrBelow => {
                for t in 1..=horizon {
                    if table.survival_after(t) <= s {
                        return Ok(t as f64);
                    }
                }
                Ok(f64::INFINITY)
            }
            QuantileConvention::LastAtOrAbove => {
                let mut last = 0.0;
                for t in 1..=horizon {
                    if table.survival_after(t) >= s {
                        last = t as f64;
                    }
                }
                Ok(last)
            }
        }
    }

    fn window_end(&self) -> Option<f64> {
        self.groups.first().map(|(_, h)| h.horizon() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{builtin_scenario, BuiltinScenario};
    use alloc::vec;

    #[test]
    fn grouped_model_dispatches_on_first_covariate() {
        let spec = builtin_scenario(BuiltinScenario::M0);
        let model = GroupedHazardModel::from_scenario(&spec).unwrap();
        assert_eq!(model.hazard(0.4, &[0.0]).unwrap(), 0.5);
        assert_eq!(model.hazard(0.4, &[1.0]).unwrap(), 0.4);
        assert!(matches!(
            model.hazard(0.4, &[2.0]),
            Err(ModelError::UnknownGroup { .. })
        ));
        assert!(matches!(
            model.hazard(0.4, &[]),
            Err(ModelError::EmptyCovariates)
        ));
    }

    #[test]
    fn discrete_model_window_checks() {
        let spec = builtin_scenario(BuiltinScenario::M6);
        let model = GroupedDiscreteModel::from_scenario(&spec).unwrap();
        assert_eq!(model.hazard(7.0, &[0.0]).unwrap(), 0.5);
        assert_eq!(model.hazard(7.0, &[1.0]).unwrap(), 0.05);
        assert!(matches!(
            model.hazard(11.0, &[0.0]),
            Err(ModelError::OutOfWindow { .. })
        ));
        assert!(matches!(
            model.survival(2.5, &[0.0]),
            Err(ModelError::OutOfWindow { .. })
        ));
        assert_eq!(model.window_end(), Some(10.0));
    }

    #[test]
    fn quantile_conventions_agree_on_strictly_decreasing_survival() {
        let spec = builtin_scenario(BuiltinScenario::M0);
        let model = GroupedHazardModel::from_scenario(&spec).unwrap();
        let lower = model
            .quantile(0.5, &[0.0], QuantileConvention::FirstAtOrBelow)
            .unwrap();
        let upper = model
            .quantile(0.5, &[0.0], QuantileConvention::LastAtOrAbove)
            .unwrap();
        assert!((lower - upper).abs() < 1e-12);
        // Group 0 is exponential with rate 0.5: median = 2 ln 2.
        assert!((lower - 2.0 * math::ln(2.0)).abs() < 1e-12);
    }

    #[test]
    fn quantile_conventions_differ_across_flat_survival() {
        let flat = PiecewiseHazard::new(vec![
            crate::hazard::HazardSegment::new(0.0, 1.0, 0.5, 0.0),
            crate::hazard::HazardSegment::new(1.0, 2.0, 0.0, 0.0),
            crate::hazard::HazardSegment::new(2.0, f64::INFINITY, 0.5, 0.0),
        ])
        .unwrap();
        let model = GroupedHazardModel::new(vec![(0.0, flat)]);
        let s = math::exp(-0.5);
        let lower = model
            .quantile(s, &[0.0], QuantileConvention::FirstAtOrBelow)
            .unwrap();
        let upper = model
            .quantile(s, &[0.0], QuantileConvention::LastAtOrAbove)
            .unwrap();
        assert!((lower - 1.0).abs() < 1e-12);
        assert!((upper - 2.0).abs() < 1e-12);
    }
}
