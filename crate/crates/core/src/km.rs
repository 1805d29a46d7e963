//! Group-wise Kaplan-Meier estimation, triangular-kernel smoothing, and
//! hazard recovery from the smoothed survival curve.
//!
//! The smoothing pipeline mirrors the crossing-hazard evaluation protocol:
//! the step estimate is extended by one bandwidth below zero (where survival
//! is identically 1) and held constant beyond the last observation, the
//! triangular kernel is integrated by Riemann sum on a uniform grid, and the
//! result is reported one bandwidth short of the observation window so no
//! output point has a truncated kernel.

use alloc::vec::Vec;
use core::fmt;

use crate::dataset::{SurvivalDataset, SurvivalRecord};
use crate::model::{ModelError, SurvivalModel};
use crate::risk::QuantileConvention;

/// Product-limit survival estimate: right-continuous steps, `S = 1` before
/// the first jump.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSurvival {
    jump_times: Vec<f64>,
    values: Vec<f64>,
}

impl StepSurvival {
    /// Builds a step curve directly from tabulated jump times and levels,
    /// e.g. to push an analytic curve through the smoothing pipeline. Times
    /// must ascend strictly and levels must be non-increasing within [0, 1].
    pub fn from_curve(jump_times: Vec<f64>, values: Vec<f64>) -> Self {
        assert_eq!(jump_times.len(), values.len());
        let ascending = jump_times.windows(2).all(|w| w[0] < w[1]);
        let monotone = values.windows(2).all(|w| w[0] >= w[1]);
        let bounded = values.iter().all(|v| (0.0..=1.0).contains(v));
        assert!(
            ascending && monotone && bounded,
            "step curve must have ascending times and non-increasing levels in [0, 1]"
        );
        StepSurvival { jump_times, values }
    }

    pub fn jump_times(&self) -> &[f64] {
        &self.jump_times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Survival level at `t` (1 for any `t` before the first jump, including
    /// negative `t` used by the smoothing extension).
    pub fn value_at(&self, t: f64) -> f64 {
        let idx = self.jump_times.partition_point(|&jt| jt <= t);
        if idx == 0 {
            1.0
        } else {
            self.values[idx - 1]
        }
    }
}

/// Smoothed survival on a uniform grid `0, step, ..., report_end`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedSurvival {
    step: f64,
    bandwidth: f64,
    report_end: f64,
    values: Vec<f64>,
}

impl SmoothedSurvival {
    pub fn grid_step(&self) -> f64 {
        self.step
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn report_end(&self) -> f64 {
        self.report_end
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grid_times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |i| i as f64 * self.step)
    }

    /// Linear interpolation between grid nodes.
    pub fn value_at(&self, t: f64) -> Result<f64, KmError> {
        interpolate(&self.values, self.step, self.report_end, t)
    }
}

fn interpolate(values: &[f64], step: f64, report_end: f64, t: f64) -> Result<f64, KmError> {
    if !(0.0..=report_end).contains(&t) {
        return Err(KmError::OutOfWindow { t, end: report_end });
    }
    let pos = t / step;
    let idx = (pos as usize).min(values.len() - 1);
    if idx + 1 >= values.len() {
        return Ok(values[idx]);
    }
    let frac = pos - idx as f64;
    Ok(values[idx] * (1.0 - frac) + values[idx + 1] * frac)
}

#[derive(Debug, Clone, PartialEq)]
pub enum KmError {
    EmptyGroup,
    BadBandwidth { b: f64 },
    GridTooCoarse { delta: f64, b: f64 },
    WindowTooShort { window_end: f64, b: f64 },
    OutOfWindow { t: f64, end: f64 },
    VanishingSurvival { min: f64 },
    NoGroups,
}

impl fmt::Display for KmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KmError::EmptyGroup => write!(f, "no records match the group predicate"),
            KmError::BadBandwidth { b } => {
                write!(f, "bandwidth {b} must be positive and finite")
            }
            KmError::GridTooCoarse { delta, b } => {
                write!(f, "grid step {delta} must be at most a tenth of the bandwidth {b}")
            }
            KmError::WindowTooShort { window_end, b } => write!(
                f,
                "window end {window_end} must exceed the bandwidth {b}"
            ),
            KmError::OutOfWindow { t, end } => {
                write!(f, "query time {t} is outside the reported range [0, {end}]")
            }
            KmError::VanishingSurvival { min } => write!(
                f,
                "smoothed survival reaches {min}; hazard recovery needs it above 1e-6"
            ),
            KmError::NoGroups => write!(f, "no groups found in the grouping column"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for KmError {}

/// Standard product-limit estimator over the records selected by `group`.
/// At each distinct event time `t` the curve drops by the factor
/// `1 - d_t / n_t` with `d_t` events among `n_t` still at risk; times with
/// only censorings produce no jump.
pub fn kaplan_meier<F>(data: &SurvivalDataset, group: F) -> Result<StepSurvival, KmError>
where
    F: Fn(&SurvivalRecord) -> bool,
{
    let mut selected: Vec<(f64, bool)> = data
        .records()
        .iter()
        .filter(|r| group(r))
        .map(|r| (r.time, r.event))
        .collect();
    if selected.is_empty() {
        return Err(KmError::EmptyGroup);
    }
    selected.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut jump_times = Vec::new();
    let mut values = Vec::new();
    let mut survival = 1.0;
    let mut at_risk = selected.len();
    let mut i = 0;
    while i < selected.len() {
        let t = selected[i].0;
        let mut events = 0usize;
        let mut leaving = 0usize;
        while i < selected.len() && selected[i].0 == t {
            if selected[i].1 {
                events += 1;
            }
            leaving += 1;
            i += 1;
        }
        if events > 0 {
            survival *= 1.0 - events as f64 / at_risk as f64;
            jump_times.push(t);
            values.push(survival);
        }
        at_risk -= leaving;
    }
    Ok(StepSurvival { jump_times, values })
}

/// Triangular-kernel smoothing of a step survival curve.
///
/// `smoothed(t) = sum_u K_b(t - u) * S(u) * delta` over the grid
/// `u in [-b, window_end]`, with `K_b(x) = max(0, 1 - |x|/b) / b`. The
/// output grid covers `[0, window_end - b]`.
pub fn smooth_survival(
    s: &StepSurvival,
    bandwidth: f64,
    delta: f64,
    window_end: f64,
) -> Result<SmoothedSurvival, KmError> {
    if !bandwidth.is_finite() || bandwidth <= 0.0 {
        return Err(KmError::BadBandwidth { b: bandwidth });
    }
    if !(delta > 0.0) || delta > bandwidth / 10.0 {
        return Err(KmError::GridTooCoarse {
            delta,
            b: bandwidth,
        });
    }
    if window_end <= bandwidth {
        return Err(KmError::WindowTooShort {
            window_end,
            b: bandwidth,
        });
    }
    let report_end = window_end - bandwidth;
    let out_len = (report_end / delta + 0.5) as usize + 1;
    let kernel_half = (bandwidth / delta + 0.5) as usize;
    // Source samples on [-b, window_end]; index k maps to u = (k - half)*delta.
    let src_len = out_len + 2 * kernel_half;
    let src: Vec<f64> = (0..src_len)
        .map(|k| s.value_at((k as f64 - kernel_half as f64) * delta))
        .collect();
    let kernel: Vec<f64> = (0..=2 * kernel_half)
        .map(|k| {
            let x = (k as f64 - kernel_half as f64) * delta;
            (1.0 - (x / bandwidth).abs()).max(0.0) / bandwidth * delta
        })
        .collect();
    let values: Vec<f64> = (0..out_len)
        .map(|i| {
            kernel
                .iter()
                .enumerate()
                .map(|(k, w)| w * src[i + k])
                .sum()
        })
        .collect();
    Ok(SmoothedSurvival {
        step: delta,
        bandwidth,
        report_end,
        values,
    })
}

/// Hazard recovery `-S'(t) / S(t)` on the smoothed grid: centered
/// differences at interior points, one-sided at the two edges, clamped below
/// at zero. Fails if the smoothed survival comes too close to zero.
pub fn hazard_from_smoothed(s: &SmoothedSurvival) -> Result<Vec<f64>, KmError> {
    let v = s.values();
    let n = v.len();
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < 1e-6 {
        return Err(KmError::VanishingSurvival { min });
    }
    let d = s.grid_step();
    let mut hazard = Vec::with_capacity(n);
    for i in 0..n {
        let slope = if i == 0 {
            (v[1] - v[0]) / d
        } else if i == n - 1 {
            (v[n - 1] - v[n - 2]) / d
        } else {
            (v[i + 1] - v[i - 1]) / (2.0 * d)
        };
        hazard.push((-slope / v[i]).max(0.0));
    }
    Ok(hazard)
}

/// Smoothed survival and recovered hazard for one group.
#[derive(Debug, Clone)]
pub struct KmGroupCurve {
    pub label: f64,
    pub survival: SmoothedSurvival,
    pub hazard: Vec<f64>,
}

/// Smoothed Kaplan-Meier estimates bundled as a [`SurvivalModel`], one curve
/// per distinct value of a grouping covariate; every risk-score family then
/// applies to the estimate.
#[derive(Debug, Clone)]
pub struct KmModel {
    group_col: usize,
    curves: Vec<KmGroupCurve>,
}

impl KmModel {
    pub fn fit(
        data: &SurvivalDataset,
        group_col: usize,
        bandwidth: f64,
        delta: f64,
        window_end: f64,
    ) -> Result<Self, KmError> {
        let labels = data.distinct_covariate_values(group_col);
        if labels.is_empty() {
            return Err(KmError::NoGroups);
        }
        let mut curves = Vec::with_capacity(labels.len());
        for label in labels {
            let step = kaplan_meier(data, |r| r.covariates[group_col] == label)?;
            let survival = smooth_survival(&step, bandwidth, delta, window_end)?;
            let hazard = hazard_from_smoothed(&survival)?;
            curves.push(KmGroupCurve {
                label,
                survival,
                hazard,
            });
        }
        Ok(KmModel { group_col, curves })
    }

    pub fn curves(&self) -> &[KmGroupCurve] {
        &self.curves
    }

    pub fn report_end(&self) -> f64 {
        self.curves[0].survival.report_end()
    }

    fn curve(&self, z: &[f64]) -> Result<&KmGroupCurve, ModelError> {
        let label = *z
            .get(self.group_col)
            .ok_or(ModelError::EmptyCovariates)?;
        self.curves
            .iter()
            .find(|c| c.label == label)
            .ok_or(ModelError::UnknownGroup { value: label })
    }
}

impl SurvivalModel for KmModel {
    fn survival(&self, t: f64, z: &[f64]) -> Result<f64, ModelError> {
        let curve = self.curve(z)?;
        curve.survival.value_at(t).map_err(|_| ModelError::OutOfWindow {
            t,
            end: curve.survival.report_end(),
        })
    }

    fn hazard(&self, t: f64, z: &[f64]) -> Result<f64, ModelError> {
        let curve = self.curve(z)?;
        interpolate(
            &curve.hazard,
            curve.survival.grid_step(),
            curve.survival.report_end(),
            t,
        )
        .map_err(|_| ModelError::OutOfWindow {
            t,
            end: curve.survival.report_end(),
        })
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
        let curve = self.curve(z)?;
        let step = curve.survival.grid_step();
        let values = curve.survival.values();
        match convention {
            QuantileConvention::FirstAtOrBelow => {
                match values.iter().position(|&v| v <= s) {
                    Some(i) => Ok(i as f64 * step),
                    None => Ok(f64::INFINITY),
                }
            }
            QuantileConvention::LastAtOrAbove => {
                match values.iter().rposition(|&v| v >= s) {
                    Some(i) => Ok(i as f64 * step),
                    None => Ok(0.0),
                }
            }
        }
    }

    fn window_end(&self) -> Option<f64> {
        Some(self.report_end())
    }
}
