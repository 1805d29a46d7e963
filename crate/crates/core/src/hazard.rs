//! Analytic piecewise hazard functions with exact integration, inversion and
//! inverse-transform sampling.
//!
//! A hazard is a list of half-open segments `[start, end)` carrying a rate
//! `a + b*t`. Segments tile `[0, inf)` without gaps, so the cumulative hazard
//! is a continuous piecewise quadratic that can be inverted in closed form;
//! no root finding happens in the sampling path.

use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::math;

/// Hazard rate `intercept + slope * t` on `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HazardSegment {
    pub start: f64,
    pub end: f64,
    pub intercept: f64,
    pub slope: f64,
}

impl HazardSegment {
    pub fn new(start: f64, end: f64, intercept: f64, slope: f64) -> Self {
        Self {
            start,
            end,
            intercept,
            slope,
        }
    }

    fn rate_at(&self, t: f64) -> f64 {
        self.intercept + self.slope * t
    }

    /// Integral of the rate over `[start, t]`.
    fn cumulative_to(&self, t: f64) -> f64 {
        self.intercept * (t - self.start) + 0.5 * self.slope * (t * t - self.start * self.start)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HazardError {
    NoSegments,
    BadSpan { index: usize },
    NotContiguous { index: usize },
    FirstSegmentStart { start: f64 },
    LastSegmentEnd { end: f64 },
    NegativeRate { index: usize },
    QuantileOutOfRange { s: f64 },
    QuantileUnreachable { s: f64 },
}

impl fmt::Display for HazardError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HazardError::NoSegments => write!(f, "hazard needs at least one segment"),
            HazardError::BadSpan { index } => {
                write!(f, "segment {index}: end must exceed start")
            }
            HazardError::NotContiguous { index } => write!(
                f,
                "segment {index} does not start where the previous segment ends"
            ),
            HazardError::FirstSegmentStart { start } => {
                write!(f, "first segment must start at 0, got {start}")
            }
            HazardError::LastSegmentEnd { end } => {
                write!(f, "last segment must extend to infinity, got end {end}")
            }
            HazardError::NegativeRate { index } => {
                write!(f, "segment {index}: rate a + b*t drops below zero")
            }
            HazardError::QuantileOutOfRange { s } => {
                write!(f, "quantile level {s} must lie strictly inside (0, 1)")
            }
            HazardError::QuantileUnreachable { s } => write!(
                f,
                "survival never falls to {s}: total hazard is bounded"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for HazardError {}

/// A hazard function on `[0, inf)` assembled from contiguous segments.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseHazard {
    segments: Vec<HazardSegment>,
}

impl PiecewiseHazard {
    /// Validates coverage of `[0, inf)` and non-negativity of the rate on
    /// every segment.
    pub fn new(segments: Vec<HazardSegment>) -> Result<Self, HazardError> {
        if segments.is_empty() {
            return Err(HazardError::NoSegments);
        }
        if segments[0].start != 0.0 {
            return Err(HazardError::FirstSegmentStart {
                start: segments[0].start,
            });
        }
        let last = segments.len() - 1;
        if segments[last].end != f64::INFINITY {
            return Err(HazardError::LastSegmentEnd {
                end: segments[last].end,
            });
        }
        for (index, seg) in segments.iter().enumerate() {
            if !(seg.end > seg.start) {
                return Err(HazardError::BadSpan { index });
            }
            if index > 0 && seg.start != segments[index - 1].end {
                return Err(HazardError::NotContiguous { index });
            }
            // A linear rate attains its minimum at a segment endpoint.
            if seg.rate_at(seg.start) < 0.0 {
                return Err(HazardError::NegativeRate { index });
            }
            if seg.end.is_finite() {
                if seg.rate_at(seg.end) < 0.0 {
                    return Err(HazardError::NegativeRate { index });
                }
            } else if seg.slope < 0.0 {
                return Err(HazardError::NegativeRate { index });
            }
        }
        Ok(Self { segments })
    }

    /// Constant rate on the whole half-line.
    pub fn constant(rate: f64) -> Result<Self, HazardError> {
        Self::new(alloc::vec![HazardSegment::new(0.0, f64::INFINITY, rate, 0.0)])
    }

    /// Rate `slope * t` on the whole half-line.
    pub fn linear(slope: f64) -> Result<Self, HazardError> {
        Self::new(alloc::vec![HazardSegment::new(0.0, f64::INFINITY, 0.0, slope)])
    }

    /// Two constant pieces split at `breakpoint`.
    pub fn step_constant(first: f64, breakpoint: f64, second: f64) -> Result<Self, HazardError> {
        Self::new(alloc::vec![
            HazardSegment::new(0.0, breakpoint, first, 0.0),
            HazardSegment::new(breakpoint, f64::INFINITY, second, 0.0),
        ])
    }

    pub fn segments(&self) -> &[HazardSegment] {
        &self.segments
    }

    fn segment_index(&self, t: f64) -> usize {
        // Segments are half-open [start, end), so the containing segment is
        // the last one whose start is <= t.
        self.segments.partition_point(|seg| seg.start <= t) - 1
    }

    /// Rate of the segment containing `t`.
    pub fn hazard_at(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        self.segments[self.segment_index(t)].rate_at(t)
    }

    /// Closed-form integral of the rate over `[0, t]`.
    pub fn cumulative_hazard(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        let mut total = 0.0;
        for seg in &self.segments {
            if t < seg.end {
                total += seg.cumulative_to(t);
                break;
            }
            total += seg.cumulative_to(seg.end);
        }
        total
    }

    /// Survival function `exp(-H(t))`.
    pub fn survival_at(&self, t: f64) -> f64 {
        math::exp(-self.cumulative_hazard(t))
    }

    /// Smallest `u` with `survival_at(u) <= s`, found by solving
    /// `H(u) = -ln(s)` segment by segment (quadratic formula on segments with
    /// a non-zero slope).
    pub fn quantile_time(&self, s: f64) -> Result<f64, HazardError> {
        if !(s > 0.0 && s < 1.0) {
            return Err(HazardError::QuantileOutOfRange { s });
        }
        let target = -math::ln(s);
        let mut accumulated = 0.0;
        for seg in &self.segments {
            let seg_total = if seg.end.is_finite() {
                seg.cumulative_to(seg.end)
            } else if seg.intercept > 0.0 || seg.slope > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            if accumulated + seg_total >= target {
                let remaining = target - accumulated;
                return Ok(solve_segment(seg, remaining));
            }
            accumulated += seg_total;
        }
        Err(HazardError::QuantileUnreachable { s })
    }

    /// Inverse-transform sample of the event time. If the total hazard is
    /// bounded, the unreachable survival mass maps to `f64::INFINITY`.
    pub fn sample_event_time<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = draw_open01(rng);
        match self.quantile_time(u) {
            Ok(t) => t,
            Err(_) => f64::INFINITY,
        }
    }
}

/// Uniform draw from the open interval (0, 1).
pub(crate) fn draw_open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Solve `a*(u - start) + b*(u^2 - start^2)/2 = remaining` for `u` inside the
/// segment. The caller guarantees the segment accumulates at least
/// `remaining` hazard mass.
fn solve_segment(seg: &HazardSegment, remaining: f64) -> f64 {
    if remaining <= 0.0 {
        return seg.start;
    }
    if seg.slope == 0.0 {
        return seg.start + remaining / seg.intercept;
    }
    let a = seg.intercept;
    let b = seg.slope;
    let c0 = remaining + a * seg.start + 0.5 * b * seg.start * seg.start;
    let disc = a * a + 2.0 * b * c0;
    // The root is real by the caller's guarantee; clamp tiny negatives from
    // rounding.
    let root = math::sqrt(disc.max(0.0));
    (-a + root) / b
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m0_group1() -> PiecewiseHazard {
        PiecewiseHazard::linear(1.0).unwrap()
    }

    fn m1_group1() -> PiecewiseHazard {
        PiecewiseHazard::new(vec![
            HazardSegment::new(0.0, 0.5, 0.0, 1.0),
            HazardSegment::new(0.5, f64::INFINITY, 0.0, 10.0),
        ])
        .unwrap()
    }

    #[test]
    fn construction_rejects_gaps_and_negative_rates() {
        let gap = PiecewiseHazard::new(vec![
            HazardSegment::new(0.0, 1.0, 1.0, 0.0),
            HazardSegment::new(1.5, f64::INFINITY, 1.0, 0.0),
        ]);
        assert!(matches!(gap, Err(HazardError::NotContiguous { index: 1 })));

        let negative = PiecewiseHazard::new(vec![HazardSegment::new(
            0.0,
            f64::INFINITY,
            1.0,
            -2.0,
        )]);
        assert!(matches!(negative, Err(HazardError::NegativeRate { index: 0 })));

        let bounded = PiecewiseHazard::new(vec![HazardSegment::new(0.0, 2.0, 1.0, 0.0)]);
        assert!(matches!(bounded, Err(HazardError::LastSegmentEnd { .. })));
    }

    #[test]
    fn hazard_at_matches_segment_rates() {
        let constant = PiecewiseHazard::constant(0.5).unwrap();
        assert_eq!(constant.hazard_at(0.7), 0.5);
        assert_eq!(m0_group1().hazard_at(0.7), 0.7);

        let jumpy = m1_group1();
        assert_eq!(jumpy.hazard_at(0.5), 5.0);
        assert!((jumpy.hazard_at(0.500001) - 5.00001).abs() < 1e-9);
        assert_eq!(jumpy.hazard_at(0.499999), 0.499999);
    }

    #[test]
    fn cumulative_hazard_closed_form() {
        assert_eq!(m0_group1().cumulative_hazard(1.0), 0.5);
        assert_eq!(m0_group1().cumulative_hazard(0.0), 0.0);
        // 0.125 from the linear piece, then 10*t on (0.5, 1]: 5*(1 - 0.25).
        assert!((m1_group1().cumulative_hazard(1.0) - 3.875).abs() < 1e-12);
    }

    #[test]
    fn survival_is_exp_of_negative_cumulative() {
        let hazards = [
            PiecewiseHazard::constant(0.5).unwrap(),
            m0_group1(),
            m1_group1(),
        ];
        for h in &hazards {
            assert_eq!(h.survival_at(0.0), 1.0);
            let mut t = 0.05;
            while t < 3.0 {
                let expect = math::exp(-h.cumulative_hazard(t));
                assert!((h.survival_at(t) - expect).abs() < 1e-12);
                t += 0.17;
            }
        }
        let m3_group1 = PiecewiseHazard::linear(0.5).unwrap();
        assert!((m3_group1.survival_at(1.0) - math::exp(-0.25)).abs() < 1e-15);
    }

    #[test]
    fn quantile_inverts_survival() {
        let constant = PiecewiseHazard::constant(0.5).unwrap();
        let s = math::exp(-0.5);
        assert!((constant.quantile_time(s).unwrap() - 1.0).abs() < 1e-12);
        assert!((m0_group1().quantile_time(s).unwrap() - 1.0).abs() < 1e-12);

        // For M1 group 1 at s = 0.01 the root solves 5u^2 - 1.125 = -ln(0.01).
        let u = m1_group1().quantile_time(0.01).unwrap();
        let expect = math::sqrt((-math::ln(0.01) + 1.125) / 5.0);
        assert!((u - expect).abs() < 1e-12);

        assert!(matches!(
            constant.quantile_time(0.0),
            Err(HazardError::QuantileOutOfRange { .. })
        ));
        assert!(matches!(
            constant.quantile_time(1.0),
            Err(HazardError::QuantileOutOfRange { .. })
        ));
    }

    #[test]
    fn quantile_unreachable_when_total_hazard_bounded() {
        let h = PiecewiseHazard::new(vec![
            HazardSegment::new(0.0, 1.0, 0.3, 0.0),
            HazardSegment::new(1.0, f64::INFINITY, 0.0, 0.0),
        ])
        .unwrap();
        // Total mass is 0.3, so survival never drops below exp(-0.3) ~ 0.741.
        assert!(h.quantile_time(0.8).unwrap() < 1.0);
        assert!(matches!(
            h.quantile_time(0.5),
            Err(HazardError::QuantileUnreachable { .. })
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws: Vec<f64> = (0..200).map(|_| h.sample_event_time(&mut rng)).collect();
        assert!(draws.iter().any(|t| t.is_infinite()));
        assert!(draws.iter().any(|t| t.is_finite()));
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let h = m1_group1();
        let mut a = ChaCha8Rng::seed_from_u64(99);
        let mut b = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            assert_eq!(h.sample_event_time(&mut a), h.sample_event_time(&mut b));
        }
    }
}
