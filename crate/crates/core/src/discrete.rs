//! Discrete-time hazard tables over integer bins `1..=K`.

use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

/// Per-bin conditional event probabilities: entry `t-1` is
/// `P(X = t | X >= t)` for `t = 1..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteHazard {
    probs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DiscreteHazardError {
    Empty,
    OutOfUnitInterval { bin: usize, value: f64 },
}

impl fmt::Display for DiscreteHazardError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiscreteHazardError::Empty => write!(f, "discrete hazard needs at least one bin"),
            DiscreteHazardError::OutOfUnitInterval { bin, value } => {
                write!(f, "bin {bin}: hazard {value} must lie in [0, 1]")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DiscreteHazardError {}

impl DiscreteHazard {
    pub fn new(probs: Vec<f64>) -> Result<Self, DiscreteHazardError> {
        if probs.is_empty() {
            return Err(DiscreteHazardError::Empty);
        }
        for (i, &p) in probs.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                return Err(DiscreteHazardError::OutOfUnitInterval {
                    bin: i + 1,
                    value: p,
                });
            }
        }
        Ok(Self { probs })
    }

    /// Two constant blocks: `first` on bins `1..=split`, `second` on
    /// `split+1..=horizon`.
    pub fn two_block(
        first: f64,
        second: f64,
        split: usize,
        horizon: usize,
    ) -> Result<Self, DiscreteHazardError> {
        let probs = (1..=horizon)
            .map(|t| if t <= split { first } else { second })
            .collect();
        Self::new(probs)
    }

    /// Number of bins K.
    pub fn horizon(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Conditional event probability at bin `t` (1-based, `t <= K`).
    pub fn hazard(&self, t: usize) -> f64 {
        self.probs[t - 1]
    }

    /// `P(X > t)` under the table; `t = 0` gives 1.
    pub fn survival_after(&self, t: usize) -> f64 {
        self.probs[..t.min(self.probs.len())]
            .iter()
            .fold(1.0, |acc, &p| acc * (1.0 - p))
    }

    /// `P(X = t)` for bins within the horizon.
    pub fn pmf(&self, t: usize) -> f64 {
        self.survival_after(t - 1) * self.hazard(t)
    }

    /// Sum of per-bin hazards up to `t`.
    pub fn cumulative(&self, t: usize) -> f64 {
        self.probs[..t.min(self.probs.len())].iter().sum()
    }

    /// Sequential Bernoulli thinning: at `t = 1, 2, ..., horizon` draw an
    /// event with probability `hazard(t)`; an individual with no event by the
    /// horizon is administratively censored there. Returns
    /// `(time, event_observed)`. The horizon is clamped to the table length.
    pub fn sample<R: Rng + ?Sized>(&self, horizon: usize, rng: &mut R) -> (u64, bool) {
        let horizon = horizon.min(self.probs.len()).max(1);
        for t in 1..=horizon {
            let u: f64 = rng.random();
            if u < self.hazard(t) {
                return (t as u64, true);
            }
        }
        (horizon as u64, false)
    }
}
