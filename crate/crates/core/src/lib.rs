//! Concordance indices for right-censored survival data with time-varying
//! risk scores.
//!
//! The crate covers the full pipeline needed to evaluate and compare survival
//! models whose hazard rates may cross over time:
//!
//! - [`hazard`]: analytic piecewise hazards with exact cumulative hazard,
//!   survival, quantile inversion and inverse-transform sampling;
//! - [`discrete`]: per-bin discrete hazard tables;
//! - [`scenario`]: right-censored dataset generation, including a catalog of
//!   crossing-hazard benchmark scenarios (`M0`..`M6`);
//! - [`risk`]: the risk-score families compared at the first event time of
//!   each pair (hazard, survival-at-event-time, fixed-time survival, quantile
//!   time, linear predictor);
//! - [`concordance`]: the pair-counting estimator in brute-force and
//!   `O(n log n)` forms, time-restricted variants and the tie-inclusion
//!   algebra for discrete event times;
//! - [`km`]: group-wise Kaplan-Meier estimation, triangular-kernel smoothing
//!   and hazard recovery from the smoothed curve;
//! - [`train`]: a small feed-forward discrete-hazard model trained with a
//!   likelihood loss plus a pairwise ranking loss.
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature and enable `libm` for the math backend.

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("concord-core requires either the `std` or the `libm` feature");

extern crate alloc;

#[cfg(any(test, feature = "std"))]
extern crate std;

pub(crate) mod math;

pub mod concordance;
pub mod dataset;
pub mod discrete;
pub mod hazard;
pub mod km;
pub mod model;
pub mod risk;
pub mod scenario;
pub mod train;

pub use concordance::{
    concordance, concordance_fast, concordance_over_time, tie_algebra_report, ConcordanceError,
    ConcordanceReport, TieAlgebraReport,
};
pub use dataset::{SurvivalDataset, SurvivalRecord, TimeMode};
pub use discrete::DiscreteHazard;
pub use hazard::{HazardSegment, PiecewiseHazard};
pub use km::{kaplan_meier, smooth_survival, KmModel, SmoothedSurvival, StepSurvival};
pub use model::{GroupedDiscreteModel, GroupedHazardModel, SurvivalModel};
pub use risk::{QuantileConvention, RiskScore};
pub use scenario::{builtin_scenario, generate, BuiltinScenario, CensoringSpec, ScenarioSpec};
pub use train::{train, DiscreteHazardModel, RankingVariant, TrainConfig, TrainOutcome};
