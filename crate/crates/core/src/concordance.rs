//! Concordance-index estimation over right-censored data.
//!
//! An ordered pair `(i, j)` is comparable when `i`'s event is observed and
//! `T_i <= T_j`; the `<=` is literal, so in discrete time tied event times
//! are comparable under both orderings. A comparable pair contributes 1 to
//! the numerator when `q(T_i, z_i) > q(T_i, z_j)` and 1/2 on exact score
//! equality. Counts are kept as integers and divided once at the end.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::dataset::{SurvivalDataset, TimeMode};
use crate::risk::{RiskError, RiskScore};

/// Numerator/denominator decomposition of one concordance computation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcordanceReport {
    /// Comparable ordered pairs with `q_i > q_j`.
    pub strict_concordant: u64,
    /// Comparable ordered pairs with `q_i == q_j`; each adds 1/2 to the
    /// numerator.
    pub tied_score: u64,
    /// Comparable ordered pairs.
    pub comparable: u64,
    /// Comparable ordered pairs that qualify only because `T_i == T_j`.
    pub tied_time_comparable: u64,
    /// `(strict_concordant + tied_score / 2) / comparable`.
    pub index: f64,
}

impl ConcordanceReport {
    fn from_counts(strict: u64, tied: u64, comparable: u64, tied_time: u64) -> Self {
        ConcordanceReport {
            strict_concordant: strict,
            tied_score: tied,
            comparable,
            tied_time_comparable: tied_time,
            index: (strict as f64 + 0.5 * tied as f64) / comparable as f64,
        }
    }
}

/// The tie-inclusion algebra of discrete-time concordance for two competing
/// risk scores on the same data.
///
/// `a` and `b` are the numerators of the two scores over strictly-ordered
/// comparable pairs, `c` counts those pairs, and `c_tilde` counts unordered
/// pairs of events sharing a time. Each such tied pair contributes exactly 1
/// to the numerator and 2 to the denominator under the tie-inclusive rule,
/// which yields the contraction factor `w = c / (c + 2 c_tilde)`:
///
/// - index ordering is the same under both conventions,
/// - `|included - 1/2| = w * |excluded - 1/2|`,
/// - `|included_1 - included_2| = w * |excluded_1 - excluded_2|`.
#[derive(Debug, Clone, PartialEq)]
pub struct TieAlgebraReport {
    pub a: f64,
    pub b: f64,
    pub c: u64,
    pub c_tilde: u64,
    pub w: f64,
    pub excluded_q1: f64,
    pub excluded_q2: f64,
    pub included_q1: f64,
    pub included_q2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConcordanceError {
    TooFewRecords { n: usize },
    NoComparablePairs,
    NonFiniteScore { record: usize },
    ScoreLengthMismatch { records: usize, scores: usize },
    Risk(RiskError),
    NotDiscrete,
    NoStrictPairs,
    NoTiedEventPairs,
}

impl fmt::Display for ConcordanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConcordanceError::TooFewRecords { n } => {
                write!(f, "concordance needs at least 2 records, got {n}")
            }
            ConcordanceError::NoComparablePairs => {
                write!(f, "no comparable pairs: estimated comparability is zero")
            }
            ConcordanceError::NonFiniteScore { record } => {
                write!(f, "risk score for record {record} is not finite")
            }
            ConcordanceError::ScoreLengthMismatch { records, scores } => {
                write!(f, "{records} records but {scores} scores")
            }
            ConcordanceError::Risk(e) => write!(f, "{e}"),
            ConcordanceError::NotDiscrete => {
                write!(f, "tie algebra is defined for discrete-time data")
            }
            ConcordanceError::NoStrictPairs => {
                write!(f, "no strictly-ordered comparable pairs (c = 0)")
            }
            ConcordanceError::NoTiedEventPairs => {
                write!(f, "no tied event pairs (c~ = 0)")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ConcordanceError {}

impl From<RiskError> for ConcordanceError {
    fn from(e: RiskError) -> Self {
        ConcordanceError::Risk(e)
    }
}

/// Brute-force estimator over all ordered pairs.
pub fn concordance(
    data: &SurvivalDataset,
    score: &RiskScore<'_>,
) -> Result<ConcordanceReport, ConcordanceError> {
    concordance_with_cutoff(data, score, None)
}

/// Concordance using information up to time `t`: only events with
/// `T_i <= t` enter the numerator and denominator. With `t` at or past the
/// largest observed time this recovers the full estimate.
pub fn concordance_over_time(
    data: &SurvivalDataset,
    score: &RiskScore<'_>,
    t: f64,
) -> Result<ConcordanceReport, ConcordanceError> {
    concordance_with_cutoff(data, score, Some(t))
}

fn concordance_with_cutoff(
    data: &SurvivalDataset,
    score: &RiskScore<'_>,
    cutoff: Option<f64>,
) -> Result<ConcordanceReport, ConcordanceError> {
    let records = data.records();
    let n = records.len();
    if n < 2 {
        return Err(ConcordanceError::TooFewRecords { n });
    }
    let mut strict = 0u64;
    let mut tied = 0u64;
    let mut comparable = 0u64;
    let mut tied_time = 0u64;
    for (i, ri) in records.iter().enumerate() {
        if !ri.event {
            continue;
        }
        if let Some(t) = cutoff {
            if ri.time > t {
                continue;
            }
        }
        let qi = score.evaluate(ri.time, &ri.covariates)?;
        if qi.is_nan() {
            return Err(ConcordanceError::NonFiniteScore { record: i });
        }
        for (j, rj) in records.iter().enumerate() {
            if i == j || rj.time < ri.time {
                continue;
            }
            comparable += 1;
            if rj.time == ri.time {
                tied_time += 1;
            }
            let qj = score.evaluate(ri.time, &rj.covariates)?;
            if qj.is_nan() {
                return Err(ConcordanceError::NonFiniteScore { record: j });
            }
            if qi > qj {
                strict += 1;
            } else if qi == qj {
                tied += 1;
            }
        }
    }
    if comparable == 0 {
        return Err(ConcordanceError::NoComparablePairs);
    }
    Ok(ConcordanceReport::from_counts(
        strict, tied, comparable, tied_time,
    ))
}

/// `O(n log n)` estimator for time-constant risk scores (one value per
/// record), producing a report identical to [`concordance`] field by field.
///
/// Walking times in descending order, every record with `T >= t` is inserted
/// in a Fenwick tree over score ranks before the events at `t` are resolved,
/// so tied times land in the comparable set of both orderings exactly as in
/// the pairwise definition.
pub fn concordance_fast(
    data: &SurvivalDataset,
    scores: &[f64],
) -> Result<ConcordanceReport, ConcordanceError> {
    let records = data.records();
    let n = records.len();
    if n < 2 {
        return Err(ConcordanceError::TooFewRecords { n });
    }
    if scores.len() != n {
        return Err(ConcordanceError::ScoreLengthMismatch {
            records: n,
            scores: scores.len(),
        });
    }
    if let Some(record) = scores.iter().position(|s| s.is_nan()) {
        return Err(ConcordanceError::NonFiniteScore { record });
    }

    // Rank compression. partition_point with `<` keeps IEEE equality
    // semantics (-0.0 and 0.0 share a rank), matching the brute-force
    // comparisons.
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup_by(|a, b| a == b);
    let rank_of = |x: f64| sorted.partition_point(|v| *v < x);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| records[b].time.total_cmp(&records[a].time));

    let mut tree = FenwickTree::new(sorted.len());
    let mut inserted = 0u64;
    let mut strict = 0u64;
    let mut tied = 0u64;
    let mut comparable = 0u64;
    let mut tied_time = 0u64;

    let mut start = 0;
    while start < n {
        let t = records[order[start]].time;
        let mut end = start;
        while end < n && records[order[end]].time == t {
            end += 1;
        }
        let block = &order[start..end];
        for &idx in block {
            tree.add(rank_of(scores[idx]));
        }
        inserted += block.len() as u64;
        for &idx in block {
            if !records[idx].event {
                continue;
            }
            let rank = rank_of(scores[idx]);
            comparable += inserted - 1;
            tied_time += block.len() as u64 - 1;
            strict += tree.prefix(rank);
            tied += tree.count_at(rank) - 1;
        }
        start = end;
    }

    if comparable == 0 {
        return Err(ConcordanceError::NoComparablePairs);
    }
    Ok(ConcordanceReport::from_counts(
        strict, tied, comparable, tied_time,
    ))
}

struct FenwickTree {
    counts: Vec<u64>,
}

impl FenwickTree {
    fn new(size: usize) -> Self {
        FenwickTree {
            counts: vec![0; size + 1],
        }
    }

    fn add(&mut self, rank: usize) {
        let mut i = rank + 1;
        while i < self.counts.len() {
            self.counts[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Number of inserted values with rank strictly below `rank`.
    fn prefix(&self, rank: usize) -> u64 {
        let mut sum = 0;
        let mut i = rank;
        while i > 0 {
            sum += self.counts[i];
            i -= i & i.wrapping_neg();
        }
        sum
    }

    fn count_at(&self, rank: usize) -> u64 {
        self.prefix(rank + 1) - self.prefix(rank)
    }
}

/// Evaluates the tie-inclusion identities for two risk scores on discrete
/// data (see [`TieAlgebraReport`]). Pairs of an event and a censoring tied at
/// the same time are outside the algebra and are excluded from both
/// conventions here; the full estimator in [`concordance`] counts them.
pub fn tie_algebra_report(
    data: &SurvivalDataset,
    q1: &RiskScore<'_>,
    q2: &RiskScore<'_>,
) -> Result<TieAlgebraReport, ConcordanceError> {
    if data.mode() != TimeMode::Discrete {
        return Err(ConcordanceError::NotDiscrete);
    }
    let records = data.records();
    let n = records.len();
    if n < 2 {
        return Err(ConcordanceError::TooFewRecords { n });
    }

    let mut a = 0.0;
    let mut b = 0.0;
    let mut c = 0u64;
    let mut tied_event_ordered = 0u64;
    let mut tied_num_q1 = 0.0;
    let mut tied_num_q2 = 0.0;

    for (i, ri) in records.iter().enumerate() {
        if !ri.event {
            continue;
        }
        let q1_i = q1.evaluate(ri.time, &ri.covariates)?;
        let q2_i = q2.evaluate(ri.time, &ri.covariates)?;
        for (j, rj) in records.iter().enumerate() {
            if i == j {
                continue;
            }
            if rj.time > ri.time {
                c += 1;
                a += pair_credit(q1_i, q1.evaluate(ri.time, &rj.covariates)?);
                b += pair_credit(q2_i, q2.evaluate(ri.time, &rj.covariates)?);
            } else if rj.time == ri.time && rj.event {
                tied_event_ordered += 1;
                tied_num_q1 += pair_credit(q1_i, q1.evaluate(ri.time, &rj.covariates)?);
                tied_num_q2 += pair_credit(q2_i, q2.evaluate(ri.time, &rj.covariates)?);
            }
        }
    }

    if c == 0 {
        return Err(ConcordanceError::NoStrictPairs);
    }
    if tied_event_ordered == 0 {
        return Err(ConcordanceError::NoTiedEventPairs);
    }
    // Both orderings of a tied event pair are comparable, so the ordered
    // count is even and each unordered pair contributes exactly 1.
    debug_assert!(tied_event_ordered % 2 == 0);
    let c_tilde = tied_event_ordered / 2;
    debug_assert!((tied_num_q1 - c_tilde as f64).abs() < 1e-9);
    debug_assert!((tied_num_q2 - c_tilde as f64).abs() < 1e-9);

    let denom_included = (c + 2 * c_tilde) as f64;
    let report = TieAlgebraReport {
        a,
        b,
        c,
        c_tilde,
        w: c as f64 / denom_included,
        excluded_q1: a / c as f64,
        excluded_q2: b / c as f64,
        included_q1: (a + tied_num_q1) / denom_included,
        included_q2: (b + tied_num_q2) / denom_included,
    };
    Ok(report)
}

fn pair_credit(qi: f64, qj: f64) -> f64 {
    if qi > qj {
        1.0
    } else if qi == qj {
        0.5
    } else {
        0.0
    }
}
