//! A small feed-forward discrete-hazard model and its training loop.
//!
//! The network maps a covariate vector through one tanh hidden layer to
//! `K + 1` logits, normalized by softmax into a probability mass function
//! over event bins `1..=K` plus one tail bin (survival past `K`). Training
//! minimizes a likelihood term plus an optional pairwise ranking term whose
//! smooth comparator is the logistic function, with validation-based early
//! stopping. All gradients are hand-derived and checkable against finite
//! differences.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::concordance::{concordance, ConcordanceError};
use crate::dataset::{SurvivalDataset, TimeMode};
use crate::math;
use crate::model::{ModelError, SurvivalModel};
use crate::risk::{QuantileConvention, RiskScore};

/// Probability floor inside logarithms.
const MASS_FLOOR: f64 = 1e-12;
/// Remaining-mass floor below which the discrete hazard is treated as 1.
const DENOM_FLOOR: f64 = 1e-8;

/// Which pairwise ranking term accompanies the likelihood.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankingVariant {
    /// Likelihood only.
    None,
    /// Compare predicted CDF values at the first event time.
    Td,
    /// Compare predicted discrete hazards at the first event time.
    Alpha,
}

impl fmt::Display for RankingVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankingVariant::None => write!(f, "none"),
            RankingVariant::Td => write!(f, "td"),
            RankingVariant::Alpha => write!(f, "alpha"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub variant: RankingVariant,
    /// Scale of the logistic comparator.
    pub sigma: f64,
    /// Weight of the ranking term relative to the likelihood term.
    pub ranking_weight: f64,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    /// Epochs without validation improvement before stopping.
    pub patience: usize,
    pub seed: u64,
    pub train_fraction: f64,
    pub val_fraction: f64,
    pub test_fraction: f64,
    pub hidden_dim: usize,
    /// Number of event bins K; times must lie in `1..=K`.
    pub bins: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            variant: RankingVariant::Alpha,
            sigma: 0.1,
            ranking_weight: 1.0,
            learning_rate: 0.05,
            batch_size: 256,
            max_epochs: 50,
            patience: 5,
            seed: 0,
            train_fraction: 0.80,
            val_fraction: 0.04,
            test_fraction: 0.16,
            hidden_dim: 32,
            bins: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrainError {
    NotDiscrete,
    TimeBeyondHorizon { time: f64, bins: usize },
    InvalidConfig { what: &'static str },
    Diverged { epoch: usize },
    BadParameterShape,
    Metric(ConcordanceError),
}

impl fmt::Display for TrainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrainError::NotDiscrete => write!(f, "training needs discrete-time data"),
            TrainError::TimeBeyondHorizon { time, bins } => {
                write!(f, "observed time {time} exceeds the {bins}-bin horizon")
            }
            TrainError::InvalidConfig { what } => write!(f, "invalid config: {what}"),
            TrainError::Diverged { epoch } => {
                write!(f, "training diverged (non-finite loss) in epoch {epoch}")
            }
            TrainError::BadParameterShape => write!(f, "parameter arrays have the wrong shape"),
            TrainError::Metric(e) => write!(f, "validation metric failed: {e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for TrainError {}

impl From<ConcordanceError> for TrainError {
    fn from(e: ConcordanceError) -> Self {
        TrainError::Metric(e)
    }
}

/// Feed-forward discrete-hazard model: `input_dim -> hidden_dim (tanh) ->
/// bins + 1 (softmax)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteHazardModel {
    input_dim: usize,
    hidden_dim: usize,
    bins: usize,
    /// Row-major `hidden_dim x input_dim`.
    w1: Vec<f64>,
    b1: Vec<f64>,
    /// Row-major `(bins + 1) x hidden_dim`.
    w2: Vec<f64>,
    b2: Vec<f64>,
}

struct ForwardPass {
    hidden: Vec<f64>,
    pmf: Vec<f64>,
    /// `cdf[t] = P(X <= t)` for `t = 0..=bins`.
    cdf: Vec<f64>,
}

impl DiscreteHazardModel {
    pub fn new_random(input_dim: usize, hidden_dim: usize, bins: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut uniform = |half: f64| -> f64 { (rng.random::<f64>() * 2.0 - 1.0) * half };
        let out = bins + 1;
        let r1 = math::sqrt(6.0 / (input_dim + hidden_dim) as f64);
        let r2 = math::sqrt(6.0 / (hidden_dim + out) as f64);
        let w1 = (0..hidden_dim * input_dim).map(|_| uniform(r1)).collect();
        let w2 = (0..out * hidden_dim).map(|_| uniform(r2)).collect();
        DiscreteHazardModel {
            input_dim,
            hidden_dim,
            bins,
            w1,
            b1: vec![0.0; hidden_dim],
            w2,
            b2: vec![0.0; out],
        }
    }

    pub fn from_parts(
        input_dim: usize,
        hidden_dim: usize,
        bins: usize,
        w1: Vec<f64>,
        b1: Vec<f64>,
        w2: Vec<f64>,
        b2: Vec<f64>,
    ) -> Result<Self, TrainError> {
        let out = bins + 1;
        if w1.len() != hidden_dim * input_dim
            || b1.len() != hidden_dim
            || w2.len() != out * hidden_dim
            || b2.len() != out
        {
            return Err(TrainError::BadParameterShape);
        }
        Ok(DiscreteHazardModel {
            input_dim,
            hidden_dim,
            bins,
            w1,
            b1,
            w2,
            b2,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn hidden_dim(&self) -> usize {
        self.hidden_dim
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn weights(&self) -> (&[f64], &[f64], &[f64], &[f64]) {
        (&self.w1, &self.b1, &self.w2, &self.b2)
    }

    fn forward(&self, z: &[f64]) -> ForwardPass {
        let out = self.bins + 1;
        let mut hidden = Vec::with_capacity(self.hidden_dim);
        for h in 0..self.hidden_dim {
            let row = &self.w1[h * self.input_dim..(h + 1) * self.input_dim];
            let pre = self.b1[h] + row.iter().zip(z).map(|(w, x)| w * x).sum::<f64>();
            hidden.push(math::tanh(pre));
        }
        let mut logits = Vec::with_capacity(out);
        for o in 0..out {
            let row = &self.w2[o * self.hidden_dim..(o + 1) * self.hidden_dim];
            logits.push(self.b2[o] + row.iter().zip(&hidden).map(|(w, x)| w * x).sum::<f64>());
        }
        let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut pmf: Vec<f64> = logits.iter().map(|&l| math::exp(l - max)).collect();
        let norm: f64 = pmf.iter().sum();
        for p in &mut pmf {
            *p /= norm;
        }
        let mut cdf = Vec::with_capacity(self.bins + 1);
        cdf.push(0.0);
        let mut acc = 0.0;
        for &p in pmf.iter().take(self.bins) {
            acc += p;
            cdf.push(acc);
        }
        ForwardPass { hidden, pmf, cdf }
    }

    /// Predicted mass function: entries `0..bins` are `P(X = t)` for
    /// `t = 1..=bins`, the last entry is the tail mass `P(X > bins)`.
    pub fn pmf(&self, z: &[f64]) -> Vec<f64> {
        self.forward(z).pmf
    }

    /// `P(X <= t)` for `t = 0..=bins`.
    pub fn cdf_at(&self, t: usize, z: &[f64]) -> f64 {
        debug_assert!(t <= self.bins);
        self.forward(z).cdf[t]
    }

    /// Discrete hazard `P(X = t | X >= t)` clamped into `[0, 1]`; where the
    /// remaining mass is below the floor the hazard is reported as 1.
    pub fn discrete_hazard(&self, t: usize, z: &[f64]) -> f64 {
        let fp = self.forward(z);
        hazard_from_pass(&fp, t).min(1.0)
    }

    /// Sum of predicted hazards up to `t`, plus a flag marking that some bin
    /// hit the exhausted-mass floor. `t` must lie in `1..=bins`.
    pub fn cumulative_hazard(&self, z: &[f64], t: usize) -> Result<(f64, bool), TrainError> {
        if t == 0 || t > self.bins {
            return Err(TrainError::TimeBeyondHorizon {
                time: t as f64,
                bins: self.bins,
            });
        }
        let fp = self.forward(z);
        let mut total = 0.0;
        let mut capped = false;
        for s in 1..=t {
            let remaining = 1.0 - fp.cdf[s - 1];
            if remaining <= DENOM_FLOOR {
                capped = true;
            }
            total += hazard_from_pass(&fp, s).min(1.0);
        }
        Ok((total, capped))
    }
}

fn hazard_from_pass(fp: &ForwardPass, t: usize) -> f64 {
    let remaining = 1.0 - fp.cdf[t - 1];
    if remaining <= DENOM_FLOOR {
        1.0
    } else {
        fp.pmf[t - 1] / remaining
    }
}

impl SurvivalModel for DiscreteHazardModel {
    fn survival(&self, t: f64, z: &[f64]) -> Result<f64, ModelError> {
        let bin = self.check_bin(t)?;
        Ok(1.0 - self.cdf_at(bin, z))
    }

    fn hazard(&self, t: f64, z: &[f64]) -> Result<f64, ModelError> {
        let bin = self.check_bin(t)?;
        Ok(self.discrete_hazard(bin, z))
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
        let fp = self.forward(z);
        match convention {
            QuantileConvention::FirstAtOrBelow => {
                for t in 1..=self.bins {
                    if 1.0 - fp.cdf[t] <= s {
                        return Ok(t as f64);
                    }
                }
                Ok(f64::INFINITY)
            }
            QuantileConvention::LastAtOrAbove => {
                let mut last = 0.0;
                for t in 1..=self.bins {
                    if 1.0 - fp.cdf[t] >= s {
                        last = t as f64;
                    }
                }
                Ok(last)
            }
        }
    }

    fn window_end(&self) -> Option<f64> {
        Some(self.bins as f64)
    }
}

impl DiscreteHazardModel {
    fn check_bin(&self, t: f64) -> Result<usize, ModelError> {
        if t < 1.0 || t > self.bins as f64 || math::floor(t) != t {
            return Err(ModelError::OutOfWindow {
                t,
                end: self.bins as f64,
            });
        }
        Ok(t as usize)
    }
}

/// Negated log-likelihood, summed over the given records: events contribute
/// `-ln f(T|z)`, censorings `-ln(1 - F(T|z))`, with probabilities floored at
/// 1e-12 inside the logarithms.
pub fn log_likelihood_loss(
    model: &DiscreteHazardModel,
    data: &SurvivalDataset,
    indices: &[usize],
) -> f64 {
    let mut total = 0.0;
    for &i in indices {
        let rec = &data.records()[i];
        let fp = model.forward(&rec.covariates);
        let t = rec.time as usize;
        let p = if rec.event {
            fp.pmf[t - 1]
        } else {
            1.0 - fp.cdf[t]
        };
        total -= math::ln(p.max(MASS_FLOOR));
    }
    total
}

/// Pairwise ranking term, summed over ordered pairs `(i, j)` in the batch
/// with `T_i < T_j` and `i`'s event observed. Each pair contributes
/// `logistic(-(x_i - x_j) / sigma)` where `x` is the predicted CDF (variant
/// `Td`) or the predicted hazard (variant `Alpha`) evaluated at `T_i`; a
/// correctly ordered pair with a wide margin contributes nearly 0 and a tied
/// pair exactly 1/2.
pub fn ranking_loss(
    model: &DiscreteHazardModel,
    data: &SurvivalDataset,
    indices: &[usize],
    variant: RankingVariant,
    sigma: f64,
) -> f64 {
    if variant == RankingVariant::None {
        return 0.0;
    }
    let passes: Vec<ForwardPass> = indices
        .iter()
        .map(|&i| model.forward(&data.records()[i].covariates))
        .collect();
    let mut total = 0.0;
    for (a, &i) in indices.iter().enumerate() {
        let ri = &data.records()[i];
        if !ri.event {
            continue;
        }
        let t = ri.time as usize;
        let xi = pair_metric(&passes[a], t, variant);
        for (b, &j) in indices.iter().enumerate() {
            if i == j {
                continue;
            }
            let rj = &data.records()[j];
            if !(ri.time < rj.time) {
                continue;
            }
            let xj = pair_metric(&passes[b], t, variant);
            total += math::logistic(-(xi - xj) / sigma);
        }
    }
    total
}

fn pair_metric(fp: &ForwardPass, t: usize, variant: RankingVariant) -> f64 {
    match variant {
        RankingVariant::Td => fp.cdf[t],
        RankingVariant::Alpha => hazard_from_pass(fp, t),
        RankingVariant::None => 0.0,
    }
}

/// Mean training-loss components of one epoch (per record), with
/// `total = log_likelihood + ranking_weight * ranking`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBreakdown {
    pub log_likelihood: f64,
    pub ranking: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochLog {
    pub epoch: usize,
    pub loss: LossBreakdown,
    pub validation: f64,
}

/// Index split of the input data, in shuffled order.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSplit {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: DiscreteHazardModel,
    pub log: Vec<EpochLog>,
    pub split: DataSplit,
    /// Epoch whose parameters were kept (best validation score).
    pub best_epoch: usize,
}

struct Grads {
    w1: Vec<f64>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: Vec<f64>,
}

impl Grads {
    fn zeros(model: &DiscreteHazardModel) -> Self {
        Grads {
            w1: vec![0.0; model.w1.len()],
            b1: vec![0.0; model.b1.len()],
            w2: vec![0.0; model.w2.len()],
            b2: vec![0.0; model.b2.len()],
        }
    }
}

/// Analytic batch gradient of `l0 + weight * ranking` (raw sums), plus the
/// two raw loss values.
fn batch_gradient(
    model: &DiscreteHazardModel,
    data: &SurvivalDataset,
    indices: &[usize],
    variant: RankingVariant,
    sigma: f64,
    weight: f64,
) -> (Grads, f64, f64) {
    let out = model.bins + 1;
    let passes: Vec<ForwardPass> = indices
        .iter()
        .map(|&i| model.forward(&data.records()[i].covariates))
        .collect();

    // d(loss)/d(logit) per batch member.
    let mut dlogit = vec![vec![0.0; out]; indices.len()];
    let mut l0 = 0.0;

    for (a, &i) in indices.iter().enumerate() {
        let rec = &data.records()[i];
        let fp = &passes[a];
        let t = rec.time as usize;
        if rec.event {
            let p = fp.pmf[t - 1];
            l0 -= math::ln(p.max(MASS_FLOOR));
            if p >= MASS_FLOOR {
                for m in 0..out {
                    dlogit[a][m] += fp.pmf[m] - if m == t - 1 { 1.0 } else { 0.0 };
                }
            }
        } else {
            let p = 1.0 - fp.cdf[t];
            l0 -= math::ln(p.max(MASS_FLOOR));
            if p >= MASS_FLOOR {
                // Mass beyond t sits in pmf indices >= t.
                for m in 0..out {
                    let in_set = if m >= t { 1.0 } else { 0.0 };
                    dlogit[a][m] += fp.pmf[m] * (1.0 - in_set / p);
                }
            }
        }
    }

    let mut rank = 0.0;
    if variant != RankingVariant::None && weight != 0.0 {
        // d(ranking)/d(pmf) per batch member, chained through softmax below.
        let mut dpmf = vec![vec![0.0; out]; indices.len()];
        for (a, &i) in indices.iter().enumerate() {
            let ri = &data.records()[i];
            if !ri.event {
                continue;
            }
            let t = ri.time as usize;
            let xi = pair_metric(&passes[a], t, variant);
            for (b, &j) in indices.iter().enumerate() {
                if i == j {
                    continue;
                }
                let rj = &data.records()[j];
                if !(ri.time < rj.time) {
                    continue;
                }
                let xj = pair_metric(&passes[b], t, variant);
                let eta = math::logistic(-(xi - xj) / sigma);
                rank += eta;
                let slope = eta * (1.0 - eta) / sigma;
                // d(eta)/d(x_i) = -slope, d(eta)/d(x_j) = +slope.
                accumulate_metric_grad(&mut dpmf[a], &passes[a], t, variant, -slope);
                accumulate_metric_grad(&mut dpmf[b], &passes[b], t, variant, slope);
            }
        }
        for (a, g) in dpmf.iter().enumerate() {
            let fp = &passes[a];
            let dot: f64 = g.iter().zip(&fp.pmf).map(|(gi, pi)| gi * pi).sum();
            for m in 0..out {
                dlogit[a][m] += weight * fp.pmf[m] * (g[m] - dot);
            }
        }
    }

    // Backpropagate through the linear layers.
    let mut grads = Grads::zeros(model);
    for (a, &i) in indices.iter().enumerate() {
        let z = &data.records()[i].covariates;
        let fp = &passes[a];
        let dl = &dlogit[a];
        let mut dhidden = vec![0.0; model.hidden_dim];
        for o in 0..out {
            let g = dl[o];
            if g == 0.0 {
                continue;
            }
            grads.b2[o] += g;
            let row = o * model.hidden_dim;
            for h in 0..model.hidden_dim {
                grads.w2[row + h] += g * fp.hidden[h];
                dhidden[h] += g * model.w2[row + h];
            }
        }
        for h in 0..model.hidden_dim {
            let dpre = dhidden[h] * (1.0 - fp.hidden[h] * fp.hidden[h]);
            if dpre == 0.0 {
                continue;
            }
            grads.b1[h] += dpre;
            let row = h * model.input_dim;
            for (jj, &x) in z.iter().enumerate() {
                grads.w1[row + jj] += dpre * x;
            }
        }
    }
    (grads, l0, rank)
}

/// Adds `coeff * d(metric at t)/d(pmf)` into `g`.
fn accumulate_metric_grad(
    g: &mut [f64],
    fp: &ForwardPass,
    t: usize,
    variant: RankingVariant,
    coeff: f64,
) {
    match variant {
        RankingVariant::Td => {
            // CDF(t) = sum of pmf over indices < t.
            for gi in g.iter_mut().take(t) {
                *gi += coeff;
            }
        }
        RankingVariant::Alpha => {
            let remaining = 1.0 - fp.cdf[t - 1];
            if remaining <= DENOM_FLOOR {
                return; // hazard pinned at 1, no gradient
            }
            g[t - 1] += coeff / remaining;
            let scale = coeff * fp.pmf[t - 1] / (remaining * remaining);
            for gi in g.iter_mut().take(t - 1) {
                *gi += scale;
            }
        }
        RankingVariant::None => {}
    }
}

/// Maximum relative error between the analytic gradient and central finite
/// differences of the total batch loss, over every parameter.
pub fn gradient_check(
    model: &DiscreteHazardModel,
    data: &SurvivalDataset,
    indices: &[usize],
    variant: RankingVariant,
    sigma: f64,
    weight: f64,
) -> f64 {
    let (grads, _, _) = batch_gradient(model, data, indices, variant, sigma, weight);
    let analytic: Vec<f64> = grads
        .w1
        .iter()
        .chain(&grads.b1)
        .chain(&grads.w2)
        .chain(&grads.b2)
        .cloned()
        .collect();

    let total = |m: &DiscreteHazardModel| -> f64 {
        log_likelihood_loss(m, data, indices)
            + weight * ranking_loss(m, data, indices, variant, sigma)
    };

    let step = 1e-5;
    let mut worst = 0.0_f64;
    let n_params = analytic.len();
    for k in 0..n_params {
        let mut plus = model.clone();
        let mut minus = model.clone();
        *param_mut(&mut plus, k) += step;
        *param_mut(&mut minus, k) -= step;
        let numeric = (total(&plus) - total(&minus)) / (2.0 * step);
        let denom = (numeric.abs() + analytic[k].abs()).max(1e-8);
        worst = worst.max((numeric - analytic[k]).abs() / denom);
    }
    worst
}

fn param_mut(model: &mut DiscreteHazardModel, k: usize) -> &mut f64 {
    let n1 = model.w1.len();
    let n2 = n1 + model.b1.len();
    let n3 = n2 + model.w2.len();
    if k < n1 {
        &mut model.w1[k]
    } else if k < n2 {
        &mut model.b1[k - n1]
    } else if k < n3 {
        &mut model.w2[k - n2]
    } else {
        &mut model.b2[k - n3]
    }
}

fn shuffle<R: Rng + ?Sized>(items: &mut [usize], rng: &mut R) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

fn validate_config(cfg: &TrainConfig) -> Result<(), TrainError> {
    if cfg.sigma <= 0.0 || !cfg.sigma.is_finite() {
        return Err(TrainError::InvalidConfig {
            what: "sigma must be positive",
        });
    }
    if cfg.ranking_weight < 0.0 || !cfg.ranking_weight.is_finite() {
        return Err(TrainError::InvalidConfig {
            what: "ranking weight must be non-negative",
        });
    }
    if cfg.learning_rate <= 0.0 || !cfg.learning_rate.is_finite() {
        return Err(TrainError::InvalidConfig {
            what: "learning rate must be positive",
        });
    }
    if cfg.batch_size == 0 || cfg.max_epochs == 0 || cfg.hidden_dim == 0 || cfg.bins == 0 {
        return Err(TrainError::InvalidConfig {
            what: "batch size, epochs, hidden width and bins must be positive",
        });
    }
    if cfg.patience == 0 {
        return Err(TrainError::InvalidConfig {
            what: "patience must be at least 1",
        });
    }
    let frac_sum = cfg.train_fraction + cfg.val_fraction + cfg.test_fraction;
    if (frac_sum - 1.0).abs() > 1e-9
        || cfg.train_fraction <= 0.0
        || cfg.val_fraction <= 0.0
        || cfg.test_fraction <= 0.0
    {
        return Err(TrainError::InvalidConfig {
            what: "split fractions must be positive and sum to 1",
        });
    }
    Ok(())
}

fn subset(data: &SurvivalDataset, indices: &[usize]) -> SurvivalDataset {
    let records = indices
        .iter()
        .map(|&i| data.records()[i].clone())
        .collect();
    SurvivalDataset::new(records, data.mode(), data.covariate_names().to_vec())
        .expect("subset of a valid dataset is valid")
}

fn validation_metric(
    model: &DiscreteHazardModel,
    val: &SurvivalDataset,
    variant: RankingVariant,
) -> Result<f64, TrainError> {
    let score = match variant {
        RankingVariant::Alpha => RiskScore::hazard(model),
        // Likelihood-only runs are validated the same way as Td.
        RankingVariant::Td | RankingVariant::None => RiskScore::antolini(model),
    };
    Ok(concordance(val, &score)?.index)
}

/// Mini-batch gradient descent with validation-based early stopping: after
/// each epoch the concordance matched to the ranking variant is computed on
/// the validation split, the best parameters are kept, and training stops
/// after `patience` epochs without improvement.
pub fn train(data: &SurvivalDataset, cfg: &TrainConfig) -> Result<TrainOutcome, TrainError> {
    validate_config(cfg)?;
    if data.mode() != TimeMode::Discrete {
        return Err(TrainError::NotDiscrete);
    }
    for rec in data.records() {
        if rec.time > cfg.bins as f64 {
            return Err(TrainError::TimeBeyondHorizon {
                time: rec.time,
                bins: cfg.bins,
            });
        }
    }

    let n = data.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    shuffle(&mut order, &mut rng);
    let n_train = ((n as f64) * cfg.train_fraction) as usize;
    let n_val = ((n as f64) * cfg.val_fraction) as usize;
    let split = DataSplit {
        train: order[..n_train].to_vec(),
        val: order[n_train..n_train + n_val].to_vec(),
        test: order[n_train + n_val..].to_vec(),
    };
    if split.train.is_empty() || split.val.len() < 2 || split.test.is_empty() {
        return Err(TrainError::InvalidConfig {
            what: "dataset too small for the requested split",
        });
    }
    let val_data = subset(data, &split.val);

    let mut model =
        DiscreteHazardModel::new_random(data.covariate_dim(), cfg.hidden_dim, cfg.bins, cfg.seed);
    let mut best = model.clone();
    let mut best_metric = f64::NEG_INFINITY;
    let mut best_epoch = 0;
    let mut since_improvement = 0;
    let mut log = Vec::new();
    let mut train_idx = split.train.clone();

    for epoch in 1..=cfg.max_epochs {
        shuffle(&mut train_idx, &mut rng);
        let mut epoch_l0 = 0.0;
        let mut epoch_rank = 0.0;
        for batch in train_idx.chunks(cfg.batch_size) {
            let (grads, l0, rank) = batch_gradient(
                &model,
                data,
                batch,
                cfg.variant,
                cfg.sigma,
                cfg.ranking_weight,
            );
            if !l0.is_finite() || !rank.is_finite() {
                return Err(TrainError::Diverged { epoch });
            }
            epoch_l0 += l0;
            epoch_rank += rank;
            let scale = cfg.learning_rate / batch.len() as f64;
            for (w, g) in model.w1.iter_mut().zip(&grads.w1) {
                *w -= scale * g;
            }
            for (w, g) in model.b1.iter_mut().zip(&grads.b1) {
                *w -= scale * g;
            }
            for (w, g) in model.w2.iter_mut().zip(&grads.w2) {
                *w -= scale * g;
            }
            for (w, g) in model.b2.iter_mut().zip(&grads.b2) {
                *w -= scale * g;
            }
        }
        let n_tr = train_idx.len() as f64;
        let loss = LossBreakdown {
            log_likelihood: epoch_l0 / n_tr,
            ranking: epoch_rank / n_tr,
            total: (epoch_l0 + cfg.ranking_weight * epoch_rank) / n_tr,
        };
        if !loss.total.is_finite() {
            return Err(TrainError::Diverged { epoch });
        }
        let validation = validation_metric(&model, &val_data, cfg.variant)?;
        log.push(EpochLog {
            epoch,
            loss,
            validation,
        });
        // Among epochs tied on the validation metric the most recent
        // snapshot is kept (its training loss is no worse); only a strict
        // improvement resets the stopping counter.
        if validation >= best_metric {
            if validation > best_metric {
                since_improvement = 0;
            } else {
                since_improvement += 1;
            }
            best_metric = validation;
            best = model.clone();
            best_epoch = epoch;
        } else {
            since_improvement += 1;
        }
        if since_improvement >= cfg.patience {
            break;
        }
    }

    Ok(TrainOutcome {
        model: best,
        log,
        split,
        best_epoch,
    })
}
