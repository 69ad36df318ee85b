//! Exact probability and expectation analysis of the modulus event.
//!
//! Everything here is computed in exact rational arithmetic (big integers
//! under the hood) and only converted to `f64` at the boundary, so small
//! instances agree with brute-force enumeration to well below 1e-12 and the
//! reference parameterizations stay exact despite binomials far beyond the
//! 64-bit range.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::scheme::{SchemeKind, SchemeParams};

fn big_binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Exact form of [`prob_sum`].
pub fn prob_sum_exact(y: i64, g: u32, d: u32) -> BigRational {
    assert!(d >= 2, "modulus must be at least 2");
    assert!(g >= 1, "needs at least one secret item");
    if y < 0 || y > i64::from(d - 1) * i64::from(g) {
        return BigRational::zero();
    }
    let y = y as u64;
    let g64 = u64::from(g);
    let d64 = u64::from(d);
    let mut num = BigInt::zero();
    for s in 0..=(y / d64) {
        let term = BigInt::from(big_binomial(g64, s))
            * BigInt::from(big_binomial(y - s * d64 + g64 - 1, g64 - 1));
        if s % 2 == 0 {
            num += term;
        } else {
            num -= term;
        }
    }
    ratio(num, BigInt::from(d).pow(g))
}

/// Probability that `g` independent uniform weights in `[0, d)` sum to
/// exactly `y`, evaluated by the alternating inclusion-exclusion sum
/// rather than expanding the generating polynomial.
///
/// Out-of-range `y` yields probability 0.
pub fn prob_sum(y: i64, g: u32, d: u32) -> f64 {
    prob_sum_exact(y, g, d).to_f64().unwrap()
}

/// Distribution of the secret-weight sum for fixed `g` and `d`.
#[derive(Debug, Clone)]
pub struct SumDistribution {
    d: u32,
    g: u32,
    probs: Vec<BigRational>,
}

impl SumDistribution {
    pub fn new(g: u32, d: u32) -> Self {
        let max_sum = (d - 1) * g;
        let probs = (0..=max_sum)
            .map(|y| prob_sum_exact(i64::from(y), g, d))
            .collect();
        Self { d, g, probs }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    /// `Pr(Y = y)`, zero outside `[0, (d-1)g]`.
    pub fn prob(&self, y: i64) -> f64 {
        self.prob_exact(y).to_f64().unwrap()
    }

    pub fn prob_exact(&self, y: i64) -> BigRational {
        if y < 0 || y as usize >= self.probs.len() {
            BigRational::zero()
        } else {
            self.probs[y as usize].clone()
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.probs.iter().enumerate().map(|(y, p)| (y as u32, p))
    }

    fn mass_below_d(&self) -> BigRational {
        self.probs.iter().take(self.d as usize).sum()
    }
}

/// `(Pr(no modulus), Pr(modulus))` for a round containing `g` secret items.
///
/// An empty round performs no reduction, so `g = 0` returns `(1, 0)`.
pub fn prob_mod_event(g: u32, d: u32) -> (f64, f64) {
    let no_mod = prob_no_mod_exact(g, d).to_f64().unwrap();
    (no_mod, 1.0 - no_mod)
}

fn prob_no_mod_exact(g: u32, d: u32) -> BigRational {
    if g == 0 {
        return BigRational::one();
    }
    SumDistribution::new(g, d).mass_below_d()
}

/// Exact form of [`prob_g`].
pub fn prob_g_exact(g: usize, params: &SchemeParams) -> BigRational {
    let (n, k, l) = (params.n() as u64, params.k() as u64, params.l() as u64);
    let g = g as u64;
    if g > k || g > l {
        return BigRational::zero();
    }
    if l - g > n - k {
        return BigRational::zero();
    }
    let num = big_binomial(n - k, l - g) * big_binomial(k, g);
    ratio(BigInt::from(num), BigInt::from(big_binomial(n, l)))
}

/// Hypergeometric probability that a challenge contains exactly `g` secret
/// items: `C(n-k, l-g) C(k, g) / C(n, l)`.
pub fn prob_g(g: usize, params: &SchemeParams) -> f64 {
    prob_g_exact(g, params).to_f64().unwrap()
}

/// Which event the expectation in [`conditional_expected_weight`] is
/// conditioned on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightEvent {
    NoModulus,
    Modulus,
    Unconditional,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BiasError {
    #[error("expected weight needs at least one secret item in the challenge, got g={0}")]
    NoSecretItems(u32),
    #[error("a modulus event cannot occur with a single secret item (weights stay below d)")]
    ModulusImpossible,
}

/// Expected weight of a secret item present in the challenge, conditioned
/// on the round's modulus status.
///
/// Unconditionally the weight is uniform, so the expectation is
/// `(d - 1) / 2`. Conditioning shifts it: below-average in a no-modulus
/// round and above-average in a modulus round.
pub fn conditional_expected_weight(g: u32, d: u32, event: WeightEvent) -> Result<f64, BiasError> {
    conditional_expected_weight_exact(g, d, event).map(|r| r.to_f64().unwrap())
}

pub fn conditional_expected_weight_exact(
    g: u32,
    d: u32,
    event: WeightEvent,
) -> Result<BigRational, BiasError> {
    if g == 0 {
        return Err(BiasError::NoSecretItems(g));
    }
    let half = ratio(BigInt::from(d - 1), BigInt::from(2));
    match event {
        WeightEvent::Unconditional => Ok(half),
        WeightEvent::NoModulus => {
            let dist = SumDistribution::new(g, d);
            let mut num = BigRational::zero();
            let mut den = BigRational::zero();
            for (y, p) in dist.iter().take(d as usize) {
                num += BigRational::from(BigInt::from(y)) * p;
                den += p;
            }
            Ok(num / den / BigRational::from(BigInt::from(g)))
        }
        WeightEvent::Modulus => {
            if g == 1 {
                return Err(BiasError::ModulusImpossible);
            }
            let dist = SumDistribution::new(g, d);
            let mut num = BigRational::zero();
            let mut den = BigRational::zero();
            for (y, p) in dist.iter().skip(d as usize) {
                num += BigRational::from(BigInt::from(y)) * p;
                den += p;
            }
            Ok(num / den / BigRational::from(BigInt::from(g)))
        }
    }
}

/// Expected secret-item weight for a whole scheme, aggregated over the
/// challenge distribution.
///
/// The no-modulus average runs over every challenge, with empty ones
/// contributing zero weight mass; the modulus average runs over the
/// challenges in which a reduction can occur at all (`g >= 2`),
/// renormalized accordingly.
pub fn aggregate_expected_weight(params: &SchemeParams, event: WeightEvent) -> f64 {
    let d = params.d();
    match event {
        WeightEvent::Unconditional => f64::from(d - 1) / 2.0,
        WeightEvent::NoModulus => {
            let mut acc = BigRational::zero();
            for g in 1..=params.g_max() {
                let e = conditional_expected_weight_exact(g as u32, d, WeightEvent::NoModulus)
                    .expect("g >= 1");
                acc += prob_g_exact(g, params) * e;
            }
            acc.to_f64().unwrap()
        }
        WeightEvent::Modulus => {
            let mut num = BigRational::zero();
            let mut den = BigRational::zero();
            for g in 2..=params.g_max() {
                let e = conditional_expected_weight_exact(g as u32, d, WeightEvent::Modulus)
                    .expect("g >= 2");
                let pg = prob_g_exact(g, params);
                num += pg.clone() * e;
                den += pg;
            }
            (num / den).to_f64().unwrap()
        }
    }
}

/// Modulus bias of the raw reduced response (no scheme post-map): for each
/// response `r` in `[0, d)`, the pair `(Pr(mod | r), Pr(no mod | r))`
/// given `g` secret items.
pub fn modulus_bias_given_response(d: u32, g: u32) -> Vec<(f64, f64)> {
    assert!(g >= 1);
    let dist = SumDistribution::new(g, d);
    let mut joint_mod = vec![BigRational::zero(); d as usize];
    let mut marginal = vec![BigRational::zero(); d as usize];
    for (y, p) in dist.iter() {
        let r = (y % d) as usize;
        marginal[r] += p;
        if y >= d {
            joint_mod[r] += p;
        }
    }
    (0..d as usize)
        .map(|r| {
            if marginal[r].is_zero() {
                (0.0, 1.0)
            } else {
                let pm = (&joint_mod[r] / &marginal[r]).to_f64().unwrap();
                (pm, 1.0 - pm)
            }
        })
        .collect()
}

/// Bias of one response value: how likely the round that produced it
/// involved a modular reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseBias {
    pub response: u32,
    pub p_mod: f64,
    pub p_no_mod: f64,
    /// Probability of seeing this response in the conditioning population.
    pub p_response: f64,
}

/// Per-`g` block of response biases.
#[derive(Debug, Clone, PartialEq)]
pub struct GBias {
    pub g: u32,
    pub rows: Vec<ResponseBias>,
}

/// Full response-conditioned modulus bias table for a scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasTable {
    pub scheme: SchemeKind,
    /// One block per `g` from 1 to `min(k, l)`.
    pub per_g: Vec<GBias>,
    /// Biases aggregated over the challenge distribution, empty rounds
    /// included.
    pub aggregate: Vec<ResponseBias>,
}

/// Joint response/modulus distribution for fixed `g`, after the scheme's
/// post-map (threshold split, flip channel, or none). Index `[r]` holds
/// `[Pr(r, no mod), Pr(r, mod)]`.
fn response_joint(params: &SchemeParams, g: u32) -> Vec<[BigRational; 2]> {
    let d = params.d();
    let responses = params.response_count() as usize;
    let mut joint = vec![[BigRational::zero(), BigRational::zero()]; responses];
    if g == 0 {
        match params.kind() {
            SchemeKind::BehavioCog => {
                let per = ratio(BigInt::one(), BigInt::from(d));
                for row in joint.iter_mut() {
                    row[0] = per.clone();
                }
            }
            SchemeKind::FoxTail => {
                joint[0][0] = BigRational::one();
            }
            SchemeKind::HopperBlum => {
                let eta = BigRational::from_float(params.eta()).expect("eta is finite");
                joint[0][0] = BigRational::one() - eta.clone();
                joint[1][0] = eta;
            }
        }
        return joint;
    }
    let dist = SumDistribution::new(g, d);
    match params.kind() {
        SchemeKind::BehavioCog => {
            for (y, p) in dist.iter() {
                joint[(y % d) as usize][usize::from(y >= d)] += p;
            }
        }
        SchemeKind::FoxTail => {
            for (y, p) in dist.iter() {
                let r = usize::from(2 * (y % d) >= d);
                joint[r][usize::from(y >= d)] += p;
            }
        }
        SchemeKind::HopperBlum => {
            let eta = BigRational::from_float(params.eta()).expect("eta is finite");
            let keep = BigRational::one() - eta.clone();
            for (y, p) in dist.iter() {
                let base = (y % 2) as usize;
                let m = usize::from(y >= d);
                joint[base][m] += p * keep.clone();
                joint[base ^ 1][m] += p * eta.clone();
            }
        }
    }
    joint
}

fn rows_from_joint(joint: &[[BigRational; 2]]) -> Vec<ResponseBias> {
    joint
        .iter()
        .enumerate()
        .map(|(r, cell)| {
            let marginal = &cell[0] + &cell[1];
            let (p_mod, p_no_mod) = if marginal.is_zero() {
                (0.0, 1.0)
            } else {
                let pm = (&cell[1] / &marginal).to_f64().unwrap();
                (pm, 1.0 - pm)
            };
            ResponseBias {
                response: r as u32,
                p_mod,
                p_no_mod,
                p_response: marginal.to_f64().unwrap(),
            }
        })
        .collect()
}

/// Computes the scheme's full bias table: `Pr(mod | response, g)` for every
/// reachable `g >= 1`, plus the same conditionals aggregated over the
/// challenge distribution (the empty event counts as a no-modulus round
/// with the scheme's empty-round response).
pub fn response_bias_table(params: &SchemeParams) -> BiasTable {
    let responses = params.response_count() as usize;
    let mut per_g = Vec::with_capacity(params.g_max());
    let mut agg = vec![[BigRational::zero(), BigRational::zero()]; responses];
    for g in 0..=params.g_max() {
        let joint = response_joint(params, g as u32);
        let pg = prob_g_exact(g, params);
        for (acc, cell) in agg.iter_mut().zip(joint.iter()) {
            acc[0] += &pg * &cell[0];
            acc[1] += &pg * &cell[1];
        }
        if g >= 1 {
            per_g.push(GBias {
                g: g as u32,
                rows: rows_from_joint(&joint),
            });
        }
    }
    BiasTable {
        scheme: params.kind(),
        per_g,
        aggregate: rows_from_joint(&agg),
    }
}

/// Largest response-value probability over non-empty rounds, exact.
/// Drives the static-guess analysis in session-length computation.
pub(crate) fn best_response_probability_nonempty(params: &SchemeParams) -> f64 {
    let responses = params.response_count() as usize;
    let mut mass = vec![BigRational::zero(); responses];
    let mut total = BigRational::zero();
    for g in 1..=params.g_max() {
        let pg = prob_g_exact(g, params);
        let joint = response_joint(params, g as u32);
        for (acc, cell) in mass.iter_mut().zip(joint.iter()) {
            *acc += &pg * (&cell[0] + &cell[1]);
        }
        total += pg;
    }
    let best = mass.into_iter().max().expect("at least one response value");
    (best / total).to_f64().unwrap()
}
