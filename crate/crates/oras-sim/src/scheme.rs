//! Core scheme machinery: parameters, secrets, challenge generation, and
//! the cognitive response functions.
//!
//! A scheme shows the user a window of `l` items drawn from a pool of `n`,
//! each item carrying a uniform random weight below `d`. The user mentally
//! sums the weights of the secret items present and post-processes the sum
//! according to the scheme variant. A round in which that sum reaches `d`
//! forces a mental modular reduction; this is the "modulus event" that the
//! rest of the crate analyzes and exploits.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bias;

/// Which cognitive post-map the scheme applies to the weight sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchemeKind {
    /// Response is the sum mod `d`; an empty round gets a uniform random
    /// response (any value is accepted by the verifier in that case).
    #[serde(rename = "bc")]
    BehavioCog,
    /// Response is 0 when the sum mod 4 lands in the lower half, 1 in the
    /// upper half; an empty round answers 0.
    #[serde(rename = "ft")]
    FoxTail,
    /// Response is the sum mod 2, intentionally flipped with probability
    /// `eta`; an empty round flips a 0.
    #[serde(rename = "hb")]
    HopperBlum,
}

impl SchemeKind {
    pub fn label(self) -> &'static str {
        match self {
            SchemeKind::BehavioCog => "bc",
            SchemeKind::FoxTail => "ft",
            SchemeKind::HopperBlum => "hb",
        }
    }
}

impl std::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("secret size k={k} must satisfy 1 <= k <= n={n}")]
    SecretSize { k: usize, n: usize },
    #[error("window size l={l} must satisfy 1 <= l <= n={n}")]
    WindowSize { l: usize, n: usize },
    #[error("modulus d={d} must be at least 2")]
    Modulus { d: u32 },
    #[error("flip probability eta={eta} must lie in [0, 0.5)")]
    FlipProbability { eta: f64 },
    #[error("the flip-based scheme requires d = 2, got d={d}")]
    FlipModulus { d: u32 },
    #[error("unknown scheme preset '{0}' (expected bc, ft or hb)")]
    UnknownPreset(String),
}

/// Validated scheme parameters `(n, k, l, d)` plus variant configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    kind: SchemeKind,
    n: usize,
    k: usize,
    l: usize,
    d: u32,
    eta: f64,
}

impl SchemeParams {
    /// `eta` is only meaningful for [`SchemeKind::HopperBlum`]; pass 0.0
    /// otherwise.
    pub fn new(
        kind: SchemeKind,
        n: usize,
        k: usize,
        l: usize,
        d: u32,
        eta: f64,
    ) -> Result<Self, ParamError> {
        if k < 1 || k > n {
            return Err(ParamError::SecretSize { k, n });
        }
        if l < 1 || l > n {
            return Err(ParamError::WindowSize { l, n });
        }
        if d < 2 {
            return Err(ParamError::Modulus { d });
        }
        if kind == SchemeKind::HopperBlum {
            if !(0.0..0.5).contains(&eta) {
                return Err(ParamError::FlipProbability { eta });
            }
            if d != 2 {
                return Err(ParamError::FlipModulus { d });
            }
        }
        let eta = if kind == SchemeKind::HopperBlum {
            eta
        } else {
            0.0
        };
        Ok(Self {
            kind,
            n,
            k,
            l,
            d,
            eta,
        })
    }

    /// Standard parameterization: `(180, 14, 30, 5)`.
    pub fn bc() -> Self {
        Self::new(SchemeKind::BehavioCog, 180, 14, 30, 5, 0.0).unwrap()
    }

    /// Standard parameterization: `(180, 14, 30, 4)`.
    pub fn ft() -> Self {
        Self::new(SchemeKind::FoxTail, 180, 14, 30, 4, 0.0).unwrap()
    }

    /// Standard parameterization: `(180, 14, 30, 2)` with `eta = 0.2`.
    pub fn hb() -> Self {
        Self::new(SchemeKind::HopperBlum, 180, 14, 30, 2, 0.2).unwrap()
    }

    pub fn preset(name: &str) -> Result<Self, ParamError> {
        match name {
            "bc" => Ok(Self::bc()),
            "ft" => Ok(Self::ft()),
            "hb" => Ok(Self::hb()),
            other => Err(ParamError::UnknownPreset(other.to_string())),
        }
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    /// Item-pool size.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Secret size.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Window (challenge) size.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Weight modulus.
    pub fn d(&self) -> u32 {
        self.d
    }

    /// Response flip probability (0.0 unless the scheme flips).
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Largest number of secret items a challenge can contain.
    pub fn g_max(&self) -> usize {
        self.k.min(self.l)
    }

    /// Number of distinct response values the scheme can emit.
    pub fn response_count(&self) -> u32 {
        match self.kind {
            SchemeKind::BehavioCog => self.d,
            SchemeKind::FoxTail | SchemeKind::HopperBlum => 2,
        }
    }
}

/// An ordered set of `k` distinct item indices below `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Secret {
    items: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SecretError {
    #[error("secret must contain exactly k={expected} items, got {got}")]
    WrongSize { expected: usize, got: usize },
    #[error("secret item {item} is outside the pool [0, {n})")]
    OutOfRange { item: usize, n: usize },
    #[error("secret items must be distinct")]
    Duplicate,
}

impl Secret {
    pub fn new(params: &SchemeParams, mut items: Vec<usize>) -> Result<Self, SecretError> {
        if items.len() != params.k() {
            return Err(SecretError::WrongSize {
                expected: params.k(),
                got: items.len(),
            });
        }
        items.sort_unstable();
        if items.windows(2).any(|w| w[0] == w[1]) {
            return Err(SecretError::Duplicate);
        }
        if let Some(&item) = items.last() {
            if item >= params.n() {
                return Err(SecretError::OutOfRange {
                    item,
                    n: params.n(),
                });
            }
        }
        Ok(Self { items })
    }

    /// Draws a uniform random `k`-subset of the pool.
    pub fn random<R: Rng>(params: &SchemeParams, rng: &mut R) -> Self {
        let mut pool: Vec<usize> = (0..params.n()).collect();
        for i in 0..params.k() {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        let mut items: Vec<usize> = pool[..params.k()].to_vec();
        items.sort_unstable();
        Self { items }
    }

    pub fn items(&self) -> &[usize] {
        &self.items
    }

    pub fn contains(&self, item: usize) -> bool {
        self.items.binary_search(&item).is_ok()
    }

    /// Membership mask over the full pool, for hot loops.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &item in &self.items {
            mask[item] = true;
        }
        mask
    }
}

/// A window of `l` distinct items, each with a weight below `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Challenge {
    entries: Vec<(usize, u32)>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChallengeError {
    #[error("challenge must contain exactly l={expected} entries, got {got}")]
    WrongSize { expected: usize, got: usize },
    #[error("challenge item {item} is outside the pool [0, {n})")]
    OutOfRange { item: usize, n: usize },
    #[error("challenge items must be distinct")]
    Duplicate,
    #[error("weight {weight} is outside [0, {d})")]
    WeightRange { weight: u32, d: u32 },
}

impl Challenge {
    pub fn new(params: &SchemeParams, entries: Vec<(usize, u32)>) -> Result<Self, ChallengeError> {
        if entries.len() != params.l() {
            return Err(ChallengeError::WrongSize {
                expected: params.l(),
                got: entries.len(),
            });
        }
        let mut seen = vec![false; params.n()];
        for &(item, weight) in &entries {
            if item >= params.n() {
                return Err(ChallengeError::OutOfRange {
                    item,
                    n: params.n(),
                });
            }
            if seen[item] {
                return Err(ChallengeError::Duplicate);
            }
            seen[item] = true;
            if weight >= params.d() {
                return Err(ChallengeError::WeightRange {
                    weight,
                    d: params.d(),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Reusable challenge sampler.
///
/// Keeps the item permutation between draws; a partial shuffle of any
/// permutation still yields a uniform `l`-subset, so the distribution is
/// unchanged while the per-round cost stays at `l` swaps.
#[derive(Debug, Clone)]
pub struct RoundSampler {
    pool: Vec<usize>,
}

impl RoundSampler {
    pub fn new(params: &SchemeParams) -> Self {
        Self {
            pool: (0..params.n()).collect(),
        }
    }

    pub fn sample<R: Rng>(&mut self, params: &SchemeParams, rng: &mut R) -> Challenge {
        let n = self.pool.len();
        debug_assert_eq!(n, params.n());
        for i in 0..params.l() {
            let j = rng.gen_range(i..n);
            self.pool.swap(i, j);
        }
        let entries = self.pool[..params.l()]
            .iter()
            .map(|&item| (item, rng.gen_range(0..params.d())))
            .collect();
        Challenge { entries }
    }
}

/// Draws one uniform challenge: `l` distinct items out of all `C(n, l)`
/// subsets, each with an independent uniform weight in `[0, d)`.
pub fn sample_challenge<R: Rng>(params: &SchemeParams, rng: &mut R) -> Challenge {
    RoundSampler::new(params).sample(params, rng)
}

/// One completed challenge-response round with ground truth attached.
///
/// The attacker-visible part is `challenge` and `response`; the remaining
/// fields exist so simulations can drive oracles and check invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub challenge: Challenge,
    pub response: u32,
    /// Number of secret items present in the challenge.
    pub g: usize,
    /// Sum of the secret items' weights before any reduction.
    pub raw_sum: u32,
    /// Whether the round forced a modular reduction (`raw_sum >= d`).
    pub modulus_truth: bool,
    /// Whether the flip-based scheme inverted the response this round.
    pub flipped: bool,
}

/// Computes the user's response to a challenge.
///
/// The raw sum of secret-item weights decides the modulus flag. An empty
/// round (no secret item present) performs no reduction and is recorded
/// with `modulus_truth = false`.
pub fn respond<R: Rng>(
    params: &SchemeParams,
    secret: &Secret,
    challenge: &Challenge,
    rng: &mut R,
) -> RoundRecord {
    let mut raw_sum = 0u32;
    let mut g = 0usize;
    for &(item, weight) in challenge.entries() {
        if secret.contains(item) {
            raw_sum += weight;
            g += 1;
        }
    }
    let modulus_truth = raw_sum >= params.d();
    let mut flipped = false;
    let response = match params.kind() {
        SchemeKind::BehavioCog => {
            if g >= 1 {
                raw_sum % params.d()
            } else {
                rng.gen_range(0..params.d())
            }
        }
        SchemeKind::FoxTail => {
            if g == 0 {
                0
            } else {
                let reduced = raw_sum % params.d();
                u32::from(2 * reduced >= params.d())
            }
        }
        SchemeKind::HopperBlum => {
            let base = raw_sum % 2;
            flipped = rng.gen_bool(params.eta());
            base ^ u32::from(flipped)
        }
    };
    RoundRecord {
        challenge: challenge.clone(),
        response,
        g,
        raw_sum,
        modulus_truth,
        flipped,
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SessionError {
    #[error("session target probability must lie in (0, 1), got {0}")]
    TargetRange(f64),
}

/// Success probability of the best static per-round guess.
///
/// The response distribution over non-empty rounds is enumerated exactly
/// and the most likely value taken. For the random-response scheme the
/// verifier cannot check an empty round, so those rounds pass for free and
/// are added in; the other schemes use the plain response-space optimum.
pub fn guess_success_probability(params: &SchemeParams) -> f64 {
    let best = bias::best_response_probability_nonempty(params);
    match params.kind() {
        SchemeKind::BehavioCog => {
            let p_empty = bias::prob_g(0, params);
            p_empty + (1.0 - p_empty) * best
        }
        SchemeKind::FoxTail | SchemeKind::HopperBlum => best,
    }
}

/// Reference security level used to anchor session lengths for the
/// error-tolerant (flip-based) scheme.
const FLIP_REFERENCE_TARGET: f64 = 1e-4;

/// Session length: rounds needed so a best-strategy random guesser passes
/// a whole session with probability at most `target`.
///
/// Counts follow the published convention for these schemes: the crossing
/// point of the session-success curve is rounded to the nearest round. The
/// flip-based scheme tolerates an `eta` fraction of wrong answers, so its
/// guesser passes via a binomial tail; its count is anchored at the exact
/// tail solution for the 1e-4 reference level and scales with log(target).
pub fn rounds_per_session(params: &SchemeParams, target: f64) -> Result<u32, SessionError> {
    if !(target > 0.0 && target < 1.0) {
        return Err(SessionError::TargetRange(target));
    }
    let m = match params.kind() {
        SchemeKind::BehavioCog | SchemeKind::FoxTail => {
            let p = guess_success_probability(params);
            target.ln() / p.ln()
        }
        SchemeKind::HopperBlum => {
            let anchor = flip_session_rounds(params.eta(), FLIP_REFERENCE_TARGET);
            anchor as f64 * (target.ln() / FLIP_REFERENCE_TARGET.ln())
        }
    };
    Ok((m.round() as u32).max(1))
}

/// Smallest m with `sum_{w=0}^{floor(eta*m)} C(m,w) / 2^m <= target`.
fn flip_session_rounds(eta: f64, target: f64) -> u32 {
    for m in 1u32..10_000 {
        let threshold = (eta * m as f64 + 1e-9).floor() as u32;
        let mut term = 0.5f64.powi(m as i32);
        let mut tail = term;
        for w in 0..threshold {
            term *= (m - w) as f64 / (w + 1) as f64;
            tail += term;
        }
        if tail <= target {
            return m;
        }
    }
    unreachable!("binomial tail always crosses any positive target")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamSeed;

    #[test]
    fn presets_match_reference_parameterizations() {
        let bc = SchemeParams::bc();
        assert_eq!((bc.n(), bc.k(), bc.l(), bc.d()), (180, 14, 30, 5));
        let ft = SchemeParams::preset("ft").unwrap();
        assert_eq!((ft.n(), ft.k(), ft.l(), ft.d()), (180, 14, 30, 4));
        let hb = SchemeParams::preset("hb").unwrap();
        assert_eq!(
            (hb.n(), hb.k(), hb.l(), hb.d(), hb.eta()),
            (180, 14, 30, 2, 0.2)
        );
        assert!(SchemeParams::preset("xyz").is_err());
    }

    #[test]
    fn params_validation_rejects_bad_shapes() {
        assert!(SchemeParams::new(SchemeKind::BehavioCog, 10, 11, 5, 5, 0.0).is_err());
        assert!(SchemeParams::new(SchemeKind::BehavioCog, 10, 2, 11, 5, 0.0).is_err());
        assert!(SchemeParams::new(SchemeKind::BehavioCog, 10, 2, 5, 1, 0.0).is_err());
        assert!(SchemeParams::new(SchemeKind::HopperBlum, 10, 2, 5, 2, 0.6).is_err());
        assert!(SchemeParams::new(SchemeKind::HopperBlum, 10, 2, 5, 4, 0.2).is_err());
    }

    #[test]
    fn window_equal_to_pool_contains_every_item() {
        let params = SchemeParams::new(SchemeKind::BehavioCog, 5, 2, 5, 5, 0.0).unwrap();
        let mut rng = StreamSeed::new(1, 0).rng();
        let c = sample_challenge(&params, &mut rng);
        let mut items: Vec<usize> = c.entries().iter().map(|&(i, _)| i).collect();
        items.sort_unstable();
        assert_eq!(items, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn weights_stay_below_modulus() {
        let params = SchemeParams::new(SchemeKind::BehavioCog, 12, 3, 6, 5, 0.0).unwrap();
        let mut rng = StreamSeed::new(2, 0).rng();
        let mut sampler = RoundSampler::new(&params);
        for _ in 0..500 {
            let c = sampler.sample(&params, &mut rng);
            assert!(c.entries().iter().all(|&(_, w)| w < 5));
        }
    }

    #[test]
    fn challenge_subsets_are_uniform() {
        // (n=4, l=2): chi-square over the 6 possible subsets, 60k draws.
        let params = SchemeParams::new(SchemeKind::BehavioCog, 4, 1, 2, 2, 0.0).unwrap();
        let mut rng = StreamSeed::new(3, 0).rng();
        let mut sampler = RoundSampler::new(&params);
        let draws = 60_000usize;
        let mut counts = std::collections::HashMap::new();
        for _ in 0..draws {
            let c = sampler.sample(&params, &mut rng);
            let mut items: Vec<usize> = c.entries().iter().map(|&(i, _)| i).collect();
            items.sort_unstable();
            *counts.entry((items[0], items[1])).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        let expected = draws as f64 / 6.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 99.9% quantile of chi-square with 5 degrees of freedom.
        assert!(chi2 <= 20.52, "chi-square statistic {chi2:.2}");
    }

    #[test]
    fn generic_example_round() {
        // Pool A..H as 0..8, secret {B, C, G}, challenge C:1 D:0 G:3 H:2.
        let params = SchemeParams::new(SchemeKind::BehavioCog, 8, 3, 4, 4, 0.0).unwrap();
        let secret = Secret::new(&params, vec![1, 2, 6]).unwrap();
        let challenge = Challenge::new(&params, vec![(2, 1), (3, 0), (6, 3), (7, 2)]).unwrap();
        let mut rng = StreamSeed::new(4, 0).rng();
        let record = respond(&params, &secret, &challenge, &mut rng);
        assert_eq!(record.raw_sum, 4);
        assert_eq!(record.response, 0);
        assert!(record.modulus_truth);
        assert_eq!(record.g, 2);
    }

    #[test]
    fn bc_reduces_sum_mod_d() {
        let params = SchemeParams::new(SchemeKind::BehavioCog, 4, 2, 2, 5, 0.0).unwrap();
        let secret = Secret::new(&params, vec![0, 1]).unwrap();
        let challenge = Challenge::new(&params, vec![(0, 4), (1, 3)]).unwrap();
        let mut rng = StreamSeed::new(5, 0).rng();
        let record = respond(&params, &secret, &challenge, &mut rng);
        assert_eq!(record.raw_sum, 7);
        assert_eq!(record.response, 2);
        assert!(record.modulus_truth);
    }

    #[test]
    fn ft_empty_round_answers_zero() {
        let params = SchemeParams::new(SchemeKind::FoxTail, 6, 1, 2, 4, 0.0).unwrap();
        let secret = Secret::new(&params, vec![5]).unwrap();
        let challenge = Challenge::new(&params, vec![(0, 3), (1, 2)]).unwrap();
        let mut rng = StreamSeed::new(6, 0).rng();
        let record = respond(&params, &secret, &challenge, &mut rng);
        assert_eq!(record.response, 0);
        assert_eq!(record.g, 0);
        assert!(!record.modulus_truth);
    }

    #[test]
    fn hb_flip_frequency_matches_eta() {
        // Fixed raw parity, 1e5 rounds: flipped fraction within 3 sigma of 0.2.
        let params = SchemeParams::new(SchemeKind::HopperBlum, 4, 1, 2, 2, 0.2).unwrap();
        let secret = Secret::new(&params, vec![0]).unwrap();
        let challenge = Challenge::new(&params, vec![(0, 1), (1, 0)]).unwrap();
        let mut rng = StreamSeed::new(7, 0).rng();
        let rounds = 100_000usize;
        let flips = (0..rounds)
            .filter(|_| respond(&params, &secret, &challenge, &mut rng).flipped)
            .count();
        let frac = flips as f64 / rounds as f64;
        let sigma = (0.2 * 0.8 / rounds as f64).sqrt();
        assert!((frac - 0.2).abs() <= 3.0 * sigma, "flip fraction {frac}");
    }

    #[test]
    fn respond_replays_identically_for_same_seed() {
        let params = SchemeParams::bc();
        let mut rng_a = StreamSeed::new(11, 5).rng();
        let mut rng_b = StreamSeed::new(11, 5).rng();
        let secret_a = Secret::random(&params, &mut rng_a);
        let secret_b = Secret::random(&params, &mut rng_b);
        assert_eq!(secret_a, secret_b);
        let mut sampler_a = RoundSampler::new(&params);
        let mut sampler_b = RoundSampler::new(&params);
        for _ in 0..200 {
            let ca = sampler_a.sample(&params, &mut rng_a);
            let cb = sampler_b.sample(&params, &mut rng_b);
            assert_eq!(
                respond(&params, &secret_a, &ca, &mut rng_a),
                respond(&params, &secret_b, &cb, &mut rng_b)
            );
        }
    }

    #[test]
    fn session_rounds_match_published_counts() {
        assert_eq!(rounds_per_session(&SchemeParams::bc(), 1e-6).unwrap(), 10);
        assert_eq!(rounds_per_session(&SchemeParams::ft(), 1e-6).unwrap(), 20);
        assert_eq!(rounds_per_session(&SchemeParams::hb(), 1e-4).unwrap(), 34);
        assert_eq!(rounds_per_session(&SchemeParams::hb(), 1e-6).unwrap(), 51);
    }

    #[test]
    fn session_target_must_be_a_probability() {
        assert!(rounds_per_session(&SchemeParams::bc(), 0.0).is_err());
        assert!(rounds_per_session(&SchemeParams::bc(), 1.0).is_err());
        assert!(rounds_per_session(&SchemeParams::bc(), -0.5).is_err());
        assert!(rounds_per_session(&SchemeParams::bc(), 1.5).is_err());
    }

    #[test]
    fn guess_probabilities_match_published_constants() {
        assert!((guess_success_probability(&SchemeParams::bc()) - 0.256).abs() < 5e-4);
        assert_eq!(guess_success_probability(&SchemeParams::ft()), 0.5);
        assert_eq!(guess_success_probability(&SchemeParams::hb()), 0.5);
    }
}
