//! Shared oracles and helpers for the integration tests. These stay
//! independent of the library's computation paths: the polynomial oracle
//! expands the generating function by convolution, which the library never
//! does.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Probability that `g` uniform weights in `[0, d)` sum to `y`, read off
/// the expanded polynomial `(1 + z + ... + z^{d-1})^g`.
pub fn poly_coefficient_prob(y: i64, g: u32, d: u32) -> BigRational {
    let mut coeffs: Vec<BigUint> = vec![BigUint::one()];
    for _ in 0..g {
        let mut next = vec![BigUint::zero(); coeffs.len() + d as usize - 1];
        for (i, c) in coeffs.iter().enumerate() {
            for w in 0..d as usize {
                next[i + w] += c;
            }
        }
        coeffs = next;
    }
    if y < 0 || y as usize >= coeffs.len() {
        return BigRational::zero();
    }
    BigRational::new(
        BigInt::from(coeffs[y as usize].clone()),
        BigInt::from(d).pow(g),
    )
}

/// Relative deviation of a measurement from its reference.
#[allow(dead_code)]
pub fn rel_dev(measured: f64, reference: f64) -> f64 {
    (measured - reference) / reference
}
