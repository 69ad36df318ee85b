//! Simulated side-channel classifier for the modulus event.
//!
//! The oracle answers whether a round involved a modular reduction, making
//! independent errors at configured rates. It stands in for any concrete
//! side channel (timing, gaze patterns, sensor data): all that matters to
//! the attacks is the pair of accuracies.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{name}={value} is not a probability in [0, 1]")]
    RateRange { name: &'static str, value: f64 },
}

/// Accuracy pair of the simulated classifier.
///
/// `tpr` is the probability of answering `Modulus` when a reduction truly
/// occurred; `tnr` the probability of answering `NoModulus` when none did.
/// Their complements are the type-1 and type-2 error rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaultyOracleConfig {
    tpr: f64,
    tnr: f64,
}

/// The oracle's verdict for one round: `Modulus` is the +1 answer,
/// `NoModulus` the -1 answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleAnswer {
    Modulus,
    NoModulus,
}

impl OracleAnswer {
    pub fn signum(self) -> i8 {
        match self {
            OracleAnswer::Modulus => 1,
            OracleAnswer::NoModulus => -1,
        }
    }
}

impl FaultyOracleConfig {
    pub fn new(tpr: f64, tnr: f64) -> Result<Self, OracleError> {
        if !(0.0..=1.0).contains(&tpr) {
            return Err(OracleError::RateRange {
                name: "tpr",
                value: tpr,
            });
        }
        if !(0.0..=1.0).contains(&tnr) {
            return Err(OracleError::RateRange {
                name: "tnr",
                value: tnr,
            });
        }
        Ok(Self { tpr, tnr })
    }

    /// Equal accuracy on both classes.
    pub fn symmetric(accuracy: f64) -> Result<Self, OracleError> {
        Self::new(accuracy, accuracy)
    }

    pub fn perfect() -> Self {
        Self { tpr: 1.0, tnr: 1.0 }
    }

    pub fn tpr(&self) -> f64 {
        self.tpr
    }

    pub fn tnr(&self) -> f64 {
        self.tnr
    }

    /// Answers one query given the round's true modulus flag. Errors on
    /// distinct queries are independent.
    pub fn query<R: Rng>(&self, modulus_truth: bool, rng: &mut R) -> OracleAnswer {
        if modulus_truth {
            if rng.gen_bool(self.tpr) {
                OracleAnswer::Modulus
            } else {
                OracleAnswer::NoModulus
            }
        } else if rng.gen_bool(self.tnr) {
            OracleAnswer::NoModulus
        } else {
            OracleAnswer::Modulus
        }
    }
}
