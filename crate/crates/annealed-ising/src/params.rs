use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Evaluation point of the model: inverse temperature, external field and degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub beta: f64,
    pub b: f64,
    pub d: u32,
}

impl ModelParams {
    pub fn new(beta: f64, b: f64, d: u32) -> Result<Self> {
        if !(beta >= 0.0) {
            return Err(Error::Domain(format!("beta must be >= 0, got {beta}")));
        }
        if !b.is_finite() {
            return Err(Error::Domain(format!("B must be finite, got {b}")));
        }
        if d < 2 {
            return Err(Error::Domain(format!("d must be >= 2, got {d}")));
        }
        Ok(Self { beta, b, d })
    }

    /// The edge penalty factor c = e^{-2 beta}.
    pub fn c(&self) -> f64 {
        (-2.0 * self.beta).exp()
    }
}

/// A point of the variational region [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct UnitInterval(f64);

impl UnitInterval {
    pub fn new(t: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&t) {
            Ok(Self(t))
        } else {
            Err(Error::Domain(format!("t must lie in [0, 1], got {t}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Distance to the nearer endpoint, u(t) = min(t, 1 - t).
    pub fn folded(self) -> f64 {
        self.0.min(1.0 - self.0)
    }
}
