//! Exact generating function g(beta, k, m) = E[exp(-2 beta X(k, m))] of the
//! cut size of a uniform perfect matching, for all k <= m, via the ratio
//! recursion run in linear domain and accumulated in log domain.

use crate::error::{Error, Result};
use crate::math::{fixed_point_f, free_energy};

/// Table of log g(beta, k, m) for 0 <= k <= m, m even.
///
/// Immutable after construction. The ratio sequence h(k, m) = g(k)/g(k-1)
/// is kept for the approximation checks.
#[derive(Debug, Clone)]
pub struct GTable {
    beta: f64,
    m: usize,
    /// h(k, m) for k = 1..=m/2 (index k-1).
    h: Vec<f64>,
    /// log g(beta, k, m) for k = 0..=m.
    log_g: Vec<f64>,
}

impl GTable {
    /// Builds the table by the forward recursion
    /// h(k+1, m) = c(m - 2k)/(m - k) + k / ((m - k) h(k, m)), h(1, m) = c,
    /// filling the upper half by the symmetry g(k, m) = g(m - k, m). Cost O(m).
    pub fn build(beta: f64, m: usize) -> Result<Self> {
        if m < 2 || m % 2 != 0 {
            return Err(Error::Domain(format!("m must be even and >= 2, got {m}")));
        }
        if !(beta >= 0.0) {
            return Err(Error::Domain(format!("beta must be >= 0, got {beta}")));
        }
        let c = (-2.0 * beta).exp();
        let half = m / 2;
        let mut h = Vec::with_capacity(half);
        h.push(c);
        for k in 1..half {
            let (kf, mf) = (k as f64, m as f64);
            let next = c * (mf - 2.0 * kf) / (mf - kf) + kf / ((mf - kf) * h[k - 1]);
            h.push(next);
        }
        let mut log_g = vec![0.0; m + 1];
        let mut acc = 0.0;
        for k in 1..=half {
            acc += h[k - 1].ln();
            log_g[k] = acc;
        }
        for k in half + 1..=m {
            log_g[k] = log_g[m - k];
        }
        Ok(Self { beta, m, h, log_g })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn log_g(&self, k: usize) -> f64 {
        self.log_g[k]
    }

    pub fn g(&self, k: usize) -> f64 {
        self.log_g[k].exp()
    }

    /// h(k, m) for 1 <= k <= m/2.
    pub fn h(&self, k: usize) -> f64 {
        self.h[k - 1]
    }
}

/// One row of the uniform-bound report: the sup-norm deviation
/// max_k |log g(beta, k, m) - m F(k/m)| at a given m.
#[derive(Debug, Clone, Copy)]
pub struct UniformBoundRow {
    pub m: usize,
    pub sup_deviation: f64,
}

/// Sup-norm deviation between log g and its limit profile m F(k/m), per m.
///
/// The limit theory predicts a uniform bound C(beta), so the reported values
/// should not grow as m doubles.
pub fn check_uniform_bound(beta: f64, m_list: &[usize]) -> Result<Vec<UniformBoundRow>> {
    m_list
        .iter()
        .map(|&m| {
            let table = GTable::build(beta, m)?;
            let mut sup = 0.0f64;
            for k in 0..=m {
                let dev = (table.log_g(k) - m as f64 * free_energy(beta, k as f64 / m as f64)?).abs();
                sup = sup.max(dev);
            }
            Ok(UniformBoundRow { m, sup_deviation: sup })
        })
        .collect()
}

/// Scaled deviation m * max_k |h(k, m) - f((k-1)/m)| over 1 <= k <= m/2.
pub fn check_h_approximation(beta: f64, m: usize) -> Result<f64> {
    if m < 4 || m % 2 != 0 {
        return Err(Error::Domain(format!("m must be even and >= 4, got {m}")));
    }
    let table = GTable::build(beta, m)?;
    let mut sup = 0.0f64;
    for k in 1..=m / 2 {
        let f = fixed_point_f(beta, (k - 1) as f64 / m as f64)?;
        sup = sup.max((table.h(k) - f).abs());
    }
    Ok(m as f64 * sup)
}
