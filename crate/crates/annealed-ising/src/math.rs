//! Scalar building blocks of the variational pressure: the fixed-point
//! function f, its antiderivative F, the entropy I and the profile L with
//! first and second derivatives.

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Positive solution f(t) of the fixed-point equation
/// theta = c(1-2t)/(1-t) + t/(theta(1-t)), for t in [0, 1/2].
///
/// Values lie in [c, 1] with c = e^{-2 beta}. Callers needing the reflected
/// branch use f(1 - t) explicitly.
pub fn fixed_point_f(beta: f64, t: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&t) {
        return Err(Error::Domain(format!("f(t) requires t in [0, 1/2], got {t}")));
    }
    if !(beta >= 0.0) {
        return Err(Error::Domain(format!("beta must be >= 0, got {beta}")));
    }
    let c = (-2.0 * beta).exp();
    let s = 1.0 - 2.0 * t;
    Ok((c * s + (1.0 + (c * c - 1.0) * s * s).sqrt()) / (2.0 * (1.0 - t)))
}

/// Residual of the fixed-point equation at theta = f(t); used by tests.
pub fn fixed_point_residual(beta: f64, t: f64) -> Result<f64> {
    let theta = fixed_point_f(beta, t)?;
    let c = (-2.0 * beta).exp();
    Ok(theta - (c * (1.0 - 2.0 * t) / (1.0 - t) + t / (theta * (1.0 - t))))
}

/// Closed form of F(t) = int_0^t log f(s) ds for t in [0, 1/2].
///
/// The last logarithm is a small difference near t = 1/2 and is evaluated
/// through log1p.
pub fn free_energy_closed_form(beta: f64, t: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&t) {
        return Err(Error::Domain(format!("closed form requires t in [0, 1/2], got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let c = (-2.0 * beta).exp();
    let ft = fixed_point_f(beta, t)?;
    Ok(t * ft.ln()
        + 0.5 * (1.0 - t).ln()
        + 0.5 * (1.0 + c).ln()
        + 0.5 * (c * (2.0 * t - 1.0) / ((1.0 - t) * (ft + 1.0))).ln_1p())
}

/// F(t) on all of [0, 1], using the symmetry F(t) = F(1 - t).
pub fn free_energy(beta: f64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("F(t) requires t in [0, 1], got {t}")));
    }
    free_energy_closed_form(beta, t.min(1.0 - t))
}

/// Binary entropy I(t) = (t-1) log(1-t) - t log t, with I(0) = I(1) = 0.
pub fn entropy(t: f64) -> f64 {
    let mut v = 0.0;
    if t > 0.0 {
        v -= t * t.ln();
    }
    if t < 1.0 {
        v += (t - 1.0) * (1.0 - t).ln();
    }
    v
}

/// H(t) = I(t) + d F(t), the field-free part of the profile.
pub fn h_value(params: &ModelParams, t: f64) -> Result<f64> {
    Ok(entropy(t) + params.d as f64 * free_energy(params.beta, t)?)
}

/// L(t) = I(t) + d F(t) + 2Bt; L(0) = 0 and L(1) = 2B exactly.
pub fn l_value(params: &ModelParams, t: f64) -> Result<f64> {
    Ok(h_value(params, t)? + 2.0 * params.b * t)
}

/// H'(t) for t in (0, 1). For t >= 1/2 this is
/// log((1-t)/t) - d log f(1-t); the other half follows by H'(t) = -H'(1-t).
pub fn h_first(params: &ModelParams, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("H'(t) requires t in (0, 1), got {t}")));
    }
    let d = params.d as f64;
    let slope = ((1.0 - t) / t).ln();
    if t >= 0.5 {
        Ok(slope - d * fixed_point_f(params.beta, 1.0 - t)?.ln())
    } else {
        Ok(slope + d * fixed_point_f(params.beta, t)?.ln())
    }
}

/// H''(t) for t in (0, 1), from the closed rational form of x'/x with
/// x(t) = f(1-t); the half t < 1/2 follows by H''(t) = H''(1-t).
pub fn h_second(params: &ModelParams, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("H''(t) requires t in (0, 1), got {t}")));
    }
    let t = t.max(1.0 - t);
    let c = params.c();
    let d = params.d as f64;
    let x = fixed_point_f(params.beta, 1.0 - t)?;
    let xp_over_x = (c * x - 1.0) / (t * (c * (2.0 * t - 1.0) * x + 2.0 - 2.0 * t));
    Ok(-1.0 / (t * (1.0 - t)) - d * xp_over_x)
}

/// L(t), L'(t), L''(t) at an interior point.
///
/// Derivatives diverge at the endpoints, so t in {0, 1} is refused; use
/// `l_value` for the exact endpoint values L(0) = 0, L(1) = 2B.
pub fn l_profile(params: &ModelParams, t: f64) -> Result<(f64, f64, f64)> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!(
            "L derivatives require t in (0, 1), got {t}; use l_value at the endpoints"
        )));
    }
    let l = l_value(params, t)?;
    let l1 = h_first(params, t)? + 2.0 * params.b;
    let l2 = h_second(params, t)?;
    Ok((l, l1, l2))
}
