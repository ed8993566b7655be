//! Quenched pressure through the tree fixed point h*, and the identity
//! machinery tying it to the variational (annealed) formula.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::regular::critical_beta;
use crate::root::solve_root_bracketed;

/// Fixed point h*, the product u* = tanh(beta) tanh(h*), and the closed-form
/// pressure evaluated at them.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuenchedResult {
    pub h_star: f64,
    pub u_star: f64,
    pub psi_tilde: f64,
}

fn fixed_point_map(params: &ModelParams, h: f64) -> f64 {
    params.b + (params.d as f64 - 1.0) * (params.beta.tanh() * h.tanh()).atanh()
}

/// Solves h = B + (d-1) atanh(tanh(beta) tanh(h)).
///
/// For B > 0 the positive solution; for B = 0 returns 0 below the critical
/// temperature and the positive root above it. Damped iteration from h = B
/// with a bracketed fallback; residual <= 1e-12.
pub fn solve_h_star(params: &ModelParams) -> Result<f64> {
    if params.b < 0.0 {
        return Err(Error::Domain("solve_h_star requires B >= 0; use evenness".into()));
    }
    let upper = params.b + (params.d as f64 - 1.0) * params.beta + 1.0;
    if params.b == 0.0 {
        if params.beta <= critical_beta(params.d)? {
            return Ok(0.0);
        }
        // Supercritical: (d-1) tanh(beta) > 1, so the map leaves (0, upper]
        // above the diagonal near 0 and below it at the top.
        return solve_root_bracketed(
            |h| h - fixed_point_map(params, h),
            1e-8,
            upper,
            1e-14,
        );
    }
    let mut h = params.b;
    for _ in 0..200 {
        let next = fixed_point_map(params, h);
        if (next - h).abs() <= 1e-14 * (1.0 + h.abs()) {
            let residual = next - fixed_point_map(params, next);
            if residual.abs() <= 1e-12 {
                return Ok(next);
            }
            break;
        }
        // Damping keeps the iteration monotone when the map expands.
        h = 0.5 * (h + next);
    }
    solve_root_bracketed(|h| h - fixed_point_map(params, h), 0.0, upper, 1e-14)
}

/// Closed-form quenched pressure at the fixed point.
pub fn quenched_pressure(params: &ModelParams) -> Result<QuenchedResult> {
    if params.b < 0.0 {
        let flipped = ModelParams { b: -params.b, ..*params };
        let r = quenched_pressure(&flipped)?;
        return Ok(QuenchedResult { h_star: r.h_star, u_star: r.u_star, psi_tilde: r.psi_tilde });
    }
    let d = params.d as f64;
    let h_star = solve_h_star(params)?;
    let th = h_star.tanh();
    let u_star = params.beta.tanh() * th;
    let psi_tilde = d / 2.0 * params.beta.cosh().ln() - d / 2.0 * (u_star * th).ln_1p()
        + ((params.b.exp() * (1.0 + u_star).powi(params.d as i32))
            + ((-params.b).exp() * (1.0 - u_star).powi(params.d as i32)))
        .ln();
    Ok(QuenchedResult { h_star, u_star, psi_tilde })
}

/// Both sides of the hyperbolic identity behind the annealed = quenched proof:
/// with v = tanh(y + atanh(tanh x tanh y)),
/// (e^{-2x} v + sqrt(1 + (e^{-4x} - 1) v^2)) / (v + 1) = cosh(x-y)/cosh(x+y).
pub fn identity_e_check(x: f64, y: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("identity requires x > 0, got {x}")));
    }
    let v = (y + (x.tanh() * y.tanh()).atanh()).tanh();
    let lhs = ((-2.0 * x).exp() * v + (1.0 + ((-4.0 * x).exp() - 1.0) * v * v).sqrt()) / (v + 1.0);
    let rhs = (x - y).cosh() / (x + y).cosh();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regular::pressure;

    #[test]
    fn h_star_trivial_cases() {
        // B = 0 below critical.
        let p = ModelParams::new(0.3, 0.0, 3).unwrap();
        assert_eq!(solve_h_star(&p).unwrap(), 0.0);
        // beta = 0: map is the constant B.
        for b in [0.2, 1.0, 3.0] {
            let p = ModelParams::new(0.0, b, 4).unwrap();
            assert!((solve_h_star(&p).unwrap() - b).abs() < 1e-12);
        }
    }

    #[test]
    fn h_star_supercritical_positive_root() {
        let p = ModelParams::new(1.0, 0.0, 3).unwrap();
        let h = solve_h_star(&p).unwrap();
        assert!(h > 0.0);
        let residual = h - fixed_point_map(&p, h);
        assert!(residual.abs() <= 1e-12);
        // Verify by sign-change scan that the root is where we found it.
        let g = |x: f64| x - fixed_point_map(&p, x);
        assert!(g(h - 1e-3) < 0.0 && g(h + 1e-3) > 0.0);
    }

    #[test]
    fn h_star_residual_on_grid() {
        for beta in [0.1, 0.6, 1.4] {
            for b in [0.01, 0.5, 2.0] {
                for d in [2u32, 3, 5] {
                    let p = ModelParams::new(beta, b, d).unwrap();
                    let h = solve_h_star(&p).unwrap();
                    assert!(
                        (h - fixed_point_map(&p, h)).abs() <= 1e-12,
                        "beta={beta} b={b} d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn quenched_beta_zero() {
        for b in [0.0, 0.4, 1.2] {
            let p = ModelParams::new(0.0, b, 3).unwrap();
            let r = quenched_pressure(&p).unwrap();
            assert!((r.psi_tilde - (2.0 * b.cosh()).ln()).abs() < 1e-12, "b={b}");
            assert_eq!(r.u_star, 0.0);
        }
    }

    #[test]
    fn quenched_subcritical_zero_field() {
        for d in [3u32, 4, 5] {
            let beta = 0.9 * critical_beta(d).unwrap();
            let p = ModelParams::new(beta, 0.0, d).unwrap();
            let r = quenched_pressure(&p).unwrap();
            let expect = d as f64 / 2.0 * beta.cosh().ln() + 2f64.ln();
            assert!((r.psi_tilde - expect).abs() < 1e-12, "d={d}");
        }
    }

    #[test]
    fn quenched_d2_closed_form() {
        for beta in [0.3, 1.0] {
            for b in [0.2, 1.5] {
                let p = ModelParams::new(beta, b, 2).unwrap();
                let r = quenched_pressure(&p).unwrap();
                let expect =
                    beta + (b.cosh() + (b.sinh().powi(2) + (-4.0 * beta).exp()).sqrt()).ln();
                assert!((r.psi_tilde - expect).abs() < 1e-10, "beta={beta} b={b}");
            }
        }
    }

    #[test]
    fn evenness_in_field() {
        let plus = quenched_pressure(&ModelParams::new(0.7, 0.6, 4).unwrap()).unwrap();
        let minus = quenched_pressure(&ModelParams::new(0.7, -0.6, 4).unwrap()).unwrap();
        assert_eq!(plus.psi_tilde, minus.psi_tilde);
    }

    #[test]
    fn identity_e_values() {
        let (lhs, rhs) = identity_e_check(1.0, 0.0).unwrap();
        assert_eq!(lhs, 1.0);
        assert_eq!(rhs, 1.0);
        let (lhs, rhs) = identity_e_check(1.0, 0.3).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12);
        // y -> inf: both sides tend to e^{-2x}.
        let (lhs, rhs) = identity_e_check(0.8, 20.0).unwrap();
        let limit = (-1.6f64).exp();
        assert!((lhs - limit).abs() < 1e-8 && (rhs - limit).abs() < 1e-8);
    }

    #[test]
    fn annealed_equals_quenched_spot() {
        for (beta, b, d) in [(0.5, 0.3, 3), (1.1, 0.8, 4), (0.2, 0.05, 5)] {
            let p = ModelParams::new(beta, b, d).unwrap();
            let annealed = pressure(&p).unwrap().psi;
            let quenched = quenched_pressure(&p).unwrap().psi_tilde;
            assert!((annealed - quenched).abs() <= 1e-7, "beta={beta} b={b} d={d}");
        }
    }

    #[test]
    fn maximizer_relation() {
        for (beta, b, d) in [(0.6, 0.4, 3), (1.3, 0.1, 4)] {
            let p = ModelParams::new(beta, b, d).unwrap();
            let t_star = pressure(&p).unwrap().t_star;
            let h = solve_h_star(&p).unwrap();
            let rhs = (h + (beta.tanh() * h.tanh()).atanh()).tanh();
            assert!((2.0 * t_star - 1.0 - rhs).abs() <= 1e-9, "beta={beta} b={b} d={d}");
        }
    }
}
