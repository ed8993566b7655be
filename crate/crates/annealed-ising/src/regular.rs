//! Thermodynamic limits for the random d-regular graph: pressure, maximizer,
//! magnetization, susceptibility, critical temperature and spontaneous
//! magnetization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{h_first, h_second, h_value, l_value};
use crate::params::ModelParams;
use crate::root::solve_root_bracketed;

const BRACKET_EPS: f64 = 1e-12;
const ROOT_TOL: f64 = 1e-14;

/// Limit quantities at one (beta, B, d).
///
/// At B = 0 above the critical temperature the maximizer is two-fold
/// degenerate; by convention `t_star` is the branch in (1/2, 1),
/// `magnetization` carries the spontaneous value nu = 2 t_star - 1, and
/// `in_u` is false to flag that the two-sided limit of M does not exist.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ThermoResult {
    pub psi: f64,
    pub t_star: f64,
    pub magnetization: f64,
    pub chi: f64,
    pub in_u: bool,
}

/// beta_c = atanh(1/(d-1)): (1/2) log(d/(d-2)) for d >= 3, infinite for d = 2.
pub fn critical_beta(d: u32) -> Result<f64> {
    match d {
        0 | 1 => Err(Error::Domain(format!("d must be >= 2, got {d}"))),
        2 => Ok(f64::INFINITY),
        _ => Ok(0.5 * (d as f64 / (d as f64 - 2.0)).ln()),
    }
}

/// Root of L'(t) in (1/2, 1) for B > 0. L'(1/2) = 2B > 0 and L'(1^-) = -inf
/// guarantee the bracket.
fn solve_t_star(params: &ModelParams) -> Result<f64> {
    debug_assert!(params.b > 0.0);
    let p = *params;
    solve_root_bracketed(
        move |t| h_first(&p, t).unwrap() + 2.0 * p.b,
        0.5 + BRACKET_EPS,
        1.0 - BRACKET_EPS,
        ROOT_TOL,
    )
}

/// Root of H'(t) in (1/2, 1); exists exactly when beta > beta_c.
///
/// Deep in the ordered phase the root sits within e^{-2 beta d} of 1; when it
/// falls past the widest representable bracket the maximizer is 1 to machine
/// precision and the largest interior double is returned.
fn solve_t_plus(params: &ModelParams) -> Result<f64> {
    let p = *params;
    let f = move |t: f64| h_first(&p, t).unwrap();
    match solve_root_bracketed(f, 0.5 + 1e-9, 1.0 - BRACKET_EPS, ROOT_TOL) {
        Ok(t) => Ok(t),
        Err(Error::Bracket { .. }) => {
            let top = 1.0 - 0.5 * f64::EPSILON;
            match solve_root_bracketed(f, 1.0 - BRACKET_EPS, top, ROOT_TOL) {
                Ok(t) => Ok(t),
                Err(Error::Bracket { .. }) => Ok(top),
                Err(e) => Err(e),
            }
        }
        Err(e) => Err(e),
    }
}

/// Pressure and derived limit quantities of the d-regular model.
pub fn pressure(params: &ModelParams) -> Result<ThermoResult> {
    let offset = params.beta * params.d as f64 / 2.0;
    if params.b > 0.0 {
        let t_star = solve_t_star(params)?;
        let psi = offset - params.b + l_value(params, t_star)?;
        let chi = -4.0 / h_second(params, t_star)?;
        return Ok(ThermoResult {
            psi,
            t_star,
            magnetization: 2.0 * t_star - 1.0,
            chi,
            in_u: true,
        });
    }
    if params.b < 0.0 {
        let flipped = ModelParams { b: -params.b, ..*params };
        let r = pressure(&flipped)?;
        return Ok(ThermoResult {
            psi: r.psi,
            t_star: 1.0 - r.t_star,
            magnetization: -r.magnetization,
            chi: r.chi,
            in_u: r.in_u,
        });
    }
    // B = 0.
    let beta_c = critical_beta(params.d)?;
    if params.beta < beta_c {
        let psi = offset + h_value(params, 0.5)?;
        let chi = 2.0 / (2.0 + params.d as f64 * (params.c() - 1.0));
        return Ok(ThermoResult {
            psi,
            t_star: 0.5,
            magnetization: 0.0,
            chi,
            in_u: params.beta > 0.0,
        });
    }
    if params.beta == beta_c {
        // Exactly critical: the maximizer is still 1/2 but H''(1/2) = 0.
        let psi = offset + h_value(params, 0.5)?;
        return Ok(ThermoResult {
            psi,
            t_star: 0.5,
            magnetization: 0.0,
            chi: f64::INFINITY,
            in_u: false,
        });
    }
    let t_plus = solve_t_plus(params)?;
    let psi = offset + h_value(params, t_plus)?;
    let chi = -4.0 / h_second(params, t_plus)?;
    Ok(ThermoResult {
        psi,
        t_star: t_plus,
        magnetization: 2.0 * t_plus - 1.0,
        chi,
        in_u: false,
    })
}

/// Spontaneous magnetization nu(beta) = 2 t_+ - 1, zero at or below beta_c.
pub fn spontaneous_magnetization(beta: f64, d: u32) -> Result<f64> {
    let beta_c = critical_beta(d)?;
    if beta <= beta_c {
        return Ok(0.0);
    }
    let params = ModelParams::new(beta, 0.0, d)?;
    Ok(2.0 * solve_t_plus(&params)? - 1.0)
}

/// One row of a phase-diagram sweep; errors stay attached to their point.
#[derive(Debug, Clone)]
pub struct PhaseRow {
    pub beta: f64,
    pub b: f64,
    pub d: u32,
    pub result: Result<ThermoResult>,
}

/// Evaluates `pressure` on the product of the two grids, in input order.
pub fn phase_diagram(d: u32, beta_grid: &[f64], b_grid: &[f64]) -> Vec<PhaseRow> {
    let mut rows = Vec::with_capacity(beta_grid.len() * b_grid.len());
    for &beta in beta_grid {
        for &b in b_grid {
            let result = ModelParams::new(beta, b, d).and_then(|p| pressure(&p));
            rows.push(PhaseRow { beta, b, d, result });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::l_profile;

    #[test]
    fn critical_beta_values() {
        assert!(critical_beta(1).is_err());
        assert_eq!(critical_beta(2).unwrap(), f64::INFINITY);
        assert!((critical_beta(3).unwrap() - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert!((critical_beta(10).unwrap() - (1.0f64 / 9.0).atanh()).abs() < 1e-15);
    }

    #[test]
    fn beta_zero_closures() {
        for b in [-1.0, -0.3, 0.0, 0.3, 1.5] {
            for d in [2, 3, 5] {
                let p = ModelParams::new(0.0, b, d).unwrap();
                let r = pressure(&p).unwrap();
                assert!((r.psi - (2.0 * b.cosh()).ln()).abs() < 1e-12, "psi b={b} d={d}");
                assert!((r.magnetization - b.tanh()).abs() < 1e-10, "M b={b} d={d}");
                let sech2 = 1.0 / (b.cosh() * b.cosh());
                assert!((r.chi - sech2).abs() < 1e-9, "chi b={b} d={d}");
            }
        }
    }

    #[test]
    fn high_temperature_zero_field() {
        for d in [2u32, 3, 4, 5] {
            let bc = critical_beta(d).unwrap();
            let beta = 0.9 * bc.min(2.0);
            let p = ModelParams::new(beta, 0.0, d).unwrap();
            let r = pressure(&p).unwrap();
            let expect = 2f64.ln() + d as f64 / 2.0 * beta.cosh().ln();
            assert!((r.psi - expect).abs() < 1e-10, "d={d}");
            assert_eq!(r.magnetization, 0.0);
        }
    }

    #[test]
    fn d2_closed_form() {
        for beta in [0.2, 0.8, 1.5] {
            for b in [0.1, 0.7, 2.0] {
                let p = ModelParams::new(beta, b, 2).unwrap();
                let r = pressure(&p).unwrap();
                let expect =
                    beta + (b.cosh() + (b.sinh().powi(2) + (-4.0 * beta).exp()).sqrt()).ln();
                assert!((r.psi - expect).abs() < 1e-10, "beta={beta} b={b}: {} vs {expect}", r.psi);
            }
        }
    }

    #[test]
    fn t_star_residual_and_uniqueness_scan() {
        let p = ModelParams::new(1.0, 0.1, 3).unwrap();
        let t = solve_t_star(&p).unwrap();
        let (_, l1, _) = l_profile(&p, t).unwrap();
        assert!(l1.abs() <= 1e-10);
        // Exactly one sign change of L' on (1/2, 1 - eps).
        let mut changes = 0;
        let mut prev = 2.0 * p.b;
        for i in 1..10_000 {
            let x = 0.5 + (0.5 - 1e-6) * i as f64 / 10_000.0;
            let v = l_profile(&p, x).unwrap().1;
            if v.signum() != prev.signum() {
                changes += 1;
            }
            prev = v;
        }
        assert_eq!(changes, 1);
    }

    #[test]
    fn symmetry_in_field() {
        let p_plus = ModelParams::new(0.7, 0.4, 4).unwrap();
        let p_minus = ModelParams::new(0.7, -0.4, 4).unwrap();
        let rp = pressure(&p_plus).unwrap();
        let rm = pressure(&p_minus).unwrap();
        assert_eq!(rp.psi, rm.psi);
        assert_eq!(rp.magnetization, -rm.magnetization);
        assert_eq!(rp.chi, rm.chi);
    }

    #[test]
    fn pressure_derivatives_match_m_and_chi() {
        let h = 1e-5;
        for (beta, b, d) in [(0.4, 0.3, 3), (1.2, 0.8, 4), (0.3, 0.05, 2)] {
            let r = pressure(&ModelParams::new(beta, b, d).unwrap()).unwrap();
            let pp = pressure(&ModelParams::new(beta, b + h, d).unwrap()).unwrap().psi;
            let pm = pressure(&ModelParams::new(beta, b - h, d).unwrap()).unwrap().psi;
            let m_fd = (pp - pm) / (2.0 * h);
            assert!((r.magnetization - m_fd).abs() < 1e-6, "M fd at beta={beta} b={b} d={d}");
            let chi_fd = (pp - 2.0 * r.psi + pm) / (h * h);
            assert!((r.chi - chi_fd).abs() < 1e-4, "chi fd at beta={beta} b={b} d={d}");
        }
    }

    #[test]
    fn t_star_increasing_in_field() {
        let mut prev = 0.5;
        for i in 1..=30 {
            let b = 0.05 * i as f64;
            let r = pressure(&ModelParams::new(0.9, b, 3).unwrap()).unwrap();
            assert!(r.t_star > prev, "t_star not increasing at B={b}");
            prev = r.t_star;
        }
    }

    #[test]
    fn critical_detection_via_h_second() {
        for d in 3..=10u32 {
            let root = solve_root_bracketed(
                |beta| {
                    let p = ModelParams::new(beta, 0.0, d).unwrap();
                    h_second(&p, 0.5).unwrap()
                },
                1e-6,
                5.0,
                1e-14,
            )
            .unwrap();
            assert!((root - critical_beta(d).unwrap()).abs() <= 1e-10, "d={d}");
        }
    }

    #[test]
    fn spontaneous_magnetization_behavior() {
        let bc = critical_beta(3).unwrap();
        assert_eq!(spontaneous_magnetization(bc - 0.05, 3).unwrap(), 0.0);
        assert!(spontaneous_magnetization(bc + 0.05, 3).unwrap() > 0.0);
        assert!(spontaneous_magnetization(5.0, 3).unwrap() > 0.99);
        // Vanishes continuously at the transition (square-root onset) and is
        // nondecreasing above it.
        assert!(spontaneous_magnetization(bc + 1e-6, 3).unwrap() < 0.01);
        let mut prev = 0.0;
        for i in 1..=50 {
            let beta = bc + i as f64 / 50.0;
            let nu = spontaneous_magnetization(beta, 3).unwrap();
            assert!(nu >= prev - 1e-12, "nu not nondecreasing at beta={beta}");
            prev = nu;
        }
    }

    #[test]
    fn phase_diagram_rows() {
        let rows = phase_diagram(3, &[0.5], &[0.2]);
        assert_eq!(rows.len(), 1);
        let single = pressure(&ModelParams::new(0.5, 0.2, 3).unwrap()).unwrap();
        let row = rows[0].result.as_ref().unwrap();
        assert_eq!(row.psi, single.psi);

        let rows = phase_diagram(3, &[0.3, 0.9], &[-0.5, 0.5]);
        for pair in rows.chunks(2) {
            let a = pair[0].result.as_ref().unwrap();
            let b = pair[1].result.as_ref().unwrap();
            assert_eq!(a.psi, b.psi);
            assert_eq!(a.magnetization, -b.magnetization);
            assert!(a.chi > 0.0 || !a.in_u);
        }
    }
}
