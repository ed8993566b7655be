//! Exact finite-n quantities: the law of the positive-spin count under the
//! annealed measure, pressure/magnetization/susceptibility at finite n, the
//! tilted cumulant curvature, and distributional reports for the limit
//! theorems.

use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::gtable::GTable;
use crate::params::ModelParams;
use crate::regular::{critical_beta, spontaneous_magnetization};

/// Exact probability vector p_j of |sigma_+| = j under the annealed measure.
#[derive(Debug, Clone)]
pub struct SpinCountLaw {
    pub n: usize,
    pub params: ModelParams,
    /// log binom(n, j) + 2Bj + log g(beta, dj, dn), j = 0..=n.
    pub log_w: Vec<f64>,
    pub p: Vec<f64>,
}

/// Pressure, magnetization and susceptibility at finite n.
#[derive(Debug, Clone, Copy)]
pub struct FiniteThermo {
    pub psi_n: f64,
    pub m_n: f64,
    pub chi_n: f64,
}

fn log_binomial(n: usize, j: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(j as f64 + 1.0) - ln_gamma((n - j) as f64 + 1.0)
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

fn check_parity(n: usize, params: &ModelParams) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    if (params.d as usize * n) % 2 != 0 {
        return Err(Error::Domain(format!(
            "d*n = {} is odd: the half-edge pairing is undefined",
            params.d as usize * n
        )));
    }
    Ok(())
}

impl SpinCountLaw {
    /// Builds the law from a fresh g-table at m = d n.
    pub fn build(n: usize, params: &ModelParams) -> Result<Self> {
        check_parity(n, params)?;
        let table = GTable::build(params.beta, params.d as usize * n)?;
        Self::from_table(n, params, &table)
    }

    /// Builds the law reusing a g-table (which depends only on beta and d n).
    pub fn from_table(n: usize, params: &ModelParams, table: &GTable) -> Result<Self> {
        check_parity(n, params)?;
        let d = params.d as usize;
        if table.m() != d * n {
            return Err(Error::Domain(format!(
                "g-table has m = {}, expected {}",
                table.m(),
                d * n
            )));
        }
        let log_w: Vec<f64> = (0..=n)
            .map(|j| log_binomial(n, j) + 2.0 * params.b * j as f64 + table.log_g(d * j))
            .collect();
        let lse = log_sum_exp(&log_w);
        let p: Vec<f64> = log_w.iter().map(|w| (w - lse).exp()).collect();
        Ok(Self { n, params: *params, log_w, p })
    }

    /// Central moments of j under p.
    fn j_moments(&self) -> (f64, f64) {
        let mean: f64 = self.p.iter().enumerate().map(|(j, &p)| p * j as f64).sum();
        let var: f64 = self
            .p
            .iter()
            .enumerate()
            .map(|(j, &p)| p * (j as f64 - mean) * (j as f64 - mean))
            .sum();
        (mean, var)
    }
}

/// psi_n, M_n and chi_n from the exact law. No sampling.
pub fn finite_thermo(law: &SpinCountLaw) -> FiniteThermo {
    let n = law.n as f64;
    let d = law.params.d as f64;
    let psi_n = law.params.beta * d / 2.0 - law.params.b + log_sum_exp(&law.log_w) / n;
    let (mean_j, var_j) = law.j_moments();
    FiniteThermo {
        psi_n,
        m_n: (2.0 * mean_j - n) / n,
        chi_n: 4.0 * var_j / n,
    }
}

/// Exact c_n''(t) = (4/n) Var of j under the law tilted by field B + t.
pub fn cumulant_second_derivative(n: usize, params: &ModelParams, t: f64) -> Result<f64> {
    let tilted = ModelParams { b: params.b + t, ..*params };
    let law = SpinCountLaw::build(n, &tilted)?;
    let (_, var_j) = law.j_moments();
    Ok(4.0 * var_j / n as f64)
}

/// Distributional checks at one n.
#[derive(Debug, Clone, Copy)]
pub struct LimitTheoremReport {
    /// P(|S_n/n - M_n| > eps) for eps = 0.05 and 0.1.
    pub lln_tail_005: f64,
    pub lln_tail_010: f64,
    /// Kolmogorov distance between (S_n - E S_n)/sqrt(n) and N(0, chi_n).
    pub ks_distance: f64,
    /// At B = 0, beta > beta_c: P(|S_n/n -+ nu| <= n^{-1/6}) for both signs.
    pub bimodal: Option<(f64, f64)>,
}

fn gaussian_cdf(z: f64, variance: f64) -> f64 {
    0.5 * erfc(-z / (2.0 * variance).sqrt())
}

/// Tail probabilities, the exact Kolmogorov distance to the Gaussian with the
/// law's own variance, and (when applicable) the bimodal window masses.
pub fn limit_theorem_report(n: usize, params: &ModelParams) -> Result<LimitTheoremReport> {
    let law = SpinCountLaw::build(n, params)?;
    let thermo = finite_thermo(&law);
    let nf = n as f64;

    let tail = |eps: f64| -> f64 {
        law.p
            .iter()
            .enumerate()
            .filter(|(j, _)| ((2.0 * *j as f64 - nf) / nf - thermo.m_n).abs() > eps)
            .map(|(_, &p)| p)
            .sum()
    };

    // S_n = 2j - n is increasing in j, so the atoms are already sorted.
    let (mean_j, _) = law.j_moments();
    let mut ks: f64 = 0.0;
    let mut cdf = 0.0;
    for (j, &p) in law.p.iter().enumerate() {
        let z = 2.0 * (j as f64 - mean_j) / nf.sqrt();
        let phi = gaussian_cdf(z, thermo.chi_n);
        ks = ks.max((cdf - phi).abs());
        cdf += p;
        ks = ks.max((cdf - phi).abs());
    }

    let bimodal = if params.b == 0.0 && params.beta > critical_beta(params.d)? {
        let nu = spontaneous_magnetization(params.beta, params.d)?;
        let window = nf.powf(-1.0 / 6.0);
        let mass = |center: f64| -> f64 {
            law.p
                .iter()
                .enumerate()
                .filter(|(j, _)| ((2.0 * *j as f64 - nf) / nf - center).abs() <= window)
                .map(|(_, &p)| p)
                .sum()
        };
        Some((mass(nu), mass(-nu)))
    } else {
        None
    };

    Ok(LimitTheoremReport {
        lln_tail_005: tail(0.05),
        lln_tail_010: tail(0.1),
        ks_distance: ks,
        bimodal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_rejected() {
        let p = ModelParams::new(0.5, 0.0, 3).unwrap();
        assert!(SpinCountLaw::build(5, &p).is_err());
        assert!(SpinCountLaw::build(6, &p).is_ok());
    }

    #[test]
    fn single_vertex_self_loop() {
        // n = 1, d = 2: one self-loop, E Z_1 = e^beta 2 cosh B.
        for (beta, b) in [(0.7, 0.4), (1.3, -0.2)] {
            let p = ModelParams::new(beta, b, 2).unwrap();
            let law = SpinCountLaw::build(1, &p).unwrap();
            let t = finite_thermo(&law);
            let expect = beta + (2.0 * b.cosh()).ln();
            assert!((t.psi_n - expect).abs() < 1e-13, "beta={beta} b={b}");
        }
    }

    #[test]
    fn zero_field_symmetry() {
        let p = ModelParams::new(0.8, 0.0, 3).unwrap();
        let law = SpinCountLaw::build(10, &p).unwrap();
        for j in 0..=10 {
            assert!((law.p[j] - law.p[10 - j]).abs() < 1e-15);
        }
        let t = finite_thermo(&law);
        assert!(t.m_n.abs() < 1e-14);
        let total: f64 = law.p.iter().sum();
        assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn beta_zero_is_binomial() {
        let p = ModelParams::new(0.0, 0.6, 3).unwrap();
        let n = 12;
        let law = SpinCountLaw::build(n, &p).unwrap();
        let q = (2.0 * p.b).exp() / (1.0 + (2.0 * p.b).exp());
        for j in 0..=n {
            let expect = (log_binomial(n, j)
                + j as f64 * q.ln()
                + (n - j) as f64 * (1.0 - q).ln())
            .exp();
            assert!((law.p[j] - expect).abs() < 1e-13, "j={j}");
        }
        let t = finite_thermo(&law);
        assert!((t.m_n - p.b.tanh()).abs() < 1e-13);
        let sech2 = 1.0 / (p.b.cosh() * p.b.cosh());
        assert!((t.chi_n - sech2).abs() < 1e-12);
    }

    #[test]
    fn cumulant_curvature_consistency() {
        let p = ModelParams::new(0.4, 0.3, 3).unwrap();
        let law = SpinCountLaw::build(64, &p).unwrap();
        let chi_n = finite_thermo(&law).chi_n;
        let c2 = cumulant_second_derivative(64, &p, 0.0).unwrap();
        assert!((c2 - chi_n).abs() < 1e-14);
        // Binomial tilt.
        let p0 = ModelParams::new(0.0, 0.2, 2).unwrap();
        for t in [0.0, 0.1, 0.5] {
            let c2 = cumulant_second_derivative(20, &p0, t).unwrap();
            let field: f64 = p0.b + t;
            let sech2 = 1.0 / (field.cosh() * field.cosh());
            assert!((c2 - sech2).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn psi_n_derivative_matches_m_n() {
        let h = 1e-5;
        let p = ModelParams::new(0.6, 0.25, 3).unwrap();
        let m_n = finite_thermo(&SpinCountLaw::build(50, &p).unwrap()).m_n;
        let up = ModelParams { b: p.b + h, ..p };
        let dn = ModelParams { b: p.b - h, ..p };
        let psi_up = finite_thermo(&SpinCountLaw::build(50, &up).unwrap()).psi_n;
        let psi_dn = finite_thermo(&SpinCountLaw::build(50, &dn).unwrap()).psi_n;
        assert!((m_n - (psi_up - psi_dn) / (2.0 * h)).abs() < 1e-6);
    }

    #[test]
    fn lln_tail_binomial_case() {
        let p = ModelParams::new(0.0, 0.5, 2).unwrap();
        let report = limit_theorem_report(4096, &p).unwrap();
        assert!(report.lln_tail_010 < 1e-6, "tail = {}", report.lln_tail_010);
        // Hoeffding bound for independent +-1 spins: 2 exp(-n eps^2 / 2).
        assert!(report.lln_tail_010 <= 2.0 * (-4096.0 * 0.1f64 * 0.1 / 2.0).exp());
    }

    #[test]
    fn ks_distance_berry_esseen_scaling() {
        let p = ModelParams::new(0.0, 0.3, 2).unwrap();
        let d1 = limit_theorem_report(256, &p).unwrap().ks_distance;
        let d2 = limit_theorem_report(1024, &p).unwrap().ks_distance;
        let ratio = d2 / d1;
        assert!((0.3..=0.7).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn bimodal_masses_supercritical() {
        let p = ModelParams::new(1.0, 0.0, 3).unwrap();
        let report = limit_theorem_report(2000, &p).unwrap();
        let (plus, minus) = report.bimodal.unwrap();
        assert!((plus - 0.5).abs() < 0.1, "plus = {plus}");
        assert!((minus - 0.5).abs() < 0.1, "minus = {minus}");
        // Symmetric measure: the two windows carry identical mass.
        assert!((plus - minus).abs() < 1e-12);
    }

    #[test]
    fn weight_concentration_near_t_star() {
        let p = ModelParams::new(0.4, 0.3, 3).unwrap();
        let t_star = crate::regular::pressure(&p).unwrap().t_star;
        let n = 512;
        let law = SpinCountLaw::build(n, &p).unwrap();
        let argmax = law
            .log_w
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(
            (argmax as f64 / n as f64 - t_star).abs() <= 2.0 / n as f64,
            "argmax/n = {} vs t_star = {t_star}",
            argmax as f64 / n as f64
        );
    }
}
