//! Annealed pressure for configuration models with i.i.d. degrees: cumulant
//! function of the degree law, its convex conjugate, the two-block variational
//! functional G, and the outer pressure maximization.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::math::{entropy, free_energy};
use crate::root::solve_root_bracketed;

/// Largest tilt the Poisson truncation is sized for.
const MAX_TILT: f64 = 10.0;
const POISSON_TRUNCATION_CAP: u32 = 200;

#[derive(Debug, Clone, PartialEq)]
pub enum DegreeKind {
    Deterministic(u32),
    FinitePmf,
    Poisson { gamma: f64, truncation: u32 },
}

/// Finite-support degree distribution with log-domain cumulant evaluation.
#[derive(Debug, Clone)]
pub struct DegreeDistribution {
    /// (degree, probability), degrees strictly increasing.
    support: Vec<(u32, f64)>,
    kind: DegreeKind,
}

impl DegreeDistribution {
    pub fn deterministic(d: u32) -> Self {
        Self { support: vec![(d, 1.0)], kind: DegreeKind::Deterministic(d) }
    }

    pub fn from_pmf(mut entries: Vec<(u32, f64)>) -> Result<Self> {
        entries.retain(|&(_, p)| p != 0.0);
        entries.sort_by_key(|&(v, _)| v);
        if entries.is_empty() {
            return Err(Error::Domain("empty pmf".into()));
        }
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("duplicate degree in pmf".into()));
        }
        if entries.iter().any(|&(_, p)| !(p > 0.0) || p > 1.0) {
            return Err(Error::Domain("pmf probabilities must lie in (0, 1]".into()));
        }
        let total: f64 = entries.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("pmf sums to {total}, expected 1")));
        }
        Ok(Self { support: entries, kind: DegreeKind::FinitePmf })
    }

    /// Truncated Poisson(gamma). The cutoff is the smallest K whose
    /// e^{10 k}-weighted tail drops below 1e-14, capped at 200; the cap is
    /// what binds for any gamma of practical size, so callers should keep
    /// their tilts well below the point where mass escapes past the cutoff.
    pub fn poisson(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(Error::Domain(format!("gamma must be > 0, got {gamma}")));
        }
        let mut support = Vec::new();
        let mut log_p = -gamma; // log pmf(0)
        let mut k = 0u32;
        loop {
            if log_p > (-745.0) {
                support.push((k, log_p.exp()));
            }
            // Weighted tail test: the next term already dominates the tail
            // when the summand is decreasing.
            let next_log = log_p + gamma.ln() - ((k + 1) as f64).ln();
            let weighted_next = next_log + MAX_TILT * (k + 1) as f64;
            if (k >= POISSON_TRUNCATION_CAP) || (weighted_next < (1e-14f64).ln() && k as f64 > gamma)
            {
                break;
            }
            log_p = next_log;
            k += 1;
        }
        Ok(Self { support, kind: DegreeKind::Poisson { gamma, truncation: k } })
    }

    /// Binomial(n0, gamma/n0), truncated where the pmf falls below 1e-18.
    pub fn binomial(n0: u32, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) || gamma >= n0 as f64 {
            return Err(Error::Domain(format!("need 0 < gamma < n0, got gamma={gamma} n0={n0}")));
        }
        let q = gamma / n0 as f64;
        let mut support = Vec::new();
        let mut log_p = n0 as f64 * (1.0 - q).ln(); // log pmf(0)
        for k in 0..=n0 {
            if log_p.exp() > 1e-18 {
                support.push((k, log_p.exp()));
            } else if k as f64 > gamma {
                break;
            }
            log_p += ((n0 - k) as f64 / (k + 1) as f64).ln() + (q / (1.0 - q)).ln();
        }
        Self::from_pmf(support)
    }

    pub fn kind(&self) -> &DegreeKind {
        &self.kind
    }

    pub fn support(&self) -> &[(u32, f64)] {
        &self.support
    }

    pub fn mean(&self) -> f64 {
        self.support.iter().map(|&(v, p)| v as f64 * p).sum()
    }

    pub fn min_degree(&self) -> f64 {
        self.support.first().unwrap().0 as f64
    }

    pub fn max_degree(&self) -> f64 {
        self.support.last().unwrap().0 as f64
    }
}

impl fmt::Display for DegreeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DegreeKind::Deterministic(d) => write!(f, "deterministic:{d}"),
            DegreeKind::Poisson { gamma, truncation } => {
                write!(f, "poisson:{gamma} (truncated at {truncation})")
            }
            DegreeKind::FinitePmf => {
                write!(f, "pmf:")?;
                for (i, (v, p)) in self.support.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}:{p}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for DegreeDistribution {
    type Err = Error;

    /// `deterministic:d`, `pmf:v1:p1,v2:p2,...`, `poisson:gamma`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Domain(format!("cannot parse degree distribution '{s}': {m}"));
        let (tag, rest) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        match tag {
            "deterministic" => {
                let d: u32 = rest.parse().map_err(|_| bad("bad degree"))?;
                Ok(Self::deterministic(d))
            }
            "poisson" => {
                let gamma: f64 = rest.parse().map_err(|_| bad("bad gamma"))?;
                Self::poisson(gamma)
            }
            "pmf" => {
                let entries = rest
                    .split(',')
                    .map(|pair| {
                        let (v, p) = pair.split_once(':').ok_or_else(|| bad("bad pmf pair"))?;
                        Ok((
                            v.parse().map_err(|_| bad("bad pmf degree"))?,
                            p.parse().map_err(|_| bad("bad pmf probability"))?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::from_pmf(entries)
            }
            _ => Err(bad("unknown tag")),
        }
    }
}

/// Cumulant function Lambda(s) = log E[e^{sD}], via log-sum-exp.
pub fn lambda_fn(dist: &DegreeDistribution, s: f64) -> f64 {
    let max = dist
        .support
        .iter()
        .map(|&(v, p)| p.ln() + s * v as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    max + dist
        .support
        .iter()
        .map(|&(v, p)| (p.ln() + s * v as f64 - max).exp())
        .sum::<f64>()
        .ln()
}

/// Lambda'(s), the mean of the exponentially tilted degree law.
fn lambda_prime(dist: &DegreeDistribution, s: f64) -> f64 {
    let max = dist
        .support
        .iter()
        .map(|&(v, p)| p.ln() + s * v as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut num = 0.0;
    let mut den = 0.0;
    for &(v, p) in &dist.support {
        let w = (p.ln() + s * v as f64 - max).exp();
        num += v as f64 * w;
        den += w;
    }
    num / den
}

/// Convex conjugate Lambda*(x) = sup_s { xs - Lambda(s) }.
///
/// Infinite outside the support hull; -log p at lattice endpoint atoms;
/// solved through the root of Lambda'(s) = x in the interior.
pub fn lambda_star(dist: &DegreeDistribution, x: f64) -> f64 {
    let lo = dist.min_degree();
    let hi = dist.max_degree();
    if x < lo || x > hi {
        return f64::INFINITY;
    }
    if lo == hi {
        return 0.0;
    }
    if x == lo {
        return -dist.support.first().unwrap().1.ln();
    }
    if x == hi {
        return -dist.support.last().unwrap().1.ln();
    }
    // Lambda' is strictly increasing with range (lo, hi); expand a bracket.
    let g = |s: f64| lambda_prime(dist, s) - x;
    let mut a = -1.0;
    let mut b = 1.0;
    for _ in 0..12 {
        if g(a) < 0.0 {
            break;
        }
        a *= 2.0;
    }
    for _ in 0..12 {
        if g(b) > 0.0 {
            break;
        }
        b *= 2.0;
    }
    match solve_root_bracketed(g, a, b, 1e-13) {
        Ok(s) => x * s - lambda_fn(dist, s),
        // x numerically indistinguishable from an endpoint.
        Err(_) => {
            if x - lo < hi - x {
                -dist.support.first().unwrap().1.ln()
            } else {
                -dist.support.last().unwrap().1.ln()
            }
        }
    }
}

/// Golden-section maximization of a unimodal-near-the-peak function.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}

const G_GRID: usize = 128;

/// Objective of the two-block supremum at per-block rates u = a/t and
/// w = (b-a)/(1-t), with the conjugate values supplied by the caller.
fn g_objective(beta: f64, t: f64, u: f64, w: f64, rate_u: f64, rate_w: f64) -> f64 {
    if !rate_u.is_finite() || !rate_w.is_finite() {
        return f64::NEG_INFINITY;
    }
    let b_tot = t * u + (1.0 - t) * w;
    let penalty = -t * rate_u - (1.0 - t) * rate_w;
    if b_tot <= 0.0 {
        return penalty;
    }
    let ratio = (t * u / b_tot).clamp(0.0, 1.0);
    b_tot * (beta / 2.0 + free_energy(beta, ratio).unwrap()) + penalty
}

/// Variational functional
/// G(beta, t) = sup_{a,b} { b(beta/2 + F(a/b)) - t L*(a/t) - (1-t) L*((b-a)/(1-t)) },
/// where L* is the degree rate function; grid search plus coordinate
/// golden-section refinement, absolute tolerance ~1e-7.
pub fn g_limit(dist: &DegreeDistribution, beta: f64, t: f64) -> Result<f64> {
    if !(beta >= 0.0) {
        return Err(Error::Domain(format!("beta must be >= 0, got {beta}")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t must lie in [0, 1], got {t}")));
    }
    if t == 0.0 || t == 1.0 {
        // Single-block degenerate case: sup_b { b beta/2 - L*(b) } = Lambda(beta/2).
        return Ok(lambda_fn(dist, beta / 2.0));
    }
    let lo = dist.min_degree();
    let hi = dist.max_degree();
    if lo == hi {
        return Ok(hi * (beta / 2.0 + free_energy(beta, t)?));
    }
    let grid: Vec<f64> = (0..=G_GRID)
        .map(|i| lo + (hi - lo) * i as f64 / G_GRID as f64)
        .collect();
    let rates: Vec<f64> = grid.iter().map(|&x| lambda_star(dist, x)).collect();

    let mut best = f64::NEG_INFINITY;
    let mut best_ij = (0usize, 0usize);
    for (i, &u) in grid.iter().enumerate() {
        for (j, &w) in grid.iter().enumerate() {
            let v = g_objective(beta, t, u, w, rates[i], rates[j]);
            if v > best {
                best = v;
                best_ij = (i, j);
            }
        }
    }

    // Local coordinate refinement one cell around the best grid node.
    let step = (hi - lo) / G_GRID as f64;
    let clamp = |x: f64| x.clamp(lo, hi);
    let mut u = grid[best_ij.0];
    let mut w = grid[best_ij.1];
    for _ in 0..3 {
        let w_fixed = w;
        let rate_w = lambda_star(dist, w_fixed);
        let (u_new, _) = golden_max(
            |x| g_objective(beta, t, x, w_fixed, lambda_star(dist, x), rate_w),
            clamp(u - step),
            clamp(u + step),
            1e-10 * (hi - lo),
        );
        u = u_new;
        let rate_u = lambda_star(dist, u);
        let (w_new, val) = golden_max(
            |x| g_objective(beta, t, u, x, rate_u, lambda_star(dist, x)),
            clamp(w - step),
            clamp(w + step),
            1e-10 * (hi - lo),
        );
        w = w_new;
        best = best.max(val);
    }
    Ok(best)
}

/// Annealed pressure of the configuration model:
/// psi = -B + max_t [ S(t) + G(beta, t) ] with the entropy-plus-field S.
pub fn cm_pressure(dist: &DegreeDistribution, beta: f64, b: f64) -> Result<f64> {
    if !(beta >= 0.0) {
        return Err(Error::Domain(format!("beta must be >= 0, got {beta}")));
    }
    let objective = |t: f64| -> Result<f64> {
        Ok(entropy(t) + 2.0 * b * t + g_limit(dist, beta, t)?)
    };
    const SEED: usize = 512;
    let mut best = f64::NEG_INFINITY;
    let mut best_t = 0.5;
    for i in 0..=SEED {
        let t = i as f64 / SEED as f64;
        let v = objective(t)?;
        if v > best {
            best = v;
            best_t = t;
        }
    }
    let step = 1.0 / SEED as f64;
    let (_, refined) = golden_max(
        |t| objective(t).unwrap(),
        (best_t - step).max(0.0),
        (best_t + step).min(1.0),
        1e-10,
    );
    Ok(-b + best.max(refined))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ModelParams;
    use crate::regular::pressure;

    #[test]
    fn lambda_basics() {
        let det = DegreeDistribution::deterministic(3);
        for s in [-2.0, 0.0, 1.5] {
            assert!((lambda_fn(&det, s) - 3.0 * s).abs() < 1e-14);
        }
        let pmf = DegreeDistribution::from_pmf(vec![(1, 0.5), (3, 0.5)]).unwrap();
        assert!(lambda_fn(&pmf, 0.0).abs() < 1e-15);
    }

    #[test]
    fn poisson_lambda_matches_analytic() {
        let gamma = 3.0;
        let dist = DegreeDistribution::poisson(gamma).unwrap();
        // The truncation cap sizes the valid tilt range; stay inside it.
        for s in [-3.0f64, -1.0, 0.0, 0.5, 1.5, 3.0] {
            let exact = gamma * (s.exp() - 1.0);
            let got = lambda_fn(&dist, s);
            assert!((got - exact).abs() < 1e-12, "s={s}: {got} vs {exact}");
        }
    }

    #[test]
    fn conjugate_basics() {
        let det = DegreeDistribution::deterministic(4);
        assert_eq!(lambda_star(&det, 4.0), 0.0);
        assert_eq!(lambda_star(&det, 3.9), f64::INFINITY);
        assert_eq!(lambda_star(&det, 4.1), f64::INFINITY);

        let pmf = DegreeDistribution::from_pmf(vec![(1, 0.25), (2, 0.5), (4, 0.25)]).unwrap();
        assert!(lambda_star(&pmf, pmf.mean()).abs() < 1e-11);
        assert!((lambda_star(&pmf, 1.0) - (-0.25f64.ln())).abs() < 1e-12);
        assert!((lambda_star(&pmf, 4.0) - (-0.25f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn poisson_conjugate_matches_analytic() {
        let gamma = 3.0;
        let dist = DegreeDistribution::poisson(gamma).unwrap();
        let mut x = 0.1 * gamma;
        while x <= 5.0 * gamma {
            let exact = x * (x / gamma).ln() - x + gamma;
            let got = lambda_star(&dist, x);
            assert!((got - exact).abs() < 1e-9, "x={x}: {got} vs {exact}");
            x += 0.3 * gamma;
        }
    }

    #[test]
    fn conjugate_is_convex() {
        let dist = DegreeDistribution::from_pmf(vec![(1, 0.3), (2, 0.4), (5, 0.3)]).unwrap();
        let pairs = [(1.2, 4.0), (1.5, 2.5), (2.0, 4.8), (1.1, 1.9)];
        for (x, y) in pairs {
            let mid = lambda_star(&dist, 0.5 * (x + y));
            let avg = 0.5 * (lambda_star(&dist, x) + lambda_star(&dist, y));
            assert!(mid <= avg + 1e-9, "x={x} y={y}");
        }
    }

    #[test]
    fn g_beta_zero_vanishes() {
        let dist = DegreeDistribution::from_pmf(vec![(2, 0.5), (3, 0.5)]).unwrap();
        for t in [0.0, 0.2, 0.5, 0.8, 1.0] {
            let g = g_limit(&dist, 0.0, t).unwrap();
            assert!(g.abs() < 1e-7, "t={t}: {g}");
        }
    }

    #[test]
    fn g_degenerate_t_is_cumulant() {
        let dist = DegreeDistribution::poisson(2.0).unwrap();
        for beta in [0.3, 1.0] {
            let expect = lambda_fn(&dist, beta / 2.0);
            assert!((g_limit(&dist, beta, 0.0).unwrap() - expect).abs() < 1e-12);
            assert!((g_limit(&dist, beta, 1.0).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn g_deterministic_matches_regular_ingredients() {
        let dist = DegreeDistribution::deterministic(3);
        for beta in [0.4, 1.1] {
            for t in [0.1, 0.5, 0.75] {
                let expect = 3.0 * (beta / 2.0 + free_energy(beta, t).unwrap());
                let got = g_limit(&dist, beta, t).unwrap();
                assert!((got - expect).abs() < 1e-7, "beta={beta} t={t}");
            }
        }
    }

    #[test]
    fn cm_pressure_beta_zero() {
        let dist = DegreeDistribution::poisson(3.0).unwrap();
        for b in [0.0, 0.4, -0.4] {
            let psi = cm_pressure(&dist, 0.0, b).unwrap();
            assert!((psi - (2.0 * b.cosh()).ln()).abs() < 1e-7, "b={b}");
        }
    }

    #[test]
    fn cm_pressure_deterministic_reduces_to_regular() {
        let dist = DegreeDistribution::deterministic(3);
        for (beta, b) in [(0.4, 0.3), (0.9, 0.0), (1.2, 1.0)] {
            let psi_cm = cm_pressure(&dist, beta, b).unwrap();
            let psi_reg = pressure(&ModelParams::new(beta, b, 3).unwrap()).unwrap().psi;
            assert!((psi_cm - psi_reg).abs() < 1e-6, "beta={beta} b={b}: {psi_cm} vs {psi_reg}");
        }
    }

    #[test]
    fn cm_pressure_even_in_field() {
        let dist = DegreeDistribution::from_pmf(vec![(2, 0.6), (4, 0.4)]).unwrap();
        let plus = cm_pressure(&dist, 0.6, 0.7).unwrap();
        let minus = cm_pressure(&dist, 0.6, -0.7).unwrap();
        assert!((plus - minus).abs() < 1e-9);
    }

    #[test]
    fn parsing_round_trip() {
        let det: DegreeDistribution = "deterministic:5".parse().unwrap();
        assert_eq!(det.kind(), &DegreeKind::Deterministic(5));
        let pmf: DegreeDistribution = "pmf:1:0.5,2:0.5".parse().unwrap();
        assert_eq!(pmf.support().len(), 2);
        let poi: DegreeDistribution = "poisson:2.5".parse().unwrap();
        assert!(matches!(poi.kind(), DegreeKind::Poisson { .. }));
        assert!("pmf:1:0.5,2:0.6".parse::<DegreeDistribution>().is_err());
        assert!("nope:1".parse::<DegreeDistribution>().is_err());
    }
}
