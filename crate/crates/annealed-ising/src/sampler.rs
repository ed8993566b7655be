//! Independent oracles: uniform perfect matchings of half-edges, exhaustive
//! enumeration of the cut-size law X(k, m) for tiny m, Monte Carlo estimates
//! of g and of the annealed partition function, and configuration-model
//! multigraph sampling. All randomness flows from explicit 64-bit seeds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Perfect matching of half-edges 0..m-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub m: usize,
    /// m/2 pairs; every index appears exactly once.
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Number of pairs with exactly one endpoint among half-edges 0..k-1.
    pub fn cut_size(&self, k: usize) -> usize {
        self.pairs.iter().filter(|&&(a, b)| (a < k) != (b < k)).count()
    }
}

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform perfect matching by sequential pairing: repeatedly match the
/// smallest free half-edge to a uniform free partner.
pub fn sample_matching(m: usize, seed: u64) -> Result<Matching> {
    let mut rng = seeded(seed);
    sample_matching_with(m, &mut rng)
}

fn sample_matching_with(m: usize, rng: &mut ChaCha8Rng) -> Result<Matching> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::Domain(format!("m must be even and >= 2, got {m}")));
    }
    let mut free: Vec<usize> = (0..m).collect();
    let mut pairs = Vec::with_capacity(m / 2);
    while free.len() > 1 {
        let a = free[0];
        let j = rng.gen_range(1..free.len());
        let b = free[j];
        free.swap_remove(j);
        free.swap_remove(0);
        pairs.push((a, b));
    }
    Ok(Matching { m, pairs })
}

/// Exact pmf of X(k, m) over cut sizes 0..=min(k, m-k), by exhaustive
/// enumeration of all (m-1)!! matchings. Capped at m = 12 (10395 matchings).
pub fn enumerate_x_pmf(k: usize, m: usize) -> Result<Vec<f64>> {
    if m % 2 != 0 || m > 12 {
        return Err(Error::Domain(format!("m must be even and <= 12, got {m}")));
    }
    if k > m {
        return Err(Error::Domain(format!("k = {k} exceeds m = {m}")));
    }
    let mut counts = vec![0u64; k.min(m - k) + 1];
    let mut free: Vec<usize> = (0..m).collect();
    enumerate_rec(k, &mut free, 0, &mut counts);
    let total: u64 = counts.iter().sum();
    Ok(counts.iter().map(|&c| c as f64 / total as f64).collect())
}

fn enumerate_rec(k: usize, free: &mut Vec<usize>, cut: usize, counts: &mut [u64]) {
    if free.is_empty() {
        counts[cut] += 1;
        return;
    }
    let a = free[0];
    for j in 1..free.len() {
        let b = free[j];
        let crossing = ((a < k) != (b < k)) as usize;
        let mut rest: Vec<usize> =
            free.iter().copied().filter(|&x| x != a && x != b).collect();
        enumerate_rec(k, &mut rest, cut + crossing, counts);
    }
}

/// Sample mean and standard error of exp(-2 beta X(k, m)).
pub fn mc_estimate_g(
    beta: f64,
    k: usize,
    m: usize,
    n_samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if n_samples < 1000 {
        return Err(Error::Domain(format!("need >= 1000 samples, got {n_samples}")));
    }
    let mut rng = seeded(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_samples {
        let x = sample_matching_with(m, &mut rng)?.cut_size(k) as f64;
        let v = (-2.0 * beta * x).exp();
        sum += v;
        sum_sq += v * v;
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) / (n - 1.0);
    Ok((mean, var.sqrt()))
}

/// Monte Carlo estimate of (1/n) log E[Z_n] for the d-regular configuration
/// model: per sampled multigraph, Z is summed exactly over all 2^n spin
/// assignments using H = (B - beta d/2) n + 2 beta e(+,-) - 2B|+|, with
/// self-loops never disagreeing and multi-edges counted with multiplicity.
/// Returns the estimate and its delta-method standard error.
pub fn mc_estimate_ez(
    n: usize,
    params: &ModelParams,
    n_samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if n == 0 || n > 16 {
        return Err(Error::Domain(format!("n must be in 1..=16, got {n}")));
    }
    let d = params.d as usize;
    let m = d * n;
    if m % 2 != 0 {
        return Err(Error::Domain(format!("d*n = {m} must be even")));
    }
    if n_samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let mut rng = seeded(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_samples {
        let matching = sample_matching_with(m, &mut rng)?;
        // Half-edge h belongs to vertex h / d.
        let edges: Vec<(usize, usize)> =
            matching.pairs.iter().map(|&(a, b)| (a / d, b / d)).collect();
        let mut z = 0.0;
        for mask in 0u32..1 << n {
            let plus = mask.count_ones() as f64;
            let disagree = edges
                .iter()
                .filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1))
                .count() as f64;
            let h = (params.b - params.beta * d as f64 / 2.0) * n as f64
                + 2.0 * params.beta * disagree
                - 2.0 * params.b * plus;
            z += (-h).exp();
        }
        sum += z;
        sum_sq += z * z;
    }
    let ns = n_samples as f64;
    let mean = sum / ns;
    let var = (sum_sq / ns - mean * mean).max(0.0) / (ns - 1.0).max(1.0);
    let estimate = mean.ln() / n as f64;
    let std_error = var.sqrt() / (mean * n as f64);
    Ok((estimate, std_error))
}

/// Configuration-model multigraph for a prescribed degree sequence, as a
/// vertex-pair edge list (self-loops as (v, v)).
pub fn sample_degree_graph(degrees: &[usize], seed: u64) -> Result<Vec<(usize, usize)>> {
    let m: usize = degrees.iter().sum();
    if m % 2 != 0 {
        return Err(Error::Domain(format!(
            "degree sum {m} is odd; no pairing exists"
        )));
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut owner = Vec::with_capacity(m);
    for (v, &deg) in degrees.iter().enumerate() {
        owner.extend(std::iter::repeat(v).take(deg));
    }
    let mut rng = seeded(seed);
    let matching = sample_matching_with(m, &mut rng)?;
    Ok(matching.pairs.iter().map(|&(a, b)| (owner[a], owner[b])).collect())
}

/// Edges of a multigraph with exactly one endpoint in the subset.
pub fn cut_size_subset(edges: &[(usize, usize)], in_subset: &[bool]) -> usize {
    edges.iter().filter(|&&(u, v)| in_subset[u] != in_subset[v]).count()
}
