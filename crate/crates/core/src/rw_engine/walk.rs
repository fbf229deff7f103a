use crate::error::{Error, Result};
use crate::rng::rng_for;

use super::IncrementLaw;

/// Increments `xi_1..xi_n` and prefix sums `S_0..S_n` of a walk in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Walk {
    dim: usize,
    increments: Vec<f64>,
    sums: Vec<f64>,
}

impl Walk {
    /// Builds a walk from flat row-major increments.
    pub fn from_increments(dim: usize, increments: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::arg("dimension must be positive"));
        }
        if increments.is_empty() || increments.len() % dim != 0 {
            return Err(Error::arg("increments must hold n >= 1 vectors of length dim"));
        }
        let n = increments.len() / dim;
        let mut sums = vec![0.0; (n + 1) * dim];
        for k in 1..=n {
            for c in 0..dim {
                sums[k * dim + c] = sums[(k - 1) * dim + c] + increments[(k - 1) * dim + c];
            }
        }
        Ok(Walk { dim, increments, sums })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of steps `n`.
    pub fn len(&self) -> usize {
        self.increments.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    /// `xi_i` for `1 <= i <= n`.
    pub fn increment(&self, i: usize) -> &[f64] {
        assert!(i >= 1 && i <= self.len(), "increment index {i} out of range");
        &self.increments[(i - 1) * self.dim..i * self.dim]
    }

    /// `S_k` for `0 <= k <= n`.
    pub fn sum(&self, k: usize) -> &[f64] {
        &self.sums[k * self.dim..(k + 1) * self.dim]
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    /// Flat `S_0..S_n`.
    pub fn sums(&self) -> &[f64] {
        &self.sums
    }
}

/// Draws `n` increments from `law` using the stream for `seed`.
pub fn sample_walk(law: &IncrementLaw, n: usize, seed: u64) -> Result<Walk> {
    if n == 0 {
        return Err(Error::arg("walk length n must be positive"));
    }
    let d = law.dim();
    let mut rng = rng_for(seed, 0);
    let mut inc = vec![0.0; n * d];
    law.fill(&mut rng, &mut inc);
    Walk::from_increments(d, inc)
}

/// Centre of mass `G_0..G_n` with `G_k = (S_1 + ... + S_k) / k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComSeries {
    dim: usize,
    values: Vec<f64>,
}

impl ComSeries {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `G_k` for `0 <= k <= n`.
    pub fn get(&self, k: usize) -> &[f64] {
        &self.values[k * self.dim..(k + 1) * self.dim]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub fn centre_of_mass(walk: &Walk) -> ComSeries {
    let d = walk.dim();
    let n = walk.len();
    let mut values = vec![0.0; (n + 1) * d];
    let mut acc = vec![0.0; d];
    for k in 1..=n {
        for c in 0..d {
            acc[c] += walk.sum(k)[c];
            values[k * d + c] = acc[c] / k as f64;
        }
    }
    ComSeries { dim: d, values }
}

/// `G_k` through the weighted increment form `sum_i ((k - i + 1) / k) xi_i`.
pub fn com_weighted(walk: &Walk, k: usize) -> Vec<f64> {
    let d = walk.dim();
    let mut out = vec![0.0; d];
    if k == 0 {
        return out;
    }
    for i in 1..=k {
        let w = (k - i + 1) as f64 / k as f64;
        for (o, x) in out.iter_mut().zip(walk.increment(i)) {
            *o += w * x;
        }
    }
    out
}

/// `sup_t |Delta_n(t)|` for the remainder between the centre of mass and
/// the integral of the step trajectory.
///
/// On `[k/n, (k+1)/n)` the remainder is an affine combination of `S_k / k`
/// and `G_k / (k + 1)` in the variable `1/(nt)`, so its norm is maximized at
/// an endpoint, giving `max_k max(|S_k| / k, |G_k| / (k + 1))`.
pub fn com_remainder_sup(walk: &Walk, com: &ComSeries) -> f64 {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut best = 0.0f64;
    for k in 1..=walk.len() {
        best = best.max(norm(walk.sum(k)) / k as f64);
        if k < walk.len() {
            best = best.max(norm(com.get(k)) / (k + 1) as f64);
        }
    }
    best
}

/// `Delta_n(t)` evaluated directly, for `t` in `(0, 1]`.
pub fn com_remainder_at(walk: &Walk, com: &ComSeries, t: f64) -> Vec<f64> {
    let n = walk.len() as f64;
    let nt = n * t;
    let k = (nt.floor() as usize).min(walk.len());
    let frac = nt - k as f64;
    let a = (frac - 1.0) / nt;
    let b = frac / nt;
    walk.sum(k)
        .iter()
        .zip(com.get(k))
        .map(|(s, g)| a * s - b * g)
        .collect()
}
