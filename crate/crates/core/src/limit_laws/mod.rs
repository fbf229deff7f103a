//! Closed-form limit laws and covariance algebra.

mod cov;

pub use cov::{sqrt_psd, CovSpec};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{check_dim, Error, Result};
use crate::hull_geometry::orthonormal_frame;
use crate::rng::{normal_fill, rng_for};
use crate::rw_engine::{Trajectory, TrajectoryKind};

/// Standard normal CDF.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// `Pr(sup_{[0,1]} b <= x)` for standard Brownian motion: `2 Phi(x) - 1`.
pub fn sup_bm_cdf(x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return 0.0;
    }
    (libm::erf(x / std::f64::consts::SQRT_2)).clamp(0.0, 1.0)
}

/// Arcsine law `2/pi * asin(sqrt(gamma))`, clamped outside `[0, 1]`.
pub fn arcsine_cdf(gamma: f64) -> f64 {
    if gamma.is_nan() || gamma <= 0.0 {
        return 0.0;
    }
    if gamma >= 1.0 {
        return 1.0;
    }
    std::f64::consts::FRAC_2_PI * gamma.sqrt().asin()
}

/// Covariance kernel of the centre-of-mass limit process.
#[derive(Debug, Clone, PartialEq)]
pub struct ComKernel {
    base: CovSpec,
}

impl ComKernel {
    pub fn new(base: CovSpec) -> Self {
        ComKernel { base }
    }

    pub fn base(&self) -> &CovSpec {
        &self.base
    }

    /// Scalar factor `k(t1, t2)` so that `K(t1, t2) = k(t1, t2) * Sigma`.
    pub fn scalar(t1: f64, t2: f64) -> Result<f64> {
        for t in [t1, t2] {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::arg(format!("kernel time {t} outside [0, 1]")));
            }
        }
        let (s, t) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        if t == 0.0 {
            return Ok(0.0);
        }
        if s == 0.0 {
            // Boundary row of the case table: K(0, t) = t Sigma / 3.
            return Ok(t / 3.0);
        }
        Ok(s * (3.0 * t - s) / (6.0 * t))
    }

    pub fn eval(&self, t1: f64, t2: f64) -> Result<DMatrix<f64>> {
        Ok(self.base.matrix() * Self::scalar(t1, t2)?)
    }
}

pub fn com_kernel_eval(k: &ComKernel, t1: f64, t2: f64) -> Result<DMatrix<f64>> {
    k.eval(t1, t2)
}

/// Scalar Gram matrix `[k(t_i, t_j)]` on a grid.
pub fn com_gram(grid: &[f64]) -> Result<DMatrix<f64>> {
    let m = grid.len();
    let mut g = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            let v = ComKernel::scalar(grid[i], grid[j])?;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

fn cholesky_with_jitter(gram: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let mut jitter = 1e-10;
    loop {
        let mut m = gram.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += jitter;
        }
        if let Some(ch) = m.cholesky() {
            return Ok(ch.unpack());
        }
        if jitter >= 1e-6 {
            return Err(Error::NotPositiveDefinite(jitter));
        }
        jitter *= 10.0;
    }
}

/// Samples the centre-of-mass Gaussian process on `grid` (strictly
/// increasing times in `(0, 1]`).
///
/// The Gram matrix factorizes as `k ⊗ Sigma`, so the sample is
/// `(L_k ⊗ Sigma^{1/2}) z` with `L_k` the jittered Cholesky factor of the
/// scalar kernel matrix. The returned trajectory is piecewise linear with
/// the value 0 prepended at time 0.
pub fn sample_com_gp(k: &ComKernel, grid: &[f64], seed: u64) -> Result<Trajectory> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if grid[0] <= 0.0 || *grid.last().unwrap() > 1.0 {
        return Err(Error::InvalidGrid("grid must lie in (0, 1]".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    let d = k.base.dim();
    let m = grid.len();
    let lk = cholesky_with_jitter(&com_gram(grid)?)?;
    let mut rng = rng_for(seed, 0);
    let mut z = vec![0.0; m * d];
    normal_fill(&mut rng, &mut z);
    let mut times = Vec::with_capacity(m + 1);
    let mut values = vec![0.0; (m + 1) * d];
    times.push(0.0);
    times.extend_from_slice(grid);
    let mut mixed = vec![0.0; d];
    for i in 0..m {
        mixed.iter_mut().for_each(|x| *x = 0.0);
        for j in 0..=i {
            let l = lk[(i, j)];
            if l != 0.0 {
                for c in 0..d {
                    mixed[c] += l * z[j * d + c];
                }
            }
        }
        k.base.apply_root(&mixed, &mut values[(i + 1) * d..(i + 2) * d]);
    }
    if grid[m - 1] < 1.0 {
        // Hold the last value so the trajectory covers [0, 1].
        times.push(1.0);
        let last = values[m * d..(m + 1) * d].to_vec();
        values.extend_from_slice(&last);
    }
    Trajectory::new(TrajectoryKind::Linear, d, times, values)
}

/// Covariance of the increments projected orthogonally to the drift.
#[derive(Debug, Clone, PartialEq)]
pub struct MuPerp {
    /// `(d-1) x (d-1)` perpendicular block.
    pub perp: CovSpec,
    /// `d x d` extended form: 1 in the (1,1) entry, the block below-right.
    pub extended: CovSpec,
}

/// Rotates `Sigma` into the drift frame of `mu` and extracts the block
/// orthogonal to `mu`.
pub fn sigma_mu_perp(sigma: &CovSpec, mu: &[f64]) -> Result<MuPerp> {
    let d = sigma.dim();
    check_dim(d, mu.len())?;
    if d < 2 {
        return Err(Error::arg("perpendicular covariance needs d >= 2"));
    }
    let frame = orthonormal_frame(mu)?;
    let u = DMatrix::from_fn(d, d, |i, j| frame[i][j]);
    let rotated = &u * sigma.matrix() * u.transpose();
    let block = DMatrix::from_fn(d - 1, d - 1, |i, j| rotated[(i + 1, j + 1)]);
    let block = (&block + block.transpose()) * 0.5;
    let mut ext = DMatrix::zeros(d, d);
    ext[(0, 0)] = 1.0;
    for i in 1..d {
        for j in 1..d {
            ext[(i, j)] = block[(i - 1, j - 1)];
        }
    }
    Ok(MuPerp {
        perp: sqrt_psd(&block)?,
        extended: sqrt_psd(&ext)?,
    })
}

/// Sorted eigenvalues of a symmetric matrix.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Functionals with a deterministic first-order limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LlnFunctional {
    /// `M(X'_n) -> mu^+` (d = 1).
    Max,
    /// `D_n / n -> |mu|`.
    Diameter,
    /// `L_n / n -> 2 |mu|` (d = 2).
    Perimeter,
    /// `G_{floor(nt)} / n -> mu t / 2`.
    Com { time: f64 },
}

/// The deterministic limit of `functional` under drift `mu`.
pub fn lln_reference(functional: LlnFunctional, mu: &[f64]) -> Result<Vec<f64>> {
    let norm = mu.iter().map(|x| x * x).sum::<f64>().sqrt();
    match functional {
        LlnFunctional::Max => {
            check_dim(1, mu.len())?;
            Ok(vec![mu[0].max(0.0)])
        }
        LlnFunctional::Diameter => Ok(vec![norm]),
        LlnFunctional::Perimeter => {
            check_dim(2, mu.len())?;
            Ok(vec![2.0 * norm])
        }
        LlnFunctional::Com { time } => {
            if !(0.0..=1.0).contains(&time) {
                return Err(Error::arg(format!("time {time} outside [0, 1]")));
            }
            Ok(mu.iter().map(|m| m * time / 2.0).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sup_bm_at_one() {
        assert!((sup_bm_cdf(1.0) - 0.682_689_492_137_085_9).abs() < 1e-12);
        assert_eq!(sup_bm_cdf(0.0), 0.0);
        assert_eq!(sup_bm_cdf(-1.0), 0.0);
        assert!((sup_bm_cdf(40.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn arcsine_values() {
        assert_eq!(arcsine_cdf(0.0), 0.0);
        assert_eq!(arcsine_cdf(1.0), 1.0);
        assert!((arcsine_cdf(0.5) - 0.5).abs() < 1e-15);
        assert!((arcsine_cdf(0.25) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_values() {
        assert!((ComKernel::scalar(0.5, 1.0).unwrap() - 5.0 / 24.0).abs() < 1e-15);
        assert_eq!(ComKernel::scalar(0.0, 0.0).unwrap(), 0.0);
        assert!((ComKernel::scalar(0.0, 0.6).unwrap() - 0.2).abs() < 1e-15);
        for t in [0.1, 0.4, 1.0] {
            assert!((ComKernel::scalar(t, t).unwrap() - t / 3.0).abs() < 1e-15);
        }
        assert!(ComKernel::scalar(1.2, 0.5).is_err());
    }

    #[test]
    fn kernel_is_symmetric() {
        let k = ComKernel::new(CovSpec::identity(1));
        for (a, b) in [(0.1, 0.7), (0.5, 1.0), (0.0, 0.3)] {
            assert_eq!(k.eval(a, b).unwrap(), k.eval(b, a).unwrap());
        }
    }

    #[test]
    fn gram_is_psd() {
        let g = com_gram(&[0.25, 0.5, 1.0]).unwrap();
        assert!(sym_eigenvalues(&g)[0] >= -1e-10);
    }

    #[test]
    fn zero_cov_com_path() {
        let k = ComKernel::new(CovSpec::zeros(2));
        let p = sample_com_gp(&k, &[0.25, 0.5, 1.0], 3).unwrap();
        assert!(p.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn perp_block_aligned_axes() {
        let s = CovSpec::diagonal(&[2.0, 3.0, 5.0]);
        let p = sigma_mu_perp(&s, &[1.0, 0.0, 0.0]).unwrap();
        let m = p.perp.matrix();
        assert!((m[(0, 0)] - 3.0).abs() < 1e-12);
        assert!((m[(1, 1)] - 5.0).abs() < 1e-12);
        assert!(m[(0, 1)].abs() < 1e-12);
        assert_eq!(p.extended.matrix()[(0, 0)], 1.0);
        assert!(sigma_mu_perp(&s, &[0.0, 0.0, 0.0]).is_err());
        assert!(sigma_mu_perp(&CovSpec::identity(1), &[1.0]).is_err());
    }

    #[test]
    fn lln_references() {
        assert_eq!(lln_reference(LlnFunctional::Max, &[-0.3]).unwrap(), vec![0.0]);
        assert_eq!(lln_reference(LlnFunctional::Perimeter, &[1.0, 0.0]).unwrap(), vec![2.0]);
        assert_eq!(
            lln_reference(LlnFunctional::Com { time: 1.0 }, &[1.0, -2.0]).unwrap(),
            vec![0.5, -1.0]
        );
    }
}
