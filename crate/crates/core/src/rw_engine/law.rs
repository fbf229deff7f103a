use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{check_dim, Error, Result};
use crate::limit_laws::CovSpec;
use crate::rng::normal_fill;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Closed set of increment distributions with known mean and covariance.
#[derive(Debug, Clone, PartialEq)]
pub enum IncrementLaw {
    /// Independent fair signs in each coordinate.
    Rademacher { dim: usize },
    /// `mean + Sigma^{1/2} z`.
    Gaussian { mean: Vec<f64>, cov: CovSpec },
    /// `mean + U[-sqrt 3, sqrt 3]^d`, unit variance per coordinate.
    UniformCube { mean: Vec<f64> },
    /// Always equal to `mean`.
    Deterministic { mean: Vec<f64> },
    /// Uniform over the `2d` unit lattice directions.
    LatticeSimple { dim: usize },
}

impl IncrementLaw {
    pub fn rademacher(dim: usize) -> Result<Self> {
        positive_dim(dim)?;
        Ok(IncrementLaw::Rademacher { dim })
    }

    pub fn gaussian(mean: Vec<f64>, cov: CovSpec) -> Result<Self> {
        positive_dim(mean.len())?;
        check_dim(mean.len(), cov.dim())?;
        finite(&mean)?;
        Ok(IncrementLaw::Gaussian { mean, cov })
    }

    pub fn uniform_cube(mean: Vec<f64>) -> Result<Self> {
        positive_dim(mean.len())?;
        finite(&mean)?;
        Ok(IncrementLaw::UniformCube { mean })
    }

    pub fn deterministic(mean: Vec<f64>) -> Result<Self> {
        positive_dim(mean.len())?;
        finite(&mean)?;
        Ok(IncrementLaw::Deterministic { mean })
    }

    pub fn lattice(dim: usize) -> Result<Self> {
        positive_dim(dim)?;
        Ok(IncrementLaw::LatticeSimple { dim })
    }

    pub fn dim(&self) -> usize {
        match self {
            IncrementLaw::Rademacher { dim } | IncrementLaw::LatticeSimple { dim } => *dim,
            IncrementLaw::Gaussian { mean, .. }
            | IncrementLaw::UniformCube { mean }
            | IncrementLaw::Deterministic { mean } => mean.len(),
        }
    }

    pub fn mean(&self) -> Vec<f64> {
        match self {
            IncrementLaw::Rademacher { dim } | IncrementLaw::LatticeSimple { dim } => vec![0.0; *dim],
            IncrementLaw::Gaussian { mean, .. }
            | IncrementLaw::UniformCube { mean }
            | IncrementLaw::Deterministic { mean } => mean.clone(),
        }
    }

    pub fn covariance(&self) -> DMatrix<f64> {
        let d = self.dim();
        match self {
            IncrementLaw::Rademacher { .. } | IncrementLaw::UniformCube { .. } => DMatrix::identity(d, d),
            IncrementLaw::Gaussian { cov, .. } => cov.matrix().clone(),
            IncrementLaw::Deterministic { .. } => DMatrix::zeros(d, d),
            IncrementLaw::LatticeSimple { .. } => DMatrix::identity(d, d) / d as f64,
        }
    }

    pub fn cov_spec(&self) -> CovSpec {
        let d = self.dim();
        match self {
            IncrementLaw::Gaussian { cov, .. } => cov.clone(),
            IncrementLaw::Rademacher { .. } | IncrementLaw::UniformCube { .. } => CovSpec::identity(d),
            IncrementLaw::Deterministic { .. } => CovSpec::zeros(d),
            IncrementLaw::LatticeSimple { .. } => CovSpec::diagonal(&vec![1.0 / d as f64; d]),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            IncrementLaw::Rademacher { .. } => "rademacher",
            IncrementLaw::Gaussian { .. } => "gaussian",
            IncrementLaw::UniformCube { .. } => "uniform_cube",
            IncrementLaw::Deterministic { .. } => "deterministic",
            IncrementLaw::LatticeSimple { .. } => "lattice",
        }
    }

    /// Fills `out` (length `n * dim`) with `n` i.i.d. increments.
    pub fn fill<R: Rng>(&self, rng: &mut R, out: &mut [f64]) {
        match self {
            IncrementLaw::Rademacher { .. } => {
                for chunk in out.chunks_mut(64) {
                    let mut bits: u64 = rng.random();
                    for x in chunk {
                        *x = if bits & 1 == 1 { 1.0 } else { -1.0 };
                        bits >>= 1;
                    }
                }
            }
            IncrementLaw::Gaussian { mean, cov } => {
                let d = mean.len();
                normal_fill(rng, out);
                let mut z = vec![0.0; d];
                for step in out.chunks_mut(d) {
                    z.copy_from_slice(step);
                    cov.apply_root(&z, step);
                    for (x, m) in step.iter_mut().zip(mean) {
                        *x += m;
                    }
                }
            }
            IncrementLaw::UniformCube { mean } => {
                let d = mean.len();
                for (i, x) in out.iter_mut().enumerate() {
                    *x = mean[i % d] + rng.random_range(-SQRT3..SQRT3);
                }
            }
            IncrementLaw::Deterministic { mean } => {
                let d = mean.len();
                for (i, x) in out.iter_mut().enumerate() {
                    *x = mean[i % d];
                }
            }
            IncrementLaw::LatticeSimple { dim } => {
                out.iter_mut().for_each(|x| *x = 0.0);
                for step in out.chunks_mut(*dim) {
                    let k = rng.random_range(0..2 * dim);
                    step[k / 2] = if k % 2 == 0 { 1.0 } else { -1.0 };
                }
            }
        }
    }
}

fn positive_dim(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::arg("dimension must be positive"))
    } else {
        Ok(())
    }
}

fn finite(v: &[f64]) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::arg("mean has non-finite entries"))
    }
}
