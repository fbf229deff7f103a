//! Random walks, rescaled trajectories, centre of mass and Brownian
//! reference paths.

mod law;
mod trajectory;
mod walk;

pub use law::IncrementLaw;
pub use trajectory::{TimeGrid, Trajectory, TrajectoryKind};
pub use walk::{
    centre_of_mass, com_remainder_at, com_remainder_sup, com_weighted, sample_walk, ComSeries, Walk,
};

use crate::error::{check_dim, Error, Result};
use crate::limit_laws::CovSpec;
use crate::rng::{normal_fill, rng_for};

/// `X_n` (linear) or `X'_n` (step): `S_k / n` at `t = k/n`.
pub fn lln_trajectory(walk: &Walk, kind: TrajectoryKind) -> Trajectory {
    let n = walk.len() as f64;
    scaled(walk, kind, &vec![0.0; walk.dim()], 1.0 / n)
}

/// `Y_n` (linear) or `Y'_n` (step) of the walk centred by `mu`:
/// `(S_k - k mu) / sqrt(n)` at `t = k/n`.
pub fn clt_trajectory(walk: &Walk, kind: TrajectoryKind, mu: &[f64]) -> Result<Trajectory> {
    check_dim(walk.dim(), mu.len())?;
    let n = walk.len() as f64;
    Ok(scaled(walk, kind, mu, 1.0 / n.sqrt()))
}

fn scaled(walk: &Walk, kind: TrajectoryKind, mu: &[f64], scale: f64) -> Trajectory {
    let n = walk.len();
    let d = walk.dim();
    let times: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
    let mut values = walk.sums().to_vec();
    for k in 0..=n {
        for c in 0..d {
            let v = &mut values[k * d + c];
            *v = (*v - k as f64 * mu[c]) * scale;
        }
    }
    Trajectory::new(kind, d, times, values).expect("uniform grid is valid")
}

/// Brownian path with covariance `cov` sampled on `grid`, linear between
/// grid points. The grid is extended to 1 by holding the last value.
pub fn sample_brownian(cov: &CovSpec, grid: &TimeGrid, seed: u64) -> Result<Trajectory> {
    let d = cov.dim();
    let times = grid.times();
    let m = times.len();
    let mut rng = rng_for(seed, 0);
    let mut values = vec![0.0; m * d];
    let mut z = vec![0.0; d];
    let mut step = vec![0.0; d];
    for j in 1..m {
        normal_fill(&mut rng, &mut z);
        cov.apply_root(&z, &mut step);
        let s = (times[j] - times[j - 1]).sqrt();
        for c in 0..d {
            values[j * d + c] = values[(j - 1) * d + c] + s * step[c];
        }
    }
    finish_path(d, times.to_vec(), values)
}

/// `(t, b_{d-1}(t))` where `b_{d-1}` has covariance `cov_perp`.
pub fn sample_tilde_bd(cov_perp: &CovSpec, grid: &TimeGrid, seed: u64) -> Result<Trajectory> {
    let dp = cov_perp.dim();
    if dp == 0 {
        return Err(Error::arg("drifted path needs d >= 2"));
    }
    let b = sample_brownian(cov_perp, grid, seed)?;
    let d = dp + 1;
    let mut values = vec![0.0; b.len() * d];
    for (k, &t) in b.times().iter().enumerate() {
        values[k * d] = t;
        values[k * d + 1..(k + 1) * d].copy_from_slice(b.value(k));
    }
    Trajectory::new(TrajectoryKind::Linear, d, b.times().to_vec(), values)
}

fn finish_path(d: usize, mut times: Vec<f64>, mut values: Vec<f64>) -> Result<Trajectory> {
    if times.len() == 1 {
        return Trajectory::new(TrajectoryKind::Linear, d, times, values);
    }
    if *times.last().unwrap() < 1.0 {
        let last = values[values.len() - d..].to_vec();
        times.push(1.0);
        values.extend_from_slice(&last);
    }
    Trajectory::new(TrajectoryKind::Linear, d, times, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_sums() {
        let law = IncrementLaw::deterministic(vec![1.0]).unwrap();
        let w = sample_walk(&law, 4, 9).unwrap();
        assert_eq!(w.sums(), &[0.0, 1.0, 2.0, 3.0, 4.0]);
        let g = centre_of_mass(&w);
        assert_eq!(g.get(4), &[2.5]);
    }

    #[test]
    fn zero_walk() {
        let law = IncrementLaw::deterministic(vec![0.0, 0.0]).unwrap();
        let w = sample_walk(&law, 10, 1).unwrap();
        assert!(w.sums().iter().all(|&x| x == 0.0));
        assert!(centre_of_mass(&w).values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn hand_trajectory() {
        let w = Walk::from_increments(1, vec![1.0, -1.0]).unwrap();
        let lin = lln_trajectory(&w, TrajectoryKind::Linear);
        let step = lln_trajectory(&w, TrajectoryKind::Step);
        assert!((lin.eval(0.25)[0] - 0.25).abs() < 1e-15);
        assert_eq!(step.eval(0.25)[0], 0.0);
        assert_eq!(step.eval(0.5)[0], 0.5);
        assert_eq!(step.left_limit(0.5)[0], 0.0);
    }

    #[test]
    fn rejects_zero_length() {
        let law = IncrementLaw::rademacher(1).unwrap();
        assert!(sample_walk(&law, 0, 1).is_err());
    }

    #[test]
    fn gaussian_dimension_mismatch() {
        assert!(IncrementLaw::gaussian(vec![0.0, 0.0], CovSpec::identity(3)).is_err());
    }

    #[test]
    fn tilde_first_coordinate_is_time() {
        let g = TimeGrid::uniform(50).unwrap();
        let p = sample_tilde_bd(&CovSpec::identity(1), &g, 5).unwrap();
        for k in 0..p.len() {
            assert_eq!(p.value(k)[0], p.times()[k]);
        }
        let z = sample_tilde_bd(&CovSpec::zeros(1), &g, 5).unwrap();
        assert!((0..z.len()).all(|k| z.value(k)[1] == 0.0));
    }

    #[test]
    fn remainder_closed_form_matches_scan() {
        let law = IncrementLaw::rademacher(2).unwrap();
        let w = sample_walk(&law, 40, 3).unwrap();
        let g = centre_of_mass(&w);
        let norm = |v: Vec<f64>| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut scan = 0.0f64;
        for i in 1..=40_000 {
            scan = scan.max(norm(com_remainder_at(&w, &g, i as f64 / 40_000.0)));
        }
        let exact = com_remainder_sup(&w, &g);
        assert!(scan <= exact + 1e-12);
        assert!(exact - scan < 0.01 * exact.max(1e-3));
    }
}
