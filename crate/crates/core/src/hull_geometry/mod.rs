//! Point sets, convex hulls and their functionals.

mod body;
mod hull2d;
mod hull3d;
mod lp;
mod measures;
pub mod sphere;

pub use body::{convex_hull, ConvexBody, Facet};
pub use measures::{
    body_diameter, hausdorff_support, mean_width, steiner_neighborhood_volume, surface_area, volume,
    volume_with, Estimate,
};

use crate::error::{check_dim, Error, Result};
use crate::rw_engine::Walk;

/// A finite subset of `R^d` that contains the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    /// Row-major points; the zero vector must be among them.
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        let s = Self::checked(dim, coords)?;
        if !s.coords.chunks(dim).any(|p| p.iter().all(|&x| x == 0.0)) {
            return Err(Error::arg("point set must contain the origin"));
        }
        Ok(s)
    }

    /// Like [`PointSet::new`], adding the origin when it is missing.
    pub fn with_origin(dim: usize, mut coords: Vec<f64>) -> Result<Self> {
        if dim > 0 && !coords.chunks(dim).any(|p| p.iter().all(|&x| x == 0.0)) {
            coords.extend(std::iter::repeat_n(0.0, dim));
        }
        Self::new(dim, coords)
    }

    fn checked(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(Error::arg("point set needs at least one point of positive dimension"));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::arg("point coordinates must be finite"));
        }
        Ok(PointSet { dim, coords })
    }

    pub(crate) fn raw(dim: usize, coords: Vec<f64>) -> Self {
        PointSet { dim, coords }
    }

    /// `{S_0, ..., S_n}` scaled by `factor`.
    pub fn from_walk(walk: &Walk, factor: f64) -> Self {
        PointSet {
            dim: walk.dim(),
            coords: walk.sums().iter().map(|x| x * factor).collect(),
        }
    }

    /// Breakpoint values of a trajectory together with the origin.
    pub fn from_values(dim: usize, values: &[f64]) -> Result<Self> {
        Self::with_origin(dim, values.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn directed(a: &PointSet, b: &PointSet) -> f64 {
    let mut worst = 0.0f64;
    for p in a.coords.chunks(a.dim) {
        let mut best = f64::INFINITY;
        for q in b.coords.chunks(b.dim) {
            best = best.min(dist2(p, q));
            if best <= worst {
                break;
            }
        }
        worst = worst.max(best);
    }
    worst.sqrt()
}

/// Hausdorff distance `max(sup_a inf_b |a - b|, sup_b inf_a |a - b|)`.
pub fn hausdorff(a: &PointSet, b: &PointSet) -> Result<f64> {
    check_dim(a.dim, b.dim)?;
    Ok(directed(a, b).max(directed(b, a)))
}

/// Largest pairwise distance.
pub fn diameter(a: &PointSet) -> f64 {
    if a.dim <= 3 {
        return body_diameter(&convex_hull(a));
    }
    let mut best = 0.0f64;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            best = best.max(dist2(a.point(i), a.point(j)));
        }
    }
    best.sqrt()
}

/// Orthonormal frame `{mu/|mu|, u_2, ..., u_d}` (rows): Gram-Schmidt over the
/// standard basis, skipping the axis most aligned with `mu`.
pub fn orthonormal_frame(mu: &[f64]) -> Result<Vec<Vec<f64>>> {
    let d = mu.len();
    let n = mu.iter().map(|x| x * x).sum::<f64>().sqrt();
    if d == 0 || !(n > 0.0) || !n.is_finite() {
        return Err(Error::arg("drift vector must be nonzero"));
    }
    let first: Vec<f64> = mu.iter().map(|x| x / n).collect();
    let skip = (0..d)
        .max_by(|&a, &b| first[a].abs().total_cmp(&first[b].abs()))
        .unwrap();
    let mut frame = vec![first];
    for axis in (0..d).filter(|&i| i != skip) {
        let mut v = vec![0.0; d];
        v[axis] = 1.0;
        // Two passes keep the basis orthogonal to machine precision.
        for _ in 0..2 {
            for e in &frame {
                let c: f64 = v.iter().zip(e).map(|(a, b)| a * b).sum();
                for (x, y) in v.iter_mut().zip(e) {
                    *x -= c * y;
                }
            }
        }
        let l = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        frame.push(v.into_iter().map(|x| x / l).collect());
    }
    Ok(frame)
}

/// `psi_{n,mu}(x) = (x.u_1 / (n |mu|), x.u_2 / sqrt(n), ..., x.u_d / sqrt(n))`.
pub fn drift_map(x: &[f64], n: usize, mu: &[f64]) -> Result<Vec<f64>> {
    check_dim(mu.len(), x.len())?;
    if n == 0 {
        return Err(Error::arg("n must be positive"));
    }
    let frame = orthonormal_frame(mu)?;
    let norm = mu.iter().map(|v| v * v).sum::<f64>().sqrt();
    let nf = n as f64;
    Ok(frame
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let c: f64 = e.iter().zip(x).map(|(a, b)| a * b).sum();
            if i == 0 {
                c / (nf * norm)
            } else {
                c / nf.sqrt()
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(d: usize, v: &[f64]) -> PointSet {
        PointSet::with_origin(d, v.to_vec()).unwrap()
    }

    #[test]
    fn hausdorff_basic() {
        let a = ps(2, &[0.0, 0.0]);
        let b = ps(2, &[0.0, 0.0, 1.0, 0.0]);
        assert_eq!(hausdorff(&a, &b).unwrap(), 1.0);
        assert_eq!(hausdorff(&b, &b).unwrap(), 0.0);
    }

    #[test]
    fn diameter_basic() {
        assert_eq!(diameter(&ps(2, &[0.0, 0.0, 3.0, 4.0])), 5.0);
    }

    #[test]
    fn square_hull() {
        let b = convex_hull(&ps(2, &[0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.5, 0.5]));
        assert_eq!(b.vertex_count(), 4);
        assert_eq!(volume(&b).value, 1.0);
        assert_eq!(surface_area(&b, 8).unwrap().value, 4.0);
        let s = steiner_neighborhood_volume(&b, 0.5).unwrap();
        assert!((s - (1.0 + 2.0 + std::f64::consts::PI * 0.25)).abs() < 1e-12);
    }

    #[test]
    fn simplex_volume_3d() {
        let b = convex_hull(&ps(3, &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]));
        assert_eq!(b.vertex_count(), 4);
        assert!((volume(&b).value - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn frame_is_orthonormal() {
        let f = orthonormal_frame(&[0.3, -1.2, 0.7, 2.0]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let g: f64 = f[i].iter().zip(&f[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - want).abs() < 1e-12);
            }
        }
        assert!(orthonormal_frame(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn drift_map_examples() {
        let mu = [1.0, 2.0];
        let y = drift_map(&[100.0, 200.0], 100, &mu).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-12 && y[1].abs() < 1e-12);
        let perp = [-2.0 * 10.0 / 5f64.sqrt(), 10.0 / 5f64.sqrt()];
        let z = drift_map(&perp, 100, &mu).unwrap();
        assert!(z[0].abs() < 1e-12 && (z[1].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn origin_required() {
        assert!(PointSet::new(2, vec![1.0, 1.0]).is_err());
        assert!(PointSet::new(2, vec![]).is_err());
    }
}
