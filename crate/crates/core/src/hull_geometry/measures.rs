use crate::error::{Error, Result};

use super::body::{dist, ConvexBody};
use super::sphere::{directions, halton, sphere_area, unit_ball_volume};
use super::{orthonormal_frame, PointSet};
use super::body::convex_hull;

/// A numerical value with its standard error (0 when exact or deterministic).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, stderr: 0.0 }
    }
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// `W(A) = ∫_{S^{d-1}} h_A(e) de`, the un-normalized sphere integral of the
/// support function. Dividing by half the sphere area gives the usual mean
/// width; in the plane `W` equals the perimeter.
///
/// d = 1 is exact. d = 2 uses the trapezoid rule on `m` uniform angles,
/// which is deterministic with a zero standard error. d >= 3 averages over
/// `m` quasi-random directions and reports the sample standard error.
pub fn mean_width(body: &ConvexBody, m: usize) -> Result<Estimate> {
    if m < 1 {
        return Err(Error::arg("mean width needs at least one direction"));
    }
    let d = body.dim();
    if d == 1 {
        return Ok(Estimate::exact(body.support_unchecked(&[1.0]) + body.support_unchecked(&[-1.0])));
    }
    let hs: Vec<f64> = directions(d, m).chunks(d).map(|u| body.support_unchecked(u)).collect();
    let (mean, se) = mean_and_stderr(&hs);
    let area = sphere_area(d);
    if d == 2 {
        return Ok(Estimate::exact(area * mean));
    }
    Ok(Estimate {
        value: area * mean,
        stderr: area * se,
    })
}

/// Boundary measure. Exact for d <= 3; for d >= 4 Cauchy's formula
/// `S = (1/nu_{d-1}) ∫ V_{d-1}(A | u^⊥) du` averaged over `m` directions.
///
/// A body of affine dimension `d - 1` counts both sides (twice its
/// `(d-1)`-measure); lower-dimensional bodies have measure 0.
pub fn surface_area(body: &ConvexBody, m: usize) -> Result<Estimate> {
    if m < 1 {
        return Err(Error::arg("surface area needs at least one direction"));
    }
    if let Some(s) = body.exact_surface() {
        return Ok(Estimate::exact(s));
    }
    let d = body.dim();
    if body.affine_dim() < d - 1 {
        return Ok(Estimate::exact(0.0));
    }
    let mut samples = Vec::with_capacity(m);
    for u in directions(d, m).chunks(d) {
        let frame = orthonormal_frame(u)?;
        let proj: Vec<f64> = body
            .vertices()
            .chunks(d)
            .flat_map(|v| frame[1..].iter().map(move |e| e.iter().zip(v).map(|(a, b)| a * b).sum::<f64>()))
            .collect();
        let shadow = convex_hull(&PointSet::raw(d - 1, proj));
        samples.push(volume_with(&shadow, m)?.value);
    }
    let (mean, se) = mean_and_stderr(&samples);
    let k = sphere_area(d) / unit_ball_volume(d - 1);
    Ok(Estimate {
        value: k * mean,
        stderr: k * se,
    })
}

/// Lebesgue measure; see [`volume_with`].
pub fn volume(body: &ConvexBody) -> Estimate {
    volume_with(body, 20_000).expect("positive sample count")
}

/// Exact for d <= 3. For d >= 4, hit-or-miss over `samples` Halton points
/// in the bounding box with the membership oracle.
pub fn volume_with(body: &ConvexBody, samples: usize) -> Result<Estimate> {
    if let Some(v) = body.exact_volume() {
        return Ok(Estimate::exact(v));
    }
    if samples < 1 {
        return Err(Error::arg("volume needs at least one sample"));
    }
    let d = body.dim();
    if body.affine_dim() < d {
        return Ok(Estimate::exact(0.0));
    }
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for v in body.vertices().chunks(d) {
        for c in 0..d {
            lo[c] = lo[c].min(v[c]);
            hi[c] = hi[c].max(v[c]);
        }
    }
    let boxv: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let mut u = vec![0.0; d];
    let mut x = vec![0.0; d];
    let mut hits = 0usize;
    for i in 1..=samples as u64 {
        halton(i, d, &mut u);
        for c in 0..d {
            x[c] = lo[c] + u[c] * (hi[c] - lo[c]);
        }
        if body.contains(&x, 0.0) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    Ok(Estimate {
        value: boxv * p,
        stderr: boxv * (p * (1.0 - p) / samples as f64).sqrt(),
    })
}

/// `mu_2(A^eps) = V + S eps + pi eps^2` for a planar body.
pub fn steiner_neighborhood_volume(body: &ConvexBody, eps: f64) -> Result<f64> {
    if body.dim() != 2 {
        return Err(Error::Unsupported("Steiner neighbourhood is implemented for d = 2".into()));
    }
    if !(eps >= 0.0) {
        return Err(Error::arg("eps must be nonnegative"));
    }
    let v = body.exact_volume().unwrap_or(0.0);
    let s = body.exact_surface().unwrap_or(0.0);
    Ok(v + s * eps + std::f64::consts::PI * eps * eps)
}

/// `sup_u |h_A(u) - h_B(u)|` over `m` grid directions, a lower bound that
/// converges to the Hausdorff distance of the bodies.
pub fn hausdorff_support(a: &ConvexBody, b: &ConvexBody, m: usize) -> Result<f64> {
    crate::error::check_dim(a.dim(), b.dim())?;
    Ok(directions(a.dim(), m)
        .chunks(a.dim())
        .map(|u| (a.support_unchecked(u) - b.support_unchecked(u)).abs())
        .fold(0.0, f64::max))
}

/// Largest distance between two vertices of the body.
pub fn body_diameter(body: &ConvexBody) -> f64 {
    let k = body.vertex_count();
    let mut best = 0.0f64;
    for i in 0..k {
        for j in i + 1..k {
            best = best.max(dist(body.vertex(i), body.vertex(j)));
        }
    }
    best
}
