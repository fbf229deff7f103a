use crate::error::{check_dim, Error, Result};
use crate::rw_engine::{Trajectory, TrajectoryKind};

/// `sup_{[0,1]} f` for a one-dimensional path.
pub fn max_functional(f: &Trajectory) -> Result<f64> {
    check_dim(1, f.dim())?;
    Ok(f.values().iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// A subset of the unit sphere `S^{d-1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    /// Directions `x` with `x . axis >= min_cos`; `axis` must be a unit vector.
    Cap { axis: Vec<f64>, min_cos: f64 },
    /// Directions with `lower_i <= x_i <= upper_i` for every coordinate.
    AxisBox { lower: Vec<f64>, upper: Vec<f64> },
    FullSphere,
}

impl Region {
    /// The positive half-line in one dimension.
    pub fn positive_half_line() -> Region {
        Region::Cap {
            axis: vec![1.0],
            min_cos: 0.0,
        }
    }

    fn validate(&self, d: usize) -> Result<()> {
        match self {
            Region::Cap { axis, min_cos } => {
                check_dim(d, axis.len())?;
                let n = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
                if (n - 1.0).abs() > 1e-9 {
                    return Err(Error::arg("cap axis must be a unit vector"));
                }
                if !(-1.0..=1.0).contains(min_cos) {
                    return Err(Error::arg("cap cosine must lie in [-1, 1]"));
                }
            }
            Region::AxisBox { lower, upper } => {
                check_dim(d, lower.len())?;
                check_dim(d, upper.len())?;
                if lower.iter().zip(upper).any(|(l, u)| l > u) {
                    return Err(Error::arg("box lower bound exceeds upper bound"));
                }
            }
            Region::FullSphere => {}
        }
        Ok(())
    }

    /// Whether the direction of `x` lies in the region; the zero vector
    /// never does.
    pub fn contains(&self, x: &[f64]) -> bool {
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n == 0.0 {
            return false;
        }
        match self {
            Region::Cap { axis, min_cos } => {
                x.iter().zip(axis).map(|(a, b)| a * b).sum::<f64>() >= min_cos * n
            }
            Region::AxisBox { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (l, u))| *v >= l * n && *v <= u * n),
            Region::FullSphere => true,
        }
    }

    /// Points in `(0, 1)` where membership of `a + s e` can change.
    fn split_points(&self, a: &[f64], e: &[f64], out: &mut Vec<f64>) {
        let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
        let (aa, ae, ee) = (dot(a, a), dot(a, e), dot(e, e));
        // Roots of (alpha + s beta)^2 - k^2 |a + s e|^2 and of alpha + s beta.
        let mut sq = |alpha: f64, beta: f64, k: f64| {
            if beta != 0.0 {
                out.push(-alpha / beta);
            }
            let qa = beta * beta - k * k * ee;
            let qb = 2.0 * (alpha * beta - k * k * ae);
            let qc = alpha * alpha - k * k * aa;
            quadratic_roots(qa, qb, qc, out);
        };
        match self {
            Region::Cap { axis, min_cos } => sq(dot(a, axis), dot(e, axis), *min_cos),
            Region::AxisBox { lower, upper } => {
                for i in 0..a.len() {
                    sq(a[i], e[i], lower[i]);
                    sq(a[i], e[i], upper[i]);
                }
            }
            Region::FullSphere => {}
        }
        // The path may pass through the origin.
        for i in 0..a.len() {
            if e[i] != 0.0 {
                out.push(-a[i] / e[i]);
            }
        }
    }
}

fn quadratic_roots(a: f64, b: f64, c: f64, out: &mut Vec<f64>) {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return;
    }
    if a.abs() <= 1e-14 * scale {
        if b != 0.0 {
            out.push(-c / b);
        }
        return;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return;
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q != 0.0 {
        out.push(q / a);
        out.push(c / q);
    } else {
        out.push(0.0);
    }
}

/// Lebesgue measure of `{t in [0,1] : f(t)/|f(t)| in A}`.
///
/// Exact for step paths. For linear paths each segment is split where the
/// membership condition can flip and tested at sub-interval midpoints.
pub fn occupation(f: &Trajectory, region: &Region) -> Result<f64> {
    region.validate(f.dim())?;
    if f.is_constant() {
        return Ok(if region.contains(f.value(0)) { 1.0 } else { 0.0 });
    }
    let t = f.times();
    let mut total = 0.0;
    match f.kind() {
        TrajectoryKind::Step => {
            for k in 0..t.len() - 1 {
                if region.contains(f.value(k)) {
                    total += t[k + 1] - t[k];
                }
            }
        }
        TrajectoryKind::Linear => {
            let d = f.dim();
            let mut e = vec![0.0; d];
            let mut mid = vec![0.0; d];
            let mut cuts = Vec::new();
            for k in 0..t.len() - 1 {
                let a = f.value(k);
                let b = f.value(k + 1);
                for c in 0..d {
                    e[c] = b[c] - a[c];
                }
                cuts.clear();
                cuts.push(0.0);
                cuts.push(1.0);
                region.split_points(a, &e, &mut cuts);
                cuts.retain(|s| (0.0..=1.0).contains(s));
                cuts.sort_by(f64::total_cmp);
                cuts.dedup();
                let len = t[k + 1] - t[k];
                for w in cuts.windows(2) {
                    let s = 0.5 * (w[0] + w[1]);
                    for c in 0..d {
                        mid[c] = a[c] + s * e[c];
                    }
                    if region.contains(&mid) {
                        total += (w[1] - w[0]) * len;
                    }
                }
            }
        }
    }
    Ok(total.clamp(0.0, 1.0))
}
