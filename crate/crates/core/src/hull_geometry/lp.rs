//! Convex-hull membership by phase-one simplex.

const PIVOT_EPS: f64 = 1e-12;

/// Whether `x` lies in the convex hull of `points` (row-major, dimension
/// `d`), up to a relative residual `tol`.
///
/// Solves `sum_i l_i (p_i - x) = 0`, `sum_i l_i = 1`, `l >= 0` with
/// artificial variables and Bland's rule, and accepts when the optimal
/// artificial mass is at most `tol`.
pub(crate) fn in_hull(points: &[f64], d: usize, x: &[f64], tol: f64) -> bool {
    let k = points.len() / d;
    if k == 0 {
        return false;
    }
    let scale = points
        .chunks(d)
        .flat_map(|p| p.iter().zip(x).map(|(a, b)| (a - b).abs()))
        .fold(0.0f64, f64::max);
    if scale == 0.0 {
        return true;
    }
    let rows = d + 1;
    let cols = k + rows + 1;
    let rhs = cols - 1;
    let mut t = vec![0.0; rows * cols];
    for (i, p) in points.chunks(d).enumerate() {
        for c in 0..d {
            t[c * cols + i] = (p[c] - x[c]) / scale;
        }
        t[d * cols + i] = 1.0;
    }
    t[d * cols + rhs] = 1.0;
    for r in 0..rows {
        t[r * cols + k + r] = 1.0;
    }
    let mut basis: Vec<usize> = (k..k + rows).collect();
    // Reduced costs of the phase-one objective.
    let mut z = vec![0.0; cols];
    for j in (0..k).chain(std::iter::once(rhs)) {
        z[j] = -(0..rows).map(|r| t[r * cols + j]).sum::<f64>();
    }
    for _ in 0..50 * (k + rows) {
        let Some(enter) = (0..k + rows).find(|&j| z[j] < -PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for r in 0..rows {
            let a = t[r * cols + enter];
            if a > PIVOT_EPS {
                let ratio = t[r * cols + rhs] / a;
                let better = match leave {
                    None => true,
                    Some(l) => ratio < best - 1e-15 || (ratio <= best + 1e-15 && basis[r] < basis[l]),
                };
                if better {
                    best = ratio;
                    leave = Some(r);
                }
            }
        }
        let Some(r) = leave else {
            break;
        };
        let piv = t[r * cols + enter];
        for j in 0..cols {
            t[r * cols + j] /= piv;
        }
        for rr in 0..rows {
            if rr != r {
                let f = t[rr * cols + enter];
                if f != 0.0 {
                    for j in 0..cols {
                        t[rr * cols + j] -= f * t[r * cols + j];
                    }
                }
            }
        }
        let f = z[enter];
        for j in 0..cols {
            z[j] -= f * t[r * cols + j];
        }
        basis[r] = enter;
    }
    -z[rhs] <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_membership() {
        let sq = [0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0];
        assert!(in_hull(&sq, 2, &[0.5, 0.5], 1e-9));
        assert!(in_hull(&sq, 2, &[1.0, 1.0], 1e-9));
        assert!(!in_hull(&sq, 2, &[1.01, 0.5], 1e-9));
        assert!(!in_hull(&sq, 2, &[-0.2, -0.2], 1e-9));
    }

    #[test]
    fn simplex_4d() {
        let mut pts = vec![0.0; 4];
        for i in 0..4 {
            let mut e = vec![0.0; 4];
            e[i] = 1.0;
            pts.extend(e);
        }
        assert!(in_hull(&pts, 4, &[0.2, 0.2, 0.2, 0.2], 1e-9));
        assert!(!in_hull(&pts, 4, &[0.3, 0.3, 0.3, 0.3], 1e-9));
    }
}
