//! Andrew's monotone chain.

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Indices of the hull vertices of row-major 2-vectors in counter-clockwise
/// order, starting from the lexicographically smallest point. Collinear
/// boundary points are dropped; degenerate inputs give one or two indices.
pub(crate) fn monotone_chain(points: &[f64]) -> Vec<usize> {
    let n = points.len() / 2;
    let p = |i: usize| [points[2 * i], points[2 * i + 1]];
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        let (pa, pb) = (p(a), p(b));
        pa[0].total_cmp(&pb[0]).then(pa[1].total_cmp(&pb[1]))
    });
    idx.dedup_by(|a, b| p(*a) == p(*b));
    if idx.len() <= 2 {
        return idx;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for &i in &idx {
        while hull.len() >= 2 && cross(p(hull[hull.len() - 2]), p(hull[hull.len() - 1]), p(i)) <= 0.0 {
            hull.pop();
        }
        hull.push(i);
    }
    let lower = hull.len() + 1;
    for &i in idx.iter().rev().skip(1) {
        while hull.len() >= lower && cross(p(hull[hull.len() - 2]), p(hull[hull.len() - 1]), p(i)) <= 0.0 {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();
    if hull.len() == 2 && p(hull[0]) == p(hull[1]) {
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_centre() {
        let pts = [0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.5, 0.5];
        let h = monotone_chain(&pts);
        assert_eq!(h, vec![0, 1, 2, 3]);
    }

    #[test]
    fn collinear() {
        let pts = [0.0, 0.0, 2.0, 2.0, 1.0, 1.0, 3.0, 3.0];
        let mut h = monotone_chain(&pts);
        h.sort();
        assert_eq!(h, vec![0, 3]);
    }

    #[test]
    fn single_point_repeated() {
        let pts = [1.0, 1.0, 1.0, 1.0];
        assert_eq!(monotone_chain(&pts).len(), 1);
    }
}
