//! Incremental convex hull in three dimensions.

use std::collections::HashMap;

use super::hull2d::monotone_chain;

pub(crate) type V3 = [f64; 3];

pub(crate) fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

fn scale(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Outcome of a three-dimensional hull, as indices into the input.
#[derive(Debug, Clone)]
pub(crate) enum Hull3 {
    Point(usize),
    Segment(usize, usize),
    /// Coplanar input: polygon in counter-clockwise order about `normal`.
    Planar { polygon: Vec<usize>, normal: V3 },
    /// Outward-oriented triangles.
    Solid { faces: Vec<[usize; 3]> },
}

struct Face {
    v: [usize; 3],
    n: V3,
    off: f64,
    alive: bool,
}

impl Face {
    fn new(v: [usize; 3], p: impl Fn(usize) -> V3) -> Face {
        let (a, b, c) = (p(v[0]), p(v[1]), p(v[2]));
        let n = cross(sub(b, a), sub(c, a));
        let len = norm(n);
        let n = if len > 0.0 { scale(n, 1.0 / len) } else { n };
        Face {
            v,
            n,
            off: dot(n, a),
            alive: true,
        }
    }

    fn dist(&self, x: V3) -> f64 {
        dot(self.n, x) - self.off
    }
}

/// Convex hull of row-major 3-vectors with distance tolerance `1e-9`
/// relative to the point-cloud extent.
pub(crate) fn hull3(points: &[f64]) -> Hull3 {
    let n = points.len() / 3;
    let p = |i: usize| -> V3 { [points[3 * i], points[3 * i + 1], points[3 * i + 2]] };
    let extent = (0..n)
        .map(|i| norm(sub(p(i), p(0))))
        .fold(0.0f64, f64::max);
    let eps = 1e-9 * extent.max(f64::MIN_POSITIVE);

    let i0 = (0..n)
        .min_by(|&a, &b| p(a).partial_cmp(&p(b)).unwrap())
        .unwrap();
    let far = |f: &dyn Fn(usize) -> f64| -> (usize, f64) {
        (0..n).fold((i0, -1.0), |(bi, bv), i| {
            let v = f(i);
            if v > bv {
                (i, v)
            } else {
                (bi, bv)
            }
        })
    };
    let (i1, d1) = far(&|i| norm(sub(p(i), p(i0))));
    if d1 <= eps {
        return Hull3::Point(i0);
    }
    let dir = scale(sub(p(i1), p(i0)), 1.0 / d1);
    let (i2, d2) = far(&|i| norm(cross(dir, sub(p(i), p(i0)))));
    if d2 <= eps {
        let proj = |i: usize| dot(dir, sub(p(i), p(i0)));
        let lo = (0..n).min_by(|&a, &b| proj(a).total_cmp(&proj(b))).unwrap();
        let hi = (0..n).max_by(|&a, &b| proj(a).total_cmp(&proj(b))).unwrap();
        return Hull3::Segment(lo, hi);
    }
    let pn = cross(sub(p(i1), p(i0)), sub(p(i2), p(i0)));
    let pn = scale(pn, 1.0 / norm(pn));
    let (i3, d3) = far(&|i| dot(pn, sub(p(i), p(i0))).abs());
    if d3 <= eps {
        let e1 = dir;
        let e2 = cross(pn, e1);
        let flat: Vec<f64> = (0..n)
            .flat_map(|i| {
                let q = sub(p(i), p(i0));
                [dot(q, e1), dot(q, e2)]
            })
            .collect();
        return Hull3::Planar {
            polygon: monotone_chain(&flat),
            normal: pn,
        };
    }

    let tet = [i0, i1, i2, i3];
    let centre = scale(
        [0, 1, 2, 3].iter().fold([0.0; 3], |acc, &k| {
            let q = p(tet[k]);
            [acc[0] + q[0], acc[1] + q[1], acc[2] + q[2]]
        }),
        0.25,
    );
    let mut faces: Vec<Face> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let add_face = |faces: &mut Vec<Face>, edges: &mut HashMap<(usize, usize), usize>, v: [usize; 3]| {
        let id = faces.len();
        faces.push(Face::new(v, p));
        edges.insert((v[0], v[1]), id);
        edges.insert((v[1], v[2]), id);
        edges.insert((v[2], v[0]), id);
    };
    for skip in 0..4 {
        let mut v = [0usize; 3];
        let mut k = 0;
        for (j, &t) in tet.iter().enumerate() {
            if j != skip {
                v[k] = t;
                k += 1;
            }
        }
        if Face::new(v, p).dist(centre) > 0.0 {
            v.swap(1, 2);
        }
        add_face(&mut faces, &mut edges, v);
    }

    let mut visible: Vec<usize> = Vec::new();
    let mut horizon: Vec<(usize, usize)> = Vec::new();
    let mut alive: Vec<usize> = (0..4).collect();
    for i in 0..n {
        if tet.contains(&i) {
            continue;
        }
        let x = p(i);
        visible.clear();
        visible.extend(alive.iter().copied().filter(|&f| faces[f].dist(x) > eps));
        if visible.is_empty() {
            continue;
        }
        for &f in &visible {
            faces[f].alive = false;
        }
        horizon.clear();
        for &f in &visible {
            let v = faces[f].v;
            for (a, b) in [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])] {
                match edges.get(&(b, a)) {
                    Some(&tw) if faces[tw].alive => horizon.push((a, b)),
                    _ => {}
                }
            }
        }
        for &f in &visible {
            let v = faces[f].v;
            for e in [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])] {
                if edges.get(&e) == Some(&f) {
                    edges.remove(&e);
                }
            }
        }
        for &(a, b) in &horizon {
            add_face(&mut faces, &mut edges, [a, b, i]);
        }
        alive.retain(|&f| faces[f].alive);
        alive.extend(faces.len() - horizon.len()..faces.len());
    }
    Hull3::Solid {
        faces: alive.iter().map(|&f| faces[f].v).collect(),
    }
}
