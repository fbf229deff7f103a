use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};

use super::hull2d::monotone_chain;
use super::hull3d::{cross, dot, hull3, norm, sub, Hull3, V3};
use super::lp::in_hull;
use super::sphere::directions;
use super::PointSet;

/// A triangular facet of a three-dimensional body.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    /// Indices into [`ConvexBody::vertices`], counter-clockwise seen from outside.
    pub vertices: [usize; 3],
    /// Outward unit normal.
    pub normal: [f64; 3],
    /// `normal . x <= offset` for points of the body.
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    /// d = 1, d <= 3 with affine dimension <= 1, and d >= 4.
    Plain,
    /// Vertices in counter-clockwise order (d = 2, or coplanar d = 3).
    Polygon { normal: Option<V3> },
    Solid { facets: Vec<Facet> },
}

/// Convex hull of a finite point set with an exact support function.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    dim: usize,
    vertices: Vec<f64>,
    source: Vec<usize>,
    affine_dim: usize,
    shape: Shape,
}

/// Directions used to seed the vertex search for `d >= 4`.
const SEED_DIRECTIONS: usize = 512;

/// Membership slack for the linear-programming oracle.
const LP_TOL: f64 = 1e-9;

pub fn convex_hull(a: &PointSet) -> ConvexBody {
    let d = a.dim();
    let pts = a.coords();
    let n = a.len();
    match d {
        1 => {
            let lo = (0..n).min_by(|&x, &y| pts[x].total_cmp(&pts[y])).unwrap();
            let hi = (0..n).max_by(|&x, &y| pts[x].total_cmp(&pts[y])).unwrap();
            let idx = if pts[lo] == pts[hi] { vec![lo] } else { vec![lo, hi] };
            ConvexBody::from_indices(a, idx, Shape::Plain)
        }
        2 => {
            let idx = monotone_chain(pts);
            let shape = if idx.len() >= 3 {
                Shape::Polygon { normal: None }
            } else {
                Shape::Plain
            };
            ConvexBody::from_indices(a, idx, shape)
        }
        3 => match hull3(pts) {
            Hull3::Point(i) => ConvexBody::from_indices(a, vec![i], Shape::Plain),
            Hull3::Segment(i, j) => ConvexBody::from_indices(a, vec![i, j], Shape::Plain),
            Hull3::Planar { polygon, normal } => {
                let shape = if polygon.len() >= 3 {
                    Shape::Polygon { normal: Some(normal) }
                } else {
                    Shape::Plain
                };
                ConvexBody::from_indices(a, polygon, shape)
            }
            Hull3::Solid { faces } => solid_body(a, &faces),
        },
        _ => {
            let idx = general_vertices(pts, d, n);
            ConvexBody::from_indices(a, idx, Shape::Plain)
        }
    }
}

fn solid_body(a: &PointSet, faces: &[[usize; 3]]) -> ConvexBody {
    let pts = a.coords();
    let mut used: Vec<usize> = faces.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    // Drop vertices that are not extreme (coplanar ties inside a face).
    let extreme: Vec<usize> = used
        .iter()
        .copied()
        .filter(|&v| {
            let others: Vec<f64> = used
                .iter()
                .filter(|&&u| u != v)
                .flat_map(|&u| pts[3 * u..3 * u + 3].iter().copied())
                .collect();
            !in_hull(&others, 3, &pts[3 * v..3 * v + 3], LP_TOL)
        })
        .collect();
    if extreme.len() < used.len() {
        let sub_pts = PointSet::raw(3, extreme.iter().flat_map(|&v| pts[3 * v..3 * v + 3].iter().copied()).collect());
        let mut inner = convex_hull(&sub_pts);
        inner.source = inner.source.iter().map(|&k| extreme[k]).collect();
        return inner;
    }
    let pos = |v: usize| used.binary_search(&v).unwrap();
    let p = |i: usize| -> V3 { [pts[3 * i], pts[3 * i + 1], pts[3 * i + 2]] };
    let facets = faces
        .iter()
        .map(|f| {
            let nrm = cross(sub(p(f[1]), p(f[0])), sub(p(f[2]), p(f[0])));
            let len = norm(nrm);
            let normal = if len > 0.0 {
                [nrm[0] / len, nrm[1] / len, nrm[2] / len]
            } else {
                nrm
            };
            Facet {
                vertices: [pos(f[0]), pos(f[1]), pos(f[2])],
                normal,
                offset: dot(normal, p(f[0])),
            }
        })
        .collect();
    ConvexBody::from_indices(a, used, Shape::Solid { facets })
}

/// Extreme points in `d >= 4`: maximizers over a direction set, completed
/// by every point outside their hull, then pruned to points that are not in
/// the hull of the others.
fn general_vertices(pts: &[f64], d: usize, n: usize) -> Vec<usize> {
    let p = |i: usize| &pts[i * d..(i + 1) * d];
    let mut dirs = directions(d, SEED_DIRECTIONS);
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; d];
            e[i] = s;
            dirs.extend(e);
        }
    }
    let mut cand: Vec<usize> = dirs
        .chunks(d)
        .map(|u| {
            (0..n)
                .max_by(|&x, &y| dotn(u, p(x)).total_cmp(&dotn(u, p(y))))
                .unwrap()
        })
        .collect();
    cand.sort_unstable();
    cand.dedup();
    let seed: Vec<f64> = cand.iter().flat_map(|&i| p(i).iter().copied()).collect();
    let mut all = cand.clone();
    for i in 0..n {
        if cand.binary_search(&i).is_err() && !in_hull(&seed, d, p(i), LP_TOL) {
            all.push(i);
        }
    }
    all.sort_unstable();
    all.dedup_by(|x, y| p(*x) == p(*y));
    let mut keep = all.clone();
    for &v in &all {
        let others: Vec<f64> = keep
            .iter()
            .filter(|&&u| u != v)
            .flat_map(|&u| p(u).iter().copied())
            .collect();
        if !others.is_empty() && in_hull(&others, d, p(v), LP_TOL) {
            keep.retain(|&u| u != v);
        }
    }
    keep
}

fn dotn(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn affine_rank(vertices: &[f64], d: usize) -> usize {
    let k = vertices.len() / d;
    if k <= 1 {
        return 0;
    }
    let base = &vertices[..d];
    let m = DMatrix::from_fn(k - 1, d, |r, c| vertices[(r + 1) * d + c] - base[c]);
    let scale = m.amax();
    if scale == 0.0 {
        return 0;
    }
    m.svd(false, false).rank(1e-9 * scale)
}

impl ConvexBody {
    fn from_indices(a: &PointSet, idx: Vec<usize>, shape: Shape) -> ConvexBody {
        let d = a.dim();
        let vertices: Vec<f64> = idx.iter().flat_map(|&i| a.point(i).iter().copied()).collect();
        let affine_dim = match &shape {
            Shape::Solid { .. } => 3,
            Shape::Polygon { .. } => 2,
            Shape::Plain if d <= 3 => idx.len().saturating_sub(1).min(1),
            Shape::Plain => affine_rank(&vertices, d),
        };
        ConvexBody {
            dim: d,
            vertices,
            source: idx,
            affine_dim,
            shape,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len() / self.dim
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.vertices[i * self.dim..(i + 1) * self.dim]
    }

    /// Row-major vertex coordinates. For polygons they are in
    /// counter-clockwise order.
    pub fn vertices(&self) -> &[f64] {
        &self.vertices
    }

    /// Indices of the vertices in the point set the body was built from.
    pub fn source_indices(&self) -> &[usize] {
        &self.source
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    /// Triangular facets for full-dimensional bodies in `R^3`.
    pub fn facets(&self) -> &[Facet] {
        match &self.shape {
            Shape::Solid { facets } => facets,
            _ => &[],
        }
    }

    /// `h(u) = max_v u . v` without checking `|u| = 1`.
    pub fn support_unchecked(&self, u: &[f64]) -> f64 {
        self.vertices
            .chunks(self.dim)
            .map(|v| dotn(u, v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Support function at a unit direction.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        check_dim(self.dim, u.len())?;
        let n = dotn(u, u).sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::arg(format!("direction has norm {n}, expected 1")));
        }
        Ok(self.support_unchecked(u))
    }

    /// Whether `x` is within `slack` of the body.
    pub fn contains(&self, x: &[f64], slack: f64) -> bool {
        let d = self.dim;
        if x.len() != d {
            return false;
        }
        let k = self.vertex_count();
        match &self.shape {
            Shape::Solid { facets } => facets.iter().all(|f| {
                dot(f.normal, [x[0], x[1], x[2]]) - f.offset <= slack
            }),
            Shape::Polygon { normal } => {
                let (pts, q) = match normal {
                    None => (self.vertices.clone(), [x[0], x[1]]),
                    Some(nrm) => {
                        let o: V3 = [self.vertices[0], self.vertices[1], self.vertices[2]];
                        let xv: V3 = [x[0], x[1], x[2]];
                        if dot(*nrm, sub(xv, o)).abs() > slack {
                            return false;
                        }
                        let (e1, e2) = plane_basis(*nrm);
                        let pts: Vec<f64> = self
                            .vertices
                            .chunks(3)
                            .flat_map(|v| {
                                let w = sub([v[0], v[1], v[2]], o);
                                [dot(w, e1), dot(w, e2)]
                            })
                            .collect();
                        let w = sub(xv, o);
                        (pts, [dot(w, e1), dot(w, e2)])
                    }
                };
                (0..k).all(|i| {
                    let j = (i + 1) % k;
                    let (a, b) = ([pts[2 * i], pts[2 * i + 1]], [pts[2 * j], pts[2 * j + 1]]);
                    let e = [b[0] - a[0], b[1] - a[1]];
                    let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
                    e[0] * (q[1] - a[1]) - e[1] * (q[0] - a[0]) >= -slack * len
                })
            }
            Shape::Plain if d <= 3 || k <= 2 => match k {
                1 => dist(self.vertex(0), x) <= slack,
                _ => segment_distance(self.vertex(0), self.vertex(1), x) <= slack,
            },
            Shape::Plain => in_hull(&self.vertices, d, x, LP_TOL.max(slack)),
        }
    }

    /// The `(d-1)`-dimensional boundary measure of a full-dimensional polygon
    /// or solid, and twice the measure of a body of affine dimension `d-1`.
    pub(crate) fn exact_surface(&self) -> Option<f64> {
        match (self.dim, &self.shape) {
            (1, _) => Some(2.0),
            (2, Shape::Polygon { .. }) => Some(self.polygon_perimeter()),
            (2, Shape::Plain) => Some(if self.vertex_count() == 2 {
                2.0 * dist(self.vertex(0), self.vertex(1))
            } else {
                0.0
            }),
            (3, Shape::Solid { facets }) => Some(
                facets
                    .iter()
                    .map(|f| 0.5 * norm(self.tri_cross(f)))
                    .sum(),
            ),
            (3, Shape::Polygon { .. }) => Some(2.0 * self.polygon_area()),
            (3, Shape::Plain) => Some(0.0),
            _ => None,
        }
    }

    pub(crate) fn exact_volume(&self) -> Option<f64> {
        match (self.dim, &self.shape) {
            (1, _) => Some(if self.vertex_count() == 2 {
                (self.vertices[1] - self.vertices[0]).abs()
            } else {
                0.0
            }),
            (2, Shape::Polygon { .. }) => Some(self.polygon_area()),
            (2, Shape::Plain) => Some(0.0),
            (3, Shape::Solid { facets }) => Some(
                facets
                    .iter()
                    .map(|f| {
                        let [a, b, c] = f.vertices.map(|i| self.v3(i));
                        dot(a, cross(b, c)) / 6.0
                    })
                    .sum::<f64>()
                    .abs(),
            ),
            (3, _) => Some(0.0),
            _ => None,
        }
    }

    fn v3(&self, i: usize) -> V3 {
        [self.vertices[3 * i], self.vertices[3 * i + 1], self.vertices[3 * i + 2]]
    }

    fn tri_cross(&self, f: &Facet) -> V3 {
        let [a, b, c] = f.vertices.map(|i| self.v3(i));
        cross(sub(b, a), sub(c, a))
    }

    fn polygon_perimeter(&self) -> f64 {
        let k = self.vertex_count();
        (0..k).map(|i| dist(self.vertex(i), self.vertex((i + 1) % k))).sum()
    }

    fn polygon_area(&self) -> f64 {
        let k = self.vertex_count();
        if self.dim == 2 {
            let s: f64 = (0..k)
                .map(|i| {
                    let (a, b) = (self.vertex(i), self.vertex((i + 1) % k));
                    a[0] * b[1] - a[1] * b[0]
                })
                .sum();
            return 0.5 * s.abs();
        }
        let o = self.v3(0);
        let mut acc = [0.0; 3];
        for i in 1..k - 1 {
            let c = cross(sub(self.v3(i), o), sub(self.v3(i + 1), o));
            acc = [acc[0] + c[0], acc[1] + c[1], acc[2] + c[2]];
        }
        0.5 * norm(acc)
    }
}

/// Orthonormal basis of the plane orthogonal to the unit vector `n`.
pub(crate) fn plane_basis(n: V3) -> (V3, V3) {
    let a = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = cross(n, a);
    let l = norm(e1);
    let e1 = [e1[0] / l, e1[1] / l, e1[2] / l];
    (e1, cross(n, e1))
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn segment_distance(a: &[f64], b: &[f64], x: &[f64]) -> f64 {
    let ab: Vec<f64> = a.iter().zip(b).map(|(p, q)| q - p).collect();
    let ax: Vec<f64> = a.iter().zip(x).map(|(p, q)| q - p).collect();
    let den = dotn(&ab, &ab);
    let s = if den > 0.0 { (dotn(&ab, &ax) / den).clamp(0.0, 1.0) } else { 0.0 };
    let proj: Vec<f64> = a.iter().zip(&ab).map(|(p, e)| p + s * e).collect();
    dist(&proj, x)
}
