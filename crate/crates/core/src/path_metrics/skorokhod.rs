//! Exact Skorokhod distances between step functions.
//!
//! Let `f` jump at `u_1 < ... < u_p` and `g` at `v_1 < ... < v_q`. For any
//! time change `lambda`, `g∘lambda` jumps at `w_j = lambda^{-1}(v_j)` and
//! `|f - g∘lambda|_inf` depends only on how the `w_j` interleave with the
//! `u_i`: it is the largest `|F_a - G_b|` over the pairs of cell values
//! `(a, b)` that overlap in time. The interleaving is a monotone lattice path
//! from `(0, 0)` to `(p, q)` where a diagonal step means `w_j = u_i` (a
//! matched jump).
//!
//! Given the interleaving and the positions `w_j`, the piecewise-linear
//! `lambda` through `(w_j, v_j)` is optimal for both time-change costs:
//! `|lambda - I|_inf = max_j |w_j - v_j|` and `|lambda|°` is the largest
//! `|log|` of the segment slopes, and no map through the same points does
//! better on either. So the infimum over all time changes equals the
//! minimum over lattice paths and positions, which the dynamic programs
//! below compute.
//!
//! For `rho_S` the objective is `max(max_j |w_j - v_j|, path norm)`. The
//! optimum is one of the values `|F_a - G_b|`, `|u_i - v_j|`, or
//! `|f(1) - g(1)|`, so we binary search over them. For a fixed `eps` the
//! feasibility test keeps, per lattice state, the smallest achievable
//! position of the last placed `w`, which dominates all larger ones.
//!
//! For `rho_S°` the slope bounds couple consecutive `w`, so each state keeps
//! the full reachable set of positions as a union of intervals. The
//! optimum is either a path-norm threshold or the smallest `eps` at which
//! the slope bounds become feasible for the states allowed by the previous
//! threshold; the latter is found by bisection.
//!
//! Ties in the closure (two `w` at the same time, or at 0 or 1) are limits
//! of admissible time changes, so the value is still the infimum; no
//! witness is returned in that case.

use crate::error::Result;
use crate::rw_engine::{Trajectory, TrajectoryKind};

use super::{norm_diff, rho_inf, MetricMode, MetricResult, TimeChange};

/// Slack on time-position comparisons, far below the reported tolerance.
const TIME_SLACK: f64 = 1e-12;

/// Search limits for the exact Skorokhod algorithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkorokhodOptions {
    /// Inputs with more jumps than this fall back to the `rho_inf` bound.
    pub j_max: usize,
}

impl Default for SkorokhodOptions {
    fn default() -> Self {
        SkorokhodOptions { j_max: 64 }
    }
}

/// A step function reduced to genuine jumps.
#[derive(Debug, Clone)]
pub(crate) struct StepProfile {
    pub dim: usize,
    /// Jump times in `(0, 1)`.
    pub jumps: Vec<f64>,
    /// Cell values `F_0..F_p`, row-major.
    pub cells: Vec<f64>,
    /// Value at `t = 1`.
    pub end: Vec<f64>,
}

impl StepProfile {
    pub fn from_step(f: &Trajectory) -> Self {
        let d = f.dim();
        let m = f.len();
        let interior = if m == 1 { 1 } else { m - 1 };
        let mut jumps = Vec::new();
        let mut cells = f.value(0).to_vec();
        for k in 1..interior {
            let v = f.value(k);
            if v != &cells[cells.len() - d..] {
                jumps.push(f.times()[k]);
                cells.extend_from_slice(v);
            }
        }
        StepProfile {
            dim: d,
            jumps,
            cells,
            end: f.value(m - 1).to_vec(),
        }
    }

    pub fn cell(&self, a: usize) -> &[f64] {
        &self.cells[a * self.dim..(a + 1) * self.dim]
    }

    pub fn jumps(&self) -> usize {
        self.jumps.len()
    }

    /// `u_0 = 0`, `u_1..u_p`, `u_{p+1} = 1`.
    fn u(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else if i > self.jumps.len() {
            1.0
        } else {
            self.jumps[i - 1]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Move {
    Start,
    F,
    G,
    Diag,
}

struct Problem {
    f: StepProfile,
    g: StepProfile,
    /// `|F_a - G_b|`, `(p + 1) x (q + 1)`.
    dist: Vec<f64>,
    end_norm: f64,
}

impl Problem {
    fn new(f: &Trajectory, g: &Trajectory) -> Self {
        let f = StepProfile::from_step(f);
        let g = StepProfile::from_step(g);
        let (p, q) = (f.jumps(), g.jumps());
        let mut dist = Vec::with_capacity((p + 1) * (q + 1));
        for a in 0..=p {
            for b in 0..=q {
                dist.push(norm_diff(f.cell(a), g.cell(b)));
            }
        }
        let end_norm = norm_diff(&f.end, &g.end);
        Problem { f, g, dist, end_norm }
    }

    fn p(&self) -> usize {
        self.f.jumps()
    }

    fn q(&self) -> usize {
        self.g.jumps()
    }

    fn dist(&self, a: usize, b: usize) -> f64 {
        self.dist[a * (self.q() + 1) + b]
    }

    fn idx(&self, a: usize, b: usize) -> usize {
        a * (self.q() + 1) + b
    }

    fn v(&self, j: usize) -> f64 {
        self.g.u(j)
    }

    fn u(&self, i: usize) -> f64 {
        self.f.u(i)
    }

    fn norm_candidates(&self) -> Vec<f64> {
        let mut c: Vec<f64> = self
            .dist
            .iter()
            .copied()
            .filter(|&x| x >= self.end_norm)
            .collect();
        c.push(self.end_norm);
        sort_dedup(&mut c);
        c
    }

    /// Smallest-position DP for `rho_S`; returns per-state `(E, move)`.
    fn plain_dp(&self, eps: f64) -> Option<Vec<(f64, Move)>> {
        let (p, q) = (self.p(), self.q());
        if self.end_norm > eps || self.dist(0, 0) > eps {
            return None;
        }
        let mut st = vec![(f64::INFINITY, Move::Start); (p + 1) * (q + 1)];
        st[0] = (0.0, Move::Start);
        let tol = eps + TIME_SLACK;
        for a in 0..=p {
            for b in 0..=q {
                let e = st[self.idx(a, b)].0;
                if !e.is_finite() {
                    continue;
                }
                if a < p && self.dist(a + 1, b) <= eps {
                    relax(&mut st[self.idx(a + 1, b)], e, Move::F);
                }
                if b < q && self.dist(a, b + 1) <= eps {
                    let v = self.v(b + 1);
                    let lo = e.max(self.u(a)).max(v - tol);
                    let hi = self.u(a + 1).min(v + tol);
                    if lo <= hi {
                        relax(&mut st[self.idx(a, b + 1)], lo, Move::G);
                    }
                }
                if a < p && b < q && self.dist(a + 1, b + 1) <= eps {
                    let w = self.u(a + 1);
                    if w >= e && (w - self.v(b + 1)).abs() <= tol {
                        relax(&mut st[self.idx(a + 1, b + 1)], w, Move::Diag);
                    }
                }
            }
        }
        if st[self.idx(p, q)].0.is_finite() {
            Some(st)
        } else {
            None
        }
    }

    fn plain_witness(&self, st: &[(f64, Move)]) -> Option<TimeChange> {
        let (mut a, mut b) = (self.p(), self.q());
        let mut points = Vec::new();
        loop {
            let (e, mv) = st[self.idx(a, b)];
            match mv {
                Move::Start => break,
                Move::F => a -= 1,
                Move::G => {
                    points.push((e, self.v(b)));
                    b -= 1;
                }
                Move::Diag => {
                    points.push((e, self.v(b)));
                    a -= 1;
                    b -= 1;
                }
            }
        }
        points.reverse();
        TimeChange::through(&points).ok()
    }

    /// Reachable positions of the last placed `w` per state for `rho_S°`,
    /// using only states with `dist <= threshold` and slopes within
    /// `[e^-eps, e^eps]`. Returns the state table if `(1, 1)` is reachable.
    fn circ_dp(&self, threshold: f64, eps: f64) -> Option<Vec<Vec<(f64, f64)>>> {
        let (p, q) = (self.p(), self.q());
        if self.end_norm > threshold || self.dist(0, 0) > threshold {
            return None;
        }
        let (lo_k, hi_k) = ((-eps).exp(), eps.exp());
        let mut st: Vec<Vec<(f64, f64)>> = vec![Vec::new(); (p + 1) * (q + 1)];
        st[0].push((0.0, 0.0));
        for a in 0..=p {
            for b in 0..=q {
                let i = self.idx(a, b);
                if st[i].is_empty() {
                    continue;
                }
                merge_intervals(&mut st[i]);
                let cur = st[i].clone();
                if a < p && self.dist(a + 1, b) <= threshold {
                    let j = self.idx(a + 1, b);
                    st[j].extend_from_slice(&cur);
                }
                if b < q {
                    let dv = self.v(b + 1) - self.v(b);
                    let (ua, ub) = (self.u(a), self.u(a + 1));
                    if self.dist(a, b + 1) <= threshold {
                        let j = self.idx(a, b + 1);
                        for &(l, h) in &cur {
                            let nl = (l + dv * lo_k).max(ua);
                            let nh = (h + dv * hi_k).min(ub);
                            if nl <= nh {
                                st[j].push((nl, nh));
                            }
                        }
                    }
                    if a < p && self.dist(a + 1, b + 1) <= threshold {
                        let reach = cur.iter().any(|&(l, h)| l + dv * lo_k <= ub && ub <= h + dv * hi_k);
                        if reach {
                            st[self.idx(a + 1, b + 1)].push((ub, ub));
                        }
                    }
                }
            }
        }
        let fin = self.idx(p, q);
        merge_intervals(&mut st[fin]);
        let dv = 1.0 - self.v(q);
        let ok = st[fin].iter().any(|&(l, h)| 1.0 - dv * hi_k <= h && l <= 1.0 - dv * lo_k);
        if ok {
            Some(st)
        } else {
            None
        }
    }

    fn circ_witness(&self, st: &[Vec<(f64, f64)>], threshold: f64, eps: f64) -> Option<TimeChange> {
        let (lo_k, hi_k) = ((-eps).exp(), eps.exp());
        let (mut a, mut b) = (self.p(), self.q());
        let dv = 1.0 - self.v(b);
        let mut w = pick(&st[self.idx(a, b)], 1.0 - dv * hi_k, 1.0 - dv * lo_k)?;
        let mut points = Vec::new();
        while a > 0 || b > 0 {
            if b == 0 {
                // Only f-moves remain and w is 0.
                a -= 1;
                continue;
            }
            let dv = self.v(b) - self.v(b - 1);
            let win = (w - dv * hi_k, w - dv * lo_k);
            let at_jump = a > 0 && w == self.u(a);
            let mut next = None;
            if at_jump && self.dist(a, b) <= threshold {
                // Diagonal predecessor.
                if let Some(x) = pick(&st[self.idx(a - 1, b - 1)], win.0, win.1) {
                    next = Some((a - 1, b - 1, x));
                }
            }
            if next.is_none() && w >= self.u(a) {
                if let Some(x) = pick(&st[self.idx(a, b - 1)], win.0, win.1) {
                    next = Some((a, b - 1, x));
                }
            }
            if next.is_none() && a > 0 && contains(&st[self.idx(a - 1, b)], w) {
                a -= 1;
                continue;
            }
            let (na, nb, x) = next?;
            points.push((w, self.v(b)));
            a = na;
            b = nb;
            w = x;
        }
        points.reverse();
        TimeChange::through(&points).ok()
    }
}

fn relax(slot: &mut (f64, Move), e: f64, mv: Move) {
    if e < slot.0 {
        *slot = (e, mv);
    }
}

fn sort_dedup(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup();
}

fn merge_intervals(v: &mut Vec<(f64, f64)>) {
    if v.len() < 2 {
        return;
    }
    v.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for &(l, h) in v.iter() {
        match out.last_mut() {
            Some(last) if l <= last.1 => last.1 = last.1.max(h),
            _ => out.push((l, h)),
        }
    }
    *v = out;
}

fn contains(set: &[(f64, f64)], x: f64) -> bool {
    set.iter().any(|&(l, h)| l <= x && x <= h)
}

/// Some point of `set ∩ [lo, hi]`, preferring the middle of the overlap.
fn pick(set: &[(f64, f64)], lo: f64, hi: f64) -> Option<f64> {
    set.iter().find_map(|&(l, h)| {
        let (a, b) = (l.max(lo), h.min(hi));
        (a <= b).then_some(0.5 * (a + b))
    })
}

enum Prepared {
    Exact(Problem),
    Bound(MetricResult),
}

fn prepare(f: &Trajectory, g: &Trajectory, opts: &SkorokhodOptions) -> Result<Prepared> {
    super::check_pair(f, g)?;
    if f.is_constant() || g.is_constant() {
        // A constant is unchanged by time changes, so the identity is optimal.
        return Ok(Prepared::Bound(MetricResult {
            value: rho_inf(f, g)?,
            witness: Some(TimeChange::identity()),
            mode: MetricMode::Exact,
        }));
    }
    if f.kind() == TrajectoryKind::Linear {
        return Ok(Prepared::Bound(upper_bound(f, g)?));
    }
    let prob = Problem::new(f, g);
    if prob.p() > opts.j_max || prob.q() > opts.j_max {
        return Ok(Prepared::Bound(upper_bound(f, g)?));
    }
    Ok(Prepared::Exact(prob))
}

fn upper_bound(f: &Trajectory, g: &Trajectory) -> Result<MetricResult> {
    Ok(MetricResult {
        value: rho_inf(f, g)?,
        witness: Some(TimeChange::identity()),
        mode: MetricMode::UpperBound,
    })
}

pub(crate) fn skorokhod(f: &Trajectory, g: &Trajectory, opts: &SkorokhodOptions) -> Result<MetricResult> {
    let prob = match prepare(f, g, opts)? {
        Prepared::Bound(r) => return Ok(r),
        Prepared::Exact(p) => p,
    };
    let mut cands = prob.norm_candidates();
    for i in 1..=prob.p() {
        for j in 1..=prob.q() {
            let c = (prob.u(i) - prob.v(j)).abs();
            if c >= prob.end_norm {
                cands.push(c);
            }
        }
    }
    sort_dedup(&mut cands);
    // The identity interleaving is feasible at the largest candidate.
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if prob.plain_dp(cands[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let value = cands[lo];
    let st = prob.plain_dp(value).expect("feasible at the located candidate");
    Ok(MetricResult {
        value,
        witness: prob.plain_witness(&st),
        mode: MetricMode::Exact,
    })
}

pub(crate) fn skorokhod_circ(f: &Trajectory, g: &Trajectory, opts: &SkorokhodOptions) -> Result<MetricResult> {
    let prob = match prepare(f, g, opts)? {
        Prepared::Bound(r) => return Ok(r),
        Prepared::Exact(p) => p,
    };
    let cands = prob.norm_candidates();
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if prob.circ_dp(cands[mid], cands[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let k = lo;
    let mut threshold = cands[k];
    let mut value = cands[k];
    if k > 0 {
        let c = cands[k - 1];
        if prob.circ_dp(c, cands[k]).is_some() {
            let (mut a, mut b) = (c, cands[k]);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if prob.circ_dp(c, m).is_some() {
                    b = m;
                } else {
                    a = m;
                }
            }
            threshold = c;
            value = b;
        }
    }
    let st = prob.circ_dp(threshold, value).expect("feasible at the located value");
    Ok(MetricResult {
        value,
        witness: prob.circ_witness(&st, threshold, value),
        mode: MetricMode::Exact,
    })
}
