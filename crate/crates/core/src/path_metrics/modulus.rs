use crate::error::{Error, Result};
use crate::rw_engine::{Trajectory, TrajectoryKind};

use super::norm_diff;
use super::skorokhod::StepProfile;

/// `w_f(delta) = sup_{|s - t| < delta} |f(s) - f(t)|`.
///
/// For linear paths the strict supremum equals the maximum over
/// `|s - t| <= delta`, attained at breakpoint pairs or at a breakpoint and
/// its `delta`-translate. For step paths two cells `[a_i, b_i)` and
/// `[a_j, b_j)` with `i < j` contribute when `a_j - b_i < delta`.
pub fn modulus_w(f: &Trajectory, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::arg(format!("delta {delta} outside (0, 1]")));
    }
    if f.is_constant() {
        return Ok(0.0);
    }
    let t = f.times();
    let m = t.len();
    let mut best = 0.0f64;
    match f.kind() {
        TrajectoryKind::Step => {
            // Cells 0..m-2 are [t_i, t_{i+1}); cell m-1 is the point {1}.
            for i in 0..m - 1 {
                for j in i + 1..m {
                    if t[j] - t[i + 1] >= delta {
                        break;
                    }
                    best = best.max(norm_diff(f.value(i), f.value(j)));
                }
            }
        }
        TrajectoryKind::Linear => {
            for i in 0..m {
                for j in i + 1..m {
                    if t[j] - t[i] > delta {
                        break;
                    }
                    best = best.max(norm_diff(f.value(i), f.value(j)));
                }
                if t[i] + delta <= 1.0 {
                    best = best.max(norm_diff(f.value(i), &f.eval(t[i] + delta)));
                }
                if t[i] - delta >= 0.0 {
                    best = best.max(norm_diff(f.value(i), &f.eval(t[i] - delta)));
                }
            }
        }
    }
    Ok(best)
}

/// `w'_f(delta)`: infimum over partitions `0 = t_0 < ... < t_k = 1` with all
/// gaps `> delta` of the largest oscillation over the half-open cells
/// `[t_{i-1}, t_i)`.
///
/// The oscillation of a cell is the diameter of the step values it meets,
/// so the answer is one of those diameters. For a candidate bound `c` a
/// forward pass keeps, for each step cell, the smallest position a
/// partition point can take inside it.
pub fn modulus_w_prime(f: &Trajectory, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::arg(format!("delta {delta} outside (0, 1)")));
    }
    if f.kind() != TrajectoryKind::Step && !f.is_constant() {
        return Err(Error::Unsupported("w' is defined here for step paths only".into()));
    }
    let prof = StepProfile::from_step(f);
    let p = prof.jumps();
    if p == 0 {
        return Ok(0.0);
    }
    // diam[k][j] for k <= j: diameter of cells k..=j.
    let mut diam = vec![vec![0.0f64; p + 1]; p + 1];
    for k in 0..=p {
        for j in k + 1..=p {
            let mut d = diam[k][j - 1];
            for i in k..j {
                d = d.max(norm_diff(prof.cell(i), prof.cell(j)));
            }
            diam[k][j] = d;
        }
    }
    let u = |i: usize| {
        if i == 0 {
            0.0
        } else if i > p {
            1.0
        } else {
            prof.jumps[i - 1]
        }
    };
    let feasible = |c: f64| -> bool {
        let mut pos = vec![f64::INFINITY; p + 1];
        pos[0] = 0.0;
        for k in 0..=p {
            let x = pos[k];
            if !x.is_finite() {
                continue;
            }
            if 1.0 > x + delta && diam[k][p] <= c {
                return true;
            }
            for j in k + 1..=p {
                if diam[k][j - 1] > c {
                    break;
                }
                if u(j) > x + delta {
                    pos[j] = pos[j].min(u(j));
                }
                let lo = (x + delta).max(u(j));
                if lo < u(j + 1) && diam[k][j] <= c {
                    pos[j] = pos[j].min(lo);
                }
            }
        }
        false
    };
    let mut cands: Vec<f64> = diam.iter().flatten().copied().collect();
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(cands[lo])
}
