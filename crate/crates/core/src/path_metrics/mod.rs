//! Metrics and functionals on piecewise paths.

mod functionals;
mod modulus;
mod skorokhod;
mod time_change;

pub use functionals::{max_functional, occupation, Region};
pub use modulus::{modulus_w, modulus_w_prime};
pub use skorokhod::SkorokhodOptions;
pub use time_change::{c_lambda, lambda_circ_norm, TimeChange};

use crate::error::{check_dim, Error, Result};
use crate::rw_engine::{Trajectory, TrajectoryKind};

/// Whether a metric value is the true infimum or only an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricMode {
    Exact,
    UpperBound,
}

impl MetricMode {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricMode::Exact => "exact",
            MetricMode::UpperBound => "upper-bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricResult {
    pub value: f64,
    /// A time change achieving the value, when one exists in closed form.
    pub witness: Option<TimeChange>,
    pub mode: MetricMode,
}

pub(crate) fn norm_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn merged_times(f: &Trajectory, g: &Trajectory) -> Vec<f64> {
    let mut t: Vec<f64> = f.times().iter().chain(g.times()).copied().collect();
    t.push(1.0);
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

/// `sup_t |f(t) - g(t)|`, exact for piecewise paths of either kind.
///
/// On each piece between merged breakpoints the difference is affine, so
/// the supremum is attained at a breakpoint or approached as a left limit.
pub fn rho_inf(f: &Trajectory, g: &Trajectory) -> Result<f64> {
    check_dim(f.dim(), g.dim())?;
    let t = merged_times(f, g);
    let mut best = norm_diff(&f.eval(1.0), &g.eval(1.0));
    for w in t.windows(2) {
        best = best.max(norm_diff(&f.eval(w[0]), &g.eval(w[0])));
        best = best.max(norm_diff(&f.left_limit(w[1]), &g.left_limit(w[1])));
    }
    if t.len() == 1 {
        best = best.max(norm_diff(&f.eval(0.0), &g.eval(0.0)));
    }
    Ok(best)
}

pub(crate) fn check_pair(f: &Trajectory, g: &Trajectory) -> Result<()> {
    check_dim(f.dim(), g.dim())?;
    if f.kind() != g.kind() && !f.is_constant() && !g.is_constant() {
        return Err(Error::arg("Skorokhod distance needs two paths of the same kind"));
    }
    Ok(())
}

/// `inf_lambda max(|lambda - I|_inf, |f - g∘lambda|_inf)`.
///
/// Exact for step paths with at most `j_max` jumps each; otherwise an upper
/// bound from the identity time change.
pub fn rho_skorokhod(f: &Trajectory, g: &Trajectory) -> Result<MetricResult> {
    rho_skorokhod_with(f, g, &SkorokhodOptions::default())
}

pub fn rho_skorokhod_with(f: &Trajectory, g: &Trajectory, opts: &SkorokhodOptions) -> Result<MetricResult> {
    skorokhod::skorokhod(f, g, opts)
}

/// `inf_lambda max(|lambda|°, |f - g∘lambda|_inf)`.
pub fn rho_skorokhod_circ(f: &Trajectory, g: &Trajectory) -> Result<MetricResult> {
    rho_skorokhod_circ_with(f, g, &SkorokhodOptions::default())
}

pub fn rho_skorokhod_circ_with(f: &Trajectory, g: &Trajectory, opts: &SkorokhodOptions) -> Result<MetricResult> {
    skorokhod::skorokhod_circ(f, g, opts)
}

/// `g∘lambda` as a trajectory of the same kind.
pub fn reparametrize(g: &Trajectory, lambda: &TimeChange) -> Trajectory {
    if g.is_constant() {
        return g.clone();
    }
    let d = g.dim();
    let mut times: Vec<f64> = g.times().iter().map(|&s| lambda.eval_inverse(s)).collect();
    if g.kind() == TrajectoryKind::Linear {
        times.extend_from_slice(lambda.times());
    }
    times[0] = 0.0;
    times.sort_by(f64::total_cmp);
    times.dedup();
    *times.last_mut().unwrap() = 1.0;
    let mut out_t = Vec::with_capacity(times.len());
    let mut values = Vec::with_capacity(times.len() * d);
    for &t in &times {
        if out_t.last().is_some_and(|&p: &f64| !(t > p)) {
            continue;
        }
        out_t.push(t);
        values.extend(g.eval(lambda.eval(t)));
    }
    // Breakpoints of g map back onto their own values exactly.
    if g.kind() == TrajectoryKind::Step {
        values.clear();
        for &t in &out_t {
            let s = lambda.eval(t);
            let k = g.times().partition_point(|&x| x <= s + 1e-15).saturating_sub(1);
            values.extend_from_slice(g.value(k));
        }
    }
    Trajectory::new(g.kind(), d, out_t, values).expect("time change preserves validity")
}

/// `max(|lambda - I|_inf, |f - g∘lambda|_inf)` for a given time change.
pub fn skorokhod_objective(f: &Trajectory, g: &Trajectory, lambda: &TimeChange) -> Result<f64> {
    Ok(lambda
        .sup_distance_to_identity()
        .max(rho_inf(f, &reparametrize(g, lambda))?))
}

/// `max(|lambda|°, |f - g∘lambda|_inf)` for a given time change.
pub fn skorokhod_circ_objective(f: &Trajectory, g: &Trajectory, lambda: &TimeChange) -> Result<f64> {
    Ok(lambda_circ_norm(lambda).max(rho_inf(f, &reparametrize(g, lambda))?))
}

/// Values of a step path, i.e. the closure of its range.
pub fn step_range(f: &Trajectory) -> Vec<f64> {
    f.values().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn example_sup_distances() {
        let (f, g, h) = (fixtures::example_f(), fixtures::example_g(), fixtures::example_h());
        assert!((rho_inf(&f, &g).unwrap() - 0.2).abs() < 1e-12);
        assert!((rho_inf(&f, &h).unwrap() - 0.95).abs() < 1e-12);
        assert_eq!(rho_inf(&f, &f).unwrap(), 0.0);
    }

    #[test]
    fn example_skorokhod() {
        let (f, g, h) = (fixtures::example_f(), fixtures::example_g(), fixtures::example_h());
        let fg = rho_skorokhod(&f, &g).unwrap();
        assert!((fg.value - 0.2).abs() < 1e-9);
        let fh = rho_skorokhod(&f, &h).unwrap();
        assert!((fh.value - 0.05).abs() < 1e-9);
        assert_eq!(fh.mode, MetricMode::Exact);
        let w = fh.witness.unwrap();
        assert!((w.sup_distance_to_identity() - 0.01).abs() < 1e-12);
        assert!((w.eval(0.5) - 0.49).abs() < 1e-15);
    }

    #[test]
    fn example_circ() {
        let (f, g, h) = (fixtures::example_f(), fixtures::example_g(), fixtures::example_h());
        assert!((rho_skorokhod_circ(&f, &g).unwrap().value - 0.2).abs() < 1e-9);
        let fh = rho_skorokhod_circ(&f, &h).unwrap();
        assert!((fh.value - 0.05).abs() < 1e-9);
        let w = fh.witness.unwrap();
        assert!(skorokhod_circ_objective(&f, &h, &w).unwrap() <= fh.value + 1e-9);
    }

    #[test]
    fn mixed_kinds_rejected() {
        let f = fixtures::example_f();
        let g = fixtures::example_g().with_kind(TrajectoryKind::Linear);
        assert!(rho_skorokhod(&f, &g).is_err());
    }

    #[test]
    fn linear_pairs_are_bounded_by_sup() {
        let f = fixtures::segment(&[1.0]);
        let g = fixtures::segment(&[0.5]);
        let r = rho_skorokhod(&f, &g).unwrap();
        assert_eq!(r.mode, MetricMode::UpperBound);
        assert!((r.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn jump_cap_falls_back() {
        let f = fixtures::example_f();
        let h = fixtures::example_h();
        let r = rho_skorokhod_with(&f, &h, &SkorokhodOptions { j_max: 0 }).unwrap();
        assert_eq!(r.mode, MetricMode::UpperBound);
        assert!((r.value - 0.95).abs() < 1e-12);
    }

    #[test]
    fn example_lambda_norms() {
        let l = fixtures::example_lambda();
        assert!((lambda_circ_norm(&l) - (50f64 / 49.0).ln()).abs() < 1e-12);
        assert!((c_lambda(&l) - 1.0 / 49.0).abs() < 1e-12);
    }

    #[test]
    fn moduli_examples() {
        let id = fixtures::segment(&[1.0]);
        assert!((modulus_w(&id, 0.3).unwrap() - 0.3).abs() < 1e-15);
        let jump = Trajectory::new(TrajectoryKind::Step, 1, vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 1.0]).unwrap();
        assert_eq!(modulus_w(&jump, 0.1).unwrap(), 1.0);
        assert_eq!(modulus_w_prime(&jump, 0.3).unwrap(), 0.0);
        let two = Trajectory::new(
            TrajectoryKind::Step,
            1,
            vec![0.0, 0.5, 0.55, 1.0],
            vec![0.0, 1.0, 2.0, 2.0],
        )
        .unwrap();
        assert_eq!(modulus_w_prime(&two, 0.1).unwrap(), 1.0);
        assert!(modulus_w_prime(&two, 1.0).is_err());
        assert!(modulus_w(&two, 0.0).is_err());
    }

    #[test]
    fn occupation_examples() {
        let half = Region::positive_half_line();
        let one = Trajectory::constant(TrajectoryKind::Step, &[1.0]).unwrap();
        assert_eq!(occupation(&one, &half).unwrap(), 1.0);
        let line = Trajectory::new(TrajectoryKind::Linear, 1, vec![0.0, 1.0], vec![-0.5, 0.5]).unwrap();
        assert!((occupation(&line, &half).unwrap() - 0.5).abs() < 1e-12);
        let zero = Trajectory::constant(TrajectoryKind::Step, &[0.0]).unwrap();
        assert_eq!(occupation(&zero, &Region::FullSphere).unwrap(), 0.0);
    }

    #[test]
    fn max_examples() {
        assert_eq!(max_functional(&fixtures::segment(&[1.0])).unwrap(), 1.0);
        assert_eq!(max_functional(&fixtures::example_f()).unwrap(), 1.0);
        assert!(max_functional(&fixtures::segment(&[1.0, 0.0])).is_err());
    }
}
