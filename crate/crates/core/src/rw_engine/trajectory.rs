use crate::error::{Error, Result};

/// How a trajectory interpolates between breakpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrajectoryKind {
    /// Continuous, linear between breakpoints.
    Linear,
    /// Right-continuous step function holding each breakpoint value.
    Step,
}

impl TrajectoryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TrajectoryKind::Linear => "linear",
            TrajectoryKind::Step => "step",
        }
    }
}

impl std::str::FromStr for TrajectoryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(TrajectoryKind::Linear),
            "step" => Ok(TrajectoryKind::Step),
            _ => Err(Error::arg(format!("unknown trajectory kind `{s}`"))),
        }
    }
}

/// A piecewise linear or piecewise constant path `[0, 1] -> R^d`.
///
/// Breakpoints start at 0 and end at 1. A trajectory with a single
/// breakpoint at 0 is a constant.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    kind: TrajectoryKind,
    dim: usize,
    times: Vec<f64>,
    values: Vec<f64>,
}

impl Trajectory {
    /// `values` holds one `dim`-vector per breakpoint, row-major.
    pub fn new(kind: TrajectoryKind, dim: usize, times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidTrajectory(m.to_string()));
        if dim == 0 {
            return bad("dimension must be positive");
        }
        if times.is_empty() {
            return bad("no breakpoints");
        }
        if values.len() != times.len() * dim {
            return bad("values must hold one vector per breakpoint");
        }
        if times[0] != 0.0 {
            return bad("first breakpoint must be 0");
        }
        if times.len() > 1 && *times.last().unwrap() != 1.0 {
            return bad("last breakpoint must be 1");
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return bad("breakpoints must be strictly increasing");
        }
        if values.iter().any(|v| !v.is_finite()) {
            return bad("values must be finite");
        }
        Ok(Trajectory { kind, dim, times, values })
    }

    pub fn constant(kind: TrajectoryKind, value: &[f64]) -> Result<Self> {
        Self::new(kind, value.len(), vec![0.0], value.to_vec())
    }

    /// Step function from cell values on a uniform grid `k/m`, `k < m`, and
    /// the value at 1.
    pub fn step_uniform(dim: usize, cells: &[f64], end: &[f64]) -> Result<Self> {
        let m = cells.len() / dim.max(1);
        let mut times: Vec<f64> = (0..m).map(|k| k as f64 / m as f64).collect();
        times.push(1.0);
        let mut values = cells.to_vec();
        values.extend_from_slice(end);
        Self::new(TrajectoryKind::Step, dim, times, values)
    }

    pub fn kind(&self) -> TrajectoryKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, k: usize) -> &[f64] {
        &self.values[k * self.dim..(k + 1) * self.dim]
    }

    /// True when the path has a single breakpoint.
    pub fn is_constant(&self) -> bool {
        self.times.len() == 1
    }

    /// Index of the greatest breakpoint `<= t`.
    fn index_at(&self, t: f64) -> usize {
        self.times.partition_point(|&x| x <= t).saturating_sub(1)
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let t = t.clamp(0.0, 1.0);
        let k = self.index_at(t);
        let last = self.times.len() - 1;
        if self.kind == TrajectoryKind::Step || k == last || self.times[k] == t {
            out.copy_from_slice(self.value(k));
            return;
        }
        let w = (t - self.times[k]) / (self.times[k + 1] - self.times[k]);
        let (a, b) = (self.value(k), self.value(k + 1));
        for c in 0..self.dim {
            out[c] = a[c] + w * (b[c] - a[c]);
        }
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(t, &mut out);
        out
    }

    /// `f(t-)`; equals `f(t)` for linear paths and at `t = 0`.
    pub fn left_limit(&self, t: f64) -> Vec<f64> {
        if self.kind == TrajectoryKind::Linear || t <= 0.0 {
            return self.eval(t);
        }
        let k = self.times.partition_point(|&x| x < t.min(1.0)).saturating_sub(1);
        self.value(k).to_vec()
    }

    /// Copy with the same breakpoints and a different kind.
    pub fn with_kind(&self, kind: TrajectoryKind) -> Trajectory {
        Trajectory { kind, ..self.clone() }
    }
}

/// Strictly increasing times in `[0, 1]` starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.first() != Some(&0.0) {
            return Err(Error::InvalidGrid("grid must start at 0".into()));
        }
        if *times.last().unwrap() > 1.0 {
            return Err(Error::InvalidGrid("grid must lie in [0, 1]".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
        }
        Ok(TimeGrid { times })
    }

    /// `k / steps` for `k = 0..=steps`.
    pub fn uniform(steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidGrid("need at least one step".into()));
        }
        Self::new((0..=steps).map(|k| k as f64 / steps as f64).collect())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }
}
