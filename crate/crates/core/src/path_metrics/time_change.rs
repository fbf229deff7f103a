use crate::error::{Error, Result};

/// A strictly increasing piecewise-linear bijection of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeChange {
    times: Vec<f64>,
    images: Vec<f64>,
}

impl TimeChange {
    pub fn new(times: Vec<f64>, images: Vec<f64>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidTimeChange(m.to_string()));
        if times.len() < 2 || times.len() != images.len() {
            return bad("need matching breakpoint and image lists of length >= 2");
        }
        if times[0] != 0.0 || images[0] != 0.0 {
            return bad("must map 0 to 0");
        }
        if *times.last().unwrap() != 1.0 || *images.last().unwrap() != 1.0 {
            return bad("must map 1 to 1");
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || images.windows(2).any(|w| !(w[1] > w[0])) {
            return bad("must be strictly increasing");
        }
        Ok(TimeChange { times, images })
    }

    pub fn identity() -> Self {
        TimeChange {
            times: vec![0.0, 1.0],
            images: vec![0.0, 1.0],
        }
    }

    /// Piecewise-linear map through `(0,0)`, the given interior points, and `(1,1)`.
    pub fn through(points: &[(f64, f64)]) -> Result<Self> {
        let mut times = vec![0.0];
        let mut images = vec![0.0];
        for &(t, v) in points {
            times.push(t);
            images.push(v);
        }
        times.push(1.0);
        images.push(1.0);
        Self::new(times, images)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn images(&self) -> &[f64] {
        &self.images
    }

    pub fn eval(&self, t: f64) -> f64 {
        interp(&self.times, &self.images, t)
    }

    pub fn inverse(&self) -> TimeChange {
        TimeChange {
            times: self.images.clone(),
            images: self.times.clone(),
        }
    }

    pub fn eval_inverse(&self, s: f64) -> f64 {
        interp(&self.images, &self.times, s)
    }

    /// `sup_t |lambda(t) - t|`, attained at a breakpoint.
    pub fn sup_distance_to_identity(&self) -> f64 {
        self.times
            .iter()
            .zip(&self.images)
            .map(|(t, l)| (l - t).abs())
            .fold(0.0, f64::max)
    }

    /// Segment slopes.
    pub fn slopes(&self) -> Vec<f64> {
        (1..self.times.len())
            .map(|k| (self.images[k] - self.images[k - 1]) / (self.times[k] - self.times[k - 1]))
            .collect()
    }
}

fn interp(xs: &[f64], ys: &[f64], t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    let k = xs.partition_point(|&x| x <= t).saturating_sub(1);
    if k + 1 >= xs.len() {
        return ys[xs.len() - 1];
    }
    let w = (t - xs[k]) / (xs[k + 1] - xs[k]);
    ys[k] + w * (ys[k + 1] - ys[k])
}

/// `sup_{s<t} |log((lambda(t) - lambda(s)) / (t - s))|`.
///
/// Every chord slope is a convex combination of segment slopes, so the
/// supremum is the largest `|log slope|` over segments.
pub fn lambda_circ_norm(lambda: &TimeChange) -> f64 {
    lambda
        .slopes()
        .into_iter()
        .map(|s| s.ln().abs())
        .fold(0.0, f64::max)
}

/// `max(e^{|lambda|°} - 1, 1 - e^{-|lambda|°})`, which bounds
/// `|lambda(t) - t| <= t c(lambda)`.
pub fn c_lambda(lambda: &TimeChange) -> f64 {
    let n = lambda_circ_norm(lambda);
    (n.exp() - 1.0).max(1.0 - (-n).exp())
}
