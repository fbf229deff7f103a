//! Empirical distributions, KS distances and interval estimates.

use crate::error::{Error, Result};

/// Right-continuous empirical CDF of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::arg("empirical CDF of an empty sample"));
        }
        if sample.iter().any(|x| x.is_nan()) {
            return Err(Error::arg("sample contains NaN"));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf { sorted })
    }

    /// `#{x_i <= x} / m`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }
}

pub fn empirical_cdf(sample: &[f64]) -> Result<EmpiricalCdf> {
    EmpiricalCdf::new(sample)
}

/// `sup_x |F_m(x) - F(x)|` for a continuous reference `F`, checked on both
/// sides of every jump of the empirical CDF.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let e = EmpiricalCdf::new(sample)?;
    let s = e.sorted();
    let m = s.len() as f64;
    let mut best = 0.0f64;
    let mut i = 0;
    while i < s.len() {
        let mut j = i;
        while j + 1 < s.len() && s[j + 1] == s[i] {
            j += 1;
        }
        let f = cdf(s[i]);
        best = best.max((f - i as f64 / m).abs());
        best = best.max(((j + 1) as f64 / m - f).abs());
        i = j + 1;
    }
    Ok(best)
}

/// Two-sample statistic `sup_x |F_a(x) - F_b(x)|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    let ea = EmpiricalCdf::new(a)?;
    let eb = EmpiricalCdf::new(b)?;
    let (sa, sb) = (ea.sorted(), eb.sorted());
    let (ma, mb) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut best = 0.0f64;
    while i < sa.len() || j < sb.len() {
        let x = match (sa.get(i), sb.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => break,
        };
        while i < sa.len() && sa[i] <= x {
            i += 1;
        }
        while j < sb.len() && sb[j] <= x {
            j += 1;
        }
        best = best.max((i as f64 / ma - j as f64 / mb).abs());
    }
    Ok(best)
}

/// Kolmogorov survival function `Pr(K > x)`.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * x * x).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// `c` with `Pr(K > c) = alpha`.
pub fn kolmogorov_quantile(alpha: f64) -> f64 {
    let (mut lo, mut hi) = (0.2, 10.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_sf(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Asymptotic one-sample KS critical value at level `alpha`.
pub fn ks_critical(m: usize, alpha: f64) -> f64 {
    kolmogorov_quantile(alpha) / (m as f64).sqrt()
}

/// Asymptotic two-sample KS critical value at level `alpha`.
pub fn ks_critical_two(m1: usize, m2: usize, alpha: f64) -> f64 {
    let (a, b) = (m1 as f64, m2 as f64);
    kolmogorov_quantile(alpha) * ((a + b) / (a * b)).sqrt()
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let den = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / den;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / den;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Sample mean and its standard error.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Unbiased sample covariance and a delta-method standard error.
pub fn covariance_stderr(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let m = xs.len();
    if m < 2 {
        return (f64::NAN, f64::NAN);
    }
    let (mx, _) = mean_stderr(xs);
    let (my, _) = mean_stderr(ys);
    let prods: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    let (mp, sp) = mean_stderr(&prods);
    let mf = m as f64;
    (mp * mf / (mf - 1.0), sp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_examples() {
        let e = empirical_cdf(&[0.5]).unwrap();
        assert_eq!(e.eval(0.4), 0.0);
        assert_eq!(e.eval(0.5), 1.0);
        let t = empirical_cdf(&[1.0, 1.0]).unwrap();
        assert_eq!(t.eval(0.999), 0.0);
        assert_eq!(t.eval(1.0), 1.0);
        assert!(empirical_cdf(&[]).is_err());
    }

    #[test]
    fn ks_examples() {
        let u = |x: f64| x.clamp(0.0, 1.0);
        assert!((ks_statistic(&[0.5], u).unwrap() - 0.5).abs() < 1e-15);
        assert!((ks_statistic(&[0.25, 0.75], u).unwrap() - 0.25).abs() < 1e-15);
        assert!(ks_statistic(&[], u).is_err());
    }

    #[test]
    fn two_sample_identical_is_zero() {
        let a = [0.1, 0.4, 0.4, 0.9];
        assert_eq!(ks_two_sample(&a, &a).unwrap(), 0.0);
        assert_eq!(ks_two_sample(&[0.0], &[1.0]).unwrap(), 1.0);
    }

    #[test]
    fn kolmogorov_quantiles() {
        assert!((kolmogorov_quantile(0.01) - 1.6276).abs() < 1e-3);
        assert!((kolmogorov_quantile(0.05) - 1.3581).abs() < 1e-3);
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(30, 100, 2.576);
        assert!(lo < 0.3 && 0.3 < hi);
        assert_eq!(wilson_interval(0, 10, 2.0).0, 0.0);
    }
}
