//! Deterministic direction sets on the unit sphere.

use std::f64::consts::PI;

const PRIMES: [u32; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// `Gamma(k / 2)` for a positive integer `k`.
fn gamma_half(k: usize) -> f64 {
    // Gamma(1/2) = sqrt(pi), Gamma(1) = 1, Gamma(x + 1) = x Gamma(x).
    let (mut g, mut x) = if k.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while x < k as f64 / 2.0 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Surface measure of `S^{d-1}`: `2 pi^{d/2} / Gamma(d/2)`.
pub fn sphere_area(d: usize) -> f64 {
    assert!(d >= 1);
    2.0 * PI.powf(d as f64 / 2.0) / gamma_half(d)
}

/// Volume of the unit ball in `R^k`; 1 for `k = 0`.
pub fn unit_ball_volume(k: usize) -> f64 {
    PI.powf(k as f64 / 2.0) / gamma_half(k + 2)
}

/// Radical inverse of `i` in base `b`.
pub(crate) fn radical_inverse(mut i: u64, b: u32) -> f64 {
    let b = b as u64;
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % b) as f64 * f;
        i /= b;
        f *= inv;
    }
    r
}

/// Halton point `i` (1-based) in `[0,1)^dims`.
pub(crate) fn halton(i: u64, dims: usize, out: &mut [f64]) {
    assert!(dims <= PRIMES.len(), "Halton sequence supports up to {} dims", PRIMES.len());
    for (k, o) in out.iter_mut().enumerate().take(dims) {
        *o = radical_inverse(i, PRIMES[k]);
    }
}

/// `m` unit directions in `R^d`, row-major.
///
/// d = 1: alternating `+1, -1`. d = 2: uniform angles `2 pi k / m`.
/// d = 3: Fibonacci lattice. d >= 4: Halton points pushed through
/// Box-Muller and normalized.
pub fn directions(d: usize, m: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(d * m);
    match d {
        1 => {
            for k in 0..m {
                out.push(if k.is_multiple_of(2) { 1.0 } else { -1.0 });
            }
        }
        2 => {
            for k in 0..m {
                let th = 2.0 * PI * k as f64 / m as f64;
                out.push(th.cos());
                out.push(th.sin());
            }
        }
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            for k in 0..m {
                let z = 1.0 - (2.0 * k as f64 + 1.0) / m as f64;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let th = golden * k as f64;
                out.extend_from_slice(&[r * th.cos(), r * th.sin(), z]);
            }
        }
        _ => {
            let pairs = d.div_ceil(2);
            let mut u = vec![0.0; 2 * pairs];
            let mut g = vec![0.0; 2 * pairs];
            let mut k = 1u64;
            while out.len() < d * m {
                halton(k, 2 * pairs, &mut u);
                k += 1;
                for p in 0..pairs {
                    let r = (-2.0 * (1.0 - u[2 * p]).ln()).sqrt();
                    let th = 2.0 * PI * u[2 * p + 1];
                    g[2 * p] = r * th.cos();
                    g[2 * p + 1] = r * th.sin();
                }
                let n = g[..d].iter().map(|x| x * x).sum::<f64>().sqrt();
                if n > 1e-12 {
                    out.extend(g[..d].iter().map(|x| x / n));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-12);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-12);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-12);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-12);
        assert_eq!(unit_ball_volume(0), 1.0);
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn directions_are_unit() {
        for d in 1..=6 {
            let dirs = directions(d, 100);
            assert_eq!(dirs.len(), 100 * d);
            for u in dirs.chunks(d) {
                let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((n - 1.0).abs() < 1e-12);
            }
        }
    }
}
