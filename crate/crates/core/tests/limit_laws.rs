use proptest::prelude::*;

use rwlimit::experiments::stats::{covariance_stderr, ks_statistic, mean_stderr};
use rwlimit::limit_laws::{
    arcsine_cdf, com_gram, lln_reference, sample_com_gp, sigma_mu_perp, sup_bm_cdf, sym_eigenvalues, ComKernel,
    CovSpec, LlnFunctional,
};
use rwlimit::rw_engine::{sample_brownian, TimeGrid};
use rwlimit::Error;

#[test]
fn kernel_table_values() {
    assert!((ComKernel::scalar(1.0, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!((ComKernel::scalar(0.5, 1.0).unwrap() - 5.0 / 24.0).abs() < 1e-15);
    assert!((ComKernel::scalar(0.4, 0.4).unwrap() - 0.4 / 3.0).abs() < 1e-15);
    // Zero first argument follows the tabulated convention K(0, t) = t Sigma / 3.
    assert!((ComKernel::scalar(0.0, 0.7).unwrap() - 0.7 / 3.0).abs() < 1e-15);
    assert!(ComKernel::scalar(1.2, 0.5).is_err());
}

#[test]
fn kernel_matrix_scales_sigma() {
    let k = ComKernel::new(CovSpec::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap());
    let m = k.eval(0.5, 1.0).unwrap();
    assert!((m[(0, 1)] - 5.0 / 24.0).abs() < 1e-15);
    assert!((m[(1, 1)] - 15.0 / 24.0).abs() < 1e-15);
}

#[test]
fn gram_is_positive_semidefinite() {
    let grid: Vec<f64> = (1..=40).map(|k| k as f64 / 40.0).collect();
    let g = com_gram(&grid).unwrap();
    assert!(sym_eigenvalues(&g)[0] > -1e-12);
}

#[test]
fn com_gp_moments() {
    let k = ComKernel::new(CovSpec::identity(1));
    let grid = [0.5, 1.0];
    let paths: Vec<(f64, f64)> = (0..20_000)
        .map(|s| {
            let p = sample_com_gp(&k, &grid, s).unwrap();
            (p.value(1)[0], p.value(2)[0])
        })
        .collect();
    let a: Vec<f64> = paths.iter().map(|p| p.0).collect();
    let b: Vec<f64> = paths.iter().map(|p| p.1).collect();
    let (v1, se1) = covariance_stderr(&b, &b);
    let (c, sec) = covariance_stderr(&a, &b);
    assert!((v1 - 1.0 / 3.0).abs() < 5.0 * se1, "{v1}");
    assert!((c - 5.0 / 24.0).abs() < 5.0 * sec, "{c}");
}

#[test]
fn com_gp_zero_covariance_is_zero() {
    let k = ComKernel::new(CovSpec::zeros(2));
    let p = sample_com_gp(&k, &[0.25, 0.5, 1.0], 4).unwrap();
    assert!(p.values().iter().all(|&x| x == 0.0));
}

#[test]
fn integral_of_brownian_path_by_parts() {
    // For a piecewise linear path, int_0^1 b dt = sum_j (1 - mid_j) (b_{j+1} - b_j).
    let grid = TimeGrid::uniform(64).unwrap();
    for seed in 0..20 {
        let b = sample_brownian(&CovSpec::identity(1), &grid, seed).unwrap();
        let t = b.times();
        let v = b.values();
        let mut trap = 0.0;
        let mut parts = 0.0;
        for j in 0..t.len() - 1 {
            let h = t[j + 1] - t[j];
            trap += 0.5 * (v[j] + v[j + 1]) * h;
            parts += (1.0 - 0.5 * (t[j] + t[j + 1])) * (v[j + 1] - v[j]);
        }
        assert!((trap - parts).abs() < 1e-12);
    }
}

#[test]
fn variance_of_integrated_brownian_motion() {
    // Var int_0^t b = t^3 / 3, here at t = 1 with a fine grid.
    let grid = TimeGrid::uniform(200).unwrap();
    let xs: Vec<f64> = (0..20_000)
        .map(|s| {
            let b = sample_brownian(&CovSpec::identity(1), &grid, 77 + s).unwrap();
            let (t, v) = (b.times(), b.values());
            (0..t.len() - 1).map(|j| 0.5 * (v[j] + v[j + 1]) * (t[j + 1] - t[j])).sum()
        })
        .collect();
    let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let (v, se) = mean_stderr(&sq);
    assert!((v - 1.0 / 3.0).abs() < 5.0 * se, "{v} {se}");
}

#[test]
fn brownian_maximum_law() {
    // Discrete maxima sit slightly below the continuous ones; with 2000
    // steps the bias is about 0.58 / sqrt(2000) in location.
    let grid = TimeGrid::uniform(2000).unwrap();
    let xs: Vec<f64> = (0..3000)
        .map(|s| {
            let b = sample_brownian(&CovSpec::identity(1), &grid, 9000 + s).unwrap();
            b.values().iter().copied().fold(f64::MIN, f64::max)
        })
        .collect();
    let ks = ks_statistic(&xs, sup_bm_cdf).unwrap();
    assert!(ks < 0.05, "{ks}");
}

#[test]
fn perpendicular_covariance() {
    let sigma = CovSpec::from_rows(&[vec![3.0, 1.0], vec![1.0, 2.0]]).unwrap();
    let p = sigma_mu_perp(&sigma, &[1.0, 0.0]).unwrap();
    assert!((p.perp.matrix()[(0, 0)] - 2.0).abs() < 1e-12);
    let q = sigma_mu_perp(&CovSpec::identity(3), &[1.0, 1.0, 1.0]).unwrap();
    assert!((q.perp.det() - 1.0).abs() < 1e-12);
    assert!(sigma_mu_perp(&sigma, &[0.0, 0.0]).is_err());
}

#[test]
fn lln_limits() {
    assert_eq!(lln_reference(LlnFunctional::Max, &[-1.0]).unwrap(), vec![0.0]);
    assert_eq!(lln_reference(LlnFunctional::Perimeter, &[3.0, 4.0]).unwrap(), vec![10.0]);
    assert_eq!(lln_reference(LlnFunctional::Com { time: 1.0 }, &[1.0]).unwrap(), vec![0.5]);
}

#[test]
fn covariance_validation() {
    assert!(matches!(
        CovSpec::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]),
        Err(Error::NotSymmetric(_))
    ));
    assert!(matches!(
        CovSpec::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]),
        Err(Error::NotPsd(_))
    ));
    let singular = CovSpec::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
    assert!(singular.det().abs() < 1e-12);
}

proptest! {
    #[test]
    fn kernel_symmetric(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        prop_assert_eq!(ComKernel::scalar(a, b).unwrap(), ComKernel::scalar(b, a).unwrap());
    }

    #[test]
    fn cdfs_monotone(x in -1.0f64..3.0, dx in 0.0f64..1.0) {
        prop_assert!(sup_bm_cdf(x) <= sup_bm_cdf(x + dx));
        prop_assert!(arcsine_cdf(x) <= arcsine_cdf(x + dx));
    }

    #[test]
    fn root_squares_back(a in 0.1f64..3.0, b in 0.1f64..3.0, c in -1.0f64..1.0) {
        let off = c * (a * b).sqrt() * 0.9;
        let s = CovSpec::from_rows(&[vec![a, off], vec![off, b]]).unwrap();
        let r = s.root();
        let back = r * r.transpose();
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((back[(i, j)] - s.matrix()[(i, j)]).abs() < 1e-10);
            }
        }
    }
}
