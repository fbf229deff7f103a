//! Experiment runners.
//!
//! Replica `r` of arm `a` draws from `derive_seed(derive_seed(seed, a), r)`,
//! so results do not depend on the number of worker threads. Replica
//! outputs land in indexed slots and are reduced in index order.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::hull_geometry::{convex_hull, diameter, mean_width, orthonormal_frame, surface_area, volume, PointSet};
use crate::limit_laws::{arcsine_cdf, sigma_mu_perp, std_normal_cdf, sup_bm_cdf, ComKernel, CovSpec};
use crate::path_metrics::{max_functional, occupation, Region};
use crate::rng::derive_seed;
use crate::rw_engine::{
    clt_trajectory, sample_brownian, sample_tilde_bd, sample_walk, IncrementLaw, TimeGrid, Trajectory,
    Walk,
};

use super::config::{ExperimentConfig, ExperimentKind, Functional};
use super::report::{Report, Row, SampleSeries};
use super::stats::{covariance_stderr, ks_statistic, ks_two_sample, mean_stderr, wilson_interval};

const ARM_WALK: u64 = 0;
const ARM_SURROGATE: u64 = 1;
const ARM_ALT: u64 = 2;

/// Seed of replica `r` in arm `arm`.
pub fn replica_seed(seed: u64, arm: u64, r: usize) -> u64 {
    derive_seed(derive_seed(seed, arm), r as u64)
}

/// Maps `f` over `0..count` on all available cores, keeping index order.
pub fn par_map<T, F>(count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(count.max(1));
    if workers <= 1 {
        return (0..count).map(&f).collect();
    }
    let chunk = count.div_ceil(workers);
    let mut slots: Vec<Option<Result<T>>> = (0..count).map(|_| None).collect();
    std::thread::scope(|s| {
        for (w, part) in slots.chunks_mut(chunk).enumerate() {
            let f = &f;
            s.spawn(move || {
                for (i, slot) in part.iter_mut().enumerate() {
                    *slot = Some(f(w * chunk + i));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.expect("every slot is filled")).collect()
}

/// Runs the experiment named by `cfg.experiment`.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let mut report = match cfg.experiment {
        ExperimentKind::Distributional => run_distributional(cfg),
        ExperimentKind::LlnSweep => run_lln_sweep(cfg),
        ExperimentKind::ComKernel => run_com_kernel_check(cfg),
        ExperimentKind::Etemadi => run_etemadi(cfg),
        ExperimentKind::HullDriftVolume => run_hull_drift_volume(cfg),
        ExperimentKind::HullDetRatio => run_hull_det_ratio(cfg),
    }?;
    report.runtime = start.elapsed();
    Ok(report)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `{(S_k - k mu) * scale}` as a point set (contains `S_0 = 0`).
fn centred_points(walk: &Walk, mu: &[f64], scale: f64) -> PointSet {
    let d = walk.dim();
    let coords: Vec<f64> = walk
        .sums()
        .iter()
        .enumerate()
        .map(|(i, x)| (x - (i / d) as f64 * mu[i % d]) * scale)
        .collect();
    PointSet::new(d, coords).expect("walk starts at the origin")
}

fn path_points(path: &Trajectory) -> Result<PointSet> {
    PointSet::from_values(path.dim(), path.values())
}

/// The functionals reported by a distributional run.
fn names(f: Functional) -> Vec<Functional> {
    match f {
        Functional::HullTrio => vec![Functional::MeanWidth, Functional::SurfaceArea, Functional::Volume],
        other => vec![other],
    }
}

fn hull_values(points: &PointSet, which: &[Functional], directions: usize) -> Result<Vec<f64>> {
    let body = convex_hull(points);
    which
        .iter()
        .map(|f| match f {
            Functional::MeanWidth => Ok(mean_width(&body, directions)?.value),
            Functional::SurfaceArea => Ok(surface_area(&body, directions)?.value),
            Functional::Volume => Ok(volume(&body).value),
            _ => unreachable!("hull functionals only"),
        })
        .collect()
}

/// Evaluates each functional in `which` on a CLT-scaled path.
fn path_values(path: &Trajectory, which: &[Functional], cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    match which[0] {
        Functional::Max => Ok(vec![max_functional(path)?]),
        Functional::Occupation => Ok(vec![occupation(path, &cfg.region)?]),
        Functional::Diameter => Ok(vec![diameter(&path_points(path)?)]),
        _ => hull_values(&path_points(path)?, which, cfg.directions),
    }
}

/// First coordinate of `(G_k - mu (k + 1) / 2) / sqrt(n)` for each `k`.
fn com_first(walk: &Walk, mu0: f64, ks: &[usize]) -> Vec<f64> {
    let d = walk.dim();
    let n = walk.len() as f64;
    let mut out = vec![0.0; ks.len()];
    let last = ks.iter().copied().max().unwrap_or(0);
    let sums = walk.sums();
    let mut acc = 0.0;
    for k in 1..=last {
        acc += sums[k * d];
        for (o, &kk) in out.iter_mut().zip(ks) {
            if kk == k {
                *o = (acc / k as f64 - mu0 * (k + 1) as f64 / 2.0) / n.sqrt();
            }
        }
    }
    out
}

fn com_index(n: usize, t: f64) -> usize {
    ((n as f64 * t).floor() as usize).min(n)
}

/// Closed-form reference CDF and mean, when one is available.
type Closed = (Box<dyn Fn(f64) -> f64>, f64);

fn closed_form(cfg: &ExperimentConfig, law: &IncrementLaw) -> Option<Closed> {
    let s11 = law.covariance()[(0, 0)];
    match cfg.functional {
        Functional::Max if cfg.dim == 1 && s11 > 0.0 => {
            let sigma = s11.sqrt();
            Some((Box::new(move |x| sup_bm_cdf(x / sigma)), sigma * (2.0 / std::f64::consts::PI).sqrt()))
        }
        Functional::Occupation if cfg.dim == 1 && s11 > 0.0 => match &cfg.region {
            Region::Cap { min_cos, .. } if *min_cos > -1.0 => Some((Box::new(arcsine_cdf), 0.5)),
            _ => None,
        },
        Functional::Com if s11 > 0.0 => {
            let sd = (s11 * cfg.time / 3.0).sqrt();
            Some((Box::new(move |x| std_normal_cdf(x / sd)), 0.0))
        }
        _ => None,
    }
}

/// Walk functionals against a closed-form law or a Brownian surrogate.
pub fn run_distributional(cfg: &ExperimentConfig) -> Result<Report> {
    if cfg.experiment != ExperimentKind::Distributional {
        return Err(Error::config("experiment", "expected distributional"));
    }
    if cfg.functional == Functional::Com && cfg.time <= 0.0 {
        return Err(Error::config("time", "must be positive for the centre of mass"));
    }
    let law = cfg.increment_law()?;
    let mu = law.mean();
    let which = names(cfg.functional);
    let n = cfg.n;
    let m = cfg.replicas;
    let walk_rows: Vec<Vec<f64>> = par_map(m, |r| {
        let walk = sample_walk(&law, n, replica_seed(cfg.seed, ARM_WALK, r))?;
        match cfg.functional {
            Functional::Com => Ok(com_first(&walk, mu[0], &[com_index(n, cfg.time)])),
            Functional::Max | Functional::Occupation => {
                path_values(&clt_trajectory(&walk, cfg.trajectory, &mu)?, &which, cfg)
            }
            Functional::Diameter => Ok(vec![diameter(&centred_points(&walk, &mu, 1.0 / (n as f64).sqrt()))]),
            _ => hull_values(&centred_points(&walk, &mu, 1.0 / (n as f64).sqrt()), &which, cfg.directions),
        }
    })?;
    let closed = closed_form(cfg, &law);
    let surrogate_rows: Option<Vec<Vec<f64>>> = if closed.is_none() {
        let cov = law.cov_spec();
        let grid = TimeGrid::uniform(cfg.surrogate_steps)?;
        Some(par_map(cfg.surrogate_count(), |r| {
            let b = sample_brownian(&cov, &grid, replica_seed(cfg.seed, ARM_SURROGATE, r))?;
            path_values(&b, &which, cfg)
        })?)
    } else {
        None
    };

    let mut report = Report::new(cfg);
    let thr = cfg.ks_threshold;
    for (i, f) in which.iter().enumerate() {
        let sample: Vec<f64> = walk_rows.iter().map(|v| v[i]).collect();
        let (mean, se) = mean_stderr(&sample);
        let (reference, ks) = match (&closed, &surrogate_rows) {
            (Some((cdf, ref_mean)), _) => {
                let ks = if m > 1 { Some(ks_statistic(&sample, cdf)?) } else { None };
                (Some(*ref_mean), ks)
            }
            (None, Some(rows)) => {
                let other: Vec<f64> = rows.iter().map(|v| v[i]).collect();
                let ks = if m > 1 && other.len() > 1 {
                    Some(ks_two_sample(&sample, &other)?)
                } else {
                    None
                };
                report.samples.push(SampleSeries {
                    name: format!("{}_surrogate", f.as_str()),
                    values: other.clone(),
                });
                (Some(mean_stderr(&other).0), ks)
            }
            (None, None) => unreachable!(),
        };
        if ks.is_none() {
            report.notes.push(format!("{}: KS undefined for a single replica", f.as_str()));
        }
        report.rows.push(
            Row::info(f.as_str(), mean, Some(se), reference)
                .with_ks(ks)
                .checked(ks.map(|k| k < thr), thr),
        );
        if cfg.functional == Functional::Com {
            let s11 = law.covariance()[(0, 0)];
            let (var, var_se) = covariance_stderr(&sample, &sample);
            let target = s11 * cfg.time / 3.0;
            let ok = if m > 1 { Some((var - target).abs() < cfg.abs_tolerance) } else { None };
            report
                .rows
                .push(Row::info("com_variance", var, Some(var_se), Some(target)).checked(ok, cfg.abs_tolerance));
        }
        report.samples.push(SampleSeries {
            name: f.as_str().to_string(),
            values: sample,
        });
    }
    if surrogate_rows.is_some() {
        report.notes.push(format!(
            "reference is a Brownian surrogate sample ({} paths, {} steps)",
            cfg.surrogate_count(),
            cfg.surrogate_steps
        ));
    }
    Ok(report)
}

/// Per-replica value of an LLN functional and its deterministic limit.
fn lln_value(cfg: &ExperimentConfig, walk: &Walk, mu: &[f64]) -> Result<(f64, f64)> {
    let n = walk.len();
    let d = walk.dim();
    let zero = vec![0.0; d];
    let scaled = || centred_points(walk, &zero, 1.0 / n as f64);
    Ok(match cfg.functional {
        Functional::Max => {
            let v = walk.sums().iter().fold(0.0f64, |a, &x| a.max(x)) / n as f64;
            (v, mu[0].max(0.0))
        }
        Functional::Diameter => (diameter(&scaled()), norm(mu)),
        Functional::Perimeter => {
            let body = convex_hull(&scaled());
            (surface_area(&body, 1)?.value, 2.0 * norm(mu))
        }
        Functional::Com => {
            let k = com_index(n, cfg.time);
            let mut acc = 0.0;
            for j in 1..=k {
                acc += walk.sum(j)[0];
            }
            let g = if k == 0 { 0.0 } else { acc / k as f64 };
            (g / n as f64, mu[0] * cfg.time / 2.0)
        }
        _ => return Err(Error::config("functional", "no deterministic limit for this functional")),
    })
}

/// Functional averages and absolute errors over an increasing list of `n`.
pub fn run_lln_sweep(cfg: &ExperimentConfig) -> Result<Report> {
    if cfg.n_list.is_empty() {
        return Err(Error::config("n_list", "must not be empty"));
    }
    let law = cfg.increment_law()?;
    let mu = law.mean();
    let mut report = Report::new(cfg);
    let mut errors = Vec::new();
    for (level, &n) in cfg.n_list.iter().enumerate() {
        let out: Vec<(f64, f64)> = par_map(cfg.replicas, |r| {
            let seed = replica_seed(derive_seed(cfg.seed, level as u64), ARM_WALK, r);
            lln_value(cfg, &sample_walk(&law, n, seed)?, &mu)
        })?;
        let reference = out[0].1;
        let values: Vec<f64> = out.iter().map(|p| p.0).collect();
        let errs: Vec<f64> = values.iter().map(|v| (v - reference).abs()).collect();
        let (v, vse) = mean_stderr(&values);
        let (e, ese) = mean_stderr(&errs);
        report.rows.push(Row::info(format!("value_n{n}"), v, Some(vse), Some(reference)));
        report.rows.push(Row::info(format!("error_n{n}"), e, Some(ese), Some(0.0)));
        errors.push(e);
    }
    let first = errors[0];
    let last = *errors.last().unwrap();
    if errors.len() > 1 {
        let ratio = if first > 0.0 { last / first } else { f64::NAN };
        let ok = if first > 0.0 { Some(last < first) } else { None };
        report
            .rows
            .push(Row::info("error_ratio_last_first", ratio, None, None).checked(ok, 1.0));
        if ok.is_none() {
            report.notes.push("error at the smallest n is zero; trend undefined".into());
        }
    }
    report
        .rows
        .push(Row::info("final_error", last, None, Some(0.0)).checked(Some(last < cfg.abs_tolerance), cfg.abs_tolerance));
    Ok(report)
}

/// Empirical covariance of the scaled centre of mass at pairs of times.
pub fn run_com_kernel_check(cfg: &ExperimentConfig) -> Result<Report> {
    if cfg.pairs.is_empty() {
        return Err(Error::config("pairs", "must not be empty"));
    }
    for &(a, b) in &cfg.pairs {
        if !(a > 0.0 && a <= 1.0 && b > 0.0 && b <= 1.0) {
            return Err(Error::config("pairs", format!("pair ({a}, {b}) outside (0, 1]")));
        }
    }
    let law = cfg.increment_law()?;
    let mu = law.mean();
    let s11 = law.covariance()[(0, 0)];
    let n = cfg.n;
    let mut ks: Vec<usize> = cfg
        .pairs
        .iter()
        .flat_map(|&(a, b)| [com_index(n, a), com_index(n, b)])
        .collect();
    ks.sort_unstable();
    ks.dedup();
    let out: Vec<Vec<f64>> = par_map(cfg.replicas, |r| {
        let walk = sample_walk(&law, n, replica_seed(cfg.seed, ARM_WALK, r))?;
        Ok(com_first(&walk, mu[0], &ks))
    })?;
    let column = |k: usize| -> Vec<f64> {
        let i = ks.binary_search(&k).expect("index was collected");
        out.iter().map(|v| v[i]).collect()
    };
    let mut report = Report::new(cfg);
    let mut asym = 0.0f64;
    for &(a, b) in &cfg.pairs {
        let x = column(com_index(n, a));
        let y = column(com_index(n, b));
        let (c, se) = covariance_stderr(&x, &y);
        let reference = ComKernel::scalar(a, b)? * s11;
        asym = asym.max((ComKernel::scalar(a, b)? - ComKernel::scalar(b, a)?).abs());
        let defined = cfg.replicas > 1 && reference != 0.0;
        let rel = ((c - reference) / reference).abs();
        report.rows.push(
            Row::info(format!("cov_{a}_{b}"), c, Some(se), Some(reference))
                .checked(defined.then_some(rel < cfg.rel_tolerance), cfg.rel_tolerance),
        );
        if a == b {
            let ok = (cfg.replicas > 1).then_some((c - reference).abs() < cfg.abs_tolerance);
            report
                .rows
                .push(Row::info(format!("var_{a}"), c, Some(se), Some(reference)).checked(ok, cfg.abs_tolerance));
        }
    }
    report
        .rows
        .push(Row::info("kernel_asymmetry", asym, None, Some(0.0)).checked(Some(asym == 0.0), 0.0));
    if cfg.dim > 1 {
        report.notes.push("covariances are of the first coordinate".into());
    }
    Ok(report)
}

/// Both sides of the maximal inequality with Wilson intervals.
pub fn run_etemadi(cfg: &ExperimentConfig) -> Result<Report> {
    if cfg.x_grid.is_empty() {
        return Err(Error::config("x_grid", "must not be empty"));
    }
    if cfg.x_grid.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::config("x_grid", "values must be nonnegative"));
    }
    let law = cfg.increment_law()?;
    let n = cfg.n;
    let xs = &cfg.x_grid;
    // Fixed-size blocks keep the integer reduction independent of threads.
    const BLOCK: usize = 256;
    let blocks = cfg.replicas.div_ceil(BLOCK);
    let counts: Vec<(Vec<usize>, Vec<Vec<usize>>)> = par_map(blocks, |b| {
        let mut left = vec![0usize; xs.len()];
        let mut right = vec![vec![0usize; n]; xs.len()];
        for r in b * BLOCK..((b + 1) * BLOCK).min(cfg.replicas) {
            let walk = sample_walk(&law, n, replica_seed(cfg.seed, ARM_WALK, r))?;
            let norms: Vec<f64> = (1..=n).map(|j| norm(walk.sum(j))).collect();
            let top = norms.iter().copied().fold(0.0f64, f64::max);
            for (i, &x) in xs.iter().enumerate() {
                if top >= 3.0 * x {
                    left[i] += 1;
                }
                for (j, &v) in norms.iter().enumerate() {
                    if v >= x {
                        right[i][j] += 1;
                    }
                }
            }
        }
        Ok((left, right))
    })?;
    let m = cfg.replicas;
    let mut report = Report::new(cfg);
    for (i, &x) in xs.iter().enumerate() {
        let left: usize = counts.iter().map(|c| c.0[i]).sum();
        let per_j: Vec<usize> = (0..n).map(|j| counts.iter().map(|c| c.1[i][j]).sum()).collect();
        let best = per_j.iter().copied().max().unwrap_or(0);
        let p_left = left as f64 / m as f64;
        let p_right = best as f64 / m as f64;
        let (lo_left, _) = wilson_interval(left, m, cfg.ci_z);
        let hi_right = per_j
            .iter()
            .map(|&c| wilson_interval(c, m, cfg.ci_z).1)
            .fold(0.0f64, f64::max);
        let violated = lo_left > (3.0 * hi_right).min(1.0);
        let se = (p_left * (1.0 - p_left) / m as f64).sqrt();
        report.rows.push(
            Row::info(format!("etemadi_x{x}"), p_left, Some(se), Some(3.0 * p_right)).checked(Some(!violated), cfg.ci_z),
        );
    }
    report
        .notes
        .push("estimate: Pr(max |S_j| >= 3x); reference: 3 max_j Pr(|S_j| >= x); fail only when the Wilson intervals separate".into());
    Ok(report)
}

/// Volume of the hull of the walk in drift coordinates:
/// `V(hull{S_k}) / n^{(d+1)/2}`.
fn drift_volume(walk: &Walk, frame: &[Vec<f64>], mu_norm: f64) -> f64 {
    let d = walk.dim();
    let nf = walk.len() as f64;
    let mut coords = Vec::with_capacity(walk.sums().len());
    for p in walk.sums().chunks(d) {
        for (i, e) in frame.iter().enumerate() {
            let c: f64 = e.iter().zip(p).map(|(a, b)| a * b).sum();
            coords.push(if i == 0 { c / (nf * mu_norm) } else { c / nf.sqrt() });
        }
    }
    let pts = PointSet::new(d, coords).expect("walk starts at the origin");
    volume(&convex_hull(&pts)).value
}

fn ratio_se(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let r = a.0 / b.0;
    let rel = ((a.1 / a.0).powi(2) + (b.1 / b.0).powi(2)).sqrt();
    (r, (r * rel).abs())
}

/// Scaled hull volume of a drifting walk against the Brownian surrogate
/// `|mu| sqrt(det Sigma_perp) v~_d`.
pub fn run_hull_drift_volume(cfg: &ExperimentConfig) -> Result<Report> {
    let law = cfg.increment_law()?;
    let mu = law.mean();
    let d = law.dim();
    if d < 2 {
        return Err(Error::config("dim", "drift volume needs d >= 2"));
    }
    let mu_norm = norm(&mu);
    if mu_norm == 0.0 {
        return Err(Error::config("mean", "drift must be nonzero"));
    }
    let frame = orthonormal_frame(&mu)?;
    let perp = sigma_mu_perp(&law.cov_spec(), &mu)?.perp;
    let walk_side: Vec<f64> = par_map(cfg.replicas, |r| {
        let walk = sample_walk(&law, cfg.n, replica_seed(cfg.seed, ARM_WALK, r))?;
        Ok(drift_volume(&walk, &frame, mu_norm))
    })?;
    let grid = TimeGrid::uniform(cfg.surrogate_steps)?;
    let unit = CovSpec::identity(d - 1);
    let surrogate: Vec<f64> = par_map(cfg.surrogate_count(), |r| {
        let path = sample_tilde_bd(&unit, &grid, replica_seed(cfg.seed, ARM_SURROGATE, r))?;
        Ok(volume(&convex_hull(&path_points(&path)?)).value)
    })?;
    let w = mean_stderr(&walk_side);
    let v = mean_stderr(&surrogate);
    let factor = mu_norm * perp.det().max(0.0).sqrt();
    let reference = (v.0 * factor, v.1 * factor);
    let mut report = Report::new(cfg);
    report.rows.push(Row::info("walk_volume", w.0, Some(w.1), None));
    report.rows.push(Row::info("tilde_v", v.0, Some(v.1), None));
    report.rows.push(Row::info("surrogate_volume", reference.0, Some(reference.1), None));
    if reference.0 > 0.0 {
        let (r, se) = ratio_se(w, reference);
        let ok = (cfg.replicas > 1).then_some((r - 1.0).abs() <= cfg.rel_tolerance);
        report
            .rows
            .push(Row::info("ratio", r, Some(se), Some(1.0)).checked(ok, cfg.rel_tolerance));
    } else {
        report.notes.push("perpendicular covariance is singular: both sides vanish".into());
        report
            .rows
            .push(Row::info("walk_volume_zero", w.0, None, Some(0.0)).checked(Some(w.0 == 0.0), 0.0));
    }
    report.samples.push(SampleSeries {
        name: "walk_volume".into(),
        values: walk_side,
    });
    report.samples.push(SampleSeries {
        name: "tilde_v".into(),
        values: surrogate,
    });
    Ok(report)
}

/// Ratio of mean scaled hull volumes under two covariances against
/// `sqrt(det cov / det cov_alt)`. The arms use independent seed streams.
pub fn run_hull_det_ratio(cfg: &ExperimentConfig) -> Result<Report> {
    let law_a = cfg.increment_law()?;
    let mu = law_a.mean();
    let law_b = IncrementLaw::gaussian(mu.clone(), cfg.cov_alt_spec()?)?;
    let scale = 1.0 / (cfg.n as f64).sqrt();
    let arm = |law: &IncrementLaw, tag: u64| -> Result<Vec<f64>> {
        par_map(cfg.replicas, |r| {
            let walk = sample_walk(law, cfg.n, replica_seed(cfg.seed, tag, r))?;
            Ok(volume(&convex_hull(&centred_points(&walk, &mu, scale))).value)
        })
    };
    let a = arm(&law_a, ARM_WALK)?;
    let b = arm(&law_b, ARM_ALT)?;
    let ma = mean_stderr(&a);
    let mb = mean_stderr(&b);
    let target = (law_a.cov_spec().det() / law_b.cov_spec().det()).sqrt();
    let mut report = Report::new(cfg);
    report.rows.push(Row::info("volume_cov", ma.0, Some(ma.1), None));
    report.rows.push(Row::info("volume_cov_alt", mb.0, Some(mb.1), None));
    let (r, se) = ratio_se(ma, mb);
    let ok = (cfg.replicas > 1 && target.is_finite()).then_some(((r / target) - 1.0).abs() <= cfg.rel_tolerance);
    report
        .rows
        .push(Row::info("ratio", r, Some(se), Some(target)).checked(ok, cfg.rel_tolerance));
    report.samples.push(SampleSeries {
        name: "volume_cov".into(),
        values: a,
    });
    report.samples.push(SampleSeries {
        name: "volume_cov_alt".into(),
        values: b,
    });
    Ok(report)
}
