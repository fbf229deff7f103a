//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rwlimit::experiments::{run, ExperimentConfig, Report, Verdict};
use rwlimit::fixtures;
use rwlimit::hull_geometry::{
    convex_hull, diameter, hausdorff, hausdorff_support, steiner_neighborhood_volume, PointSet,
};
use rwlimit::limit_laws::ComKernel;
use rwlimit::path_metrics::{c_lambda, rho_inf, rho_skorokhod, TimeChange};
use rwlimit::rw_engine::{centre_of_mass, com_weighted, Trajectory, TrajectoryKind, Walk};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn bundled(name: &str) -> Report {
    let text = fixtures::config(name).expect("bundled config");
    let cfg = ExperimentConfig::load(text, &[]).expect("bundled config is valid");
    run(&cfg).expect("experiment runs")
}

fn estimate(r: &Report, row: &str) -> f64 {
    r.row(row).unwrap_or_else(|| panic!("row {row}")).estimate
}

fn c1_metric_exactness() -> Outcome {
    let start = Instant::now();
    let (f, g, h) = (fixtures::example_f(), fixtures::example_g(), fixtures::example_h());
    let ri_fg = rho_inf(&f, &g).unwrap();
    let ri_fh = rho_inf(&f, &h).unwrap();
    let rs_fg = rho_skorokhod(&f, &g).unwrap();
    let rs_fh = rho_skorokhod(&f, &h).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let close = |a: f64, b: f64| (a - b).abs() < 1e-9;
    let witness = rs_fh.witness.as_ref().map(|l| l.sup_distance_to_identity());
    let ok = close(ri_fg, 0.2)
        && close(ri_fh, 0.95)
        && close(rs_fg.value, 0.2)
        && close(rs_fh.value, 0.05)
        && witness.is_some_and(|w| close(w, 0.01))
        && elapsed < 1.0;
    outcome(
        ok,
        format!(
            "rho_inf(f,g)={ri_fg} rho_inf(f,h)={ri_fh} rho_S(f,g)={} rho_S(f,h)={} |lambda-I|={:?} in {elapsed:.4}s",
            rs_fg.value, rs_fh.value, witness
        ),
    )
}

fn ks_criterion(name: &str, row: &str) -> Outcome {
    let start = Instant::now();
    let r = bundled(name);
    let ks = r.row(row).and_then(|x| x.ks).unwrap_or(f64::INFINITY);
    outcome(ks < 0.05, format!("KS={ks:.4} (< 0.05) in {:.1}s", start.elapsed().as_secs_f64()))
}

fn c4_perimeter() -> Outcome {
    let r = bundled("perimeter_lln");
    let e_small = estimate(&r, "error_n1000");
    let e_big = estimate(&r, "error_n100000");
    let value = estimate(&r, "value_n100000");
    outcome(
        e_big < 0.05 && e_big < e_small,
        format!("L_n/n={value:.5} |err| n=1e5: {e_big:.2e}, n=1e3: {e_small:.2e}"),
    )
}

fn c5_c6_com(r: &Report) -> (Outcome, Outcome) {
    let var = estimate(r, "var_1");
    let c5 = outcome((var - 1.0 / 3.0).abs() < 0.01, format!("Var(G_n/sqrt n)={var:.5} vs 1/3"));
    let cov = estimate(r, "cov_0.5_1");
    let rel = (cov - 5.0 / 24.0).abs() / (5.0 / 24.0);
    let grid: Vec<f64> = (1..=50).map(|k| k as f64 / 50.0).collect();
    let symmetric = grid.iter().all(|&a| {
        grid.iter()
            .all(|&b| ComKernel::scalar(a, b).unwrap() == ComKernel::scalar(b, a).unwrap())
    });
    let c6 = outcome(
        rel < 0.05 && symmetric,
        format!("Cov(0.5,1)={cov:.5} rel err {rel:.4} (< 0.05), kernel symmetric: {symmetric}"),
    );
    (c5, c6)
}

fn c7_det_ratio() -> Outcome {
    let r = bundled("hull_det_ratio");
    let ratio = estimate(&r, "ratio");
    outcome((1.8..=2.2).contains(&ratio), format!("area ratio {ratio:.4} in [1.8, 2.2]"))
}

fn c8_drift_volume() -> Outcome {
    let r = bundled("hull_drift_volume");
    let ratio = estimate(&r, "ratio");
    outcome((0.85..=1.15).contains(&ratio), format!("walk/surrogate {ratio:.4} in [0.85, 1.15]"))
}

fn c9_etemadi() -> Outcome {
    let mut fails = Vec::new();
    for name in ["etemadi_d1", "etemadi_d2"] {
        let r = bundled(name);
        fails.extend(r.rows.iter().filter(|x| x.verdict == Verdict::Fail).map(|x| format!("{name}:{}", x.name)));
    }
    outcome(fails.is_empty(), format!("CI-separated violations: {fails:?}"))
}

fn random_step_path(rng: &mut ChaCha8Rng, d: usize) -> Trajectory {
    let jumps = rng.random_range(0..6);
    let mut times: Vec<f64> = (0..jumps).map(|_| rng.random_range(0.01..0.99)).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    times.insert(0, 0.0);
    times.push(1.0);
    let mut values = vec![0.0; d];
    for _ in 1..times.len() - 1 {
        values.extend((0..d).map(|_| rng.random_range(-1.0..1.0)));
    }
    let last = values[values.len() - d..].to_vec();
    values.extend(last);
    Trajectory::new(TrajectoryKind::Step, d, times, values).unwrap()
}

fn range_set(f: &Trajectory) -> PointSet {
    PointSet::new(f.dim(), f.values().to_vec()).unwrap()
}

fn random_points(rng: &mut ChaCha8Rng, d: usize) -> PointSet {
    let k = rng.random_range(1..12);
    PointSet::with_origin(d, (0..k * d).map(|_| rng.random_range(-2.0..2.0)).collect()).unwrap()
}

fn polygon_area_of_sum(a: &PointSet, radius: f64, k: usize) -> f64 {
    let mut coords = Vec::new();
    for p in a.coords().chunks(2) {
        for j in 0..k {
            let th = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
            coords.push(p[0] + radius * th.cos());
            coords.push(p[1] + radius * th.sin());
        }
    }
    let body = convex_hull(&PointSet::with_origin(2, coords).unwrap());
    rwlimit::hull_geometry::volume(&body).value
}

fn c10_properties() -> Outcome {
    const N: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut violations: Vec<String> = Vec::new();
    let mut note = |ok: bool, what: &str| {
        if !ok {
            violations.push(what.to_string());
        }
    };
    let slack = 1e-9;
    for _ in 0..N {
        let d = rng.random_range(1..=2);
        let f = random_step_path(&mut rng, d);
        let g = random_step_path(&mut rng, d);
        let ri = rho_inf(&f, &g).unwrap();
        let rs = rho_skorokhod(&f, &g).unwrap().value;
        let rh = hausdorff(&range_set(&f), &range_set(&g)).unwrap();
        note(rh <= rs + slack && rs <= ri + slack, "metric chain");
        let dd = (diameter(&range_set(&f)) - diameter(&range_set(&g))).abs();
        note(dd <= 2.0 * rh + slack, "diameter Lipschitz");
    }
    for _ in 0..N {
        let d = rng.random_range(2..=3);
        let a = random_points(&mut rng, d);
        let b = random_points(&mut rng, d);
        let hull_gap = hausdorff_support(&convex_hull(&a), &convex_hull(&b), 256).unwrap();
        note(hull_gap <= hausdorff(&a, &b).unwrap() + slack, "hull contraction");
    }
    for _ in 0..N {
        let k = rng.random_range(1..5);
        let mut pts: Vec<(f64, f64)> = Vec::new();
        let mut ts: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..0.95)).collect();
        let mut ss: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..0.95)).collect();
        ts.sort_by(f64::total_cmp);
        ss.sort_by(f64::total_cmp);
        ts.dedup();
        ss.dedup();
        for (t, s) in ts.iter().zip(&ss) {
            pts.push((*t, *s));
        }
        let Ok(lambda) = TimeChange::through(&pts) else { continue };
        let c = c_lambda(&lambda);
        let ok = (0..=200).all(|i| {
            let t = i as f64 / 200.0;
            (lambda.eval(t) - t).abs() <= t * c + slack
        });
        note(ok, "time-change bound");
    }
    for _ in 0..N {
        let d = rng.random_range(1..=3);
        let n = rng.random_range(1..60);
        let inc: Vec<f64> = (0..n * d).map(|_| rng.random_range(-3.0..3.0)).collect();
        let walk = Walk::from_increments(d, inc).unwrap();
        let com = centre_of_mass(&walk);
        let ok = (0..=n).all(|k| {
            com_weighted(&walk, k)
                .iter()
                .zip(com.get(k))
                .all(|(a, b)| (a - b).abs() <= 1e-9 * (1.0 + b.abs()))
        });
        note(ok, "centre-of-mass identity");
    }
    for _ in 0..N {
        let a = random_points(&mut rng, 2);
        let eps = rng.random_range(0.0..1.5);
        let s = steiner_neighborhood_volume(&convex_hull(&a), eps).unwrap();
        let k = 512;
        let inner = polygon_area_of_sum(&a, eps, k);
        let outer = polygon_area_of_sum(&a, eps / (std::f64::consts::PI / k as f64).cos(), k);
        note(inner - 1e-9 <= s && s <= outer + 1e-9, "Steiner identity");
    }
    let total = violations.len();
    violations.sort();
    violations.dedup();
    outcome(
        total == 0,
        format!("{N} instances per property, {total} violations {violations:?}"),
    )
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let timed = |id: usize, name: &'static str, f: &dyn Fn() -> Outcome, results: &mut Vec<(usize, &str, Outcome)>| {
        let start = Instant::now();
        let mut o = f();
        o.detail = format!("{} [{:.1}s]", o.detail, start.elapsed().as_secs_f64());
        println!("{} criterion {id} ({name}): {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, name, o));
    };
    timed(1, "metric exactness", &c1_metric_exactness, &mut results);
    timed(2, "max-functional CLT", &|| ks_criterion("max_clt", "max"), &mut results);
    timed(3, "arcsine law", &|| ks_criterion("arcsine", "occupation"), &mut results);
    timed(4, "perimeter LLN", &c4_perimeter, &mut results);
    let start = Instant::now();
    let com = bundled("com_kernel");
    let secs = start.elapsed().as_secs_f64();
    let (c5, c6) = c5_c6_com(&com);
    for (id, name, mut o) in [(5, "COM variance", c5), (6, "COM kernel", c6)] {
        o.detail = format!("{} [shared run {secs:.1}s]", o.detail);
        println!("{} criterion {id} ({name}): {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, name, o));
    }
    timed(7, "hull volume determinant law", &c7_det_ratio, &mut results);
    timed(8, "drift-volume self-consistency", &c8_drift_volume, &mut results);
    timed(9, "Etemadi inequality", &c9_etemadi, &mut results);
    timed(10, "property suites", &c10_properties, &mut results);
    let failed: Vec<usize> = results.iter().filter(|r| !r.2.ok).map(|r| r.0).collect();
    println!("acceptance: {} of {} criteria passed", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
