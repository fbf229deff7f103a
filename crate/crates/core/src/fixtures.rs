//! Built-in example paths and bundled experiment configurations.

use crate::path_metrics::TimeChange;
use crate::rw_engine::{Trajectory, TrajectoryKind};

fn step2(cut: f64, left: f64, right: f64) -> Trajectory {
    Trajectory::new(TrajectoryKind::Step, 1, vec![0.0, cut, 1.0], vec![left, right, right])
        .expect("fixture is valid")
}

/// 1 on `[0, 1/2)`, 0 on `[1/2, 1]`.
pub fn example_f() -> Trajectory {
    step2(0.5, 1.0, 0.0)
}

/// 0.8 on `[0, 1/2)`, 0.2 on `[1/2, 1]`.
pub fn example_g() -> Trajectory {
    step2(0.5, 0.8, 0.2)
}

/// 0.95 on `[0, 0.49)`, 0.05 on `[0.49, 1]`.
pub fn example_h() -> Trajectory {
    step2(0.49, 0.95, 0.05)
}

/// Time change with `lambda(1/2) = 0.49`, slopes 49/50 then 51/50.
pub fn example_lambda() -> TimeChange {
    TimeChange::through(&[(0.5, 0.49)]).expect("fixture is valid")
}

/// The segment `I_mu(t) = t mu`.
pub fn segment(mu: &[f64]) -> Trajectory {
    let mut values = vec![0.0; mu.len()];
    values.extend_from_slice(mu);
    Trajectory::new(TrajectoryKind::Linear, mu.len(), vec![0.0, 1.0], values).expect("fixture is valid")
}

/// Bundled experiment configurations as `(name, text)`.
pub const CONFIGS: &[(&str, &str)] = &[
    ("max_clt", include_str!("../configs/max_clt.cfg")),
    ("arcsine", include_str!("../configs/arcsine.cfg")),
    ("perimeter_lln", include_str!("../configs/perimeter_lln.cfg")),
    ("com_variance", include_str!("../configs/com_variance.cfg")),
    ("com_kernel", include_str!("../configs/com_kernel.cfg")),
    ("hull_det_ratio", include_str!("../configs/hull_det_ratio.cfg")),
    ("hull_drift_volume", include_str!("../configs/hull_drift_volume.cfg")),
    ("etemadi_d1", include_str!("../configs/etemadi_d1.cfg")),
    ("etemadi_d2", include_str!("../configs/etemadi_d2.cfg")),
    ("hull_trio", include_str!("../configs/hull_trio.cfg")),
];

pub fn config(name: &str) -> Option<&'static str> {
    CONFIGS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Names of the bundled paths, time change and configurations.
pub fn listing() -> Vec<String> {
    let mut out: Vec<String> = ["paper-2.1-f", "paper-2.1-g", "paper-2.1-h", "paper-2.2-lambda", "segment"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    out.extend(CONFIGS.iter().map(|(n, _)| format!("config:{n}")));
    out
}
