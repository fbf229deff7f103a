//! Flat `key = value` experiment configuration.
//!
//! Grammar: one `key = value` per line; `#` starts a comment; blank lines
//! are ignored. Lists are comma separated (`1000, 10000`), matrices and
//! pair lists separate rows with `;` (`4,0; 0,1`). Unknown keys are errors.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::limit_laws::CovSpec;
use crate::path_metrics::Region;
use crate::rw_engine::{IncrementLaw, TrajectoryKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Distributional,
    LlnSweep,
    ComKernel,
    Etemadi,
    HullDriftVolume,
    HullDetRatio,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Distributional,
        ExperimentKind::LlnSweep,
        ExperimentKind::ComKernel,
        ExperimentKind::Etemadi,
        ExperimentKind::HullDriftVolume,
        ExperimentKind::HullDetRatio,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Distributional => "distributional",
            ExperimentKind::LlnSweep => "lln_sweep",
            ExperimentKind::ComKernel => "com_kernel",
            ExperimentKind::Etemadi => "etemadi",
            ExperimentKind::HullDriftVolume => "hull_drift_volume",
            ExperimentKind::HullDetRatio => "hull_det_ratio",
        }
    }
}

/// Path or hull functional evaluated per replica.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    Max,
    Occupation,
    Diameter,
    MeanWidth,
    SurfaceArea,
    Volume,
    /// Mean width, surface area and volume together.
    HullTrio,
    Perimeter,
    /// `G_{floor(nt)}`, CLT-scaled in distributional runs.
    Com,
}

impl Functional {
    pub const ALL: [Functional; 9] = [
        Functional::Max,
        Functional::Occupation,
        Functional::Diameter,
        Functional::MeanWidth,
        Functional::SurfaceArea,
        Functional::Volume,
        Functional::HullTrio,
        Functional::Perimeter,
        Functional::Com,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Functional::Max => "max",
            Functional::Occupation => "occupation",
            Functional::Diameter => "diameter",
            Functional::MeanWidth => "mean_width",
            Functional::SurfaceArea => "surface_area",
            Functional::Volume => "volume",
            Functional::HullTrio => "hull_trio",
            Functional::Perimeter => "perimeter",
            Functional::Com => "com",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawName {
    Rademacher,
    Gaussian,
    UniformCube,
    Deterministic,
    Lattice,
}

impl LawName {
    pub const ALL: [LawName; 5] = [
        LawName::Rademacher,
        LawName::Gaussian,
        LawName::UniformCube,
        LawName::Deterministic,
        LawName::Lattice,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LawName::Rademacher => "rademacher",
            LawName::Gaussian => "gaussian",
            LawName::UniformCube => "uniform_cube",
            LawName::Deterministic => "deterministic",
            LawName::Lattice => "lattice",
        }
    }
}

fn parse_enum<T: Copy>(key: &str, value: &str, all: &[T], name: impl Fn(T) -> &'static str) -> Result<T> {
    all.iter().copied().find(|&x| name(x) == value).ok_or_else(|| {
        let names: Vec<&str> = all.iter().map(|&x| name(x)).collect();
        Error::config(key, format!("unknown value `{value}`; expected one of {}", names.join(", ")))
    })
}

/// A fully specified experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub functional: Functional,
    pub law: LawName,
    pub dim: usize,
    /// Drift; empty means the zero vector.
    pub mean: Vec<f64>,
    /// Gaussian covariance rows; empty means the identity.
    pub cov: Vec<Vec<f64>>,
    /// Second covariance for the determinant-ratio experiment.
    pub cov_alt: Vec<Vec<f64>>,
    pub n: usize,
    pub n_list: Vec<usize>,
    pub replicas: usize,
    pub seed: u64,
    /// Sphere directions for mean width and surface area.
    pub directions: usize,
    /// Grid steps of Brownian surrogate paths.
    pub surrogate_steps: usize,
    /// Surrogate sample size; 0 means the same as `replicas`.
    pub surrogate_replicas: usize,
    pub region: Region,
    pub time: f64,
    pub pairs: Vec<(f64, f64)>,
    pub x_grid: Vec<f64>,
    pub ks_threshold: f64,
    pub abs_tolerance: f64,
    pub rel_tolerance: f64,
    /// Normal quantile for Wilson intervals.
    pub ci_z: f64,
    pub trajectory: TrajectoryKind,
    pub dump_samples: bool,
    pub output: String,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: ExperimentKind::Distributional,
            functional: Functional::Max,
            law: LawName::Rademacher,
            dim: 1,
            mean: Vec::new(),
            cov: Vec::new(),
            cov_alt: Vec::new(),
            n: 1000,
            n_list: Vec::new(),
            replicas: 1000,
            seed: 1,
            directions: 1024,
            surrogate_steps: 1000,
            surrogate_replicas: 0,
            region: Region::positive_half_line(),
            time: 1.0,
            pairs: Vec::new(),
            x_grid: Vec::new(),
            ks_threshold: 0.05,
            abs_tolerance: 0.01,
            rel_tolerance: 0.05,
            ci_z: 2.576,
            trajectory: TrajectoryKind::Step,
            dump_samples: false,
            output: "out".into(),
        }
    }
}

pub const KEYS: &[&str] = &[
    "experiment",
    "functional",
    "law",
    "dim",
    "mean",
    "cov",
    "cov_alt",
    "n",
    "n_list",
    "replicas",
    "seed",
    "directions",
    "surrogate_steps",
    "surrogate_replicas",
    "region",
    "time",
    "pairs",
    "x_grid",
    "ks_threshold",
    "abs_tolerance",
    "rel_tolerance",
    "ci_z",
    "trajectory",
    "dump_samples",
    "output",
];

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::config(key, format!("cannot parse `{}`", v.trim())))
}

fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    let v = v.trim();
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|s| num(key, s)).collect()
}

fn matrix(key: &str, v: &str) -> Result<Vec<Vec<f64>>> {
    let v = v.trim();
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(';').map(|row| list(key, row)).collect()
}

fn fmt_list<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn fmt_matrix(m: &[Vec<f64>]) -> String {
    m.iter().map(|r| fmt_list(r)).collect::<Vec<_>>().join("; ")
}

/// Parses `sphere`, `cap:<axis>:<min_cos>` or `box:<lower>:<upper>`.
pub fn parse_region(v: &str) -> Result<Region> {
    let key = "region";
    let parts: Vec<&str> = v.trim().split(':').collect();
    match parts.as_slice() {
        ["sphere"] => Ok(Region::FullSphere),
        ["cap", axis, c] => Ok(Region::Cap {
            axis: list(key, axis)?,
            min_cos: num(key, c)?,
        }),
        ["box", lo, hi] => Ok(Region::AxisBox {
            lower: list(key, lo)?,
            upper: list(key, hi)?,
        }),
        _ => Err(Error::config(key, format!("unsupported region `{}`", v.trim()))),
    }
}

pub fn format_region(r: &Region) -> String {
    match r {
        Region::FullSphere => "sphere".into(),
        Region::Cap { axis, min_cos } => format!("cap:{}:{}", axis.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","), min_cos),
        Region::AxisBox { lower, upper } => format!(
            "box:{}:{}",
            lower.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            upper.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        ),
    }
}

impl ExperimentConfig {
    /// Parses text over the defaults without validating.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut seen: Vec<String> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::config(
                    line.to_string(),
                    format!("line {} is not `key = value`", lineno + 1),
                ));
            };
            let k = k.trim();
            if seen.iter().any(|s| s == k) {
                return Err(Error::config(k, "duplicate key"));
            }
            seen.push(k.to_string());
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    /// Parses, applies `key=value` overrides, then validates.
    pub fn load(text: &str, overrides: &[String]) -> Result<Self> {
        let mut cfg = Self::parse(text)?;
        for o in overrides {
            cfg.apply_override(o)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_override(&mut self, kv: &str) -> Result<()> {
        let Some((k, v)) = kv.split_once('=') else {
            return Err(Error::config(kv.trim(), "override must be `key=value`"));
        };
        self.set(k.trim(), v)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let t = v.trim();
        match key {
            "experiment" => self.experiment = parse_enum(key, t, &ExperimentKind::ALL, ExperimentKind::as_str)?,
            "functional" => self.functional = parse_enum(key, t, &Functional::ALL, Functional::as_str)?,
            "law" => self.law = parse_enum(key, t, &LawName::ALL, LawName::as_str)?,
            "dim" => self.dim = num(key, t)?,
            "mean" => self.mean = list(key, t)?,
            "cov" => self.cov = matrix(key, t)?,
            "cov_alt" => self.cov_alt = matrix(key, t)?,
            "n" => self.n = num(key, t)?,
            "n_list" => self.n_list = list(key, t)?,
            "replicas" => self.replicas = num(key, t)?,
            "seed" => self.seed = num(key, t)?,
            "directions" => self.directions = num(key, t)?,
            "surrogate_steps" => self.surrogate_steps = num(key, t)?,
            "surrogate_replicas" => self.surrogate_replicas = num(key, t)?,
            "region" => self.region = parse_region(t)?,
            "time" => self.time = num(key, t)?,
            "pairs" => {
                self.pairs = matrix(key, t)?
                    .into_iter()
                    .map(|r| match r.as_slice() {
                        [a, b] => Ok((*a, *b)),
                        _ => Err(Error::config(key, "each pair needs two times")),
                    })
                    .collect::<Result<_>>()?
            }
            "x_grid" => self.x_grid = list(key, t)?,
            "ks_threshold" => self.ks_threshold = num(key, t)?,
            "abs_tolerance" => self.abs_tolerance = num(key, t)?,
            "rel_tolerance" => self.rel_tolerance = num(key, t)?,
            "ci_z" => self.ci_z = num(key, t)?,
            "trajectory" => {
                self.trajectory = t.parse().map_err(|_| Error::config(key, format!("unknown value `{t}`")))?
            }
            "dump_samples" => self.dump_samples = num(key, t)?,
            "output" => self.output = t.to_string(),
            _ => return Err(Error::config(key, "unknown key")),
        }
        Ok(())
    }

    /// Canonical text; `parse(to_text())` reproduces the config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("experiment", self.experiment.as_str().into());
        kv("functional", self.functional.as_str().into());
        kv("law", self.law.as_str().into());
        kv("dim", self.dim.to_string());
        kv("mean", fmt_list(&self.mean));
        kv("cov", fmt_matrix(&self.cov));
        kv("cov_alt", fmt_matrix(&self.cov_alt));
        kv("n", self.n.to_string());
        kv("n_list", fmt_list(&self.n_list));
        kv("replicas", self.replicas.to_string());
        kv("seed", self.seed.to_string());
        kv("directions", self.directions.to_string());
        kv("surrogate_steps", self.surrogate_steps.to_string());
        kv("surrogate_replicas", self.surrogate_replicas.to_string());
        kv("region", format_region(&self.region));
        kv("time", self.time.to_string());
        kv(
            "pairs",
            self.pairs.iter().map(|(a, b)| format!("{a}, {b}")).collect::<Vec<_>>().join("; "),
        );
        kv("x_grid", fmt_list(&self.x_grid));
        kv("ks_threshold", self.ks_threshold.to_string());
        kv("abs_tolerance", self.abs_tolerance.to_string());
        kv("rel_tolerance", self.rel_tolerance.to_string());
        kv("ci_z", self.ci_z.to_string());
        kv("trajectory", self.trajectory.as_str().into());
        kv("dump_samples", self.dump_samples.to_string());
        kv("output", self.output.clone());
        s
    }

    /// The drift vector with the empty default expanded.
    pub fn mean_vec(&self) -> Vec<f64> {
        if self.mean.is_empty() {
            vec![0.0; self.dim]
        } else {
            self.mean.clone()
        }
    }

    pub fn cov_spec(&self) -> Result<CovSpec> {
        cov_from(&self.cov, self.dim, "cov")
    }

    pub fn cov_alt_spec(&self) -> Result<CovSpec> {
        if self.cov_alt.is_empty() {
            return Err(Error::config("cov_alt", "required for this experiment"));
        }
        cov_from(&self.cov_alt, self.dim, "cov_alt")
    }

    /// The increment law described by `law`, `dim`, `mean` and `cov`.
    pub fn increment_law(&self) -> Result<IncrementLaw> {
        let mean = self.mean_vec();
        let wrap = |e: Error| Error::config("law", e.to_string());
        match self.law {
            LawName::Rademacher => {
                self.zero_mean_only()?;
                IncrementLaw::rademacher(self.dim).map_err(wrap)
            }
            LawName::Lattice => {
                self.zero_mean_only()?;
                IncrementLaw::lattice(self.dim).map_err(wrap)
            }
            LawName::Gaussian => IncrementLaw::gaussian(mean, self.cov_spec()?).map_err(wrap),
            LawName::UniformCube => IncrementLaw::uniform_cube(mean).map_err(wrap),
            LawName::Deterministic => IncrementLaw::deterministic(mean).map_err(wrap),
        }
    }

    fn zero_mean_only(&self) -> Result<()> {
        if self.mean.iter().any(|&m| m != 0.0) {
            return Err(Error::config("mean", format!("law `{}` has zero mean", self.law.as_str())));
        }
        Ok(())
    }

    pub fn surrogate_count(&self) -> usize {
        if self.surrogate_replicas == 0 {
            self.replicas
        } else {
            self.surrogate_replicas
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |k: &str, m: &str| Err(Error::config(k, m));
        if self.replicas < 1 {
            return bad("replicas", "must be at least 1");
        }
        if self.n < 1 {
            return bad("n", "must be at least 1");
        }
        if self.dim < 1 {
            return bad("dim", "must be at least 1");
        }
        if !self.mean.is_empty() && self.mean.len() != self.dim {
            return bad("mean", "length must equal dim");
        }
        if self.mean.iter().any(|x| !x.is_finite()) {
            return bad("mean", "entries must be finite");
        }
        if self.directions < 1 {
            return bad("directions", "must be at least 1");
        }
        if self.surrogate_steps < 1 {
            return bad("surrogate_steps", "must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.time) {
            return bad("time", "must lie in [0, 1]");
        }
        for (k, v) in [
            ("ks_threshold", self.ks_threshold),
            ("abs_tolerance", self.abs_tolerance),
            ("rel_tolerance", self.rel_tolerance),
            ("ci_z", self.ci_z),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(k, "must be positive");
            }
        }
        self.cov_spec()?;
        self.increment_law()?;
        if self.functional == Functional::Occupation {
            match &self.region {
                Region::Cap { axis, .. } if axis.len() != self.dim => return bad("region", "axis length must equal dim"),
                Region::AxisBox { lower, upper } if lower.len() != self.dim || upper.len() != self.dim => {
                    return bad("region", "box bounds must have length dim")
                }
                _ => {}
            }
            let probe = crate::path_metrics::occupation(
                &crate::rw_engine::Trajectory::constant(TrajectoryKind::Step, &vec![1.0; self.dim]).unwrap(),
                &self.region,
            );
            if let Err(e) = probe {
                return Err(Error::config("region", e.to_string()));
            }
        }
        use ExperimentKind as E;
        use Functional as F;
        match self.experiment {
            E::Distributional => {
                if matches!(self.functional, F::Perimeter) {
                    return bad("functional", "perimeter is only available in lln_sweep");
                }
                if self.functional == F::Max && self.dim != 1 {
                    return bad("functional", "max needs dim = 1");
                }
                if matches!(self.functional, F::MeanWidth | F::SurfaceArea | F::Volume | F::HullTrio) && self.dim > 3 {
                    return bad("dim", "hull functionals run in dimensions 1 to 3");
                }
            }
            E::LlnSweep => {
                if self.n_list.is_empty() {
                    return bad("n_list", "must not be empty");
                }
                if self.n_list.contains(&0) || self.n_list.windows(2).any(|w| w[1] <= w[0]) {
                    return bad("n_list", "must be positive and strictly increasing");
                }
                match self.functional {
                    F::Max if self.dim != 1 => return bad("functional", "max needs dim = 1"),
                    F::Perimeter if self.dim != 2 => return bad("functional", "perimeter needs dim = 2"),
                    F::Max | F::Diameter | F::Perimeter | F::Com => {}
                    _ => return bad("functional", "no deterministic limit for this functional"),
                }
            }
            E::ComKernel => {
                if self.pairs.is_empty() {
                    return bad("pairs", "must not be empty");
                }
                if self
                    .pairs
                    .iter()
                    .any(|&(a, b)| !(a > 0.0 && a <= 1.0 && b > 0.0 && b <= 1.0))
                {
                    return bad("pairs", "times must lie in (0, 1]");
                }
            }
            E::Etemadi => {
                if self.x_grid.is_empty() {
                    return bad("x_grid", "must not be empty");
                }
                if self.x_grid.iter().any(|&x| !(x >= 0.0)) {
                    return bad("x_grid", "values must be nonnegative");
                }
            }
            E::HullDriftVolume => {
                if self.dim < 2 || self.dim > 3 {
                    return bad("dim", "drift volume runs in dimensions 2 and 3");
                }
                if self.mean_vec().iter().all(|&m| m == 0.0) {
                    return bad("mean", "drift must be nonzero");
                }
            }
            E::HullDetRatio => {
                if self.dim < 2 || self.dim > 3 {
                    return bad("dim", "determinant ratio runs in dimensions 2 and 3");
                }
                if self.law != LawName::Gaussian {
                    return bad("law", "determinant ratio compares two gaussian covariances");
                }
                self.cov_alt_spec()?;
            }
        }
        Ok(())
    }
}

fn cov_from(rows: &[Vec<f64>], dim: usize, key: &str) -> Result<CovSpec> {
    if rows.is_empty() {
        return Ok(CovSpec::identity(dim));
    }
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::config(key, "must be a dim x dim matrix"));
    }
    CovSpec::from_rows(rows).map_err(|e| Error::config(key, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_default() {
        let c = ExperimentConfig::default();
        assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn roundtrip_full() {
        let text = "experiment = hull_det_ratio\nlaw = gaussian\ndim = 2\ncov = 1, 0.5; 0.5, 2\n\
                    cov_alt = 4,0;0,1\npairs = 0.5,1; 1,1\nx_grid = 5, 10\nregion = box:0,0:1,1\nmean = 0.1, -0.3";
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(c.cov, vec![vec![1.0, 0.5], vec![0.5, 2.0]]);
        assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn unknown_key_named() {
        let e = ExperimentConfig::parse("replicaz = 3").unwrap_err();
        assert_eq!(e.config_key(), Some("replicaz"));
    }

    #[test]
    fn zero_replicas_named() {
        let e = ExperimentConfig::load("replicas = 0", &[]).unwrap_err();
        assert_eq!(e.config_key(), Some("replicas"));
    }

    #[test]
    fn override_after_parse() {
        let c = ExperimentConfig::load("replicas = 5", &["replicas=7".into()]).unwrap();
        assert_eq!(c.replicas, 7);
    }
}
