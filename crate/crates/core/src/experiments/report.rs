//! Report rows, CSV serialization and provenance.

use std::fmt::Write as _;
use std::time::Duration;

use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;

/// Outcome of a thresholded check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Not applicable or undefined (for example KS with one replica).
    Na,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Na => "na",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// One statistic of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub estimate: f64,
    pub stderr: Option<f64>,
    pub reference: Option<f64>,
    pub ks: Option<f64>,
    pub verdict: Verdict,
    /// Always present when the verdict is pass or fail.
    pub threshold: Option<f64>,
}

impl Row {
    /// A row without a check.
    pub fn info(name: impl Into<String>, estimate: f64, stderr: Option<f64>, reference: Option<f64>) -> Self {
        Row {
            name: name.into(),
            estimate,
            stderr: stderr.filter(|s| s.is_finite()),
            reference,
            ks: None,
            verdict: Verdict::Na,
            threshold: None,
        }
    }

    /// Attaches a check; `None` for `ok` records an undefined outcome.
    pub fn checked(mut self, ok: Option<bool>, threshold: f64) -> Self {
        self.verdict = ok.map_or(Verdict::Na, Verdict::from_bool);
        self.threshold = Some(threshold);
        self
    }

    pub fn with_ks(mut self, ks: Option<f64>) -> Self {
        self.ks = ks;
        self
    }
}

/// Per-replica values kept for optional dumping.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSeries {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub experiment: String,
    pub rows: Vec<Row>,
    pub seed: u64,
    pub config_hash: String,
    pub runtime: Duration,
    pub samples: Vec<SampleSeries>,
    pub notes: Vec<String>,
}

pub const CSV_HEADER: &str = "name,estimate,stderr,reference,ks,pass,threshold";

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// SHA-256 of the canonical config text, lower-case hex.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let digest = Sha256::digest(cfg.to_text().as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl Report {
    pub fn new(cfg: &ExperimentConfig) -> Self {
        Report {
            experiment: cfg.experiment.as_str().to_string(),
            rows: Vec::new(),
            seed: cfg.seed,
            config_hash: config_hash(cfg),
            runtime: Duration::ZERO,
            samples: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn row(&self, name: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.name == name)
    }

    /// True when no row failed.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.verdict != Verdict::Fail)
    }

    /// CSV body; contains no timing so reruns are byte-identical.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.name,
                r.estimate,
                cell(r.stderr),
                cell(r.reference),
                cell(r.ks),
                r.verdict.as_str(),
                cell(r.threshold)
            );
        }
        s
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment: {}", self.experiment);
        let _ = writeln!(s, "seed: {}", self.seed);
        let _ = writeln!(s, "config_sha256: {}", self.config_hash);
        let _ = writeln!(s, "runtime_s: {:.3}", self.runtime.as_secs_f64());
        let fails = self.rows.iter().filter(|r| r.verdict == Verdict::Fail).count();
        let checks = self.rows.iter().filter(|r| r.verdict != Verdict::Na).count();
        let _ = writeln!(s, "checks: {checks}, failed: {fails}");
        for r in &self.rows {
            let _ = write!(s, "  {:<28} {:>14.6}", r.name, r.estimate);
            if let Some(se) = r.stderr {
                let _ = write!(s, " ± {se:.2e}");
            }
            if let Some(x) = r.reference {
                let _ = write!(s, "  ref {x:.6}");
            }
            if let Some(k) = r.ks {
                let _ = write!(s, "  ks {k:.4}");
            }
            if let Some(t) = r.threshold {
                let _ = write!(s, "  [{} @ {t}]", r.verdict.as_str());
            }
            s.push('\n');
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }

    /// `sample_id,value` CSV for one series.
    pub fn samples_csv(series: &SampleSeries) -> String {
        let mut s = String::from("sample_id,value\n");
        for (i, v) in series.values.iter().enumerate() {
            let _ = writeln!(s, "{i},{v}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_cells() {
        let mut r = Report::new(&ExperimentConfig::default());
        r.rows.push(Row::info("a", 0.5, Some(0.1), None));
        r.rows.push(Row::info("b", 1.0, None, Some(2.0)).with_ks(Some(0.01)).checked(Some(true), 0.05));
        r.rows.push(Row::info("c", 1.0, Some(f64::NAN), None).checked(None, 0.05));
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "a,0.5,0.1,,,na,");
        assert_eq!(lines[2], "b,1,,2,0.01,pass,0.05");
        assert_eq!(lines[3], "c,1,,,,na,0.05");
        assert!(r.passed());
        assert_eq!(r.config_hash.len(), 64);
    }
}
