//! File input and atomic output.

use std::io::Write;
use std::path::{Path, PathBuf};

use rwlimit::{Trajectory, TrajectoryKind};

use crate::Failure;

pub struct OutputDir(PathBuf);

impl OutputDir {
    pub fn create(path: &str) -> std::io::Result<Self> {
        std::fs::create_dir_all(path)?;
        Ok(OutputDir(PathBuf::from(path)))
    }

    pub fn path(&self, file: &str) -> PathBuf {
        self.0.join(file)
    }
}

/// Writes through a temporary file in the same directory, then renames, so
/// readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Numeric CSV with a header row; returns the column count and the values
/// row-major.
pub fn read_table(path: &Path) -> Result<(usize, Vec<f64>), Failure> {
    let bad = |msg: String| Failure::Config(format!("config error at `{}`: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    let cols = reader.headers().map_err(|e| bad(e.to_string()))?.len();
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        for field in record.iter() {
            let v: f64 = field.parse().map_err(|_| bad(format!("row {}: `{field}` is not a number", i + 1)))?;
            values.push(v);
        }
    }
    if cols == 0 || values.is_empty() {
        return Err(bad("no data rows".into()));
    }
    Ok((cols, values))
}

/// Path CSV with columns `t,x1,...,xd`.
pub fn read_trajectory(path: &Path, kind: TrajectoryKind) -> Result<Trajectory, Failure> {
    let (cols, values) = read_table(path)?;
    if cols < 2 {
        return Err(Failure::Config(format!(
            "config error at `{}`: need a time column and at least one coordinate",
            path.display()
        )));
    }
    let d = cols - 1;
    let mut times = Vec::with_capacity(values.len() / cols);
    let mut coords = Vec::with_capacity(values.len() / cols * d);
    for row in values.chunks(cols) {
        times.push(row[0]);
        coords.extend_from_slice(&row[1..]);
    }
    Ok(Trajectory::new(kind, d, times, coords)?)
}
