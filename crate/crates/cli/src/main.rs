//! `rwlimit`: batch frontend for walks, path metrics, hulls and experiments.
//!
//! Exit status: 0 on success, 1 on runtime failure, 2 on configuration or
//! usage errors.

mod io;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rwlimit::experiments::{run, ExperimentConfig, Report};
use rwlimit::hull_geometry::{body_diameter, convex_hull, mean_width, surface_area, volume, PointSet};
use rwlimit::path_metrics::{rho_inf, rho_skorokhod, rho_skorokhod_circ, MetricResult};
use rwlimit::rw_engine::{clt_trajectory, lln_trajectory, sample_walk, Trajectory, TrajectoryKind};
use rwlimit::{fixtures, Error};

use io::{read_table, write_atomic, OutputDir};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "RWLIMIT_OUT_DIR";

#[derive(Parser)]
#[command(name = "rwlimit", version, about = "Random-walk limit theorems, computed")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one walk and write its rescaled trajectory.
    Simulate(RunArgs),
    /// Distances between two paths.
    Metric(MetricArgs),
    /// Convex hull functionals of a point file.
    Hull(HullArgs),
    /// Run a Monte Carlo experiment and write its report.
    Experiment(RunArgs),
    /// Print a written report.
    Report(ReportArgs),
    /// List bundled fixtures and configurations.
    Examples(ExamplesArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Configuration file.
    #[arg(long, conflicts_with = "name")]
    config: Option<PathBuf>,
    /// Bundled configuration name (see `examples`).
    #[arg(long)]
    name: Option<String>,
    /// `key=value` override applied after the file, before validation.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory; defaults to $RWLIMIT_OUT_DIR, then the config's `output`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed override.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct MetricArgs {
    /// Built-in pair: `paper-2.1` or `paper-2.2`.
    #[arg(long, conflicts_with_all = ["f", "g"])]
    example: Option<String>,
    /// CSV path with columns `t,x1,...,xd`.
    #[arg(long, requires = "g")]
    f: Option<PathBuf>,
    #[arg(long, requires = "f")]
    g: Option<PathBuf>,
    /// Interpolation of the CSV paths.
    #[arg(long, default_value = "step")]
    kind: String,
}

#[derive(Args)]
struct HullArgs {
    /// CSV of points, one per row; the origin is added when missing.
    #[arg(long)]
    points: PathBuf,
    /// Sphere directions for mean width and surface estimates.
    #[arg(long, default_value_t = 1024)]
    directions: usize,
}

#[derive(Args)]
struct ReportArgs {
    /// Output directory of an experiment run.
    dir: PathBuf,
    /// Exit 1 when any check failed.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct ExamplesArgs {
    /// Print the named fixture or configuration.
    #[arg(long)]
    show: Option<String>,
}

/// Failure with its exit status.
enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. } => Failure::Config(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Metric(a) => metric(a),
        Command::Hull(a) => hull(a),
        Command::Experiment(a) => experiment(a),
        Command::Report(a) => report(a),
        Command::Examples(a) => examples(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn load_config(a: &RunArgs) -> Result<ExperimentConfig, Failure> {
    let text = match (&a.config, &a.name) {
        (Some(path), _) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("config error at `config`: {}: {e}", path.display())))?,
        (None, Some(name)) => fixtures::config(name)
            .ok_or_else(|| Failure::Config(format!("config error at `name`: no bundled config `{name}`")))?
            .to_string(),
        (None, None) => String::new(),
    };
    let mut overrides = a.overrides.clone();
    if let Some(seed) = a.seed {
        overrides.push(format!("seed={seed}"));
    }
    let mut cfg = ExperimentConfig::load(&text, &overrides)?;
    cfg.output = resolve_out(a.out.as_deref(), &cfg.output);
    Ok(cfg)
}

fn resolve_out(flag: Option<&Path>, configured: &str) -> String {
    if let Some(p) = flag {
        return p.display().to_string();
    }
    match std::env::var(OUT_DIR_ENV) {
        Ok(v) if !v.is_empty() => v,
        _ => configured.to_string(),
    }
}

fn runtime(e: std::io::Error) -> Failure {
    Failure::Runtime(e.to_string())
}

fn simulate(a: RunArgs) -> CliResult {
    let cfg = load_config(&a)?;
    let law = cfg.increment_law()?;
    let walk = sample_walk(&law, cfg.n, cfg.seed)?;
    let lln = lln_trajectory(&walk, cfg.trajectory);
    let clt = clt_trajectory(&walk, cfg.trajectory, &law.mean())?;
    let d = walk.dim();
    let mut csv = String::from("k,t");
    for prefix in ["s", "x", "y"] {
        for c in 1..=d {
            csv.push_str(&format!(",{prefix}{c}"));
        }
    }
    csv.push('\n');
    for k in 0..=walk.len() {
        csv.push_str(&format!("{k},{}", lln.times()[k]));
        for row in [walk.sum(k), lln.value(k), clt.value(k)] {
            for v in row {
                csv.push_str(&format!(",{v}"));
            }
        }
        csv.push('\n');
    }
    let out = OutputDir::create(&cfg.output).map_err(runtime)?;
    write_atomic(&out.path("walk.csv"), &csv).map_err(runtime)?;
    write_atomic(&out.path("manifest.cfg"), &cfg.to_text()).map_err(runtime)?;
    println!("wrote {}", out.path("walk.csv").display());
    Ok(())
}

/// Fixed-point rendering without trailing zeros, so `0.05000000000000004`
/// prints as `0.05`.
fn trim(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn print_metric(label: &str, r: &MetricResult) {
    print!("{label}={}", trim(r.value));
    if r.mode != rwlimit::MetricMode::Exact {
        print!(" ({})", r.mode.as_str());
    }
    println!();
}

fn metric(a: MetricArgs) -> CliResult {
    let named = |n: &str| -> Trajectory {
        match n {
            "f" => fixtures::example_f(),
            "g" => fixtures::example_g(),
            _ => fixtures::example_h(),
        }
    };
    match (a.example.as_deref(), &a.f, &a.g) {
        (Some("paper-2.1"), _, _) => {
            for (x, y) in [("f", "g"), ("f", "h")] {
                let (p, q) = (named(x), named(y));
                println!("rho_inf({x},{y})={}", trim(rho_inf(&p, &q)?));
                print_metric(&format!("rho_S({x},{y})"), &rho_skorokhod(&p, &q)?);
            }
            Ok(())
        }
        (Some("paper-2.2"), _, _) => {
            let (f, h) = (named("f"), named("h"));
            let r = rho_skorokhod(&f, &h)?;
            print_metric("rho_S(f,h)", &r);
            if let Some(w) = &r.witness {
                println!("lambda(0.5)={}", trim(w.eval(0.5)));
                println!("|lambda-I|={}", trim(w.sup_distance_to_identity()));
            }
            let l = fixtures::example_lambda();
            println!("|lambda|o={}", trim(rwlimit::path_metrics::lambda_circ_norm(&l)));
            println!("c(lambda)={}", trim(rwlimit::path_metrics::c_lambda(&l)));
            Ok(())
        }
        (Some(other), _, _) => Err(Failure::Config(format!(
            "config error at `example`: unknown example `{other}` (expected paper-2.1 or paper-2.2)"
        ))),
        (None, Some(fp), Some(gp)) => {
            let kind: TrajectoryKind = a
                .kind
                .parse()
                .map_err(|_| Failure::Config(format!("config error at `kind`: unknown kind `{}`", a.kind)))?;
            let f = io::read_trajectory(fp, kind)?;
            let g = io::read_trajectory(gp, kind)?;
            println!("rho_inf={}", trim(rho_inf(&f, &g)?));
            print_metric("rho_S", &rho_skorokhod(&f, &g)?);
            print_metric("rho_S_circ", &rho_skorokhod_circ(&f, &g)?);
            Ok(())
        }
        _ => Err(Failure::Config("config error at `example`: give --example or both --f and --g".into())),
    }
}

fn hull(a: HullArgs) -> CliResult {
    let (dim, coords) = read_table(&a.points)?;
    let points = PointSet::with_origin(dim, coords)?;
    let body = convex_hull(&points);
    let w = mean_width(&body, a.directions)?;
    let s = surface_area(&body, a.directions)?;
    let v = volume(&body);
    println!("dim={dim} points={} vertices={}", points.len(), body.vertex_count());
    println!("affine_dim={}", body.affine_dim());
    println!("diameter={}", trim(body_diameter(&body)));
    println!("mean_width={} stderr={}", trim(w.value), trim(w.stderr));
    println!("surface_area={} stderr={}", trim(s.value), trim(s.stderr));
    println!("volume={} stderr={}", trim(v.value), trim(v.stderr));
    Ok(())
}

fn write_report(cfg: &ExperimentConfig, r: &Report) -> Result<OutputDir, Failure> {
    let out = OutputDir::create(&cfg.output).map_err(runtime)?;
    write_atomic(&out.path("report.csv"), &r.to_csv()).map_err(runtime)?;
    write_atomic(&out.path("summary.txt"), &r.summary()).map_err(runtime)?;
    write_atomic(&out.path("manifest.cfg"), &cfg.to_text()).map_err(runtime)?;
    if cfg.dump_samples {
        for s in &r.samples {
            write_atomic(&out.path(&format!("samples_{}.csv", s.name)), &Report::samples_csv(s)).map_err(runtime)?;
        }
    }
    Ok(out)
}

fn experiment(a: RunArgs) -> CliResult {
    let cfg = load_config(&a)?;
    let r = run(&cfg)?;
    let out = write_report(&cfg, &r)?;
    print!("{}", r.summary());
    println!("wrote {}", out.path("report.csv").display());
    Ok(())
}

fn report(a: ReportArgs) -> CliResult {
    let path = a.dir.join("report.csv");
    let text = std::fs::read_to_string(&path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    let summary = a.dir.join("summary.txt");
    if let Ok(s) = std::fs::read_to_string(&summary) {
        print!("{s}");
    } else {
        print!("{text}");
    }
    let failed = text.lines().skip(1).filter(|l| l.split(',').nth(5) == Some("fail")).count();
    println!("failed rows: {failed}");
    if a.strict && failed > 0 {
        return Err(Failure::Runtime(format!("{failed} failed checks")));
    }
    Ok(())
}

fn examples(a: ExamplesArgs) -> CliResult {
    let Some(name) = a.show else {
        // A closed pipe (`rwlimit examples | head`) is not an error.
        let mut stdout = std::io::stdout().lock();
        for item in fixtures::listing() {
            if writeln!(stdout, "{item}").is_err() {
                break;
            }
        }
        return Ok(());
    };
    let path = |f: Trajectory| {
        let mut s = String::from("t,x1\n");
        for k in 0..f.len() {
            s.push_str(&format!("{},{}\n", f.times()[k], f.value(k)[0]));
        }
        s
    };
    match name.as_str() {
        "paper-2.1-f" => print!("{}", path(fixtures::example_f())),
        "paper-2.1-g" => print!("{}", path(fixtures::example_g())),
        "paper-2.1-h" => print!("{}", path(fixtures::example_h())),
        "paper-2.2-lambda" => {
            let l = fixtures::example_lambda();
            println!("t,lambda");
            for (t, s) in l.times().iter().zip(l.images()) {
                println!("{t},{s}");
            }
        }
        "segment" => print!("{}", path(fixtures::segment(&[1.0]))),
        other => {
            let key = other.strip_prefix("config:").unwrap_or(other);
            let text = fixtures::config(key)
                .ok_or_else(|| Failure::Config(format!("config error at `show`: unknown example `{other}`")))?;
            print!("{text}");
        }
    }
    Ok(())
}
