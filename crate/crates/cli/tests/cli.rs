use std::path::Path;
use std::process::{Command, Output};

fn rwlimit(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rwlimit"));
    cmd.args(args).env_remove("RWLIMIT_OUT_DIR");
    if let Some(dir) = env_out {
        cmd.env("RWLIMIT_OUT_DIR", dir);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL: [&str; 4] = ["--set", "n=400", "--set", "replicas=500"];

#[test]
fn experiment_writes_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let mut args = vec!["experiment", "--name", "com_kernel", "--out", out.to_str().unwrap()];
    args.extend(SMALL);
    let o = rwlimit(&args, None);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(csv.starts_with("name,estimate,stderr,reference,ks,pass,threshold\n"));
    assert!(csv.contains("\ncov_0.5_1,"));
    assert!(out.join("summary.txt").exists());
    let manifest = std::fs::read_to_string(out.join("manifest.cfg")).unwrap();
    assert!(manifest.contains("replicas = 500"));
}

#[test]
fn manifest_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let mut args = vec!["experiment", "--name", "max_clt", "--out", a.to_str().unwrap()];
    args.extend(SMALL);
    assert!(rwlimit(&args, None).status.success());
    let manifest = a.join("manifest.cfg");
    let o = rwlimit(&["experiment", "--config", manifest.to_str().unwrap(), "--out", b.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let ra = std::fs::read(a.join("report.csv")).unwrap();
    let rb = std::fs::read(b.join("report.csv")).unwrap();
    assert_eq!(ra, rb);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["experiment", "--name", "max_clt"];
    args.extend(SMALL);
    let o = rwlimit(&args, Some(dir.path()));
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("report.csv").exists());
}

#[test]
fn invalid_config_exits_2_naming_key() {
    let dir = tempfile::tempdir().unwrap();
    let o = rwlimit(
        &["experiment", "--name", "com_kernel", "--set", "replicas=0", "--out", dir.path().to_str().unwrap()],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("replicas"));
    assert!(!dir.path().join("report.csv").exists());

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "experiment = distributional\nfrobnicate = 3\n").unwrap();
    let o = rwlimit(&["experiment", "--config", bad.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("frobnicate"));
}

#[test]
fn metric_examples() {
    let o = rwlimit(&["metric", "--example", "paper-2.2"], None);
    assert!(o.status.success());
    assert!(stdout(&o).contains("rho_S(f,h)=0.05\n"));
    let o = rwlimit(&["metric", "--example", "paper-2.1"], None);
    let s = stdout(&o);
    for line in ["rho_inf(f,g)=0.2", "rho_S(f,g)=0.2", "rho_inf(f,h)=0.95", "rho_S(f,h)=0.05"] {
        assert!(s.lines().any(|l| l == line), "{s}");
    }
    assert_eq!(rwlimit(&["metric", "--example", "nope"], None).status.code(), Some(2));
}

#[test]
fn metric_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.csv");
    let g = dir.path().join("g.csv");
    std::fs::write(&f, "t,x\n0,1\n0.5,0\n1,0\n").unwrap();
    std::fs::write(&g, "t,x\n0,0.95\n0.49,0.05\n1,0.05\n").unwrap();
    let o = rwlimit(&["metric", "--f", f.to_str().unwrap(), "--g", g.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("rho_S=0.05\n"));
    assert!(stdout(&o).contains("rho_inf=0.95\n"));
}

#[test]
fn hull_of_square() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.csv");
    std::fs::write(&p, "x,y\n1,0\n0,1\n1,1\n0.5,0.5\n").unwrap();
    let o = rwlimit(&["hull", "--points", p.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("vertices=4") && s.contains("volume=1 ") && s.contains("surface_area=4 "), "{s}");
}

#[test]
fn examples_listing_and_show() {
    let o = rwlimit(&["examples"], None);
    let s = stdout(&o);
    assert!(s.lines().any(|l| l == "paper-2.1-f"));
    assert!(s.lines().any(|l| l == "config:com_kernel"));
    let o = rwlimit(&["examples", "--show", "config:etemadi_d1"], None);
    assert!(stdout(&o).contains("experiment = etemadi"));
    assert_eq!(rwlimit(&["examples", "--show", "missing"], None).status.code(), Some(2));
}

#[test]
fn report_strict_flags_failures() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("report.csv"),
        "name,estimate,stderr,reference,ks,pass,threshold\nx,1,,0,,fail,0.1\n",
    )
    .unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(rwlimit(&["report", d], None).status.success());
    assert_eq!(rwlimit(&["report", d, "--strict"], None).status.code(), Some(1));
}

#[test]
fn simulate_writes_walk() {
    let dir = tempfile::tempdir().unwrap();
    let o = rwlimit(&["simulate", "--set", "n=10", "--seed", "3", "--out", dir.path().to_str().unwrap()], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("walk.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12);
    assert!(csv.starts_with("k,t,s1,x1,y1\n"));
}
