//! End-to-end runs of the `cuspidal` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cuspidal::model::{parse_geometry_config, Geometry};
use tempfile::TempDir;

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspidal"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Path, args: &[&str]) -> i32 {
    run(out, args).status.code().expect("exit code")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn inverse_kinematics_prints_and_writes_lengths() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["ik", "--b1x", "3", "--b1y", "4", "--tx", "1", "--ty", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("r1 = 5"));
    let csv = read(dir.path(), "ik.csv");
    assert_eq!(csv.lines().next(), Some("B1x,B1y,tx,ty,r1,r2,r3"));
    assert!(read(dir.path(), "run_manifest.txt").contains("exit_code = 0"));
}

#[test]
fn direct_kinematics_writes_the_assembly_modes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(dir.path(), &["dk", "--r1", "13.02", "--r2", "15.99", "--r3", "15.75"]), 0);
    let csv = read(dir.path(), "dk.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("B1x,B1y,tx,ty,box_width"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn singular_joint_vector_is_reported_incomplete() {
    let dir = TempDir::new().unwrap();
    let args = ["dk", "--r1", "14.98", "--r2", "0.8452820182831489", "--r3", "3.7779158004792506"];
    assert_eq!(code(dir.path(), &args), 2);
    assert!(read(dir.path(), "run_manifest.txt").contains("exit_code = 2"));
}

#[test]
fn usage_and_configuration_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let missing = d.join("nope.cfg");
    let missing = missing.to_str().unwrap();
    assert_eq!(code(d, &["--geometry", missing, "cusps", "--r1", "1"]), 1);
    let cfg = d.join("g.cfg");
    fs::write(&cfg, Geometry::benchmark().to_config_string()).unwrap();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(code(d, &["--geometry", cfg, "--d1", "3", "cusps", "--r1", "1"]), 1);
    assert_eq!(code(d, &["cusps", "--r1", "abc"]), 1);
    assert_eq!(code(d, &["cusps", "--r1", "-1"]), 1);
    assert_eq!(code(d, &["slice", "--r1", "1", "--grid", "1"]), 1);
    assert_eq!(code(d, &["profile", "--range", "5:5", "--step", "0.1"]), 1);
    assert_eq!(code(d, &["--min-width", "0", "cusps", "--r1", "1"]), 1);
    assert_eq!(code(d, &["--threads", "0", "cusps", "--r1", "1"]), 1);
    assert_eq!(code(d, &[]), 1);
    assert_eq!(code(d, &["--help"]), 0);
    fs::write(d.join("bad.cfg"), "A2x = 1\n").unwrap();
    assert_eq!(code(d, &["--geometry", d.join("bad.cfg").to_str().unwrap(), "cusps", "--r1", "1"]), 1);
}

#[test]
fn dumped_configuration_reads_back_exactly() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(dir.path(), &["--dump-config", "ik", "--b1x", "1", "--b1y", "1", "--alpha", "10"]), 0);
    let g = parse_geometry_config(&read(dir.path(), "geometry.cfg")).unwrap();
    assert_eq!(g, Geometry::benchmark());

    let other = TempDir::new().unwrap();
    let args = ["--a2x", "11", "--a3x", "7", "--a3y", "10", "--d1", "5", "--d2", "6", "--d3", "5", "--beta-sign", "-1"];
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--dump-config", "ik", "--b1x", "1", "--b1y", "1", "--alpha", "10"]);
    assert_eq!(code(other.path(), &full), 0);
    let text = read(other.path(), "geometry.cfg");
    let g = parse_geometry_config(&text).unwrap();
    assert_eq!(parse_geometry_config(&g.to_config_string()).unwrap(), g);
    assert!(g.beta_y < cuspidal::numeric::Rational::from_integer(0.into()));
    let again = TempDir::new().unwrap();
    let path = other.path().join("geometry.cfg");
    assert_eq!(
        code(again.path(), &["--geometry", path.to_str().unwrap(), "--dump-config", "ik", "--b1x", "1", "--b1y", "1", "--alpha", "10"]),
        0
    );
    assert_eq!(read(again.path(), "geometry.cfg"), text);
}

#[test]
fn dumped_system_states_the_degree_multiset() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(dir.path(), &["--dump-system", "ik", "--b1x", "1", "--b1y", "1", "--alpha", "0"]), 0);
    let text = read(dir.path(), "system.txt");
    assert!(text.contains("# equations: 9"));
    assert!(text.contains("# degree multiset: {2,2,2,2,3,5,5,5,5}"));
}

#[test]
fn cusp_and_slice_outputs_are_identical_across_thread_counts() {
    let one = TempDir::new().unwrap();
    let many = TempDir::new().unwrap();
    for (dir, threads) in [(&one, "1"), (&many, "8")] {
        assert_eq!(code(dir.path(), &["--threads", threads, "cusps", "--r1", "5"]), 0);
        assert_eq!(code(dir.path(), &["--threads", threads, "slice", "--r1", "5", "--grid", "8"]), 0);
    }
    for name in ["cusps_r1=5.csv", "slice_r1=5.csv", "slice_r1=5.svg"] {
        let a = fs::read(one.path().join(name)).unwrap();
        let b = fs::read(many.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs");
    }
    let cusps = read(one.path(), "cusps_r1=5.csv");
    assert_eq!(cusps.lines().next(), Some("r1,r2,r3,B1x,B1y,tx,ty,box_width"));
    assert_eq!(cusps.lines().count(), 7);
    assert_eq!(read(one.path(), "slice_r1=5.csv").lines().next(), Some("segment_id,r2,r3"));
    assert!(read(one.path(), "slice_r1=5.svg").starts_with("<svg"));
}

#[test]
fn profile_on_a_constant_range_has_one_row() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(dir.path(), &["profile", "--range", "34:35", "--step", "0.5"]), 0);
    let csv = read(dir.path(), "profile.csv");
    assert_eq!(csv, "interval_lo,interval_hi,count\n34,35,4\n");
    assert_eq!(read(dir.path(), "breakpoints.csv").lines().count(), 1);
    assert_eq!(read(dir.path(), "excluded_samples.csv").lines().count(), 1);
    let manifest = read(dir.path(), "run_manifest.txt");
    assert!(manifest.contains("step = 0.5"));
}
