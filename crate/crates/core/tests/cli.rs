use std::fs;
use std::path::Path;
use std::process::Command;

use kickclock::analysis::cumulative;
use kickclock::cli::{read_series, sha256_hex, Manifest};
use kickclock::config_file::{load_config, parse_config};

const SMALL: &str = "\
mode = continuous

[region]
x_left = -5
x_right = 5

[clock]
omega = 0.6283185307179586
j = 8

[grid]
x_min = -50
x_max = 50
num_points = 512

[packet]
sigma = 1
x0 = -15
p0 = 3

[schedule]
t_final = 10
dt = 0.01

[analysis]
theta_points = 128

[guards]
max_region_occupancy = 0.5
";

fn small(mode: &str, extra_schedule: &str) -> String {
    SMALL
        .replace("mode = continuous", &format!("mode = {mode}"))
        .replace("dt = 0.01\n", &format!("dt = 0.01\n{extra_schedule}"))
}

fn kickclock(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_kickclock")).args(args).output().unwrap();
    (
        out.status.success(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run(config: &str, dir: &Path, extra: &[&str]) -> Manifest {
    let cfg_path = dir.with_extension("txt");
    fs::write(&cfg_path, config).unwrap();
    let mut args = vec!["run", "--config", cfg_path.to_str().unwrap(), "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    let (ok, _, err) = kickclock(&args);
    assert!(ok, "{err}");
    Manifest::load(dir).unwrap()
}

#[test]
fn outputs_are_identical_across_worker_counts() {
    let tmp = tempfile::tempdir().unwrap();
    for mode in ["continuous", "kicked"] {
        let cfg = small(mode, "kick_period = 2\n");
        let a = run(&cfg, &tmp.path().join(format!("{mode}-1")), &["--workers", "1"]);
        let b = run(&cfg, &tmp.path().join(format!("{mode}-4")), &["--workers", "4"]);
        let c = run(&cfg, &tmp.path().join(format!("{mode}-d")), &[]);
        assert_eq!(a.checksums(), b.checksums());
        assert_eq!(a.checksums(), c.checksums());
        assert_eq!(a.checksums().len(), 8);
        for (name, sum) in a.checksums() {
            let bytes = fs::read(tmp.path().join(format!("{mode}-4")).join(&name)).unwrap();
            assert_eq!(sha256_hex(&bytes), sum, "{name}");
        }
    }
}

#[test]
fn csv_masses_match_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("run");
    let manifest = run(&small("kicked", "kick_period = 2\n"), &dir, &[]);
    for name in ["tof_density.csv", "tof_transmitted.csv", "ideal_dwell.csv"] {
        let series = read_series(&dir.join(name), name).unwrap();
        let stated: f64 = manifest.get(&format!("mass.{name}")).unwrap().parse().unwrap();
        let mass = *cumulative(&series.times, &series.density).last().unwrap();
        assert!((mass - stated).abs() < 1e-9, "{name}: {mass} vs {stated}");
    }
    let text = fs::read_to_string(dir.join("tof_density.csv")).unwrap();
    assert!(text.starts_with("t,density,cdf\n"));
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 1 + 129);
}

#[test]
fn config_echo_reloads() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("run");
    let cfg = small("kicked", "kick_period = 2\n");
    run(&cfg, &dir, &["--kick-at-zero", "--theta-points", "256"]);
    let echoed = load_config(dir.join("config.txt")).unwrap();
    let mut expected = parse_config(&cfg).unwrap();
    expected.kick_at_zero = true;
    expected.theta_points = 256;
    assert_eq!(echoed, expected);
}

#[test]
fn ideal_mode_writes_reference_only() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("ideal");
    let manifest = run(&small("ideal-reference", ""), &dir, &[]);
    assert!(dir.join("ideal_dwell.csv").exists());
    assert!(!dir.join("tof_density.csv").exists());
    assert_eq!(manifest.get("mode"), Some("ideal-reference"));
}

#[test]
fn out_of_window_period_warns_but_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("slow");
    let manifest = run(&small("kicked", "kick_period = 5\n"), &dir, &[]);
    assert_eq!(manifest.get("regime.warnings"), Some("1"));
    assert!(manifest.get("regime.warning.1").unwrap().contains("outside the working window"));
    let regime = fs::read_to_string(dir.join("regime.txt")).unwrap();
    assert!(regime.contains("verdict.kick_window = FAIL"));
}

#[test]
fn compare_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();
    run(&small("continuous", ""), &root.join("c"), &[]);
    run(&small("ideal-reference", ""), &root.join("i"), &[]);
    for t in ["1.5", "2", "3"] {
        run(&small("kicked", &format!("kick_period = {t}\n")), &root.join(format!("k{t}")), &[]);
    }
    let p = |s: &str| root.join(s).to_str().unwrap().to_string();
    let (ok, stdout, err) = kickclock(&["compare", &p("c"), &p("k2"), &p("i"), "--out", &p("cmp")]);
    assert!(ok, "{err}");
    assert!(stdout.contains("kicked vs continuous"));
    let cdf = fs::read_to_string(root.join("cmp/compare_cdf.csv")).unwrap();
    assert_eq!(cdf.lines().next().unwrap(), "t,continuous,kicked T=2,ideal-reference");
    let table = fs::read_to_string(root.join("cmp/distances.csv")).unwrap();
    assert_eq!(table.lines().count(), 1 + 9);

    let (ok, _, err) = kickclock(&["compare", &p("k2"), &p("k2"), "--out", &p("same")]);
    assert!(ok, "{err}");
    let table = fs::read_to_string(root.join("same/distances.csv")).unwrap();
    for line in table.lines().skip(1) {
        assert!(line.ends_with(",0,0"), "{line}");
    }

    let (ok, stdout, err) =
        kickclock(&["compare", &p("k3"), &p("c"), &p("k1.5"), &p("k2"), "--out", &p("sweep")]);
    assert!(ok, "{err}");
    let sweep = fs::read_to_string(root.join("sweep/period_sweep.csv")).unwrap();
    let periods: Vec<&str> = sweep.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(periods, ["1.5", "2", "3"]);
    assert!(stdout.contains("grows with T"));
}

#[test]
fn validate_verdicts() {
    let (ok, out, _) = kickclock(&["validate", "--preset", "fig1-continuous"]);
    assert!(ok);
    assert!(out.contains("verdict.continuous_small_disturbance = FAIL"));
    assert!(out.contains("energy = 12.5"));

    let (ok, out, _) = kickclock(&["validate", "--preset", "high-energy-continuous"]);
    assert!(ok);
    assert!(out.contains("verdict.continuous_small_disturbance = PASS"));
    assert!(out.contains("energy = 312.5"));

    let (ok, out, _) = kickclock(&["validate", "--preset", "fig1-kicked-T20"]);
    assert!(ok);
    assert!(out.contains("verdict.kick_window = FAIL"));
}

#[test]
fn presets_and_errors() {
    let (ok, out, _) = kickclock(&["preset", "list"]);
    assert!(ok);
    assert!(out.contains("fig1-continuous") && out.contains("fig1-kicked-T1"));

    let (ok, out, _) = kickclock(&["preset", "show", "fig1-kicked-T1"]);
    assert!(ok);
    let cfg = parse_config(&out).unwrap();
    assert_eq!(cfg.kick_period, Some(1.0));
    assert_eq!((cfg.region.x_left, cfg.region.x_right), (-25.0, 25.0));

    let tmp = tempfile::tempdir().unwrap();
    let empty = tmp.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    let (ok, _, err) = kickclock(&["validate", "--config", empty.to_str().unwrap()]);
    assert!(!ok);
    assert!(err.contains("mode"), "{err}");

    let bad = tmp.path().join("bad.txt");
    fs::write(&bad, "mode = continuous\n[clock]\nspin = 3\n").unwrap();
    let (ok, _, err) = kickclock(&["validate", "--config", bad.to_str().unwrap()]);
    assert!(!ok);
    assert!(err.contains("line 3"), "{err}");

    let (ok, _, _) = kickclock(&["validate", "--preset", "no-such-preset"]);
    assert!(!ok);
}
