use std::path::PathBuf;
use std::process::{Command, Output};

use core::f64::consts::{FRAC_PI_2, PI};
use ga_singular::{parse_robot_file, to_robot_file};
use ga_singular_core::kinematics::JointKind;
use proptest::prelude::*;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ga-singular"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// CSV body as a list of (column → value) rows.
fn csv_rows(text: &str) -> Vec<Vec<(String, String)>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("ga-singular/1"));
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    lines
        .map(|l| header.iter().cloned().zip(l.split(',').map(String::from)).collect())
        .collect()
}

fn field<'a>(row: &'a [(String, String)], name: &str) -> &'a str {
    &row.iter().find(|(k, _)| k == name).unwrap_or_else(|| panic!("no column {name}")).1
}

fn q_arg(q: &[f64]) -> String {
    q.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(",")
}

const KUKA_SINGULAR: &str = "0.3,0.7,-0.2,0,1.1,0.4,-0.9";
const KUKA_GENERIC: &str = "0.2,0.5,0.4,-1.1,0.3,0.9,0.7";

#[test]
fn fixtures_parse_and_round_trip() {
    for name in ["kuka_lwr4.robot", "generic_6r.robot", "planar_3r.robot"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let f = parse_robot_file(&text).unwrap();
        let again = parse_robot_file(&to_robot_file(&f.model, &f.singularities)).unwrap();
        assert_eq!(again, f, "{name}");
    }
    let kuka = parse_robot_file(&std::fs::read_to_string(fixture("kuka_lwr4.robot")).unwrap()).unwrap();
    assert_eq!(kuka.model.dof(), 7);
    assert!(kuka.model.joints().iter().all(|j| j.kind == JointKind::Revolute));
    assert!(kuka.model.spherical_wrist());
    let names: Vec<&str> = kuka.singularities.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["q4-zero", "q2-q3-half-pi", "q6-zero"]);
    assert_eq!(kuka.singularities[1].values, vec![(1, FRAC_PI_2), (2, FRAC_PI_2)]);
}

#[test]
fn check_exit_codes() {
    let kuka = fixture("kuka_lwr4.robot");
    let kuka = kuka.to_str().unwrap();

    let o = run(&["check", kuka, KUKA_SINGULAR]);
    assert_eq!(o.status.code(), Some(2));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(field(&rows[0], "kind"), "position");
    assert_eq!(field(&rows[0], "d_q4-zero"), "0.0000000000000000e0");

    let o = run(&["check", kuka, KUKA_GENERIC]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(field(&rows[0], "kind"), "none");
    assert!(field(&rows[0], "sigma_min").parse::<f64>().unwrap() > 0.1);

    for bad in [
        vec!["check", kuka, "0.1,0.2"],
        vec!["check", kuka, "0.1,0.2,x,0,0,0,0"],
        vec!["check", "/nonexistent.robot", KUKA_GENERIC],
        vec!["check", kuka],
        vec!["--tol", "-1", "check", kuka, KUKA_GENERIC],
        vec!["--format", "xml", "check", kuka, KUKA_GENERIC],
        vec!["frobnicate"],
    ] {
        let o = run(&bad);
        assert_eq!(o.status.code(), Some(1), "{bad:?}");
        assert!(o.stdout.is_empty(), "{bad:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn syntax_and_semantic_diagnostics() {
    let dir = std::env::temp_dir().join(format!("ga-singular-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.robot");
    std::fs::write(&empty, "").unwrap();
    let o = run(&["check", empty.to_str().unwrap(), "0"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("syntax error") && err.contains("[robot]"), "{err}");

    let limits = dir.join("limits.robot");
    std::fs::write(
        &limits,
        "[robot]\nname = \"x\"\n\n[[joint]]\nkind = \"revolute\"\na = 1\nalpha = 0\nd = 0\nlimits = [1, -1]\n",
    )
    .unwrap();
    let o = run(&["check", limits.to_str().unwrap(), "0"]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(o.status.code(), Some(1));
    assert!(err.contains(":4:1: invalid robot: joint 1"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn jsonl_records_parse() {
    let kuka = fixture("kuka_lwr4.robot");
    let o = run(&["--format", "jsonl", "check", kuka.to_str().unwrap(), KUKA_SINGULAR]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("ga-singular/1"));
    let v: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(v["kind"], "position");
    assert_eq!(v["singular"], true);
    assert_eq!(v["w_c"], "inf");
    assert_eq!(v["q4"], 0.0);
    assert!(lines.next().is_none());
}

#[test]
fn orientation_sweep_flags_only_the_zero_row() {
    let kuka = fixture("kuka_lwr4.robot");
    let o = run(&["sweep", kuka.to_str().unwrap(), "--free", "6:-0.1:0.1:0.01", "--fixed", KUKA_GENERIC]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 21);
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(field(row, "i_q6"), k.to_string());
        let q6: f64 = field(row, "q6").parse().unwrap();
        let flagged = field(row, "kind") == "orientation";
        assert_eq!(flagged, q6.abs() < 1e-9, "q6 = {q6}");
        assert_eq!(field(row, "singular") == "true", flagged);
    }
}

#[test]
fn shoulder_sweep_clusters_at_half_pi() {
    let kuka = fixture("kuka_lwr4.robot");
    let step = 0.025;
    let axis = |j: usize| format!("{j}:{:e}:{:e}:{step}", FRAC_PI_2 - 2.0 * step, FRAC_PI_2 + 2.0 * step);
    let o = run(&[
        "sweep",
        kuka.to_str().unwrap(),
        "--free",
        &axis(2),
        "--free",
        &axis(3),
        "--fixed",
        KUKA_GENERIC,
    ]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 25);
    let flagged: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| field(r, "kind") == "position")
        .map(|r| (field(r, "q2").parse().unwrap(), field(r, "q3").parse().unwrap()))
        .collect();
    assert!(!flagged.is_empty());
    let n = flagged.len() as f64;
    let centroid = (
        flagged.iter().map(|p| p.0).sum::<f64>() / n,
        flagged.iter().map(|p| p.1).sum::<f64>() / n,
    );
    assert!((centroid.0 - FRAC_PI_2).abs() < 1e-9 && (centroid.1 - FRAC_PI_2).abs() < 1e-9);
}

#[test]
fn sweep_edge_cases() {
    let planar = fixture("planar_3r.robot");
    let p = planar.to_str().unwrap();
    let o = run(&["sweep", p, "--free", "2:1:0:0.1", "--fixed", "0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
    let o = run(&["--format", "jsonl", "sweep", p, "--free", "2:1:0:0.1", "--fixed", "0,0,0"]);
    assert_eq!(stdout(&o), "ga-singular/1\n");

    let o = run(&["sweep", p, "--free", "1:0:1:1e-4", "--free", "2:0:1:1e-4", "--fixed", "0,0,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());

    let o = run(&["sweep", p, "--free", "1:0:1:0", "--fixed", "0,0,0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["sweep", p, "--free", "4:0:1:0.5", "--fixed", "0,0,0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["sweep", p, "--free", "1:0:1:0.5", "--fixed", "0,0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let kuka = fixture("kuka_lwr4.robot");
    let args = ["sweep", kuka.to_str().unwrap(), "--free", "4:-0.3:0.3:0.01", "--free", "6:-0.3:0.3:0.02", "--fixed", KUKA_GENERIC];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(csv_rows(&stdout(&a)).len(), 61 * 31);
}

#[test]
fn distance_command() {
    let kuka = fixture("kuka_lwr4.robot");
    let k = kuka.to_str().unwrap();
    let o = run(&["distance", k, KUKA_SINGULAR, "--singularity", "q4-zero"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ga-singular/1\nspec,joint,distance\nq4-zero,4,0.0000000000000000e0\nq4-zero,total,0.0000000000000000e0\n");

    let a = run(&["distance", k, "0.2,0.5,0.4,-1.1,0.3,0.9,0.7", "--singularity", "q4-zero"]);
    let b = run(&["distance", k, "0.2,0.5,0.4,-1.1,0.3,0.9,-2.5", "--singularity", "q4-zero"]);
    assert_eq!(a.stdout, b.stdout);

    let o = run(&["distance", k, KUKA_GENERIC, "--singularity", "elbow"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("q4-zero, q2-q3-half-pi, q6-zero"), "{err}");

    let o = run(&["distance", k, KUKA_GENERIC]);
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("*,total,"));
    let totals: Vec<f64> = text
        .lines()
        .filter(|l| l.contains(",total,") && !l.starts_with('*'))
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(totals.len(), 3);
    let min: f64 = last.rsplit(',').next().unwrap().parse().unwrap();
    assert_eq!(min, totals.iter().copied().fold(f64::INFINITY, f64::min));
}

#[test]
fn potential_command() {
    let planar = fixture("planar_3r.robot");
    let p = planar.to_str().unwrap();

    let o = run(&["potential", p, "0.1,1.5,0.3", "--d0", "0.05"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(field(&rows[0], "admitted"), "true");
    assert_eq!(field(&rows[0], "u_elbow-stretched"), "0.0000000000000000e0");
    assert_eq!(field(&rows[0], "u_elbow-folded"), "0.0000000000000000e0");

    let o = run(&["potential", p, "0.1,0,0.3", "--d0", "0.05"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(field(&rows[0], "admitted"), "false");
    assert_eq!(field(&rows[0], "u_elbow-stretched"), "inf");

    // Choose D₀ = 2D so that D = D₀/2; with κ = 2 the potential is 1/D₀².
    let d: f64 = field(&csv_rows(&stdout(&run(&["distance", p, "0.1,0.3,0.3", "--singularity", "elbow-stretched"])))[1], "distance")
        .parse()
        .unwrap();
    let d0 = 2.0 * d;
    let o = run(&["potential", p, "0.1,0.3,0.3", "--d0", &format!("{d0:e}"), "--kappa", "2"]);
    let u: f64 = field(&csv_rows(&stdout(&o))[0], "u_elbow-stretched").parse().unwrap();
    assert!((u - 1.0 / (d0 * d0)).abs() <= 1e-12 * u);

    for bad in [["--d0", "0"], ["--d0", "-1"]] {
        let o = run(&["potential", p, "0,0,0", bad[0], bad[1]]);
        assert_eq!(o.status.code(), Some(1));
    }
    let o = run(&["potential", p, "0,0,0", "--d0", "0.1", "--kappa", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exit_status_matches_the_record(
        which in 0usize..3,
        raw in prop::collection::vec(-PI..PI, 7),
        pin in prop::option::of(0usize..7),
    ) {
        let (name, n) = [("kuka_lwr4.robot", 7), ("generic_6r.robot", 6), ("planar_3r.robot", 3)][which];
        let mut q = raw[..n].to_vec();
        if let Some(j) = pin.filter(|j| *j < n) {
            q[j] = 0.0;
        }
        let path = fixture(name);
        let o = run(&["check", path.to_str().unwrap(), &q_arg(&q)]);
        let rows = csv_rows(&stdout(&o));
        let singular = field(&rows[0], "singular") == "true";
        prop_assert_eq!(o.status.code(), Some(if singular { 2 } else { 0 }));
        prop_assert_eq!(singular, field(&rows[0], "kind") != "none");

        let short = run(&["check", path.to_str().unwrap(), &q_arg(&q[..n - 1])]);
        prop_assert_eq!(short.status.code(), Some(1));
    }
}
