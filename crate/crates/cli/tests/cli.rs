use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quantumness"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(line: &str, i: usize) -> f64 {
    line.split(',').nth(i).unwrap().parse().unwrap()
}

#[test]
fn baseline_defaults() {
    let o = run(&["baseline"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    assert!(line.starts_with("baseline,0.7698004,"), "{line}");
    assert!(field(line.trim(), 2) <= 1e-7);
}

#[test]
fn baseline_l2_uses_quadrature() {
    let o = run(&["baseline", "--p", "2", "--tol", "1e-8"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    let v = field(line.trim(), 1);
    assert!((v - 3f64.sqrt().recip()).abs() < 1e-7, "{line}");
    assert!(field(line.trim(), 2) <= 1e-8);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["baseline", "--s", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["baseline", "--p", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--nbar", "1"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--suite", "everything"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn sweep_rows_and_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = run(&[
        "sweep",
        "--nbar",
        "1",
        "--r-min",
        "0",
        "--r-max",
        "1.5",
        "--steps",
        "61",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "r,n_value,err,baseline,m_value,quantum_by_variance,classification"
    );
    assert_eq!(lines.len(), 62);
    assert!((field(lines[1], 1) - 0.3718064).abs() < 1e-6);
    let mut prev_n = 0.0;
    for line in &lines[1..] {
        let r = field(line, 0);
        let n = field(line, 1);
        assert!(n >= prev_n - 1e-6, "n_value decreases at r={r}");
        prev_n = n;
        let cols: Vec<&str> = line.split(',').collect();
        if r > 0.56 && r < 0.90 {
            assert_eq!(cols[5], "1");
            assert!(field(line, 4) < 0.0);
            assert_eq!(cols[6], "nogo_instance");
        }
        // classification recomputes from the row
        let (m, err, quantum) = (field(line, 4), field(line, 2), cols[5] == "1");
        let expected = if quantum && m <= 0.0 {
            "nogo_instance"
        } else if m > err {
            "certified_quantum"
        } else {
            "classical_consistent"
        };
        assert_eq!(cols[6], expected, "{line}");
    }
}

#[test]
fn unwritable_output_exits_one() {
    let o = run(&[
        "sweep",
        "--nbar",
        "1",
        "--r-min",
        "0",
        "--r-max",
        "1",
        "--steps",
        "3",
        "--out",
        "/nonexistent-dir/sweep.csv",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&[
        "mixtures",
        "--count",
        "2",
        "--seed",
        "1",
        "--out",
        "/nonexistent-dir/m.csv",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn crossing_reports_onset_and_root() {
    let o = run(&["crossing", "--nbar", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let get = |key: &str| {
        let line = text.lines().find(|l| l.starts_with(key)).unwrap();
        field(line, 1)
    };
    assert!((get("onset,") - 0.5493061).abs() < 1e-6);
    let r = get("r_star,");
    assert!((0.90..=1.00).contains(&r), "{text}");
    assert!(get("m_at_r_star,").abs() <= 1e-6);
    let bracket: Vec<f64> = text
        .lines()
        .find(|l| l.starts_with("bracket,"))
        .unwrap()
        .split(',')
        .skip(1)
        .map(|x| x.parse().unwrap())
        .collect();
    assert!(bracket[0] <= r && r <= bracket[1] && bracket[2] < 0.0 && bracket[3] > 0.0);
}

#[test]
fn crossing_for_squeezed_vacuum_is_positive() {
    let o = run(&["crossing", "--nbar", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("r_star,")).unwrap();
    let r = field(line, 1);
    assert!(r > 0.0 && r < 0.01, "{text}");
}

#[test]
fn mixtures_with_corners() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let o = run(&[
        "mixtures",
        "--count",
        "100",
        "--seed",
        "42",
        "--include-corners",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "p0,p1,p2,n_value,m_value,wigner_negativity,classification,seed_index"
    );
    assert_eq!(lines.len(), 104);
    for line in &lines[1..] {
        let sum = field(line, 0) + field(line, 1) + field(line, 2);
        assert!((sum - 1.0).abs() <= 3e-7, "{line}");
    }
    assert!(lines[1..101]
        .iter()
        .any(|l| field(l, 5) > 1e-3 && field(l, 4) < 0.0 && l.contains("nogo_instance")));
    let one = lines
        .iter()
        .find(|l| l.starts_with("0,1.000000,0,"))
        .unwrap();
    assert!((field(one, 5) - 0.4261226).abs() < 1e-6);
    assert!(one.contains("certified_quantum"));
}

fn run_to(args: &[&str], dir: &Path, name: &str) -> Vec<u8> {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.push("--out");
    full.push(&p);
    assert_eq!(run(&full).status.code(), Some(0));
    fs::read(&path).unwrap()
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = [
        "sweep", "--nbar", "1", "--r-min", "0", "--r-max", "1.5", "--steps", "61",
    ];
    assert_eq!(
        run_to(&sweep, dir.path(), "a.csv"),
        run_to(&sweep, dir.path(), "b.csv")
    );
    let mix = ["mixtures", "--count", "100", "--seed", "42"];
    let first = run_to(&mix, dir.path(), "c.csv");
    assert_eq!(first, run_to(&mix, dir.path(), "d.csv"));
    let other = run_to(
        &["mixtures", "--count", "100", "--seed", "43"],
        dir.path(),
        "e.csv",
    );
    assert_ne!(first, other);
}

#[test]
fn verify_oracles_pass() {
    let o = run(&["verify", "--suite", "oracles"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text
        .lines()
        .filter(|l| l.starts_with("check,"))
        .all(|l| l.contains(",PASS,")));
    assert!(text.lines().any(|l| l == "summary,4,0"));
}

#[test]
fn verify_reports_every_axiom_check() {
    let o = run(&["verify", "--suite", "axioms"]);
    let text = stdout(&o);
    for name in [
        "convexity",
        "displacement_rotation_invariance",
        "weak_monotonicity",
        "strong_monotonicity",
        "classical_bound",
        "nogo_existence",
    ] {
        assert!(
            text.lines()
                .any(|l| l.starts_with(&format!("check,{name},"))),
            "{name}: {text}"
        );
    }
    let failed = text.lines().filter(|l| l.contains(",FAIL,")).count();
    assert_eq!(o.status.code(), Some(if failed == 0 { 0 } else { 1 }));
}
