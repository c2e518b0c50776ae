use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plasmon-casimir"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(s: &str) -> Vec<&str> {
    s.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn csv_single_point() {
    let o = run(&["phi", "--lambda", "1", "--tau", "0.018"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(!s.contains('\r'));
    assert!(s.starts_with("# command: plasmon-casimir phi --lambda 1 --tau 0.018\n"));
    for key in ["version", "rel_tol", "abs_tol", "material"] {
        assert!(s.contains(&format!("# {key}: ")), "{key}");
    }
    let lines = data_lines(&s);
    assert_eq!(lines[0], "lambda,tau,eta,theta,phi,error,free_energy_j_per_m2,status");
    assert_eq!(lines.len(), 2);
    let cells: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cells.last(), Some(&"ok"));
    // 17 significant digits
    let mantissa = cells[4].split('e').next().unwrap().trim_start_matches('-');
    assert_eq!(mantissa.replace('.', "").len(), 17);
    let phi: f64 = cells[4].parse().unwrap();
    assert!((phi + 21.438).abs() < 1e-2, "{phi}");
}

#[test]
fn output_is_deterministic() {
    let args = [
        "lifshitz",
        "--lambda-min",
        "0.5",
        "--lambda-max",
        "5",
        "--points",
        "6",
        "--log",
        "--tau",
        "0.05",
    ];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    let xs: Vec<f64> = data_lines(&a)[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(xs.len(), 6);
    assert!(xs.windows(2).all(|w| w[1] > w[0]));
    assert!((xs[0] - 0.5).abs() < 1e-15 && (xs[5] - 5.0).abs() < 1e-14);
}

#[test]
fn json_matches_csv() {
    let csv = stdout(&run(&["entropy", "--lambda", "1", "--tau", "0.1"]));
    let json: Value = serde_json::from_str(&stdout(&run(&[
        "entropy", "--lambda", "1", "--tau", "0.1", "--format", "json",
    ])))
    .unwrap();
    let header: Vec<&str> = data_lines(&csv)[0].split(',').collect();
    let cols: Vec<&str> = json["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    assert_eq!(header, cols);
    let row: Vec<&str> = data_lines(&csv)[1].split(',').collect();
    let i = header.iter().position(|&c| c == "sigma").unwrap();
    assert_eq!(
        json["rows"][0]["sigma"].as_f64().unwrap(),
        row[i].parse::<f64>().unwrap()
    );
    assert_eq!(json["metadata"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("plasmon-casimir-{}.csv", std::process::id()));
    let o = run(&["eta", "--lambda", "0.01", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let s = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(data_lines(&s).len(), 2);
}

#[test]
fn domain_errors_exit_2() {
    for args in [
        &["phi", "--lambda", "-1"][..],
        &["theta", "--lambda", "1", "--tau", "-0.1"],
        &["phi", "--lambda", "1", "--rel-tol", "0"],
        &["phi", "--lambda", "1", "--max-subdivisions", "3"],
        &["figure", "10"],
        &["eta", "--lambda-min", "2", "--lambda-max", "1", "--points", "3"],
    ] {
        let o = run(args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn non_convergence_exits_3() {
    let o = run(&[
        "lifshitz",
        "--lambda",
        "1",
        "--tau",
        "0.1",
        "--rel-tol",
        "1e-14",
        "--max-subdivisions",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(3));
    // the row is still written, with the failure in its status
    let s = stdout(&o);
    let row = data_lines(&s)[1];
    assert!(row.contains("no convergence"), "{row}");
}

#[test]
fn sweep_bounds_checked_before_running() {
    let o = run(&["eta", "--lambda-min", "-1", "--lambda-max", "1", "--points", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(data_lines(&stdout(&o)).is_empty());
}

#[test]
fn scenarios_and_inversion() {
    let s = stdout(&run(&["inversion", "--tau", "0"]));
    let row = data_lines(&s)[1].to_string();
    assert!(row.ends_with(",ok"), "{row}");
    let o = run(&[
        "noneq",
        "--scenario",
        "c",
        "--lambda",
        "30",
        "--tau",
        "0.018",
        "--tau-pr",
        "0.04",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["rows"][0]["normalized_fig9"].as_f64().unwrap() > 0.0);
}

#[test]
fn figure_presets() {
    let o = run(&["figure", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("# figure: 2"));
    let lines = data_lines(&s);
    assert_eq!(lines[0], "series,x,y,error,status");
    assert!(lines[1..].iter().all(|l| l.ends_with(",ok")));
    assert!(lines.iter().any(|l| l.starts_with("z_plus_long,")));
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
