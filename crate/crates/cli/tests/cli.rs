use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multiplets"))
        .arg("--out-dir")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Manifest (first line) and the CSV data below it.
fn split(path: &Path) -> (serde_json::Value, String) {
    let text = fs::read_to_string(path).unwrap();
    let (head, data) = text.split_once('\n').unwrap();
    (serde_json::from_str(head.trim_start_matches("# ")).unwrap(), data.to_string())
}

/// Rows as `(x, p, value)` triples.
fn triples(path: &Path) -> Vec<(f64, f64, f64)> {
    let (_, data) = split(path);
    data.lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
            (v[0], v[1], v[2])
        })
        .collect()
}

const PAIR: [&str; 8] = [
    "overlap-scan",
    "--ordinary",
    "D=2,m=0",
    "--higher",
    "p=4,D=1,m=0",
    "--r",
    "0.2:1.6:6",
    "--rp",
];

#[test]
fn overlap_scan_writes_both_files_deterministically() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let mut args = PAIR.to_vec();
        args.push("0.05:0.2:4");
        let o = run(dir.path(), &args);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for name in ["overlap_p2D2m0_p4D1m0.csv", "maxcurve_p2D2m0_p4D1m0.csv"] {
        let (manifest, data_a) = split(&a.path().join(name));
        let (_, data_b) = split(&b.path().join(name));
        assert_eq!(data_a, data_b, "{name}");
        assert_eq!(manifest["command"], "overlap-scan");
    }
    let grid = triples(&a.path().join("overlap_p2D2m0_p4D1m0.csv"));
    assert_eq!(grid.len(), 24);
    assert!(grid.iter().all(|&(_, _, v)| (0.0..=1.0 + 1e-12).contains(&v)));
    let curve = triples(&a.path().join("maxcurve_p2D2m0_p4D1m0.csv"));
    assert_eq!(curve.len(), 4);
    // the refined maximum is never below the grid maximum on the same column
    for &(rp, _, best) in &curve {
        let grid_best = grid.iter().filter(|t| t.1 == rp).map(|t| t.2).fold(0.0, f64::max);
        assert!(best >= grid_best - 1e-15);
    }
}

#[test]
fn support_mismatch_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["overlap-scan", "--ordinary", "D=2,m=1", "--higher", "p=4,D=2,m=1", "--r", "0:1:3", "--rp", "0:0.2:3"],
    );
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("2*(1 + 2n)") && msg.contains("4*(1 + 2n)"), "{msg}");
}

#[test]
fn empty_grid_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = PAIR.to_vec();
    args.push("0:0.2:0");
    assert_eq!(run(dir.path(), &args).status.code(), Some(2));
}

#[test]
fn single_point_char_grid_is_one_at_origin() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["char-grid", "--D", "3", "--m", "1", "--r", "1.2", "--res", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = triples(&dir.path().join("char_D3_m1_r1.2.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0].0, rows[0].1), (0.0, 0.0));
    assert!((rows[0].2 - 1.0).abs() < 1e-12);
}

#[test]
fn breakdown_writes_one_file_per_term() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["char-grid", "--D", "3", "--m", "0", "--r", "1.2", "--res", "9", "--breakdown"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let files: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 7);
    // the terms add up to the full function
    let total = triples(&dir.path().join("char_D3_m0_r1.2.csv"));
    let mut sum = vec![0.0; total.len()];
    for e in fs::read_dir(dir.path()).unwrap() {
        let path = e.unwrap().path();
        if path.file_name().unwrap() != "char_D3_m0_r1.2.csv" {
            for (s, t) in sum.iter_mut().zip(triples(&path)) {
                *s += t.2;
            }
        }
    }
    for (s, t) in sum.iter().zip(&total) {
        assert!((s - t.2).abs() < 1e-12);
    }
}

#[test]
fn analytic_engine_rejects_higher_order() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["char-grid", "--order", "3", "--D", "1", "--m", "0", "--r", "0.1", "--res", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("analytic engine is p=2 only"));
}

#[test]
fn numeric_engine_accepts_higher_order() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["char-grid", "--order", "3", "--D", "1", "--m", "0", "--r", "0.1", "--res", "3", "--range", "1", "--engine", "numeric"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = triples(&dir.path().join("char_p3_D1_m0_r0.1.csv"));
    let origin = rows.iter().find(|t| t.0 == 0.0 && t.1 == 0.0).unwrap();
    assert!((origin.2 - 1.0).abs() < 1e-9);
}

#[test]
fn vacuum_wigner_peak() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["wigner-grid", "--D", "1", "--m", "0", "--r", "0", "--res", "5", "--range", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = triples(&dir.path().join("wigner_D1_m0_r0.csv"));
    let peak = rows.iter().map(|t| t.2).fold(f64::MIN, f64::max);
    let origin = rows.iter().find(|t| t.0 == 0.0 && t.1 == 0.0).unwrap();
    assert!((origin.2 - 1.0 / PI).abs() < 1e-14);
    assert_eq!(peak, origin.2);
}

#[test]
fn wigner_is_char_at_doubled_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["--D", "3", "--m", "1", "--r", "0.8", "--res", "11"];
    let mut w = vec!["wigner-grid", "--range", "2"];
    w.extend(base);
    let mut c = vec!["char-grid", "--range", "4"];
    c.extend(base);
    assert!(run(dir.path(), &w).status.success());
    assert!(run(dir.path(), &c).status.success());
    let wig = triples(&dir.path().join("wigner_D3_m1_r0.8.csv"));
    let chr = triples(&dir.path().join("char_D3_m1_r0.8.csv"));
    for (a, b) in wig.iter().zip(&chr) {
        assert!((2.0 * a.0 - b.0).abs() < 1e-12 && (2.0 * a.1 - b.1).abs() < 1e-12);
        assert!((a.2 - b.2 / PI).abs() < 1e-13);
    }
}

#[test]
fn triplet_wigner_goes_negative() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["wigner-grid", "--D", "3", "--m", "1", "--r", "1", "--res", "41", "--range", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (manifest, _) = split(&dir.path().join("wigner_D3_m1_r1.csv"));
    assert!(manifest["summary"]["min"].as_f64().unwrap() < 0.0);
}

#[test]
fn numeric_and_analytic_grids_agree() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["char-grid", "--D", "2", "--m", "1", "--r", "0.7", "--res", "7", "--range", "3"];
    assert!(run(dir.path(), &base).status.success());
    let analytic = triples(&dir.path().join("char_D2_m1_r0.7.csv"));
    let mut num = base.to_vec();
    num.extend(["--engine", "numeric"]);
    assert!(run(dir.path(), &num).status.success());
    let numeric = triples(&dir.path().join("char_D2_m1_r0.7.csv"));
    for (a, n) in analytic.iter().zip(&numeric) {
        assert!((a.2 - n.2).abs() < 1e-9);
    }
}

#[test]
fn zero_ring_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["zero-scan", "--D", "4", "--m", "2", "--r", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("ring: yes"));

    let o = run(dir.path(), &["zero-scan", "--D", "1", "--m", "0", "--r", "1"]);
    assert!(stdout(&o).contains("ring: no"));
    let (_, data) = split(&dir.path().join("zeros_D1_m0_r1.csv"));
    assert!(data.lines().skip(1).all(|l| l.ends_with(",,false")));
}

#[test]
fn quick_validation_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["validate", "--quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn unsquared_exponent_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["validate", "--quick", "--use-paper-exponents"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("oracle equivalence")).unwrap();
    assert!(line.ends_with("FAIL"));
}

#[test]
fn bad_template_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["overlap-scan", "--ordinary", "D=two", "--higher", "p=4,D=1,m=0"]);
    assert_eq!(o.status.code(), Some(2));
}
