use std::collections::BTreeSet;
use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn bosegraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bosegraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_of(o: &Output) -> Value {
    assert!(o.status.success(), "{}", stderr(o));
    serde_json::from_str(&stdout(o)).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

// Normalised entropy of (s/2, 1-s, s/2) with s = sin^2(theta/2), theta = -atan(2 tau / eps).
fn dimer_entanglement_oracle(tau: f64, eps: f64) -> f64 {
    let s = (0.5 * (-(2.0 * tau / eps).atan())).sin().powi(2);
    let h: f64 = [s / 2.0, 1.0 - s, s / 2.0]
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum();
    h / 3f64.ln()
}

#[test]
fn sweep_writes_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g5.csv");
    let o = bosegraph(&[
        "sweep", "--graph", "catalog:5", "--particles", "4", "--tau-max", "20", "--steps", "401", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert!(!text.contains('\r'));
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    assert_eq!(header.len(), 6 + 2 * 4);
    assert_eq!(header[0], "tau");
    assert_eq!(*header.last().unwrap(), "degenerate");
    let data = rows(&text);
    assert_eq!(data.len(), 401);
    assert!(data.iter().all(|r| r.len() == header.len()));
    assert_eq!(data[0][0], 0.0);
    assert_eq!(data[400][0], 20.0);
}

#[test]
fn dimer_sweep_tracks_closed_form() {
    let o = bosegraph(&["sweep", "--graph", "dimer", "--particles", "2", "--tau-max", "20", "--steps", "201"]);
    assert!(o.status.success());
    let data = rows(&stdout(&o));
    assert_eq!(data.len(), 201);
    for r in &data {
        assert!((r[2] - dimer_entanglement_oracle(r[0], 1.0)).abs() <= 1e-9, "tau {}", r[0]);
    }
    let last = data.last().unwrap()[2];
    assert!((last - 0.93823).abs() < 1e-5);
    // Below the tau -> infinity value, still rising towards it.
    assert!(last < 1.5 / 3f64.log2() && last > data[199][2]);
}

#[test]
fn missing_graph_file_names_the_path() {
    let o = bosegraph(&["sweep", "--graph", "file:missing.graph"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("missing.graph"));
}

#[test]
fn graph_file_source() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("path3.graph");
    fs::write(&path, "# three-vertex path\nvertices 3\n0 1\n1 2\n").unwrap();
    let source = format!("file:{}", path.display());
    let v = json_of(&bosegraph(&["spectrum", "--graph", &source]));
    assert_eq!(v["name"], "path3");
    assert!((v["graph"]["lambda_max"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);

    fs::write(&path, "vertices 3\n0 1\n1 1\n").unwrap();
    let o = bosegraph(&["sweep", "--graph", &source, "--steps", "5"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn argmax_reports_interior_and_boundary_maxima() {
    let v = json_of(&bosegraph(&["argmax", "--graph", "catalog:5"]));
    assert!(v["interior"].as_bool().unwrap());
    assert!((v["tau_star"].as_f64().unwrap() - 1.14).abs() <= 0.02);
    let v = json_of(&bosegraph(&["argmax", "--graph", "catalog:4"]));
    assert!(v["interior"].as_bool().unwrap());
    assert!((v["tau_star"].as_f64().unwrap() - 3.22).abs() <= 0.05);
    let v = json_of(&bosegraph(&["argmax", "--graph", "catalog:13"]));
    assert!(!v["interior"].as_bool().unwrap());
    assert_eq!(v["tau_star"].as_f64().unwrap(), 20.0);
    let keys: BTreeSet<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert!(keys.contains("E_star"));
}

#[test]
fn spectrum_of_graph_and_subgraph() {
    let cases = [("catalog:13", 3.0, 2.0), ("catalog:10", 3f64.sqrt(), 0.0), ("dimer", 1.0, 0.0)];
    for (graph, full, sub) in cases {
        let v = json_of(&bosegraph(&["spectrum", "--graph", graph]));
        assert!((v["graph"]["lambda_max"].as_f64().unwrap() - full).abs() < 1e-10, "{graph}");
        assert!((v["subgraph"]["lambda_max"].as_f64().unwrap() - sub).abs() < 1e-10, "{graph}");
    }
}

#[test]
fn dimer_check_passes_by_default() {
    let o = bosegraph(&["dimer-check"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert!(!text.contains("[FAIL]"));
    assert!(text.contains("tau = 0.3535"), "{text}");
}

#[test]
fn dimer_check_fails_with_impossible_tolerance() {
    let o = bosegraph(&["dimer-check", "--tol", "1e-15"]);
    assert!(!o.status.success());
    let text = stdout(&o);
    assert!(text.contains("[FAIL]") && text.contains("max deviation"), "{text}");
}

#[test]
fn dimer_check_peak_scales_with_epsilon() {
    let o = bosegraph(&["dimer-check", "--epsilon", "2"]);
    assert!(o.status.success());
    let line = stdout(&o).lines().find(|l| l.contains("peak location")).unwrap().to_string();
    let tau: f64 = line.split("tau = ").nth(1).unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!((tau - 2.0 / (2.0 * 2f64.sqrt())).abs() <= 1e-3, "{line}");
}

fn ranking(report: &Value) -> Vec<String> {
    report["rank_by_entanglement"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn order_reproduces_chains() {
    let v = json_of(&bosegraph(&["order", "--ids", "10,11,12,13", "--taus", "0.1,20"]));
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(ranking(&reports[0]), ["G13", "G12", "G11", "G10"]);
    assert_eq!(ranking(&reports[1]), ["G10", "G11", "G12", "G13"]);
    let v = json_of(&bosegraph(&["order", "--ids", "6,7,8,9", "--taus", "0.1"]));
    assert_eq!(ranking(&v[0]), ["G9", "G7", "G8", "G6"]);
    assert_eq!(v[0]["concordance_full"].as_f64().unwrap(), 1.0);
}

#[test]
fn repeated_serial_sweeps_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = bosegraph(&[
            "sweep", "--graph", "catalog:11", "--tau-max", "5", "--steps", "41", "--solver", "lanczos", "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        fs::read(p).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn invalid_flags_leave_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.csv");
    let o = out.to_str().unwrap();
    let bad: [&[&str]; 6] = [
        &["sweep", "--graph", "dimer", "--steps", "1", "--out", o],
        &["sweep", "--graph", "dimer", "--epsilon", "-1", "--out", o],
        &["sweep", "--graph", "dimer", "--particles", "0", "--out", o],
        &["sweep", "--graph", "dimer", "--tol", "0", "--out", o],
        &["sweep", "--graph", "dimer", "--solver", "qr", "--out", o],
        &["sweep", "--graph", "catalog:99", "--out", o],
    ];
    for args in bad {
        let r = bosegraph(args);
        assert!(!r.status.success(), "{args:?}");
        assert!(!out.exists(), "{args:?}");
    }
    let scan = dir.path().join("scan");
    let r = bosegraph(&["complete-scan", "--sizes", "3,1", "--out-dir", scan.to_str().unwrap()]);
    assert!(!r.status.success());
    assert!(!scan.exists());
}

#[test]
fn sweep_json_keys_depend_only_on_vertex_count() {
    let keys = |graph: &str, particles: &str| {
        let v = json_of(&bosegraph(&[
            "sweep", "--graph", graph, "--particles", particles, "--steps", "5", "--format", "json",
        ]));
        let top: BTreeSet<String> = v.as_object().unwrap().keys().cloned().collect();
        let point: BTreeSet<String> = v["points"][0].as_object().unwrap().keys().cloned().collect();
        (top, point, v["points"][0]["means"].as_array().unwrap().len())
    };
    assert_eq!(keys("catalog:3", "4"), keys("catalog:12", "2"));
}

#[test]
fn complete_scan_writes_csv_per_size_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let scan = dir.path().join("scan");
    let o = bosegraph(&[
        "complete-scan", "--sizes", "3,4,5", "--steps", "101", "--out-dir", scan.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for l in 3..=5 {
        let text = fs::read_to_string(scan.join(format!("K{l}.csv"))).unwrap();
        assert_eq!(rows(&text).len(), 101);
        assert_eq!(text.lines().next().unwrap().split(',').count(), 6 + 2 * l);
    }
    let summary: Value = serde_json::from_str(&fs::read_to_string(scan.join("summary.json")).unwrap()).unwrap();
    let s = summary.as_array().unwrap();
    assert_eq!(s.len(), 3);
    for w in s.windows(2) {
        assert!(w[1]["variance_peak_tau"].as_f64() < w[0]["variance_peak_tau"].as_f64());
        assert!(w[1]["variance_peak_height"].as_f64() > w[0]["variance_peak_height"].as_f64());
    }
    assert!(s.iter().all(|e| e["entanglement_increasing"].as_bool().unwrap()));
}

#[test]
fn catalog_lists_all_ids() {
    let o = bosegraph(&["catalog"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 11);
    assert!(text.contains("13,G13,4,0-1 0-2 0-3 1-2 1-3 2-3"));
    let v = json_of(&bosegraph(&["catalog", "--format", "json"]));
    assert_eq!(v.as_array().unwrap().len(), 11);
}

#[test]
fn parallel_sweep_matches_serial() {
    let run = |extra: &[&str]| {
        let mut args = vec!["sweep", "--graph", "pendant:6", "--tau-max", "3", "--steps", "31"];
        args.extend_from_slice(extra);
        rows(&stdout(&bosegraph(&args)))
    };
    let (a, b) = (run(&[]), run(&["--parallel"]));
    for (x, y) in a.iter().zip(&b) {
        assert!((x[2] - y[2]).abs() <= 1e-9);
    }
}
