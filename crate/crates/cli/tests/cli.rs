use std::path::Path;
use std::process::{Command, Output};

use photon_clusters_cli::output::{Cell, Document, PRECISION_ENV};
use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_photon-clusters"));
    cmd.env_remove(PRECISION_ENV);
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn doc(args: &[&str]) -> Document {
    Document::parse_csv(&stdout(args)).unwrap()
}

fn float(c: &Cell) -> f64 {
    match c {
        Cell::Float(v) => *v,
        Cell::Int(v) => *v as f64,
        other => panic!("not a number: {other:?}"),
    }
}

fn floats(d: &Document, column: &str) -> Vec<f64> {
    d.table.column(column).unwrap().into_iter().map(float).collect()
}

fn lookup(d: &Document, name: &str) -> f64 {
    let row = d.table.rows.iter().find(|r| r[0] == Cell::Text(name.into())).unwrap();
    float(&row[1])
}

#[test]
fn photon_pmf_unit_cell() {
    let d = doc(&["pmf", "--kind", "photons", "--tau", "1", "--w", "1", "--n-max", "5"]);
    assert_eq!(d.table.columns, ["n", "probability"]);
    assert_eq!(d.table.rows.len(), 7);
    assert_eq!(d.table.rows[0], vec![Cell::Int(0), Cell::Float(0.5)]);
    assert_eq!(d.table.rows[6][0], Cell::Text("tail".into()));
    assert_eq!(float(&d.table.rows[6][1]), 1.0 / 64.0);
}

#[test]
fn size_and_cluster_pmfs() {
    let d = doc(&["pmf", "--kind", "sizes", "--w", "50", "--n-max", "40"]);
    assert_eq!(d.table.rows[0][0], Cell::Int(1));
    assert!((float(&d.table.rows[0][1]) - 0.249_347_821_709_845_36).abs() < 1e-15);
    assert_eq!(d.table.rows.len(), 41);

    let d = doc(&["pmf", "--kind", "clusters", "--tau", "2", "--w", "1", "--n-max", "0"]);
    assert_eq!(d.table.rows.len(), 2);
    assert!((float(&d.table.rows[0][1]) - 0.25).abs() < 1e-16);
}

#[test]
fn pmf_from_mode_frequency_and_temperature() {
    let d = doc(&["pmf", "--nu", "5e14", "--temp", "6000", "--n-max", "2"]);
    let w = 0.018_669_352_400_742_21;
    assert!((float(&d.summary[2].1) - w).abs() < 1e-15);
    assert!((float(&d.table.rows[0][1]) - 1.0 / (1.0 + w)).abs() < 1e-15);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["pmf", "--w", "1", "--nu", "1e14", "--temp", "300"]), 2);
    assert_eq!(code(&["pmf", "--tau", "1"]), 2);
    assert_eq!(code(&["pmf", "--nu", "1e14"]), 2);
    assert_eq!(code(&["pmf", "--w", "not-a-number"]), 2);
    assert_eq!(code(&["pmf", "--kind", "sizes", "--w", "0"]), 1);
    assert_eq!(code(&["pmf", "--w=-1"]), 1);
    assert_eq!(code(&["sample", "--w", "1", "--samples", "0"]), 2);
    assert_eq!(code(&["spectrum", "--temp", "6000", "--points", "1"]), 2);
    assert_eq!(code(&["spectrum", "--temp", "6000", "--rank", "zero"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
}

#[test]
fn diagnostics_are_one_line() {
    let out = run(&["pmf", "--tau", "1"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    let out = run(&["pmf", "--bogus"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
}

#[test]
fn rank_columns_sum_to_planck() {
    let d = doc(&["spectrum", "--temp", "6000", "--rank", "all", "--space", "nu"]);
    let ranks = d.table.columns.iter().filter(|c| c.starts_with("u_")).count();
    assert!(ranks > 100);
    assert_eq!(d.table.rows.len(), 200);
    let total = floats(&d, "total");
    for (i, row) in d.table.rows.iter().enumerate() {
        let sum: f64 = row[1..=ranks].iter().map(float).sum();
        assert!(((sum - total[i]) / total[i]).abs() < 1e-10, "row {i}");
    }
    let nu = floats(&d, "nu");
    let peak = 3.0 * 1.380649e-23 * 6000.0 / 6.62607015e-34;
    assert!((nu[0] / (0.01 * peak) - 1.0).abs() < 1e-15);
    assert!((nu[199] / (10.0 * peak) - 1.0).abs() < 1e-15);
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(a, b)| 0.5 * (a[1] - a[0]) * (b[0] + b[1]))
        .sum()
}

#[test]
fn rank_areas_fall_as_fourth_powers() {
    let d = doc(&[
        "spectrum", "--temp", "6000", "--rank", "3", "--space", "lambda", "--points", "2000",
    ]);
    assert_eq!(d.table.columns, ["lambda", "u_1", "u_2", "u_3", "total", "planck"]);
    let x = floats(&d, "lambda");
    let a: Vec<f64> = ["u_1", "u_2", "u_3"]
        .iter()
        .map(|c| trapezoid(&x, &floats(&d, c)))
        .collect();
    assert!((a[1] / a[0] - 1.0 / 16.0).abs() < 1e-12);
    assert!((a[2] / a[0] - 1.0 / 81.0).abs() < 1e-12);

    let d = doc(&[
        "spectrum", "--temp", "6000", "--rank", "3", "--space", "nu", "--points", "2000",
    ]);
    let x = floats(&d, "nu");
    let a: Vec<f64> = ["u_1", "u_2", "u_3"]
        .iter()
        .map(|c| trapezoid(&x, &floats(&d, c)))
        .collect();
    assert!((a[1] / a[0] * 16.0 - 1.0).abs() < 1e-3);
    assert!((a[2] / a[0] * 81.0 - 1.0).abs() < 1e-3);
}

#[test]
fn modified_lambda_law_against_planck() {
    let d = doc(&["spectrum", "--temp", "6000", "--space", "lambda", "--rank", "total"]);
    assert_eq!(d.table.columns, ["lambda", "total", "planck"]);
    let (modified, planck) = (floats(&d, "total"), floats(&d, "planck"));
    let peak = |y: &[f64]| y.iter().cloned().fold(f64::MIN, f64::max);
    assert!((peak(&modified) / peak(&planck) - 1.075).abs() < 0.002);

    // Planck's long-wavelength tail falls only as λ⁻⁴, so compare areas on a wide grid.
    let peak_lambda = 6.62607015e-34 * 299792458.0 / (5.0 * 1.380649e-23 * 6000.0);
    let (lo, hi) = (format!("{}", 0.05 * peak_lambda), format!("{}", 1e4 * peak_lambda));
    let d = doc(&[
        "spectrum", "--temp", "6000", "--space", "lambda", "--min", &lo, "--max", &hi, "--points", "20000",
    ]);
    let x = floats(&d, "lambda");
    let ratio = trapezoid(&x, &floats(&d, "total")) / trapezoid(&x, &floats(&d, "planck"));
    assert!((ratio - 1.0).abs() < 1e-4, "{ratio}");
}

#[test]
fn constants_rows() {
    let d = doc(&["constants"]);
    assert_eq!(format!("{:.4}", lookup(&d, "phi")), "0.9239");
    assert_eq!(format!("{:.4}", lookup(&d, "theta")), "0.0761");
    assert!((lookup(&d, "peak_ratio") - 1.075).abs() <= 0.001);
    assert!((lookup(&d, "peak_offset_rel") - 0.007).abs() <= 0.0005);
    assert!((lookup(&d, "zeta3_ratio") - 1.202_056_903_159_594).abs() < 1e-14);
    for m in 1..=10 {
        assert!(d.table.rows.iter().any(|r| r[0] == Cell::Text(format!("sigma_{m}"))));
    }
}

#[test]
fn sampling_is_deterministic() {
    let args = ["sample", "--tau", "1", "--w", "1", "--samples", "50000", "--seed", "42"];
    assert_eq!(stdout(&args), stdout(&args));
    let mut json = args.to_vec();
    json.extend(["--format", "json"]);
    assert_eq!(stdout(&json), stdout(&json));
}

#[test]
fn both_samplers_meet_the_clt_bound() {
    for method in ["compound", "direct"] {
        let d = doc(&[
            "sample",
            "--tau",
            "2",
            "--w",
            "1",
            "--samples",
            "1000000",
            "--method",
            method,
        ]);
        let tvd = d
            .summary
            .iter()
            .find(|(k, _)| k == "tvd")
            .map(|(_, v)| float(v))
            .unwrap();
        assert!(tvd < 0.005, "{method}: {tvd}");
    }
}

#[test]
fn sample_json_carries_the_report() {
    let text = stdout(&["sample", "--w", "2", "--samples", "1000", "--format", "json"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    let data = &v["data"];
    assert_eq!(data["method"], "compound");
    assert_eq!(data["config"]["seed"], 42);
    assert!(data["tvd"].as_f64().unwrap() >= 0.0);
    assert!(data["clusters"]["histogram"].is_array());
}

fn roundtrip_file(dir: &Path, args: &[&str]) {
    for format in ["csv", "json"] {
        let path = dir.join(format!("out.{format}"));
        let mut full: Vec<&str> = args.to_vec();
        let p = path.to_str().unwrap();
        full.extend(["--format", format, "--out", p]);
        let out = run(&full);
        assert!(out.status.success() || out.status.code() == Some(3));
        assert!(out.stdout.is_empty());
        let text = std::fs::read_to_string(&path).unwrap();
        let again = match format {
            "csv" => Document::parse_csv(&text).unwrap().to_csv().unwrap(),
            _ => photon_clusters_cli::output::render_json(&serde_json::from_str(&text).unwrap()),
        };
        assert_eq!(again, text, "{args:?} as {format}");
    }
}

#[test]
fn every_command_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    roundtrip_file(dir.path(), &["pmf", "--w", "3", "--tau", "2.5"]);
    roundtrip_file(
        dir.path(),
        &["spectrum", "--temp", "300", "--rank", "4", "--points", "20"],
    );
    roundtrip_file(dir.path(), &["constants"]);
    roundtrip_file(dir.path(), &["sample", "--w", "1", "--samples", "2000"]);
    roundtrip_file(dir.path(), &["verify", "--level", "fast"]);
}

#[test]
fn precision_override() {
    let out = bin()
        .env(PRECISION_ENV, "6")
        .args(["pmf", "--w", "1", "--n-max", "1"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\n1,2.50000e-1\n"), "{text}");
    assert!(text.contains("# precision,6\n"));
    assert_eq!(Document::parse_csv(&text).unwrap().to_csv().unwrap(), text);
    let out = bin().env(PRECISION_ENV, "40").args(["constants"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_defaults_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("defaults.conf");
    std::fs::write(&cfg, "# desk defaults\ntemp = 3000\npoints = 7\nw = 2\n").unwrap();
    let c = cfg.to_str().unwrap();
    let d = doc(&["--config", c, "spectrum"]);
    assert_eq!(d.table.rows.len(), 7);
    assert_eq!(float(&d.summary[0].1), 3000.0);
    let d = doc(&["spectrum", "--config", c, "--points", "3"]);
    assert_eq!(d.table.rows.len(), 3);
    let d = doc(&["--config", c, "pmf", "--n-max", "0"]);
    assert!((float(&d.table.rows[0][1]) - 1.0 / 3.0).abs() < 1e-16);
    // A mode given by flags wins over a configured w.
    assert_eq!(code(&["--config", c, "pmf", "--nu", "1e14", "--temp", "300"]), 0);
    std::fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(code(&["--config", c, "constants"]), 2);
}

#[test]
fn fast_verification_passes() {
    let d = doc(&["verify", "--level", "fast"]);
    let passed = d.table.column("passed").unwrap();
    assert!(passed.iter().all(|c| **c == Cell::Bool(true)));
    let names = d.table.column("name").unwrap();
    assert!(names.iter().any(|c| **c == Cell::Text("max |P(z) - G(F(z))|".into())));
}

#[test]
fn full_verification_passes() {
    let d = doc(&["verify", "--level", "full"]);
    let criteria: Vec<f64> = floats(&d, "criterion");
    for c in 1..=12 {
        assert!(criteria.contains(&(c as f64)), "criterion {c} missing");
    }
    assert!(d
        .table
        .column("passed")
        .unwrap()
        .iter()
        .all(|c| **c == Cell::Bool(true)));
}
