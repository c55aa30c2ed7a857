//! End-to-end checks of the command-line surface: artifact formats, exit
//! codes, config precedence, CSV determinism and re-readability, and the
//! golden SVG.

use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_bht")
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = Command::new(bin()).arg("--bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin())
        .args(["bumps", "--kind", "nosuch"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bumps_csv_has_header_and_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(bin())
        .args([
            "bumps",
            "--kind",
            "rho",
            "--from",
            "-2.5",
            "--to",
            "2.5",
            "--samples",
            "64",
            "--out-dir",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("bumps_rho.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,value"));
    assert_eq!(lines.count(), 64);
}

#[test]
fn op_csv_is_deterministic_and_rereadable() {
    let run = |dir: &std::path::Path| {
        let out = Command::new(bin())
            .args([
                "op",
                "--which",
                "Bjm",
                "--j",
                "2",
                "--m",
                "4..7",
                "--trials",
                "3",
                "--seed",
                "5",
                "--out-dir",
                dir.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(dir.join("op_Bjm.csv")).unwrap()
    };
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let a = run(d1.path());
    let b = run(d2.path());
    assert_eq!(a, b, "same seed and params must give identical CSV bytes");

    // every emitted CSV row parses back to finite floats
    let text = String::from_utf8(a).unwrap();
    let mut rows = 0;
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 4);
        let ratio: f64 = fields[3].parse().unwrap();
        assert!(ratio.is_finite());
        rows += 1;
    }
    assert_eq!(rows, 4 * 3);
}

#[test]
fn config_file_supplies_out_dir_and_flag_wins() {
    let dir = tempfile::tempdir().unwrap();
    let conf_path = dir.path().join("bht.conf");
    let conf_out = dir.path().join("from_config");
    std::fs::write(
        &conf_path,
        format!("# test config\nout_dir = {}\n", conf_out.display()),
    )
    .unwrap();
    // config supplies out_dir
    let out = Command::new(bin())
        .args([
            "bumps",
            "--kind",
            "theta",
            "--samples",
            "16",
            "--config",
            conf_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(conf_out.join("bumps_theta.csv").exists());
    // explicit flag overrides the config
    let flag_out = dir.path().join("from_flag");
    let out = Command::new(bin())
        .args([
            "bumps",
            "--kind",
            "theta",
            "--samples",
            "16",
            "--config",
            conf_path.to_str().unwrap(),
            "--out-dir",
            flag_out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(flag_out.join("bumps_theta.csv").exists());
}

#[test]
fn symbol_scan_emits_csv_json_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(bin())
        .args([
            "symbol",
            "--d",
            "2",
            "--m",
            "4..8",
            "--xi",
            "-2",
            "--eta",
            "1.1",
            "--svg",
            "--out-dir",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
    let csv = std::fs::read_to_string(dir.path().join("symbol.csv")).unwrap();
    assert!(csv.starts_with("m,re,im,abs,est_error"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("symbol.json")).unwrap())
            .unwrap();
    assert_eq!(json["scan"], "symbol_scale_decay");
    assert!(json["pass"].as_bool().unwrap());
    assert!(dir.path().join("symbol.svg").exists());
}

#[test]
fn uniformity_deficit_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(bin())
        .args([
            "uniformity",
            "--deficit",
            "--m-tag",
            "4",
            "--seed",
            "3",
            "--out-dir",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("uniformity_deficit.json")).unwrap(),
    )
    .unwrap();
    let deficit = json["deficit"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&deficit));
}

#[test]
fn golden_svg_fixture() {
    let scan = bht::harness::DecayScanResult::from_cells(
        vec![4.0, 5.0, 6.0, 7.0, 8.0],
        vec![0.5, 0.34, 0.26, 0.17, 0.125],
        3,
        7,
    )
    .unwrap();
    let rendered = bht::svg::render_svg(&scan).unwrap();
    let golden = include_str!("golden/fixture_scan.svg");
    assert_eq!(rendered, golden, "SVG bytes drifted from the golden fixture");
}
