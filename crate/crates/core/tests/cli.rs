use serde_json::Value;
use sphere_twobody::cli::{run, Format, SpectrumReport};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("sphere-twobody").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn sh(line: &str) -> (i32, String, String) {
    call(&line.split_whitespace().collect::<Vec<_>>())
}

const COULOMB3: &str = "spectrum --kind coulomb --n 3 --case 1 --mk 0 --m1 2 --m2 2 --radius 1 --coupling 1 --k-min 1 --k-max 3";

fn with(extra: &str) -> (i32, String, String) {
    sh(&format!("{COULOMB3} {extra}"))
}

#[test]
fn coulomb_spectrum_json() {
    let (code, out, err) = with("--format json");
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    assert_eq!(levels[1]["k"], 2);
    assert!((levels[1]["E"].as_f64().unwrap() - 1.375).abs() < 1e-12);
    assert!(levels.iter().all(|l| l["verified"] == true && l["multiplicity"] == "1"));
    assert_eq!(v["metadata"]["reduced_mass"], 1.0);
}

#[test]
fn json_round_trip_is_byte_identical() {
    let (_, out, _) = with("--format json --samples 5");
    let report = SpectrumReport::from_json(&out).unwrap();
    assert_eq!(report.emit(Format::Json).unwrap(), out);
    let tables = report.eigenfunctions.as_ref().unwrap();
    assert_eq!(tables.len(), 3);
    assert!(tables.iter().all(|t| t.samples.len() == 5));
}

#[test]
fn output_is_deterministic() {
    let first = with("--format json");
    let second = with("--format json");
    assert_eq!(first, second);
}

#[test]
fn csv_has_one_row_per_level() {
    let (code, out, _) = sh("spectrum --kind oscillator --n 2 --case 1 --mk 0 --m1 2 --m2 2 --radius 1 --coupling 1 --k-min 0 --k-max 4 --format csv");
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,E,multiplicity,verified");
    assert_eq!(lines.len() - 1, 5);
    let e0: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((e0 - (0.5 + 5f64.sqrt() / 2.0)).abs() < 1e-12);
}

#[test]
fn empty_level_list_is_a_valid_document() {
    let (_, out, _) = with("--format json");
    let mut report = SpectrumReport::from_json(&out).unwrap();
    report.levels.clear();
    let json = report.emit(Format::Json).unwrap();
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 0);
    assert_eq!(report.emit(Format::Csv).unwrap(), "k,E,multiplicity,verified\n");
    assert!(report.emit(Format::Text).is_err());
}

#[test]
fn numeric_only_channel_is_flagged() {
    let (code, out, err) = sh("spectrum --kind coulomb --n 4 --case 2 --mk 1 --m1 2 --m2 2 --radius 1 --coupling 1 --k-max 2");
    assert_eq!(code, 0, "{err}");
    assert!(err.contains("numeric only"));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["metadata"]["reducible"], false);
    assert_eq!(v["levels"].as_array().unwrap().len(), 2);
}

#[test]
fn classify_example() {
    let (code, out, _) = sh("classify --n 4 --mk 1 --mk1 1 --format json");
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let recs = v["records"].as_array().unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["case_id"], 1);
    assert_eq!(recs[0]["delta1"], "-3");
    assert_eq!(recs[0]["delta2"], "-3");
}

#[test]
fn ladder_and_fuchs_succeed() {
    let (code, out, _) = sh("ladder --series B --rank 3 --weights 0,1,4");
    assert_eq!(code, 0);
    assert!(!out.is_empty());
    let (code, out, err) = sh("fuchs --kind oscillator --n 3 --case 1 --mk 0 --k 1 --format json");
    assert_eq!(code, 0, "{err}");
    serde_json::from_str::<Value>(&out).unwrap();
}

#[test]
fn verify_all_passes() {
    let (code, out, _) = sh("verify --suite all");
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.matches("[PASS]").count(), 9);
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        "spectrum --kind coulomb --n 1 --case 1 --mk 0 --m1 1 --m2 1 --radius 1 --coupling 1 --k-max 2",
        "spectrum --kind coulomb --n 3 --case 9 --mk 0 --m1 1 --m2 1 --radius 1 --coupling 1 --k-max 2",
        "spectrum --kind coulomb --n 3 --case 1 --mk 0 --m1 -1 --m2 1 --radius 1 --coupling 1 --k-max 2",
        "spectrum --kind oscillator --n 3 --case 1 --mk 0 --m1 1 --m2 1 --radius 1 --coupling 1 --k-max 2 --format text",
        "spectrum --kind coulomb --n 3 --case 1 --mk 0 --m1 1 --m2 1 --radius 1 --coupling 1 --k-min 0 --k-max 2",
        "classify --n 4 --mk 1 --mk1 2",
        "ladder --series D --rank 1 --weights 1",
        "frobnicate",
    ] {
        let (code, out, err) = sh(args);
        assert_eq!(code, 2, "{args}: {err}");
        assert!(out.is_empty(), "{args} wrote data: {out}");
        assert!(!err.is_empty());
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let path = std::env::temp_dir().join(format!("sphere-twobody-cli-{}.toml", std::process::id()));
    std::fs::write(
        &path,
        "kind = \"coulomb\"\nn = 3\ncase = 1\nmk = 0\nm1 = 2.0\nm2 = 2.0\nradius = 1.0\ncoupling = 1.0\nk_min = 1\nk_max = 5\nformat = \"csv\"\n\n[shooting]\nscan_points = 30\n",
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    let (code, out, err) = call(&["spectrum", "--config", cfg, "--k-max", "2"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().count(), 3);
    let (_, out, _) = call(&["spectrum", "--config", cfg, "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 5);
    assert_eq!(v["tolerances"]["shooting"]["scan_points"], 30);
    std::fs::write(&path, "kind = \"coulomb\"\nbogus = 1\n").unwrap();
    assert_eq!(call(&["spectrum", "--config", cfg]).0, 2);
    std::fs::remove_file(&path).unwrap();
}
