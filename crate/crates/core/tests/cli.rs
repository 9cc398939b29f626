//! The `abpe` binary on the fixture scenes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use abpe::cli::{exit_code, EXIT_DECOMPOSITION};
use abpe::error::Error;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn abpe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abpe")).args(args).output().expect("run abpe")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn cauchy_csv() {
    let o = abpe(&["cauchy", "--scene", path(&fixture("unit_disk.scene")), "--points", path(&fixture("points.csv"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rows = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(rows.headers().unwrap(), vec!["re", "im", "cauchy_re", "cauchy_im", "status"]);
    for row in rows.records() {
        let row = row.unwrap();
        let z = abpe::Complex64::new(row[0].parse().unwrap(), row[1].parse().unwrap());
        let got = abpe::Complex64::new(row[2].parse().unwrap(), row[3].parse().unwrap());
        let exact = if z.norm() < 1.0 { -std::f64::consts::PI * z.conj() } else { -std::f64::consts::PI / z };
        assert!((got - exact).norm() < 1e-6, "{z}: {got} vs {exact}");
        assert_eq!(&row[4], "ok");
    }
}

#[test]
fn decompose_two_disks_and_segment() {
    let o = abpe(&["decompose", "--scene", path(&fixture("two_disks_segment.scene"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("Delta_0: {seg}"), "{text}");
    assert!(text.contains("abpe components: 2"), "{text}");
    assert!(text.contains("Delta_1: {d1}") && text.contains("Delta_2: {d2}"), "{text}");
    assert!(text.contains("mutually singular true"), "{text}");
}

#[test]
fn decompose_json_matches_repeat() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let o = abpe(&["decompose", "--scene", path(&fixture("annulus.scene")), "--json", path(out)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let report: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(report["parts"].as_array().unwrap().len(), 1);
}

#[test]
fn scan_of_unit_disk() {
    let dir = tempfile::tempdir().unwrap();
    let (svg, json) = (dir.path().join("scan.svg"), dir.path().join("scan.json"));
    let o = abpe(&["abpe-scan", "--scene", path(&fixture("unit_disk.scene")), "--out", path(&svg), "--report", path(&json)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["component_count"], 1);
    assert_eq!(report["components"][0]["connectivity"], 1);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<?xml"));
}

#[test]
fn coloring_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    for out in [&a, &b] {
        let o = abpe(&["color", "--phi", "1e6", "--a", "0.1+0.2i", "--k", "2", "--gens", "3", "--window=-8-8i,8+8i", "--out", path(out)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let svg = std::fs::read(&a).unwrap();
    assert_eq!(svg, std::fs::read(&b).unwrap());
    assert!(String::from_utf8(svg).unwrap().contains(r#"<g id="generation-5""#));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.svg");

    let green = abpe(&["color", "--scene", path(&fixture("zero.scene")), "--a", "0.1+0.2i", "--k", "2", "--gens", "3", "--out", path(&out)]);
    assert_eq!(green.status.code(), Some(5), "{}", stderr(&green));
    assert!(stdout(&green).contains("green-terminated"));

    let cramped = abpe(&["color", "--phi", "1", "--a", "0", "--k", "2", "--gens", "2", "--window=-0.5-0.5i,0.5+0.5i", "--out", path(&out)]);
    assert_eq!(cramped.status.code(), Some(4), "{}", stderr(&cramped));
    assert!(stderr(&cramped).contains("window too small"));

    let bad = dir.path().join("bad.scene");
    std::fs::write(&bad, "degree: 10\nmeasure: disk center 0 radius oops\n").unwrap();
    let invalid = abpe(&["abpe-scan", "--scene", path(&bad)]);
    assert_eq!(invalid.status.code(), Some(2));
    assert!(stderr(&invalid).contains("line 2"), "{}", stderr(&invalid));

    let missing = abpe(&["cauchy", "--scene", path(&dir.path().join("none.scene")), "--points", path(&fixture("points.csv"))]);
    assert_eq!(missing.status.code(), Some(2));

    let no_radius = abpe(&["sweep", "--scene", path(&fixture("annulus.scene")), "--domain", "disk"]);
    assert_eq!(no_radius.status.code(), Some(2));

    // A positive measure whose component is bounded alone stays bounded in
    // any sum, so this code only surfaces on numerical loss.
    assert_eq!(exit_code(&Error::DecompositionFailure("x".into())), EXIT_DECOMPOSITION);
}

#[test]
fn duplicate_labels_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("dup.scene");
    std::fs::write(&scene, "measure: atom label p at 0 mass 1\nmeasure: atom label p at 1 mass 1\n").unwrap();
    let o = abpe(&["abpe-scan", "--scene", path(&scene)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 2") && err.contains("duplicate label `p` (first used on line 1)"), "{err}");
}

#[test]
fn sweep_of_inner_circle() {
    let o = abpe(&["sweep", "--scene", path(&fixture("annulus.scene")), "--domain", "annulus", "--inner", "0.5", "--outer", "1", "--samples", "64"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rows = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(rows.headers().unwrap(), vec!["part", "circle", "theta", "re", "im", "value"]);
    assert!(rows.records().count() > 0);
}

#[test]
fn classify_points() {
    let o = abpe(&["classify", "--scene", path(&fixture("unit_disk.scene")), "--points", path(&fixture("points.csv"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rows = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(rows.records().count(), 5);
}
