use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_morse-orbits"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn analyze(mesh: &Path, field: &Path, extra: &[&str]) -> Output {
    bin().arg("analyze").arg("--mesh").arg(mesh).arg("--field").arg(field).args(extra).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const TETRA: &str = "OFF\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n";

#[test]
fn sphere_height_report() {
    let out = analyze(&data("sphere.off"), &data("sphere.height.field"), &[]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["homotopy"]["orbit"], "S2");
    assert_eq!(v["homotopy"]["orbit_f"], "point");
    assert_eq!(v["homotopy"]["stabilizer_id"], "S1");
    assert_eq!(v["codim"]["orbit"], 2);
    assert_eq!(v["codim"]["orbit_cr"], 6);
    assert_eq!(v["type"], "A");
}

#[test]
fn circle_codomain_from_header_and_flag() {
    let out = analyze(&data("torus_grid.off"), &data("torus_grid.fibration.field"), &[]);
    assert_eq!(json(&out)["homotopy"]["orbit"], "S1");
    // forcing the real line turns the fibration into a degenerate real map
    let out = analyze(&data("torus_grid.off"), &data("torus_grid.fibration.field"), &["--codomain", "real"]);
    assert!(!out.status.success());
    assert!(json(&out)["error"]["code"].as_i64().unwrap() >= 3);
}

#[test]
fn text_format_is_indented_key_value() {
    let out = analyze(&data("torus.off"), &data("torus.height.field"), &["--format", "text", "--no-homology"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("homotopy:\n"));
    assert!(text.contains("  orbit: (S1)^3\n"));
    assert!(text.contains("homology: -\n"));
}

fn check_dot(dot: &str) {
    let body = dot.strip_prefix("digraph reeb {\n").and_then(|b| b.strip_suffix("}\n")).expect("digraph wrapper");
    let mut nodes = Vec::new();
    for line in body.lines() {
        let line = line.trim().strip_suffix(';').expect("statements end with ;");
        if let Some((lhs, _)) = line.split_once(" -> ") {
            let rhs = line.split(" -> ").nth(1).unwrap().split_whitespace().next().unwrap();
            assert!(nodes.contains(&lhs.to_string()) && nodes.contains(&rhs.to_string()), "{line}");
        } else {
            nodes.push(line.split_whitespace().next().unwrap().to_string());
        }
        assert_eq!(line.matches('[').count(), line.matches(']').count());
    }
    assert!(!nodes.is_empty());
}

#[test]
fn dot_output_is_well_formed() {
    for (mesh, field) in [("genus2.off", "genus2.generic.field"), ("klein_grid.off", "klein_grid.fibration.field")] {
        let out = bin().arg("reeb").arg("--mesh").arg(data(mesh)).arg("--field").arg(data(field)).output().unwrap();
        assert!(out.status.success());
        check_dot(&String::from_utf8(out.stdout).unwrap());
    }
    let out = analyze(&data("csaszar.off"), &data("csaszar.generic.field"), &["--format", "dot"]);
    check_dot(&String::from_utf8(out.stdout).unwrap());
}

#[test]
fn reeb_json_and_text() {
    let args = |fmt: &str| {
        bin()
            .args(["reeb", "--format", fmt, "--mesh"])
            .arg(data("torus.off"))
            .arg("--field")
            .arg(data("torus.height.field"))
            .output()
            .unwrap()
    };
    let v = json(&args("json"));
    assert_eq!(v["nodes"].as_array().unwrap().len(), 4);
    assert_eq!(v["edges"].as_array().unwrap().len(), 4);
    let text = String::from_utf8(args("text").stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("edge")).count(), 4);
}

fn error_case(mesh: &str, field: &str, code: i32, kind: &str) {
    let dir = tempfile::tempdir().unwrap();
    let (m, f) = (dir.path().join("m.off"), dir.path().join("m.field"));
    std::fs::write(&m, mesh).unwrap();
    std::fs::write(&f, field).unwrap();
    let out = analyze(&m, &f, &[]);
    assert_eq!(out.status.code(), Some(code), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["error"]["code"], code);
    assert_eq!(v["error"]["kind"], kind);
    assert!(!v["error"]["message"].as_str().unwrap().is_empty());
}

#[test]
fn errors_are_json_with_exit_codes() {
    error_case(TETRA, "0 1 2", 3, "parse");
    error_case(TETRA, "0 1 x 3", 3, "parse");
    error_case(&TETRA.replace("3 1 2 3", "4 1 2 3 0"), "0 1 2 3", 3, "parse");
    // three triangles on one edge
    let fin = "OFF\n5 3 0\n0 0 0\n0 0 0\n0 0 0\n0 0 0\n0 0 0\n3 0 1 2\n3 0 1 3\n3 0 1 4\n";
    error_case(fin, "0 1 2 3 4", 4, "surface");
    error_case(TETRA, "# codomain: circle\n0 0.3 0.6 0.9\n", 5, "morse");
}

#[test]
fn missing_file_is_a_parse_error() {
    let out = analyze(Path::new("/nonexistent.off"), &data("sphere.height.field"), &[]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn check_bundled_corpus() {
    let out = bin().args(["check", "--random", "2", "--no-homology"]).arg(data("")).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert!(v["checked"].as_u64().unwrap() >= 14);
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn check_reports_broken_inputs() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("t.off"), TETRA).unwrap();
    std::fs::write(dir.path().join("t.ok.field"), "0 1 2 3").unwrap();
    std::fs::write(dir.path().join("t.bad.field"), "0 0 0 0").unwrap();
    let out = bin().args(["check", "--random", "0"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(9));
    let v = json(&out);
    let failures = v["failures"].as_array().unwrap();
    assert_eq!(failures.len(), 1);
    assert!(failures[0]["case"].as_str().unwrap().ends_with("t.bad.field"));
}

#[test]
fn seed_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("t.off"), TETRA).unwrap();
    let out = bin().args(["check", "--random", "3"]).arg(dir.path()).env("MORSE_ORBITS_SEED", "41").output().unwrap();
    let v = json(&out);
    assert_eq!(v["seed"], 41);
    assert_eq!(v["cases"], 3);
}
