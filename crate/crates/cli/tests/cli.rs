use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fnshape::fixtures;
use fnshape::mesh::io::write_off;
use fnshape::HalfedgeMesh;

fn fnshape(args: &[&Path]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fnshape")).args(args).output().expect("binary runs")
}

fn p(s: &str) -> PathBuf {
    PathBuf::from(s)
}

fn save_off(dir: &Path, name: &str, mesh: &HalfedgeMesh) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, write_off(mesh.positions(), mesh.faces())).unwrap();
    path
}

fn save(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn compute_writes_descriptor_and_flow_log() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = save_off(dir.path(), "torus.off", &fixtures::torus(16, 8, 3.0, 1.0));
    let lm = save(dir.path(), "torus.lm", "# one puncture\n0\n");
    let out = dir.path().join("torus.json");
    let log = dir.path().join("flow.csv");
    let r = fnshape(&[&p("compute"), &mesh, &p("--landmarks"), &lm, &p("--log-flow"), &log, &p("-o"), &out]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));

    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["genus"], 1);
    assert_eq!(json["punctures"], 1);
    assert_eq!(json["pairs"].as_array().unwrap().len(), 1);
    assert!(json["pairs"][0]["length"].as_f64().unwrap() > 0.0);
    assert!(json["pairs"][0]["twist"].is_f64());
    assert_eq!(json["boundary_lengths"], serde_json::json!([0.0]));
    assert!(json["diagnostics"]["residual"].as_f64().unwrap() <= 1e-8);
    assert_eq!(json["diagnostics"]["curves"][0]["kind"], "interior");
    assert_eq!(json["diagnostics"]["curves"][1]["kind"], "boundary");
    assert_eq!(json["provenance"]["mesh_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(json["provenance"]["tolerance"], 1e-8);

    let csv = std::fs::read_to_string(&log).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "iteration,residual,min_radius,step_scale,gauss_bonnet_error");
    assert_eq!(lines.len(), json["diagnostics"]["iterations"].as_u64().unwrap() as usize + 2);
}

#[test]
fn inadmissible_input_exits_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    let ico = fixtures::icosphere(2);
    let mesh = save_off(dir.path(), "ico.off", &ico);
    let ids: Vec<String> = fixtures::spread_landmarks(&ico, 2).iter().map(|v| v.to_string()).collect();
    let lm = save(dir.path(), "ico.lm", &ids.join(" "));
    let r = fnshape(&[&p("compute"), &mesh, &p("--landmarks"), &lm, &p("-o"), &dir.path().join("x.json")]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("excise"), "{}", String::from_utf8_lossy(&r.stderr));

    let r = fnshape(&[&p("compute"), &save(dir.path(), "m.ply", ""), &p("-o"), &dir.path().join("x.json")]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn flow_budget_exhaustion_exits_with_convergence_code() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = save_off(dir.path(), "torus.off", &fixtures::torus(16, 8, 3.0, 1.0));
    let lm = save(dir.path(), "torus.lm", "0");
    let log = dir.path().join("flow.csv");
    let r = fnshape(&[
        &p("compute"),
        &mesh,
        &p("--landmarks"),
        &lm,
        &p("--max-iter"),
        &p("1"),
        &p("--log-flow"),
        &log,
        &p("-o"),
        &dir.path().join("x.json"),
    ]);
    assert_eq!(r.status.code(), Some(3));
    assert_eq!(std::fs::read_to_string(&log).unwrap().lines().count(), 3);
    assert!(!dir.path().join("x.json").exists());
}

#[test]
fn distance_and_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let descriptors = dir.path().join("descriptors");
    std::fs::create_dir(&descriptors).unwrap();
    let lm = save(dir.path(), "lm", "0");
    for (name, mesh) in [
        ("a", fixtures::torus(16, 8, 3.0, 1.0)),
        ("b", fixtures::torus(16, 8, 2.5, 1.0)),
        ("c", fixtures::reglued_torus(16, 8, 3.0, 1.0, 2)),
    ] {
        let src = save_off(dir.path(), &format!("{name}.off"), &mesh);
        let r = fnshape(&[&p("compute"), &src, &p("--landmarks"), &lm, &p("-o"), &descriptors.join(format!("{name}.json"))]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    let a = descriptors.join("a.json");
    let b = descriptors.join("b.json");
    let dist = |x: &Path, y: &Path| -> f64 {
        let r = fnshape(&[&p("distance"), x, y]);
        assert!(r.status.success());
        String::from_utf8(r.stdout).unwrap().trim().parse().unwrap()
    };
    assert_eq!(dist(&a, &a), 0.0);
    assert!(dist(&a, &b) > 0.0);
    assert_eq!(dist(&a, &b), dist(&b, &a));

    let csv_path = dir.path().join("m.csv");
    let r = fnshape(&[&p("matrix"), &descriptors, &p("-o"), &csv_path]);
    assert!(r.status.success());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["name", "a", "b", "c"]);
    for (i, row) in rows.iter().enumerate().skip(1) {
        assert_eq!(row[i].parse::<f64>().unwrap(), 0.0);
        for j in 1..4 {
            assert_eq!(row[j], rows[j][i]);
        }
    }
    assert_eq!(rows[1][2].parse::<f64>().unwrap(), dist(&a, &b));

    // Different stratum: a sphere with three punctures.
    let ico = fixtures::icosphere(2);
    let ids: Vec<String> = fixtures::spread_landmarks(&ico, 3).iter().map(|v| v.to_string()).collect();
    let src = save_off(dir.path(), "ico.off", &ico);
    let ilm = save(dir.path(), "ico.lm", &ids.join("\n"));
    let s = dir.path().join("s.json");
    assert!(fnshape(&[&p("compute"), &src, &p("--landmarks"), &ilm, &p("-o"), &s]).status.success());
    assert_eq!(fnshape(&[&p("distance"), &a, &s]).status.code(), Some(2));
}

#[test]
fn validate_reports_structure() {
    let dir = tempfile::tempdir().unwrap();
    let (pos, faces) = fixtures::tetrahedron();
    let tet = save(dir.path(), "tet.off", &write_off(&pos, &faces));
    let r = fnshape(&[&p("validate"), &tet]);
    assert!(r.status.success());
    let report: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(report["genus"], 0);
    assert_eq!(report["admissible"][3]["admissible"], true);
    assert_eq!(report["admissible"][2]["admissible"], false);

    let fan = save(dir.path(), "fan.off", "OFF\n5 3 0\n0 0 0\n1 0 0\n0 1 0\n0 -1 0\n0 0 1\n3 0 1 2\n3 1 0 3\n3 0 1 4\n");
    let r = fnshape(&[&p("validate"), &fan]);
    assert_eq!(r.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(report["manifold"], false);
}
