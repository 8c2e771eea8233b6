use std::path::{Path, PathBuf};
use std::process::Command;

use gaussmap::fixtures;
use gaussmap::mesh::to_off;
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    json: Value,
}

fn gaussmap(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_gaussmap"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("utf8");
    let json = serde_json::from_str(stdout.trim()).unwrap_or(Value::Null);
    Run {
        code: out.status.code().expect("exit code"),
        stdout,
        json,
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn write_json(dir: &TempDir, name: &str, v: &impl serde::Serialize) -> PathBuf {
    write(dir, name, &serde_json::to_string(v).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_star_on_cube_corner() {
    let dir = TempDir::new().unwrap();
    let f = write_json(&dir, "cube.json", &fixtures::cube_corner());
    let r = gaussmap(&["analyze-star", s(&f)]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["schema_version"], "1");
    assert_eq!(r.json["shape"], "ConvexPolygon");
    let k = r.json["K"].as_f64().unwrap();
    assert!((k - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert!(r.stdout.contains("\"K\":1.5707963267948966"));
    assert_eq!(r.json["c"], 0);
}

#[test]
fn analyze_star_with_direction_and_samples() {
    let dir = TempDir::new().unwrap();
    let f = write_json(&dir, "saddle.json", &fixtures::saddle());
    let r = gaussmap(&[
        "analyze-star",
        s(&f),
        "--xi",
        "0.3,-0.2,0.9",
        "--samples",
        "50000",
        "--seed",
        "3",
    ]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["shape"], "PseudoQuadrilateral");
    let (i, m) = (r.json["index"].as_i64().unwrap(), r.json["M"].as_i64().unwrap());
    assert_eq!(i, 1 - m / 2);
    let c = r.json["c"].as_i64().unwrap();
    let (wp, wm) = (r.json["w_plus"].as_i64().unwrap(), r.json["w_minus"].as_i64().unwrap());
    assert_eq!(c + i, wp + wm);
    assert_eq!(r.json["degree"].as_i64().unwrap(), wp - wm);
    assert_eq!(r.json["monte_carlo"]["n_samples"], 50000);
}

#[test]
fn identical_runs_give_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let f = write_json(&dir, "two.json", &fixtures::two_reflex());
    let a = gaussmap(&["gauss-image", s(&f), "--dump-arrangement", "--output", "pretty"]);
    let b = gaussmap(&["gauss-image", s(&f), "--dump-arrangement", "--output", "pretty"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let faces = a.json["arrangement"]["faces"].as_array().unwrap();
    assert!(faces.iter().all(|f| f["winding"].is_i64()));
    let v1 = gaussmap(&[
        "verify",
        "--suite",
        "degree-winding",
        "--n",
        "60",
        "--seed",
        "5",
        "--jobs",
        "1",
    ]);
    let v3 = gaussmap(&[
        "verify",
        "--suite",
        "degree-winding",
        "--n",
        "60",
        "--seed",
        "5",
        "--jobs",
        "3",
    ]);
    assert_eq!(v1.stdout, v3.stdout);
}

#[test]
fn classify_two_reflex_fixture() {
    let dir = TempDir::new().unwrap();
    let f = write_json(&dir, "two.json", &fixtures::two_reflex());
    let r = gaussmap(&["classify", s(&f)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["shape"], "PseudoDigon");
    assert_eq!(r.json["reflex_faces"], serde_json::json!([0, 2]));
}

#[test]
fn index_and_degree_of_polygons() {
    let dir = TempDir::new().unwrap();
    let f = write_json(&dir, "doubled.json", &fixtures::doubled_polygon());
    let r = gaussmap(&["degree", s(&f), "--seed", "11"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["c"], 1);
    assert_eq!(r.json["meridian_independent"], true);
    let i = gaussmap(&["index", s(&f), "--seed", "11"]);
    assert_eq!(i.json["index"], r.json["index"]);
    assert_eq!(i.json["xi"], r.json["xi"]);
    // the object form of a polygon file
    let obj = write(
        &dir,
        "obj.json",
        &format!("{{\"vertices\": {}}}", std::fs::read_to_string(&f).unwrap()),
    );
    assert_eq!(
        gaussmap(&["degree", s(&obj), "--seed", "11"]).json["degree"],
        r.json["degree"]
    );
}

#[test]
fn realize_then_normal_form_round_trip() {
    let dir = TempDir::new().unwrap();
    let r = gaussmap(&["realize", "--index", "-3", "--degree", "-1"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(
        (r.json["index"].as_i64(), r.json["degree"].as_i64()),
        (Some(-3), Some(-1))
    );
    let f = write_json(&dir, "w.json", &r.json["polygon"]);
    let nf = gaussmap(&["normal-form", s(&f), "--xi", "0,0,1"]);
    assert_eq!(nf.code, 0, "{}", nf.stdout);
    assert_eq!(nf.json["diagram"]["r"], 4);
    assert_eq!(nf.json["diagram_degree"], -1);
    let d = write_json(&dir, "d.json", &nf.json["diagram"]);
    let back = gaussmap(&["realize", "--diagram", s(&d)]);
    assert_eq!(back.code, 0, "{}", back.stdout);
    assert_eq!(back.json["degree"], -1);
}

#[test]
fn inadmissible_pair_is_rejected() {
    let r = gaussmap(&["realize", "--index", "-2", "--degree", "1"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["error"]["code"], "InadmissiblePair");
}

#[test]
fn analyze_mesh_tetrahedron() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "tet.off", &to_off(&fixtures::tetrahedron()));
    let r = gaussmap(&["analyze-mesh", s(&f), "--directions", "3"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["chi"], 2);
    let total = r.json["total_K"].as_f64().unwrap();
    assert!((total - 4.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!(r.json["gauss_bonnet_residual"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(r.json["index_sums"], serde_json::json!([2, 2, 2]));
    assert_eq!(r.json["degree_sums"], serde_json::json!([0, 0, 0]));
}

#[test]
fn three_critical_points_on_the_torus_and_not_on_a_sphere() {
    let dir = TempDir::new().unwrap();
    let torus = write(&dir, "torus.off", &to_off(&fixtures::csaszar_torus()));
    let xi = fixtures::csaszar_three_cp_direction().to_array();
    let xi = format!("{},{},{}", xi[0], xi[1], xi[2]);
    let r = gaussmap(&["analyze-mesh", s(&torus), "--xi", &xi, "--three-cp"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let v = &r.json["three_critical_points"][0];
    assert_eq!(
        (v["middle"]["index"].as_i64(), v["middle"]["degree"].as_i64()),
        (Some(-2), Some(0))
    );

    let sphere = write(&dir, "sphere.off", &to_off(&fixtures::icosphere(1, 0.3)));
    let r = gaussmap(&["analyze-mesh", s(&sphere), "--three-cp"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json["error"]["code"], "NotThreeCritical");
}

#[test]
fn verify_suites_report_and_exit() {
    let r = gaussmap(&["verify", "--suite", "egregium", "--n", "100", "--seed", "7"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["failed"], 0);
    assert!(r.json["max_residual"].as_f64().unwrap() < 1e-8);
    // the component form of the layer count fails on annular layers
    let r = gaussmap(&["verify", "--suite", "shape-formula", "--n", "200", "--seed", "0"]);
    assert_eq!(r.code, 2, "{}", r.stdout);
    assert_eq!(r.json["ok"], false);
    let r = gaussmap(&["verify", "--suite", "shape-euler", "--n", "200", "--seed", "0"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
}

#[test]
fn errors_use_the_envelope() {
    let dir = TempDir::new().unwrap();
    let missing = gaussmap(&["analyze-star", "/nonexistent/star.json"]);
    assert_eq!(missing.code, 1);
    assert_eq!(missing.json["error"]["code"], "IoError");
    assert_eq!(missing.json["schema_version"], "1");

    let bad = write(&dir, "bad.json", "{\"center\": [0, 0");
    assert_eq!(gaussmap(&["classify", s(&bad)]).json["error"]["code"], "ParseError");

    let poly = write_json(&dir, "p.json", &fixtures::figure_eight());
    let wrong = gaussmap(&["classify", s(&poly)]);
    assert_eq!(
        (wrong.code, wrong.json["error"]["code"].as_str()),
        (1, Some("UsageError"))
    );

    let open = write(
        &dir,
        "open.off",
        "OFF\n4 3 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 0 3 2\n",
    );
    let r = gaussmap(&["analyze-mesh", s(&open)]);
    assert_eq!((r.code, r.json["error"]["code"].as_str()), (1, Some("NotClosed")));

    let usage = gaussmap(&["verify", "--n", "many"]);
    assert_eq!(
        (usage.code, usage.json["error"]["code"].as_str()),
        (1, Some("UsageError"))
    );
    assert_eq!(gaussmap(&["--help"]).code, 0);
    assert_eq!(gaussmap(&["nope"]).code, 1);
}

#[test]
fn non_general_direction_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let f = write_json(&dir, "cube.json", &fixtures::cube_corner());
    // ξ = (1,0,0) is orthogonal to the edge directions (0,1,0) and (0,0,1)
    let r = gaussmap(&["index", s(&f), "--xi", "1,0,0"]);
    assert_eq!((r.code, r.json["error"]["code"].as_str()), (1, Some("NotGeneral")));
}
