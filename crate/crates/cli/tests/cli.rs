use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use star_core::fano::{matching_to_branch_matrix, perfect_matchings};
use star_core::numeric2d::{apply_star, make_phantom, Domain2D, Field2D, Phantom};
use star_core::polyring::json::{matrix_from_json, polynomial_from_json};
use star_core::polyring::AnyMatrix;
use star_core::starcore::json::star_from_json;
use star_core::symmetry::{platonic_branches, regular_polygon_branches, SolidKind};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn report(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn star(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_star")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn shape(dir: &TempDir, args: &[&str], name: &str) -> PathBuf {
    let p = dir.path().join(name);
    let mut full = vec!["shapes"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", s(&p)]);
    assert_eq!(star(&full).code, 0);
    p
}

fn without_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time_ms");
    v
}

#[test]
fn dual_reports_class_and_laplacian_form() {
    let dir = TempDir::new().unwrap();
    let tri = shape(&dir, &["polygon", "--m", "3", "--elementary", "1"], "tri.json");
    let r = star(&["dual", s(&tri)]).report();
    let out = &r["outputs"];
    assert_eq!(out["class"], "elliptic");
    assert_eq!(out["laplacian_power"]["j"], 1);
    assert!((out["laplacian_power"]["c_f64"].as_f64().unwrap() + 0.75).abs() < 1e-12);

    let tet = shape(&dir, &["tetrahedron", "--elementary", "2"], "tet.json");
    let out = star(&["dual", s(&tet)]).report()["outputs"].clone();
    assert_eq!(out["field"], "exact");
    assert_eq!(out["laplacian_power"]["c"], "-2");

    let sq = shape(&dir, &["polygon", "--m", "4", "--elementary", "1"], "sq.json");
    let out = star(&["dual", s(&sq)]).report()["outputs"].clone();
    assert_eq!(out["class"], "identically_zero");
    assert_eq!(out["laplacian_power"], Value::Null);

    let text = star(&["dual", s(&tri), "--format", "text"]);
    assert!(text.stdout.contains("class: elliptic"), "{}", text.stdout);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let tri = shape(&dir, &["polygon", "--m", "3", "--elementary", "1"], "tri.json");
    let sq = shape(&dir, &["polygon", "--m", "4", "--elementary", "1"], "sq.json");
    assert_eq!(star(&["injective", s(&tri)]).code, 0);
    assert_eq!(star(&["injective", s(&sq)]).code, 1);

    let u = matching_to_branch_matrix(&perfect_matchings(6).unwrap()[4]);
    let rows: Vec<Vec<String>> = (0..6)
        .map(|i| u.matrix().row(i).iter().map(|c| c.to_string()).collect())
        .collect();
    let matched = write(
        &dir,
        "matched.json",
        &json!({"p": {"elementary": 1}, "U": {"rows": rows}}),
    );
    assert_eq!(star(&["injective", s(&matched)]).code, 1);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"p\": ").unwrap();
    let r = star(&["dual", s(&bad)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.starts_with("error:"));
    let zero_row = write(
        &dir,
        "zero.json",
        &json!({"p": {"elementary": 1}, "U": {"rows": [[1, 0], [0, 0]]}}),
    );
    assert_eq!(star(&["dual", s(&zero_row)]).code, 2);
    assert_eq!(star(&["dual", "/nonexistent/star.json"]).code, 2);
    assert_eq!(star(&["shapes", "polygon"]).code, 2);
    assert_eq!(star(&["shapes", "cube", "--m", "3"]).code, 2);
    assert_eq!(star(&["no-such-command"]).code, 2);

    assert_eq!(star(&["fano", "matchings", "--n", "9"]).code, 3);
    let big = shape(&dir, &["polygon", "--m", "25", "--elementary", "1"], "big.json");
    assert_eq!(star(&["symmetry", s(&big)]).code, 3);
}

#[test]
fn symmetry_reports() {
    let dir = TempDir::new().unwrap();
    for (args, want) in [
        (&["polygon", "--m", "4", "--elementary", "1"][..], 8),
        (&["polygon", "--m", "3", "--elementary", "1"][..], 6),
        (&["tetrahedron", "--elementary", "2"][..], 24),
    ] {
        let p = shape(&dir, args, "s.json");
        let out = star(&["symmetry", s(&p)]).report()["outputs"].clone();
        assert_eq!(out["count"], want);
        assert_eq!(out["is_group"], true);
        assert_eq!(out["all_invariant"], true);
    }
    let generic = write(
        &dir,
        "g.json",
        &json!({"p": {"elementary": 1}, "U": {"rows": [[1, 0], [0, 1], [-3, -7]]}}),
    );
    let out = star(&["symmetry", s(&generic)]).report()["outputs"].clone();
    assert_eq!(out["count"], 1);
    assert_eq!(out["symmetries"][0]["permutation"], json!([1, 2, 3]));
}

#[test]
fn emitted_artifacts_round_trip() {
    let dir = TempDir::new().unwrap();
    for kind in SolidKind::ALL {
        let p = shape(&dir, &[kind.name(), "--elementary", "2"], "solid.json");
        let back = star_from_json(&serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap()).unwrap();
        assert_eq!(back, platonic_branches(kind).elementary_star(2).unwrap());
        let r = star(&["shapes", kind.name()]).report();
        assert_eq!(
            matrix_from_json(&r["outputs"]["artifact"]).unwrap(),
            platonic_branches(kind).to_any_matrix()
        );
    }
    let r = star(&["shapes", "polygon", "--m", "5"]).report();
    assert_eq!(r["outputs"]["m"], 5);
    assert_eq!(r["outputs"]["n"], 2);
    let want = AnyMatrix::Float(regular_polygon_branches(5).unwrap().into_matrix());
    assert_eq!(matrix_from_json(&r["outputs"]["artifact"]).unwrap(), want);

    let oct = shape(&dir, &["octahedron", "--elementary", "3"], "oct.json");
    let r = star(&["dual", s(&oct)]).report();
    let sigma = polynomial_from_json(&r["outputs"]["sigma"]).unwrap();
    assert_eq!(
        sigma,
        platonic_branches(SolidKind::Octahedron)
            .elementary_star(3)
            .unwrap()
            .dual_symbol()
            .unwrap()
            .sigma()
    );

    let r = star(&["fano", "matchings", "--n", "2"]).report();
    let items = r["outputs"]["matchings"].as_array().unwrap();
    assert_eq!(items.len(), 3);
    for (item, mt) in items.iter().zip(perfect_matchings(4).unwrap()) {
        assert_eq!(item["matching"], mt.to_string());
        let u = matrix_from_json(&item["U"]).unwrap();
        assert_eq!(u, AnyMatrix::Exact(matching_to_branch_matrix(&mt).into_matrix()));
    }
}

#[test]
fn fano_reports() {
    let r = star(&["fano", "cayley"]).report();
    let lines = r["outputs"]["lines"].as_array().unwrap();
    assert_eq!(lines.len(), 9);
    assert!(lines.iter().all(|l| l["in_hypersurface"] == true));
    assert_eq!(lines.iter().filter(|l| l["kind"] == "singular").count(), 6);

    let r = star(&["fano", "chart", "--m", "4", "--n", "2", "--solve", "--starts", "200"]).report();
    let out = &r["outputs"];
    assert_eq!(out["equations"].as_array().unwrap().len(), 4);
    assert_eq!(out["unknowns"], json!(["w1_1", "w1_2", "w2_1", "w2_2"]));
    let clusters = out["clusters"].as_array().unwrap();
    assert_eq!(clusters.len(), 3);
    assert!(clusters
        .iter()
        .all(|c| c["residual"].as_f64().unwrap() < 1e-12 && c["in_hypersurface"] == true));

    let r = star(&["fano", "chart", "--m", "5", "--n", "2"]).report();
    assert_eq!(r["outputs"]["equations"].as_array().unwrap().len(), 5);
    assert!(r["outputs"].get("clusters").is_none());
}

#[test]
fn sim_forward_invert_and_nullcheck() {
    let dir = TempDir::new().unwrap();
    let tri = shape(&dir, &["polygon", "--m", "3", "--elementary", "1"], "tri.json");
    let sq = shape(&dir, &["polygon", "--m", "4", "--elementary", "1"], "sq.json");
    let spec = Phantom::gaussian([0.1, -0.05], 0.15);
    let ph = write(&dir, "ph.json", &serde_json::to_value(&spec).unwrap());
    let data = dir.path().join("g.bin");
    let r = star(&[
        "sim",
        "forward",
        "--star",
        s(&tri),
        "--phantom",
        s(&ph),
        "--n",
        "64",
        "--out",
        s(&data),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);

    let f = make_phantom(&spec, &Domain2D::new(64).unwrap()).unwrap();
    let tri_star = regular_polygon_branches(3).unwrap();
    let expected = apply_star(&f, &star_core::starcore::StarSymbol::elementary(1, tri_star).unwrap()).unwrap();
    assert_eq!(Field2D::load(&data, 1.0).unwrap(), expected);

    let rec = dir.path().join("f.bin");
    let r = star(&[
        "sim",
        "invert",
        "--star",
        s(&tri),
        "--data",
        s(&data),
        "--phantom",
        s(&ph),
        "--out",
        s(&rec),
    ])
    .report();
    assert_eq!(r["outputs"]["method"]["method"], "laplacian_power");
    assert!(r["outputs"]["rel_l2_error"].as_f64().unwrap() < 0.1);
    assert_eq!(Field2D::load(&rec, 1.0).unwrap().n(), 64);
    assert_eq!(star(&["sim", "invert", "--star", s(&sq), "--data", s(&data)]).code, 1);

    let r = star(&[
        "sim",
        "nullcheck",
        "--star",
        s(&sq),
        "--phantom",
        s(&ph),
        "--n",
        "64",
        "--against",
        s(&tri),
    ])
    .report();
    assert!(r["outputs"]["ratio"].as_f64().unwrap() <= 1e-2);
    assert_eq!(r["outputs"]["injective"], false);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let tri = shape(&dir, &["polygon", "--m", "3", "--elementary", "1"], "tri.json");
    let runs = [
        vec![
            "fano", "chart", "--m", "5", "--n", "2", "--solve", "--starts", "40", "--seed", "7",
        ],
        vec!["symmetry", s(&tri)],
        vec!["dual", s(&tri)],
    ];
    for args in runs {
        let a = star(&args);
        let b = star(&args);
        assert_eq!(a.code, 0);
        assert_eq!(without_time(a.report()), without_time(b.report()));
        let strip = |t: &str| {
            t.lines()
                .filter(|l| !l.contains("wall_time_ms"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(strip(&a.stdout), strip(&b.stdout));
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", &json!({"seed": 11, "format": "json", "threads": 1}));
    let r = star(&["--config", s(&cfg), "fano", "cayley"]).report();
    assert_eq!(r["seed"], 11);
    let r = star(&["--config", s(&cfg), "--seed", "3", "fano", "cayley"]).report();
    assert_eq!(r["seed"], 3);
    let text = star(&["--config", s(&cfg), "--format", "text", "fano", "cayley"]);
    assert!(text.stdout.starts_with("L12 (singular)"), "{}", text.stdout);
    let bad = write(&dir, "bad.json", &json!({"sed": 1}));
    assert_eq!(star(&["--config", s(&bad), "fano", "cayley"]).code, 2);
}
