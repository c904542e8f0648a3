use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn tsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsurf"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("tsurf runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(tsurf(&["--help"]).status.code(), Some(0));
    assert_eq!(tsurf(&["--version"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["polyscan", "--max-m", "0"][..],
        &["verify", "--entry", "nosuch"],
        &["verify", "--entry", "scherk_16", "--param", "nope=1"],
        &["verify", "--entry", "scherk_16", "--param", "c"],
        &["field", "surfaces/missing.surf"],
        &["frobnicate"],
        &["powerscan", "--coeffs", "1,x"],
    ] {
        let out = tsurf(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn malformed_surface_file_reports_line() {
    let path = scratch("bad_key.surf", "f = u^2\ng = v^2\ncolour = red\n");
    let out = tsurf(&["field", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn evaluation_failure_exits_two() {
    let path = scratch("log_u.surf", "f = log(u)\ng = v^2\nu_min = -1\nu_max = 1\n");
    for cmd in ["field", "mesh"] {
        let out = tsurf(&[cmd, path.to_str().unwrap(), "--grid", "4"]);
        assert_eq!(out.status.code(), Some(2), "{cmd}");
        assert!(out.stdout.is_empty(), "{cmd} wrote partial output");
    }
}

#[test]
fn smallest_mesh_has_two_triangles() {
    let out = tsurf(&["mesh", "surfaces/scherk.surf", "--grid", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 4);
    let faces: Vec<_> = text.lines().filter(|l| l.starts_with("f ")).collect();
    assert_eq!(faces, ["f 1 3 4", "f 1 4 2"]);
}

#[test]
fn default_mesh_size_and_face_indices() {
    let out = tsurf(&["mesh", "surfaces/sinh_cos.surf"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let vertices = text.lines().filter(|l| l.starts_with("v ")).count();
    assert_eq!(vertices, 2500);
    let mut faces = 0;
    for line in text.lines().filter(|l| l.starts_with("f ")) {
        faces += 1;
        for idx in line.split_whitespace().skip(1) {
            let k: usize = idx.parse().unwrap();
            assert!((1..=vertices).contains(&k), "{line}");
        }
    }
    assert_eq!(faces, 2 * 49 * 49);
}

#[test]
fn field_and_mesh_agree_on_heights() {
    let field = stdout(&tsurf(&["field", "surfaces/cosh_cos.surf", "--grid", "7"]));
    let mesh = stdout(&tsurf(&["mesh", "surfaces/cosh_cos.surf", "--grid", "7"]));
    let rows = csv_rows(&field);
    let vertices: Vec<Vec<&str>> = mesh
        .lines()
        .filter(|l| l.starts_with("v "))
        .map(|l| l.split_whitespace().skip(1).collect())
        .collect();
    assert_eq!(rows.len(), 49);
    assert_eq!(rows.len(), vertices.len());
    for (row, vertex) in rows.iter().zip(&vertices) {
        assert_eq!(&row[..3], &vertex[..]);
    }
}

#[test]
fn field_header_and_lambda_two_relation() {
    let text = stdout(&tsurf(&["field", "surfaces/sinh_cos.surf"]));
    assert_eq!(text.lines().next().unwrap(), tsurf_cli::format::FIELD_HEADER);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 2500);
    for row in &rows {
        assert_eq!(row.len(), 14);
        assert_eq!(row[13], "true");
        let h: f64 = row[10].parse().unwrap();
        let kii: f64 = row[11].parse().unwrap();
        assert!((kii - 2.0 * h).abs() < 1e-8, "{row:?}");
    }
}

#[test]
fn degenerate_points_print_nan() {
    let path = scratch("cylinder.surf", "f = u\ng = v^3\n");
    let text = stdout(&tsurf(&["field", path.to_str().unwrap(), "--grid", "3"]));
    for row in csv_rows(&text) {
        assert_eq!(
            (row[11].as_str(), row[12].as_str(), row[13].as_str()),
            ("nan", "nan", "false")
        );
    }
}

#[test]
fn verify_all_passes_with_json_lines() {
    let out = tsurf(&["verify", "--all", "--grid", "12", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 15);
    for line in text.lines() {
        let value: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["name", "params", "relation", "max_residual", "pass"] {
            assert!(value.get(key).is_some(), "{key} missing in {line}");
        }
        assert_eq!(value["pass"], true);
    }
}

#[test]
fn verify_accepts_parameter_overrides() {
    let out = tsurf(&[
        "verify",
        "--entry",
        "hyperbolic_paraboloid_37",
        "--param",
        "a=1.5",
        "--param",
        "u0=0.3",
        "--grid",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("a=1.5"));
}

#[test]
fn catalog_lists_fifteen_entries() {
    let text = stdout(&tsurf(&["catalog", "--json"]));
    let names: Vec<String> = text
        .lines()
        .map(|l| {
            serde_json::from_str::<serde_json::Value>(l).unwrap()["name"]
                .as_str()
                .unwrap()
                .to_string()
        })
        .collect();
    assert_eq!(names.len(), 15);
    assert_eq!(names[0], "scherk_16");
}

#[test]
fn polyscan_and_powerscan_succeed() {
    let out = tsurf(&["polyscan", "--max-m", "3", "--max-n", "2", "--draws", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 3 * 2 * 4);

    let out = tsurf(&["powerscan"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("p = 1/3    q = 1/3")).count(), 4);
}

#[test]
fn output_file_matches_stdout() {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join("field_out.csv");
    let out = tsurf(&[
        "field",
        "surfaces/scherk.surf",
        "--grid",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let direct = tsurf(&["field", "surfaces/scherk.surf", "--grid", "5"]).stdout;
    assert_eq!(std::fs::read(&path).unwrap(), direct);
}

#[test]
fn outputs_are_byte_deterministic() {
    for args in [
        &["field", "surfaces/sinh_over_cosh.surf", "--grid", "15"][..],
        &["mesh", "surfaces/hyperbolic_paraboloid.surf", "--grid", "15"],
        &["verify", "--all", "--grid", "10"],
        &[
            "polyscan", "--max-m", "3", "--max-n", "3", "--draws", "3", "--seed", "7",
        ],
    ] {
        assert_eq!(tsurf(args).stdout, tsurf(args).stdout, "{args:?}");
    }
}
