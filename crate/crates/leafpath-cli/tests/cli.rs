use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["leafpath"];
    argv.extend_from_slice(args);
    let code = leafpath_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("leafpath-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn paper_tables_output_is_verbatim() {
    let (code, out, _) = run(&["report", "--paper-tables", &fixture("tetrahedron.cx")]);
    assert_eq!(code, 0);
    let expected = "\
# bounds
table\tk\tside\td_down\th\tlower_bound\tupper_bound\tspectral_gap
quotient\t1\tup\t4/3\t2/3\t1/9\t2/3\t0.666666666667
quotient\t1\tdown\t4/3\t2/3\t1/12\t2/3\t0.666666666667
quotient\t2\tup\t3/2\t1\t1/12\t2/3\t0.666666666667
quotient\t2\tdown\t3/2\t1\t1/9\t2/3\t0.666666666667
signed\t1\tup\t4/3\t1/3\t1/36\t1/3\t0.333333333333
signed\t1\tdown\t4/3\t4/9\t1/27\t4/9\t0.333333333333
signed\t2\tup\t3/2\t2/3\t1/27\t4/9\t0.333333333333
signed\t2\tdown\t3/2\t1/2\t1/36\t1/3\t0.333333333333
";
    assert_eq!(out, expected);
}

#[test]
fn walk_simulation_is_byte_deterministic() {
    let args = ["walk-sim", &fixture("tetrahedron.cx"), "--steps", "200000", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let c = run(&["walk-sim", &fixture("tetrahedron.cx"), "--steps", "200000", "--seed", "8"]);
    assert_ne!(a.1, c.1);
}

#[test]
fn every_verb_emits_valid_json() {
    let tet = fixture("tetrahedron.cx");
    let cyc = fixture("even_cycle.cx");
    let cov = fixture("small_strong.cover");
    let cases: Vec<Vec<&str>> = vec![
        vec!["lp", &cov],
        vec!["stationary", &tet, "--view", "cover"],
        vec!["walk", &cov, "-k", "1", "--direction", "down", "--view", "cover"],
        vec!["walk-sim", &tet, "--steps", "1000", "--seed", "3"],
        vec!["spectrum", &tet],
        vec!["spectrum", &cov, "-k", "1"],
        vec!["laplacian", &tet, "-k", "1", "--combinatorial"],
        vec!["hodge", &cyc],
        vec!["coherent", &cyc],
        vec!["partition", &cyc, "-k", "1"],
        vec!["cheeger", &tet, "-k", "2"],
        vec!["report", &cyc],
        vec!["verify", &cov],
        vec!["self-test"],
    ];
    for mut args in cases {
        args.extend(["--format", "json"]);
        let (code, out, err) = run(&args);
        assert_eq!(code, 0, "{args:?}: {err}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert!(!v["tables"].as_array().unwrap().is_empty(), "{args:?}");
    }
}

#[test]
fn lp_on_the_mixed_complex() {
    let (code, out, _) = run(&["lp", &fixture("mixed.cx"), "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v["tables"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 26);
    let x3 = rows.iter().find(|r| r["node"] == "{x3}").unwrap();
    assert_eq!((x3["lp"].as_str(), x3["rp"].as_str()), (Some("8"), Some("1")));
}

#[test]
fn laplacian_entries_are_exact() {
    let (code, out, _) = run(&["laplacian", &fixture("path3.cx"), "-k", "0"]);
    assert_eq!(code, 0);
    // Middle vertex has degree 2, ends degree 1: off-diagonal entries are -1/(2·sqrt(2)) = -sqrt(1/8).
    assert!(out.contains("up\t{x0}\t{x1}\t-sqrt(1/8)\t"), "{out}");
    assert!(out.contains("up\t{x0}\t{x0}\t1/2\t0.5\n"), "{out}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["lp", "does-not-exist.cx"]).0, 1);
    assert_eq!(run(&["lp", &scratch("bad.txt", "x0 x1\n")]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["laplacian", &fixture("hollow_triangle.cx"), "-k", "5"]).0, 1);
    assert_eq!(run(&["cheeger", &fixture("small_strong.cover"), "-k", "1"]).0, 1);
    assert_eq!(run(&["walk", &fixture("skip_level.cover"), "-k", "0"]).0, 1);
    let (code, _, err) = run(&["lp", &scratch("broken.cover", "node a 0\nedge a b +1\n")]);
    assert_eq!(code, 1, "{err}");

    // The complete graph on eight vertices has 28 edges in one down-component.
    let mut k8 = String::new();
    for i in 0..8 {
        for j in i + 1..8 {
            k8.push_str(&format!("v{i} v{j}\n"));
        }
    }
    let (code, _, err) = run(&["cheeger", &scratch("k8.cx", &k8), "-k", "1"]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("guard"), "{err}");

    assert_eq!(run(&["verify", &fixture("mixed.cx")]).0, 0);
    assert_eq!(run(&["self-test"]).0, 0);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn thread_count_does_not_change_results() {
    let tet = fixture("mixed.cx");
    let one = run(&["cheeger", &tet, "-k", "1", "--threads", "1"]);
    let four = run(&["cheeger", &tet, "-k", "1", "--threads", "4"]);
    assert_eq!(one.0, 0);
    assert_eq!(one.1, four.1);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_leafpath");
    let ok = Command::new(bin).args(["hodge", &fixture("hollow_triangle.cx")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.contains("1\t3\t0\t2\t1\t1\n"), "{text}");
    let bad = Command::new(bin).args(["hodge", "missing.cx"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(!bad.stderr.is_empty());
}
