mod common;

use common::golden::{bin, compare, golden_path, run, CASES};

#[test]
fn golden_outputs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut failures = Vec::new();
    for (name, args) in CASES {
        if update {
            std::fs::write(golden_path(name), run(args)).unwrap();
        } else if let Err(e) = compare(name, args) {
            failures.push(e);
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn exported_files_behave_like_catalog_entries() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["m_e", "dyck1", "lm_2"] {
        let path = dir.path().join(format!("{name}.rlww"));
        let p = path.to_str().unwrap();
        assert_eq!(run(&["catalog", "export", name, "-o", p]), "exit 0\n");
        let a = run(&["enum", name, "--max-len", "8"]);
        let b = run(&["enum", p, "--max-len", "8"]);
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn syntax_errors_exit_3_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.rlww");
    std::fs::write(&path, "name bad\nwindow 2\ntrans q0 a a => accept\n").unwrap();
    let out = bin().args(["run", path.to_str().unwrap(), "a"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.rlww:3:"), "{err}");
}

#[test]
fn transform_examples() {
    let dir = tempfile::tempdir().unwrap();
    let built = dir.path().join("anbn.rlww");
    let b = built.to_str().unwrap();
    let out = run(&["transform", "gnf2hrrwwc", "anbn_gnf", "--window", "3", "-o", b]);
    assert!(out.starts_with("exit 0\n"), "{out}");
    assert!(out.contains("rule (1,a) (2,a) (3,b) -> (2,a)"), "{out}");
    assert!(run(&["check", b, "--what", "forms", "--form", "CL"]).starts_with("exit 0\n"));
    let d = run(&["decide", b, "aabb", "--kind", "hproper"]);
    assert!(d.starts_with("exit 0\n") && d.contains("witness: (1,a) (2,a) (3,b) (3,b)\n"), "{d}");
    assert_eq!(run(&["cmp", b, "oracle:anbn_gnf", "--max-len", "12"]), "exit 0\nequal <= 12\n");

    let failed = run(&["transform", "gnf2hrrwwc", "anbn_gnf", "--window", "2"]);
    assert!(failed.starts_with("exit 1\nsynthesis-failed\n"), "{failed}");

    let shrunk = dir.path().join("m_e_h_s.rlww");
    let s = shrunk.to_str().unwrap();
    assert_eq!(run(&["transform", "shrink", "m_e_h", "-o", s]), "exit 0\n");
    assert!(run(&["check", s, "--what", "det"]).starts_with("exit 1\n"));
    assert!(run(&["check", s, "--what", "shrink", "--max-len", "6"]).starts_with("exit 0\n"));
}

#[test]
fn cycle_degree_override() {
    assert!(run(&["check", "lm1", "--what", "cycle", "--max-len", "10"]).starts_with("exit 0\n"));
    assert!(run(&["check", "lm1", "--what", "cycle", "--mr", "1", "--max-len", "10"]).starts_with("exit 1\n"));
}

#[test]
fn limits_exhaustion_exits_2() {
    let out = bin().args(["--limits", "configs=2", "check", "dyck1", "--what", "mono", "--max-len", "8"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().env("REDUKTO_LIMITS", "configs=2").args(["decide", "m_e", "aaaaaaaa"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
