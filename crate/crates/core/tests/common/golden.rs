//! Golden CLI cases shared by the cli tests and the acceptance target.

use std::path::PathBuf;
use std::process::Command;

/// (golden file stem, arguments)
pub const CASES: &[(&str, &[&str])] = &[
    ("run_m_e_aaaa", &["run", "m_e", "aaaa", "--trace"]),
    ("run_m_e_aaa", &["run", "m_e", "aaa"]),
    ("decide_m_e_b_basic", &["decide", "m_e", "b", "--kind", "basic"]),
    ("decide_m_e_b_input", &["decide", "m_e", "b", "--kind", "input"]),
    ("decide_m_e_a8_input", &["decide", "m_e", "aaaaaaaa"]),
    ("check_m_e_mono", &["check", "m_e", "--what", "mono", "--max-len", "8"]),
    ("check_m_e_det", &["check", "m_e", "--what", "det"]),
    ("enum_m_e_input", &["enum", "m_e", "--kind", "input", "--max-len", "9"]),
    ("enum_m_e_basic", &["enum", "m_e", "--kind", "basic", "--max-len", "3"]),
    ("run_dyck1_member", &["run", "dyck1", "a1 a1 ā1 ā1 a1 ā1", "--trace"]),
    ("run_dyck1_nonmember", &["run", "dyck1", "a1 ā1 ā1 a1"]),
    ("decide_dyck1_empty", &["decide", "dyck1", "-"]),
    ("decide_dyck1_open", &["decide", "dyck1", "a1 a1 ā1"]),
    ("check_dyck1_mono", &["check", "dyck1", "--what", "mono", "--max-len", "10"]),
    ("check_dyck1_cpp", &["check", "dyck1", "--what", "cpp", "--max-len", "8"]),
    ("check_dyck1_forms", &["check", "dyck1", "--what", "forms", "--form", "CL"]),
    ("enum_dyck1_input", &["enum", "dyck1", "--kind", "input", "--max-len", "6"]),
    ("catalog", &["catalog"]),
    ("export_m_e", &["catalog", "export", "m_e"]),
    ("export_anbn_gnf", &["catalog", "export", "anbn_gnf"]),
];

pub fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_redukto"));
    c.env_remove("REDUKTO_LIMITS");
    c
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))
}

/// Runs the CLI and returns `exit N` followed by stdout.
pub fn run(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("run redukto");
    let code = out.status.code().expect("exit code");
    format!("exit {code}\n{}", String::from_utf8(out.stdout).expect("utf-8"))
}

/// `Ok` if the output matches the golden file, else the differing output.
pub fn compare(name: &str, args: &[&str]) -> Result<(), String> {
    let got = run(args);
    let want = std::fs::read_to_string(golden_path(name)).map_err(|e| format!("{name}: {e}"))?;
    if got == want {
        Ok(())
    } else {
        Err(format!("`redukto {}` differs from {name}.txt:\n{got}", args.join(" ")))
    }
}
