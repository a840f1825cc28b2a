//! End-to-end runs of the `resfin` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn spec(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name).to_str().unwrap().to_string()
}

fn resfin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resfin")).args(args).env_remove("RESFIN_BUDGET").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn arithmetic_commands() {
    assert_eq!(stdout(&resfin(&["dz", "12"])), "5\n");
    assert_eq!(stdout(&resfin(&["dz", "-12"])).trim(), "5");
    assert_eq!(stdout(&resfin(&["gauss-count", "2", "3"])), "2\n");
    assert_eq!(stdout(&resfin(&["farb-z", "12"])), "5\n");
    assert_eq!(stdout(&resfin(&["farb-z", "--samples", "1,2,60"])), "n,farb\n1,2\n2,3\n60,7\n");
    assert_eq!(resfin(&["dz", "0"]).status.code(), Some(3));
}

#[test]
fn witness_verify_round_trip() {
    let path = scratch("sanov-witness.json");
    let out = resfin(&["witness", &spec("sanov.toml"), "--word", "a b^-1 a", "-o", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = resfin(&["verify", &spec("sanov.toml"), path.to_str().unwrap()]);
    assert_eq!(stdout(&out), "ok\n");

    // the same witness does not belong to another group
    let out = resfin(&["verify", &spec("aff3.toml"), path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));

    // tampering with the claimed field size is caught
    let text = std::fs::read_to_string(&path).unwrap();
    let tampered = scratch("sanov-tampered.json");
    let field_line = text.lines().find(|l| l.contains("\"field_size\"")).unwrap();
    std::fs::write(&tampered, text.replace(field_line, "  \"field_size\": \"97\",")).unwrap();
    let out = resfin(&["verify", &spec("sanov.toml"), tampered.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("\"rejected\""), "{err}");
}

#[test]
fn error_exit_codes() {
    let out = resfin(&["witness", &spec("sanov.toml"), "--word", "a a^-1"]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    let line: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(line["error"], "identity-word");
    assert_eq!(resfin(&["witness", &spec("sanov.toml"), "--word", "c"]).status.code(), Some(3));
    assert_eq!(resfin(&["profile", &spec("sanov.toml"), "--radius", "4", "--budget", "ball=5"]).status.code(), Some(6));
    assert_eq!(resfin(&["verify", &spec("sanov.toml"), "/nonexistent/witness.json"]).status.code(), Some(1));
}

#[test]
fn profile_and_growth() {
    let out = resfin(&["profile", &spec("cyclic.toml"), "--radius", "6", "--d-reduction-radius", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,ball_size,max_gl_bound,max_image_order,max_d_reduction,exhaustive_flag");
    let d: Vec<&str> = lines.map(|l| l.split(',').nth(4).unwrap()).collect();
    assert_eq!(d, ["2", "3", "3", "3", "3", "4"]);

    let out = resfin(&["growth", &spec("klein.toml"), "--radius", "3"]);
    assert_eq!(stdout(&out), "r,ball_size\n0,1\n1,3\n2,4\n3,4\n");

    let out = resfin(&["d-reduction", &spec("sanov.toml"), "--word", "a"]);
    assert!(stdout(&out).starts_with("min_order=4 exhaustive=true"), "{}", stdout(&out));
}

#[test]
fn audit_threshold_and_self_check() {
    let out = resfin(&["audit-z", "--max", "100"]);
    assert!(out.status.success());
    let csv = scratch("farb.csv");
    std::fs::write(&csv, stdout(&resfin(&["farb-z", "--samples", "16,100,10000"]))).unwrap();
    assert!(resfin(&["threshold", csv.to_str().unwrap()]).status.success());
    let a = resfin(&["--seed", "7", "lemma-z-check", "--count", "30"]);
    let b = resfin(&["--seed", "7", "lemma-z-check", "--count", "30"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("seed=7 count=30 nonzero=30"));
}
