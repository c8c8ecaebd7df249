use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mplus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mplus")).args(args).env_remove("MPLUS_CACHE_DIR").output().unwrap()
}

fn script(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scripts").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_code_follows_the_report() {
    let ok = mplus(&["verify", script("right_omega.mplus").to_str().unwrap(), "--rank", "2"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).ends_with("PASS\n"));

    let bad = mplus(&["verify", script("disproved.mplus").to_str().unwrap(), "--format", "json"]);
    assert_eq!(bad.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&bad)).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["entries"][0]["status"], "disproved");
    assert_eq!(v["entries"][0]["witness"]["family"], "Hminus");
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.mplus");
    std::fs::write(&broken, "assert_equiv w1 * (\n").unwrap();
    let o = mplus(&["verify", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:"));

    let high = dir.path().join("high.mplus");
    std::fs::write(&high, "assert_eval w3 on Tplus = 1/16\n").unwrap();
    assert_eq!(mplus(&["verify", high.to_str().unwrap(), "--rank", "2"]).status.code(), Some(2));
    assert_eq!(mplus(&["verify", high.to_str().unwrap(), "--rank", "3"]).status.code(), Some(0));

    assert_eq!(mplus(&["verify", "/nonexistent/script.mplus"]).status.code(), Some(2));
    assert_eq!(mplus(&["suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(mplus(&["tables", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn suite_and_tables_commands() {
    let o = mplus(&["suite", "tables", "--rank", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 40);

    let csv = mplus(&["tables", "--rank", "3"]);
    assert_eq!(csv.status.code(), Some(0));
    assert_eq!(stdout(&csv), stdout(&mplus(&["tables", "--rank", "3"])));
    let json = mplus(&["tables", "--rank", "2", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 40);

    let d = mplus(&["delta-table", "--degree", "4"]);
    assert_eq!(d.status.code(), Some(0));
    assert!(stdout(&d).lines().any(|l| l == "1 1 1/16"), "{}", stdout(&d));
}

#[test]
fn echelon_cache_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_mplus"))
            .args(["verify", script("right_omega.mplus").to_str().unwrap(), "--format", "json"])
            .env("MPLUS_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0));
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let second = run();
    assert_eq!(second.status.code(), Some(0));
    let strip = |o: &Output| {
        let v: serde_json::Value = serde_json::from_str(&stdout(o)).unwrap();
        v["entries"].as_array().unwrap().iter().map(|e| (e["text"].clone(), e["status"].clone())).collect::<Vec<_>>()
    };
    assert_eq!(strip(&first), strip(&second));
}
