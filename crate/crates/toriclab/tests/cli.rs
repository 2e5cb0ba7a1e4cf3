use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    toriclab::oracle::fixtures_root().join("germs").join(format!("{name}.json"))
}

fn toriclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toriclab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn check_ct_on_p1_times_a1() {
    let f = fixture("p1_a1");
    let yes = toriclab(&["check-ct", "--t", "1", f.to_str().unwrap()]);
    assert_eq!(yes.status.code(), Some(0));
    assert!(stdout(&yes).contains("N ∩ int(tU) = ∅"));
    let no = toriclab(&["check-ct", "--t", "3/2", "--output", "json", f.to_str().unwrap()]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(json(&no)["witness"], serde_json::json!(["0", "1"]));
}

#[test]
fn global_complement_on_p1() {
    let f = fixture("p1_point_half");
    let o = toriclab(&["complement", "--t", "1/2", "--r", "1", "--scope", "total", "--output", "json", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["certificate"]["n"], serde_json::json!("2"));
}

#[test]
fn exit_codes_for_bad_input_and_caps() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"N\": [[\"1\"]],\n  \"Nbar\": oops\n}").unwrap();
    let o = toriclab(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(toriclab(&["mld", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(toriclab(&["bogus"]).status.code(), Some(2));
    let f = fixture("a4_smooth");
    let capped = toriclab(&["check-ct", "--t", "4", "--cap-cells", "10", f.to_str().unwrap()]);
    assert_eq!(capped.status.code(), Some(3));
}

#[test]
fn validate_is_idempotent_after_canonicalization() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["p1_a1", "quot_1_5_12", "wblowup_112", "p2_point"] {
        let first = toriclab(&["validate", "--output", "json", fixture(name).to_str().unwrap()]);
        assert_eq!(first.status.code(), Some(0));
        let path = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, &first.stdout).unwrap();
        let second = toriclab(&["validate", "--output", "json", path.to_str().unwrap()]);
        assert_eq!(first.stdout, second.stdout, "{name}");
    }
}

#[test]
fn emitted_certificates_pass_the_oracle_command() {
    let dir = tempfile::tempdir().unwrap();
    for (name, cmd, extra) in [
        ("p1_a1", "reduce", vec!["--t", "1"]),
        ("wblowup_13", "complement", vec!["--t", "2/3"]),
        ("p1_point_half", "complement", vec!["--t", "1/2", "--scope", "total"]),
    ] {
        let f = fixture(name);
        let mut args = vec![cmd, "--output", "json", f.to_str().unwrap()];
        args.extend(extra.iter().copied());
        let o = toriclab(&args);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        let cert = dir.path().join(format!("{name}.cert.json"));
        std::fs::write(&cert, json(&o)["certificate"].to_string()).unwrap();
        let t = extra[1];
        let check = toriclab(&["oracle", "--cert", cert.to_str().unwrap(), "--t", t, f.to_str().unwrap()]);
        assert_eq!(check.status.code(), Some(0), "{name}: {}", stdout(&check));
    }
}

#[test]
fn oracle_diffs_golden_files() {
    let o = toriclab(&["oracle", toriclab::oracle::fixtures_root().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir_all(dir.path().join("germs")).unwrap();
    std::fs::copy(fixture("a1_half"), dir.path().join("germs/a1_half.json")).unwrap();
    let missing = Command::new(env!("CARGO_BIN_EXE_toriclab"))
        .args(["oracle"])
        .env("TORICLAB_FIXTURES", dir.path())
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(1));
    assert!(stdout(&missing).contains("a1_half: missing"));
    let bless = toriclab(&["oracle", "--bless", dir.path().to_str().unwrap()]);
    assert_eq!(bless.status.code(), Some(0));
    std::fs::write(dir.path().join("golden/a1_half.json"), "{}").unwrap();
    let differs = toriclab(&["oracle", dir.path().join("germs/a1_half.json").to_str().unwrap()]);
    assert_eq!(differs.status.code(), Some(1));
    assert!(stdout(&differs).contains("differs"));
}

#[test]
fn other_commands_report() {
    let f = fixture("quot_1_2_11");
    let p = f.to_str().unwrap();
    let mld = toriclab(&["mld", "--output", "json", p]);
    assert_eq!(json(&mld)["mld_fiber"], serde_json::json!("1"));
    let series = toriclab(&["series", "--t", "1", "--output", "json", p]);
    assert_eq!(series.status.code(), Some(0));
    assert_eq!(json(&series)["agrees_with_check_ct"], serde_json::json!(true));
    assert_eq!(toriclab(&["series", "--t", "3/2", p]).status.code(), Some(1));
    let h = toriclab(&["hyperplane", "--t", "1", "--output", "json", fixture("p1_a1").to_str().unwrap()]);
    assert_eq!(h.status.code(), Some(0));
    assert_eq!(json(&h)["sections"][0]["gamma_h"], serde_json::json!("1"));
    assert_eq!(toriclab(&["series", "--t", "1", fixture("p1_a1").to_str().unwrap()]).status.code(), Some(2));
}
