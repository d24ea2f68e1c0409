use std::path::Path;
use std::process::{Command, Output};

fn supermagic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supermagic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn build_br25_writes_22_basis_entries() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("br25.json");
    let o = supermagic(&["build", "br25", "--p", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let doc = read_json(&out);
    assert_eq!(doc["version"], "v1");
    assert_eq!(doc["p"], 5);
    assert_eq!(doc["basis"].as_array().unwrap().len(), 22);
}

#[test]
fn build_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(code(&supermagic(&["build", "el53", "--out", a.to_str().unwrap()])), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_supermagic"))
        .args(["build", "el53", "--out", b.to_str().unwrap()])
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    assert_eq!(read_json(&a)["basis"].as_array().unwrap().len(), 71);
}

#[test]
fn wrong_characteristic_is_invalid() {
    let o = supermagic(&["build", "el53", "--p", "5"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("characteristic 3"));
}

#[test]
fn invalid_invocations_exit_2() {
    assert_eq!(code(&supermagic(&["verify", "nope", "--checks", "dims"])), 2);
    assert_eq!(code(&supermagic(&["verify", "br25", "--checks", "bogus"])), 2);
    assert_eq!(code(&supermagic(&["build", "br25", "--p", "4"])), 2);
    assert_eq!(code(&supermagic(&["square", "--left", "S1"])), 2);
    assert_eq!(code(&supermagic(&["cartan", "g(S1,S1)"])), 2);
}

#[test]
fn verify_br25_passes_in_characteristic_5() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("report.json");
    let o = supermagic(&[
        "verify",
        "br25",
        "--p",
        "5",
        "--checks",
        "jacobi,simple,cartan",
        "--json",
        rep.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r = read_json(&rep);
    assert_eq!(r["exit_status"], 0);
    assert_eq!(r["superdim"], "10|12");
    let statuses: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["pass", "pass", "pass"]);
}

#[test]
fn verify_br25_fails_in_characteristic_7() {
    let o = supermagic(&["verify", "br25", "--p", "7", "--checks", "jacobi"]);
    assert_eq!(code(&o), 1);
    let s = stdout(&o);
    assert!(s.contains("super-Jacobi"), "{s}");
}

#[test]
fn square_all_reports_every_pair() {
    let o = supermagic(&["square", "--all", "--checks", "dims"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert_eq!(s.matches("superdimension").count(), 21);
    assert!(s.contains("g(S8,S8) over GF(3), superdimension 248|0"));
    assert!(s.contains("g(S8,S1.2) over GF(3), superdimension 55|50"));
    assert!(s.contains("g(S1.2,S1.2) over GF(3), superdimension 21|16"));
}

#[test]
fn round_trip_reproduces_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    assert_eq!(code(&supermagic(&["build", "g(S8,S1.2)", "--out", out.to_str().unwrap()])), 0);
    let o = supermagic(&["verify", out.to_str().unwrap(), "--checks", "axioms,jacobi,form"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("rank 105 of 105"));
    let again = dir.path().join("h.json");
    assert_eq!(code(&supermagic(&["build", out.to_str().unwrap(), "--out", again.to_str().unwrap()])), 0);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn cartan_from_generator_file() {
    // g(S1,S1) is so(3) with [x0,x1] = x2 cyclically; over GF(3) the
    // isotropic vectors (1,1,1) and (1,1,-1) form an sl2 pair with [h,e] = 2e.
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("gens.json");
    let pair = r#"{"pairs": [{"e": {"i0:1⊗1": 1, "i1:1⊗1": 1, "i2:1⊗1": 1}, "f": [1, 1, -1]}]}"#;
    std::fs::write(&gens, pair).unwrap();
    let o = supermagic(&["cartan", "g(S1,S1)", "--generators", gens.to_str().unwrap()]);
    let s = stdout(&o);
    assert_eq!(code(&o), 0, "{s}");
    assert!(s.contains("  [-1]") && s.contains("dimension 3"), "{s}");

    std::fs::write(&gens, r#"{"pairs": [{"e": [1, 1, 1], "f": [1, 1, 1]}]}"#).unwrap();
    let o = supermagic(&["cartan", "g(S1,S1)", "--generators", gens.to_str().unwrap()]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));

    std::fs::write(&gens, r#"{"pairs": [{"e": {"nope": 1}, "f": [0, 0, 0]}]}"#).unwrap();
    assert_eq!(code(&supermagic(&["cartan", "g(S1,S1)", "--generators", gens.to_str().unwrap()])), 2);
}

#[test]
fn cartan_br23_builtin() {
    let o = supermagic(&["cartan", "br23"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("[0, -1]") && s.contains("[1, 1]"), "{s}");
    assert!(s.contains("dimension 18"));
}
