use std::process::Command;

use serde_json::Value;

fn regroup(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_regroup"))
        .args(args)
        .env_remove("REGROUP_REPORT_DIR")
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let report = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), report, String::from_utf8(out.stderr).unwrap())
}

#[test]
fn normalize_reports_passing_inversion() {
    for (group, map, window, e) in [
        ("integers", "reflect_about_one_z", "z_50", "1"),
        ("dyadic", "dyadic_fold", "dyadic_k4_2", "0"),
    ] {
        let (group, map, window) =
            (format!("corpus:groups/{group}.json"), format!("corpus:maps/{map}.json"), format!("corpus:windows/{window}.json"));
        let (code, r, _) =
            regroup(&["normalize-involution", "--group", &group, "--map", &map, "--window", &window]);
        assert_eq!(code, 0, "{map}");
        assert_eq!(r["claim6"], "pass");
        assert_eq!(r["fixed_point"], e);
        assert_eq!(r["status"], "pass");
    }
}

#[test]
fn normalize_rejects_shift() {
    let (code, r, err) =
        regroup(&["normalize-involution", "--map", "corpus:maps/shift_one_z.json", "--window", "corpus:windows/z_5.json"]);
    assert_eq!(code, 2);
    assert_eq!(r, Value::Null);
    let e: Value = serde_json::from_str(&err).unwrap();
    assert_eq!(e["error"]["kind"], "not_involution");
}

#[test]
fn group_mismatch_is_an_input_error() {
    let (code, _, err) = regroup(&[
        "transport",
        "--group",
        "corpus:groups/dyadic.json",
        "--map",
        "corpus:maps/shift_one_z.json",
        "--window",
        "corpus:windows/z_5.json",
        "--check",
        "axioms",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("mismatch"), "{err}");
}

#[test]
fn verify_involution_fails_on_identity() {
    let (code, r, _) =
        regroup(&["verify-involution", "--map", "corpus:maps/identity_z.json", "--window", "corpus:windows/z_5.json"]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "fail");
    assert_eq!(r["fixed_point_error"]["kind"], "continuum_of_fixed_points");
}

#[test]
fn counterexample_shows_unbounded_orbits() {
    let (code, r, _) = regroup(&["counterexample", "--windows", "16,64,256", "--periodic-window", "64"]);
    assert_eq!(code, 0);
    assert_eq!(r["obstruction"]["verdict"], "UNBOUNDED_EVIDENCE");
    let counts: Vec<u64> =
        r["obstruction"]["growth"].as_array().unwrap().iter().map(|g| g["orbit_count_lower_bound"].as_u64().unwrap()).collect();
    assert_eq!(counts, [5, 7, 9]);
}

#[test]
fn conjugate_shift_obstructs_non_monotone_maps() {
    let (code, r, _) =
        regroup(&["conjugate-shift", "--map", "corpus:maps/madic2_successor.json", "--window", "corpus:windows/z_10.json"]);
    assert_eq!(code, 1);
    assert_eq!(r["outcome"], "OBSTRUCTED");
    let (code, r, _) = regroup(&[
        "conjugate-shift",
        "--map",
        "corpus:maps/three_piece_dyadic.json",
        "--window",
        "corpus:windows/dyadic_k5_4.json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["outcome"], "WITNESS");
}

#[test]
fn transport_shift_reports_constant() {
    let (code, r, _) = regroup(&[
        "transport",
        "--map",
        "corpus:maps/minus_one_z.json",
        "--window",
        "corpus:windows/z_10.json",
        "--check",
        "shift",
        "--shift",
        "3",
    ]);
    assert_eq!(code, 0);
    // h(x) = x - 1, so h⁻¹(3) = 4.
    assert_eq!(r["transported_shift"], "4");
    let (code, _, err) =
        regroup(&["transport", "--map", "corpus:maps/minus_one_z.json", "--window", "corpus:windows/z_10.json", "--check", "shift", "--shift", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("neutral_shift"), "{err}");
}

#[test]
fn report_dir_receives_report() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_regroup"))
        .args(["orbits", "--map", "corpus:maps/shift_three_z.json", "--window", "corpus:windows/z_12.json"])
        .env("REGROUP_REPORT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(status.status.success());
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("orbits.json")).unwrap()).unwrap();
    assert_eq!(saved["orbit_count_lower_bound"], 3);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn help_and_version_exit_zero() {
    for flag in ["--help", "--version"] {
        let out = Command::new(env!("CARGO_BIN_EXE_regroup")).arg(flag).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
}

#[test]
fn selftest_is_deterministic_and_seed_sensitive() {
    let (c1, a, _) = regroup(&["selftest", "--seed", "3", "--instances", "1"]);
    let (c2, b, _) = regroup(&["selftest", "--seed", "3", "--instances", "1"]);
    let (_, c, _) = regroup(&["selftest", "--seed", "4", "--instances", "1"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert_ne!(a["random"], c["random"]);
    assert!(a["corpus"].as_array().unwrap().iter().all(|c| c["ok"] == true));
}
