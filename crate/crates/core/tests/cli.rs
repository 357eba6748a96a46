use mckaykit::cli::{run, Outcome, EXIT_CAP, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn mk(args: &str) -> Outcome {
    run(std::iter::once("mckaykit").chain(args.split_whitespace()))
}

fn json(args: &str) -> Value {
    let out = mk(args);
    assert_eq!(out.code, EXIT_OK, "{args}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn grcenter_of_z2() {
    let v = json("grcenter cyclic:2");
    assert_eq!(v["poincare"], serde_json::json!([1, 0, 1]));
    assert_eq!(v["axioms_hold"], true);
}

#[test]
fn exponents_of_a2() {
    assert_eq!(
        json("exponents weyl:A2")["exponents"],
        serde_json::json!([1, 2])
    );
    assert_eq!(json("exponents G2")["exponents"], serde_json::json!([1, 5]));
}

#[test]
fn reflections_and_betti() {
    let v = json("reflections binary-dihedral:2");
    // D4 singularity: four exceptional curves
    assert_eq!(v["reflections"]["count"], 4);
    assert_eq!(
        json("betti symmetric:3")["betti"],
        serde_json::json!([1, 0, 1, 0, 1])
    );
    assert_eq!(
        json("orbifold-poincare cyclic:5")["poincare"],
        serde_json::json!([1, 0, 4])
    );
}

#[test]
fn molien_of_z2() {
    let v = json("molien cyclic:2 --degree 4");
    assert_eq!(
        v["coefficients"],
        serde_json::json!(["1", "0", "3", "0", "5"])
    );
}

#[test]
fn catalog_lists_types() {
    let v = json("catalog list");
    let types = v["types"].as_array().unwrap();
    let e8 = types.iter().find(|t| t["label"] == "E8").unwrap();
    assert_eq!(e8["resolution_exists"], false);
    let a3 = types.iter().find(|t| t["label"] == "A3").unwrap();
    assert_eq!(a3["exponents"], serde_json::json!([1, 2, 3]));
}

#[test]
fn exit_codes() {
    assert_eq!(mk("frobnicate").code, EXIT_USAGE);
    assert_eq!(mk("classes").code, EXIT_USAGE);
    assert_eq!(mk("classes cyclic:x").code, EXIT_USAGE);
    assert_eq!(mk("hp cyclic:2 --k 3").code, EXIT_USAGE);
    assert_eq!(mk("classes weyl:B3 --cap 10").code, EXIT_CAP);
    assert_eq!(mk("--help").code, EXIT_OK);
}

#[test]
fn output_is_deterministic() {
    for args in [
        "classes binary-dihedral:3",
        "rees symmetric:3",
        "verify gerstenhaber --seed 3",
    ] {
        assert_eq!(mk(args).stdout, mk(args).stdout, "{args}");
    }
}

#[test]
fn text_format() {
    let out = mk("orbifold-poincare cyclic:3 --format text");
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("poincare: [1,0,2]"), "{}", out.stdout);
}

#[test]
fn verify_suites() {
    assert_eq!(json("verify gerstenhaber --seed 7")["pass"], true);
    assert_eq!(json("verify schouten --seed 7")["pass"], true);
    assert_eq!(
        json("verify kunneth --groups cyclic:2,cyclic:3")["pass"],
        true
    );
    assert_eq!(json("verify lemma-easy --max-order 2000")["pass"], true);
    assert_eq!(json("verify grcenter-axioms --max-order 200")["pass"], true);
    let v = json("verify hp-duval --type A1 --window 8");
    assert_eq!(v["details"]["dims"], serde_json::json!([0, 1]));
}

#[test]
fn hp_output_shape() {
    let v = json("hp cyclic:2 --k 2 --window 6");
    assert_eq!(v["k"], 2);
    assert_eq!(v["window"], 6);
    assert!(v["certified"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["m"].is_i64() && c["dim"].is_u64()));
    assert_eq!(v["certified_total"], 1);
    assert!(v["uncertified"].is_array());
}
