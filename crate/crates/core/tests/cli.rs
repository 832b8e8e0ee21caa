use std::process::Command;

use paramac::cli::{from_json, to_json, PolyJson};
use paramac::daha_ops::random_poly;
use paramac::root_system::RootSystem;
use paramac::weyl_group::ParabolicJ;
use proptest::prelude::*;
use rand::SeedableRng;

fn paramac(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_paramac")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn golden(args: &[&str], file: &str) {
    let (code, out, err) = paramac(args);
    assert_eq!(code, 0, "{err}");
    let path = format!("{}/tests/golden/{file}", env!("CARGO_MANIFEST_DIR"));
    assert_eq!(out, std::fs::read_to_string(path).unwrap(), "{args:?}");
}

#[test]
fn golden_outputs() {
    golden(&["parasym", "--type", "A1", "--J", "1", "--weight", "-1", "--t0"], "a1_j1_m1_t0.txt");
    golden(&["parasym", "--type", "A2", "--J", "1", "--weight", "-1,-1"], "a2_j1_m1m1.txt");
    golden(&["parasym", "--type", "A2", "--J", "1", "--weight", "-1,-1", "--t0"], "a2_j1_m1m1_t0.txt");
    golden(&["parasym", "--type", "A2", "--J", "1", "--weight", "-1,-1", "--tinf", "--format", "latex"], "a2_j1_m1m1_tinf.tex");
    golden(&["nonsym", "--type", "B2", "--weight", "0,-1", "--format", "json"], "b2_0m1.json");
}

#[test]
fn small_cases() {
    assert_eq!(paramac(&["parasym", "--type", "A1", "--J", "1", "--weight", "0"]).1, "1\n");
    assert_eq!(paramac(&["nonsym", "--type", "A1", "--weight", "1"]).1, "X[1]\n");
    assert_eq!(paramac(&["nonsym", "--type", "A1", "--weight", "0", "--format", "latex"]).1, "1\n");
}

#[test]
fn error_witnesses() {
    let (code, out, err) = paramac(&["parasym", "--type", "A1", "--J", "1", "--weight", "1"]);
    assert_eq!(code, 3);
    assert!(out.is_empty());
    let w: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(w["error"], "NotJAntidominant");
    assert_eq!(paramac(&["nonsym", "--type", "A1", "--weight", "x"]).0, 2);
    assert_eq!(paramac(&["nonsym", "--type", "E9", "--weight", "1"]).0, 2);
    assert_eq!(paramac(&["nonsym", "--type", "A1"]).0, 2);
    assert_eq!(paramac(&["nonsym", "--type", "A1", "--weight", "1", "--t0", "--tinf"]).0, 2);
}

#[test]
fn verify_suites() {
    for args in [
        &["verify", "lemmas", "--type", "A2"][..],
        &["verify", "orthogonality", "--type", "A1", "--N", "8"],
        &["verify", "characters", "--type", "A1", "--qmax", "5"],
        &["verify", "orders", "--type", "B2"],
        &["verify", "daha", "--type", "A2", "--seed", "4"],
        &["verify", "specialization", "--type", "A2", "--J", "1"],
    ] {
        let (code, out, err) = paramac(args);
        assert_eq!(code, 0, "{args:?}: {out}{err}");
        let rep: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(rep["passed"], true);
        assert!(!rep["checks"].as_array().unwrap().is_empty());
    }
    let (code, out, _) = paramac(&["verify", "lemmas", "--type", "A1", "--format", "plain"]);
    assert_eq!(code, 0);
    assert!(out.lines().all(|l| l.starts_with("PASS") || l == "pass"), "{out}");
}

#[test]
fn deterministic() {
    let args = ["verify", "daha", "--type", "B2", "--seed", "11"];
    assert_eq!(paramac(&args).1, paramac(&args).1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn json_round_trip(seed in any::<u64>(), terms in 0usize..5) {
        let rs = RootSystem::from_name("A2").unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&mut rng, 2, terms, 2);
        let doc = to_json(&rs, &ParabolicJ::empty(), &vec![0, 0], &p);
        let back: PolyJson = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        prop_assert_eq!(from_json(&back).unwrap(), p);
    }
}
