use std::path::PathBuf;
use std::process::Command;

use jb_cli::format::{load_algebra, load_atom, load_pair, AlgebraFile, PairFile};
use jb_core::corpus;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

fn jbcalc(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_jbcalc"))
        .args(args)
        .output()
        .expect("jbcalc runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

#[test]
fn fixtures_match_the_corpus() {
    assert_eq!(
        load_algebra(fixture("sl2").as_ref()).unwrap(),
        corpus::sl2()
    );
    assert_eq!(
        load_algebra(fixture("gl2").as_ref()).unwrap(),
        corpus::gl2()
    );
    assert_eq!(
        load_algebra(fixture("heisenberg").as_ref()).unwrap(),
        corpus::heisenberg()
    );
    assert_eq!(
        load_algebra(fixture("nonabelian2").as_ref()).unwrap(),
        corpus::nonabelian2()
    );
    for (name, pair) in corpus::strict_pairs() {
        assert_eq!(load_pair(fixture(name).as_ref()).unwrap(), pair, "{name}");
    }
    assert_eq!(
        load_pair(fixture("dg_sl2").as_ref()).unwrap(),
        corpus::pair_dg_sl2()
    );
    assert_eq!(
        load_pair(fixture("linf_sl2").as_ref()).unwrap(),
        corpus::pair_linf_sl2()
    );
    assert_eq!(
        load_pair(fixture("formal_higher").as_ref()).unwrap(),
        corpus::pair_formal_higher()
    );
    assert_eq!(
        load_atom(fixture("gauge_affine").as_ref()).unwrap(),
        corpus::gauge_affine()
    );
}

#[test]
fn one_sided_and_two_sided_brackets_agree() {
    let json = r#"{"name": "aff1", "basis": [{"name": "x"}, {"name": "y"}],
        "brackets": [["x", "y", "y", "1"], ["y", "x", "y", "-1"]]}"#;
    let f: AlgebraFile = serde_json::from_str(json).unwrap();
    assert_eq!(f.to_spec().unwrap(), corpus::nonabelian2());
    let clash = json.replace(r#"["y", "x", "y", "-1"]"#, r#"["y", "x", "y", "1"]"#);
    let f: AlgebraFile = serde_json::from_str(&clash).unwrap();
    assert!(f.to_spec().is_err());
}

#[test]
fn pair_files_round_trip() {
    let pair = corpus::pair_linf_sl2();
    let text = jb_cli::format::to_pretty_json(&PairFile::from_pair(&pair));
    let back: PairFile = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_pair().unwrap(), pair);
}

#[test]
fn bernoulli_and_solve_cn() {
    let (code, out) = jbcalc(&["bernoulli", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("B_2 = 1/6"));
    let (code, out) = jbcalc(&["solve-cn", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("-1/2") && out.contains("1/12"));
    let (code, out) = jbcalc(&["solve-cn", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: PASS"));
    let (code, _) = jbcalc(&["solve-cn", "4", "--weight", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_action_exit_codes() {
    assert_eq!(
        jbcalc(&["verify-action", &fixture("sl2_identity"), "--order", "4"]).0,
        0
    );
    let (code, out) = jbcalc(&["verify-action", &fixture("sl2_bad_phi"), "--order", "2"]);
    assert_eq!(code, 1);
    assert!(out.contains("[e, f"));
    assert_eq!(jbcalc(&["verify-action", "/nonexistent.json"]).0, 2);
    assert_eq!(jbcalc(&["verify-action", &fixture("sl2")]).0, 2);
    assert_eq!(jbcalc(&["no-such-command"]).0, 2);
}

#[test]
fn abelian_target_has_only_the_constant_term() {
    let dir = std::env::temp_dir().join(format!("jbcalc-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let emit = dir.join("action.json");
    let (code, _) = jbcalc(&[
        "action",
        &fixture("heisenberg_abelianization"),
        "--order",
        "3",
        "--emit",
        emit.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&emit).unwrap()).unwrap();
    let components = v["components"].as_array().unwrap();
    assert!(!components.is_empty());
    assert!(components.iter().all(|c| c["n"] == 0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn json_reports_are_deterministic() {
    let args = [
        "--json",
        "operad",
        "lift",
        "--max-arity",
        "3",
        "--max-codegree",
        "1",
    ];
    let (code, a) = jbcalc(&args);
    let (_, b) = jbcalc(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["status"], "pass");
    assert!(v.get("wall_clock_ms").is_none());
    let (_, timed) = jbcalc(&["--json", "--timing", "bernoulli", "3"]);
    let v: serde_json::Value = serde_json::from_str(&timed).unwrap();
    assert!(v["wall_clock_ms"].is_number());
}

#[test]
fn operad_and_cone_commands() {
    for check in ["delta2", "jb", "jb-half", "dilation"] {
        let (code, out) = jbcalc(&["operad", check, "--max-arity", "4"]);
        assert_eq!(code, 0, "{check}: {out}");
    }
    assert_eq!(jbcalc(&["operad", "delta2", "--operad", "lp_half"]).0, 0);
    assert_eq!(jbcalc(&["operad", "delta2", "--operad", "nope"]).0, 2);
    let (code, out) = jbcalc(&[
        "cone",
        &fixture("dg_sl2"),
        "--mode",
        "dg",
        "--max-weight",
        "4",
    ]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(
        jbcalc(&["cone", &fixture("dg_sl2"), "--mode", "strict"]).0,
        2
    );
    let (code, out) = jbcalc(&[
        "cone",
        &fixture("linf_sl2"),
        "--mode",
        "linf",
        "--max-weight",
        "3",
    ]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn validate_names_the_condition_variant() {
    let (code, out) = jbcalc(&["validate", "affine", &fixture("gauge_affine")]);
    assert_eq!(code, 0);
    assert!(out.contains("atom form of condition (iii): fails"));
    assert!(out.contains("affine form of condition (iii): holds"));
    assert_eq!(jbcalc(&["validate", "atom", &fixture("gauge_affine")]).0, 1);
    assert_eq!(jbcalc(&["validate", "lie", &fixture("gl2")]).0, 0);
    assert_eq!(jbcalc(&["validate", "pair", &fixture("sl2_bad_phi")]).0, 1);
}
