use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;

use dselim::field::UPoly;
use dselim::seq::Side;
use dselim::{DSPolynomial, Family, FieldElement, GroundField, Monomial, VarRef};
use dselim_cli::parse::{parse, print, ProblemFile};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name)
}

fn dsx(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dsx")).args(args).output().expect("dsx runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8"),
        String::from_utf8(out.stderr).expect("utf-8"),
    )
}

fn json(stdout: &str) -> serde_json::Value {
    serde_json::from_str(stdout).expect("valid json")
}

#[test]
fn eliminate_finds_shifted_square() {
    let f = problem("smoke.dsx");
    let (code, out, _) = dsx(&["eliminate", f.to_str().unwrap(), "--max-level", "1", "--certificate", "--format", "json"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["verdict"], "found");
    assert_eq!(v["certificate_replays"], true);
    let g = parse(&format!("vars x:1 y:1; eq {};", v["consequence"].as_str().unwrap()), None).unwrap();
    let expect = parse("vars x:1 y:1; eq S(x1) - x1^2;", None).unwrap();
    assert_eq!(g.equations[0], -&expect.equations[0]);
}

#[test]
fn worked_example_is_inconclusive_at_level_three() {
    let f = problem("worked.dsx");
    let (code, out, _) = dsx(&["consistency", f.to_str().unwrap(), "--level", "3"]);
    assert_eq!(code, 2);
    assert!(out.contains("verdict: consistent-up-to-level"));
}

#[test]
fn worked_example_membership_and_witness() {
    let f = problem("worked.dsx");
    let (code, out, _) = dsx(&["member", f.to_str().unwrap(), "--m-max", "2", "--certificate", "--format", "json"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["power"], 1);
    assert_eq!(v["certificate_replays"], true);

    let (code, out, _) = dsx(&["member", f.to_str().unwrap(), "--plain", "--m-max", "2", "--level", "1"]);
    assert_eq!(code, 2, "{}", out);

    let (code, out, _) = dsx(&["verify", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: refuted"));
}

#[test]
fn delay_equation_unrolls() {
    let f = problem("delay.dsx");
    let (code, out, _) = dsx(&["verify", f.to_str().unwrap(), "--unroll", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["verdict"], "partial-solution");
    assert_eq!(v["window"]["y1"], serde_json::json!(["t^2", "-2*t^2", "4*t^2 + 4*t"]));
}

#[test]
fn inconsistency_is_definitive() {
    let f = problem("two_step.dsx");
    let (code, out, _) = dsx(&["consistency", f.to_str().unwrap(), "--max-level", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: inconsistent"));
}

#[test]
fn bounds_subcommand() {
    assert_eq!(dsx(&["bounds", "--fn", "tau0", "n=1", "s=1", "h=1"]), (0, "2\n".into(), String::new()));
    assert_eq!(dsx(&["bounds", "--fn", "g", "n=1", "r=0", "d=1"]).1, "10\n");
    let plug = problem("bound_plug.dsx");
    let (code, out, _) = dsx(&["bounds", "--fn", "final", "r=1", "s=1", "h=1", "d=0", "--file", plug.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, "13\n"));
    let (code, out, _) = dsx(&["bounds", "--fn", "train", "n=1", "s=1", "h=1", "d=1"]);
    assert_eq!(code, 3);
    assert!(out.starts_with("unbounded"));
    let (code, _, err) = dsx(&["bounds", "--fn", "tau0", "n=1"]);
    assert_eq!(code, 1);
    assert!(err.contains("missing parameter"));
}

#[test]
fn budget_exhaustion_exits_three() {
    let f = problem("worked.dsx");
    let (code, out, _) = dsx(&["consistency", f.to_str().unwrap(), "--max-level", "3", "--budget-steps", "50", "--format", "json"]);
    assert_eq!(code, 3);
    let v = json(&out);
    assert_eq!(v["verdict"], "budget-exceeded");
    assert!(v["last_completed_level"].is_object());
}

#[test]
fn parse_errors_exit_one_with_position() {
    let dir = std::env::temp_dir().join(format!("dsx-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("bad.dsx");
    std::fs::write(&f, "field QQ;\nvars y:1;\neq y1 + t;\n").unwrap();
    let (code, _, err) = dsx(&["consistency", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains(":3:9:"), "{}", err);
    // the field flag makes t legal
    let (code, _, _) = dsx(&["consistency", f.to_str().unwrap(), "--field", "QQ_t", "--level", "0"]);
    assert_eq!(code, 2);
    let (code, _, _) = dsx(&["frobnicate"]);
    assert_eq!(code, 1);
}

#[test]
fn reports_are_deterministic() {
    let f = problem("worked.dsx");
    for args in [
        vec!["consistency", f.to_str().unwrap(), "--max-level", "2", "--format", "json", "--certificate"],
        vec!["member", f.to_str().unwrap(), "--max-level", "1", "--m-max", "2", "--certificate"],
    ] {
        let first = dsx(&args);
        assert_eq!(first, dsx(&args));
        assert!(!first.1.contains("elapsed"));
    }
    let (_, out, _) = dsx(&["consistency", f.to_str().unwrap(), "--level", "0", "--timings", "--format", "json"]);
    assert!(json(&out)["elapsed_ms"].is_number());
}

#[test]
fn sample_problems_roundtrip() {
    for name in ["worked.dsx", "smoke.dsx", "delay.dsx", "two_step.dsx", "bound_plug.dsx"] {
        let text = std::fs::read_to_string(problem(name)).unwrap();
        let p = parse(&text, None).unwrap();
        assert_eq!(parse(&print(&p), None).unwrap(), p, "{}", name);
    }
}

fn rat() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn coefficient(ground: GroundField) -> BoxedStrategy<FieldElement> {
    match ground {
        GroundField::Q => rat().prop_map(FieldElement::from_rational).boxed(),
        GroundField::Qt => (proptest::collection::vec(rat(), 0..=3), proptest::collection::vec(rat(), 1..=3))
            .prop_map(|(n, d)| {
                let den = UPoly::from_coeffs(d);
                let den = if den.is_zero() { UPoly::constant(BigRational::from_integer(1.into())) } else { den };
                FieldElement::from_fraction(UPoly::from_coeffs(n), den)
            })
            .boxed(),
    }
}

fn var() -> impl Strategy<Value = VarRef> {
    (any::<bool>(), 1u32..=2, 0u32..=2, 0u32..=2)
        .prop_map(|(x, i, d, s)| VarRef::new(if x { Family::X } else { Family::Y }, i, d, s))
}

fn poly(ground: GroundField) -> impl Strategy<Value = DSPolynomial> {
    let term = (proptest::collection::vec((var(), 1u32..=3), 0..=3), coefficient(ground));
    proptest::collection::vec(term, 0..=4)
        .prop_map(move |ts| DSPolynomial::from_terms(ground, ts.into_iter().map(|(m, c)| (Monomial::from_pairs(m), c))))
}

fn problem_file() -> impl Strategy<Value = ProblemFile> {
    prop_oneof![Just(GroundField::Q), Just(GroundField::Qt)].prop_flat_map(|g| {
        (
            proptest::collection::vec(poly(g), 0..=3),
            proptest::option::of(poly(g)),
            proptest::collection::vec(coefficient(g), 1..=4),
            any::<bool>(),
        )
            .prop_map(move |(equations, target, entries, z)| ProblemFile {
                ground: g,
                num_x: 2,
                num_y: 2,
                equations,
                target,
                side: if z { Side::Z } else { Side::N },
                windows: BTreeMap::from([((Family::Y, 1), entries)]),
                bdelta: None,
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn printer_roundtrip(p in problem_file()) {
        let text = print(&p);
        let back = parse(&text, None).map_err(|e| TestCaseError::fail(format!("{}\n{}", e, text)))?;
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(print(&back), text);
    }
}
