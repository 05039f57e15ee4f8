mod common;

use common::{sasinfo, sasinfo_in};
use proptest::prelude::*;

#[test]
fn help_and_version_succeed() {
    assert_eq!(sasinfo(&["--help"]).code, 0);
    assert_eq!(sasinfo(&["--version"]).code, 0);
    assert_eq!(sasinfo(&["validate", "--help"]).code, 0);
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &[],
        &["frobnicate"],
        &["pdf", "--alpha", "0"],
        &["pdf", "--alpha", "2.5"],
        &["pdf", "--scale", "-1"],
        &["pdf", "--x", "one"],
        &["score", "--score-dx", "1"],
        &["kl", "--v", "0"],
        &["validate", "--alpha", "1.5", "--tier", "1"],
        &["validate", "--tier", "3"],
        &["validate", "--alpha", "1.5", "--h", "0.5"],
        &["validate", "--alpha", "1", "--eps-rel", "0"],
        &["validate", "--gate", "-1"],
        &["validate", "--report", "r.json", "--alpha", "1"],
        &["mfi", "--method", "sideways"],
        &["sweep"],
        &["sweep", "--kind", "lsi", "--alpha-grid", "1,1.5"],
        &["sweep", "--kind", "lsi", "--ratio-grid", "1"],
        &["sweep", "--kind", "positivity", "--ratio-grid", "-2"],
        &["integrand", "--x-min", "1", "--x-max", "-1"],
        &["integrand", "--n-points", "1"],
    ];
    for args in cases {
        let r = sasinfo(args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stderr);
    }
}

#[test]
fn file_errors_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope").join("r.json");
    let r = sasinfo(&["validate", "--alpha", "1", "--out", missing.to_str().unwrap()]);
    assert_eq!(r.code, 4);
    let r = sasinfo(&["pdf", "--out", missing.to_str().unwrap()]);
    assert_eq!(r.code, 4);
    let r = sasinfo_in(dir.path(), &["validate", "--report", "absent.json"]);
    assert_eq!(r.code, 4);
    std::fs::write(dir.path().join("bad.json"), "{\"schema_version\": 1}").unwrap();
    let r = sasinfo_in(dir.path(), &["validate", "--report", "bad.json"]);
    assert_eq!(r.code, 4);
}

#[test]
fn numerical_failure_exits_three() {
    // a one-interval budget cannot resolve the entropy integrals
    let r = sasinfo(&["kl", "--alpha", "1.5", "--max-subdivisions", "1", "--eps-abs", "1e-15", "--eps-rel", "1e-15"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
}

fn subcommand() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["pdf", "score", "kl", "dprime", "mfi", "validate", "sweep", "integrand"])
}

fn malformed() -> impl Strategy<Value = Vec<String>> {
    prop_oneof![
        "[a-z]{3,8}".prop_map(|f| vec![format!("--zz-{f}")]),
        ("[a-z]{1,6}", prop::sample::select(vec!["--alpha", "--eps-abs", "--eps-rel"]))
            .prop_map(|(v, f)| vec![f.to_string(), v]),
        (2.0001f64..1e6).prop_map(|a| vec!["--alpha".into(), a.to_string()]),
        (-1e6f64..=0.0).prop_map(|a| vec!["--alpha".into(), a.to_string()]),
        (-1e6f64..0.0).prop_map(|e| vec!["--eps-rel".into(), e.to_string()]),
        Just(vec!["--alpha".to_string()]),
        Just(vec!["--format".to_string(), "xml".to_string()]),
    ]
}

/// Flags a subcommand needs before it can reach the malformed one.
fn prelude(cmd: &str) -> Vec<String> {
    match cmd {
        "sweep" => vec!["--kind".into(), "positivity".into()],
        _ => vec![],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn malformed_flags_exit_two(cmd in subcommand(), bad in malformed()) {
        // `pdf`/`score` take no --eps flags and `sweep` spells its grid differently,
        // so every corpus entry is invalid for every subcommand either way
        let mut args = vec![cmd.to_string()];
        args.extend(prelude(cmd));
        args.extend(bad);
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let r = sasinfo(&refs);
        prop_assert_eq!(r.code, 2, "{:?}: {}", args, r.stderr);
    }
}
