mod common;

use common::{column, parse_table, rel, sasinfo};

#[test]
fn pdf_at_origin_matches_closed_forms() {
    let cases = [
        ("1", std::f64::consts::FRAC_1_PI),
        ("2", 0.28209479177387814),
        // Γ(5/3)/π
        ("1.5", 0.2873527514521644),
    ];
    for (alpha, expected) in cases {
        let r = sasinfo(&["pdf", "--alpha", alpha, "--scale", "1", "--x", "0"]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let pdf = column(&r.stdout, '\t', "pdf")[0].unwrap();
        assert!(rel(pdf, expected) <= 1e-12, "alpha {alpha}: {pdf} vs {expected}");
    }
}

#[test]
fn pdf_table_has_all_columns_per_point() {
    let r = sasinfo(&["pdf", "--alpha", "1", "--x", "-2,0", "--x", "1"]);
    assert_eq!(r.code, 0);
    let (header, rows) = parse_table(&r.stdout, '\t');
    assert_eq!(header, ["x", "pdf", "log_pdf", "pdf_dx"]);
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let (x, g, lg, dg) = (row[0].unwrap(), row[1].unwrap(), row[2].unwrap(), row[3].unwrap());
        assert!(rel(g, 1.0 / (std::f64::consts::PI * (1.0 + x * x))) <= 1e-14);
        assert!((lg - g.ln()).abs() <= 1e-14);
        assert!((dg + 2.0 * x * g / (1.0 + x * x)).abs() <= 1e-14);
    }
}

#[test]
fn pdf_csv_and_json_agree_with_table() {
    let t = sasinfo(&["pdf", "--alpha", "1.3", "--x", "0.7"]);
    let c = sasinfo(&["pdf", "--alpha", "1.3", "--x", "0.7", "--format", "csv"]);
    let j = sasinfo(&["pdf", "--alpha", "1.3", "--x", "0.7", "--format", "json"]);
    let from_table = column(&t.stdout, '\t', "pdf")[0].unwrap();
    assert_eq!(column(&c.stdout, ',', "pdf")[0].unwrap(), from_table);
    let v: serde_json::Value = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(v[0]["pdf"].as_f64().unwrap(), from_table);
}

#[test]
fn score_is_odd() {
    let r = sasinfo(&["score", "--alpha", "1.5", "--x", "1.3,-1.3"]);
    assert_eq!(r.code, 0);
    let s = column(&r.stdout, '\t', "score");
    assert!(s[0].unwrap() < 0.0);
    assert_eq!(s[0].unwrap(), -s[1].unwrap());
}

#[test]
fn kl_cauchy_matches_closed_form() {
    let r = sasinfo(&["kl", "--alpha", "1", "--v", "1.2", "--s", "1"]);
    assert_eq!(r.code, 0);
    // ln(121/120)
    let expected = 0.008298802814695094;
    assert!(rel(column(&r.stdout, '\t', "kl")[0].unwrap(), expected) <= 1e-10);
    assert!(rel(column(&r.stdout, '\t', "closed_form")[0].unwrap(), expected) <= 1e-14);
}

#[test]
fn dprime_ladder_marks_one_selected_step() {
    let r = sasinfo(&["dprime", "--alpha", "1.5"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let d = column(&r.stdout, '\t', "d_prime");
    assert_eq!(d.len(), 5);
    for v in d {
        assert!(rel(v.unwrap(), 0.0657857992) <= 1e-5);
    }
    assert_eq!(r.stdout.lines().filter(|l| l.contains('*')).count(), 1);
}

#[test]
fn mfi_cauchy_both_forms_agree() {
    let r = sasinfo(&["mfi", "--alpha", "1", "--v", "1.2", "--s", "1", "--method", "both"]);
    assert_eq!(r.code, 0);
    // (v−s)²/(sv(v+s)) = 0.04/2.64
    let expected = 0.015151515151515152;
    assert!(rel(column(&r.stdout, '\t', "chain")[0].unwrap(), expected) <= 1e-12);
    assert!(rel(column(&r.stdout, '\t', "integral")[0].unwrap(), expected) <= 1e-8);
    assert!(column(&r.stdout, '\t', "rel_discrepancy")[0].unwrap() <= 1e-8);
}

#[test]
fn mfi_degenerate_pair_is_zero() {
    let r = sasinfo(&["mfi", "--alpha", "1.5", "--v", "1.2", "--s", "1.2"]);
    assert_eq!(r.code, 0);
    for name in ["chain", "integral", "abs_discrepancy", "rel_discrepancy"] {
        assert_eq!(column(&r.stdout, '\t', name)[0], Some(0.0), "{name}");
    }
}

#[test]
fn mfi_integral_general_alpha() {
    let r = sasinfo(&["mfi", "--alpha", "1.5", "--method", "integral"]);
    assert_eq!(r.code, 0);
    let (header, _) = parse_table(&r.stdout, '\t');
    assert_eq!(header, ["alpha", "v", "s", "integral"]);
    // reference RHS 0.0657857992 times α(v−s)/s = 0.3
    assert!(rel(column(&r.stdout, '\t', "integral")[0].unwrap(), 0.019735740) <= 1e-6);
}

#[test]
fn sweep_lsi_ratio_at_two() {
    let r = sasinfo(&["sweep", "--kind", "lsi", "--ratio-grid", "2"]);
    assert_eq!(r.code, 0);
    let ratio = column(&r.stdout, ',', "ratio")[0].unwrap();
    assert!(rel(ratio, 0.7066982139383007) <= 1e-12);
}

#[test]
fn sweep_lsi_default_grid_increases() {
    let r = sasinfo(&["sweep", "--kind", "lsi"]);
    assert_eq!(r.code, 0);
    let ratios: Vec<f64> = column(&r.stdout, ',', "ratio").into_iter().map(Option::unwrap).collect();
    assert_eq!(ratios.len(), 4);
    assert!(ratios.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn sweep_positivity_cauchy_rows() {
    let r = sasinfo(&["sweep", "--kind", "positivity", "--alpha-grid", "1", "--ratio-grid", "3,1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let m = column(&r.stdout, ',', "mfi");
    assert!(rel(m[0].unwrap(), 1.0 / 3.0) <= 1e-12);
    assert_eq!(m[1], Some(0.0));
}

#[test]
fn sweep_writes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lsi.csv");
    let r = sasinfo(&["sweep", "--kind", "lsi", "--out", path.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("v,s,kl,mfi,ratio\n"));
}

#[test]
fn integrand_curve_structure() {
    let r = sasinfo(&["integrand", "--x-min", "-4", "--x-max", "4", "--n-points", "41"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (header, rows) = parse_table(&r.stdout, ',');
    assert_eq!(header, ["x", "u0", "delta_score", "integrand"]);
    assert_eq!(rows.len(), 41);
    let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.into_iter().map(Option::unwrap).collect()).collect();

    assert_eq!(rows[20], [0.0, 0.0, 0.0, 0.0]);
    // u0 = x(v−s)/(sv) = 2·0.2/1.2
    let at_two = rows.iter().find(|r| r[0] == 2.0).unwrap();
    assert!(rel(at_two[1], 1.0 / 3.0) <= 1e-15);
    for i in 0..rows.len() {
        let (a, b) = (&rows[i], &rows[rows.len() - 1 - i]);
        assert_eq!(a[0], -b[0]);
        assert!((a[3] - b[3]).abs() <= 1e-12, "x = {}", a[0]);
        assert!(a[3] >= 0.0);
    }
}

#[test]
fn integrand_is_density_times_factors() {
    let r = sasinfo(&["integrand", "--x-min", "-3", "--x-max", "3", "--n-points", "7", "--format", "json"]);
    assert_eq!(r.code, 0);
    let curve: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let get = |k: &str| -> Vec<f64> {
        curve[k].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect()
    };
    let (x, u0, ds, f) = (get("x_grid"), get("u0"), get("delta_score"), get("integrand"));
    assert_eq!(x.len(), 7);
    let xs: Vec<String> = x.iter().map(|v| v.to_string()).collect();
    let mut args = vec!["pdf", "--alpha", "1.5", "--scale", "1.2"];
    for s in &xs {
        args.extend(["--x", s]);
    }
    let pdf = column(&sasinfo(&args).stdout, '\t', "pdf");
    for i in 0..7 {
        assert!((f[i] - pdf[i].unwrap() * u0[i] * ds[i]).abs() <= 1e-12);
    }
}
