//! Acceptance gates. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::time::{Duration, Instant};

use proptest::strategy::Just;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use stable_info::info::{
    d_prime_numeric, fisher_score, relative_entropy, relative_entropy_cauchy_closed,
};
use stable_info::mfi::{
    best_record, check_consistency, lsi_ratio_cauchy, mfi_cauchy_closed, mfi_integral, positivity_sweep,
    Tier,
};
use stable_info::quadrature::integrate;
use stable_info::stencil::five_point;
use stable_info::{
    DensitySpec, EntropyDerivativeConfig, Interval, Scale, ScoreMethod, ScorePair, Tolerance,
};

const GRID_ALPHAS: [f64; 6] = [0.8, 1.0, 1.2, 1.5, 1.8, 2.0];
const GRID_RATIOS: [f64; 4] = [0.5, 0.8, 1.2, 2.0];

/// Integrand, domain and exact value.
type KnownIntegral = (fn(f64) -> f64, Interval, f64);
type Criterion = Box<dyn Fn() -> Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Relative difference; exactly equal values (both underflowed to 0, say) differ by 0.
fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

fn sc(x: f64) -> Scale {
    Scale::new(x).unwrap()
}

fn tier1(alpha: f64, lhs_exact: f64) -> Outcome {
    let cfg = EntropyDerivativeConfig::default();
    let recs = check_consistency(alpha, 1.2, 1.0, Tier::ClosedForm, &cfg, ScoreMethod::default(), &Tolerance::tier1());
    match recs {
        Ok(r) => {
            let r = &r[0];
            let e = r.rel_err.unwrap_or(f64::INFINITY);
            let pass = r.lhs == Some(lhs_exact) && e <= 1e-10;
            outcome(pass, format!("LHS={:.17} RHS={:.17} rel_err={e:.2e} (gate 1e-10)", lhs_exact, r.rhs))
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn table1() -> Outcome {
    let cfg = EntropyDerivativeConfig::default();
    let recs = match check_consistency(1.5, 1.2, 1.0, Tier::Numeric, &cfg, ScoreMethod::default(), &Tolerance::tier2()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let rhs = recs[0].rhs;
    let rhs_err = rel(rhs, 0.065_785_799_2);
    let worst = recs.iter().map(|r| r.rel_err.unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
    let pass = rhs_err <= 1e-6 && worst <= 1e-5 && recs.len() == 5;
    outcome(pass, format!("RHS={rhs:.10} vs 0.0657857992 rel {rhs_err:.2e} (gate 1e-6); worst row rel_err={worst:.2e} (gate 1e-5)"))
}

fn consistency_grid() -> Outcome {
    let cfg = EntropyDerivativeConfig::default();
    let tol = Tolerance::tier2();
    let mut worst = (0.0, 0.0, 0.0);
    let mut failures = Vec::new();
    for a in GRID_ALPHAS {
        for r in GRID_RATIOS {
            match check_consistency(a, r, 1.0, Tier::Numeric, &cfg, ScoreMethod::default(), &tol) {
                Ok(recs) => match best_record(&recs).and_then(|b| b.rel_err) {
                    Some(e) if e <= 1e-5 => {
                        if e > worst.0 {
                            worst = (e, a, r);
                        }
                    }
                    other => failures.push(format!("alpha={a} v/s={r}: {other:?}")),
                },
                Err(e) => failures.push(format!("alpha={a} v/s={r}: {e}")),
            }
        }
    }
    let detail = format!(
        "24 points, worst best-h rel_err={:.2e} at alpha={} v/s={} (gate 1e-5){}",
        worst.0,
        worst.1,
        worst.2,
        if failures.is_empty() { String::new() } else { format!("; failed: {}", failures.join(", ")) }
    );
    outcome(failures.is_empty(), detail)
}

fn positivity() -> Outcome {
    let mut ratios = GRID_RATIOS.to_vec();
    ratios.push(1.0);
    let rows = match positivity_sweep(&GRID_ALPHAS, &ratios, sc(1.0), &EntropyDerivativeConfig::default(), &Tolerance::tier2()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut smallest = f64::INFINITY;
    let mut bad = Vec::new();
    for row in &rows {
        match row.mfi {
            Ok(m) if row.v == row.s => {
                if m.abs() > 1e-9 {
                    bad.push(format!("alpha={} ratio 1: {m:e}", row.alpha));
                }
            }
            Ok(m) => {
                smallest = smallest.min(m);
                if m < -1e-10 || m <= 1e-6 {
                    bad.push(format!("alpha={} v={}: {m:e}", row.alpha, row.v));
                }
            }
            Err(ref e) => bad.push(format!("alpha={} v={}: {e}", row.alpha, row.v)),
        }
    }
    outcome(bad.is_empty(), format!("{} rows, smallest MFI off the diagonal {smallest:.3e}{}", rows.len(),
        if bad.is_empty() { String::new() } else { format!("; bad: {}", bad.join(", ")) }))
}

fn cauchy_closed_forms() -> Outcome {
    let tol = Tolerance::tier1();
    let mut worst: f64 = 0.0;
    for r in [0.5, 2.0, 3.0] {
        let pair = ScorePair::from_scales(1.0, r, 1.0).unwrap();
        let d = relative_entropy(&pair, &tol).map(|d| rel(d, relative_entropy_cauchy_closed(sc(r), sc(1.0))));
        let m = mfi_integral(1.0, r, 1.0, ScoreMethod::default(), &tol).map(|m| rel(m, mfi_cauchy_closed(sc(r), sc(1.0))));
        match (d, m) {
            (Ok(d), Ok(m)) => worst = worst.max(d).max(m),
            (Err(e), _) | (_, Err(e)) => return outcome(false, format!("v/s={r}: {e}")),
        }
    }
    outcome(worst <= 1e-8, format!("worst relative error {worst:.2e} over D and M at v/s in {{0.5, 2, 3}} (gate 1e-8)"))
}

fn normalization_and_moment() -> Outcome {
    let tol = Tolerance::tier2();
    let (mut norm, mut moment): (f64, f64) = (0.0, 0.0);
    for a in GRID_ALPHAS {
        for s in [1.0, 1.2] {
            let d = DensitySpec::new(a, s).unwrap();
            let n = integrate(|x| d.pdf(x).unwrap(), Interval::real_line(), &tol);
            let m = integrate(|x| x * d.pdf_dx(x).unwrap(), Interval::real_line(), &tol);
            match (n, m) {
                (Ok(n), Ok(m)) => {
                    norm = norm.max((n.value - 1.0).abs());
                    moment = moment.max((m.value + 1.0).abs());
                }
                _ => return outcome(false, format!("alpha={a} s={s}: integration failed")),
            }
        }
    }
    outcome(norm <= 1e-8 && moment <= 1e-6,
        format!("max |∫g − 1| = {norm:.2e} (gate 1e-8), max |∫x g' + 1| = {moment:.2e} (gate 1e-6)"))
}

fn scale_derivative() -> Outcome {
    let v = 1.2;
    let mut worst: f64 = 0.0;
    for a in [1.0, 1.5, 2.0] {
        for x in [0.5, 1.0, 3.0] {
            let fd = five_point(|w| DensitySpec::new(a, w).unwrap().pdf(x), v, 1e-4).unwrap();
            let d = DensitySpec::new(a, v).unwrap();
            let exact = -(d.pdf(x).unwrap() + x * d.pdf_dx(x).unwrap()) / (a * v);
            worst = worst.max(rel(fd, exact));
        }
    }
    outcome(worst <= 1e-5, format!("worst relative error {worst:.2e} (gate 1e-5)"))
}

fn lsi() -> Outcome {
    let ratios: Vec<f64> = [10.0, 100.0, 1000.0, 10000.0].iter().map(|&v| lsi_ratio_cauchy(sc(v), sc(1.0)).unwrap()).collect();
    let pass = ratios.windows(2).all(|w| w[1] > w[0]);
    outcome(pass, format!("D/M1 at v/s = 10, 100, 1000, 10000: {:.4} {:.4} {:.4} {:.4}", ratios[0], ratios[1], ratios[2], ratios[3]))
}

fn property_suites() -> Outcome {
    let config = Config { cases: 64, failure_persistence: None, ..Config::default() };
    let runner = || TestRunner::new_with_rng(config.clone(), TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let alpha = || proptest::prop_oneof![Just(1.0), Just(2.0), 0.5f64..2.0];
    let mut failures = Vec::new();

    let honest = {
        let cases: [KnownIntegral; 5] = [
            (|x: f64| (-x * x).exp(), Interval::real_line(), std::f64::consts::PI.sqrt()),
            (|x: f64| 1.0 / (1.0 + x * x), Interval::real_line(), std::f64::consts::PI),
            (|x: f64| if x > 0.0 { x.ln() } else { 0.0 }, Interval::new(0.0, 1.0).unwrap(), -1.0),
            (|x: f64| x * (-x).exp(), Interval::from(0.0).unwrap(), 1.0),
            (|x: f64| (x - 0.3).abs(), Interval::new(0.0, 1.0).unwrap(), 0.29),
        ];
        cases.iter().all(|(f, iv, exact)| {
            let r = integrate(f, *iv, &Tolerance::tier2()).unwrap();
            (r.value - exact).abs() <= 10.0 * r.abs_error_estimate.max(1e-16)
        })
    };
    if !honest {
        failures.push("quadrature honesty".to_string());
    }

    let symmetry = runner().run(&(alpha(), 0.2f64..5.0, -60.0f64..60.0), |(a, s, x)| {
        let d = DensitySpec::new(a, s).unwrap();
        proptest::prop_assert_eq!(d.pdf(x).unwrap(), d.pdf(-x).unwrap());
        Ok(())
    });
    if let Err(e) = symmetry {
        failures.push(format!("symmetry: {e}"));
    }

    let scaling = runner().run(&(alpha(), 0.2f64..5.0, -30.0f64..30.0), |(a, v, x)| {
        let c = v.powf(-1.0 / a);
        let lhs = DensitySpec::new(a, v).unwrap().pdf(x).unwrap();
        let rhs = c * DensitySpec::new(a, 1.0).unwrap().pdf(c * x).unwrap();
        proptest::prop_assert!(rel(lhs, rhs) <= 1e-9);
        Ok(())
    });
    if let Err(e) = scaling {
        failures.push(format!("scaling: {e}"));
    }

    let oddness = runner().run(&(alpha(), 0.2f64..5.0, 0.0f64..30.0), |(a, s, x)| {
        let d = DensitySpec::new(a, s).unwrap();
        for m in [ScoreMethod::Analytic, ScoreMethod::default()] {
            let (p, n) = (fisher_score(&d, x, m).unwrap(), fisher_score(&d, -x, m).unwrap());
            proptest::prop_assert!((p + n).abs() <= 1e-12 * (1.0 + p.abs()));
        }
        Ok(())
    });
    if let Err(e) = oddness {
        failures.push(format!("score oddness: {e}"));
    }

    let pair = ScorePair::from_scales(1.3, 0.7, 1.0).unwrap();
    let cfg = EntropyDerivativeConfig::default();
    let a = d_prime_numeric(&pair, &cfg, &Tolerance::tier2()).unwrap();
    let b = d_prime_numeric(&pair, &cfg, &Tolerance::tier2()).unwrap();
    let same = a.iter().zip(&b).all(|(x, y)| x.estimate.as_ref().unwrap().to_bits() == y.estimate.as_ref().unwrap().to_bits());
    if !same {
        failures.push("determinism".to_string());
    }

    outcome(failures.is_empty(), if failures.is_empty() {
        "quadrature honesty, symmetry, scaling identity, score oddness, determinism: zero failures".to_string()
    } else {
        failures.join("; ")
    })
}

fn main() {
    let criteria: Vec<(&str, Duration, Criterion)> = vec![
        ("Tier 1 Cauchy", Duration::from_secs(5), Box::new(|| tier1(1.0, 0.075_757_575_757_575_73))),
        ("Tier 1 Gaussian", Duration::from_secs(5), Box::new(|| tier1(2.0, 0.083_333_333_333_333_31))),
        ("Tier 2 table reproduction", Duration::from_secs(120), Box::new(table1)),
        ("Consistency grid", Duration::from_secs(20 * 60), Box::new(consistency_grid)),
        ("Positivity", Duration::from_secs(20 * 60), Box::new(positivity)),
        ("Cauchy closed forms", Duration::from_secs(60), Box::new(cauchy_closed_forms)),
        ("Normalization and first moment of g'", Duration::from_secs(60), Box::new(normalization_and_moment)),
        ("Scale-derivative identity", Duration::from_secs(60), Box::new(scale_derivative)),
        ("LSI ratio divergence", Duration::from_secs(5), Box::new(lsi)),
        ("Property suites", Duration::from_secs(300), Box::new(property_suites)),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}  {name}: {} [{:.2}s, budget {}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
