use std::time::Instant;

use stable_info::info::{
    fisher_score, relative_entropy, relative_entropy_cauchy_closed, relative_entropy_gaussian_closed,
    score_difference,
};
use stable_info::mfi::{
    best_estimate, check_consistency, d_prime, d_prime_closed, lsi_ratio_cauchy, mfi_cauchy_closed,
    mfi_chain, mfi_integral, positivity_sweep,
};
use stable_info::{
    info::d_prime_numeric, DensitySpec, EntropyDerivativeConfig, InterpolationPath, MfiResult, Scale,
    ScoreMethod, ScorePair, Tier, Tolerance,
};

use crate::args::{
    Command, DprimeArgs, Format, IntegrandArgs, MfiArgs, MfiMethod, OutArgs, PairCmd, PdfArgs,
    ScoreArgs, ScoreKind, ScoreOpts, SweepArgs, SweepKind, TolArgs, ValidateArgs,
};
use crate::error::{CliError, CliResult};
use crate::report::{emit, Cell, IntegrandCurve, Table, ValidationReport, SCHEMA_VERSION};

const GRID_ALPHAS: [f64; 6] = [0.8, 1.0, 1.2, 1.5, 1.8, 2.0];
const POSITIVITY_RATIOS: [f64; 5] = [0.5, 0.8, 1.0, 1.2, 2.0];
const LSI_RATIOS: [f64; 4] = [10.0, 100.0, 1000.0, 10000.0];

/// Runs one subcommand; `Ok` carries the exit status (0, or 1 for a failed gate).
pub fn run(command: Command) -> CliResult<u8> {
    match command {
        Command::Pdf(a) => pdf(a),
        Command::Score(a) => score(a),
        Command::Kl(a) => kl(a),
        Command::Dprime(a) => dprime(a),
        Command::Mfi(a) => mfi(a),
        Command::Validate(a) => validate(a),
        Command::Sweep(a) => sweep(a),
        Command::Integrand(a) => integrand(a),
    }
}

fn tolerance(args: &TolArgs, tier: Tier) -> CliResult<Tolerance> {
    let base = match tier {
        Tier::ClosedForm => Tolerance::tier1(),
        Tier::Numeric => Tolerance::tier2(),
    };
    Ok(Tolerance::new(
        args.eps_abs.unwrap_or(base.eps_abs),
        args.eps_rel.unwrap_or(base.eps_rel),
        args.max_subdivisions,
    )?)
}

fn score_method(opts: &ScoreOpts) -> CliResult<ScoreMethod> {
    Ok(match opts.score {
        ScoreKind::Analytic => ScoreMethod::Analytic,
        ScoreKind::Fd => ScoreMethod::log_derivative(opts.score_dx)?,
    })
}

fn emit_table(table: &Table, out: &OutArgs, default: Format) -> CliResult<()> {
    emit(&table.render(out.format.unwrap_or(default)), out.out.as_deref())
}

fn pdf(a: PdfArgs) -> CliResult<u8> {
    let spec = DensitySpec::new(a.alpha, a.scale)?;
    let mut t = Table::new(&["x", "pdf", "log_pdf", "pdf_dx"]);
    for &x in &a.x {
        t.push(vec![
            Cell::Num(x),
            Cell::Num(spec.pdf(x)?),
            Cell::Num(spec.log_pdf(x)?),
            Cell::Num(spec.pdf_dx(x)?),
        ]);
    }
    emit_table(&t, &a.out, Format::Table)?;
    Ok(0)
}

fn score(a: ScoreArgs) -> CliResult<u8> {
    let spec = DensitySpec::new(a.pdf.alpha, a.pdf.scale)?;
    let method = score_method(&a.score)?;
    let mut t = Table::new(&["x", "score"]);
    for &x in &a.pdf.x {
        t.push(vec![Cell::Num(x), Cell::Num(fisher_score(&spec, x, method)?)]);
    }
    emit_table(&t, &a.pdf.out, Format::Table)?;
    Ok(0)
}

fn closed_entropy(alpha: f64, v: f64, s: f64) -> CliResult<Option<f64>> {
    let (vs, ss) = (Scale::new(v)?, Scale::new(s)?);
    Ok(if alpha == 1.0 {
        Some(relative_entropy_cauchy_closed(vs, ss))
    } else if alpha == 2.0 {
        Some(relative_entropy_gaussian_closed(vs, ss))
    } else {
        None
    })
}

fn kl(a: PairCmd) -> CliResult<u8> {
    let p = &a.pair;
    let pair = ScorePair::from_scales(p.alpha, p.v, p.s)?;
    let tol = tolerance(&a.tol, Tier::natural(p.alpha))?;
    let d = relative_entropy(&pair, &tol)?;
    let mut t = Table::new(&["alpha", "v", "s", "kl", "closed_form"]);
    t.push(vec![
        Cell::Num(p.alpha),
        Cell::Num(p.v),
        Cell::Num(p.s),
        Cell::Num(d),
        Cell::opt(closed_entropy(p.alpha, p.v, p.s)?),
    ]);
    emit_table(&t, &a.out, Format::Table)?;
    Ok(0)
}

fn dprime(a: DprimeArgs) -> CliResult<u8> {
    let p = &a.pair;
    let pair = ScorePair::from_scales(p.alpha, p.v, p.s)?;
    let tol = tolerance(&a.tol, Tier::Numeric)?;
    let rows = d_prime_numeric(&pair, &EntropyDerivativeConfig::new(a.h.clone()), &tol)?;
    let closed = d_prime_closed(p.alpha, p.v, p.s).ok();
    let best_h = best_estimate(&rows).map(|r| r.h);
    let mut t = Table::new(&["h", "d_prime", "closed_form", "selected", "failure"]);
    for r in &rows {
        let (value, failure) = match &r.estimate {
            Ok(d) => (Cell::Num(*d), Cell::Missing),
            Err(e) => (Cell::Missing, Cell::Text(e.to_string())),
        };
        let selected = if Some(r.h) == best_h { "*" } else { "" };
        t.push(vec![Cell::Num(r.h), value, Cell::opt(closed), Cell::Text(selected.into()), failure]);
    }
    emit_table(&t, &a.out, Format::Table)?;
    Ok(if best_h.is_some() { 0 } else { 3 })
}

fn mfi(a: MfiArgs) -> CliResult<u8> {
    let p = &a.pair;
    ScorePair::from_scales(p.alpha, p.v, p.s)?;
    let tol = tolerance(&a.tol, Tier::natural(p.alpha))?;
    let method = score_method(&a.score)?;
    let cfg = EntropyDerivativeConfig::new(a.h.clone());
    let chain = || -> CliResult<f64> {
        if p.v == p.s {
            return Ok(0.0);
        }
        Ok(mfi_chain(p.alpha, p.v, p.s, d_prime(p.alpha, p.v, p.s, &cfg, &tol)?))
    };
    let integral = || -> CliResult<f64> { Ok(mfi_integral(p.alpha, p.v, p.s, method, &tol)?) };

    let mut headers = vec!["alpha", "v", "s"];
    let mut row = vec![Cell::Num(p.alpha), Cell::Num(p.v), Cell::Num(p.s)];
    match a.method {
        MfiMethod::Chain => {
            headers.push("chain");
            row.push(Cell::Num(chain()?));
        }
        MfiMethod::Integral => {
            headers.push("integral");
            row.push(Cell::Num(integral()?));
        }
        MfiMethod::Both => {
            let r = MfiResult::new(chain()?, integral()?);
            headers.extend(["chain", "integral", "abs_discrepancy", "rel_discrepancy"]);
            row.extend(
                [r.chain_value, r.integral_value, r.abs_discrepancy, r.rel_discrepancy].map(Cell::Num),
            );
        }
    }
    let mut t = Table::new(&headers);
    t.push(row);
    emit_table(&t, &a.out, Format::Table)?;
    Ok(0)
}

fn render_report(report: &ValidationReport, format: Format) -> String {
    match format {
        Format::Table => report.summary(),
        Format::Json => report.to_json(),
        Format::Csv => report.records_table().render(Format::Csv),
    }
}

fn validate(a: ValidateArgs) -> CliResult<u8> {
    if let Some(path) = &a.report {
        let report = ValidationReport::read(path)?;
        emit(&render_report(&report, a.format), None)?;
        return Ok(if report.passes() { 0 } else { 1 });
    }

    let p = &a.pair;
    let tier = match a.tier {
        None => Tier::natural(p.alpha),
        Some(1) if p.alpha == 1.0 || p.alpha == 2.0 => Tier::ClosedForm,
        Some(1) => {
            return Err(CliError::Usage(format!(
                "tier 1 needs alpha = 1 or 2, got {}",
                p.alpha
            )))
        }
        Some(_) => Tier::Numeric,
    };
    let gate = a.gate.unwrap_or(match tier {
        Tier::ClosedForm => 1e-10,
        Tier::Numeric => 1e-5,
    });
    if !(gate.is_finite() && gate >= 0.0) {
        return Err(CliError::Usage(format!("gate {gate} must be finite and non-negative")));
    }
    let tol = tolerance(&a.tol, tier)?;
    let method = score_method(&a.score)?;
    let cfg = EntropyDerivativeConfig::new(a.h.clone());

    let start = Instant::now();
    let records = check_consistency(p.alpha, p.v, p.s, tier, &cfg, method, &tol)?;
    let wall = start.elapsed().as_secs_f64();

    let report = ValidationReport {
        schema_version: SCHEMA_VERSION,
        alpha: p.alpha,
        v: p.v,
        s: p.s,
        tier: tier.number(),
        tolerances: tol,
        score_method: method,
        gate,
        rhs: records[0].rhs,
        closed_form_lhs: match tier {
            Tier::ClosedForm => records[0].lhs,
            Tier::Numeric => None,
        },
        records,
        wall_time_seconds: wall,
        engine_version: stable_info::VERSION.to_string(),
    };
    emit(&report.to_json(), Some(&a.out))?;
    emit(&render_report(&report, a.format), None)?;
    eprintln!("wall time {wall:.3} s; report written to {}", a.out.display());
    Ok(if report.passes() { 0 } else { 1 })
}

fn sweep(a: SweepArgs) -> CliResult<u8> {
    let s = Scale::new(a.s)?;
    match a.kind {
        SweepKind::Positivity => {
            let alphas = a.alpha_grid.clone().unwrap_or(GRID_ALPHAS.to_vec());
            let ratios = a.ratio_grid.clone().unwrap_or(POSITIVITY_RATIOS.to_vec());
            let tol = tolerance(&a.tol, Tier::Numeric)?;
            let rows = positivity_sweep(&alphas, &ratios, s, &EntropyDerivativeConfig::new(a.h.clone()), &tol)?;
            let mut t = Table::new(&["alpha", "v", "s", "mfi", "failure"]);
            let mut failed = false;
            for r in &rows {
                let (m, why) = match &r.mfi {
                    Ok(m) => (Cell::Num(*m), Cell::Missing),
                    Err(e) => {
                        failed = true;
                        (Cell::Missing, Cell::Text(e.to_string()))
                    }
                };
                t.push(vec![Cell::Num(r.alpha), Cell::Num(r.v), Cell::Num(r.s), m, why]);
            }
            emit_table(&t, &a.out, Format::Csv)?;
            Ok(if failed { 3 } else { 0 })
        }
        SweepKind::Lsi => {
            let alphas = a.alpha_grid.clone().unwrap_or(vec![1.0]);
            if alphas.is_empty() || alphas.iter().any(|&al| al != 1.0) {
                return Err(CliError::Usage(
                    "the lsi sweep is defined for the Cauchy family only (alpha = 1)".into(),
                ));
            }
            let ratios = a.ratio_grid.clone().unwrap_or(LSI_RATIOS.to_vec());
            if ratios.is_empty() {
                return Err(CliError::Usage("ratio grid must be non-empty".into()));
            }
            let mut t = Table::new(&["v", "s", "kl", "mfi", "ratio"]);
            for &r in &ratios {
                let v = Scale::new(r * s.value())?;
                t.push(vec![
                    Cell::Num(v.value()),
                    Cell::Num(s.value()),
                    Cell::Num(relative_entropy_cauchy_closed(v, s)),
                    Cell::Num(mfi_cauchy_closed(v, s)),
                    Cell::Num(lsi_ratio_cauchy(v, s)?),
                ]);
            }
            emit_table(&t, &a.out, Format::Csv)?;
            Ok(0)
        }
    }
}

/// Uniform grid built so that a symmetric range gives exactly mirrored points.
fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let m = (n - 1) as f64;
    (0..n)
        .map(|i| (lo * (m - i as f64) + hi * i as f64) / m)
        .collect()
}

fn integrand(a: IntegrandArgs) -> CliResult<u8> {
    if !(a.x_min < a.x_max && a.x_min.is_finite() && a.x_max.is_finite()) {
        return Err(CliError::Usage(format!(
            "need finite x-min < x-max, got [{}, {}]",
            a.x_min, a.x_max
        )));
    }
    if a.n_points < 2 {
        return Err(CliError::Usage("n-points must be at least 2".into()));
    }
    let p = &a.pair;
    let pair = ScorePair::from_scales(p.alpha, p.v, p.s)?;
    let path = InterpolationPath::new(p.alpha, p.v, p.s)?;
    let method = score_method(&a.score)?;

    let x_grid = grid(a.x_min, a.x_max, a.n_points);
    let mut curve = IntegrandCurve {
        u0: Vec::with_capacity(x_grid.len()),
        delta_score: Vec::with_capacity(x_grid.len()),
        integrand: Vec::with_capacity(x_grid.len()),
        x_grid,
    };
    for &x in &curve.x_grid {
        let u0 = path.score_u(x, 0.0)?;
        let delta = score_difference(&pair, x, method)?;
        curve.u0.push(u0);
        curve.delta_score.push(delta);
        curve.integrand.push(pair.v().pdf(x)? * u0 * delta);
    }
    let text = match a.out.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&curve).expect("curve is serializable");
            s.push('\n');
            s
        }
        f => curve.table().render(f),
    };
    emit(&text, a.out.out.as_deref())?;
    Ok(0)
}
