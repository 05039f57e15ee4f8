//! Fisher scores, relative entropy between two members of one stable
//! family, and the derivative of that entropy in the first scale.

use std::cell::Cell;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{try_integrate, Interval, Tolerance};
use crate::scalar::{lit, Real};
use crate::stable::{DensitySpec, Scale};
use crate::stencil::five_point_combine;

/// Score step used by the log-derivative method unless overridden.
pub const DEFAULT_SCORE_STEP: f64 = 1e-6;
pub const MIN_SCORE_STEP: f64 = 1e-8;
pub const MAX_SCORE_STEP: f64 = 1e-3;

/// Step ladder for the entropy derivative stencil.
pub const DEFAULT_H_LADDER: [f64; 5] = [1e-2, 5e-3, 1e-3, 5e-4, 1e-4];

/// How the score `f'/f` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScoreMethod {
    /// `pdf_dx / pdf`, in closed form for the Cauchy and Gaussian laws.
    Analytic,
    /// Five-point central difference of `log_pdf` with step `fd_step`,
    /// relative to `|x|` once `|x| > 1`.
    LogDerivativeFd { fd_step: f64 },
}

impl ScoreMethod {
    pub fn log_derivative(fd_step: f64) -> Result<Self> {
        let m = ScoreMethod::LogDerivativeFd { fd_step };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ScoreMethod::Analytic => Ok(()),
            ScoreMethod::LogDerivativeFd { fd_step } => {
                if (MIN_SCORE_STEP..=MAX_SCORE_STEP).contains(&fd_step) {
                    Ok(())
                } else {
                    Err(Error::InvalidStep(fd_step))
                }
            }
        }
    }
}

impl Default for ScoreMethod {
    fn default() -> Self {
        ScoreMethod::LogDerivativeFd {
            fd_step: DEFAULT_SCORE_STEP,
        }
    }
}

/// Fisher score `g'(x)/g(x)` of `spec` at `x`.
pub fn fisher_score<T: Real>(spec: &DensitySpec<T>, x: T, method: ScoreMethod) -> Result<T> {
    method.validate()?;
    let a = spec.alpha().value();
    let s = spec.scale().value();
    match method {
        ScoreMethod::Analytic if a == T::one() => Ok(-(x + x) / (s * s + x * x)),
        ScoreMethod::Analytic if a == lit(2.0) => Ok(-x / (s + s)),
        ScoreMethod::Analytic => {
            if x == T::zero() {
                return Ok(T::zero());
            }
            Ok(spec.pdf_dx(x)? / spec.pdf(x)?)
        }
        ScoreMethod::LogDerivativeFd { fd_step } => {
            // a step that is exact in floating point, and log-ratios against
            // the centre: the stencil weights sum to zero, so this is the
            // same difference quotient with far less cancellation. Taken at
            // |x| so the score is exactly odd; beyond |x| = 1 the step grows
            // with |x| so that it never vanishes against it.
            let ax = x.abs();
            let h = (ax + lit::<T>(fd_step) * ax.max(T::one())) - ax;
            let r = |j: T| spec.log_pdf_ratio(ax, ax + j * h);
            let two = lit::<T>(2.0);
            let score = five_point_combine(r(two)?, r(T::one())?, r(-T::one())?, r(-two)?, h);
            Ok(if x < T::zero() { -score } else { score })
        }
    }
}

/// Two laws from one stable family, `g_v` and `g_s`.
#[derive(Debug, Clone)]
pub struct ScorePair<T> {
    v: DensitySpec<T>,
    s: DensitySpec<T>,
}

impl<T: Real> PartialEq for ScorePair<T> {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && self.s == other.s
    }
}

impl<T: Real> ScorePair<T> {
    pub fn new(v: DensitySpec<T>, s: DensitySpec<T>) -> Result<Self> {
        if v.alpha() != s.alpha() {
            return Err(Error::MismatchedAlpha(
                v.alpha().value().to_f64().unwrap_or(f64::NAN),
                s.alpha().value().to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(Self { v, s })
    }

    pub fn from_scales(alpha: T, v: T, s: T) -> Result<Self> {
        Self::new(DensitySpec::new(alpha, v)?, DensitySpec::new(alpha, s)?)
    }

    pub fn v(&self) -> &DensitySpec<T> {
        &self.v
    }

    pub fn s(&self) -> &DensitySpec<T> {
        &self.s
    }

    pub fn alpha(&self) -> T {
        self.v.alpha().value()
    }

    pub fn is_degenerate(&self) -> bool {
        self.v.scale() == self.s.scale()
    }

    /// The same pair with the first scale replaced.
    pub fn with_v(&self, v: T) -> Result<Self> {
        Ok(Self {
            v: self.v.with_scale(v)?,
            s: self.s.clone(),
        })
    }
}

/// `pF_v(x) - pF_s(x)`.
pub fn score_difference<T: Real>(pair: &ScorePair<T>, x: T, method: ScoreMethod) -> Result<T> {
    if pair.is_degenerate() {
        return Ok(T::zero());
    }
    Ok(fisher_score(&pair.v, x, method)? - fisher_score(&pair.s, x, method)?)
}

/// Relative entropy with the diagnostics gathered while integrating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate<T> {
    pub value: T,
    pub abs_error_estimate: T,
    pub evaluations: usize,
    /// Nodes where a log-density came back as `-∞` and were dropped.
    pub log_zero_nodes: usize,
}

/// `D(g_v ‖ g_s) = ∫ g_v (log g_v − log g_s)` over the whole line.
pub fn relative_entropy<T: Real>(pair: &ScorePair<T>, tol: &Tolerance) -> Result<T> {
    relative_entropy_detailed(pair, tol).map(|e| e.value)
}

pub fn relative_entropy_detailed<T: Real>(
    pair: &ScorePair<T>,
    tol: &Tolerance,
) -> Result<EntropyEstimate<T>> {
    let log_zero = Cell::new(0usize);
    let integrand = |x: T| -> Result<T> {
        let lv = pair.v.log_pdf(x)?;
        let ls = pair.s.log_pdf(x)?;
        if lv == T::neg_infinity() || ls == T::neg_infinity() {
            log_zero.set(log_zero.get() + 1);
            return Ok(T::zero());
        }
        Ok(lv.exp() * (lv - ls))
    };
    let r = try_integrate(integrand, Interval::real_line(), tol)?;
    Ok(EntropyEstimate {
        value: r.value,
        abs_error_estimate: r.abs_error_estimate,
        evaluations: r.evaluations,
        log_zero_nodes: log_zero.get(),
    })
}

/// Cauchy relative entropy `log((v+s)² / 4vs)`.
pub fn relative_entropy_cauchy_closed<T: Real>(v: Scale<T>, s: Scale<T>) -> T {
    let (v, s) = (v.value(), s.value());
    // (v+s)² = 4vs + (v−s)²
    ((v - s) * (v - s) / (lit::<T>(4.0) * v * s)).ln_1p()
}

/// Gaussian relative entropy between variances `2v` and `2s`:
/// `½(v/s − 1 − ln(v/s))`.
pub fn relative_entropy_gaussian_closed<T: Real>(v: Scale<T>, s: Scale<T>) -> T {
    let d = (v.value() - s.value()) / s.value();
    lit::<T>(0.5) * (d - d.ln_1p())
}

/// `d/dv log((v+s)²/4vs) = (v−s) / (v(v+s))`.
pub fn d_prime_cauchy_closed<T: Real>(v: Scale<T>, s: Scale<T>) -> T {
    let (v, s) = (v.value(), s.value());
    (v - s) / (v * (v + s))
}

/// `d/dv ½(v/s − 1 − ln(v/s)) = (v−s) / (2vs)`.
pub fn d_prime_gaussian_closed<T: Real>(v: Scale<T>, s: Scale<T>) -> T {
    let (v, s) = (v.value(), s.value());
    (v - s) / (lit::<T>(2.0) * v * s)
}

/// Finite-difference stencil used for the entropy derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stencil {
    FivePoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyDerivativeConfig {
    pub stencil: Stencil,
    pub h_values: Vec<f64>,
}

impl Default for EntropyDerivativeConfig {
    fn default() -> Self {
        Self {
            stencil: Stencil::FivePoint,
            h_values: DEFAULT_H_LADDER.to_vec(),
        }
    }
}

impl EntropyDerivativeConfig {
    pub fn new(h_values: Vec<f64>) -> Self {
        Self {
            stencil: Stencil::FivePoint,
            h_values,
        }
    }

    /// Every step must keep `v ± 2h` and `s` well inside `(0, ∞)`.
    pub fn validate(&self, v: f64, s: f64) -> Result<()> {
        if self.h_values.is_empty() {
            return Err(Error::InvalidArgument("no stencil steps configured".into()));
        }
        let limit = v.min(s) / 4.0;
        for &h in &self.h_values {
            if !(h > 0.0 && h < limit) {
                return Err(Error::StencilOutOfDomain { h, limit });
            }
        }
        Ok(())
    }
}

/// One row of the entropy-derivative ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilEstimate<T> {
    pub h: T,
    pub estimate: Result<T>,
}

/// `D'(v)` by the five-point stencil on `D(g_{v±h}, g_{v±2h} ‖ g_s)`, one
/// estimate per configured step. A failed entropy evaluation only voids
/// the row that needed it.
///
/// At `v = s` every row is exactly zero: `D ≥ 0` is smooth with its minimum
/// there. The stencil itself would carry an `h⁴ D⁽⁵⁾/30` truncation error,
/// since `D` is not even about `s`.
pub fn d_prime_numeric<T: Real>(
    pair: &ScorePair<T>,
    cfg: &EntropyDerivativeConfig,
    tol: &Tolerance,
) -> Result<Vec<StencilEstimate<T>>> {
    let v = pair.v.scale().value();
    let s = pair.s.scale().value();
    cfg.validate(
        v.to_f64().unwrap_or(f64::NAN),
        s.to_f64().unwrap_or(f64::NAN),
    )?;
    tol.validate()?;
    if pair.is_degenerate() {
        return Ok(cfg
            .h_values
            .iter()
            .map(|&h| StencilEstimate {
                h: lit(h),
                estimate: Ok(T::zero()),
            })
            .collect());
    }

    let offsets = [2.0, 1.0, -1.0, -2.0];
    let jobs: Vec<(usize, usize)> = (0..cfg.h_values.len())
        .flat_map(|i| (0..offsets.len()).map(move |j| (i, j)))
        .collect();
    let entropies: Vec<Result<T>> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let h = lit::<T>(cfg.h_values[i]);
            let shifted = pair.with_v(v + lit::<T>(offsets[j]) * h)?;
            relative_entropy(&shifted, tol)
        })
        .collect();

    Ok(cfg
        .h_values
        .iter()
        .enumerate()
        .map(|(i, &h)| {
            let h = lit::<T>(h);
            let row = &entropies[4 * i..4 * i + 4];
            let estimate = match (&row[0], &row[1], &row[2], &row[3]) {
                (Ok(p2), Ok(p1), Ok(m1), Ok(m2)) => Ok(five_point_combine(*p2, *p1, *m1, *m2, h)),
                _ => Err(row
                    .iter()
                    .find_map(|r| r.as_ref().err().cloned())
                    .expect("at least one failed entropy")),
            };
            StencilEstimate { h, estimate }
        })
        .collect())
}
