//! Mixed fractional information along the stable interpolation path, by the
//! chain-rule and integral formulations, and the consistency identity
//!
//! ```text
//! D'(v) = (1/(αv)) ∫ x g_v(x) (pF_v(x) − pF_s(x)) dx
//! ```
//!
//! that ties them together.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{
    d_prime_cauchy_closed, d_prime_gaussian_closed, d_prime_numeric, fisher_score,
    relative_entropy_cauchy_closed, EntropyDerivativeConfig, ScoreMethod, ScorePair,
    StencilEstimate,
};
use crate::quadrature::{try_integrate, Interval, Tolerance};
use crate::scalar::{lit, Real};
use crate::stable::{Scale, StabilityIndex};

/// Chain-rule and integral values of the MFI for one `(α, v, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MfiResult<T> {
    pub chain_value: T,
    pub integral_value: T,
    pub abs_discrepancy: T,
    pub rel_discrepancy: T,
}

impl<T: Real> MfiResult<T> {
    pub fn new(chain_value: T, integral_value: T) -> Self {
        let (abs, rel) = discrepancy(chain_value, integral_value);
        Self {
            chain_value,
            integral_value,
            abs_discrepancy: abs,
            rel_discrepancy: rel,
        }
    }
}

/// `|a − b|` and that divided by `|b|` (or just `|a − b|` when `b = 0`).
fn discrepancy<T: Real>(a: T, reference: T) -> (T, T) {
    let abs = (a - reference).abs();
    let rel = if reference == T::zero() {
        abs
    } else {
        abs / reference.abs()
    };
    (abs, rel)
}

/// `X_t = (1−t)^{1/α} X₀ + t^{1/α} Z_s` with `X₀ ~ g_v`; the law stays in
/// the family with scale `v(t) = (1−t)v + ts`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationPath<T> {
    pub v0: Scale<T>,
    pub target: Scale<T>,
    pub alpha: StabilityIndex<T>,
}

impl<T: Real> InterpolationPath<T> {
    pub fn new(alpha: T, v: T, s: T) -> Result<Self> {
        Ok(Self {
            v0: Scale::new(v)?,
            target: Scale::new(s)?,
            alpha: StabilityIndex::new(alpha)?,
        })
    }

    /// Scale of `X_t`.
    pub fn scale_at(&self, t: T) -> Result<T> {
        check_time(t)?;
        Ok((T::one() - t) * self.v0.value() + t * self.target.value())
    }

    /// Transport score `u(x, t) = x (1/s − 1/v(t))`.
    pub fn score_u(&self, x: T, t: T) -> Result<T> {
        let vt = self.scale_at(t)?;
        Ok(x * (self.target.value().recip() - vt.recip()))
    }
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if t >= T::zero() && t < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidTime(t.to_f64().unwrap_or(f64::NAN)))
    }
}

/// Chain-rule MFI `α D'(v) (v − s) / s`.
pub fn mfi_chain<T: Real>(alpha: T, v: T, s: T, d_prime: T) -> T {
    alpha * d_prime * (v - s) / s
}

/// Closed-form Cauchy MFI `(v−s)² / (s v (v+s))`.
pub fn mfi_cauchy_closed<T: Real>(v: Scale<T>, s: Scale<T>) -> T {
    let (v, s) = (v.value(), s.value());
    (v - s) * (v - s) / (s * v * (v + s))
}

/// Integral MFI `∫ g_v(x) u(x, 0) (pF_v(x) − pF_s(x)) dx` with
/// `u(x, 0) = x (v − s)/(s v)`; exactly zero when `v = s`.
pub fn mfi_integral<T: Real>(alpha: T, v: T, s: T, method: ScoreMethod, tol: &Tolerance) -> Result<T> {
    let pair = ScorePair::from_scales(alpha, v, s)?;
    method.validate()?;
    tol.validate()?;
    if pair.is_degenerate() {
        return Ok(T::zero());
    }
    let path = InterpolationPath::new(alpha, v, s)?;
    let integrand = |x: T| -> Result<T> {
        let u = path.score_u(x, T::zero())?;
        if u == T::zero() {
            return Ok(T::zero());
        }
        let delta = fisher_score(pair.v(), x, method)? - fisher_score(pair.s(), x, method)?;
        Ok(pair.v().pdf(x)? * u * delta)
    };
    Ok(try_integrate(integrand, Interval::real_line(), tol)?.value)
}

/// Right-hand side of the consistency identity,
/// `(1/(αv)) ∫ x g_v (pF_v − pF_s) dx`.
///
/// Shares its quadrature with [`mfi_integral`], rescaled by `s / (α(v−s))`.
pub fn consistency_rhs<T: Real>(alpha: T, v: T, s: T, method: ScoreMethod, tol: &Tolerance) -> Result<T> {
    let m = mfi_integral(alpha, v, s, method, tol)?;
    if v == s {
        return Ok(T::zero());
    }
    Ok(m * s / (alpha * (v - s)))
}

/// Which left-hand side the consistency check uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tier {
    /// Closed-form `D'(v)`; Cauchy and Gaussian only.
    #[serde(rename = "1")]
    ClosedForm,
    /// Five-point stencil on numerically integrated entropies.
    #[serde(rename = "2")]
    Numeric,
}

impl Tier {
    /// Closed forms where they exist, numerics otherwise.
    pub fn natural<T: Real>(alpha: T) -> Self {
        if alpha == T::one() || alpha == lit(2.0) {
            Tier::ClosedForm
        } else {
            Tier::Numeric
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Tier::ClosedForm => 1,
            Tier::Numeric => 2,
        }
    }
}

/// Closed-form `D'(v)` for `α ∈ {1, 2}`.
pub fn d_prime_closed<T: Real>(alpha: T, v: T, s: T) -> Result<T> {
    let (vs, ss) = (Scale::new(v)?, Scale::new(s)?);
    if alpha == T::one() {
        Ok(d_prime_cauchy_closed(vs, ss))
    } else if alpha == lit(2.0) {
        Ok(d_prime_gaussian_closed(vs, ss))
    } else {
        Err(Error::InvalidArgument(format!(
            "no closed-form entropy derivative for alpha = {alpha}"
        )))
    }
}

/// One row of a consistency table. `h` is `None` for closed-form rows;
/// `lhs` and the errors are `None` when that row's entropies failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyRecord<T> {
    pub h: Option<T>,
    pub lhs: Option<T>,
    pub rhs: T,
    pub abs_err: Option<T>,
    pub rel_err: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl<T: Real> ConsistencyRecord<T> {
    fn new(h: Option<T>, lhs: Result<T>, rhs: T) -> Self {
        match lhs {
            Ok(l) => {
                let (abs, rel) = discrepancy(l, rhs);
                Self {
                    h,
                    lhs: Some(l),
                    rhs,
                    abs_err: Some(abs),
                    rel_err: Some(rel),
                    failure: None,
                }
            }
            Err(e) => Self {
                h,
                lhs: None,
                rhs,
                abs_err: None,
                rel_err: None,
                failure: Some(e.to_string()),
            },
        }
    }
}

/// Compares `D'(v)` with the scaled score integral. Closed-form tier gives
/// one record; the numeric tier gives one per configured step.
pub fn check_consistency<T: Real>(
    alpha: T,
    v: T,
    s: T,
    tier: Tier,
    cfg: &EntropyDerivativeConfig,
    method: ScoreMethod,
    tol: &Tolerance,
) -> Result<Vec<ConsistencyRecord<T>>> {
    let pair = ScorePair::from_scales(alpha, v, s)?;
    if tier == Tier::Numeric {
        cfg.validate(
            v.to_f64().unwrap_or(f64::NAN),
            s.to_f64().unwrap_or(f64::NAN),
        )?;
    }
    let closed = match tier {
        Tier::ClosedForm => Some(d_prime_closed(alpha, v, s)?),
        Tier::Numeric => None,
    };
    let rhs = consistency_rhs(alpha, v, s, method, tol)?;
    if pair.is_degenerate() {
        // both sides vanish identically
        return Ok(match tier {
            Tier::ClosedForm => vec![ConsistencyRecord::new(None, Ok(T::zero()), T::zero())],
            Tier::Numeric => cfg
                .h_values
                .iter()
                .map(|&h| ConsistencyRecord::new(Some(lit(h)), Ok(T::zero()), T::zero()))
                .collect(),
        });
    }
    Ok(match closed {
        Some(lhs) => vec![ConsistencyRecord::new(None, Ok(lhs), rhs)],
        None => d_prime_numeric(&pair, cfg, tol)?
            .into_iter()
            .map(|StencilEstimate { h, estimate }| ConsistencyRecord::new(Some(h), estimate, rhs))
            .collect(),
    })
}

/// The most trustworthy estimate of a step ladder: of all adjacent pairs,
/// the one whose estimates agree best; the larger step of that pair wins.
pub fn best_estimate<T: Real>(rows: &[StencilEstimate<T>]) -> Option<&StencilEstimate<T>> {
    let mut sorted: Vec<&StencilEstimate<T>> = rows.iter().filter(|r| r.estimate.is_ok()).collect();
    sorted.sort_by(|a, b| b.h.partial_cmp(&a.h).unwrap_or(std::cmp::Ordering::Equal));
    if sorted.len() < 2 {
        return sorted.first().copied();
    }
    sorted
        .windows(2)
        .min_by(|a, b| {
            let spread = |w: &[&StencilEstimate<T>]| {
                let (x, y) = (w[0].estimate.as_ref().unwrap(), w[1].estimate.as_ref().unwrap());
                (*x - *y).abs()
            };
            spread(a).partial_cmp(&spread(b)).unwrap_or(std::cmp::Ordering::Equal)
        })
        .map(|w| w[0])
}

/// Same selection on consistency records.
pub fn best_record<T: Real>(records: &[ConsistencyRecord<T>]) -> Option<&ConsistencyRecord<T>> {
    let ok: Vec<&ConsistencyRecord<T>> = records.iter().filter(|r| r.lhs.is_some()).collect();
    if ok.len() < 2 || ok.iter().any(|r| r.h.is_none()) {
        return ok.first().copied();
    }
    let mut sorted = ok;
    sorted.sort_by(|a, b| b.h.partial_cmp(&a.h).unwrap_or(std::cmp::Ordering::Equal));
    sorted
        .windows(2)
        .min_by(|a, b| {
            let spread = |w: &[&ConsistencyRecord<T>]| (w[0].lhs.unwrap() - w[1].lhs.unwrap()).abs();
            spread(a).partial_cmp(&spread(b)).unwrap_or(std::cmp::Ordering::Equal)
        })
        .map(|w| w[0])
}

/// `D'(v)`: closed form for `α ∈ {1, 2}`, best stencil estimate otherwise.
pub fn d_prime<T: Real>(
    alpha: T,
    v: T,
    s: T,
    cfg: &EntropyDerivativeConfig,
    tol: &Tolerance,
) -> Result<T> {
    if Tier::natural(alpha) == Tier::ClosedForm {
        return d_prime_closed(alpha, v, s);
    }
    let pair = ScorePair::from_scales(alpha, v, s)?;
    let rows = d_prime_numeric(&pair, cfg, tol)?;
    match best_estimate(&rows) {
        Some(r) => r.estimate.clone(),
        None => Err(rows
            .into_iter()
            .find_map(|r| r.estimate.err())
            .unwrap_or_else(|| Error::InvalidArgument("empty step ladder".into()))),
    }
}

/// One positivity sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityRow<T> {
    pub alpha: T,
    pub v: T,
    pub s: T,
    pub mfi: Result<T>,
}

/// Chain-rule MFI over an `α × (v/s)` grid. Failed points are reported in
/// their row; the sweep itself only fails on invalid grids.
pub fn positivity_sweep<T: Real>(
    alpha_grid: &[T],
    ratio_grid: &[T],
    s: Scale<T>,
    cfg: &EntropyDerivativeConfig,
    tol: &Tolerance,
) -> Result<Vec<PositivityRow<T>>> {
    if alpha_grid.is_empty() || ratio_grid.is_empty() {
        return Err(Error::InvalidArgument("sweep grids must be non-empty".into()));
    }
    for &a in alpha_grid {
        StabilityIndex::new(a)?;
    }
    for &r in ratio_grid {
        if !(r > T::zero() && r.is_finite()) {
            return Err(Error::InvalidArgument(format!("ratio {r} must be positive")));
        }
    }
    let s = s.value();
    let points: Vec<(T, T)> = alpha_grid
        .iter()
        .flat_map(|&a| ratio_grid.iter().map(move |&r| (a, r)))
        .collect();
    Ok(points
        .par_iter()
        .map(|&(alpha, r)| {
            let v = r * s;
            let mfi = if v == s {
                Ok(T::zero())
            } else {
                d_prime(alpha, v, s, cfg, tol).map(|d| mfi_chain(alpha, v, s, d))
            };
            PositivityRow { alpha, v, s, mfi }
        })
        .collect())
}

/// `D / M₁` for the Cauchy family,
/// `s v (v+s)/(v−s)² · log((v+s)²/(4vs))`; grows without bound in `v/s`.
pub fn lsi_ratio_cauchy<T: Real>(v: Scale<T>, s: Scale<T>) -> Result<T> {
    if v == s {
        return Err(Error::DegenerateRatio);
    }
    Ok(relative_entropy_cauchy_closed(v, s) / mfi_cauchy_closed(v, s))
}
