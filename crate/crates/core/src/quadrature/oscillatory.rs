//! Fourier-type integrals `∫₀^∞ envelope(k)·cos(ωk) dk` (and the sine
//! analogue) for rapidly decaying envelopes.
//!
//! The envelope is truncated at the first `K` where it has dropped below
//! `1e-18` of its peak. `[0, K]` is split at the zeros of the kernel into
//! half-periods, each carved into at least two fixed Kronrod panels. The
//! panel layout depends continuously on `ω`, so the result is a smooth
//! function of the frequency. The panel touching `k = 0` is refined
//! geometrically, which absorbs the `k^α` cusp of stable characteristic
//! functions. When there are too many half-periods to sum outright, the
//! partial sums are extrapolated with Wynn's epsilon algorithm.

use crate::error::{Error, Result};
use crate::quadrature::epsilon::EpsilonTable;
use crate::quadrature::gk::{gk15, RULE_SIZE};
use crate::quadrature::{integrate, Interval, QuadratureResult, Tolerance};
use crate::scalar::{from_usize, lit, Real};

/// Relative envelope level at which the integration range is truncated.
pub(crate) const TRUNCATION_LEVEL: f64 = 1e-18;
/// Panels covering the envelope support, independently of `ω`.
const PANELS_PER_SUPPORT: usize = 24;
/// Dyadic refinement levels of the panel that starts at the origin.
const GRADING_LEVELS: usize = 24;
/// Cap on the levels taken while the innermost panel is unresolved.
const MAX_GRADING_LEVELS: usize = 200;
/// Half-periods summed without extrapolation.
const DIRECT_LIMIT: usize = 600;
/// Half-periods accumulated before extrapolated values are trusted.
const MIN_ACCELERATED_TERMS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Kernel {
    Cosine,
    Sine,
}

/// `∫₀^∞ envelope(k) cos(ωk) dk` for `ω ≥ 0`.
///
/// `envelope` should be positive, decreasing and decay faster than any
/// power. At `ω = 0` this is plain adaptive integration.
pub fn integrate_oscillatory_cosine<T, F>(
    envelope: F,
    omega: T,
    tol: &Tolerance,
) -> Result<QuadratureResult<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    check_frequency(omega)?;
    tol.validate()?;
    if omega == T::zero() {
        return integrate(envelope, Interval::from(T::zero())?, tol);
    }
    let support = find_support(&envelope)?;
    oscillatory(&envelope, omega, Kernel::Cosine, support, tol)
}

/// `∫₀^∞ envelope(k) sin(ωk) dk` for `ω ≥ 0`; the envelope need not be
/// monotone but must decay faster than any power.
pub fn integrate_oscillatory_sine<T, F>(
    envelope: F,
    omega: T,
    tol: &Tolerance,
) -> Result<QuadratureResult<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    check_frequency(omega)?;
    tol.validate()?;
    let support = find_support(&envelope)?;
    oscillatory(&envelope, omega, Kernel::Sine, support, tol)
}

fn check_frequency<T: Real>(omega: T) -> Result<()> {
    if !omega.is_finite() || omega < T::zero() {
        return Err(Error::InvalidArgument(format!(
            "oscillation frequency must be finite and non-negative, got {omega}"
        )));
    }
    Ok(())
}

/// Smallest `K` (to bisection precision) past the envelope peak with
/// `envelope(K) <= TRUNCATION_LEVEL * peak`.
fn find_support<T: Real, F: Fn(T) -> T>(envelope: &F) -> Result<T> {
    let sample = |k: T| -> Result<T> {
        let v = envelope(k);
        if v.is_finite() {
            Ok(v.abs())
        } else {
            Err(Error::NonFiniteEvaluation {
                x: k.to_f64().unwrap_or(f64::NAN),
            })
        }
    };
    let mut peak = sample(T::zero())?;
    let mut k = lit::<T>(2f64.powi(-20));
    let threshold = |peak: T| peak * lit(TRUNCATION_LEVEL);
    for _ in 0..1100 {
        let v = sample(k)?;
        peak = peak.max(v);
        if peak > T::zero() && v <= threshold(peak) {
            let (mut lo, mut hi) = (k * lit(0.5), k);
            for _ in 0..48 {
                let mid = lit::<T>(0.5) * (lo + hi);
                if sample(mid)? <= threshold(peak) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(hi);
        }
        k = k + k;
        if !k.is_finite() {
            break;
        }
    }
    Err(Error::InvalidArgument(
        "envelope does not decay to its truncation level".into(),
    ))
}

/// Core routine shared with the density engine, which knows the support
/// in closed form.
pub(crate) fn oscillatory<T, F>(
    envelope: &F,
    omega: T,
    kernel: Kernel,
    support: T,
    tol: &Tolerance,
) -> Result<QuadratureResult<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    let integrand = |k: T| {
        let e = envelope(k);
        match kernel {
            Kernel::Cosine => e * (omega * k).cos(),
            Kernel::Sine => e * (omega * k).sin(),
        }
    };
    let max_width = support / from_usize(PANELS_PER_SUPPORT);
    let half_period = if omega > T::zero() {
        T::PI() / omega
    } else {
        T::infinity()
    };
    let zero = |j: usize| -> T {
        let j = from_usize::<T>(j);
        match kernel {
            Kernel::Cosine => (j + lit(0.5)) * half_period,
            Kernel::Sine => (j + T::one()) * half_period,
        }
    };

    let mut evaluations = 0usize;
    let mut piece = |j: usize| -> Result<(T, T)> {
        let lo = if j == 0 { T::zero() } else { zero(j - 1) };
        let hi = zero(j).min(support);
        let (value, error, evals) = piece_integral(&integrand, lo, hi, max_width)?;
        evaluations += evals;
        Ok((value, error))
    };

    let pieces = {
        // number of kernel zeros strictly inside the support, plus one
        let first = zero(0);
        if first >= support {
            1
        } else {
            let n = ((support / half_period)
                - match kernel {
                    Kernel::Cosine => lit(0.5),
                    Kernel::Sine => T::one(),
                })
            .floor()
            .to_usize()
            .unwrap_or(usize::MAX);
            n.saturating_add(2)
        }
    };

    if pieces <= DIRECT_LIMIT {
        let mut value = T::zero();
        let mut error = T::zero();
        for j in 0..pieces {
            if j > 0 && zero(j - 1) >= support {
                break;
            }
            let (v, e) = piece(j)?;
            value = value + v;
            error = error + e;
        }
        if error > tol.target(value) {
            return Err(Error::ConvergenceFailure {
                value: value.to_f64().unwrap_or(f64::NAN),
                abs_error: error.to_f64().unwrap_or(f64::NAN),
                subdivisions: pieces,
            });
        }
        return Ok(QuadratureResult {
            value,
            abs_error_estimate: error,
            evaluations,
        });
    }

    let mut table = EpsilonTable::new();
    let mut partial = T::zero();
    let mut panel_error = T::zero();
    let mut history: Vec<T> = Vec::with_capacity(DIRECT_LIMIT);
    for j in 0..DIRECT_LIMIT {
        let (v, e) = piece(j)?;
        partial = partial + v;
        panel_error = panel_error + e;
        history.push(table.push(partial));
        let n = history.len();
        if n >= MIN_ACCELERATED_TERMS {
            let d1 = (history[n - 1] - history[n - 2]).abs();
            let d2 = (history[n - 2] - history[n - 3]).abs();
            let est = history[n - 1];
            if d1 <= tol.target(est) && d2 <= tol.target(est) {
                return Ok(QuadratureResult {
                    value: est,
                    abs_error_estimate: d1 + d2 + panel_error,
                    evaluations,
                });
            }
        }
    }
    Err(Error::AccelerationStagnation {
        terms: DIRECT_LIMIT,
    })
}

/// Integral over one half-period `[lo, hi]`, split into equal panels no
/// wider than `max_width` (and at least two of them).
fn piece_integral<T, G>(g: &G, lo: T, hi: T, max_width: T) -> Result<(T, T, usize)>
where
    T: Real,
    G: Fn(T) -> T,
{
    let len = hi - lo;
    let panels = (len / max_width)
        .ceil()
        .to_usize()
        .unwrap_or(2)
        .max(2);
    let width = len / from_usize(panels);
    let mut value = T::zero();
    let mut error = T::zero();
    let mut evals = 0;
    let nonfinite = |x: T| Error::NonFiniteEvaluation {
        x: x.to_f64().unwrap_or(f64::NAN),
    };
    for i in 0..panels {
        let a = lo + from_usize::<T>(i) * width;
        let b = if i + 1 == panels { hi } else { a + width };
        if i == 0 && lo == T::zero() {
            // dyadic refinement toward the origin; a k^α cusp there needs
            // more levels when α is small and the panel wide
            let mut c = b;
            let mut levels = 0;
            loop {
                if levels >= GRADING_LEVELS {
                    let p = gk15(g, T::zero(), c).map_err(nonfinite)?;
                    evals += RULE_SIZE;
                    if p.error <= T::epsilon() * value.abs() || levels >= MAX_GRADING_LEVELS {
                        value = value + p.value;
                        error = error + p.error;
                        break;
                    }
                }
                let left = c * lit(0.5);
                let p = gk15(g, left, c).map_err(nonfinite)?;
                value = value + p.value;
                error = error + p.error;
                evals += RULE_SIZE;
                c = left;
                levels += 1;
            }
        } else {
            let p = gk15(g, a, b).map_err(nonfinite)?;
            value = value + p.value;
            error = error + p.error;
            evals += RULE_SIZE;
        }
    }
    Ok((value, error, evals))
}
