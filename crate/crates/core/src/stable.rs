//! Symmetric α-stable densities with characteristic function
//! `exp(-s·|k|^α)`.
//!
//! `α = 1` (Cauchy) and `α = 2` (Gaussian with variance `2s`) use closed
//! forms. Every other index is evaluated by cosine inversion of the
//! characteristic function near the origin, by Zolotarev's positive
//! integral representation in the shoulders (`1 < α ≤ 2` only, where
//! inversion loses relative accuracy to cancellation), and by the power-law
//! tail expansion
//!
//! ```text
//! g_s(x) ~ (1/π) Σ_{n≥1} (-1)^{n+1} Γ(nα+1)/n! · sin(nπα/2) · sⁿ · |x|^{-nα-1}
//! ```
//!
//! beyond a crossover point. The crossover is found once per density by
//! walking a geometric grid until both evaluations agree.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::quadrature::oscillatory::{oscillatory, Kernel, TRUNCATION_LEVEL};
use crate::quadrature::{integrate, Interval, Tolerance};
use crate::scalar::{from_usize, lit, ln_gamma, Real};

/// Stability index `α ∈ (0, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct StabilityIndex<T>(T);

impl<T: Real> StabilityIndex<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if alpha > T::zero() && alpha <= lit(2.0) {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidStabilityIndex(alpha.to_f64().unwrap_or(f64::NAN)))
        }
    }

    pub fn value(self) -> T {
        self.0
    }
}

/// Strictly positive, finite scale `s` of the characteristic exponent.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Scale<T>(T);

impl<T: Real> Scale<T> {
    pub fn new(s: T) -> Result<Self> {
        if s > T::zero() && s.is_finite() {
            Ok(Self(s))
        } else {
            Err(Error::InvalidScale(s.to_f64().unwrap_or(f64::NAN)))
        }
    }

    pub fn value(self) -> T {
        self.0
    }
}

/// Leading power-law behaviour `g_s(x) ≈ coefficient · |x|^{-1-α}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailAsymptote<T> {
    pub coefficient: T,
    /// `|x|` beyond which the density is taken from the tail expansion.
    pub crossover_x: T,
}

/// Agreement required between inversion and tail expansion at the crossover.
pub const CROSSOVER_AGREEMENT: f64 = 1e-11;
/// Geometric grid scanned for the crossover (standardized units).
const CROSSOVER_GRID_START: f64 = 1.5;
const CROSSOVER_GRID_RATIO: f64 = 1.2;
const CROSSOVER_GRID_MAX: f64 = 2.0e3;
const MAX_TAIL_TERMS: usize = 48;
/// Standardized `|x|` from which `α ≥ 1.1` uses the Zolotarev integral.
const ZOLOTAREV_FROM: f64 = 2.0;
const ZOLOTAREV_REL_TOL: f64 = 5e-14;
/// Below this index the Zolotarev integrand collapses onto a spike of width
/// O(α − 1); inversion is well conditioned there anyway.
const ZOLOTAREV_MIN_ALPHA: f64 = 1.1;

/// Expansion coefficients for `s = 1` plus the standardized crossover.
#[derive(Debug)]
struct TailModel<T> {
    coeffs: Vec<T>,
    /// `|c_n|` without the oscillating sine factor; drives truncation.
    magnitudes: Vec<T>,
    crossover: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Cauchy,
    Gaussian,
    General,
}

/// A symmetric α-stable law with characteristic function `exp(-s|k|^α)`.
///
/// The value is immutable; the tail crossover is computed lazily on first
/// use and shared between clones.
#[derive(Debug, Clone)]
pub struct DensitySpec<T> {
    alpha: StabilityIndex<T>,
    scale: Scale<T>,
    tail: Arc<OnceLock<Option<TailModel<T>>>>,
}

impl<T: Real> PartialEq for DensitySpec<T> {
    fn eq(&self, other: &Self) -> bool {
        self.alpha == other.alpha && self.scale == other.scale
    }
}

impl<T: Real> DensitySpec<T> {
    pub fn new(alpha: T, scale: T) -> Result<Self> {
        Ok(Self::from_parts(StabilityIndex::new(alpha)?, Scale::new(scale)?))
    }

    pub fn from_parts(alpha: StabilityIndex<T>, scale: Scale<T>) -> Self {
        Self {
            alpha,
            scale,
            tail: Arc::new(OnceLock::new()),
        }
    }

    /// Converts from the location-scale convention `exp(-|c k|^α)`, where
    /// `s = c^α`.
    pub fn from_location_scale(alpha: T, c: T) -> Result<Self> {
        let a = StabilityIndex::new(alpha)?;
        if !(c > T::zero() && c.is_finite()) {
            return Err(Error::InvalidScale(c.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self::from_parts(a, Scale::new(c.powf(alpha))?))
    }

    /// The location-scale parameter `c = s^{1/α}`.
    pub fn location_scale(&self) -> T {
        self.s().powf(self.a().recip())
    }

    pub fn alpha(&self) -> StabilityIndex<T> {
        self.alpha
    }

    pub fn scale(&self) -> Scale<T> {
        self.scale
    }

    /// Same index, different scale.
    pub fn with_scale(&self, scale: T) -> Result<Self> {
        Ok(Self::from_parts(self.alpha, Scale::new(scale)?))
    }

    #[inline]
    fn a(&self) -> T {
        self.alpha.0
    }

    #[inline]
    fn s(&self) -> T {
        self.scale.0
    }

    fn family(&self) -> Family {
        if self.a() == T::one() {
            Family::Cauchy
        } else if self.a() == lit(2.0) {
            Family::Gaussian
        } else {
            Family::General
        }
    }

    /// Law of `a·X` for `X` with this law: scale becomes `|a|^α s`.
    pub fn rescale(&self, a: T) -> Result<Self> {
        if a == T::zero() || !a.is_finite() {
            return Err(Error::ZeroScalar);
        }
        Ok(Self::from_parts(
            self.alpha,
            Scale::new(a.abs().powf(self.a()) * self.s())?,
        ))
    }

    /// Density at `x`.
    pub fn pdf(&self, x: T) -> Result<T> {
        check_point(x)?;
        let x = x.abs();
        let s = self.s();
        match self.family() {
            Family::Cauchy => Ok(s / (T::PI() * (s * s + x * x))),
            Family::Gaussian => {
                Ok((lit::<T>(4.0) * T::PI() * s).sqrt().recip() * (-(x * x) / (lit::<T>(4.0) * s)).exp())
            }
            Family::General => self.pdf_general(x),
        }
    }

    /// Derivative of the density in `x`; odd in `x`.
    pub fn pdf_dx(&self, x: T) -> Result<T> {
        check_point(x)?;
        let s = self.s();
        match self.family() {
            Family::Cauchy => {
                let d = s * s + x * x;
                Ok(-lit::<T>(2.0) * x * s / (T::PI() * d * d))
            }
            Family::Gaussian => Ok(-x / (lit::<T>(2.0) * s) * self.pdf(x)?),
            Family::General => self.pdf_dx_general(x),
        }
    }

    /// Natural log of the density, without underflow in the tails.
    pub fn log_pdf(&self, x: T) -> Result<T> {
        check_point(x)?;
        let x = x.abs();
        let s = self.s();
        match self.family() {
            Family::Cauchy => Ok((s / T::PI()).ln() - (s * s + x * x).ln()),
            Family::Gaussian => Ok(-lit::<T>(0.5) * (lit::<T>(4.0) * T::PI() * s).ln()
                - x * x / (lit::<T>(4.0) * s)),
            Family::General => self.log_pdf_general(x),
        }
    }

    /// `ln g(y) − ln g(x)`, accurate when `y` is close to `x` (where the
    /// plain difference of two logs would cancel).
    pub fn log_pdf_ratio(&self, x: T, y: T) -> Result<T> {
        check_point(x)?;
        check_point(y)?;
        let (x, y) = (x.abs(), y.abs());
        if x == y {
            return Ok(T::zero());
        }
        let s = self.s();
        let gap = (x - y) * (x + y);
        match self.family() {
            Family::Cauchy => Ok((gap / (s * s + y * y)).ln_1p()),
            Family::Gaussian => Ok(gap / (lit::<T>(4.0) * s)),
            Family::General => {
                let tx = self.tail_if_beyond(x)?;
                let ty = self.tail_if_beyond(y)?;
                match (tx, ty) {
                    (Some(m), Some(_)) => {
                        let (a, s) = (self.a(), self.s());
                        let cx = tail_correction(m, s * x.powf(-a), |_| T::one());
                        let cy = tail_correction(m, s * y.powf(-a), |_| T::one());
                        Ok(-(T::one() + a) * ((y - x) / x).ln_1p() + ((cy - cx) / (T::one() + cx)).ln_1p())
                    }
                    (None, None) => {
                        let gx = self.body_pdf(x)?;
                        let gy = self.body_pdf(y)?;
                        Ok(((gy - gx) / gx).ln_1p())
                    }
                    _ => Ok(self.log_pdf_general(y)? - self.log_pdf_general(x)?),
                }
            }
        }
    }

    /// Leading tail behaviour and the point where evaluation switches to
    /// the tail expansion.
    pub fn tail_asymptote(&self) -> Result<TailAsymptote<T>> {
        if self.family() == Family::Gaussian {
            return Err(Error::NotApplicable);
        }
        let model = self.tail_model()?.ok_or(Error::NotApplicable)?;
        Ok(TailAsymptote {
            coefficient: model.coeffs[0] * self.s(),
            crossover_x: model.crossover * self.location_scale(),
        })
    }

    /// The general-index evaluation path (inversion, Zolotarev integral and
    /// tail expansion), also for `α ∈ {1, 2}` where closed forms exist.
    pub fn pdf_general_path(&self, x: T) -> Result<T> {
        check_point(x)?;
        self.pdf_general(x.abs())
    }

    /// General-index path for the derivative, also for `α ∈ {1, 2}`.
    pub fn pdf_dx_general_path(&self, x: T) -> Result<T> {
        check_point(x)?;
        self.pdf_dx_general(x)
    }

    fn pdf_general(&self, x: T) -> Result<T> {
        if let Some(tail) = self.tail_if_beyond(x)? {
            return Ok(tail_log_pdf(tail, self.a(), self.s(), x).exp());
        }
        self.body_pdf(x)
    }

    fn log_pdf_general(&self, x: T) -> Result<T> {
        if let Some(tail) = self.tail_if_beyond(x)? {
            return Ok(tail_log_pdf(tail, self.a(), self.s(), x));
        }
        Ok(self.body_pdf(x)?.ln())
    }

    fn pdf_dx_general(&self, x: T) -> Result<T> {
        let ax = x.abs();
        let sign = if x < T::zero() { -T::one() } else { T::one() };
        if ax == T::zero() {
            return Ok(T::zero());
        }
        if let Some(tail) = self.tail_if_beyond(ax)? {
            return Ok(sign * tail_pdf_dx(tail, self.a(), self.s(), ax));
        }
        Ok(sign * self.body_pdf_dx(ax)?)
    }

    fn tail_if_beyond(&self, x: T) -> Result<Option<&TailModel<T>>> {
        if self.family() == Family::Gaussian {
            return Ok(None);
        }
        Ok(self
            .tail_model()?
            .filter(|m| x >= m.crossover * self.location_scale()))
    }

    fn tail_model(&self) -> Result<Option<&TailModel<T>>> {
        if let Some(m) = self.tail.get() {
            return Ok(m.as_ref());
        }
        // Several threads may race to compute this; all get the same answer.
        let model = if self.family() == Family::Gaussian {
            None
        } else {
            Some(build_tail_model(self.a())?)
        };
        Ok(self.tail.get_or_init(|| model).as_ref())
    }

    /// Density short of the tail crossover.
    fn body_pdf(&self, x: T) -> Result<T> {
        let (a, c) = (self.a(), self.location_scale());
        let y = x / c;
        if a >= lit(ZOLOTAREV_MIN_ALPHA) && a <= lit(2.0) && y >= lit(ZOLOTAREV_FROM) {
            if let Ok(g) = zolotarev_pdf(a, y) {
                return Ok(g / c);
            }
        }
        self.invert_pdf(x)
    }

    fn body_pdf_dx(&self, x: T) -> Result<T> {
        let (a, c) = (self.a(), self.location_scale());
        let y = x / c;
        if a >= lit(ZOLOTAREV_MIN_ALPHA) && a <= lit(2.0) && y >= lit(ZOLOTAREV_FROM) {
            if let Ok(g) = zolotarev_pdf_dx(a, y) {
                return Ok(g / (c * c));
            }
        }
        self.invert_pdf_dx(x)
    }

    fn invert_pdf(&self, x: T) -> Result<T> {
        let (a, s) = (self.a(), self.s());
        let envelope = |k: T| (-s * k.powf(a)).exp();
        let value = if x == T::zero() {
            integrate(envelope, Interval::from(T::zero())?, &origin_tolerance())
        } else {
            oscillatory(&envelope, x, Kernel::Cosine, cosine_support(a, s), &inversion_tolerance())
        }
        .map_err(|e| evaluation_failure(x, e))?;
        Ok(value.value / T::PI())
    }

    fn invert_pdf_dx(&self, x: T) -> Result<T> {
        let (a, s) = (self.a(), self.s());
        let envelope = |k: T| k * (-s * k.powf(a)).exp();
        let value = oscillatory(&envelope, x, Kernel::Sine, sine_support(a, s), &inversion_tolerance())
            .map_err(|e| evaluation_failure(x, e))?;
        Ok(-value.value / T::PI())
    }
}

fn check_point<T: Real>(x: T) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("density argument must be finite, got {x}")))
    }
}

fn evaluation_failure<T: Real>(x: T, e: Error) -> Error {
    Error::EvaluationFailure {
        x: x.to_f64().unwrap_or(f64::NAN),
        source: Box::new(e),
    }
}

// Failure thresholds only; the achieved accuracy is set by the panel layout.
fn inversion_tolerance() -> Tolerance {
    Tolerance {
        eps_abs: 1e-10,
        eps_rel: 1e-8,
        max_subdivisions: Tolerance::DEFAULT_MAX_SUBDIVISIONS,
    }
}

fn origin_tolerance() -> Tolerance {
    Tolerance {
        eps_abs: 1e-15,
        eps_rel: 5e-14,
        max_subdivisions: Tolerance::DEFAULT_MAX_SUBDIVISIONS,
    }
}

/// `K` with `exp(-s K^α) = TRUNCATION_LEVEL`.
fn cosine_support<T: Real>(a: T, s: T) -> T {
    (-lit::<T>(TRUNCATION_LEVEL).ln() / s).powf(a.recip())
}

/// Truncation point for the envelope `k·exp(-s k^α)`, relative to its peak.
fn sine_support<T: Real>(a: T, s: T) -> T {
    let peak_at = (a * s).recip().powf(a.recip());
    let peak = peak_at * (-a.recip()).exp();
    let base = -lit::<T>(TRUNCATION_LEVEL).ln();
    let mut k = cosine_support(a, s);
    for _ in 0..3 {
        k = ((base + (k / peak).ln().max(T::zero())) / s).powf(a.recip());
    }
    k
}

/// Standardized density for `1 < α ≤ 2`, `y > 0`:
///
/// ```text
/// g(y) = α y^{1/(α-1)} / (π(α-1)) ∫_0^{π/2} V(θ) exp(-y^{α/(α-1)} V(θ)) dθ
/// V(θ) = (cos θ / sin αθ)^{α/(α-1)} cos((α-1)θ) / cos θ
/// ```
///
/// The integrand is positive, so the result keeps full relative accuracy
/// where the cosine inversion cancels.
fn zolotarev_pdf<T: Real>(a: T, y: T) -> Result<T> {
    zolotarev(a, y, false)
}

/// `y`-derivative of [`zolotarev_pdf`], differentiated under the integral:
/// `C y^{p-1} ∫ V e^{-y^e V} (p - e y^e V) dθ` with `p = 1/(α-1)`.
fn zolotarev_pdf_dx<T: Real>(a: T, y: T) -> Result<T> {
    zolotarev(a, y, true)
}

fn zolotarev<T: Real>(a: T, y: T, derivative: bool) -> Result<T> {
    let am1 = a - T::one();
    let p = am1.recip();
    let e = a / am1;
    let ln_y = y.ln();
    // with L = ln(y^e V), y^p V e^{-y^e V} = e^{L - e^L} / y, which stays
    // bounded however large the exponents get
    let integrand = |t: T| {
        let l = e * (ln_y + (t.cos() / (a * t).sin()).ln()) + (am1 * t).cos().ln() - t.cos().ln();
        if !l.is_finite() {
            return T::zero();
        }
        let w = l.exp();
        let f = (l - w).exp();
        if derivative {
            f * (p - e * w)
        } else {
            f
        }
    };
    let tol = Tolerance {
        eps_abs: f64::MIN_POSITIVE,
        eps_rel: ZOLOTAREV_REL_TOL,
        max_subdivisions: 400,
    };
    let r = integrate(integrand, Interval::new(T::zero(), T::FRAC_PI_2())?, &tol)?;
    let y_power = if derivative { y * y } else { y };
    Ok(a / (T::PI() * am1 * y_power) * r.value)
}

/// `(1/π)(-1)^{n+1} Γ(nα+1)/n! sin(nπα/2)` for n = 1..=MAX_TAIL_TERMS,
/// together with the sine-free magnitudes `Γ(nα+1)/(π n!)`.
fn tail_coefficients<T: Real>(a: T) -> (Vec<T>, Vec<T>) {
    (1..=MAX_TAIL_TERMS)
        .map(|n| {
            let nf = from_usize::<T>(n);
            let sign = if n % 2 == 1 { T::one() } else { -T::one() };
            let mag = (ln_gamma(nf * a + T::one()) - ln_gamma(nf + T::one())).exp() / T::PI();
            (sign * mag * (nf * T::PI() * a * lit(0.5)).sin(), mag)
        })
        .unzip()
}

/// Relative correction `Σ_{n≥2} (c_n/c_1) z^{n-1} w(n)` with `z = s|x|^{-α}`.
///
/// The series is asymptotic for `α > 1`: summation stops at the smallest
/// term (by magnitude bound) or once terms drop below round-off.
fn tail_correction<T: Real>(m: &TailModel<T>, z: T, weight: impl Fn(usize) -> T) -> T {
    let c1 = m.coeffs[0];
    let scale = c1.abs();
    let mut acc = T::zero();
    let mut zp = T::one();
    let mut last_bound = T::infinity();
    for n in 2..=m.coeffs.len() {
        zp = zp * z;
        let w = weight(n);
        let bound = m.magnitudes[n - 1] / scale * zp * w.abs();
        if bound > last_bound {
            break;
        }
        last_bound = bound;
        acc = acc + m.coeffs[n - 1] / c1 * zp * w;
        if bound <= T::epsilon() * lit(1e-3) * (weight(1) + acc).abs() {
            break;
        }
    }
    acc
}

fn tail_log_pdf<T: Real>(m: &TailModel<T>, a: T, s: T, x: T) -> T {
    let z = s * x.powf(-a);
    let corr = tail_correction(m, z, |_| T::one());
    (m.coeffs[0] * s).ln() - (T::one() + a) * x.ln() + corr.ln_1p()
}

fn tail_pdf_dx<T: Real>(m: &TailModel<T>, a: T, s: T, x: T) -> T {
    let z = s * x.powf(-a);
    let corr = tail_correction(m, z, |n| from_usize::<T>(n) * a + T::one());
    let lead = (m.coeffs[0] * s).ln() - (lit::<T>(2.0) + a) * x.ln();
    -(lead.exp()) * (a + T::one() + corr)
}

/// Builds the standardized (`s = 1`) tail model and locates the crossover.
fn build_tail_model<T: Real>(a: T) -> Result<TailModel<T>> {
    let (coeffs, magnitudes) = tail_coefficients(a);
    let unit = DensitySpec::from_parts(StabilityIndex(a), Scale(T::one()));
    let mut probe = TailModel {
        coeffs,
        magnitudes,
        crossover: T::infinity(),
    };
    let tol = lit::<T>(CROSSOVER_AGREEMENT);
    let ratio = lit::<T>(CROSSOVER_GRID_RATIO);
    let y_max = lit::<T>(CROSSOVER_GRID_MAX);
    let mut y = lit::<T>(CROSSOVER_GRID_START);
    let mut previous_ok: Option<T> = None;
    while y <= y_max {
        let inverted = unit.body_pdf(y);
        let expanded = tail_log_pdf(&probe, a, T::one(), y).exp();
        let ok = match inverted {
            Ok(v) => ((expanded - v) / v).abs() <= tol,
            Err(_) => false,
        };
        match (ok, previous_ok) {
            // two consecutive grid points must agree
            (true, Some(first)) => {
                probe.crossover = first;
                return Ok(probe);
            }
            (true, None) => previous_ok = Some(y),
            (false, _) => previous_ok = None,
        }
        y = y * ratio;
    }
    probe.crossover = y_max;
    Ok(probe)
}
