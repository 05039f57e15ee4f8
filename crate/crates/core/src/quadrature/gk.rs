#![allow(clippy::excessive_precision)]

use crate::scalar::{lit, Real};

/// Kronrod abscissae on [-1, 1] (non-negative half; last entry is the center).
pub(crate) const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

pub(crate) const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Weights of the embedded 7-point Gauss rule (odd Kronrod nodes + center).
pub(crate) const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub(crate) const RULE_SIZE: usize = 15;

/// One application of the 15-point Kronrod rule with its 7-point Gauss partner.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Panel<T> {
    pub value: T,
    pub error: T,
}

/// Applies the G7/K15 pair on `[a, b]`. The error is rescaled the way
/// QUADPACK does it, with a floor at the round-off level of the panel.
///
/// Returns `Err(x)` with the first node at which `f` was not finite.
pub(crate) fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Result<Panel<T>, T> {
    let center = lit::<T>(0.5) * (a + b);
    let half = lit::<T>(0.5) * (b - a);
    let abs_half = half.abs();

    let eval = |x: T| -> Result<T, T> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(x)
        }
    };

    let f_center = eval(center)?;
    let mut res_kronrod = f_center * lit(WGK[7]);
    let mut res_gauss = f_center * lit(WG[3]);
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];

    for j in 0..7 {
        let dx = half * lit(XGK[j]);
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let w = lit::<T>(WGK[j]);
        res_kronrod = res_kronrod + w * (f1 + f2);
        res_abs = res_abs + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss = res_gauss + lit::<T>(WG[j / 2]) * (f1 + f2);
        }
    }

    let mean = res_kronrod * lit(0.5);
    let mut res_asc = lit::<T>(WGK[7]) * (f_center - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + lit::<T>(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    let error = rescale_error(
        ((res_kronrod - res_gauss) * half).abs(),
        res_abs * abs_half,
        res_asc * abs_half,
    );
    Ok(Panel { value, error })
}

fn rescale_error<T: Real>(err: T, res_abs: T, res_asc: T) -> T {
    let mut err = err;
    if res_asc != T::zero() && err != T::zero() {
        let scale = (lit::<T>(200.0) * err / res_asc).powf(lit(1.5));
        err = if scale < T::one() { res_asc * scale } else { res_asc };
    }
    let eps = T::epsilon();
    if res_abs > T::min_positive_value() / (lit::<T>(50.0) * eps) {
        let floor = lit::<T>(50.0) * eps * res_abs;
        if floor > err {
            err = floor;
        }
    }
    err
}
