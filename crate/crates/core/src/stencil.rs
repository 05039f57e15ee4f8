//! Five-point central difference, `O(h⁴)`:
//! `f'(x) ≈ (-f(x+2h) + 8f(x+h) - 8f(x-h) + f(x-2h)) / 12h`.

use crate::scalar::{lit, Real};

pub fn five_point<T: Real, E>(f: impl Fn(T) -> Result<T, E>, x: T, h: T) -> Result<T, E> {
    let two_h = h + h;
    let f_p2 = f(x + two_h)?;
    let f_p1 = f(x + h)?;
    let f_m1 = f(x - h)?;
    let f_m2 = f(x - two_h)?;
    Ok(five_point_combine(f_p2, f_p1, f_m1, f_m2, h))
}

/// Combines precomputed samples at `x+2h, x+h, x-h, x-2h`.
pub fn five_point_combine<T: Real>(f_p2: T, f_p1: T, f_m1: T, f_m2: T, h: T) -> T {
    (-f_p2 + lit::<T>(8.0) * (f_p1 - f_m1) + f_m2) / (lit::<T>(12.0) * h)
}
