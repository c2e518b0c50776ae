//! Bracketed scalar root finding.

use crate::error::{Error, Result};
use crate::real::Real;

/// Bisection on `[a, b]` with `f(a)` and `f(b)` of opposite sign (or one of them zero).
///
/// Stops when the bracket is narrower than `x_tol` or after the bracket can no
/// longer be split in floating point.
pub fn bisect<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, x_tol: T) -> Result<T> {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::domain(format!(
            "root not bracketed on [{lo}, {hi}]: f = {f_lo}, {f_hi}"
        )));
    }
    let two = T::lit(2.0);
    for _ in 0..2000 {
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi || hi - lo <= x_tol {
            break;
        }
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + (hi - lo) / two)
}

/// Newton iteration kept inside a sign-changing bracket; falls back to bisection
/// whenever a step leaves the bracket or fails to halve the residual.
pub fn newton_bracketed<T: Real, F: FnMut(T) -> (T, T)>(mut f: F, a: T, b: T, x_tol: T) -> Result<T> {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let (f_lo, _) = f(lo);
    let (f_hi, _) = f(hi);
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::domain(format!(
            "root not bracketed on [{lo}, {hi}]: f = {f_lo}, {f_hi}"
        )));
    }
    let rising = f_hi > T::zero();
    let two = T::lit(2.0);
    let mut x = lo + (hi - lo) / two;
    let mut last_step = hi - lo;
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        if fx == T::zero() {
            return Ok(x);
        }
        if (fx > T::zero()) == rising {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != T::zero() && newton > lo && newton < hi && (newton - x).abs() < last_step / two {
            newton
        } else {
            lo + (hi - lo) / two
        };
        last_step = (next - x).abs();
        x = next;
        if last_step <= x_tol || hi - lo <= x_tol {
            return Ok(x);
        }
    }
    Err(Error::non_convergence(
        "safeguarded Newton",
        x.as_f64(),
        (hi - lo).as_f64(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x: f64| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 4e-15);
    }

    #[test]
    fn newton_finds_cos_fixed_point() {
        let r = newton_bracketed(|x: f64| (x - x.cos(), 1.0 + x.sin()), 0.0, 1.0, 1e-15).unwrap();
        assert!((r - r.cos()).abs() < 1e-15);
    }

    #[test]
    fn rejects_unbracketed() {
        assert!(bisect(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
        assert!(newton_bracketed(|x: f64| (x * x + 1.0, 2.0 * x), -1.0, 1.0, 1e-12).is_err());
    }
}
