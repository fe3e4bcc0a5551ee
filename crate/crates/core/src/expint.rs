//! Stable segment integrals of e^{−cu}, u·e^{−cu}, u²·e^{−cu}.
//!
//! The closed-form antiderivatives cancel catastrophically when c·u is
//! small (they subtract values that agree to many digits), which happens
//! routinely at shallow elevation slopes. Below a threshold the exponential
//! is expanded and integrated term by term, which is exact to roundoff.

const SERIES_THRESHOLD: f64 = 0.3;
const N_TERMS: usize = 14;

/// ∫_a^b e^{−cu} du; b may be +∞ (then c must be positive).
pub(crate) fn int_exp(c: f64, a: f64, b: f64) -> f64 {
    if !b.is_finite() {
        debug_assert!(c > 0.0);
        return (-c * a).exp() / c;
    }
    if b <= a {
        return 0.0;
    }
    if c * b < SERIES_THRESHOLD {
        return series(c, a, b, 1);
    }
    ((-c * a).exp() - (-c * b).exp()) / c
}

/// ∫_a^b u·e^{−cu} du; b may be +∞.
pub(crate) fn int_rexp(c: f64, a: f64, b: f64) -> f64 {
    let prim = |u: f64| -(u / c + 1.0 / (c * c)) * (-c * u).exp();
    if !b.is_finite() {
        debug_assert!(c > 0.0);
        return -prim(a);
    }
    if b <= a {
        return 0.0;
    }
    if c * b < SERIES_THRESHOLD {
        return series(c, a, b, 2);
    }
    prim(b) - prim(a)
}

/// ∫_a^b u²·e^{−cu} du; b may be +∞.
pub(crate) fn int_r2exp(c: f64, a: f64, b: f64) -> f64 {
    let prim = |u: f64| {
        -(u * u / c + 2.0 * u / (c * c) + 2.0 / (c * c * c)) * (-c * u).exp()
    };
    if !b.is_finite() {
        debug_assert!(c > 0.0);
        return -prim(a);
    }
    if b <= a {
        return 0.0;
    }
    if c * b < SERIES_THRESHOLD {
        return series(c, a, b, 3);
    }
    prim(b) - prim(a)
}

/// Term-by-term expansion: ∫ u^{p−1} Σ (−cu)^n/n! du with p = 1, 2, 3.
fn series(c: f64, a: f64, b: f64, p: u32) -> f64 {
    let mut total = 0.0;
    let mut coeff = 1.0; // (−c)^n / n!
    let mut a_pow = a.powi(p as i32);
    let mut b_pow = b.powi(p as i32);
    for n in 0..N_TERMS {
        let k = n as u32 + p;
        total += coeff * (b_pow - a_pow) / k as f64;
        coeff *= -c / (n + 1) as f64;
        a_pow *= a;
        b_pow *= b;
    }
    total
}
