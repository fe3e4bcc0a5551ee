//! Joint statistics across two viewing directions, angular autocorrelation
//! and the power spectrum of ω₁.
//!
//! The joint CDF factors over the three independent Poisson regions
//! A₁∩A₂, A₁\A₂, A₂\A₁. All region integrals reduce to one radial
//! integral weighted by the exact circular-interval overlap measure, with
//! closed forms for exponential heights.
//!
//! The joint law has an atom on the diagonal (one building can dominate
//! both directions), so no plain joint density exists. Second moments are
//! therefore computed through the joint survival identity
//! E[XY] = ∫∫ P[X>x, Y>y] dx dy, exact for nonnegative bounded variables
//! regardless of atoms.

use std::f64::consts::PI;

use crate::config::UrbanConfig;
use crate::direction::DirectionalLaw;
use crate::error::{Result, SkylineError};
use crate::geometry::RegionPair;
use crate::height::HeightModel;
use crate::quad;

const TWO_PI: f64 = 2.0 * PI;

use crate::expint::{int_exp, int_r2exp, int_rexp};

/// Exponent integral over the intersection region at slope t:
/// ∫ ang∩(r)·S_H(r·t)·r dr.
fn cap_exponent(pair: &RegionPair, heights: &HeightModel, t: f64, eps: f64) -> Result<f64> {
    debug_assert!(t > 0.0);
    let a = pair.full_circle_radius();
    let l = pair.arc_len;
    let delta = pair.delta;
    if delta == 0.0 {
        let law = law_of(pair, heights)?;
        return law.region_exponent(t);
    }
    let r_far = pair.far_overlap_radius();
    let r_near = pair.near_overlap_radius();
    match *heights {
        HeightModel::Exponential { rate } => {
            let c = rate * t;
            // full circle below a; 2l/r - 2pi while both overlap sides exist;
            // l/r - delta while only the near side does
            let mut g = TWO_PI * int_rexp(c, 0.0, a);
            if r_far > a {
                g += 2.0 * l * int_exp(c, a, r_far) - TWO_PI * int_rexp(c, a, r_far);
            }
            if r_near > r_far {
                g += l * int_exp(c, r_far, r_near) - delta * int_rexp(c, r_far, r_near);
            }
            Ok(g)
        }
        HeightModel::Pareto { scale, .. } => {
            let f = |r: f64| pair.ang_intersection(r) * heights.survival(r * t) * r;
            let pts = [a, r_far, r_near, scale / t];
            quad::integrate_with_breakpoints(f, 0.0, r_near, &pts, eps)
        }
    }
}

/// d/dφ of the intersection exponent, taken under the integral sign:
/// sec²φ · ∫ ang∩(r)·f_H(r·tanφ)·r² dr.
fn cap_exponent_slope(pair: &RegionPair, heights: &HeightModel, phi: f64, eps: f64) -> Result<f64> {
    let t = phi.tan();
    let sec2 = 1.0 + t * t;
    let a = pair.full_circle_radius();
    let l = pair.arc_len;
    let delta = pair.delta;
    let r_far = pair.far_overlap_radius();
    let r_near = if delta == 0.0 { f64::INFINITY } else { pair.near_overlap_radius() };
    match *heights {
        HeightModel::Exponential { rate } => {
            let c = rate * t;
            let mut d = TWO_PI * int_r2exp(c, 0.0, a);
            if r_far > a {
                d += 2.0 * l * int_rexp(c, a, r_far) - TWO_PI * int_r2exp(c, a, r_far);
            }
            if r_near > r_far {
                d += l * int_rexp(c, r_far, r_near) - delta * int_r2exp(c, r_far, r_near);
            }
            Ok(sec2 * rate * d)
        }
        HeightModel::Pareto { scale, shape } => {
            let f = |r: f64| {
                let x = r * t;
                if x < scale {
                    0.0
                } else {
                    pair.ang_intersection(r) * shape * scale.powf(shape) * x.powf(-shape - 1.0) * r * r
                }
            };
            let hi = if r_near.is_finite() {
                r_near
            } else {
                // density tail ~ r^{-kappa-1}: integrand ang*r^2*f ~ r^{-kappa} decays
                (scale / t) * 1e9
            };
            let pts = [a, r_far, scale / t];
            if hi <= 0.0 {
                return Ok(0.0);
            }
            let direct_hi = hi.min(100.0 * (a.max(scale / t)) + 1.0);
            let mut v = quad::integrate_with_breakpoints(f, 0.0, direct_hi, &pts, eps)?;
            if hi > direct_hi {
                v += quad::integrate_log(&f, direct_hi, hi, eps)?;
            }
            Ok(sec2 * v)
        }
    }
}

fn law_of(pair: &RegionPair, heights: &HeightModel) -> Result<DirectionalLaw> {
    DirectionalLaw::new(UrbanConfig::new(pair.lambda, pair.arc_len, *heights)?)
}

/// Joint CDF P[ω₁(ψ₁) ≤ φ₁, ω₁(ψ₂) ≤ φ₂]: the product of the void
/// probabilities of the intersection (at the smaller slope) and the two
/// one-sided differences. Collapses exactly to the one-direction CDF when
/// the separation vanishes.
pub fn joint_cdf(
    pair: &RegionPair,
    phi1: f64,
    phi2: f64,
    heights: &HeightModel,
    eps: f64,
) -> Result<f64> {
    for phi in [phi1, phi2] {
        if !(0.0..=PI / 2.0).contains(&phi) {
            return Err(SkylineError::InvalidParameter(format!(
                "elevation angle must lie in [0, pi/2], got {phi}"
            )));
        }
    }
    if pair.lambda == 0.0 {
        return Ok(1.0);
    }
    if phi1 == 0.0 || phi2 == 0.0 {
        return Ok(0.0);
    }
    let law = law_of(pair, heights)?;
    let t1 = phi1.tan();
    let t2 = phi2.tan();
    let tmin = t1.min(t2);
    if pair.delta == 0.0 {
        // complete overlap: same code path as the marginal so the identity
        // with the one-direction CDF is exact
        let g = law.region_exponent(tmin)?;
        return Ok((-pair.lambda * g).exp());
    }
    let g_cap_min = cap_exponent(pair, heights, tmin, eps)?;
    let gd1 = (law.region_exponent(t1)? - cap_exponent(pair, heights, t1, eps)?).max(0.0);
    let gd2 = (law.region_exponent(t2)? - cap_exponent(pair, heights, t2, eps)?).max(0.0);
    Ok((-pair.lambda * (g_cap_min + gd1 + gd2)).exp())
}

/// Probability that ω₁(ψ₁) = ω₁(ψ₂) exactly: one building in the
/// intersection dominates both one-sided regions. The inner derivative is
/// taken analytically under the integral sign.
pub fn prob_equal(pair: &RegionPair, heights: &HeightModel, eps: f64) -> Result<f64> {
    if pair.lambda <= 0.0 {
        return Err(SkylineError::InvalidParameter(
            "equality probability needs lambda > 0".into(),
        ));
    }
    let law = law_of(pair, heights)?;
    let lambda = pair.lambda;
    let integrand = |phi: f64| -> f64 {
        if phi <= 0.0 || phi >= PI / 2.0 {
            return 0.0;
        }
        let t = phi.tan();
        let g_all = match law.region_exponent(t) {
            Ok(g) => g,
            Err(_) => return f64::NAN,
        };
        // the void factor alone already kills the integrand near zero slope
        if lambda * g_all > 700.0 {
            return 0.0;
        }
        let (slope, g_cap) = match (
            cap_exponent_slope(pair, heights, phi, eps * 0.1),
            cap_exponent(pair, heights, t, eps * 0.1),
        ) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return f64::NAN,
        };
        let g_sym_diff = 2.0 * (g_all - g_cap).max(0.0);
        lambda * slope * (-lambda * (g_cap + g_sym_diff)).exp()
    };
    let v = quad::integrate(integrand, 0.0, PI / 2.0, eps)?;
    if !v.is_finite() {
        return Err(SkylineError::NonConvergence(
            "equality-probability quadrature produced a non-finite value".into(),
        ));
    }
    Ok(v.clamp(0.0, 1.0))
}

/// How an angular autocorrelation was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcfMethod {
    Analytic,
    MonteCarlo,
}

/// Autocorrelation of ω₁ on a grid of angular separations.
#[derive(Debug, Clone)]
pub struct CircularAcf {
    /// Separations δ_j, uniform, starting at 0.
    pub delta: Vec<f64>,
    /// R(δ_j) = E[ω₁(ψ)ω₁(ψ+δ_j)] (rad²).
    pub values: Vec<f64>,
    pub method: AcfMethod,
    /// Per-point standard errors (Monte Carlo only).
    pub stderr: Option<Vec<f64>>,
}

/// Analytic ACF through the joint survival integral.
///
/// For y ≥ x the joint CDF factors as F(x)·exp(−λ·Gd(tan y)), which turns
/// the double survival integral into nested one-dimensional integrals:
/// R(δ) = (π/2)² − π∫F + 2∫ F(x)·[∫_x^{π/2} v] dx with v(y) = e^{−λGd(tan y)}.
pub fn acf_analytic(config: &UrbanConfig, deltas: &[f64], eps: f64) -> Result<CircularAcf> {
    config.validate()?;
    let heights = config.heights;
    let law = DirectionalLaw::new(config.clone())?.with_tolerance(eps);
    let n_nodes = 2049usize; // uniform grid on [0, pi/2]
    let h = PI / 2.0 / (n_nodes - 1) as f64;
    let xs: Vec<f64> = (0..n_nodes).map(|i| i as f64 * h).collect();
    let lambda = config.lambda;

    // marginal CDF at the nodes (quadrature path: the exact law for any model)
    let mut f_nodes = vec![0.0; n_nodes];
    let mut g_all = vec![f64::INFINITY; n_nodes];
    for i in 1..n_nodes {
        let t = xs[i].tan();
        let g = if t > 0.0 && xs[i] < PI / 2.0 - 1e-12 {
            law.region_exponent(t)?
        } else {
            0.0
        };
        g_all[i] = g;
        f_nodes[i] = (-lambda * g).exp();
    }
    f_nodes[n_nodes - 1] = 1.0;
    let int_f = trapz(&f_nodes, h);
    let base = (PI / 2.0) * (PI / 2.0) - PI * int_f;

    let mut values = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let pair = RegionPair {
            psi1: 0.0,
            psi2: delta,
            delta: crate::geometry::circ_dist(0.0, delta),
            lambda,
            arc_len: config.arc_len,
        };
        // v(y) = exp(-lambda*(G_all - G_cap)) at each node
        let mut v = vec![0.0; n_nodes];
        if pair.delta == 0.0 {
            v.fill(1.0);
        } else {
            for i in 1..n_nodes {
                let t = xs[i].tan();
                if !(t > 0.0) || xs[i] >= PI / 2.0 - 1e-12 {
                    v[i] = 1.0;
                    continue;
                }
                let gd = (g_all[i] - cap_exponent(&pair, &heights, t, eps)?).max(0.0);
                v[i] = (-lambda * gd).exp();
            }
            v[0] = 0.0; // Gd diverges at zero slope
            v[n_nodes - 1] = 1.0;
        }
        // backward cumulative integral of v
        let mut vbar = vec![0.0; n_nodes];
        for i in (0..n_nodes - 1).rev() {
            vbar[i] = vbar[i + 1] + 0.5 * h * (v[i] + v[i + 1]);
        }
        let fw: Vec<f64> = (0..n_nodes).map(|i| f_nodes[i] * vbar[i]).collect();
        let r = base + 2.0 * trapz(&fw, h);
        values.push(r);
    }
    Ok(CircularAcf { delta: deltas.to_vec(), values, method: AcfMethod::Analytic, stderr: None })
}

fn trapz(y: &[f64], h: f64) -> f64 {
    if y.len() < 2 {
        return 0.0;
    }
    let inner: f64 = y[1..y.len() - 1].iter().sum();
    h * (0.5 * (y[0] + y[y.len() - 1]) + inner)
}

/// Fourier coefficients S_m = (1/2π)∫₀^{2π} R(δ) e^{−jmδ} dδ of a circular
/// ACF sampled uniformly on [0, π] (extended to the full circle by the
/// symmetry R(2π−δ) = R(δ)). Real and nonnegative for a valid ACF.
pub fn psd(acf: &CircularAcf, n_harmonics: usize) -> Result<Vec<f64>> {
    let n = acf.delta.len();
    if n < 3 {
        return Err(SkylineError::InvalidParameter(
            "psd needs an acf grid with at least 3 points".into(),
        ));
    }
    let step = acf.delta[1] - acf.delta[0];
    for w in acf.delta.windows(2) {
        if ((w[1] - w[0]) - step).abs() > 1e-9 {
            return Err(SkylineError::InvalidParameter(
                "psd requires a uniform separation grid".into(),
            ));
        }
    }
    if acf.delta[0].abs() > 1e-12 || (acf.delta[n - 1] - PI).abs() > 1e-9 {
        return Err(SkylineError::InvalidParameter(
            "psd requires the grid to cover [0, pi] exactly".into(),
        ));
    }
    let g = 2 * (n - 1); // full-circle sample count
    if g < 2 * n_harmonics {
        return Err(SkylineError::InvalidParameter(format!(
            "grid of {n} points supports at most {} harmonics",
            g / 2
        )));
    }
    let mut out = Vec::with_capacity(n_harmonics + 1);
    for m in 0..=n_harmonics {
        let mut s = acf.values[0] + acf.values[n - 1] * (PI * m as f64).cos();
        for (j, &v) in acf.values.iter().enumerate().take(n - 1).skip(1) {
            s += 2.0 * v * (TWO_PI * (m * j) as f64 / g as f64).cos();
        }
        out.push(s / g as f64);
    }
    Ok(out)
}
