//! All-azimuth supremum of the skyline and its dominant building.
//!
//! The supremum over every direction sees the whole plane, so its law only
//! involves the isotropic integral 2πλ∫(1−F_H(r·tanφ))r dr. For exponential
//! heights this is 2πλ/(μ²tan²φ); for Pareto heights with 1 < κ < 2 the
//! integral diverges for every φ — arbitrarily steep buildings exist
//! somewhere almost surely — so the supremum is π/2 a.s. and its CDF
//! vanishes below π/2.

use std::f64::consts::PI;

use crate::config::UrbanConfig;
use crate::error::{Result, SkylineError};
use crate::height::HeightModel;

use crate::special::erfcx;

const TWO_PI: f64 = 2.0 * PI;

/// Law of sup_ψ ω₁(ψ) and of the building attaining it.
#[derive(Debug, Clone)]
pub struct GlobalLaw {
    pub config: UrbanConfig,
    pub eps_quad: f64,
}

impl GlobalLaw {
    pub fn new(config: UrbanConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { config, eps_quad: 1e-9 })
    }

    /// CDF of the supremum at elevation φ.
    pub fn cdf_sup(&self, phi: f64) -> Result<f64> {
        if !(0.0..=PI / 2.0).contains(&phi) {
            return Err(SkylineError::InvalidParameter(format!(
                "elevation angle must lie in [0, pi/2], got {phi}"
            )));
        }
        if self.config.lambda == 0.0 {
            return Ok(1.0);
        }
        if phi == 0.0 {
            return Ok(0.0);
        }
        match self.config.heights {
            HeightModel::Exponential { rate } => {
                let t = phi.tan();
                Ok((-TWO_PI * self.config.lambda / (rate * t).powi(2)).exp())
            }
            // divergent isotropic tail: the supremum is pi/2 almost surely
            HeightModel::Pareto { .. } => Ok(if phi < PI / 2.0 { 0.0 } else { 1.0 }),
        }
    }

    /// PDF of the supremum, exponential heights only.
    pub fn pdf_sup_exponential(&self, phi: f64) -> Result<f64> {
        let HeightModel::Exponential { rate } = self.config.heights else {
            return Err(SkylineError::UnsupportedModel(
                "closed-form supremum density requires exponential heights; \
                 differentiate cdf_sup numerically otherwise"
                    .into(),
            ));
        };
        if !(phi > 0.0 && phi < PI / 2.0) {
            return Ok(0.0);
        }
        let lam = self.config.lambda;
        let t = phi.tan();
        let s = phi.sin();
        let c = TWO_PI * lam / (rate * rate);
        Ok((-c / (t * t)).exp() * 2.0 * c / (t * s * s))
    }

    /// Joint density of the distance and height of the globally dominant
    /// building: 2πλ·r·f_H(h)·exp(−2πλ∫(1−F_H(hy/r))y dy).
    pub fn joint_pdf_dominant(&self, r: f64, h: f64) -> Result<f64> {
        if !(r > 0.0 && h > 0.0) {
            return Err(SkylineError::InvalidParameter(format!(
                "dominant-building density needs r > 0, h > 0, got ({r}, {h})"
            )));
        }
        let lam = self.config.lambda;
        match self.config.heights {
            HeightModel::Exponential { rate } => {
                let mu = rate;
                Ok(TWO_PI * lam * mu * r
                    * (-2.0 * lam * PI * r * r / (h * h * mu * mu) - mu * h).exp())
            }
            // the void exponent diverges: no almost-surely dominant building
            HeightModel::Pareto { .. } => Ok(0.0),
        }
    }

    /// Height marginal of the dominant building for exponential heights:
    /// Gamma(3, μ), density (μ³/2)h²e^{−μh}.
    pub fn dominant_height_marginal(&self, h: f64) -> Result<f64> {
        let HeightModel::Exponential { rate } = self.config.heights else {
            return Err(SkylineError::UnsupportedModel(
                "gamma marginal requires exponential heights".into(),
            ));
        };
        if h < 0.0 {
            return Ok(0.0);
        }
        Ok(0.5 * rate.powi(3) * h * h * (-rate * h).exp())
    }

    /// Expected height of the dominant building, 3/μ.
    pub fn mean_dominant_height(&self) -> Result<f64> {
        let HeightModel::Exponential { rate } = self.config.heights else {
            return Err(SkylineError::UnsupportedModel(
                "dominant-height mean requires exponential heights".into(),
            ));
        };
        Ok(3.0 / rate)
    }

    /// Expected distance of the dominant building, 3/(2√(2λ)).
    pub fn mean_dominant_distance(&self) -> Result<f64> {
        if self.config.lambda <= 0.0 {
            return Err(SkylineError::InvalidParameter(
                "dominant-distance mean needs lambda > 0".into(),
            ));
        }
        match self.config.heights {
            HeightModel::Exponential { .. } => {
                Ok(3.0 / (2.0 * (2.0 * self.config.lambda).sqrt()))
            }
            HeightModel::Pareto { .. } => Err(SkylineError::UnsupportedModel(
                "dominant-distance mean requires exponential heights".into(),
            )),
        }
    }
}

/// Mean of the all-azimuth supremum for exponential heights:
/// π/2 − (π/2)·e^{2πλ/μ²}·Erfc(√(2πλ)/μ), evaluated through the scaled
/// complementary error function so city-scale λ/μ² cannot overflow.
pub fn mean_sup_exponential(lambda: f64, mu: f64) -> Result<f64> {
    if !(lambda >= 0.0) || !(mu > 0.0) {
        return Err(SkylineError::InvalidParameter(format!(
            "mean supremum needs lambda >= 0 and mu > 0, got ({lambda}, {mu})"
        )));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let x = (TWO_PI * lambda).sqrt() / mu;
    Ok(PI / 2.0 * (1.0 - erfcx(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direction::DirectionalLaw;
    use crate::quad::{self, simpson_fixed};

    fn exp_law(lambda: f64, mu: f64) -> GlobalLaw {
        GlobalLaw::new(
            UrbanConfig::new(lambda, 1.0, HeightModel::Exponential { rate: mu }).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn cdf_sup_frozen_value() {
        // exp(-2pi/3) at phi = pi/3, lambda = mu = 1
        let v = exp_law(1.0, 1.0).cdf_sup(PI / 3.0).unwrap();
        assert!((v - 0.123144711070133).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn cdf_sup_edge_cases() {
        let law = exp_law(1.0, 1.0);
        assert_eq!(law.cdf_sup(0.0).unwrap(), 0.0);
        assert!(law.cdf_sup(-0.2).is_err());
        assert_eq!(exp_law(0.0, 1.0).cdf_sup(0.5).unwrap(), 1.0);
    }

    #[test]
    fn pareto_supremum_is_degenerate_at_zenith() {
        let law = GlobalLaw::new(
            UrbanConfig::new(0.1, 1.0, HeightModel::Pareto { shape: 1.5, scale: 0.5 }).unwrap(),
        )
        .unwrap();
        assert_eq!(law.cdf_sup(1.0).unwrap(), 0.0);
        assert_eq!(law.cdf_sup(PI / 2.0).unwrap(), 1.0);
        assert!(law.pdf_sup_exponential(1.0).is_err());
        assert_eq!(law.joint_pdf_dominant(1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn sup_cdf_never_exceeds_directional_cdf() {
        let cfg = UrbanConfig::new(0.4, 2.0, HeightModel::Exponential { rate: 0.8 }).unwrap();
        let sup = GlobalLaw::new(cfg.clone()).unwrap();
        let dir = DirectionalLaw::new(cfg).unwrap();
        for i in 1..40 {
            let phi = PI / 2.0 * i as f64 / 40.0;
            let s = sup.cdf_sup(phi).unwrap();
            let d = dir.cdf_omega1(phi).unwrap();
            assert!(s <= d + 1e-12, "phi={phi}: sup {s} > dir {d}");
        }
    }

    #[test]
    fn pdf_sup_normalizes_and_matches_cdf_derivative() {
        let law = exp_law(1.0, 1.0);
        let total = quad::integrate(|x| law.pdf_sup_exponential(x).unwrap(), 0.0, PI / 2.0, 1e-11)
            .unwrap();
        assert!((total - 1.0).abs() < 1e-8, "normalization {total}");
        for i in 1..=50 {
            let phi = 0.3 + (PI / 2.0 - 0.45) * i as f64 / 50.0;
            let h = 1e-6;
            let num =
                (law.cdf_sup(phi + h).unwrap() - law.cdf_sup(phi - h).unwrap()) / (2.0 * h);
            let ana = law.pdf_sup_exponential(phi).unwrap();
            assert!((num - ana).abs() < 1e-6, "phi={phi}: {num} vs {ana}");
        }
    }

    #[test]
    fn pdf_sup_mode_moves_up_with_density() {
        let mode = |lambda: f64| {
            let law = exp_law(lambda, 1.0);
            let mut best = (0.0, 0.0);
            for i in 1..2000 {
                let phi = PI / 2.0 * i as f64 / 2000.0;
                let v = law.pdf_sup_exponential(phi).unwrap();
                if v > best.1 {
                    best = (phi, v);
                }
            }
            best.0
        };
        let m1 = mode(0.01);
        let m2 = mode(0.1);
        let m3 = mode(1.0);
        assert!(m1 < m2 && m2 < m3, "modes {m1} {m2} {m3}");
    }

    #[test]
    fn mean_sup_frozen_value_and_quadrature_identity() {
        let m = mean_sup_exponential(1.0, 1.0).unwrap();
        assert!((m - 1.24043482710789).abs() < 1e-12, "got {m}");
        let law = exp_law(1.0, 1.0);
        let by_quad =
            quad::integrate(|x| x * law.pdf_sup_exponential(x).unwrap(), 0.0, PI / 2.0, 1e-11)
                .unwrap();
        assert!((m - by_quad).abs() < 1e-8, "{m} vs {by_quad}");
    }

    #[test]
    fn mean_sup_vanishes_with_density_and_survives_overflow_regime() {
        assert_eq!(mean_sup_exponential(0.0, 1.0).unwrap(), 0.0);
        assert!(mean_sup_exponential(1e-9, 1.0).unwrap() < 1e-3);
        // 2*pi*lambda/mu^2 = 2e6: the unscaled product would overflow
        let m = mean_sup_exponential(1.0, 1e-3).unwrap();
        assert!(m > 1.56 && m < PI / 2.0, "got {m}");
    }

    #[test]
    fn dominant_gamma_marginal_matches_radial_integral() {
        // integrating the joint density over r reproduces (mu^3/2) h^2 e^{-mu h}
        let law = exp_law(1.0, 1.0);
        for h in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let num = quad::integrate(
                |r| law.joint_pdf_dominant(r, h).unwrap(),
                1e-12,
                12.0 * h,
                1e-12,
            )
            .unwrap();
            let ana = law.dominant_height_marginal(h).unwrap();
            assert!((num - ana).abs() < 1e-8, "h={h}: {num} vs {ana}");
        }
    }

    #[test]
    fn dominant_joint_normalizes_and_reproduces_means() {
        let law = exp_law(1.0, 1.0);
        let law_ref = &law;
        let inner = move |h: f64, weight: fn(f64, f64) -> f64| {
            move |r: f64| weight(r, h) * law_ref.joint_pdf_dominant(r, h).unwrap()
        };
        let total = quad::integrate(
            |h| quad::integrate(inner(h, |_, _| 1.0), 1e-12, 12.0 * h + 1.0, 1e-10).unwrap(),
            1e-9,
            45.0,
            1e-8,
        )
        .unwrap();
        assert!((total - 1.0).abs() < 1e-6, "normalization {total}");
        let eh = quad::integrate(
            |h| quad::integrate(inner(h, |_, hh| hh), 1e-12, 12.0 * h + 1.0, 1e-10).unwrap(),
            1e-9,
            60.0,
            1e-8,
        )
        .unwrap();
        assert!((eh - 3.0).abs() < 1e-6, "E[H*] {eh}");
        let er = quad::integrate(
            |h| quad::integrate(inner(h, |r, _| r), 1e-12, 12.0 * h + 1.0, 1e-10).unwrap(),
            1e-9,
            60.0,
            1e-8,
        )
        .unwrap();
        let want = 3.0 / (2.0 * 2.0f64.sqrt());
        assert!((er - want).abs() < 1e-6, "E[R*] {er} vs {want}");
        assert!((law.mean_dominant_height().unwrap() - 3.0).abs() < 1e-15);
        assert!((law.mean_dominant_distance().unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn sup_quadrature_route_agrees_with_closed_form() {
        // independent route: exp(-2*pi*lambda*int S(rt) r dr) by fixed Simpson
        let lambda = 0.7;
        let mu = 1.3;
        let law = exp_law(lambda, mu);
        for phi in [0.6, 0.9, 1.2] {
            let t = (phi as f64).tan();
            let integral = simpson_fixed(|r| (-mu * r * t).exp() * r, 0.0, 60.0 / (mu * t), 400_000);
            let via_quad = (-TWO_PI * lambda * integral).exp();
            let closed = law.cdf_sup(phi).unwrap();
            assert!((via_quad - closed).abs() < 1e-9, "{via_quad} vs {closed}");
        }
    }
}
