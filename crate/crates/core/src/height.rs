//! Building-height mark distributions.

use crate::error::{Result, SkylineError};
use crate::rng::SplitMix64;

/// Height distribution of the i.i.d. marks attached to building centers.
///
/// The Pareto shape is restricted to 1 < κ < 2: the mean is then finite while
/// the second moment is not, which is the heavy-tail regime studied here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeightModel {
    /// Exponential with rate μ (mean 1/μ), μ in 1/meters.
    Exponential { rate: f64 },
    /// Pareto with shape κ and scale s (support h ≥ s), s in meters.
    Pareto { shape: f64, scale: f64 },
}

impl HeightModel {
    /// Exponential model with the given mean height in meters.
    pub fn exponential_with_mean(mean: f64) -> Result<Self> {
        if !(mean > 0.0) || !mean.is_finite() {
            return Err(SkylineError::InvalidParameter(format!(
                "exponential mean height must be positive and finite, got {mean}"
            )));
        }
        Ok(Self::Exponential { rate: 1.0 / mean })
    }

    /// Pareto model matched to a target mean: s = (κ−1)·mean/κ.
    pub fn pareto_mean_matched(shape: f64, mean: f64) -> Result<Self> {
        let m = Self::Pareto {
            shape,
            scale: (shape - 1.0) * mean / shape,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            HeightModel::Exponential { rate } => {
                if !(rate > 0.0) || !rate.is_finite() {
                    return Err(SkylineError::InvalidParameter(format!(
                        "exponential rate must be positive and finite, got {rate}"
                    )));
                }
            }
            HeightModel::Pareto { shape, scale } => {
                if !(scale > 0.0) || !scale.is_finite() {
                    return Err(SkylineError::InvalidParameter(format!(
                        "pareto scale must be positive and finite, got {scale}"
                    )));
                }
                if !(shape > 1.0 && shape < 2.0) {
                    return Err(SkylineError::InvalidParameter(format!(
                        "pareto shape must satisfy 1 < kappa < 2, got {shape}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Mean height in meters; finite for both variants.
    pub fn mean(&self) -> f64 {
        match *self {
            HeightModel::Exponential { rate } => 1.0 / rate,
            HeightModel::Pareto { shape, scale } => shape * scale / (shape - 1.0),
        }
    }

    /// CDF F_H(x).
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            HeightModel::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            HeightModel::Pareto { shape, scale } => {
                if x < scale {
                    0.0
                } else {
                    1.0 - (scale / x).powf(shape)
                }
            }
        }
    }

    /// Survival 1 − F_H(x).
    #[inline]
    pub fn survival(&self, x: f64) -> f64 {
        match *self {
            HeightModel::Exponential { rate } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-rate * x).exp()
                }
            }
            HeightModel::Pareto { shape, scale } => {
                if x < scale {
                    1.0
                } else {
                    (scale / x).powf(shape)
                }
            }
        }
    }

    /// Density f_H(x).
    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            HeightModel::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            HeightModel::Pareto { shape, scale } => {
                if x < scale {
                    0.0
                } else {
                    shape * scale.powf(shape) * x.powf(-shape - 1.0)
                }
            }
        }
    }

    /// The survival function is non-smooth at the Pareto scale.
    /// Quadratures over `survival(r·t)` must break at r = kink/t.
    pub fn kink(&self) -> Option<f64> {
        match *self {
            HeightModel::Exponential { .. } => None,
            HeightModel::Pareto { scale, .. } => Some(scale),
        }
    }

    /// Draw one height by inversion.
    #[inline]
    pub fn sample(&self, rng: &mut SplitMix64) -> f64 {
        match *self {
            HeightModel::Exponential { rate } => -rng.next_f64_open().ln() / rate,
            HeightModel::Pareto { shape, scale } => scale * rng.next_f64_open().powf(-1.0 / shape),
        }
    }

    /// Draw one height conditioned on exceeding `floor`.
    ///
    /// Exponential is memoryless; the Pareto conditional above any threshold
    /// x ≥ s is Pareto with scale x. Used by the far-tail thinned samplers.
    #[inline]
    pub fn sample_above(&self, floor: f64, rng: &mut SplitMix64) -> f64 {
        match *self {
            HeightModel::Exponential { rate } => {
                floor.max(0.0) - rng.next_f64_open().ln() / rate
            }
            HeightModel::Pareto { shape, scale } => {
                let base = floor.max(scale);
                base * rng.next_f64_open().powf(-1.0 / shape)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn means() {
        let e = HeightModel::Exponential { rate: 2.0 };
        assert!((e.mean() - 0.5).abs() < 1e-15);
        let p = HeightModel::Pareto { shape: 1.5, scale: 1.0 / 3.0 };
        assert!((p.mean() - 1.0).abs() < 1e-15, "mean-matched pareto");
    }

    #[test]
    fn mean_matched_constructor() {
        let p = HeightModel::pareto_mean_matched(1.5, 1.0).unwrap();
        assert!((p.mean() - 1.0).abs() < 1e-12);
        if let HeightModel::Pareto { scale, .. } = p {
            assert!((scale - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(HeightModel::Exponential { rate: 0.0 }.validate().is_err());
        assert!(HeightModel::Pareto { shape: 2.5, scale: 1.0 }.validate().is_err());
        assert!(HeightModel::Pareto { shape: 1.0, scale: 1.0 }.validate().is_err());
        assert!(HeightModel::Pareto { shape: 1.5, scale: -1.0 }.validate().is_err());
    }

    #[test]
    fn survival_is_one_below_pareto_scale() {
        let p = HeightModel::Pareto { shape: 1.5, scale: 2.0 };
        assert_eq!(p.survival(1.0), 1.0);
        assert_eq!(p.cdf(1.0), 0.0);
        assert!((p.survival(4.0) - (0.5f64).powf(1.5)).abs() < 1e-15);
    }

    #[test]
    fn sample_mean_agrees() {
        for model in [
            HeightModel::Exponential { rate: 1.0 },
            HeightModel::Pareto { shape: 1.5, scale: 1.0 / 3.0 },
        ] {
            let mut rng = SplitMix64::new(99);
            let n = 200_000;
            let mean: f64 = (0..n).map(|_| model.sample(&mut rng)).sum::<f64>() / n as f64;
            // Pareto with kappa=1.5 has infinite variance; keep the band loose.
            assert!(
                (mean - model.mean()).abs() < 0.1,
                "{model:?}: sample mean {mean} vs {}",
                model.mean()
            );
        }
    }

    #[test]
    fn conditional_sampling_respects_floor() {
        for model in [
            HeightModel::Exponential { rate: 1.0 },
            HeightModel::Pareto { shape: 1.5, scale: 1.0 / 3.0 },
        ] {
            let mut rng = SplitMix64::new(3);
            for _ in 0..10_000 {
                assert!(model.sample_above(5.0, &mut rng) >= 5.0);
            }
        }
    }
}
