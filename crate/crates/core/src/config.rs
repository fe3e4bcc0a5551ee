//! Urban model configuration.

use crate::error::{Result, SkylineError};
use crate::height::HeightModel;

/// Parameters of the marked Poisson building process.
///
/// All lengths are meters, densities are per m², angles are radians.
#[derive(Debug, Clone, PartialEq)]
pub struct UrbanConfig {
    /// Building density λ (centers per m²).
    pub lambda: f64,
    /// Arc length l of every building (m).
    pub arc_len: f64,
    /// Height mark distribution.
    pub heights: HeightModel,
    /// Probability bound used when truncating spatial tails in simulation.
    pub tail_epsilon: f64,
}

impl UrbanConfig {
    pub fn new(lambda: f64, arc_len: f64, heights: HeightModel) -> Result<Self> {
        let cfg = Self { lambda, arc_len, heights, tail_epsilon: 1e-6 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_tail_epsilon(mut self, eps: f64) -> Result<Self> {
        self.tail_epsilon = eps;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(SkylineError::InvalidParameter(format!(
                "lambda must be nonnegative and finite, got {}",
                self.lambda
            )));
        }
        if !(self.arc_len > 0.0) || !self.arc_len.is_finite() {
            return Err(SkylineError::InvalidParameter(format!(
                "arc length must be positive and finite, got {}",
                self.arc_len
            )));
        }
        if !(self.tail_epsilon > 0.0 && self.tail_epsilon < 1.0) {
            return Err(SkylineError::InvalidParameter(format!(
                "tail epsilon must lie in (0,1), got {}",
                self.tail_epsilon
            )));
        }
        self.heights.validate()?;
        let rho = self.density_height_product();
        if !rho.is_finite() {
            return Err(SkylineError::InvalidParameter(format!(
                "density-height product is not finite: {rho}"
            )));
        }
        Ok(())
    }

    /// ρ = λ·E[h]: density times mean height, the urban denseness measure.
    pub fn density_height_product(&self) -> f64 {
        self.lambda * self.heights.mean()
    }

    /// Radius below which a building wraps the full circle: l/(2π).
    pub fn full_circle_radius(&self) -> f64 {
        self.arc_len / (2.0 * std::f64::consts::PI)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_is_lambda_times_mean() {
        let cfg = UrbanConfig::new(0.5, 1.0, HeightModel::Exponential { rate: 0.25 }).unwrap();
        assert!((cfg.density_height_product() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid() {
        assert!(UrbanConfig::new(-1.0, 1.0, HeightModel::Exponential { rate: 1.0 }).is_err());
        assert!(UrbanConfig::new(1.0, 0.0, HeightModel::Exponential { rate: 1.0 }).is_err());
        let cfg = UrbanConfig::new(1.0, 1.0, HeightModel::Exponential { rate: 1.0 }).unwrap();
        assert!(cfg.with_tail_epsilon(0.0).is_err());
    }
}
