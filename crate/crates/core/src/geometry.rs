//! Circular-arc geometry of the blockage region A(ψ).
//!
//! A building at radius r covers an azimuth arc of half-width
//! min(l/(2r), π) around its center; the region A(ψ) collects all center
//! positions whose arc contains the viewing direction ψ. Everything here is
//! exact interval arithmetic on the circle, including wraparound overlaps of
//! two nearly full-circle arcs.

use std::f64::consts::PI;

use crate::config::UrbanConfig;

const TWO_PI: f64 = 2.0 * PI;

/// Wrap an angle into (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(TWO_PI);
    if y > PI {
        y -= TWO_PI;
    }
    y
}

/// Circular distance between two angles, in [0, π].
#[inline]
pub fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TWO_PI);
    d.min(TWO_PI - d)
}

/// Arc half-width of a building at radius r: min(l/(2r), π).
#[inline]
pub fn half_width(r: f64, arc_len: f64) -> f64 {
    (arc_len / (2.0 * r)).min(PI)
}

/// Intersection length of two circular arcs of equal length `len`, centers
/// separated by `d` (0 ≤ d ≤ π). Counts both the near-side and the far-side
/// overlap, which coexist when the arcs nearly wrap the circle.
#[inline]
pub fn arc_intersection_len(len: f64, d: f64) -> f64 {
    debug_assert!((0.0..=TWO_PI + 1e-12).contains(&len));
    (len - d).max(0.0) + (len + d - TWO_PI).max(0.0)
}

/// Two viewing directions and the region algebra of A(ψ₁), A(ψ₂).
#[derive(Debug, Clone)]
pub struct RegionPair {
    pub psi1: f64,
    pub psi2: f64,
    /// Circular separation Δψ = min(|ψ₁−ψ₂|, 2π−|ψ₁−ψ₂|).
    pub delta: f64,
    pub lambda: f64,
    pub arc_len: f64,
}

impl RegionPair {
    pub fn new(psi1: f64, psi2: f64, config: &UrbanConfig) -> Self {
        Self {
            psi1,
            psi2,
            delta: circ_dist(psi1, psi2),
            lambda: config.lambda,
            arc_len: config.arc_len,
        }
    }

    /// Radius below which every building is a full circle.
    #[inline]
    pub fn full_circle_radius(&self) -> f64 {
        self.arc_len / TWO_PI
    }

    /// Largest radius at which the far-side (wraparound) overlap exists.
    #[inline]
    pub fn far_overlap_radius(&self) -> f64 {
        if self.delta >= TWO_PI {
            return self.full_circle_radius();
        }
        self.arc_len / (TWO_PI - self.delta)
    }

    /// Largest radius at which the near-side overlap exists: l/Δψ.
    #[inline]
    pub fn near_overlap_radius(&self) -> f64 {
        if self.delta <= 0.0 {
            f64::INFINITY
        } else {
            self.arc_len / self.delta
        }
    }

    /// Angular measure of A(ψ) at radius r (either direction).
    #[inline]
    pub fn ang_single(&self, r: f64) -> f64 {
        if r < self.full_circle_radius() {
            TWO_PI
        } else {
            self.arc_len / r
        }
    }

    /// Angular measure of A(ψ₁) ∩ A(ψ₂) at radius r.
    #[inline]
    pub fn ang_intersection(&self, r: f64) -> f64 {
        if r < self.full_circle_radius() {
            TWO_PI
        } else {
            arc_intersection_len(self.arc_len / r, self.delta)
        }
    }

    /// Angular measure of A(ψ₁) \ A(ψ₂) at radius r (one side).
    #[inline]
    pub fn ang_difference(&self, r: f64) -> f64 {
        (self.ang_single(r) - self.ang_intersection(r)).max(0.0)
    }

    /// Angular measure of A(ψ₁) ∪ A(ψ₂) at radius r.
    #[inline]
    pub fn ang_union(&self, r: f64) -> f64 {
        (2.0 * self.ang_single(r) - self.ang_intersection(r)).min(TWO_PI)
    }

    /// Radii at which the piecewise definition of the intersection changes.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![self.full_circle_radius()];
        if self.delta > 0.0 {
            pts.push(self.far_overlap_radius());
            pts.push(self.near_overlap_radius());
        }
        pts.retain(|x| x.is_finite());
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::height::HeightModel;

    fn cfg(lambda: f64, l: f64) -> UrbanConfig {
        UrbanConfig::new(lambda, l, HeightModel::Exponential { rate: 1.0 }).unwrap()
    }

    #[test]
    fn wrap_and_distance() {
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((circ_dist(-PI + 0.1, PI - 0.1) - 0.2).abs() < 1e-12);
        assert!(circ_dist(0.3, 0.3) == 0.0);
    }

    #[test]
    fn zero_separation_collapses_to_single_region() {
        let pair = RegionPair::new(0.7, 0.7, &cfg(0.1, 1.0));
        for r in [0.01, 0.2, 1.0, 10.0] {
            assert!((pair.ang_intersection(r) - pair.ang_single(r)).abs() < 1e-14);
            assert!(pair.ang_difference(r) == 0.0);
        }
    }

    #[test]
    fn wraparound_overlap_counted() {
        // very wide arcs: r barely above l/2pi, separation 40 degrees
        let pair = RegionPair::new(0.0, 40.0_f64.to_radians(), &cfg(1.0, 25.0));
        let r = 4.2; // arc length l/r = 5.95 rad = 341 deg
        let len = 25.0 / r;
        let expect = 2.0 * len - TWO_PI; // near + far side overlaps
        assert!((pair.ang_intersection(r) - expect).abs() < 1e-12);
        // union covers the whole circle here
        assert!((pair.ang_union(r) - TWO_PI).abs() < 1e-12);
    }

    #[test]
    fn disjoint_beyond_near_radius() {
        let pair = RegionPair::new(0.0, 1.0, &cfg(1.0, 1.0));
        let r = pair.near_overlap_radius() * 1.01;
        assert_eq!(pair.ang_intersection(r), 0.0);
        assert!((pair.ang_union(r) - 2.0 * pair.ang_single(r)).abs() < 1e-14);
    }

    #[test]
    fn measures_are_consistent() {
        let pair = RegionPair::new(-1.0, 2.0, &cfg(0.5, 3.0));
        for r in [0.05, 0.4, 0.6, 1.0, 2.0, 5.0, 50.0] {
            let a = pair.ang_single(r);
            let i = pair.ang_intersection(r);
            let d = pair.ang_difference(r);
            let u = pair.ang_union(r);
            assert!(i >= 0.0 && i <= a + 1e-14);
            assert!((d - (a - i)).abs() < 1e-12);
            assert!((u - (2.0 * a - i)).abs() < 1e-12 || (u - TWO_PI).abs() < 1e-12);
        }
    }
}
