//! Evaluating skyline processes on a realization.
//!
//! Along a direction ψ, the visible buildings V(ψ) are the distance-
//! increasing records of the blockage elevation among the buildings whose
//! arc crosses ψ: a building is visible iff its elevation strictly exceeds
//! that of every closer crossing building. ω_k(ψ) is the k-th largest
//! elevation among V(ψ), zero when there are fewer than k visible buildings.

use std::f64::consts::PI;

use crate::field::{Building, BuildingField};
use crate::geometry::circ_dist;

const TWO_PI: f64 = 2.0 * PI;

/// Uniform azimuth grid covering (−π, π]: ψ_j = −π + 2π(j+1)/G.
pub fn azimuth_grid(grid_size: usize) -> Vec<f64> {
    (0..grid_size)
        .map(|j| -PI + TWO_PI * (j + 1) as f64 / grid_size as f64)
        .collect()
}

/// The k-th skyline processes evaluated on an azimuth grid.
#[derive(Debug, Clone)]
pub struct SkylineTrace {
    /// Azimuths ψ_j covering (−π, π] uniformly.
    pub grid: Vec<f64>,
    /// omega[k][j] = ω_{k+1}(ψ_j), nonincreasing in k.
    pub omega: Vec<Vec<f64>>,
}

impl SkylineTrace {
    pub fn grid_size(&self) -> usize {
        self.grid.len()
    }

    pub fn k_max(&self) -> usize {
        self.omega.len()
    }
}

/// Evaluate ω_1..ω_k_max on a uniform azimuth grid, exactly per azimuth.
pub fn eval_skyline(field: &BuildingField, grid_size: usize, k_max: usize) -> SkylineTrace {
    assert!(grid_size >= 4, "grid_size must be at least 4");
    assert!(k_max >= 1, "k_max must be at least 1");
    let grid = azimuth_grid(grid_size);
    let l = field.config.arc_len;
    let step = TWO_PI / grid_size as f64;

    // record stack per azimuth; buildings arrive in ascending r, so a new
    // visible building always carries the largest elevation so far
    let mut records: Vec<Vec<f64>> = vec![Vec::new(); grid_size];

    for b in &field.buildings {
        let theta = b.elevation();
        let w = b.half_width(l);
        for j in covered_indices(b, w, grid_size, step) {
            debug_assert!(b.crosses(l, grid[j]));
            let rec = &mut records[j];
            if rec.last().is_none_or(|&m| theta > m) {
                rec.push(theta);
            }
        }
    }

    let mut omega = vec![vec![0.0; grid_size]; k_max];
    for (j, rec) in records.iter().enumerate() {
        for k in 0..k_max {
            if rec.len() > k {
                omega[k][j] = rec[rec.len() - 1 - k];
            }
        }
    }
    SkylineTrace { grid, omega }
}

/// Grid indices whose azimuth the building crosses.
fn covered_indices(b: &Building, w: f64, grid_size: usize, step: f64) -> Vec<usize> {
    if w >= PI {
        return (0..grid_size).collect();
    }
    // psi_j = -pi + step*(j+1); j = (psi + pi)/step - 1
    let lo = ((b.beta - w + PI) / step - 1.0).ceil() as i64 - 1;
    let hi = ((b.beta + w + PI) / step - 1.0).floor() as i64 + 1;
    let mut out = Vec::with_capacity((hi - lo + 1).max(0) as usize);
    for jj in lo..=hi {
        let j = jj.rem_euclid(grid_size as i64) as usize;
        let psi = -PI + step * (j + 1) as f64;
        if circ_dist(b.beta, psi) <= w && !out.contains(&j) {
            out.push(j);
        }
    }
    out
}

/// The exact all-azimuth supremum of ω₁ and the building attaining it.
///
/// Every building crosses its own center azimuth, so the supremum over ψ
/// equals the maximum blockage elevation over all buildings; no grid enters.
/// Returns `None` for an empty field (supremum 0, no obstacle).
pub fn global_sup(field: &BuildingField) -> Option<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    for (i, b) in field.buildings.iter().enumerate() {
        let theta = b.elevation();
        if best.is_none_or(|(m, _)| theta > m) {
            best = Some((theta, i));
        }
    }
    best
}

/// Azimuth-bucketed index answering max-elevation queries ω₁(ψ) for
/// arbitrary (non-grid) directions; used by the satellite trials.
pub struct AzimuthIndex {
    bins: Vec<Vec<(f64, f64, f64)>>, // (beta, half_width, theta)
    arc_len: f64,
}

impl AzimuthIndex {
    pub fn build(field: &BuildingField, n_bins: usize) -> Self {
        let n_bins = n_bins.max(8);
        let mut bins: Vec<Vec<(f64, f64, f64)>> = vec![Vec::new(); n_bins];
        let step = TWO_PI / n_bins as f64;
        let l = field.config.arc_len;
        for b in &field.buildings {
            let w = b.half_width(l);
            let theta = b.elevation();
            if w >= PI {
                for bin in bins.iter_mut() {
                    bin.push((b.beta, w, theta));
                }
                continue;
            }
            let lo = ((b.beta - w + PI) / step).floor() as i64;
            let hi = ((b.beta + w + PI) / step).floor() as i64;
            for jj in lo..=hi {
                let j = jj.rem_euclid(n_bins as i64) as usize;
                bins[j].push((b.beta, w, theta));
            }
        }
        Self { bins, arc_len: l }
    }

    /// ω₁(ψ): the maximum elevation among buildings crossing ψ.
    pub fn max_elevation(&self, psi: f64) -> f64 {
        let n = self.bins.len();
        let step = TWO_PI / n as f64;
        let j = (((psi + PI) / step).floor() as i64).rem_euclid(n as i64) as usize;
        let mut best = 0.0f64;
        for &(beta, w, theta) in &self.bins[j] {
            if theta > best && circ_dist(beta, psi) <= w {
                best = theta;
            }
        }
        best
    }

    #[allow(dead_code)]
    pub fn arc_len(&self) -> f64 {
        self.arc_len
    }
}
