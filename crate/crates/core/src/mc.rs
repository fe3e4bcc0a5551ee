//! Monte Carlo estimation layer.
//!
//! Trials are independent work units drawing from counter-derived seed
//! streams, so estimates are bit-identical for a fixed plan regardless of
//! how many worker threads execute them. Aggregation uses pairwise
//! summation over the index-ordered per-trial values.
//!
//! Each statistic samples the smallest exact restriction of the building
//! process that determines it: the crossing set of one direction, the union
//! set of a direction pair or an azimuth grid, or the full disk for
//! all-azimuth statistics. Far tails are elevation-thinned exactly; the
//! elevation floor is chosen so the neglected event {ω₁ ≤ floor} has
//! probability below the plan's truncation epsilon.

use rayon::prelude::*;

use crate::config::UrbanConfig;
use crate::direction::DirectionalLaw;
use crate::error::{Result, SkylineError};
use crate::field::{
    sample_crossing_field, sample_crossing_field_plain, sample_field, sample_pair_field,
    sample_union_grid_field, truncation_radius, BuildingField,
};
use crate::height::HeightModel;
use crate::joint::{acf_analytic, AcfMethod, CircularAcf};
use crate::leo::ConstellationConfig;
use crate::rng::pairwise_sum;
use crate::skyline::{azimuth_grid, global_sup};

use std::f64::consts::PI;

/// Trial plan: everything a reproducible estimate depends on.
#[derive(Debug, Clone)]
pub struct McPlan {
    pub trials: u64,
    pub master_seed: u64,
    /// Azimuth grid size for trace statistics.
    pub azimuth_grid: usize,
    /// Elevation grid size used by CDF sweeps.
    pub phi_grid: usize,
    /// Probability budget for spatial truncation bias.
    pub tail_epsilon: f64,
}

impl Default for McPlan {
    fn default() -> Self {
        Self {
            trials: 10_000,
            master_seed: 0x536b_796c_696e_65,
            azimuth_grid: 64,
            phi_grid: 64,
            tail_epsilon: 1e-6,
        }
    }
}

impl McPlan {
    pub fn new(trials: u64, master_seed: u64) -> Self {
        Self { trials, master_seed, ..Self::default() }
    }

    fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(SkylineError::InvalidParameter("trials must be >= 1".into()));
        }
        if !(self.tail_epsilon > 0.0 && self.tail_epsilon < 1.0) {
            return Err(SkylineError::InvalidParameter(
                "tail epsilon must lie in (0,1)".into(),
            ));
        }
        Ok(())
    }
}

/// Which scalar statistic to estimate.
///
/// The direction argument of per-direction statistics is fixed to ψ = 0 by
/// rotational invariance. Joint pair samples and ACF grids have dedicated
/// entry points (`estimate_pair`, `estimate_acf`) since they are not scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StatisticId {
    /// ω₁(0): largest blockage elevation in one direction.
    Omega1AtPsi,
    /// Indicator of {ω₂(0) = 0}: one visible building hides all others.
    Omega2ZeroFreq,
    /// sup_ψ ω₁(ψ) over all directions.
    SupOmega1,
    /// Height of the building attaining the supremum.
    DominantHeight,
    /// Distance of the building attaining the supremum.
    DominantDistance,
    /// Number of visible satellites (needs a constellation).
    VisibleCount,
    /// Indicator of the outage event (needs a constellation).
    OutageEvent,
    /// Indicator that the same building attains ω₁ in both directions of a
    /// pair separated by this angle.
    EqualEvent { delta_psi: f64 },
}

/// Sorted samples with their first two moments.
#[derive(Debug, Clone)]
pub struct EmpiricalLaw {
    samples: Vec<f64>,
    mean: f64,
    variance: f64,
    stderr: f64,
}

impl EmpiricalLaw {
    pub fn from_samples(mut samples: Vec<f64>) -> Self {
        assert!(!samples.is_empty(), "empirical law needs at least one sample");
        let n = samples.len() as f64;
        let mean = pairwise_sum(&samples) / n;
        let centered: Vec<f64> = samples.iter().map(|&x| (x - mean) * (x - mean)).collect();
        let variance = if samples.len() > 1 {
            pairwise_sum(&centered) / (n - 1.0)
        } else {
            0.0
        };
        samples.sort_by(f64::total_cmp);
        Self { samples, mean, variance, stderr: (variance / n).sqrt() }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn stderr(&self) -> f64 {
        self.stderr
    }

    /// Right-continuous empirical CDF.
    pub fn ecdf(&self, x: f64) -> f64 {
        let idx = self.samples.partition_point(|&s| s <= x);
        idx as f64 / self.samples.len() as f64
    }
}

/// Kolmogorov–Smirnov distance between an empirical law and an analytic CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(emp: &EmpiricalLaw, cdf: F) -> f64 {
    let n = emp.samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in emp.samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max((f - (i + 1) as f64 / n).abs());
    }
    d
}

/// Elevation below which {ω₁ ≤ floor} has probability at most `eps`,
/// under the exact (quadrature-path) law.
fn elevation_floor(config: &UrbanConfig, eps: f64) -> Result<f64> {
    if config.lambda == 0.0 {
        return Ok(1e-3);
    }
    let law = DirectionalLaw::new(config.clone())?;
    let cdf = |phi: f64| -> Result<f64> {
        match config.heights {
            HeightModel::Exponential { .. } => law.cdf_omega1(phi),
            HeightModel::Pareto { .. } => law.cdf_omega1_quadrature(phi),
        }
    };
    let mut lo = 1e-7;
    let mut hi = PI / 2.0 - 1e-6;
    if cdf(lo)? > eps {
        return Ok(lo);
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid)? <= eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// ω₁ at ψ = 0 for a crossing-restricted field: the running elevation max.
fn omega1_of_crossing(field: &BuildingField) -> f64 {
    field.buildings.iter().map(|b| b.elevation()).fold(0.0, f64::max)
}

/// Radius beyond which a new visibility record appears with probability
/// below eps: 2·sqrt(λ·l·r) ≥ 1.2·ln(1/eps), the exponent of the running
/// maximum's survival against the far crossing intensity.
fn record_radius(config: &UrbanConfig, eps: f64) -> f64 {
    let lam_l = config.lambda * config.arc_len;
    if lam_l <= 0.0 {
        return 0.0;
    }
    let target = 1.2 * (1.0 / eps).ln();
    (target * target / (4.0 * lam_l)).max(4.0 * config.full_circle_radius())
}

/// Number of record (visible) buildings along ψ = 0 in a crossing field.
fn record_count(field: &BuildingField) -> usize {
    let mut count = 0;
    let mut max = f64::NEG_INFINITY;
    for b in &field.buildings {
        let th = b.elevation();
        if th > max {
            count += 1;
            max = th;
        }
    }
    count
}

/// Run trials of one scalar statistic under the plan.
pub fn estimate(
    id: StatisticId,
    config: &UrbanConfig,
    constellation: Option<&ConstellationConfig>,
    plan: &McPlan,
) -> Result<EmpiricalLaw> {
    plan.check()?;
    config.validate()?;
    let samples: Vec<f64> = match id {
        StatisticId::Omega1AtPsi => {
            let floor = elevation_floor(config, plan.tail_epsilon)?;
            let near = config.full_circle_radius();
            run_trials(plan, |seed| {
                let f = sample_crossing_field(config, 0.0, near, floor, seed)?;
                Ok(omega1_of_crossing(&f))
            })?
        }
        StatisticId::Omega2ZeroFreq => {
            // records can hide at any elevation, so no far thinning: sample
            // out to where a new record beyond r_max has probability below
            // epsilon (~ exp(-2*sqrt(lambda*l*r)) for the running maximum)
            let r_max = record_radius(config, plan.tail_epsilon);
            run_trials(plan, |seed| {
                let f = sample_crossing_field_plain(config, 0.0, r_max, seed)?;
                Ok((record_count(&f) <= 1) as u64 as f64)
            })?
        }
        StatisticId::SupOmega1 | StatisticId::DominantHeight | StatisticId::DominantDistance => {
            if matches!(config.heights, HeightModel::Pareto { .. }) {
                return Err(SkylineError::UnsupportedModel(
                    "the all-azimuth supremum is pi/2 almost surely under Pareto heights"
                        .into(),
                ));
            }
            let r_max = sup_disk_radius(config, plan.tail_epsilon)?;
            run_trials(plan, |seed| {
                let f = sample_field(config, r_max, seed)?;
                Ok(match global_sup(&f) {
                    None => 0.0,
                    Some((sup, idx)) => match id {
                        StatisticId::SupOmega1 => sup,
                        StatisticId::DominantHeight => f.buildings[idx].h,
                        StatisticId::DominantDistance => f.buildings[idx].r,
                        _ => unreachable!(),
                    },
                })
            })?
        }
        StatisticId::VisibleCount | StatisticId::OutageEvent => {
            let cons = constellation.ok_or_else(|| {
                SkylineError::InvalidParameter(
                    "satellite statistics need a constellation configuration".into(),
                )
            })?;
            let (outages, counts) = crate::leo::satellite_trials(
                cons,
                config,
                plan.trials,
                plan.master_seed,
                matches!(id, StatisticId::OutageEvent),
            )?;
            if matches!(id, StatisticId::OutageEvent) {
                outages
            } else {
                counts
            }
        }
        StatisticId::EqualEvent { delta_psi } => {
            let floor = elevation_floor(config, plan.tail_epsilon)?;
            let near = config.full_circle_radius();
            run_trials(plan, |seed| {
                let f = sample_pair_field(config, 0.0, delta_psi, near, floor, seed)?;
                Ok(same_dominant(&f, 0.0, delta_psi) as u64 as f64)
            })?
        }
    };
    Ok(EmpiricalLaw::from_samples(samples))
}

/// Whether the same building attains ω₁ in both directions.
fn same_dominant(field: &BuildingField, psi1: f64, psi2: f64) -> bool {
    let l = field.config.arc_len;
    let mut best1: Option<(f64, usize)> = None;
    let mut best2: Option<(f64, usize)> = None;
    for (i, b) in field.buildings.iter().enumerate() {
        let th = b.elevation();
        if b.crosses(l, psi1) && best1.is_none_or(|(m, _)| th > m) {
            best1 = Some((th, i));
        }
        if b.crosses(l, psi2) && best2.is_none_or(|(m, _)| th > m) {
            best2 = Some((th, i));
        }
    }
    match (best1, best2) {
        (Some((_, i)), Some((_, j))) => i == j,
        (None, None) => true, // both zero
        _ => false,
    }
}

/// Disk radius for supremum statistics: buildings beyond it steeper than
/// the supremum's lower quantile have expected count below epsilon.
fn sup_disk_radius(config: &UrbanConfig, eps: f64) -> Result<f64> {
    let HeightModel::Exponential { rate } = config.heights else {
        return Err(SkylineError::UnsupportedModel("exponential heights required".into()));
    };
    if config.lambda == 0.0 {
        return Ok(0.0);
    }
    // floor: F_sup(floor) = eps, i.e. tan(floor) = sqrt(-2*pi*lambda/(mu^2 ln eps))
    let t_floor = (2.0 * PI * config.lambda / (rate * rate * (-eps.ln()))).sqrt();
    let floor = t_floor.atan().min(PI / 2.0 - 1e-6).max(1e-7);
    truncation_radius(config, floor)
}

fn run_trials<F>(plan: &McPlan, trial: F) -> Result<Vec<f64>>
where
    F: Fn(u64) -> Result<f64> + Sync,
{
    let results: Vec<Result<f64>> = (0..plan.trials)
        .into_par_iter()
        .map(|i| trial(crate::rng::derive_seed(plan.master_seed, i)))
        .collect();
    results.into_iter().collect()
}

/// Joint samples (ω₁(0), ω₁(Δψ)) over independent trials.
pub fn estimate_pair(
    config: &UrbanConfig,
    delta_psi: f64,
    plan: &McPlan,
) -> Result<Vec<(f64, f64)>> {
    plan.check()?;
    config.validate()?;
    let floor = elevation_floor(config, plan.tail_epsilon)?;
    let near = config.full_circle_radius();
    let results: Vec<Result<(f64, f64)>> = (0..plan.trials)
        .into_par_iter()
        .map(|i| {
            let seed = crate::rng::derive_seed(plan.master_seed, i);
            let f = sample_pair_field(config, 0.0, delta_psi, near, floor, seed)?;
            let l = config.arc_len;
            let mut w1 = 0.0f64;
            let mut w2 = 0.0f64;
            for b in &f.buildings {
                let th = b.elevation();
                if th > w1 && b.crosses(l, 0.0) {
                    w1 = th;
                }
                if th > w2 && b.crosses(l, delta_psi) {
                    w2 = th;
                }
            }
            Ok((w1, w2))
        })
        .collect();
    results.into_iter().collect()
}

/// Monte Carlo ACF of ω₁ on the plan's azimuth grid, with one standard
/// error per lag. Lag m corresponds to separation 2πm/G.
pub fn estimate_acf(config: &UrbanConfig, plan: &McPlan, n_lags: usize) -> Result<CircularAcf> {
    plan.check()?;
    config.validate()?;
    let g = plan.azimuth_grid;
    if n_lags > g / 2 {
        return Err(SkylineError::InvalidParameter(format!(
            "a grid of {g} azimuths supports at most {} lags",
            g / 2
        )));
    }
    let grid = azimuth_grid(g);
    let floor = elevation_floor(config, plan.tail_epsilon)?;
    let near = config.full_circle_radius();
    let per_trial: Vec<Result<Vec<f64>>> = (0..plan.trials)
        .into_par_iter()
        .map(|i| {
            let seed = crate::rng::derive_seed(plan.master_seed, i);
            let f = sample_union_grid_field(config, &grid, near, floor, seed)?;
            let tr = crate::skyline::eval_skyline(&f, g, 1);
            let w = &tr.omega[0];
            let mut lags = vec![0.0; n_lags + 1];
            for (m, lag) in lags.iter_mut().enumerate() {
                let mut acc = 0.0;
                for j in 0..g {
                    acc += w[j] * w[(j + m) % g];
                }
                *lag = acc / g as f64;
            }
            Ok(lags)
        })
        .collect();
    let per_trial: Vec<Vec<f64>> = per_trial.into_iter().collect::<Result<_>>()?;
    let n = plan.trials as f64;
    let mut values = Vec::with_capacity(n_lags + 1);
    let mut stderr = Vec::with_capacity(n_lags + 1);
    for m in 0..=n_lags {
        let col: Vec<f64> = per_trial.iter().map(|row| row[m]).collect();
        let mean = pairwise_sum(&col) / n;
        let centered: Vec<f64> = col.iter().map(|&x| (x - mean) * (x - mean)).collect();
        let var = pairwise_sum(&centered) / (n - 1.0).max(1.0);
        values.push(mean);
        stderr.push((var / n).sqrt());
    }
    Ok(CircularAcf {
        delta: (0..=n_lags).map(|m| 2.0 * PI * m as f64 / g as f64).collect(),
        values,
        method: AcfMethod::MonteCarlo,
        stderr: Some(stderr),
    })
}

/// The autocorrelation operation: analytic or Monte Carlo, on the common
/// lag grid δ_m = 2πm/G implied by the plan.
pub fn acf(
    config: &UrbanConfig,
    method: AcfMethod,
    n_lags: usize,
    plan: &McPlan,
) -> Result<CircularAcf> {
    match method {
        AcfMethod::Analytic => {
            let g = plan.azimuth_grid;
            let deltas: Vec<f64> = (0..=n_lags).map(|m| 2.0 * PI * m as f64 / g as f64).collect();
            acf_analytic(config, &deltas, 1e-9)
        }
        AcfMethod::MonteCarlo => estimate_acf(config, plan, n_lags),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_cfg(lambda: f64, l: f64, mu: f64) -> UrbanConfig {
        UrbanConfig::new(lambda, l, HeightModel::Exponential { rate: mu }).unwrap()
    }

    #[test]
    fn empirical_law_moments_and_ecdf() {
        let law = EmpiricalLaw::from_samples(vec![3.0, 1.0, 2.0, 4.0]);
        assert_eq!(law.mean(), 2.5);
        assert!((law.variance() - 5.0 / 3.0).abs() < 1e-12);
        assert_eq!(law.ecdf(0.5), 0.0);
        assert_eq!(law.ecdf(2.0), 0.5);
        assert_eq!(law.ecdf(10.0), 1.0);
        // right-continuity: jump included at the sample point
        assert_eq!(law.ecdf(3.0), 0.75);
    }

    #[test]
    fn ks_distance_of_law_against_itself_is_small() {
        let law = EmpiricalLaw::from_samples((1..=1000).map(|i| i as f64 / 1000.0).collect());
        let d = ks_distance(&law, |x| x.clamp(0.0, 1.0));
        assert!(d <= 1e-3 + 1e-12, "got {d}");
    }

    #[test]
    fn ks_critical_band_holds_for_exact_samples() {
        // inverse-CDF samples of the analytic law itself stay within the
        // asymptotic 95% band 1.36/sqrt(n)
        let cfg = exp_cfg(1.0, 1.0, 1.0);
        let law = DirectionalLaw::new(cfg).unwrap();
        let mut rng = crate::rng::SplitMix64::new(5);
        let n = 10_000;
        let mut inv_samples = Vec::with_capacity(n);
        for _ in 0..n {
            let u = rng.next_f64();
            // invert the cdf by bisection
            let (mut lo, mut hi) = (0.0, PI / 2.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if law.cdf_omega1(mid).unwrap() < u {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            inv_samples.push(lo);
        }
        let emp = EmpiricalLaw::from_samples(inv_samples);
        let d = ks_distance(&emp, |x| law.cdf_omega1(x.clamp(0.0, PI / 2.0)).unwrap());
        assert!(d < 1.36 / (n as f64).sqrt(), "got {d}");
    }

    #[test]
    fn ks_detects_the_wrong_model() {
        // exponential samples against the mean-matched Pareto closed form
        let cfg = exp_cfg(1.0, 1.0, 1.0);
        let plan = McPlan::new(4000, 11);
        let emp = estimate(StatisticId::Omega1AtPsi, &cfg, None, &plan).unwrap();
        let par = DirectionalLaw::new(
            UrbanConfig::new(1.0, 1.0, HeightModel::pareto_mean_matched(1.5, 1.0).unwrap())
                .unwrap(),
        )
        .unwrap();
        let d = ks_distance(&emp, |x| par.cdf_omega1(x.clamp(0.0, PI / 2.0)).unwrap());
        assert!(d > 0.05, "mismatch detector KS {d}");
    }

    #[test]
    fn omega1_matches_analytic_cdf() {
        let cfg = exp_cfg(1.0, 1.0, 1.0);
        let plan = McPlan::new(4000, 21);
        let emp = estimate(StatisticId::Omega1AtPsi, &cfg, None, &plan).unwrap();
        let law = DirectionalLaw::new(cfg).unwrap();
        let d = ks_distance(&emp, |x| law.cdf_omega1(x.clamp(0.0, PI / 2.0)).unwrap());
        assert!(d < 1.36 / (4000f64).sqrt() * 1.5, "KS {d}");
    }

    #[test]
    fn estimates_are_thread_count_invariant() {
        let cfg = exp_cfg(0.5, 1.0, 1.0);
        let plan = McPlan::new(500, 987);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| estimate(StatisticId::Omega1AtPsi, &cfg, None, &plan).unwrap());
        let b = four.install(|| estimate(StatisticId::Omega1AtPsi, &cfg, None, &plan).unwrap());
        assert_eq!(a.samples(), b.samples(), "bit-identical across pools");
    }

    #[test]
    fn stderr_halves_when_trials_quadruple() {
        let cfg = exp_cfg(0.5, 1.0, 1.0);
        let a = estimate(StatisticId::Omega1AtPsi, &cfg, None, &McPlan::new(2000, 1)).unwrap();
        let b = estimate(StatisticId::Omega1AtPsi, &cfg, None, &McPlan::new(8000, 2)).unwrap();
        let ratio = b.stderr() / a.stderr();
        assert!((ratio - 0.5).abs() < 0.1, "se ratio {ratio}");
    }

    #[test]
    fn equal_event_requires_shared_building() {
        // at delta = pi with narrow arcs the equality indicator is almost
        // never set; at delta = 0 it always is
        let cfg = exp_cfg(0.1, 0.5, 1.0);
        let plan = McPlan::new(400, 3);
        let eq0 = estimate(StatisticId::EqualEvent { delta_psi: 0.0 }, &cfg, None, &plan).unwrap();
        assert_eq!(eq0.mean(), 1.0);
        let eq_pi = estimate(StatisticId::EqualEvent { delta_psi: PI }, &cfg, None, &plan).unwrap();
        assert!(eq_pi.mean() < 0.05, "got {}", eq_pi.mean());
    }

    #[test]
    fn satellite_statistics_need_a_constellation() {
        let cfg = exp_cfg(1e-4, 50.0, 0.02);
        assert!(estimate(StatisticId::OutageEvent, &cfg, None, &McPlan::new(10, 0)).is_err());
    }

    #[test]
    fn acf_mc_matches_analytic_on_a_coarse_grid() {
        let cfg = exp_cfg(0.1, 1.0, 1.0);
        let mut plan = McPlan::new(1500, 37);
        plan.azimuth_grid = 32;
        let n_lags = 8;
        let mc = estimate_acf(&cfg, &plan, n_lags).unwrap();
        let an = acf(&cfg, AcfMethod::Analytic, n_lags, &plan).unwrap();
        let se = mc.stderr.as_ref().unwrap();
        for m in 0..=n_lags {
            let gap = (mc.values[m] - an.values[m]).abs();
            assert!(
                gap < 4.0 * se[m].max(1e-4),
                "lag {m}: mc {} vs analytic {} (se {})",
                mc.values[m],
                an.values[m],
                se[m]
            );
        }
    }

    #[test]
    fn pair_samples_respect_marginals() {
        let cfg = exp_cfg(0.1, 1.0, 1.0);
        let plan = McPlan::new(3000, 17);
        let pairs = estimate_pair(&cfg, PI / 8.0, &plan).unwrap();
        let law = DirectionalLaw::new(cfg).unwrap();
        let w1 = EmpiricalLaw::from_samples(pairs.iter().map(|p| p.0).collect());
        let w2 = EmpiricalLaw::from_samples(pairs.iter().map(|p| p.1).collect());
        for emp in [w1, w2] {
            let d = ks_distance(&emp, |x| law.cdf_omega1(x.clamp(0.0, PI / 2.0)).unwrap());
            assert!(d < 1.36 / (3000f64).sqrt() * 1.5, "marginal KS {d}");
        }
    }
}
