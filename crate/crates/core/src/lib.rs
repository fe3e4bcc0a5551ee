//! Statistics of the urban skyline process.
//!
//! A ground user is surrounded by buildings whose centers form a marked
//! Poisson point process; each building is a cylindrical arc of fixed length
//! with a random height. The skyline process maps every azimuth to the k-th
//! largest blockage elevation angle among the buildings visible in that
//! direction. This crate computes its statistics twice over: in closed form
//! or by adaptive quadrature, and by reproducible Monte Carlo simulation,
//! and applies them to LEO-satellite visibility, outage and dual-link
//! diversity design.
//!
//! Module map:
//! * [`height`], [`config`] — the marked-process parameters.
//! * [`field`], [`skyline`] — realizations and exact per-direction evaluation.
//! * [`direction`] — single-direction laws (CDF of ω₁, n-th neighbor,
//!   dominant obstacle, second-process vanishing).
//! * [`global_law`] — all-azimuth supremum and its dominant building.
//! * [`joint`] — two-direction joint law, equality probability, angular
//!   autocorrelation and power spectrum.
//! * [`leo`] — satellite elevation law, visibility, outage, dual links.
//! * [`mc`] — trial orchestration, empirical laws, KS distances.

pub mod config;
pub mod direction;
pub mod error;
pub(crate) mod expint;
pub mod field;
pub mod geometry;
pub mod global_law;
pub mod height;
pub mod joint;
pub mod leo;
pub mod mc;
pub mod quad;
pub mod rng;
pub mod skyline;
pub mod special;

pub use config::UrbanConfig;
pub use direction::{dominance_gap, DirectionalLaw};
pub use error::{Result, SkylineError};
pub use field::{
    crossing_truncation_radius, sample_crossing_field, sample_crossing_field_plain, sample_field,
    sample_pair_field, sample_union_grid_field, truncation_radius, Building, BuildingField,
};
pub use geometry::RegionPair;
pub use global_law::GlobalLaw;
pub use height::HeightModel;
pub use joint::{acf_analytic, joint_cdf, prob_equal, psd, AcfMethod, CircularAcf};
pub use leo::{
    decorrelation_angle, dual_outage, elevation_cdf, elevation_pdf, find_mask, mean_visible,
    outage_independent, outage_mc, visible_count_mc, ConstellationConfig, DualOutage, MaskSearch,
};
pub use mc::{acf, estimate, estimate_acf, estimate_pair, ks_distance, EmpiricalLaw, McPlan, StatisticId};
pub use skyline::{azimuth_grid, eval_skyline, global_sup, SkylineTrace};
