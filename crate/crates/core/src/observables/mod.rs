//! DQPT diagnostics built on the per-mode dynamics.

mod chern;
mod critical;
pub mod quadrature;
mod rate;
mod texture;

pub use chern::{chern_fixed_points, chern_fixed_points_models, chern_integral};
pub use critical::{
    critical_momentum, critical_set, critical_times, dqpt_predicate, sphere_coverage, Coverage,
    CriticalSet,
};
pub use rate::{
    rate_curve, rate_from_modes, rate_from_overlaps, rate_function, rate_function_states,
    rate_function_thermo, thermo_curve, write_rate_curves_csv, ModeCount, RateCurve,
};
pub use texture::{skyrmion_centers, skyrmion_texture, texture_value, SkyrmionCenter, TextureGrid};
