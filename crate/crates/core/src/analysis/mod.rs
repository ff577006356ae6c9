//! Measurements on fields: radial profiles, vortex charge, hole filling and
//! diffusion fits.

pub mod fill;
pub mod fit;
pub mod profile;
pub mod winding;

pub use fill::{
    fill_metric, fill_time, fill_time_with_tolerance, flat_fill_metric_analytic,
    DEFAULT_FILL_THRESHOLD,
};
pub use fit::{fit_diffusion, FitResult};
pub use profile::{normalize_profiles, radial_profile, RadialProfile};
pub use winding::{circulation, winding_number, winding_number_with_floor};
