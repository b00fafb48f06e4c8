//! Exact rational polyhedral cones, fans and piecewise-linear stratifications.

mod cone;
mod fan;

pub use cone::{LatticePoint, RationalCone};
pub use fan::{refines, stratification_to_smooth_fan, Fan, PLStratification, StratumCell};
