//! Discrete topology on raster masks: complement components and their
//! boundary contours, winding numbers, phase unwrapping, zero sets, the
//! hole condition and nearest-cell extension.

mod components;
mod winding;
mod zeroset;

pub use components::{complement_components, Component, Cycle, Hole, HoleReport, NO_LABEL};
pub use winding::{
    circle_log, hole_windings, phase_step, phase_unwrap_log, winding_along, winding_number,
    HoleWinding, Obstruction, UnwrappedLog,
};
pub use zeroset::{
    b1_falsify, default_eps, hole_condition, hole_condition_with, lipschitz_estimate,
    sublevel_points, sublevel_zero_set, tietze_extend, HoleConditionResult, HoleVerdict,
    TrappedRegion,
};
