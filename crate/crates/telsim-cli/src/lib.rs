//! Command-line front end for the teleportation-fidelity simulator:
//! figure presets, CSV/SVG output, and the validation suite.

pub mod config;
pub mod csv;
pub mod pipeline;
pub mod svg;
pub mod validate;
