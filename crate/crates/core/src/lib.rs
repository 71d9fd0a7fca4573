//! Hyperbolic length spectra of surfaces with boundary.
//!
//! The crate measures simple closed geodesics and orthogeodesic arcs on
//! finite-type hyperbolic surfaces given in Fenchel–Nielsen coordinates, and
//! estimates the length-spectrum metrics `d`, `d̄`, `d_L`, `δ_L` (and the
//! ratio `K`) between two points of Teichmüller space.

pub mod cli;
pub mod geometry;
pub mod hyptrig;
pub mod isometry;
pub mod spectrum;
pub mod surface;
