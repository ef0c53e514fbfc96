//! Interface extraction, the reference level-set solver for transported mean
//! curvature flow, and jump/boundary-layer probes.
//!
//! Orientation convention used throughout: the signed distance (and the level
//! set function phi) is positive on the nematic side, the unit normal nu
//! points into the nematic region, and curvature is kappa = div(nu). A
//! nematic droplet therefore has kappa = -1/R and a predicted leading-order
//! pressure jump (nematic minus isotropic) of +sigma/R.

mod extract;
mod levelset;
mod probes;

pub use extract::{extract_contours, extract_interface, InterfaceCurve};
pub use levelset::{mcf_reference_step, redistance, LevelSetField, RedistanceReport};
pub use probes::{
    mcf_xi_correction, neumann_defect, pressure_jump_probe, sample_bilinear, scalar_jump_probe,
    velocity_jump_probe, NeumannDefect, VelocityJump,
};
