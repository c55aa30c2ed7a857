//! Numerical laboratory for a bilinear singular integral along the monomial
//! curve `(t, t^d)`: dyadic/frequency decomposition of the operator, the
//! oscillatory symbols behind each scale piece, paraproduct reductions,
//! trilinear forms and their uniformity machinery, two-dimensional van der
//! Corput forms, and the sharpness counterexample — every decay rate exposed
//! as a measurable, slope-fittable quantity.

pub mod bumps;
pub mod config;
pub mod error;
pub mod foundation;
pub mod harness;
pub mod operators;
pub mod oscsym;
pub mod paraproducts;
pub mod report;
pub mod sharpness;
pub mod svg;
pub mod trilinear;
pub mod uniformity;
pub mod vandercorput;

pub mod cli;

pub use error::{BhtError, Result};
pub use foundation::{
    fourier_transform, interpolate, l2_norm, lp_norm, make_grid, random_bandlimited, Band,
    Direction, Grid1D, SampledSignal,
};
pub use num_complex::Complex64;
