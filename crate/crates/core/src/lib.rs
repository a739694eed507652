//! Polarized light in optically active media.
//!
//! `chiroptica` models the passage of linearly polarized light through a
//! chiral solution with Jones calculus, tracks the intensity handed over to
//! the medium, and attaches the helicity-dependent geometric phases and the
//! photon–molecule entangled state to that rotation. The [`polarimetry`]
//! module turns concentration sweeps recorded on a polarimeter into specific
//! rotation, absorbed power and phase series, fits Biot's law and renders
//! the series as SVG or CSV.
//!
//! Angles are radians everywhere in the library API unless a name says
//! otherwise (`*_deg`). Powers are milliwatts.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod elements;
pub mod entanglement;
pub mod error;
pub mod geometric;
pub mod polarimetry;
pub mod polarization;

pub use error::{Error, Result};

/// Complex amplitude used for every Jones and qubit component.
pub type Complex = num_complex::Complex64;
