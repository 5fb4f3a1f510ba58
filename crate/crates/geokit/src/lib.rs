//! Computational sub-Riemannian geometry on the Heisenberg groups and the
//! Grushin plane.
//!
//! The crate provides:
//!
//! * [`heis`] — group operations, dilations, the Korányi gauge, and the
//!   horizontal frame on `H^n`;
//! * [`cc`] — the Carnot–Carathéodory distance, both in closed form and via
//!   an independent collocation oracle, plus eikonal and comparability
//!   checks;
//! * [`curve`] — sampled curves, horizontal lifts, holonomy, and horizontal
//!   length;
//! * [`embed`] — the Cayley sphere embedding and the Legendrian horizontal
//!   sphere, with bi-Lipschitz distortion scans;
//! * [`grushin`] — Grushin-plane geodesics, distances, and curvature;
//! * [`lab`] — grid maps, horizontal Sobolev energy, contact residuals,
//!   winding numbers, Stokes checks, and Jacobian rank scans;
//! * [`cli`] — the command-line front end used by the `geokit` binary.
//!
//! Start with the examples directory for runnable tours of each capability.

pub mod cc;
pub mod cli;
pub mod curve;
pub mod embed;
pub mod error;
pub mod grushin;
pub mod heis;
pub mod lab;
pub(crate) mod optim;

pub use error::{GeoError, Result};
