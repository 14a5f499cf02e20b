//! Exact spectral calculus on round spheres and sphere products, the
//! Lyapunov–Schmidt glueing series of a degenerate constant solution of
//! `Δu + hu = u^{2★-1}`, its obstruction forms, and the blow-up energy
//! profile constants.

pub mod config;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod obstruction;
pub mod poly;
pub mod quadrature;
pub mod rational;
pub mod report;
pub mod series;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
