//! Fully discrete ADER finite-volume and discontinuous Galerkin schemes for
//! one-dimensional hyperbolic balance laws, with reconstructions that reuse
//! the interface states of the previous step's Riemann problems.

pub mod ader;
pub mod error;
pub mod mesh;
pub mod models;
mod parallel;
pub mod poly;
pub mod reconstruction;
pub mod riemann;

pub use ader::{Bootstrap, Scheme, SchemeConfig, Solver};
pub use error::{Result, SolverError};
pub use mesh::{Boundary, ErrorNorms, FieldState, Grid, InterfaceLedger};
pub use models::{Advection, Euler, PdeModel};
pub use reconstruction::ReconstructionMethod;
pub use riemann::PrimitiveState;
