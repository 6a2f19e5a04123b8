//! anacalc: a desk-scale numerical analysis toolkit.
//!
//! The crate implements the constructive side of a classical analysis
//! course as tested numerics: contraction fixed points, initial-value
//! solvers with continuation and blow-up detection, convolution and
//! mollifier smoothing, Fourier series and transforms, contour integration
//! and residue calculus, 1D piecewise-linear Galerkin solvers, and
//! second-kind integral equations.
//!
//! Everything operates on plain `f64` data; the central carrier is
//! [`grid::GridFunction`], samples of a function on a uniform grid. All
//! operations are pure and safe to call concurrently. With the `parallel`
//! feature (on by default) the data-parallel kernels (convolution,
//! transform sampling, Nystrom assembly) run on rayon; disabling the
//! feature yields the identical sequential computation.

pub mod complexint;
pub mod convolution;
pub mod error;
pub mod fem;
pub mod fixpoint;
pub mod fourier;
pub mod grid;
pub mod integral_eq;
pub mod ode;
mod par;
pub mod quad;
pub mod realfun;

pub use error::{Error, Result};
pub use grid::{ComplexGrid, GridFunction};
pub use quad::{QuadRule, QuadratureSpec};
pub use realfun::InequalityReport;
