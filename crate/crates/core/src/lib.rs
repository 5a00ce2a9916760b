//! Radially symmetric stationary states with vacuum for a two-dimensional
//! hyperbolic-parabolic chemotaxis model: Bessel kernels, the piecewise
//! closed-form solution representation, transition matching, constructions
//! of bump solutions and independent verification.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod constructors;
pub mod error;
pub mod matching;
pub mod model;
mod roots;
pub mod solutions;
pub mod specfun;

pub use analysis::{verify, Certificate, Quadrature, VerificationReport, VerifyOptions};
pub use constructors::{
    construct_half_bump, construct_interior_bump, probe_nonexistence, HalfBumpSolution,
    InteriorBumpSolution, ProbeReport, Scenario,
};
pub use error::{Error, Result, SearchTrace};
pub use matching::{transition_check, TransitionCheck};
pub use model::{classify, ModelParams, Regime, RegimeKind};
pub use solutions::{Piece, PiecewiseSolution, PointEval};
