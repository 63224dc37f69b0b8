//! Solution formulas and solvability conditions for combined boundary value
//! problems of the inhomogeneous tri-analytic equation `∂z̄³ω = f` on the
//! unit disc, together with the first and second order problems they are
//! built from.
//!
//! Every numerical routine is generic over the [`Real`] scalar (`f32` or
//! `f64`); the `*64` aliases below fix the usual double precision choice.

pub mod error;
pub mod expr;
pub mod identities;
pub mod model;
pub mod ops;
pub mod quad;
pub mod scalar;
pub mod solvers;
pub mod verify;

pub use error::{Error, Result};
pub use expr::Expression;
pub use model::{
    ComplexFunction, DiscPoint, DomainTag, EvaluationGrid, Field, FnField, ProblemData, ProblemDocument, ProblemKind,
    SolutionField, SolvabilityReport, Validated,
};
pub use quad::{Quadrature, RuleDescriptor};
pub use scalar::Real;

pub type DiscPoint64 = DiscPoint<f64>;
pub type ProblemData64 = ProblemData<f64>;
pub type Quadrature64 = Quadrature<f64>;
pub type SolutionField64 = SolutionField<f64>;
