//! Representation formulas and solvability conditions.
//!
//! Each solver is prepared once per data set: boundary data are sampled on
//! the circle nodes and turned into Fourier coefficients, the area datum is
//! sampled on the origin-centered rule, and data-only integrals are folded
//! into constants. A point evaluation then costs one z-centered area rule
//! plus power series in z.
//!
//! Formulas are arranged so that no term is divided by z: kernels such as
//! `1/(ζ(ζ − z))` are split into a z-centered piece and an origin piece with
//! polynomial coefficients, and logarithmic kernels are written through the
//! remainders `R_j(z, ζ̄)` of [`crate::ops::log_remainder`].

pub mod base;
pub mod composed;
pub mod tri;

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use base::{BitsadzeDn, DirichletCr, NeumannCr};
pub use composed::{composed, ComposedBudget, DndComposed, NdnComposed};
pub use tri::{Dnd, Ndn};

use crate::error::Result;
use crate::model::{DiscPoint, Field, ProblemKind, Validated};
use crate::quad::{Quadrature, Spectrum};
use crate::scalar::Real;

/// Left-hand side of one condition at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionResidual<T: Real> {
    pub value: Complex<T>,
    pub at: DiscPoint<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    Composed,
}

/// A representation formula with its solvability conditions.
pub trait Solver<T: Real>: Send + Sync {
    fn kind(&self) -> ProblemKind;

    fn quadrature(&self) -> &Quadrature<T>;

    /// Formula value at any interior point, without the safe-radius gate.
    fn value(&self, z: Complex<T>) -> Result<Complex<T>>;

    /// Condition left-hand sides at any interior point.
    fn condition_values(&self, z: Complex<T>) -> Result<Vec<Complex<T>>>;

    /// Formula value at a point inside the safe radius.
    fn solve(&self, z: DiscPoint<T>) -> Result<Complex<T>> {
        self.value(z.require_safe(self.quadrature().r_max())?)
    }

    fn conditions(&self, z: DiscPoint<T>) -> Result<Vec<ConditionResidual<T>>> {
        let zv = z.require_safe(self.quadrature().r_max())?;
        Ok(self.condition_values(zv)?.into_iter().map(|value| ConditionResidual { value, at: z }).collect())
    }

    /// Evaluates the formula on many points in parallel; order is preserved.
    fn solve_all(&self, points: &[DiscPoint<T>]) -> Result<Vec<Complex<T>>> {
        points.par_iter().map(|&p| self.solve(p)).collect()
    }
}

/// Boundary samples on the circle nodes together with their spectrum.
#[derive(Debug, Clone)]
pub(crate) struct BoundaryData<T: Real> {
    pub samples: Vec<Complex<T>>,
    pub spec: Spectrum<T>,
}

impl<T: Real> BoundaryData<T> {
    pub fn new(quad: &Quadrature<T>, samples: Vec<Complex<T>>) -> Self {
        let spec = quad.spectrum(&samples);
        Self { samples, spec }
    }

    pub fn sample(quad: &Quadrature<T>, g: &dyn Field<T>) -> Result<Self> {
        Ok(Self::new(quad, quad.sample_boundary(|z| g.eval(z))?))
    }

    /// Samples of `g − 2ζ̄ h` where `h` is read through its boundary trace.
    pub fn minus_two_conj_times(quad: &Quadrature<T>, g: &dyn Field<T>, h: &dyn Field<T>) -> Result<Self> {
        let two = T::lit(2.0);
        let samples = quad.sample_boundary(|z| Ok(g.eval(z)? - z.conj() * h.trace(z)? * two))?;
        Ok(Self::new(quad, samples))
    }

    /// `B[g/(1 − z̄ζ)]`.
    pub fn schwarz(&self, quad: &Quadrature<T>, z: Complex<T>) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        quad.boundary_sum(&self.samples, |w| one / (one - z.conj() * w))
    }

    /// `Bd[g/(1 − z̄ζ)]`.
    pub fn schwarz_plain(&self, quad: &Quadrature<T>, z: Complex<T>) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        quad.boundary_sum(&self.samples, |w| w / (one - z.conj() * w))
    }
}

/// Area datum sampled on the origin rule.
#[derive(Debug, Clone)]
pub(crate) struct OriginData<T: Real> {
    pub values: Vec<Complex<T>>,
}

impl<T: Real> OriginData<T> {
    pub fn sample(quad: &Quadrature<T>, f: &dyn Field<T>) -> Result<Self> {
        let values = quad.origin().nodes.par_iter().map(|&z| f.eval(z)).collect::<Result<Vec<_>>>()?;
        Ok(Self { values })
    }

    /// `A[f(ζ) k(ζ)]` on the origin rule.
    pub fn mean(&self, quad: &Quadrature<T>, k: impl Fn(Complex<T>) -> Complex<T>) -> Complex<T> {
        let rule = quad.origin();
        rule.sum_indexed(|i| Ok(self.values[i] * k(rule.nodes[i]))).expect("infallible kernel")
    }
}

/// Shared handle to a data function.
pub type FieldRef<T> = Arc<dyn Field<T>>;

/// Builds the direct solver for validated data.
pub fn direct<T: Real>(data: &Validated<T>, quad: Arc<Quadrature<T>>) -> Result<Box<dyn Solver<T>>> {
    let arc = |c: &crate::model::ComplexFunction<T>| -> FieldRef<T> { Arc::new(c.clone()) };
    Ok(match data.kind() {
        ProblemKind::DirichletCr => Box::new(DirichletCr::new(quad, arc(data.f()?), arc(data.gamma()?))?),
        ProblemKind::NeumannCr => Box::new(NeumannCr::new(quad, arc(data.f()?), arc(data.gamma()?), data.c()?)?),
        ProblemKind::BitsadzeDn => Box::new(BitsadzeDn::new(
            quad,
            arc(data.f()?),
            arc(data.gamma0()?),
            arc(data.gamma1()?),
            data.c()?,
        )?),
        ProblemKind::TriNdn => Box::new(Ndn::new(
            quad,
            arc(data.f()?),
            arc(data.gamma()?),
            arc(data.gamma0()?),
            arc(data.gamma1()?),
            data.c()?,
            data.c1()?,
        )?),
        ProblemKind::TriDnd => Box::new(Dnd::new(
            quad,
            arc(data.f()?),
            arc(data.gamma()?),
            arc(data.gamma0()?),
            arc(data.gamma1()?),
            data.c()?,
        )?),
    })
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;
    use crate::model::ProblemDocument;
    use crate::quad::RuleDescriptor;

    pub type C = Complex<f64>;

    /// Small radial rule; the angular count keeps condition kernels exact at |z| = 0.7.
    pub fn quad() -> Arc<Quadrature<f64>> {
        Arc::new(Quadrature::new(RuleDescriptor::new(128, 24, 128, 0.8)).unwrap())
    }

    /// Data from `name=value` pairs; constants are written `re,im`.
    pub fn data(kind: ProblemKind, fields: &[(&str, &str)]) -> Validated<f64> {
        let mut map = serde_json::Map::new();
        map.insert("kind".into(), kind.name().into());
        for (name, value) in fields {
            let v = if *name == "c" || *name == "c1" {
                let parts: Vec<f64> = value.split(',').map(|s| s.trim().parse().unwrap()).collect();
                serde_json::json!(parts)
            } else {
                serde_json::json!(value)
            };
            map.insert(name.to_string(), v);
        }
        ProblemDocument::from_json(&serde_json::Value::Object(map).to_string()).unwrap().validate().unwrap()
    }

    pub fn probes() -> Vec<C> {
        vec![C::new(0.0, 0.0), C::new(0.3, 0.0), C::new(-0.2, 0.45), C::new(0.0, -0.7), C::new(0.5, 0.5)]
    }

    /// Largest deviation of the formula value from `expected` over the probes.
    pub fn max_dev(solver: &dyn Solver<f64>, expected: impl Fn(C) -> C) -> f64 {
        probes().into_iter().map(|z| (solver.value(z).unwrap() - expected(z)).norm()).fold(0.0, f64::max)
    }

    /// Largest condition residual over the probes.
    pub fn max_condition(solver: &dyn Solver<f64>) -> f64 {
        probes()
            .into_iter()
            .flat_map(|z| solver.condition_values(z).unwrap())
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn assert_conditions_below(solver: &dyn Solver<f64>, tol: f64) {
        let m = max_condition(solver);
        assert!(m < tol, "condition residual {m:e} above {tol:e}");
    }
}
