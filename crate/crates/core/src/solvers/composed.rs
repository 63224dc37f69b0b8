//! Tri-analytic problems solved by chaining base solvers.
//!
//! The inner solution (`φ = ∂z̄ω` for NDN, `φ = ∂z̄²ω` for DND) is built as an
//! evaluator and handed to the outer solver as its area datum. The outer
//! solver samples `φ` once on its origin rule; every point evaluation then
//! evaluates `φ` on one z-centered rule. On the circle `φ` is read through its
//! Dirichlet datum. This path shares no formula with the direct solvers and
//! serves as an independent oracle for them.

use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{BitsadzeDn, DirichletCr, FieldRef, NeumannCr, Solver};
use crate::error::{Error, Result};
use crate::model::{ProblemKind, Validated};
use crate::quad::{Quadrature, RuleDescriptor};
use crate::scalar::Real;

/// Cap on nested kernel evaluations per outer point.
pub const NESTED_EVALUATION_LIMIT: u64 = 50_000_000;

/// Rule budgets of the outer and inner solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComposedBudget {
    pub outer: RuleDescriptor,
    pub inner: RuleDescriptor,
}

impl Default for ComposedBudget {
    fn default() -> Self {
        let rules = RuleDescriptor::default().with_area(24, 48);
        Self { outer: rules, inner: rules }
    }
}

impl ComposedBudget {
    /// Kernel evaluations for one outer point.
    pub fn nested_evaluations(&self) -> u64 {
        (self.outer.area_nodes() as u64) * (self.inner.area_nodes() as u64)
    }

    pub fn check(&self) -> Result<()> {
        self.outer.check()?;
        self.inner.check()?;
        let evaluations = self.nested_evaluations();
        if evaluations > NESTED_EVALUATION_LIMIT {
            return Err(Error::BudgetExceeded { evaluations, limit: NESTED_EVALUATION_LIMIT });
        }
        Ok(())
    }

    fn quadratures<T: Real>(&self) -> Result<(Arc<Quadrature<T>>, Arc<Quadrature<T>>)> {
        self.check()?;
        Ok((Arc::new(Quadrature::new(self.outer)?), Arc::new(Quadrature::new(self.inner)?)))
    }
}

/// NDN as `φ = BitsadzeDn(f, γ₀, γ₁, c₁)`, then `ω = NeumannCr(φ, γ, c)`.
pub struct NdnComposed<T: Real> {
    outer: NeumannCr<T>,
}

impl<T: Real> NdnComposed<T> {
    pub fn new(data: &Validated<T>, budget: ComposedBudget) -> Result<Self> {
        let (outer_q, inner_q) = budget.quadratures()?;
        let arc = |c: &crate::model::ComplexFunction<T>| -> FieldRef<T> { Arc::new(c.clone()) };
        let phi = BitsadzeDn::new(inner_q, arc(data.f()?), arc(data.gamma0()?), arc(data.gamma1()?), data.c1()?)?;
        let outer = NeumannCr::new(outer_q, Arc::new(phi), arc(data.gamma()?), data.c()?)?;
        Ok(Self { outer })
    }
}

impl<T: Real> Solver<T> for NdnComposed<T> {
    fn kind(&self) -> ProblemKind {
        ProblemKind::TriNdn
    }

    fn quadrature(&self) -> &Quadrature<T> {
        self.outer.quadrature()
    }

    fn value(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.outer.value(z)
    }

    /// Conditions of the outer problem only; the direct solver reports the
    /// full set.
    fn condition_values(&self, z: Complex<T>) -> Result<Vec<Complex<T>>> {
        self.outer.condition_values(z)
    }
}

/// DND as `φ = DirichletCr(f, γ)`, then `ω = BitsadzeDn(φ, γ₀, γ₁, c)`.
pub struct DndComposed<T: Real> {
    outer: BitsadzeDn<T>,
}

impl<T: Real> DndComposed<T> {
    pub fn new(data: &Validated<T>, budget: ComposedBudget) -> Result<Self> {
        let (outer_q, inner_q) = budget.quadratures()?;
        let arc = |c: &crate::model::ComplexFunction<T>| -> FieldRef<T> { Arc::new(c.clone()) };
        let phi = DirichletCr::new(inner_q, arc(data.f()?), arc(data.gamma()?))?;
        let outer =
            BitsadzeDn::new(outer_q, Arc::new(phi), arc(data.gamma0()?), arc(data.gamma1()?), data.c()?)?;
        Ok(Self { outer })
    }
}

impl<T: Real> Solver<T> for DndComposed<T> {
    fn kind(&self) -> ProblemKind {
        ProblemKind::TriDnd
    }

    fn quadrature(&self) -> &Quadrature<T> {
        self.outer.quadrature()
    }

    fn value(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.outer.value(z)
    }

    fn condition_values(&self, z: Complex<T>) -> Result<Vec<Complex<T>>> {
        self.outer.condition_values(z)
    }
}

/// Builds the composed solver for a tri-analytic problem.
pub fn composed<T: Real>(data: &Validated<T>, budget: ComposedBudget) -> Result<Box<dyn Solver<T>>> {
    match data.kind() {
        ProblemKind::TriNdn => Ok(Box::new(NdnComposed::new(data, budget)?)),
        ProblemKind::TriDnd => Ok(Box::new(DndComposed::new(data, budget)?)),
        other => Err(Error::Document(format!("no composed solver for {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ProblemKind::*;
    use crate::solvers::direct;
    use crate::solvers::testing::*;

    fn small() -> ComposedBudget {
        let rules = RuleDescriptor::new(128, 12, 96, 0.8);
        ComposedBudget { outer: rules, inner: rules }
    }

    #[test]
    fn ndn_composed_reproduces_conj_cube() {
        let d = data(
            TriNdn,
            &[("f", "6"), ("gamma", "3*conj(z)^3"), ("gamma0", "3*conj(z)^2"), ("gamma1", "6*conj(z)"), ("c", "0,0"), ("c1", "0,0")],
        );
        let s = composed(&d, small()).unwrap();
        assert!(max_dev(s.as_ref(), |z| z.conj().powu(3)) < 1e-10);
        assert_conditions_below(s.as_ref(), 1e-10);
    }

    #[test]
    fn composed_constants() {
        let d = data(TriNdn, &[("f", "0"), ("gamma", "0"), ("gamma0", "0"), ("gamma1", "0"), ("c", "0,3"), ("c1", "0,0")]);
        let s = composed(&d, small()).unwrap();
        assert!(max_dev(s.as_ref(), |_| C::new(0.0, 3.0)) < 1e-14);
        let d = data(TriDnd, &[("f", "0"), ("gamma", "0"), ("gamma0", "0"), ("gamma1", "0"), ("c", "0,0")]);
        let s = composed(&d, small()).unwrap();
        assert_eq!(max_dev(s.as_ref(), |_| C::new(0.0, 0.0)), 0.0);
    }

    #[test]
    fn dnd_composed_reproduces_conj_square_times_z() {
        let d = data(TriDnd, &[("f", "0"), ("gamma", "2*z"), ("gamma0", "conj(z)"), ("gamma1", "4"), ("c", "0,0")]);
        let s = composed(&d, small()).unwrap();
        assert!(max_dev(s.as_ref(), |z| z.conj() * z.conj() * z) < 1e-10);
    }

    #[test]
    fn composed_matches_direct_on_generic_data() {
        let d = data(
            TriDnd,
            &[("f", "z*conj(z) + 1"), ("gamma", "z^2 + conj(z)"), ("gamma0", "i*z"), ("gamma1", "conj(z)^2"), ("c", "0.5,0")],
        );
        let c = composed(&d, small()).unwrap();
        let s = direct(&d, quad()).unwrap();
        for z in probes() {
            assert!((c.value(z).unwrap() - s.value(z).unwrap()).norm() < 1e-10, "z = {z}");
        }
    }

    #[test]
    fn oversized_budget_is_rejected() {
        let big = RuleDescriptor::default();
        let budget = ComposedBudget { outer: big, inner: big };
        assert!(budget.nested_evaluations() > NESTED_EVALUATION_LIMIT);
        let d = data(TriDnd, &[("f", "0"), ("gamma", "0"), ("gamma0", "0"), ("gamma1", "0"), ("c", "0,0")]);
        assert!(matches!(composed::<f64>(&d, budget), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn composed_rejects_base_kinds() {
        let d = data(DirichletCr, &[("f", "0"), ("gamma", "0")]);
        assert!(composed::<f64>(&d, small()).is_err());
    }
}
