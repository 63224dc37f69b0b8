//! First and second order problems: Dirichlet and Neumann problems for
//! `∂z̄ω = f`, and the Dirichlet-Neumann problem for `∂z̄²ω = f`.
//!
//! Neumann data use `∂ν = z∂z + z̄∂z̄`. Under this convention the area datum
//! enters every boundary term as `γ − 2ζ̄f`.

use std::sync::Arc;

use num_complex::Complex;

use super::{BoundaryData, FieldRef, OriginData, Solver};
use crate::error::Result;
use crate::model::{Field, ProblemKind};
use crate::quad::Quadrature;
use crate::scalar::Real;

fn one<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// `∂z̄ω = f` in the disc, `ω = γ` on the circle.
///
/// Solution `ω(z) = Bd[γ/(ζ − z)] − A[f/(ζ − z)]`; solvable iff
/// `Bd[z̄γ/(1 − z̄ζ)] − A[z̄f/(1 − z̄ζ)] = 0` for all z.
pub struct DirichletCr<T: Real> {
    quad: Arc<Quadrature<T>>,
    f: FieldRef<T>,
    gamma_field: FieldRef<T>,
    gamma: BoundaryData<T>,
    f0: OriginData<T>,
}

impl<T: Real> DirichletCr<T> {
    pub fn new(quad: Arc<Quadrature<T>>, f: FieldRef<T>, gamma: FieldRef<T>) -> Result<Self> {
        let g = BoundaryData::sample(&quad, gamma.as_ref())?;
        let f0 = OriginData::sample(&quad, f.as_ref())?;
        Ok(Self { quad, f, gamma_field: gamma, gamma: g, f0 })
    }
}

impl<T: Real> Solver<T> for DirichletCr<T> {
    fn kind(&self) -> ProblemKind {
        ProblemKind::DirichletCr
    }

    fn quadrature(&self) -> &Quadrature<T> {
        &self.quad
    }

    fn value(&self, z: Complex<T>) -> Result<Complex<T>> {
        let area = self.quad.centered(z).mean_over_offset(|w| self.f.eval(w))?;
        Ok(self.gamma.spec.cauchy(z, 0) - area)
    }

    fn condition_values(&self, z: Complex<T>) -> Result<Vec<Complex<T>>> {
        let zb = z.conj();
        let bd = self.gamma.schwarz_plain(&self.quad, z) * zb;
        let area = self.f0.mean(&self.quad, |w| zb / (one::<T>() - zb * w));
        Ok(vec![bd - area])
    }
}

impl<T: Real> Field<T> for DirichletCr<T> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.value(z)
    }

    fn trace(&self, zeta: Complex<T>) -> Result<Complex<T>> {
        self.gamma_field.eval(zeta)
    }
}

/// `∂z̄ω = f` in the disc, `∂νω = γ` on the circle, `ω(0) = c`.
///
/// Solution `ω(z) = c − B[(γ − 2ζ̄f) log(1 − zζ̄)] − z A[f/(ζ(ζ − z))]`;
/// solvable iff `B[(γ − 2ζ̄f)/(1 − z̄ζ)] + z̄ A[f/(1 − z̄ζ)²] = 0`.
pub struct NeumannCr<T: Real> {
    quad: Arc<Quadrature<T>>,
    f: FieldRef<T>,
    c: Complex<T>,
    h: BoundaryData<T>,
    f0: OriginData<T>,
    f_over_zeta: Complex<T>,
}

impl<T: Real> NeumannCr<T> {
    pub fn new(quad: Arc<Quadrature<T>>, f: FieldRef<T>, gamma: FieldRef<T>, c: Complex<T>) -> Result<Self> {
        let h = BoundaryData::minus_two_conj_times(&quad, gamma.as_ref(), f.as_ref())?;
        let f0 = OriginData::sample(&quad, f.as_ref())?;
        let f_over_zeta = f0.mean(&quad, |w| one::<T>() / w);
        Ok(Self { quad, f, c, h, f0, f_over_zeta })
    }
}

impl<T: Real> Solver<T> for NeumannCr<T> {
    fn kind(&self) -> ProblemKind {
        ProblemKind::NeumannCr
    }

    fn quadrature(&self) -> &Quadrature<T> {
        &self.quad
    }

    fn value(&self, z: Complex<T>) -> Result<Complex<T>> {
        let area = self.quad.centered(z).mean_over_offset(|w| self.f.eval(w))? - self.f_over_zeta;
        Ok(self.c - z * self.h.spec.log_remainder(z, 1) - area)
    }

    fn condition_values(&self, z: Complex<T>) -> Result<Vec<Complex<T>>> {
        Ok(vec![neumann_condition(&self.quad, &self.h, &self.f0, z)])
    }
}

impl<T: Real> Field<T> for NeumannCr<T> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.value(z)
    }
}

/// `B[g/(1 − z̄ζ)] + z̄ A[f/(1 − z̄ζ)²]`, shared by the Neumann-type conditions.
pub(crate) fn neumann_condition<T: Real>(
    quad: &Quadrature<T>,
    g: &BoundaryData<T>,
    f0: &OriginData<T>,
    z: Complex<T>,
) -> Complex<T> {
    let zb = z.conj();
    let area = f0.mean(quad, |w| {
        let d = one::<T>() - zb * w;
        one::<T>() / (d * d)
    });
    g.schwarz(quad, z) + zb * area
}

/// `c − Bd[γ₀/(1 − z̄ζ)] + A[(1 − |ζ|²) f/(ζ(1 − z̄ζ))]`.
pub(crate) fn dirichlet_neumann_condition<T: Real>(
    quad: &Quadrature<T>,
    c: Complex<T>,
    gamma0: &BoundaryData<T>,
    f0: &OriginData<T>,
    z: Complex<T>,
) -> Complex<T> {
    let zb = z.conj();
    let area = f0.mean(quad, |w| (one::<T>() - w * w.conj()) / (w * (one::<T>() - zb * w)));
    c - gamma0.schwarz_plain(quad, z) + area
}

/// `∂z̄²ω = f` in the disc, `ω = γ₀` and `∂ν∂z̄ω = γ₁` on the circle,
/// `∂z̄ω(0) = c`.
///
/// Solution
/// `ω(z) = c z̄ + Bd[γ₀/(ζ − z)] + (1 − |z|²)/z · B[(γ₁ − 2ζ̄f) log(1 − zζ̄)]
///        + A[(|ζ|² − |z|²) f/(ζ(ζ − z))]`.
pub struct BitsadzeDn<T: Real> {
    quad: Arc<Quadrature<T>>,
    f: FieldRef<T>,
    gamma0_field: FieldRef<T>,
    c: Complex<T>,
    gamma0: BoundaryData<T>,
    g1: BoundaryData<T>,
    f0: OriginData<T>,
    f_over_zeta: Complex<T>,
}

impl<T: Real> BitsadzeDn<T> {
    pub fn new(
        quad: Arc<Quadrature<T>>,
        f: FieldRef<T>,
        gamma0: FieldRef<T>,
        gamma1: FieldRef<T>,
        c: Complex<T>,
    ) -> Result<Self> {
        let g0 = BoundaryData::sample(&quad, gamma0.as_ref())?;
        let g1 = BoundaryData::minus_two_conj_times(&quad, gamma1.as_ref(), f.as_ref())?;
        let f0 = OriginData::sample(&quad, f.as_ref())?;
        let f_over_zeta = f0.mean(&quad, |w| one::<T>() / w);
        Ok(Self { quad, f, gamma0_field: gamma0, c, gamma0: g0, g1, f0, f_over_zeta })
    }
}

impl<T: Real> Solver<T> for BitsadzeDn<T> {
    fn kind(&self) -> ProblemKind {
        ProblemKind::BitsadzeDn
    }

    fn quadrature(&self) -> &Quadrature<T> {
        &self.quad
    }

    fn value(&self, z: Complex<T>) -> Result<Complex<T>> {
        let zb = z.conj();
        let decay = T::one() - z.norm_sqr();
        // A[(|ζ|² − |z|²) f/(ζ(ζ − z))] = A[(ζ̄ − z̄) f/(ζ − z)] + z̄ A[f/ζ]
        let area = self.quad.centered(z).sum_indexed_with(|w, off| Ok(self.f.eval(w)? * (w.conj() - zb) / off))?
            + zb * self.f_over_zeta;
        Ok(self.c * zb + self.gamma0.spec.cauchy(z, 0) + self.g1.spec.log_remainder(z, 1) * decay + area)
    }

    fn condition_values(&self, z: Complex<T>) -> Result<Vec<Complex<T>>> {
        Ok(vec![
            dirichlet_neumann_condition(&self.quad, self.c, &self.gamma0, &self.f0, z),
            neumann_condition(&self.quad, &self.g1, &self.f0, z),
        ])
    }
}

impl<T: Real> Field<T> for BitsadzeDn<T> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.value(z)
    }

    fn trace(&self, zeta: Complex<T>) -> Result<Complex<T>> {
        self.gamma0_field.eval(zeta)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{direct, Solver};
    use super::super::testing::*;
    use crate::error::Error;
    use crate::model::{DiscPoint, ProblemKind::*};

    fn solver(kind: crate::model::ProblemKind, fields: &[(&str, &str)]) -> Box<dyn Solver<f64>> {
        direct(&data(kind, fields), quad()).unwrap()
    }

    #[test]
    fn dirichlet_pins() {
        let s = solver(DirichletCr, &[("f", "1"), ("gamma", "conj(z)")]);
        assert!(max_dev(s.as_ref(), |z| z.conj()) < 1e-12);
        assert_conditions_below(s.as_ref(), 1e-12);
        let s = solver(DirichletCr, &[("f", "0"), ("gamma", "z")]);
        assert!(max_dev(s.as_ref(), |z| z) < 1e-12);
        let s = solver(DirichletCr, &[("f", "0"), ("gamma", "1")]);
        assert!(max_dev(s.as_ref(), |_| C::new(1.0, 0.0)) < 1e-12);
    }

    #[test]
    fn dirichlet_condition_vanishes_for_analytic_data() {
        for n in 0..5 {
            let g = format!("z^{n}");
            let s = solver(DirichletCr, &[("f", "0"), ("gamma", &g)]);
            assert!(max_condition(s.as_ref()) < 1e-12, "n = {n}");
        }
        let s = solver(DirichletCr, &[("f", "0"), ("gamma", "conj(z)")]);
        assert!(max_condition(s.as_ref()) > 0.1);
    }

    #[test]
    fn neumann_pins() {
        let s = solver(NeumannCr, &[("f", "0"), ("gamma", "z"), ("c", "0,0")]);
        assert!(max_dev(s.as_ref(), |z| z) < 1e-12);
        assert_conditions_below(s.as_ref(), 1e-12);
        let s = solver(NeumannCr, &[("f", "0"), ("gamma", "0"), ("c", "2,-1")]);
        assert!(max_dev(s.as_ref(), |_| C::new(2.0, -1.0)) < 1e-14);
        let s = solver(NeumannCr, &[("f", "1"), ("gamma", "conj(z)"), ("c", "0,0")]);
        assert!(max_dev(s.as_ref(), |z| z.conj()) < 1e-12);
        assert_conditions_below(s.as_ref(), 1e-12);
    }

    #[test]
    fn bitsadze_pins() {
        let s = solver(BitsadzeDn, &[("f", "2"), ("gamma0", "conj(z)^2"), ("gamma1", "2*conj(z)"), ("c", "0,0")]);
        assert!(max_dev(s.as_ref(), |z| z.conj() * z.conj()) < 1e-12);
        assert_conditions_below(s.as_ref(), 1e-12);
        let s = solver(BitsadzeDn, &[("f", "0"), ("gamma0", "z"), ("gamma1", "0"), ("c", "0,0")]);
        assert!(max_dev(s.as_ref(), |z| z) < 1e-12);
        let s = solver(BitsadzeDn, &[("f", "0"), ("gamma0", "3"), ("gamma1", "0"), ("c", "0,0")]);
        assert_conditions_below(s.as_ref(), 1e-12);
    }

    #[test]
    fn bitsadze_formula_value_without_solvability() {
        let s = solver(BitsadzeDn, &[("f", "0"), ("gamma0", "0"), ("gamma1", "0"), ("c", "1,0")]);
        assert!(max_dev(s.as_ref(), |z| z.conj()) < 1e-14);
        assert!(max_condition(s.as_ref()) > 0.5);
    }

    #[test]
    fn formulas_are_linear_in_the_data() {
        let a = solver(BitsadzeDn, &[("f", "z"), ("gamma0", "z^2"), ("gamma1", "conj(z)"), ("c", "1,0")]);
        let b = solver(BitsadzeDn, &[("f", "conj(z)^2"), ("gamma0", "i"), ("gamma1", "z*z"), ("c", "0,2")]);
        let ab = solver(
            BitsadzeDn,
            &[("f", "3*z + conj(z)^2"), ("gamma0", "3*z^2 + i"), ("gamma1", "3*conj(z) + z^2"), ("c", "3,2")],
        );
        for z in probes() {
            let lhs = ab.value(z).unwrap();
            let rhs = a.value(z).unwrap() * 3.0 + b.value(z).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn solve_is_gated_by_the_safe_radius() {
        let s = solver(DirichletCr, &[("f", "1"), ("gamma", "conj(z)")]);
        let near = DiscPoint::from_f64(0.85, 0.0).unwrap();
        assert!(matches!(s.solve(near), Err(Error::NearBoundary { .. })));
        assert!(matches!(s.conditions(near), Err(Error::NearBoundary { .. })));
        assert!(s.solve(DiscPoint::from_f64(0.0, 0.8).unwrap()).is_ok());
    }

    #[test]
    fn single_precision_pins() {
        use crate::model::ProblemDocument;
        use crate::quad::{Quadrature, RuleDescriptor};
        use num_complex::Complex;
        let doc = ProblemDocument::from_json(r#"{"kind": "bitsadze_dn", "f": "2", "gamma0": "conj(z)^2", "gamma1": "2*conj(z)", "c": [0, 0]}"#).unwrap();
        let quad = std::sync::Arc::new(Quadrature::<f32>::new(RuleDescriptor::new(128, 24, 128, 0.8)).unwrap());
        let s = direct(&doc.validate::<f32>().unwrap(), quad).unwrap();
        for z in probes() {
            let z32 = Complex::new(z.re as f32, z.im as f32);
            let err = (s.value(z32).unwrap() - z32.conj() * z32.conj()).norm();
            assert!(err < 1e-5, "z = {z}: {err}");
        }
    }
}
