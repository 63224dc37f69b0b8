//! Direct formulas for the two combined problems of `∂z̄³ω = f`.
//!
//! * NDN: `∂νω = γ`, `ω(0) = c`; `∂z̄ω = γ₀`, `∂ν∂z̄²ω = γ₁`, `∂z̄²ω(0) = c₁`.
//! * DND: `ω = γ₀`, `∂ν∂z̄ω = γ₁`, `∂z̄ω(0) = c`; `∂z̄²ω = γ`.
//!
//! Both are obtained by inserting one base solution into the other. On the
//! circle the inner solution is replaced by its Dirichlet datum, which is
//! where the `−2ζ̄γ₀` and `−2ζ̄γ` boundary terms come from.

use std::sync::Arc;

use num_complex::Complex;

use super::base::{dirichlet_neumann_condition, neumann_condition};
use super::{BoundaryData, FieldRef, OriginData, Solver};
use crate::error::Result;
use crate::model::{Field, ProblemKind};
use crate::quad::Quadrature;
use crate::scalar::Real;

fn one<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

fn half<T: Real>() -> T {
    T::lit(0.5)
}

/// Neumann-(Dirichlet-Neumann) problem.
pub struct Ndn<T: Real> {
    quad: Arc<Quadrature<T>>,
    f: FieldRef<T>,
    c: Complex<T>,
    c1: Complex<T>,
    /// `γ − 2ζ̄γ₀`
    h: BoundaryData<T>,
    gamma0: BoundaryData<T>,
    /// `γ₁ − 2ζ̄f`
    g1: BoundaryData<T>,
    f0: OriginData<T>,
    f_over_zeta: Complex<T>,
    f_conj2_over_zeta: Complex<T>,
}

impl<T: Real> Ndn<T> {
    pub fn new(
        quad: Arc<Quadrature<T>>,
        f: FieldRef<T>,
        gamma: FieldRef<T>,
        gamma0: FieldRef<T>,
        gamma1: FieldRef<T>,
        c: Complex<T>,
        c1: Complex<T>,
    ) -> Result<Self> {
        let h = BoundaryData::minus_two_conj_times(&quad, gamma.as_ref(), gamma0.as_ref())?;
        let g0 = BoundaryData::sample(&quad, gamma0.as_ref())?;
        let g1 = BoundaryData::minus_two_conj_times(&quad, gamma1.as_ref(), f.as_ref())?;
        let f0 = OriginData::sample(&quad, f.as_ref())?;
        let f_over_zeta = f0.mean(&quad, |w| one::<T>() / w);
        let f_conj2_over_zeta = f0.mean(&quad, |w| w.conj() * w.conj() / w);
        Ok(Self { quad, f, c, c1, h, gamma0: g0, g1, f0, f_over_zeta, f_conj2_over_zeta })
    }

    /// `B[g₁ E(z, ζ̄)]` with
    /// `E(z, w) = (1 − |z|²)² log(1 − zw)/(2z²) + w/(2z) + w²/4`
    /// rewritten as `(1 − |z|²)² R₂(z, w)/2 + z̄(2 − |z|²) w/2 + w²/4`.
    fn log_term(&self, z: Complex<T>) -> Complex<T> {
        let r2 = z.norm_sqr();
        let decay = T::one() - r2;
        let s = &self.g1.spec;
        s.log_remainder(z, 2) * (decay * decay * half::<T>())
            + z.conj() * s.coef(1) * ((T::lit(2.0) - r2) * half::<T>())
            + s.coef(2) * T::lit(0.25)
    }
}

/// Kernel of the area term in the third NDN condition, multiplied by `1/ζ` at the call site.
fn ndn_k4<T: Real>(t: Complex<T>, z: Complex<T>) -> Complex<T> {
    let zb = z.conj();
    let a = t.norm_sqr();
    let d = one::<T>() - zb * t;
    let num = t.conj() * a - zb * a * T::lit(4.0) + zb * zb * t * a * T::lit(2.0) - zb * zb * t + zb * T::lit(2.0);
    zb * num / (d * d * T::lit(2.0))
}

impl<T: Real> Solver<T> for Ndn<T> {
    fn kind(&self) -> ProblemKind {
        ProblemKind::TriNdn
    }

    fn quadrature(&self) -> &Quadrature<T> {
        &self.quad
    }

    fn value(&self, z: Complex<T>) -> Result<Complex<T>> {
        let zb = z.conj();
        let g0 = &self.gamma0.spec;
        // Bd[γ₀((ζ̄ − z̄)/(ζ − z) − ζ̄/ζ)]
        let gamma0_term = g0.cauchy(z, 1) - zb * g0.cauchy(z, 0) - g0.coef(1);
        let centered = self.quad.centered(z).sum_indexed_with(|w, off| {
            let d = w.conj() - zb;
            Ok(self.f.eval(w)? * d * d / off)
        })?;
        let area = (centered - self.f_conj2_over_zeta - zb * zb * self.f_over_zeta) * half::<T>();
        Ok(self.c + self.c1 * zb * zb * half::<T>() - z * self.h.spec.log_remainder(z, 1) - gamma0_term
            - self.log_term(z)
            - area)
    }

    fn condition_values(&self, z: Complex<T>) -> Result<Vec<Complex<T>>> {
        let zb = z.conj();
        let q = &self.quad;
        let r1 = dirichlet_neumann_condition(q, self.c1, &self.gamma0, &self.f0, z);
        let r2 = neumann_condition(q, &self.g1, &self.f0, z);
        let area = self.f0.mean(q, |w| ndn_k4(w, z) / w);
        let r3 = self.h.schwarz(q, z) + zb * self.gamma0.spec.coef(0) + self.c1 * zb * zb
            - zb * self.g1.spec.coef(1) * half::<T>()
            + area;
        Ok(vec![r1, r2, r3])
    }
}

impl<T: Real> Field<T> for Ndn<T> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.value(z)
    }
}

/// (Dirichlet-Neumann)-Dirichlet problem.
pub struct Dnd<T: Real> {
    quad: Arc<Quadrature<T>>,
    f: FieldRef<T>,
    c: Complex<T>,
    gamma: BoundaryData<T>,
    gamma0: BoundaryData<T>,
    /// `γ₁ − 2ζ̄γ`
    q: BoundaryData<T>,
    f0: OriginData<T>,
    f_conj_over_zeta: Complex<T>,
}

/// `(2t̄ − t(t̄² + z̄²)) / (2(1 − z̄t))`
fn dnd_pk<T: Real>(t: Complex<T>, z: Complex<T>) -> Complex<T> {
    let zb = z.conj();
    let tb = t.conj();
    (tb * T::lit(2.0) - t * (tb * tb + zb * zb)) / ((one::<T>() - zb * t) * T::lit(2.0))
}

impl<T: Real> Dnd<T> {
    pub fn new(
        quad: Arc<Quadrature<T>>,
        f: FieldRef<T>,
        gamma: FieldRef<T>,
        gamma0: FieldRef<T>,
        gamma1: FieldRef<T>,
        c: Complex<T>,
    ) -> Result<Self> {
        let g = BoundaryData::sample(&quad, gamma.as_ref())?;
        let g0 = BoundaryData::sample(&quad, gamma0.as_ref())?;
        let qd = BoundaryData::minus_two_conj_times(&quad, gamma1.as_ref(), gamma.as_ref())?;
        let f0 = OriginData::sample(&quad, f.as_ref())?;
        let f_conj_over_zeta = f0.mean(&quad, |w| w.conj() / w);
        Ok(Self { quad, f, c, gamma: g, gamma0: g0, q: qd, f0, f_conj_over_zeta })
    }
}

impl<T: Real> Solver<T> for Dnd<T> {
    fn kind(&self) -> ProblemKind {
        ProblemKind::TriDnd
    }

    fn quadrature(&self) -> &Quadrature<T> {
        &self.quad
    }

    fn value(&self, z: Complex<T>) -> Result<Complex<T>> {
        let zb = z.conj();
        let r2 = z.norm_sqr();
        let g = &self.gamma.spec;
        // B[γ (ζ̄(1 − 2|z|²) + z̄²ζ) / (2(ζ − z))]
        let gamma_term = (g.cauchy(z, 2) * (T::one() - r2 - r2) + g.cauchy(z, 0) * zb * zb) * half::<T>();
        // A[f (ζ̄(|ζ|² − 2|z|²) + z̄²ζ) / (2ζ(ζ − z))] = ½A[f(ζ̄ − z̄)²/(ζ − z)] + z̄ A[fζ̄/ζ]
        let centered = self.quad.centered(z).sum_indexed_with(|w, off| {
            let d = w.conj() - zb;
            Ok(self.f.eval(w)? * d * d / off)
        })?;
        let area = centered * half::<T>() + zb * self.f_conj_over_zeta;
        Ok(self.c * zb + self.gamma0.spec.cauchy(z, 0) + self.q.spec.log_remainder(z, 1) * (T::one() - r2)
            + gamma_term
            - area)
    }

    fn condition_values(&self, z: Complex<T>) -> Result<Vec<Complex<T>>> {
        let zb = z.conj();
        let q = &self.quad;
        let r1 = self.gamma.schwarz_plain(q, z) * zb - self.f0.mean(q, |w| zb / (one::<T>() - zb * w));
        let r2 = self.c - self.gamma0.schwarz_plain(q, z) + q.boundary_sum(&self.gamma.samples, |w| dnd_pk(w, z))
            - self.f0.mean(q, |w| dnd_pk(w, z) / w);
        let boundary = q.boundary_sum(&self.q.samples, |w| one::<T>() / (one::<T>() - zb * w))
            + q.boundary_sum(&self.gamma.samples, |w| zb / (one::<T>() - zb * w));
        let area = self.f0.mean(q, |w| {
            let d = one::<T>() - zb * w;
            zb * (w.conj() - zb) / (d * d)
        });
        Ok(vec![r1, r2, boundary - area])
    }
}

impl<T: Real> Field<T> for Dnd<T> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.value(z)
    }
}
