//! Verification harness: manufactured problems, residual diagnostics for any
//! field evaluator, and condition sweeps.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Expression, Poly};
use crate::model::{
    ConditionSup, DiscPoint, EvaluationGrid, ProblemDocument, ProblemKind, SolvabilityReport, Validated,
};
use crate::ops::fd_dbar_power;
use crate::scalar::{to_c64, Real};
use crate::solvers::Solver;

/// Default tolerances of the harness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub condition: f64,
    pub field: f64,
    pub pde_first: f64,
    pub pde_second: f64,
    pub pde_third: f64,
    pub trace: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { condition: 1e-6, field: 1e-4, pde_first: 1e-4, pde_second: 1e-3, pde_third: 1e-2, trace: 1e-5 }
    }
}

impl Tolerances {
    pub fn pde(&self, order: u32) -> f64 {
        match order {
            1 => self.pde_first,
            2 => self.pde_second,
            _ => self.pde_third,
        }
    }
}

/// Tolerances below this sit under the roundoff of condition residuals and
/// field comparisons at default budgets and cannot be met reliably.
pub const TOLERANCE_FLOOR: f64 = 1e-12;

/// Finite-difference step for a derivative of the given order.
pub fn fd_step(order: u32) -> f64 {
    if order <= 1 {
        1e-4
    } else {
        1e-3
    }
}

/// One named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub checks: Vec<Check>,
}

impl Diagnostics {
    pub fn push(&mut self, name: impl Into<String>, value: f64, tolerance: f64) {
        let pass = value.is_finite() && value <= tolerance;
        self.checks.push(Check { name: name.into(), value, tolerance, pass });
    }

    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// A problem whose exact solution is a known polynomial in z and z̄.
#[derive(Debug, Clone)]
pub struct ManufacturedProblem {
    pub omega: Expression,
    pub kind: ProblemKind,
    pub document: ProblemDocument,
}

impl ManufacturedProblem {
    pub fn data<T: Real>(&self) -> Result<Validated<T>> {
        self.document.validate()
    }

    pub fn reference<T: Real>(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.omega.eval(z)
    }
}

/// Derives the data of `kind` from a polynomial ω.
///
/// Boundary data are restricted to the circle with `z z̄ = 1`, so they are
/// pure powers of ζ or ζ̄; constants are values at the origin.
pub fn manufacture(omega: &Expression, kind: ProblemKind) -> Result<ManufacturedProblem> {
    let p = omega.as_poly()?.clone();
    let nu = |q: &Poly| -> Poly {
        let z = Poly::monomial(Complex::new(1.0, 0.0), 1, 0);
        z.mul(&q.dz()).add(&z.conj().mul(&q.dbar()))
    };
    let trace = |q: &Poly| Some(Expression::from_poly(&q.on_circle()));
    let disc = |q: &Poly| Some(Expression::from_poly(q));
    let at0 = |q: &Poly| {
        let v = q.value_at_origin();
        Some([v.re, v.im])
    };
    let d1 = p.dbar();
    let d2 = d1.dbar();
    let d3 = d2.dbar();
    let mut doc = ProblemDocument { kind, f: None, gamma: None, gamma0: None, gamma1: None, c: None, c1: None };
    match kind {
        ProblemKind::DirichletCr => {
            doc.f = disc(&d1);
            doc.gamma = trace(&p);
        }
        ProblemKind::NeumannCr => {
            doc.f = disc(&d1);
            doc.gamma = trace(&nu(&p));
            doc.c = at0(&p);
        }
        ProblemKind::BitsadzeDn => {
            doc.f = disc(&d2);
            doc.gamma0 = trace(&p);
            doc.gamma1 = trace(&nu(&d1));
            doc.c = at0(&d1);
        }
        ProblemKind::TriNdn => {
            doc.f = disc(&d3);
            doc.gamma = trace(&nu(&p));
            doc.c = at0(&p);
            doc.gamma0 = trace(&d1);
            doc.gamma1 = trace(&nu(&d2));
            doc.c1 = at0(&d2);
        }
        ProblemKind::TriDnd => {
            doc.f = disc(&d3);
            doc.gamma = trace(&d2);
            doc.gamma0 = trace(&p);
            doc.gamma1 = trace(&nu(&d1));
            doc.c = at0(&d1);
        }
    }
    Ok(ManufacturedProblem { omega: omega.clone(), kind, document: doc })
}

/// Random polynomial `Σ c_pq z^p z̄^q`, `p + q ≤ degree`, coefficients in the unit square.
pub fn random_polynomial(rng: &mut ChaCha8Rng, degree: u32) -> Poly {
    let mut p = Poly::zero();
    for a in 0..=degree {
        for b in 0..=(degree - a) {
            let c = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            p = p.add(&Poly::monomial(c, a, b));
        }
    }
    p
}

/// Seeded problem with random polynomial data in every field the kind uses.
/// The data need not satisfy the solvability conditions.
pub fn random_document(kind: ProblemKind, seed: u64) -> ProblemDocument {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut expr = |deg| Some(Expression::from_poly(&random_polynomial(&mut rng, deg)));
    let (f, gamma, gamma0, gamma1) = (expr(3), expr(3), expr(3), expr(3));
    let mut constant = || Some([rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
    let (c, c1) = (constant(), constant());
    ProblemDocument {
        kind,
        f,
        gamma: gamma.filter(|_| kind.uses("gamma")),
        gamma0: gamma0.filter(|_| kind.uses("gamma0")),
        gamma1: gamma1.filter(|_| kind.uses("gamma1")),
        c: c.filter(|_| kind.uses("c")),
        c1: c1.filter(|_| kind.uses("c1")),
    }
}

/// Sup of each condition residual over the sample points.
pub fn condition_sweep<T: Real>(
    solver: &dyn Solver<T>,
    points: &[DiscPoint<T>],
    tolerance: f64,
) -> Result<SolvabilityReport> {
    let residuals: Vec<Vec<Complex<T>>> = points
        .par_iter()
        .map(|&p| Ok(solver.conditions(p)?.into_iter().map(|r| r.value).collect()))
        .collect::<Result<_>>()?;
    let count = solver.kind().condition_count().min(residuals.first().map_or(0, Vec::len));
    let per_condition = (0..count)
        .map(|i| {
            let mut best = ConditionSup { condition_id: format!("{}.{}", solver.kind(), i + 1), sup_residual: 0.0, argmax: [0.0, 0.0] };
            for (p, r) in points.iter().zip(&residuals) {
                let v = r[i].norm().to_f64_lossy();
                if v > best.sup_residual || v.is_nan() {
                    let z = to_c64(p.value());
                    best.sup_residual = v;
                    best.argmax = [z.re, z.im];
                }
            }
            best
        })
        .collect();
    Ok(SolvabilityReport { kind: solver.kind(), per_condition, tolerance_used: tolerance })
}

/// `max |field − reference|` over the grid.
pub fn field_error<T: Real>(
    field: &(dyn Fn(Complex<T>) -> Result<Complex<T>> + Sync),
    reference: &(dyn Fn(Complex<T>) -> Result<Complex<T>> + Sync),
    grid: &EvaluationGrid<T>,
) -> Result<f64> {
    let errs: Vec<f64> = grid
        .points
        .par_iter()
        .map(|p| Ok((field(p.value())? - reference(p.value())?).norm().to_f64_lossy()))
        .collect::<Result<_>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}

/// Polynomial extrapolation to `x = 0` through `(x_i, y_i)` (Neville).
pub fn extrapolate_to_zero<T: Real>(xs: &[T], ys: &[Complex<T>]) -> Complex<T> {
    let n = xs.len();
    let mut p: Vec<Complex<T>> = ys.to_vec();
    for level in 1..n {
        for i in 0..n - level {
            let (xa, xb) = (xs[i], xs[i + level]);
            p[i] = (p[i] * xb - p[i + 1] * xa) / (xb - xa);
        }
    }
    p[0]
}

/// Quantities whose boundary values a problem prescribes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceOp {
    /// `∂z̄^k ω`
    Dbar(u32),
    /// `∂ν ∂z̄^k ω`
    NormalDbar(u32),
}

impl TraceOp {
    fn name(self) -> String {
        let d = |k: u32| match k {
            0 => "omega".to_string(),
            1 => "dbar omega".to_string(),
            k => format!("dbar^{k} omega"),
        };
        match self {
            TraceOp::Dbar(k) => d(k),
            TraceOp::NormalDbar(k) => format!("dnu {}", d(k)),
        }
    }

    /// Applies the operator at an interior point by finite differences.
    /// `r ∂r = z∂z + z̄∂z̄` is used for the normal derivative.
    pub fn apply<T: Real>(
        self,
        field: &(dyn Fn(Complex<T>) -> Result<Complex<T>> + Sync),
        z: Complex<T>,
    ) -> Result<Complex<T>> {
        let dbar = |w: Complex<T>, k: u32| -> Result<Complex<T>> {
            if k == 0 {
                field(w)
            } else {
                fd_dbar_power(field, DiscPoint::new(w)?, T::lit(fd_step(k)), k)
            }
        };
        match self {
            TraceOp::Dbar(k) => dbar(z, k),
            TraceOp::NormalDbar(k) => {
                let h = T::lit(1e-3);
                let r = z.norm();
                let dir = z / r;
                let up = dbar(dir * (r + h), k)?;
                let down = dbar(dir * (r - h), k)?;
                Ok((up - down) / (h + h) * r)
            }
        }
    }
}

/// The boundary conditions a kind prescribes, with the data field name.
pub fn boundary_operators(kind: ProblemKind) -> Vec<(TraceOp, &'static str)> {
    match kind {
        ProblemKind::DirichletCr => vec![(TraceOp::Dbar(0), "gamma")],
        ProblemKind::NeumannCr => vec![(TraceOp::NormalDbar(0), "gamma")],
        ProblemKind::BitsadzeDn => vec![(TraceOp::Dbar(0), "gamma0"), (TraceOp::NormalDbar(1), "gamma1")],
        ProblemKind::TriNdn => vec![
            (TraceOp::NormalDbar(0), "gamma"),
            (TraceOp::Dbar(1), "gamma0"),
            (TraceOp::NormalDbar(2), "gamma1"),
        ],
        ProblemKind::TriDnd => vec![
            (TraceOp::Dbar(2), "gamma"),
            (TraceOp::Dbar(0), "gamma0"),
            (TraceOp::NormalDbar(1), "gamma1"),
        ],
    }
}

/// Point conditions `(∂z̄^k ω)(0) = constant`.
pub fn origin_constraints(kind: ProblemKind) -> Vec<(u32, &'static str)> {
    match kind {
        ProblemKind::DirichletCr => vec![],
        ProblemKind::NeumannCr => vec![(0, "c")],
        ProblemKind::BitsadzeDn | ProblemKind::TriDnd => vec![(1, "c")],
        ProblemKind::TriNdn => vec![(0, "c"), (2, "c1")],
    }
}

/// Radii used to extrapolate a boundary trace of `∂z̄^k`-type quantities.
/// Plain values are sampled just inside the circle; derivatives need room
/// for their stencils.
fn trace_radii(op: TraceOp) -> Vec<f64> {
    match op {
        TraceOp::Dbar(0) => vec![0.999, 0.998, 0.997],
        _ => vec![0.99, 0.98, 0.97, 0.96, 0.95],
    }
}

/// Extrapolated boundary value of `op(field)` at `ζ`.
pub fn boundary_trace<T: Real>(
    op: TraceOp,
    field: &(dyn Fn(Complex<T>) -> Result<Complex<T>> + Sync),
    zeta: Complex<T>,
) -> Result<Complex<T>> {
    let radii = trace_radii(op);
    let xs: Vec<T> = radii.iter().map(|r| T::lit(1.0 - r)).collect();
    let ys: Vec<Complex<T>> = radii.iter().map(|&r| op.apply(field, zeta * T::lit(r))).collect::<Result<_>>()?;
    Ok(extrapolate_to_zero(&xs, &ys))
}

/// Number of boundary angles sampled by [`verify_solution`].
pub const TRACE_ANGLES: usize = 16;

/// Residuals of a field against the equation, boundary data and point
/// conditions of `data`. Interior checks use the grid points that leave room
/// for the difference stencils.
///
/// Nested difference quotients near the circle amplify summation noise of
/// the area rules by about `h⁻³`; solvers under test should run on a
/// compensated [`Quadrature`](crate::Quadrature) to meet the trace tolerance.
pub fn verify_solution<T: Real>(
    field: &(dyn Fn(Complex<T>) -> Result<Complex<T>> + Sync),
    data: &Validated<T>,
    grid: &EvaluationGrid<T>,
    tol: &Tolerances,
) -> Result<Diagnostics> {
    let kind = data.kind();
    let order = kind.order();
    let h = fd_step(order);
    let margin = T::lit(1.0 - 4.0 * h * order as f64);
    let f = data.f()?;
    let interior: Vec<&DiscPoint<T>> = grid.points.iter().filter(|p| p.modulus() < margin).collect();
    if interior.is_empty() && !grid.is_empty() {
        return Err(Error::StepTooLarge { h, modulus: grid.points[0].modulus().to_f64_lossy() });
    }
    let pde: Vec<f64> = interior
        .par_iter()
        .map(|p| {
            let d = fd_dbar_power(field, **p, T::lit(h), order)?;
            Ok((d - f.eval(p.value())?).norm().to_f64_lossy())
        })
        .collect::<Result<_>>()?;
    let mut diag = Diagnostics::default();
    diag.push(format!("pde dbar^{order}"), pde.into_iter().fold(0.0, f64::max), tol.pde(order));

    let angles: Vec<Complex<T>> = (0..TRACE_ANGLES)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * (j as f64 + 0.25) / TRACE_ANGLES as f64;
            Complex::new(T::lit(th.cos()), T::lit(th.sin()))
        })
        .collect();
    for (op, name) in boundary_operators(kind) {
        let datum = match name {
            "gamma" => data.gamma()?,
            "gamma0" => data.gamma0()?,
            _ => data.gamma1()?,
        };
        let errs: Vec<f64> = angles
            .par_iter()
            .map(|&zeta| Ok((boundary_trace(op, field, zeta)? - datum.eval(zeta)?).norm().to_f64_lossy()))
            .collect::<Result<_>>()?;
        diag.push(format!("trace {} = {name}", op.name()), errs.into_iter().fold(0.0, f64::max), tol.trace);
    }

    let origin = Complex::new(T::zero(), T::zero());
    for (k, name) in origin_constraints(kind) {
        let want = if name == "c" { data.c()? } else { data.c1()? };
        let got = TraceOp::Dbar(k).apply(field, origin)?;
        diag.push(format!("origin {} = {name}", TraceOp::Dbar(k).name()), (got - want).norm().to_f64_lossy(), tol.trace);
    }
    Ok(diag)
}
