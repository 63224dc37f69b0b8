//! Named integral operators, kernels and finite-difference probes.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DiscPoint;
use crate::quad::{boundary_cauchy, Quadrature};
use crate::scalar::Real;

/// Kernels appearing in the condition and solution formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelId {
    /// `1/(ζ − z)` on the boundary.
    Cauchy,
    /// `1/(ζ − z)` over the disc.
    Pompeiu,
    /// `log(1 − z ζ̄)`.
    LogNeumann,
    /// `1/(ζ(1 − z̄ζ))`, pole at the origin and outside the disc.
    SchwarzCondition,
    /// `1/(1 − z̄ζ)`.
    ExteriorPole1,
    /// `1/(1 − z̄ζ)²`.
    ExteriorPole2,
}

/// Where an area rule for the kernel has to be centered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleCenter {
    AtPoint,
    AtOrigin,
    /// Singularity outside the closed disc; the origin rule is used and the
    /// safe radius keeps the pole at a distance.
    Exterior,
}

impl KernelId {
    pub fn rule_center(self) -> RuleCenter {
        match self {
            KernelId::Cauchy | KernelId::Pompeiu | KernelId::LogNeumann => RuleCenter::AtPoint,
            KernelId::SchwarzCondition => RuleCenter::AtOrigin,
            KernelId::ExteriorPole1 | KernelId::ExteriorPole2 => RuleCenter::Exterior,
        }
    }

    /// Kernel value at `(z, ζ)`.
    pub fn eval<T: Real>(self, z: Complex<T>, zeta: Complex<T>) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        match self {
            KernelId::Cauchy | KernelId::Pompeiu => one / (zeta - z),
            KernelId::LogNeumann => log_kernel(z, zeta),
            KernelId::SchwarzCondition => one / (zeta * (one - z.conj() * zeta)),
            KernelId::ExteriorPole1 => one / (one - z.conj() * zeta),
            KernelId::ExteriorPole2 => {
                let d = one - z.conj() * zeta;
                one / (d * d)
            }
        }
    }
}

/// `Bd[γ/(ζ − z)]`.
pub fn cauchy_transform<T: Real>(
    gamma: impl Fn(Complex<T>) -> Result<Complex<T>>,
    z: DiscPoint<T>,
    quad: &Quadrature<T>,
) -> Result<Complex<T>> {
    boundary_cauchy(gamma, z, quad.boundary(), quad.r_max())
}

/// Pompeiu operator `T f(z) = −A[f/(ζ − z)]`.
pub fn pompeiu_t<T: Real>(
    f: impl Fn(Complex<T>) -> Result<Complex<T>>,
    z: DiscPoint<T>,
    quad: &Quadrature<T>,
) -> Result<Complex<T>> {
    let zv = z.require_safe(quad.r_max())?;
    Ok(-quad.centered(zv).mean_over_offset(f)?)
}

/// Principal `log(1 − z ζ̄)`; the argument stays in the right half plane.
pub fn log_kernel<T: Real>(z: Complex<T>, zeta: Complex<T>) -> Complex<T> {
    log1m(z * zeta.conj())
}

/// `log(1 − w)` for `|w| < 1`, accurate for small `w`.
pub fn log1m<T: Real>(w: Complex<T>) -> Complex<T> {
    if w.norm() <= T::lit(0.25) {
        -w * series_tail(w, 1)
    } else {
        (Complex::new(T::one(), T::zero()) - w).ln()
    }
}

/// `Σ_{k≥j} w^{k−j}/k`, summed until terms drop below roundoff.
fn series_tail<T: Real>(w: Complex<T>, j: u32) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    let mut pw = Complex::new(T::one(), T::zero());
    let tiny = T::epsilon() * T::lit(0.01);
    for k in j..j + 400 {
        let term = pw / T::lit(k as f64);
        acc = acc + term;
        if term.norm() <= tiny * acc.norm() {
            break;
        }
        pw = pw * w;
    }
    acc
}

/// `R_j(z, w) = (log(1 − zw) + Σ_{k<j} (zw)^k/k) / z^j = −w^j Σ_{k≥j} (zw)^{k−j}/k`.
///
/// Removes the apparent pole of the logarithmic kernels at `z = 0`. For
/// small `|zw|` the power series is summed; otherwise the closed form is
/// used, where `|z|` is bounded below and the division is harmless.
pub fn log_remainder<T: Real>(z: Complex<T>, w: Complex<T>, j: u32) -> Complex<T> {
    let zw = z * w;
    if zw.norm() <= T::lit(0.25) {
        -w.powu(j) * series_tail(zw, j)
    } else {
        let mut acc = (Complex::new(T::one(), T::zero()) - zw).ln();
        let mut pw = Complex::new(T::one(), T::zero());
        for k in 1..j {
            pw = pw * zw;
            acc = acc + pw / T::lit(k as f64);
        }
        acc / z.powu(j)
    }
}

fn step_check<T: Real>(z: Complex<T>, reach: T, h: T) -> Result<()> {
    if h <= T::zero() || z.norm() + reach >= T::one() {
        return Err(Error::StepTooLarge { h: h.to_f64_lossy(), modulus: z.norm().to_f64_lossy() });
    }
    Ok(())
}

/// Central-difference `∂z̄ = ½(∂x + i∂y)`.
pub fn fd_wirtinger_dbar<T: Real>(
    field: impl Fn(Complex<T>) -> Result<Complex<T>>,
    z: DiscPoint<T>,
    h: T,
) -> Result<Complex<T>> {
    fd_dbar_power(field, z, h, 1)
}

/// Offsets `(a, b)` and weights of the stencil for `(½(δx + iδy))^k`,
/// with `δ` the central difference of step `h`.
fn dbar_stencil<T: Real>(k: u32, h: T) -> Vec<((i32, i32), Complex<T>)> {
    let mut st: BTreeMap<(i32, i32), Complex<T>> = BTreeMap::new();
    st.insert((0, 0), Complex::new(T::one(), T::zero()));
    let q = T::one() / (T::lit(4.0) * h);
    for _ in 0..k {
        let mut next: BTreeMap<(i32, i32), Complex<T>> = BTreeMap::new();
        for (&(a, b), &c) in &st {
            let moves = [
                ((a + 1, b), Complex::new(q, T::zero())),
                ((a - 1, b), Complex::new(-q, T::zero())),
                ((a, b + 1), Complex::new(T::zero(), q)),
                ((a, b - 1), Complex::new(T::zero(), -q)),
            ];
            for (key, w) in moves {
                let slot = next.entry(key).or_insert(Complex::new(T::zero(), T::zero()));
                *slot = *slot + c * w;
            }
        }
        st = next;
    }
    st.into_iter().filter(|(_, c)| c.norm() > T::zero()).collect()
}

/// Central-difference `∂z̄^k`, built by applying the first-order stencil
/// `k` times and evaluating each distinct point once.
pub fn fd_dbar_power<T: Real>(
    field: impl Fn(Complex<T>) -> Result<Complex<T>>,
    z: DiscPoint<T>,
    h: T,
    k: u32,
) -> Result<Complex<T>> {
    let zv = z.value();
    step_check(zv, h * T::lit(k as f64) * T::lit(std::f64::consts::SQRT_2), h)?;
    let mut acc = Complex::new(T::zero(), T::zero());
    for ((a, b), w) in dbar_stencil(k, h) {
        let p = zv + Complex::new(h * T::lit(a as f64), h * T::lit(b as f64));
        acc = acc + field(p)? * w;
    }
    Ok(acc)
}

/// One-sided radial derivative `d/dr field(r ζ)` at `r = 1`, three-point stencil.
pub fn fd_normal_derivative<T: Real>(
    field: impl Fn(Complex<T>) -> Result<Complex<T>>,
    zeta: Complex<T>,
    h: T,
) -> Result<Complex<T>> {
    if h <= T::zero() || h >= T::lit(0.25) {
        return Err(Error::StepTooLarge { h: h.to_f64_lossy(), modulus: 1.0 });
    }
    let at = |r: T| field(zeta * r);
    let f0 = at(T::one())?;
    let f1 = at(T::one() - h)?;
    let f2 = at(T::one() - h - h)?;
    Ok((f0 * T::lit(3.0) - f1 * T::lit(4.0) + f2) / (h + h))
}
