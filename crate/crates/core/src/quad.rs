//! Quadrature on the unit circle and the unit disc.
//!
//! Notation used across the crate, with ζ on the circle or in the disc:
//!
//! * `B[g]  = (1/2πi) ∮ g(ζ) dζ/ζ`, the boundary mean;
//! * `Bd[g] = (1/2πi) ∮ g(ζ) dζ`, the plain boundary integral;
//! * `A[g]  = (1/π) ∬ g(ζ) dξ dη`, the area mean.
//!
//! Boundary integrals use the trapezoid rule on `n` equispaced nodes, which
//! is spectrally accurate for smooth periodic integrands. Area integrals use
//! a polar tensor rule around a chosen center: Gauss-Legendre in the radius
//! (Jacobian folded into the weights) and trapezoid in the angle, with the
//! radial upper limit chosen so the rule tiles exactly the unit disc. A pole
//! of order one at the center is cancelled by the Jacobian.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DEFAULT_R_MAX;
use crate::scalar::{Accumulator, Real};

/// Node budgets and safe radius, as serialized in provenance records.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleDescriptor {
    pub boundary_n: usize,
    pub area_nr: usize,
    pub area_ntheta: usize,
    pub r_max: f64,
}

impl Default for RuleDescriptor {
    fn default() -> Self {
        Self { boundary_n: 1024, area_nr: 120, area_ntheta: 256, r_max: DEFAULT_R_MAX }
    }
}

impl RuleDescriptor {
    pub fn new(boundary_n: usize, area_nr: usize, area_ntheta: usize, r_max: f64) -> Self {
        Self { boundary_n, area_nr, area_ntheta, r_max }
    }

    /// Budget used by the identity suite: both area counts doubled.
    pub fn doubled(self) -> Self {
        Self { area_nr: 2 * self.area_nr, area_ntheta: 2 * self.area_ntheta, ..self }
    }

    pub fn with_area(self, area_nr: usize, area_ntheta: usize) -> Self {
        Self { area_nr, area_ntheta, ..self }
    }

    pub fn with_r_max(self, r_max: f64) -> Self {
        Self { r_max, ..self }
    }

    pub fn area_nodes(&self) -> usize {
        self.area_nr * self.area_ntheta
    }

    pub fn check(&self) -> Result<()> {
        if self.boundary_n < 4 || self.boundary_n % 2 != 0 {
            return Err(Error::InvalidBudget(format!("boundary_n = {} must be even and >= 4", self.boundary_n)));
        }
        if self.area_nr == 0 || self.area_ntheta < 3 {
            return Err(Error::InvalidBudget(format!("area rule {}x{} too small", self.area_nr, self.area_ntheta)));
        }
        if !(self.r_max > 0.0 && self.r_max < 1.0) {
            return Err(Error::InvalidBudget(format!("r_max = {} must lie in (0, 1)", self.r_max)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// dζ/ζ, giving `B`.
    PerZeta,
    /// dζ, giving `Bd`.
    Plain,
}

/// Equispaced nodes on the unit circle.
#[derive(Debug, Clone)]
pub struct BoundaryRule<T: Real> {
    pub n: usize,
    pub nodes: Vec<Complex<T>>,
    pub measure: Measure,
}

impl<T: Real> BoundaryRule<T> {
    pub fn new(n: usize, measure: Measure) -> Self {
        let nodes = (0..n)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                Complex::new(T::lit(th.cos()), T::lit(th.sin()))
            })
            .collect();
        Self { n, nodes, measure }
    }

    pub fn with_measure(&self, measure: Measure) -> Self {
        Self { measure, ..self.clone() }
    }
}

/// `B[g]` or `Bd[g]` by the trapezoid rule, summed in node order.
pub fn boundary_mean<T: Real>(
    g: impl Fn(Complex<T>) -> Result<Complex<T>>,
    rule: &BoundaryRule<T>,
) -> Result<Complex<T>> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for &zeta in &rule.nodes {
        let v = g(zeta)?;
        acc = acc + match rule.measure {
            Measure::PerZeta => v,
            Measure::Plain => v * zeta,
        };
    }
    Ok(acc / T::lit(rule.n as f64))
}

/// Cauchy integral `Bd[g/(ζ − z)]` by the trapezoid rule.
pub fn boundary_cauchy<T: Real>(
    g: impl Fn(Complex<T>) -> Result<Complex<T>>,
    z: crate::model::DiscPoint<T>,
    rule: &BoundaryRule<T>,
    r_max: T,
) -> Result<Complex<T>> {
    let z = z.require_safe(r_max)?;
    boundary_mean(|zeta| Ok(g(zeta)? * zeta / (zeta - z)), &rule.with_measure(Measure::PerZeta))
}

/// Gauss-Legendre nodes and weights mapped to [0, 1].
#[derive(Debug, Clone)]
pub struct GaussTable<T: Real> {
    pub x: Vec<T>,
    pub w: Vec<T>,
}

impl<T: Real> GaussTable<T> {
    pub fn new(n: usize) -> Result<Self> {
        let deg = NonZeroUsize::new(n).ok_or_else(|| Error::InvalidBudget("zero radial nodes".into()))?;
        let rule = GaussLegendre::new(deg);
        let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self {
            x: pairs.iter().map(|(x, _)| T::lit(0.5 * (x + 1.0))).collect(),
            w: pairs.iter().map(|(_, w)| T::lit(0.5 * w)).collect(),
        })
    }
}

/// Polar tensor rule on the unit disc around `center`.
///
/// `offsets[k] = nodes[k] − center` is kept exactly as `r e^{iθ}` so that
/// kernels singular at the center can be formed without cancellation.
#[derive(Debug, Clone)]
pub struct AreaRule<T: Real> {
    pub center: Complex<T>,
    pub n_r: usize,
    pub n_theta: usize,
    pub nodes: Vec<Complex<T>>,
    pub offsets: Vec<Complex<T>>,
    pub weights: Vec<T>,
    pub compensated: bool,
}

/// Distance from `center` to the unit circle along direction `dir`.
fn reach<T: Real>(center: Complex<T>, dir: Complex<T>) -> T {
    let a = (center.conj() * dir).re;
    let m = center.norm();
    let s = (T::one() - m) * (T::one() + m);
    let root = (a * a + s).sqrt();
    if a > T::zero() {
        s / (a + root)
    } else {
        root - a
    }
}

impl<T: Real> AreaRule<T> {
    pub fn centered(center: Complex<T>, n_theta: usize, gl: &GaussTable<T>) -> Self {
        let n_r = gl.x.len();
        let dirs: Vec<Complex<T>> = (0..n_theta)
            .map(|j| {
                let th = 2.0 * std::f64::consts::PI * j as f64 / n_theta as f64;
                Complex::new(T::lit(th.cos()), T::lit(th.sin()))
            })
            .collect();
        let reaches: Vec<T> = dirs.iter().map(|&d| reach(center, d)).collect();
        let scale = T::lit(2.0 / n_theta as f64);
        let total = n_r * n_theta;
        let mut nodes = Vec::with_capacity(total);
        let mut offsets = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        for (x, w) in gl.x.iter().zip(&gl.w) {
            for (d, big_r) in dirs.iter().zip(&reaches) {
                let r = *x * *big_r;
                let off = *d * r;
                offsets.push(off);
                nodes.push(center + off);
                weights.push(scale * r * *w * *big_r);
            }
        }
        Self { center, n_r, n_theta, nodes, offsets, weights, compensated: false }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_k h(k)` in node order; `h` receives the node index.
    pub fn sum_indexed(&self, mut h: impl FnMut(usize) -> Result<Complex<T>>) -> Result<Complex<T>> {
        let mut acc = Accumulator::new(self.compensated);
        for (k, w) in self.weights.iter().enumerate() {
            acc.add(h(k)? * *w);
        }
        Ok(acc.total())
    }

    /// `Σ w_k h(ζ_k, ζ_k − c)`: the kernel sees both the node and its exact
    /// offset from the center.
    pub fn sum_indexed_with(
        &self,
        h: impl Fn(Complex<T>, Complex<T>) -> Result<Complex<T>>,
    ) -> Result<Complex<T>> {
        self.sum_indexed(|k| h(self.nodes[k], self.offsets[k]))
    }

    /// `A[g]`.
    pub fn mean(&self, g: impl Fn(Complex<T>) -> Result<Complex<T>>) -> Result<Complex<T>> {
        self.sum_indexed(|k| g(self.nodes[k]))
    }

    /// `A[g(ζ)/(ζ − c)]` where `c` is the rule's center.
    pub fn mean_over_offset(&self, g: impl Fn(Complex<T>) -> Result<Complex<T>>) -> Result<Complex<T>> {
        self.sum_indexed(|k| Ok(g(self.nodes[k])? / self.offsets[k]))
    }
}

/// `A[g]` on the given rule.
pub fn area_mean<T: Real>(g: impl Fn(Complex<T>) -> Result<Complex<T>>, rule: &AreaRule<T>) -> Result<Complex<T>> {
    rule.mean(g)
}

/// `A[f(ζ)/(ζ − z)]` on a rule centered at `z`.
pub fn area_cauchy_kernel<T: Real>(
    f: impl Fn(Complex<T>) -> Result<Complex<T>>,
    z: crate::model::DiscPoint<T>,
    rule_center_z: &AreaRule<T>,
    r_max: T,
) -> Result<Complex<T>> {
    let zv = z.require_safe(r_max)?;
    debug_assert!((rule_center_z.center - zv).norm() <= T::epsilon() * T::lit(8.0), "rule must be centered at z");
    rule_center_z.mean_over_offset(f)
}

/// Fourier coefficients `ĝ_m = B[g ζ̄^m]`, `−n/2 ≤ m < n/2`, of boundary samples.
///
/// Boundary transforms of smooth data are evaluated from these coefficients
/// as power series, which stay accurate as |z| → 1 where the direct
/// trapezoid sum of a Cauchy kernel loses accuracy.
#[derive(Debug, Clone)]
pub struct Spectrum<T: Real> {
    n: usize,
    coef: Vec<Complex<T>>,
}

impl<T: Real> Spectrum<T> {
    pub fn from_samples(samples: &[Complex<T>], rule: &BoundaryRule<T>) -> Self {
        let n = samples.len();
        assert_eq!(n, rule.n, "one sample per boundary node");
        let half = (n / 2) as i64;
        let inv_n = T::lit(1.0 / n as f64);
        let coef = (-half..half)
            .map(|m| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for (k, g) in samples.iter().enumerate() {
                    let idx = (-(m * k as i64)).rem_euclid(n as i64) as usize;
                    acc = acc + *g * rule.nodes[idx];
                }
                acc * inv_n
            })
            .collect();
        Self { n, coef }
    }

    /// `ĝ_m`, zero outside the resolved band.
    pub fn coef(&self, m: i64) -> Complex<T> {
        let half = (self.n / 2) as i64;
        if m < -half || m >= half {
            Complex::new(T::zero(), T::zero())
        } else {
            self.coef[(m + half) as usize]
        }
    }

    /// `Σ_{m≥0} ĝ_{m+s} z^m = Bd[g ζ̄^s/(ζ − z)]`.
    pub fn cauchy(&self, z: Complex<T>, shift: i64) -> Complex<T> {
        let top = (self.n / 2) as i64 - 1;
        let mut acc = Complex::new(T::zero(), T::zero());
        for m in (0..=(top - shift).max(-1)).rev() {
            acc = acc * z + self.coef(m + shift);
        }
        acc
    }

    /// `B[g R_j(z, ζ̄)] = −Σ_{k≥j} ĝ_k z^{k−j}/k`, where
    /// `R_j(z, w) = (log(1 − zw) + Σ_{k<j} (zw)^k/k) / z^j`.
    ///
    /// `j = 0` is not allowed; `j = 1` gives `B[g log(1 − zζ̄)]/z`.
    pub fn log_remainder(&self, z: Complex<T>, j: i64) -> Complex<T> {
        assert!(j >= 1);
        let top = (self.n / 2) as i64 - 1;
        let mut acc = Complex::new(T::zero(), T::zero());
        for k in (j..=top).rev() {
            acc = acc * z + self.coef(k) / T::lit(k as f64);
        }
        -acc
    }
}

/// Shared quadrature context: rules built once per budget.
#[derive(Debug, Clone)]
pub struct Quadrature<T: Real> {
    desc: RuleDescriptor,
    gl: GaussTable<T>,
    boundary: BoundaryRule<T>,
    origin: AreaRule<T>,
    compensated: bool,
}

impl<T: Real> Quadrature<T> {
    pub fn new(desc: RuleDescriptor) -> Result<Self> {
        desc.check()?;
        let gl = GaussTable::new(desc.area_nr)?;
        let boundary = BoundaryRule::new(desc.boundary_n, Measure::PerZeta);
        let origin = AreaRule::centered(Complex::new(T::zero(), T::zero()), desc.area_ntheta, &gl);
        Ok(Self { desc, gl, boundary, origin, compensated: false })
    }

    /// Switches every area sum to Neumaier-compensated accumulation.
    pub fn compensated(mut self, on: bool) -> Self {
        self.compensated = on;
        self.origin.compensated = on;
        self
    }

    pub fn descriptor(&self) -> RuleDescriptor {
        self.desc
    }

    pub fn r_max(&self) -> T {
        T::lit(self.desc.r_max)
    }

    pub fn boundary(&self) -> &BoundaryRule<T> {
        &self.boundary
    }

    pub fn origin(&self) -> &AreaRule<T> {
        &self.origin
    }

    pub fn centered(&self, center: Complex<T>) -> AreaRule<T> {
        let mut rule = AreaRule::centered(center, self.desc.area_ntheta, &self.gl);
        rule.compensated = self.compensated;
        rule
    }

    /// Samples `g` on the boundary nodes.
    pub fn sample_boundary(&self, g: impl Fn(Complex<T>) -> Result<Complex<T>>) -> Result<Vec<Complex<T>>> {
        self.boundary.nodes.iter().map(|&z| g(z)).collect()
    }

    pub fn spectrum(&self, samples: &[Complex<T>]) -> Spectrum<T> {
        Spectrum::from_samples(samples, &self.boundary)
    }

    /// Trapezoid mean `(1/n) Σ samples_k · h(ζ_k)`.
    pub fn boundary_sum(&self, samples: &[Complex<T>], h: impl Fn(Complex<T>) -> Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (g, &zeta) in samples.iter().zip(&self.boundary.nodes) {
            acc = acc + *g * h(zeta);
        }
        acc / T::lit(self.boundary.n as f64)
    }
}
