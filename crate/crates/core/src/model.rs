//! Domain types shared by every module: points, data functions, problem
//! bundles, evaluation grids and reports.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::scalar::{cx, to_c64, Real};

/// Default safe radius for condition and solution sampling.
pub const DEFAULT_R_MAX: f64 = 0.8;

/// A point strictly inside the unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint<T: Real>(Complex<T>);

impl<T: Real> DiscPoint<T> {
    pub fn new(z: Complex<T>) -> Result<Self> {
        let m = z.norm();
        if m < T::one() {
            Ok(Self(z))
        } else {
            Err(Error::OutsideDisc { modulus: m.to_f64_lossy() })
        }
    }

    pub fn from_f64(re: f64, im: f64) -> Result<Self> {
        Self::new(cx(re, im))
    }

    pub fn origin() -> Self {
        Self(Complex::new(T::zero(), T::zero()))
    }

    pub fn value(self) -> Complex<T> {
        self.0
    }

    pub fn modulus(self) -> T {
        self.0.norm()
    }

    pub fn is_safe(self, r_max: T) -> bool {
        self.0.norm() <= r_max
    }

    /// Fails with `NearBoundary` outside the safe radius.
    pub fn require_safe(self, r_max: T) -> Result<Complex<T>> {
        if self.is_safe(r_max) {
            Ok(self.0)
        } else {
            Err(Error::NearBoundary { modulus: self.0.norm().to_f64_lossy(), r_max: r_max.to_f64_lossy() })
        }
    }
}

/// Anything that can be evaluated at a complex point.
pub trait Field<T: Real>: Send + Sync {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>>;

    /// Value on the unit circle. Fields defined by an interior formula
    /// override this with their prescribed boundary datum.
    fn trace(&self, zeta: Complex<T>) -> Result<Complex<T>> {
        self.eval(zeta)
    }
}

impl<T: Real> Field<T> for Expression {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        Expression::eval(self, z)
    }
}

/// Adapter for infallible closures.
pub struct FnField<F>(pub F);

impl<T: Real, F: Fn(Complex<T>) -> Complex<T> + Send + Sync> Field<T> for FnField<F> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        Ok((self.0)(z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainTag {
    Boundary,
    ClosedDisc,
}

/// A data function together with where it may be evaluated.
#[derive(Clone)]
pub struct ComplexFunction<T: Real> {
    field: Arc<dyn Field<T>>,
    domain: DomainTag,
}

impl<T: Real> fmt::Debug for ComplexFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComplexFunction").field("domain", &self.domain).finish_non_exhaustive()
    }
}

impl<T: Real> ComplexFunction<T> {
    pub fn new(field: Arc<dyn Field<T>>, domain: DomainTag) -> Self {
        Self { field, domain }
    }

    pub fn disc(field: impl Field<T> + 'static) -> Self {
        Self::new(Arc::new(field), DomainTag::ClosedDisc)
    }

    pub fn boundary(field: impl Field<T> + 'static) -> Self {
        Self::new(Arc::new(field), DomainTag::Boundary)
    }

    pub fn zero(domain: DomainTag) -> Self {
        Self::new(Arc::new(FnField(|_: Complex<T>| Complex::new(T::zero(), T::zero()))), domain)
    }

    pub fn domain(&self) -> DomainTag {
        self.domain
    }

    pub fn field(&self) -> &Arc<dyn Field<T>> {
        &self.field
    }

    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        let m = z.norm();
        let slack = T::epsilon() * T::lit(64.0);
        let ok = match self.domain {
            DomainTag::Boundary => (m - T::one()).abs() <= slack,
            DomainTag::ClosedDisc => m <= T::one() + slack,
        };
        if !ok {
            return Err(match self.domain {
                DomainTag::Boundary => Error::OffCircle { modulus: m.to_f64_lossy() },
                DomainTag::ClosedDisc => Error::OutsideDisc { modulus: m.to_f64_lossy() },
            });
        }
        self.field.eval(z)
    }
}

impl<T: Real> Field<T> for ComplexFunction<T> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        ComplexFunction::eval(self, z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    DirichletCr,
    NeumannCr,
    BitsadzeDn,
    TriNdn,
    TriDnd,
}

/// Names of the optional fields of a problem bundle, in document order.
pub const FIELD_NAMES: [&str; 6] = ["gamma", "gamma0", "gamma1", "c", "c1", "f"];

impl ProblemKind {
    pub const ALL: [ProblemKind; 5] =
        [ProblemKind::DirichletCr, ProblemKind::NeumannCr, ProblemKind::BitsadzeDn, ProblemKind::TriNdn, ProblemKind::TriDnd];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::DirichletCr => "dirichlet_cr",
            ProblemKind::NeumannCr => "neumann_cr",
            ProblemKind::BitsadzeDn => "bitsadze_dn",
            ProblemKind::TriNdn => "tri_ndn",
            ProblemKind::TriDnd => "tri_dnd",
        }
    }

    /// Power of ∂z̄ in the differential equation.
    pub fn order(self) -> u32 {
        match self {
            ProblemKind::DirichletCr | ProblemKind::NeumannCr => 1,
            ProblemKind::BitsadzeDn => 2,
            ProblemKind::TriNdn | ProblemKind::TriDnd => 3,
        }
    }

    pub fn condition_count(self) -> usize {
        match self {
            ProblemKind::DirichletCr | ProblemKind::NeumannCr => 1,
            ProblemKind::BitsadzeDn => 2,
            ProblemKind::TriNdn | ProblemKind::TriDnd => 3,
        }
    }

    /// Whether the named field belongs to this kind.
    pub fn uses(self, field: &str) -> bool {
        let used: &[&str] = match self {
            ProblemKind::DirichletCr => &["f", "gamma"],
            ProblemKind::NeumannCr => &["f", "gamma", "c"],
            ProblemKind::BitsadzeDn => &["f", "gamma0", "gamma1", "c"],
            ProblemKind::TriNdn => &["f", "gamma", "gamma0", "gamma1", "c", "c1"],
            ProblemKind::TriDnd => &["f", "gamma", "gamma0", "gamma1", "c"],
        };
        used.contains(&field)
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "dirichlet_cr" | "dcr" | "dirichlet" => ProblemKind::DirichletCr,
            "neumann_cr" | "ncr" | "neumann" => ProblemKind::NeumannCr,
            "bitsadze_dn" | "bdn" | "bitsadze" => ProblemKind::BitsadzeDn,
            "tri_ndn" | "ndn" => ProblemKind::TriNdn,
            "tri_dnd" | "dnd" => ProblemKind::TriDnd,
            other => return Err(Error::Document(format!("unknown problem kind `{other}`"))),
        })
    }
}

/// Data bundle for one problem. Presence of each field must match the kind;
/// see [`ProblemData::validate`].
#[derive(Debug, Clone)]
pub struct ProblemData<T: Real> {
    pub kind: ProblemKind,
    pub f: Option<ComplexFunction<T>>,
    pub gamma: Option<ComplexFunction<T>>,
    pub gamma0: Option<ComplexFunction<T>>,
    pub gamma1: Option<ComplexFunction<T>>,
    pub c: Option<Complex<T>>,
    pub c1: Option<Complex<T>>,
}

impl<T: Real> ProblemData<T> {
    pub fn empty(kind: ProblemKind) -> Self {
        Self { kind, f: None, gamma: None, gamma0: None, gamma1: None, c: None, c1: None }
    }

    /// Bundle with every field the kind needs set to zero.
    pub fn zeros(kind: ProblemKind) -> Self {
        let mut d = Self::empty(kind);
        let zero = Complex::new(T::zero(), T::zero());
        let b = || Some(ComplexFunction::zero(DomainTag::Boundary));
        d.f = Some(ComplexFunction::zero(DomainTag::ClosedDisc));
        d.gamma = b().filter(|_| kind.uses("gamma"));
        d.gamma0 = b().filter(|_| kind.uses("gamma0"));
        d.gamma1 = b().filter(|_| kind.uses("gamma1"));
        d.c = Some(zero).filter(|_| kind.uses("c"));
        d.c1 = Some(zero).filter(|_| kind.uses("c1"));
        d
    }

    fn present(&self, field: &str) -> bool {
        match field {
            "f" => self.f.is_some(),
            "gamma" => self.gamma.is_some(),
            "gamma0" => self.gamma0.is_some(),
            "gamma1" => self.gamma1.is_some(),
            "c" => self.c.is_some(),
            "c1" => self.c1.is_some(),
            _ => false,
        }
    }

    /// Checks that exactly the fields required by the kind are present.
    pub fn validate(self) -> Result<Validated<T>> {
        for field in FIELD_NAMES {
            let wanted = self.kind.uses(field);
            let have = self.present(field);
            let kind = self.kind.name().to_string();
            if wanted && !have {
                return Err(Error::MissingField { kind, field: field.into() });
            }
            if have && !wanted {
                return Err(Error::ExtraField { kind, field: field.into() });
            }
        }
        Ok(Validated(self))
    }
}

/// Problem data whose field set is known to match its kind.
#[derive(Debug, Clone)]
pub struct Validated<T: Real>(ProblemData<T>);

impl<T: Real> Validated<T> {
    pub fn kind(&self) -> ProblemKind {
        self.0.kind
    }

    pub fn data(&self) -> &ProblemData<T> {
        &self.0
    }

    fn get<'a, V>(&self, v: &'a Option<V>, name: &str) -> Result<&'a V> {
        v.as_ref().ok_or_else(|| Error::MissingField { kind: self.0.kind.name().into(), field: name.into() })
    }

    pub fn f(&self) -> Result<&ComplexFunction<T>> {
        self.get(&self.0.f, "f")
    }

    pub fn gamma(&self) -> Result<&ComplexFunction<T>> {
        self.get(&self.0.gamma, "gamma")
    }

    pub fn gamma0(&self) -> Result<&ComplexFunction<T>> {
        self.get(&self.0.gamma0, "gamma0")
    }

    pub fn gamma1(&self) -> Result<&ComplexFunction<T>> {
        self.get(&self.0.gamma1, "gamma1")
    }

    pub fn c(&self) -> Result<Complex<T>> {
        self.get(&self.0.c, "c").copied()
    }

    pub fn c1(&self) -> Result<Complex<T>> {
        self.get(&self.0.c1, "c1").copied()
    }
}

/// JSON form of a problem: expressions as strings, constants as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub kind: ProblemKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Expression>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Expression>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma0: Option<Expression>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma1: Option<Expression>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<[f64; 2]>,
}

impl ProblemDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn to_data<T: Real>(&self) -> ProblemData<T> {
        let disc = |e: &Option<Expression>| e.clone().map(ComplexFunction::disc);
        let bdry = |e: &Option<Expression>| e.clone().map(ComplexFunction::boundary);
        let constant = |c: &Option<[f64; 2]>| c.map(|[re, im]| cx(re, im));
        ProblemData {
            kind: self.kind,
            f: disc(&self.f),
            gamma: bdry(&self.gamma),
            gamma0: bdry(&self.gamma0),
            gamma1: bdry(&self.gamma1),
            c: constant(&self.c),
            c1: constant(&self.c1),
        }
    }

    pub fn validate<T: Real>(&self) -> Result<Validated<T>> {
        self.to_data().validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GridDescriptor {
    /// Origin plus `n_r` rings of `n_theta` points out to `r_max`.
    Polar { n_r: usize, n_theta: usize, r_max: f64 },
    /// Golden-angle spiral with points spread uniformly by area.
    Spiral { n: usize, r_max: f64 },
    Explicit,
}

/// Points at which a field or a condition is sampled.
#[derive(Debug, Clone)]
pub struct EvaluationGrid<T: Real> {
    pub points: Vec<DiscPoint<T>>,
    pub descriptor: GridDescriptor,
}

impl<T: Real> EvaluationGrid<T> {
    pub fn polar(n_r: usize, n_theta: usize, r_max: f64) -> Result<Self> {
        let mut points = vec![DiscPoint::origin()];
        for i in 1..=n_r {
            let r = r_max * i as f64 / n_r as f64;
            for j in 0..n_theta {
                let th = 2.0 * std::f64::consts::PI * j as f64 / n_theta as f64;
                points.push(DiscPoint::from_f64(r * th.cos(), r * th.sin())?);
            }
        }
        Ok(Self { points, descriptor: GridDescriptor::Polar { n_r, n_theta, r_max } })
    }

    pub fn spiral(n: usize, r_max: f64) -> Result<Self> {
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        let points = (0..n)
            .map(|k| {
                let r = r_max * ((k as f64 + 0.5) / n as f64).sqrt();
                let th = golden * k as f64;
                DiscPoint::from_f64(r * th.cos(), r * th.sin())
            })
            .collect::<Result<_>>()?;
        Ok(Self { points, descriptor: GridDescriptor::Spiral { n, r_max } })
    }

    pub fn explicit(points: Vec<DiscPoint<T>>) -> Self {
        Self { points, descriptor: GridDescriptor::Explicit }
    }

    /// The fixed 64-point spiral used for condition sweeps.
    pub fn condition_sample() -> Self {
        Self::spiral(64, DEFAULT_R_MAX).expect("spiral stays inside the disc")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Sup of one condition's residual over the sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionSup {
    pub condition_id: String,
    pub sup_residual: f64,
    pub argmax: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolvabilityReport {
    pub kind: ProblemKind,
    pub per_condition: Vec<ConditionSup>,
    pub tolerance_used: f64,
}

impl SolvabilityReport {
    pub fn passes(&self) -> bool {
        self.per_condition.iter().all(|c| c.sup_residual <= self.tolerance_used)
    }

    pub fn worst(&self) -> f64 {
        self.per_condition.iter().map(|c| c.sup_residual).fold(0.0, f64::max)
    }
}

/// Where a solution field came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub solver: String,
    pub method: String,
    pub rules: crate::quad::RuleDescriptor,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_rules: Option<crate::quad::RuleDescriptor>,
}

/// Values of a solution on a grid.
#[derive(Debug, Clone)]
pub struct SolutionField<T: Real> {
    pub grid: EvaluationGrid<T>,
    pub values: Vec<Complex<T>>,
    pub diagnostics: Option<crate::verify::Diagnostics>,
    pub provenance: Provenance,
}

impl<T: Real> SolutionField<T> {
    /// Rows `(x, y, re, im)` in grid order.
    pub fn rows(&self) -> impl Iterator<Item = [f64; 4]> + '_ {
        self.grid.points.iter().zip(&self.values).map(|(p, v)| {
            let z = to_c64(p.value());
            let v = to_c64(*v);
            [z.re, z.im, v.re, v.im]
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(json: &str) -> ProblemDocument {
        ProblemDocument::from_json(json).unwrap()
    }

    #[test]
    fn accepts_full_ndn_bundle() {
        let d = doc(r#"{"kind":"tri_ndn","f":"6","gamma":"3*conj(z)^3","gamma0":"3*conj(z)^2",
                        "gamma1":"6*conj(z)","c":[0,0],"c1":[0,0]}"#);
        assert!(d.validate::<f64>().is_ok());
    }

    #[test]
    fn missing_and_extra_fields() {
        let e = doc(r#"{"kind":"dirichlet_cr","f":"1"}"#).validate::<f64>().unwrap_err();
        assert_eq!(e, Error::MissingField { kind: "dirichlet_cr".into(), field: "gamma".into() });
        let e = doc(r#"{"kind":"neumann_cr","f":"1","gamma":"z"}"#).validate::<f64>().unwrap_err();
        assert_eq!(e, Error::MissingField { kind: "neumann_cr".into(), field: "c".into() });
        let e = doc(r#"{"kind":"dirichlet_cr","f":"1","gamma":"z","c1":[1,0]}"#).validate::<f64>().unwrap_err();
        assert_eq!(e, Error::ExtraField { kind: "dirichlet_cr".into(), field: "c1".into() });
    }

    #[test]
    fn document_round_trip() {
        let d = doc(r#"{"kind":"bitsadze_dn","f":"2","gamma0":"conj(z)^2","gamma1":"2*conj(z)","c":[0,1.5]}"#);
        assert_eq!(ProblemDocument::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn disc_point_rejects_boundary() {
        assert!(DiscPoint::<f64>::from_f64(1.0, 0.0).is_err());
        assert!(DiscPoint::<f64>::from_f64(0.6, 0.8).is_err());
        assert!(DiscPoint::<f64>::from_f64(0.6, 0.79).is_ok());
        let p = DiscPoint::<f64>::from_f64(0.85, 0.0).unwrap();
        assert!(matches!(p.require_safe(0.8), Err(Error::NearBoundary { .. })));
    }

    #[test]
    fn boundary_functions_refuse_interior_points() {
        let g = ComplexFunction::<f64>::boundary(Expression::parse("z").unwrap());
        assert!(g.eval(cx(0.5, 0.0)).is_err());
        assert!(g.eval(Complex::from_polar(1.0, 0.3)).is_ok());
    }

    #[test]
    fn grids_stay_inside() {
        let g = EvaluationGrid::<f64>::polar(4, 8, 0.7).unwrap();
        assert_eq!(g.len(), 33);
        let s = EvaluationGrid::<f64>::condition_sample();
        assert_eq!(s.len(), 64);
        assert!(s.points.iter().all(|p| p.modulus() <= 0.8));
    }
}
