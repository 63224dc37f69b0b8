//! Polynomials in z and z̄, the normal form behind symbolic differentiation.

use std::collections::BTreeMap;

use num_complex::Complex;

use super::{Func, Node};
use crate::scalar::Real;

type C64 = Complex<f64>;

/// Sum of `coef · z^p · z̄^q` keyed by `(p, q)`; zero coefficients are dropped.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    terms: BTreeMap<(u32, u32), C64>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: C64, p: u32, q: u32) -> Self {
        let mut out = Self::zero();
        out.push(c, p, q);
        out
    }

    fn push(&mut self, c: C64, p: u32, q: u32) {
        let slot = self.terms.entry((p, q)).or_insert(C64::new(0.0, 0.0));
        *slot += c;
        if *slot == C64::new(0.0, 0.0) {
            self.terms.remove(&(p, q));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), C64)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value if the polynomial has no z or z̄ dependence.
    pub fn as_constant(&self) -> Option<C64> {
        match self.terms.len() {
            0 => Some(C64::new(0.0, 0.0)),
            1 => self.terms.get(&(0, 0)).copied(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((p, q), c) in other.terms() {
            out.push(c, p, q);
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = Self::zero();
        for ((p, q), c) in self.terms() {
            out.push(c * s, p, q);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((p1, q1), c1) in self.terms() {
            for ((p2, q2), c2) in other.terms() {
                out.push(c1 * c2, p1 + p2, q1 + q2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(C64::new(1.0, 0.0));
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for ((p, q), c) in self.terms() {
            out.push(c.conj(), q, p);
        }
        out
    }

    /// ∂/∂z̄.
    pub fn dbar(&self) -> Self {
        let mut out = Self::zero();
        for ((p, q), c) in self.terms() {
            if q > 0 {
                out.push(c * q as f64, p, q - 1);
            }
        }
        out
    }

    /// ∂/∂z.
    pub fn dz(&self) -> Self {
        let mut out = Self::zero();
        for ((p, q), c) in self.terms() {
            if p > 0 {
                out.push(c * p as f64, p - 1, q);
            }
        }
        out
    }

    /// Restriction to the unit circle, where z z̄ = 1: every monomial collapses
    /// to a pure power of z or of z̄.
    pub fn on_circle(&self) -> Self {
        let mut out = Self::zero();
        for ((p, q), c) in self.terms() {
            let m = p.min(q);
            out.push(c, p - m, q - m);
        }
        out
    }

    pub fn value_at_origin(&self) -> C64 {
        self.terms.get(&(0, 0)).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn degree(&self) -> (u32, u32) {
        self.terms().fold((0, 0), |(a, b), ((p, q), _)| (a.max(p), b.max(q)))
    }

    pub fn eval<T: Real>(&self, z: Complex<T>) -> Complex<T> {
        let (dp, dq) = self.degree();
        let zp = powers(z, dp);
        let zq = powers(z.conj(), dq);
        let mut acc = Complex::new(T::zero(), T::zero());
        for ((p, q), c) in self.terms() {
            let c = Complex::new(T::lit(c.re), T::lit(c.im));
            acc = acc + c * zp[p as usize] * zq[q as usize];
        }
        acc
    }

    /// Tries to read a syntax tree as a polynomial. Division is allowed only
    /// by nonzero constants; log and exp are rejected.
    pub fn from_node(node: &Node) -> Option<Self> {
        Some(match node {
            Node::Num(x) => Self::constant(C64::new(*x, 0.0)),
            Node::I => Self::constant(C64::new(0.0, 1.0)),
            Node::Z => Self::monomial(C64::new(1.0, 0.0), 1, 0),
            Node::Neg(a) => Self::from_node(a)?.scale(C64::new(-1.0, 0.0)),
            Node::Add(a, b) => Self::from_node(a)?.add(&Self::from_node(b)?),
            Node::Sub(a, b) => Self::from_node(a)?.sub(&Self::from_node(b)?),
            Node::Mul(a, b) => Self::from_node(a)?.mul(&Self::from_node(b)?),
            Node::Div(a, b) => {
                let d = Self::from_node(b)?.as_constant()?;
                if d == C64::new(0.0, 0.0) {
                    return None;
                }
                Self::from_node(a)?.scale(d.inv())
            }
            Node::Pow(a, n) => Self::from_node(a)?.pow(*n),
            Node::Call(func, a) => {
                let p = Self::from_node(a)?;
                match func {
                    Func::Conj => p.conj(),
                    Func::Re => p.add(&p.conj()).scale(C64::new(0.5, 0.0)),
                    Func::Im => p.sub(&p.conj()).scale(C64::new(0.0, -0.5)),
                    Func::Abs2 => p.mul(&p.conj()),
                    Func::Log | Func::Exp => return None,
                }
            }
        })
    }

    /// Canonical syntax tree: terms in ascending `(p, q)` order.
    pub fn to_node(&self) -> Node {
        let mut out: Option<Node> = None;
        for ((p, q), c) in self.terms() {
            let (negative, body) = term_node(c, p, q);
            out = Some(match (out, negative) {
                (None, false) => body,
                (None, true) => Node::Neg(Box::new(body)),
                (Some(acc), false) => Node::Add(Box::new(acc), Box::new(body)),
                (Some(acc), true) => Node::Sub(Box::new(acc), Box::new(body)),
            });
        }
        out.unwrap_or(Node::Num(0.0))
    }
}

fn powers<T: Real>(z: Complex<T>, n: u32) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = Complex::new(T::one(), T::zero());
    out.push(acc);
    for _ in 0..n {
        acc = acc * z;
        out.push(acc);
    }
    out
}

fn var_pow(base: Node, n: u32) -> Option<Node> {
    match n {
        0 => None,
        1 => Some(base),
        _ => Some(Node::Pow(Box::new(base), n)),
    }
}

/// Returns (is_negated, |term|) so the caller can emit `a - b` instead of `a + -b`.
fn term_node(c: C64, p: u32, q: u32) -> (bool, Node) {
    let (negative, coef) = if c.im == 0.0 {
        (c.re < 0.0, Some(Node::Num(c.re.abs())).filter(|_| c.re.abs() != 1.0))
    } else if c.re == 0.0 {
        let mag = c.im.abs();
        let node = if mag == 1.0 { Node::I } else { Node::Mul(Box::new(Node::Num(mag)), Box::new(Node::I)) };
        (c.im < 0.0, Some(node))
    } else {
        let re = Node::Num(c.re);
        let im = Node::Mul(Box::new(Node::Num(c.im.abs())), Box::new(Node::I));
        let re = if c.re < 0.0 { Node::Neg(Box::new(Node::Num(-c.re))) } else { re };
        let sum = if c.im < 0.0 { Node::Sub(Box::new(re), Box::new(im)) } else { Node::Add(Box::new(re), Box::new(im)) };
        (false, Some(sum))
    };
    let factors: Vec<Node> = [
        coef,
        var_pow(Node::Z, p),
        var_pow(Node::Call(Func::Conj, Box::new(Node::Z)), q),
    ]
    .into_iter()
    .flatten()
    .collect();
    let node = factors
        .into_iter()
        .reduce(|a, b| Node::Mul(Box::new(a), Box::new(b)))
        .unwrap_or(Node::Num(1.0));
    (negative, node)
}
