//! Complex-valued expressions in z and z̄ with Wirtinger derivatives.
//!
//! Expressions are parsed from text, evaluated in any [`Real`] precision and,
//! when they are polynomials in z and z̄, differentiated symbolically. The
//! symbolic path goes through a polynomial normal form, so derivative output
//! is canonical: `dbar("conj(z)^3")` prints as `3*conj(z)^2`.

mod parse;
mod poly;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use poly::Poly;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Conj,
    Re,
    Im,
    Abs2,
    Log,
    Exp,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "conj" => Func::Conj,
            "re" => Func::Re,
            "im" => Func::Im,
            "abs2" => Func::Abs2,
            "log" => Func::Log,
            "exp" => Func::Exp,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Conj => "conj",
            Func::Re => "re",
            Func::Im => "im",
            Func::Abs2 => "abs2",
            Func::Log => "log",
            Func::Exp => "exp",
        }
    }
}

/// Syntax tree node. Literals are non-negative reals; `i` is its own node.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    I,
    Z,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, u32),
    Call(Func, Box<Node>),
}

impl Node {
    fn precedence(&self) -> u8 {
        match self {
            Node::Add(..) | Node::Sub(..) => 1,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Neg(..) => 3,
            Node::Pow(..) => 4,
            Node::Num(_) | Node::I | Node::Z | Node::Call(..) => 5,
        }
    }

    fn eval<T: Real>(&self, z: Complex<T>) -> Result<Complex<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        Ok(match self {
            Node::Num(x) => Complex::new(T::lit(*x), T::zero()),
            Node::I => Complex::new(T::zero(), T::one()),
            Node::Z => z,
            Node::Neg(a) => -a.eval(z)?,
            Node::Add(a, b) => a.eval(z)? + b.eval(z)?,
            Node::Sub(a, b) => a.eval(z)? - b.eval(z)?,
            Node::Mul(a, b) => a.eval(z)? * b.eval(z)?,
            Node::Div(a, b) => {
                let d = b.eval(z)?;
                if d == zero {
                    return Err(Error::Domain("division by zero".into()));
                }
                a.eval(z)? / d
            }
            Node::Pow(a, n) => a.eval(z)?.powu(*n),
            Node::Call(func, a) => {
                let v = a.eval(z)?;
                match func {
                    Func::Conj => v.conj(),
                    Func::Re => Complex::new(v.re, T::zero()),
                    Func::Im => Complex::new(v.im, T::zero()),
                    Func::Abs2 => Complex::new(v.norm_sqr(), T::zero()),
                    Func::Exp => v.exp(),
                    Func::Log => {
                        if v == zero {
                            return Err(Error::Domain("log of zero".into()));
                        }
                        v.ln()
                    }
                }
            }
        })
    }

    /// Rewrites `abs2(e)` as `e*conj(e)`.
    fn normalized(&self) -> Node {
        let b = |n: &Node| Box::new(n.normalized());
        match self {
            Node::Num(_) | Node::I | Node::Z => self.clone(),
            Node::Neg(a) => Node::Neg(b(a)),
            Node::Add(x, y) => Node::Add(b(x), b(y)),
            Node::Sub(x, y) => Node::Sub(b(x), b(y)),
            Node::Mul(x, y) => Node::Mul(b(x), b(y)),
            Node::Div(x, y) => Node::Div(b(x), b(y)),
            Node::Pow(x, n) => Node::Pow(b(x), *n),
            Node::Call(Func::Abs2, a) => {
                let a = a.normalized();
                Node::Mul(Box::new(a.clone()), Box::new(Node::Call(Func::Conj, Box::new(a))))
            }
            Node::Call(f, a) => Node::Call(*f, b(a)),
        }
    }

    /// First node that keeps the tree out of the polynomial subset.
    fn non_polynomial_part(&self) -> Option<String> {
        match self {
            Node::Num(_) | Node::I | Node::Z => None,
            Node::Call(f @ (Func::Log | Func::Exp), _) => Some(f.name().to_string()),
            Node::Div(a, b) => match Poly::from_node(b).and_then(|p| p.as_constant()) {
                Some(d) if d.norm() > 0.0 => a.non_polynomial_part(),
                _ => Some("division".to_string()),
            },
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.non_polynomial_part(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
                a.non_polynomial_part().or_else(|| b.non_polynomial_part())
            }
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, n: &Node, parens: bool| -> fmt::Result {
            if parens {
                write!(f, "(")?;
                n.write(f)?;
                write!(f, ")")
            } else {
                n.write(f)
            }
        };
        let p = self.precedence();
        match self {
            Node::Num(x) if *x < 0.0 => write!(f, "({x})"),
            Node::Num(x) => write!(f, "{x}"),
            Node::I => write!(f, "i"),
            Node::Z => write!(f, "z"),
            Node::Neg(a) => {
                write!(f, "-")?;
                child(f, a, a.precedence() < p)
            }
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                let op = match self {
                    Node::Add(..) => " + ",
                    Node::Sub(..) => " - ",
                    Node::Mul(..) => "*",
                    _ => "/",
                };
                child(f, a, a.precedence() < p)?;
                write!(f, "{op}")?;
                child(f, b, b.precedence() <= p)
            }
            Node::Pow(a, n) => {
                child(f, a, a.precedence() < 5)?;
                write!(f, "^{n}")
            }
            Node::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write(f)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f)
    }
}

/// A parsed expression in z and conj(z).
#[derive(Debug, Clone)]
pub struct Expression {
    root: Node,
    poly: Option<Poly>,
}

impl PartialEq for Expression {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root
    }
}

impl Expression {
    pub fn parse(src: &str) -> Result<Self> {
        Ok(Self::from_node(parse::parse(src)?))
    }

    pub fn from_node(root: Node) -> Self {
        let poly = Poly::from_node(&root.normalized());
        Self { root, poly }
    }

    pub fn from_poly(p: &Poly) -> Self {
        Self { root: p.to_node(), poly: Some(p.clone()) }
    }

    pub fn constant(c: Complex<f64>) -> Self {
        Self::from_poly(&Poly::constant(c))
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Same expression with every `abs2(e)` spelled out as `e*conj(e)`.
    pub fn normalized(&self) -> Self {
        Self::from_node(self.root.normalized())
    }

    /// Polynomial normal form, if the expression is in the symbolic subset.
    pub fn as_poly(&self) -> Result<&Poly> {
        self.poly.as_ref().ok_or_else(|| {
            Error::UnsupportedNode(self.root.normalized().non_polynomial_part().unwrap_or_else(|| "?".into()))
        })
    }

    pub fn eval<T: Real>(&self, z: Complex<T>) -> Result<Complex<T>> {
        match &self.poly {
            Some(p) => Ok(p.eval(z)),
            None => self.root.eval(z),
        }
    }

    /// ∂/∂z̄ of a polynomial expression.
    pub fn dbar(&self) -> Result<Self> {
        Ok(Self::from_poly(&self.as_poly()?.dbar()))
    }

    /// ∂/∂z of a polynomial expression.
    pub fn dz(&self) -> Result<Self> {
        Ok(Self::from_poly(&self.as_poly()?.dz()))
    }

    /// Outward normal derivative on the unit circle, z ∂z + z̄ ∂z̄.
    pub fn normal_derivative(&self) -> Result<Self> {
        let p = self.as_poly()?;
        let z = Poly::monomial(Complex::new(1.0, 0.0), 1, 0);
        Ok(Self::from_poly(&z.mul(&p.dz()).add(&z.conj().mul(&p.dbar()))))
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl FromStr for Expression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for Expression {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Expression {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn ev(src: &str, z: Complex<f64>) -> Result<Complex<f64>> {
        Expression::parse(src)?.eval(z)
    }

    #[test]
    fn evaluates_spec_examples() {
        assert!((ev("3*conj(z)^2", cx(0.5, 0.0)).unwrap() - cx(0.75, 0.0)).norm() < 1e-15);
        let zb = Complex::from_polar(1.0, 0.7);
        assert!(ev("abs2(z) - 1", zb).unwrap().norm() < 1e-15);
        assert_eq!(ev("i*z", cx(2.0, 0.0)).unwrap(), cx(0.0, 2.0));
        assert_eq!(ev("exp(0)", cx(0.3, 0.1)).unwrap(), cx(1.0, 0.0));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(ev("1/z", cx(0.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(ev("log(z)", cx(0.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(ev("1/0", cx(0.5, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn unknown_identifier() {
        assert_eq!(Expression::parse("z + w").unwrap_err(), Error::UnknownIdentifier("w".into()));
        assert_eq!(Expression::parse("sin(z)").unwrap_err(), Error::UnknownIdentifier("sin".into()));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match Expression::parse("z + * 2") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Expression::parse(""), Err(Error::Syntax { .. })));
        assert!(matches!(Expression::parse("z^1.5"), Err(Error::Syntax { .. })));
        assert!(matches!(Expression::parse("(z"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn precedence() {
        // ^ binds tighter than unary minus, which binds tighter than *.
        assert_eq!(ev("-z^2", cx(3.0, 0.0)).unwrap(), cx(-9.0, 0.0));
        assert_eq!(ev("2 - 3 - 4", cx(0.0, 0.0)).unwrap(), cx(-5.0, 0.0));
        assert_eq!(ev("8/4/2", cx(0.0, 0.0)).unwrap(), cx(1.0, 0.0));
        assert_eq!(ev("2*-z", cx(1.0, 0.0)).unwrap(), cx(-2.0, 0.0));
    }

    #[test]
    fn symbolic_derivatives() {
        let d = |s: &str| Expression::parse(s).unwrap().dbar().unwrap().to_string();
        let dz = |s: &str| Expression::parse(s).unwrap().dz().unwrap().to_string();
        let nu = |s: &str| Expression::parse(s).unwrap().normal_derivative().unwrap().to_string();
        assert_eq!(d("conj(z)^3"), "3*conj(z)^2");
        assert_eq!(d("z"), "0");
        assert_eq!(d("z*conj(z)"), "z");
        assert_eq!(dz("z^2"), "2*z");
        assert_eq!(dz("conj(z)"), "0");
        assert_eq!(dz("z*conj(z)"), "conj(z)");
        assert_eq!(nu("conj(z)^3"), "3*conj(z)^3");
        assert_eq!(nu("5"), "0");
        assert_eq!(nu("z"), "z");
        assert_eq!(d("abs2(z)^2"), "2*z^2*conj(z)");
    }

    #[test]
    fn unsupported_nodes() {
        for (src, what) in [("log(z)", "log"), ("exp(conj(z))", "exp"), ("1/z", "division")] {
            assert_eq!(Expression::parse(src).unwrap().dbar().unwrap_err(), Error::UnsupportedNode(what.into()));
        }
        assert!(Expression::parse("z/2").unwrap().dbar().is_ok());
    }

    #[test]
    fn complex_coefficients_print_and_reparse() {
        let e = Expression::parse("(2 - 3*i)*z*conj(z) + i*z^2 - 0.5").unwrap();
        let printed = e.to_string();
        let again = Expression::parse(&printed).unwrap();
        assert_eq!(again.to_string(), printed);
        let z: Complex<f64> = cx(0.3, -0.2);
        assert!((e.eval(z).unwrap() - again.eval(z).unwrap()).norm() < 1e-15);
        let canon = Expression::from_poly(e.as_poly().unwrap());
        assert!((canon.eval(z).unwrap() - e.eval(z).unwrap()).norm() < 1e-15);
    }
}
