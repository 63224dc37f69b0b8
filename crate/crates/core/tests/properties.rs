use std::sync::Arc;

use num_complex::Complex;
use proptest::prelude::*;
use tribvp::expr::Poly;
use tribvp::ops::fd_wirtinger_dbar;
use tribvp::solvers::direct;
use tribvp::verify::condition_sweep;
use tribvp::{DiscPoint, EvaluationGrid, Expression, ProblemData, ProblemDocument, ProblemKind, Quadrature, RuleDescriptor};

type C = Complex<f64>;

fn coef() -> impl Strategy<Value = C> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C::new(re, im))
}

/// Polynomials in z, z̄ of total degree at most 4.
fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((0u32..=4, 0u32..=4, coef()), 1..6).prop_map(|terms| {
        terms
            .into_iter()
            .filter(|(p, q, _)| p + q <= 4)
            .fold(Poly::zero(), |acc, (p, q, c)| acc.add(&Poly::monomial(c, p, q)))
    })
}

fn point(r_max: f64) -> impl Strategy<Value = C> {
    (0.0..r_max, 0.0..std::f64::consts::TAU).prop_map(|(r, th)| C::from_polar(r, th))
}

fn kind() -> impl Strategy<Value = ProblemKind> {
    prop::sample::select(ProblemKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symbolic_dbar_matches_finite_differences(p in poly(), z in point(0.9)) {
        let e = Expression::from_poly(&p);
        let d = e.dbar().unwrap();
        let fd = fd_wirtinger_dbar(|w| e.eval(w), DiscPoint::new(z).unwrap(), 1e-4).unwrap();
        let exact: C = d.eval(z).unwrap();
        prop_assert!((fd - exact).norm() < 1e-6 * (1.0 + exact.norm()), "{} vs {}", fd, exact);
    }

    #[test]
    fn printing_then_parsing_preserves_values(p in poly(), z in point(0.99)) {
        let e = Expression::from_poly(&p);
        let back = Expression::parse(&e.to_string()).unwrap();
        let (a, b): (C, C) = (e.eval(z).unwrap(), back.eval(z).unwrap());
        prop_assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
        prop_assert_eq!(back.to_string(), e.to_string());
    }

    #[test]
    fn normal_derivative_is_radial_derivative(p in poly(), z in point(0.9)) {
        prop_assume!(z.norm() > 0.05);
        let e = Expression::from_poly(&p);
        let nu = e.normal_derivative().unwrap();
        let h = 1e-5;
        let r = z.norm();
        let dir = z / r;
        let fd: C = (e.eval(dir * (r + h)).unwrap() - e.eval(dir * (r - h)).unwrap()) / (2.0 * h) * r;
        let exact: C = nu.eval(z).unwrap();
        prop_assert!((fd - exact).norm() < 1e-6 * (1.0 + exact.norm()));
    }

    #[test]
    fn disc_points_are_exactly_the_open_disc(re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let z = C::new(re, im);
        prop_assert_eq!(DiscPoint::new(z).is_ok(), z.norm() < 1.0);
    }

    #[test]
    fn disc_point_rejects_non_finite(re in prop::num::f64::ANY, im in prop::num::f64::ANY) {
        let ok = DiscPoint::new(C::new(re, im)).is_ok();
        prop_assert!(!ok || (re.is_finite() && im.is_finite()));
    }

    #[test]
    fn validation_accepts_exactly_the_kind_fields(k in kind(), mask in 0u8..64) {
        let full = ProblemData::<f64>::zeros(ProblemKind::TriNdn);
        let mut d = ProblemData::<f64>::empty(k);
        let names = ["f", "gamma", "gamma0", "gamma1", "c", "c1"];
        for (i, name) in names.iter().enumerate() {
            if mask & (1 << i) != 0 {
                match *name {
                    "f" => d.f = full.f.clone(),
                    "gamma" => d.gamma = full.gamma.clone(),
                    "gamma0" => d.gamma0 = full.gamma0.clone(),
                    "gamma1" => d.gamma1 = full.gamma1.clone(),
                    "c" => d.c = full.c,
                    _ => d.c1 = full.c1,
                }
            }
        }
        let expected = names.iter().enumerate().all(|(i, n)| (mask & (1 << i) != 0) == k.uses(n));
        prop_assert_eq!(d.validate().is_ok(), expected);
    }

    #[test]
    fn documents_round_trip_through_json(k in kind(), p in poly(), c in coef()) {
        let e = Expression::from_poly(&p);
        let pick = |name: &str| if k.uses(name) { Some(e.clone()) } else { None };
        let constant = |name: &str| if k.uses(name) { Some([c.re, c.im]) } else { None };
        let doc = ProblemDocument {
            kind: k,
            f: pick("f"),
            gamma: pick("gamma"),
            gamma0: pick("gamma0"),
            gamma1: pick("gamma1"),
            c: constant("c"),
            c1: constant("c1"),
        };
        let back = ProblemDocument::from_json(&doc.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), doc.to_json());
        prop_assert!(back.validate::<f64>().is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn condition_sups_grow_with_the_sample_set(p in poly(), split in 1usize..63) {
        let quad = Arc::new(Quadrature::new(RuleDescriptor::new(128, 16, 64, 0.8)).unwrap());
        let e = Expression::from_poly(&p);
        let doc = ProblemDocument {
            kind: ProblemKind::NeumannCr,
            f: Some(e.clone()),
            gamma: Some(e),
            gamma0: None,
            gamma1: None,
            c: Some([0.0, 0.0]),
            c1: None,
        };
        let solver = direct(&doc.validate().unwrap(), quad).unwrap();
        let points = EvaluationGrid::<f64>::condition_sample().points;
        let part = condition_sweep(solver.as_ref(), &points[..split], 1e-6).unwrap();
        let all = condition_sweep(solver.as_ref(), &points, 1e-6).unwrap();
        for (a, b) in part.per_condition.iter().zip(&all.per_condition) {
            prop_assert!(a.sup_residual <= b.sup_residual);
        }
    }
}
