//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex;
use tribvp::identities::{catalog, convergence, DEFAULT_SEED};
use tribvp::ops::{cauchy_transform, fd_wirtinger_dbar, pompeiu_t};
use tribvp::quad::{boundary_cauchy, BoundaryRule, Measure};
use tribvp::solvers::{composed, direct, ComposedBudget, Solver};
use tribvp::verify::{condition_sweep, field_error, manufacture, random_document, verify_solution, Tolerances};
use tribvp::{DiscPoint, EvaluationGrid, Expression, ProblemDocument, ProblemKind, Quadrature, RuleDescriptor, Validated};

#[allow(dead_code)]
#[path = "../../core/tests/reconciliation.rs"]
mod reconciliation;

type C = Complex<f64>;

const MANUFACTURED: [&str; 5] =
    ["conj(z)^3", "conj(z)^2*z", "conj(z)^2 + z^2", "z*conj(z)^2", "conj(z)^3 + 2*i*conj(z)*z^2"];

const KINDS: [ProblemKind; 5] = [
    ProblemKind::DirichletCr,
    ProblemKind::NeumannCr,
    ProblemKind::BitsadzeDn,
    ProblemKind::TriNdn,
    ProblemKind::TriDnd,
];

const TRI: [ProblemKind; 2] = [ProblemKind::TriNdn, ProblemKind::TriDnd];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn default_quad() -> Arc<Quadrature<f64>> {
    Arc::new(Quadrature::new(RuleDescriptor::default()).unwrap())
}

fn expr(s: &str) -> Expression {
    Expression::parse(s).unwrap()
}

fn manufactured(omega: &str, kind: ProblemKind) -> (Validated<f64>, Expression) {
    let m = manufacture(&expr(omega), kind).unwrap();
    (m.data().unwrap(), m.omega)
}

fn field_of(s: &dyn Solver<f64>) -> impl Fn(C) -> tribvp::Result<C> + Sync + '_ {
    move |z| s.value(z)
}

fn identity_suite() -> Verdict {
    let rows = convergence(&catalog(), 100, DEFAULT_SEED, &default_quad()).unwrap();
    let worst = rows.iter().map(|r| r.max_err).fold(0.0, f64::max);
    let bad: Vec<&str> = rows.iter().filter(|r| r.max_err > 1e-6 || !r.passes()).map(|r| r.id.as_str()).collect();
    verdict(
        bad.is_empty(),
        format!("{} entries, 100 samples, worst max err {worst:.1e} (tol 1e-6), refinement ok except {bad:?}", rows.len()),
    )
}

fn manufactured_round_trips() -> Verdict {
    let quad = default_quad();
    let conditions = EvaluationGrid::condition_sample();
    let grid = EvaluationGrid::polar(7, 16, 0.7).unwrap();
    let (mut worst_cond, mut worst_field): (f64, f64) = (0.0, 0.0);
    for omega in MANUFACTURED {
        for kind in KINDS {
            let (data, reference) = manufactured(omega, kind);
            let s = direct(&data, quad.clone()).unwrap();
            worst_cond = worst_cond.max(condition_sweep(s.as_ref(), &conditions.points, 1e-6).unwrap().worst());
            let err = field_error(&field_of(s.as_ref()), &|z| reference.eval(z), &grid).unwrap();
            worst_field = worst_field.max(err);
        }
    }
    verdict(
        worst_cond <= 1e-6 && worst_field <= 1e-4,
        format!("25 problems, condition sup {worst_cond:.1e} (tol 1e-6), field error {worst_field:.1e} (tol 1e-4)"),
    )
}

fn composed_equivalence() -> Verdict {
    let quad = default_quad();
    let grid = EvaluationGrid::polar(2, 8, 0.7).unwrap();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for kind in TRI {
        let mut docs: Vec<ProblemDocument> =
            MANUFACTURED.iter().map(|w| manufacture(&expr(w), kind).unwrap().document).collect();
        docs.extend((1..=5).map(|seed| random_document(kind, seed)));
        for doc in docs {
            let data = doc.validate().unwrap();
            let d = direct(&data, quad.clone()).unwrap();
            let c = composed(&data, ComposedBudget::default()).unwrap();
            let err = field_error(&field_of(d.as_ref()), &field_of(c.as_ref()), &grid).unwrap();
            worst = worst.max(err);
            count += 1;
        }
    }
    verdict(worst <= 1e-5, format!("{count} problems, sup |direct - composed| {worst:.1e} (tol 1e-5)"))
}

fn residuals() -> Verdict {
    let quad = Arc::new(Quadrature::new(RuleDescriptor::default()).unwrap().compensated(true));
    let grid = EvaluationGrid::polar(2, 6, 0.7).unwrap();
    let tol = Tolerances::default();
    let mut failures = Vec::new();
    let mut worst_trace: f64 = 0.0;
    let mut worst_pde = [0.0f64; 3];
    for omega in MANUFACTURED {
        for kind in [ProblemKind::DirichletCr, ProblemKind::NeumannCr, ProblemKind::TriNdn, ProblemKind::TriDnd] {
            let (data, _) = manufactured(omega, kind);
            let s = direct(&data, quad.clone()).unwrap();
            let diag = verify_solution(&field_of(s.as_ref()), &data, &grid, &tol).unwrap();
            for c in &diag.checks {
                if c.name.starts_with("pde") {
                    let slot = &mut worst_pde[kind.order() as usize - 1];
                    *slot = slot.max(c.value);
                } else {
                    worst_trace = worst_trace.max(c.value);
                }
                if !c.pass {
                    failures.push(format!("{kind} {omega}: {} = {:.1e}", c.name, c.value));
                }
            }
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "first-order pde {:.1e} (tol 1e-4), tri pde {:.1e} (tol 1e-2), traces {worst_trace:.1e} (tol 1e-5){}",
            worst_pde[0],
            worst_pde[2],
            if failures.is_empty() { String::new() } else { format!("; failing {failures:?}") }
        ),
    )
}

fn cli_check_exit(args: &[&str]) -> i32 {
    let out = Command::new(env!("CARGO_BIN_EXE_tribvp")).arg("check").args(args).output().unwrap();
    out.status.code().unwrap_or(-1)
}

fn negative_controls() -> Verdict {
    let quad = default_quad();
    let points = EvaluationGrid::condition_sample().points;
    let mut doc_ndn = manufacture(&expr("conj(z)^3"), ProblemKind::TriNdn).unwrap().document;
    doc_ndn.gamma = Some(expr("3*conj(z)^3 + 0.1*conj(z)^2"));
    let mut doc_dnd = manufacture(&expr("conj(z)^2*z"), ProblemKind::TriDnd).unwrap().document;
    doc_dnd.gamma0 = Some(expr("conj(z) + 0.1*conj(z)^2"));
    let mut sups = Vec::new();
    for doc in [&doc_ndn, &doc_dnd] {
        let s = direct(&doc.validate().unwrap(), quad.clone()).unwrap();
        sups.push(condition_sweep(s.as_ref(), &points, 1e-6).unwrap().worst());
    }
    let ndn = [
        "--problem", "ndn", "--f", "6", "--gamma", "3*conj(z)^3 + 0.1*conj(z)^2", "--gamma0", "3*conj(z)^2", "--gamma1",
        "6*conj(z)", "--c", "0,0", "--c1", "0,0",
    ];
    let dnd = [
        "--problem", "dnd", "--f", "0", "--gamma", "2*z", "--gamma0", "conj(z) + 0.1*conj(z)^2", "--gamma1", "4", "--c", "0,0",
    ];
    let codes = [cli_check_exit(&ndn), cli_check_exit(&dnd)];
    verdict(
        sups.iter().all(|&s| s >= 1e-2) && codes == [2, 2],
        format!("NDN gamma sup {:.1e}, DND gamma0 sup {:.1e} (need >= 1e-2); CLI exit codes {codes:?}", sups[0], sups[1]),
    )
}

fn base_pins() -> Verdict {
    let quad = default_quad();
    let grid = EvaluationGrid::polar(7, 16, 0.7).unwrap();
    let doc = |json: &str| ProblemDocument::from_json(json).unwrap().validate::<f64>().unwrap();
    let cases = [
        (doc(r#"{"kind":"dirichlet_cr","f":"1","gamma":"conj(z)"}"#), "conj(z)", 1e-8),
        (doc(r#"{"kind":"neumann_cr","f":"0","gamma":"z","c":[0,0]}"#), "z", 1e-8),
        (manufactured("conj(z)^2", ProblemKind::BitsadzeDn).0, "conj(z)^2", 1e-6),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (data, omega, tol) in cases {
        let s = direct(&data, quad.clone()).unwrap();
        let reference = expr(omega);
        let err = field_error(&field_of(s.as_ref()), &|z| reference.eval(z), &grid).unwrap();
        pass &= err <= tol;
        parts.push(format!("{} {err:.1e} (tol {tol:.0e})", data.kind()));
    }
    verdict(pass, parts.join(", "))
}

fn operator_properties() -> Verdict {
    let quad = default_quad();
    let probes: Vec<DiscPoint<f64>> = EvaluationGrid::polar(3, 8, 0.6).unwrap().points;
    let f = |z: C| Ok(z * z.conj() + z.conj().powu(2) + 1.0);
    let mut pompeiu: f64 = 0.0;
    let mut cauchy: f64 = 0.0;
    for &p in &probes {
        let d = fd_wirtinger_dbar(|z| pompeiu_t(f, DiscPoint::new(z)?, &quad), p, 1e-4).unwrap();
        pompeiu = pompeiu.max((d - f(p.value()).unwrap()).norm());
        let g = |w: C| Ok(w.conj().powu(2) + w.powu(3) + w.exp());
        let d = fd_wirtinger_dbar(|z| cauchy_transform(g, DiscPoint::new(z)?, &quad), p, 1e-4).unwrap();
        cauchy = cauchy.max(d.norm());
    }

    // A[ζ^p ζ̄^q] = δ_pq/(p + 1) on the origin rule and on an offset rule.
    let mut moments: f64 = 0.0;
    for rule in [quad.origin().clone(), quad.centered(C::new(0.5, -0.3))] {
        for p in 0..=6 {
            for q in 0..=6 {
                let got = rule.mean(|w| Ok(w.powu(p) * w.conj().powu(q))).unwrap();
                let want = if p == q { 1.0 / (p as f64 + 1.0) } else { 0.0 };
                moments = moments.max((got - want).norm());
            }
        }
    }

    // Bd[e^ζ/(ζ − z)] = e^z, with error decaying faster than any power.
    let z = C::new(0.5, 0.2);
    let point = DiscPoint::new(z).unwrap();
    let errs: Vec<f64> = [8, 16, 32, 64]
        .iter()
        .map(|&n| {
            let rule = BoundaryRule::new(n, Measure::PerZeta);
            (boundary_cauchy(|w: C| Ok(w.exp()), point, &rule, 0.8).unwrap() - z.exp()).norm()
        })
        .collect();
    let spectral = errs.windows(2).all(|w| w[1] <= (w[0] * w[0]).max(1e-14)) && errs[3] <= 1e-13;

    verdict(
        pompeiu <= 1e-4 && cauchy <= 1e-6 && moments <= 1e-10 && spectral,
        format!(
            "Pompeiu {pompeiu:.1e} (tol 1e-4), Cauchy dbar {cauchy:.1e} (tol 1e-6), moments {moments:.1e} (tol 1e-10), \
             exp boundary errors n=8..64 {:?}",
            errs.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>()
        ),
    )
}

/// Ledger entries that must each name a passing forcing check.
const REQUIRED: [&str; 5] = [
    "ndn_condition_one_uses_c1",
    "dnd_condition_three_grouping",
    "decay_factor_sign",
    "aux4_reads_conj_zeta",
    "l2_viii_reads_t_minus_z",
];

fn ledger() -> Verdict {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../RECONCILIATION.md");
    let Ok(text) = std::fs::read_to_string(path) else {
        return verdict(false, "RECONCILIATION.md missing");
    };
    let named: Vec<&str> = text
        .split('`')
        .skip(1)
        .step_by(2)
        .filter(|s| s.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') && s.contains('_'))
        .collect();
    let missing: Vec<&str> = REQUIRED.iter().copied().filter(|r| !named.contains(r)).collect();
    let unknown: Vec<&str> =
        named.iter().copied().filter(|n| !reconciliation::FORCING.iter().any(|(f, _)| f == n)).collect();
    let failing: Vec<&str> = reconciliation::FORCING
        .iter()
        .filter(|(name, _)| named.contains(name))
        .filter(|(_, check)| catch_unwind(*check).is_err())
        .map(|(name, _)| *name)
        .collect();
    let ran = reconciliation::FORCING.iter().filter(|(n, _)| named.contains(n)).count();
    verdict(
        missing.is_empty() && unknown.is_empty() && failing.is_empty(),
        format!("{ran} forcing checks named and run; missing {missing:?}, unknown {unknown:?}, failing {failing:?}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("identity suite", identity_suite),
        ("manufactured round trips", manufactured_round_trips),
        ("direct/composed equivalence", composed_equivalence),
        ("PDE and boundary residuals", residuals),
        ("negative controls", negative_controls),
        ("base pins", base_pins),
        ("operator properties", operator_properties),
        ("reconciliation ledger", ledger),
    ];
    let start = Instant::now();
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| verdict(false, "panicked"));
        all &= v.pass;
        println!(
            "{} criterion {}: {name}: {} [{:.1}s]",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance {} in {:.1}s", if all { "passed" } else { "FAILED" }, start.elapsed().as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}
