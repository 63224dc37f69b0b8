//! Subcommand implementations. Each returns the exit status or a failure
//! carrying its exit code.

use std::sync::Arc;

use num_complex::Complex;
use serde::Serialize;
use tribvp::identities::{self, IdentityEntry};
use tribvp::model::Provenance;
use tribvp::solvers::{self, ComposedBudget, Solver};
use tribvp::verify::{self, condition_sweep, Diagnostics, Tolerances, TOLERANCE_FLOOR};
use tribvp::{
    DiscPoint, EvaluationGrid, Expression, ProblemDocument, ProblemKind, Quadrature, RuleDescriptor, SolvabilityReport,
    Validated,
};

use crate::args::{CheckArgs, Command, DataArgs, IdentitiesArgs, ManufactureArgs, MethodArg, RuleArgs, SolveArgs, VerifyArgs};
use crate::output;

type C = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    Usage = 1,
    CheckFailed = 2,
    Unachievable = 3,
}

#[derive(Debug)]
pub struct Failure {
    pub code: Exit,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: Exit::Usage, message: message.into() }
    }

    pub fn io(e: csv::Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<tribvp::Error> for Failure {
    fn from(e: tribvp::Error) -> Self {
        Self::usage(e.to_string())
    }
}

type Outcome = Result<Exit, Failure>;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Solve(a) => run_solve(a),
        Command::Check(a) => run_check(a),
        Command::Identities(a) => run_identities(a),
        Command::Verify(a) => run_verify(a),
        Command::Manufacture(a) => run_manufacture(a),
    }
}

fn require_tolerance(tol: f64, floor: f64) -> Result<(), Failure> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Failure::usage(format!("tolerance {tol} must be positive")));
    }
    if tol < floor {
        return Err(Failure {
            code: Exit::Unachievable,
            message: format!("tolerance {tol:e} is below the attainable floor {floor:e}"),
        });
    }
    Ok(())
}

fn parse_constant(flag: &str, s: &str) -> Result<[f64; 2], Failure> {
    let bad = || Failure::usage(format!("--{flag}: expected `re,im`, got `{s}`"));
    let parts: Vec<f64> = s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [re] => Ok([*re, 0.0]),
        [re, im] => Ok([*re, *im]),
        _ => Err(bad()),
    }
}

fn document(args: &DataArgs) -> Result<ProblemDocument, Failure> {
    let inline = [&args.f, &args.gamma, &args.gamma0, &args.gamma1, &args.c, &args.c1].iter().any(|o| o.is_some());
    match (&args.json, &args.problem) {
        (Some(_), Some(_)) => Err(Failure::usage("give either --json or --problem, not both")),
        (Some(path), None) => {
            if inline {
                return Err(Failure::usage("inline data flags cannot be combined with --json"));
            }
            let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            Ok(ProblemDocument::from_json(&text)?)
        }
        (None, Some(kind)) => {
            let expr = |o: &Option<String>| o.as_deref().map(Expression::parse).transpose();
            Ok(ProblemDocument {
                kind: kind.parse()?,
                f: expr(&args.f)?,
                gamma: expr(&args.gamma)?,
                gamma0: expr(&args.gamma0)?,
                gamma1: expr(&args.gamma1)?,
                c: args.c.as_deref().map(|s| parse_constant("c", s)).transpose()?,
                c1: args.c1.as_deref().map(|s| parse_constant("c1", s)).transpose()?,
            })
        }
        (None, None) => Err(Failure::usage("problem data required: --json PATH or --problem KIND with inline fields")),
    }
}

fn descriptor(base: RuleDescriptor, r: &RuleArgs) -> RuleDescriptor {
    RuleDescriptor {
        boundary_n: r.boundary_n.unwrap_or(base.boundary_n),
        area_nr: r.area_nr.unwrap_or(base.area_nr),
        area_ntheta: r.area_ntheta.unwrap_or(base.area_ntheta),
        r_max: r.r_max.unwrap_or(base.r_max),
    }
}

fn build(data: &Validated<f64>, method: MethodArg, rules: &RuleArgs) -> Result<(Box<dyn Solver<f64>>, Provenance), Failure> {
    let kind = data.kind().name().to_string();
    match method {
        MethodArg::Direct => {
            let desc = descriptor(RuleDescriptor::default(), rules);
            let quad = Arc::new(Quadrature::new(desc)?.compensated(rules.compensated));
            let provenance = Provenance { solver: kind, method: "direct".into(), rules: desc, inner_rules: None };
            Ok((solvers::direct(data, quad)?, provenance))
        }
        MethodArg::Composed => {
            let base = ComposedBudget::default();
            let budget = ComposedBudget { outer: descriptor(base.outer, rules), inner: descriptor(base.inner, rules) };
            let provenance =
                Provenance { solver: kind, method: "composed".into(), rules: budget.outer, inner_rules: Some(budget.inner) };
            Ok((solvers::composed(data, budget)?, provenance))
        }
    }
}

fn parse_grid(spec: &str) -> Result<EvaluationGrid<f64>, Failure> {
    let bad = || Failure::usage(format!("--grid: expected polar:NR,NTHETA,RMAX or spiral:N,RMAX, got `{spec}`"));
    let (shape, rest) = spec.split_once(':').ok_or_else(bad)?;
    let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
    let int = |s: &str| s.parse::<usize>().map_err(|_| bad());
    let real = |s: &str| s.parse::<f64>().map_err(|_| bad());
    let grid = match (shape, parts.as_slice()) {
        ("polar", [nr, nt, r]) => EvaluationGrid::polar(int(nr)?, int(nt)?, real(r)?)?,
        ("spiral", [n, r]) => EvaluationGrid::spiral(int(n)?, real(r)?)?,
        _ => return Err(bad()),
    };
    Ok(grid)
}

fn condition_points(solver: &dyn Solver<f64>) -> Result<Vec<DiscPoint<f64>>, Failure> {
    let r_max = solver.quadrature().r_max().min(tribvp::model::DEFAULT_R_MAX);
    Ok(EvaluationGrid::spiral(64, r_max)?.points)
}

#[derive(Serialize)]
struct Sidecar<'a> {
    provenance: &'a Provenance,
    solution: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
    conditions: &'a SolvabilityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<&'a Diagnostics>,
    points: usize,
}

fn status(pass: bool) -> Exit {
    if pass {
        Exit::Pass
    } else {
        Exit::CheckFailed
    }
}

/// Condition sweep on the direct solver. Solvability belongs to the data, so
/// it is judged by the full condition set whatever method evaluates ω.
fn sweep_conditions(data: &Validated<f64>, rules: &RuleArgs, tol: f64) -> Result<SolvabilityReport, Failure> {
    let (solver, _) = build(data, MethodArg::Direct, rules)?;
    Ok(condition_sweep(solver.as_ref(), &condition_points(solver.as_ref())?, tol)?)
}

fn run_solve(a: SolveArgs) -> Outcome {
    require_tolerance(a.tol, TOLERANCE_FLOOR)?;
    let data = document(&a.data)?.validate::<f64>()?;
    let grid = parse_grid(&a.grid)?;
    let (solver, provenance) = build(&data, a.method, &a.rules)?;
    let report = sweep_conditions(&data, &a.rules, a.tol)?;
    let values = solver.solve_all(&grid.points)?;
    let field = tribvp::SolutionField { grid, values, diagnostics: None, provenance };
    output::write_field(a.out.as_deref(), field.rows())?;
    let sidecar_path = a.sidecar.clone().or_else(|| a.out.as_deref().map(output::sidecar_path));
    let solution = report.passes();
    if let Some(path) = sidecar_path {
        let sidecar = Sidecar {
            provenance: &field.provenance,
            solution,
            note: (!solution).then_some("not a solution: solvability conditions fail"),
            conditions: &report,
            diagnostics: field.diagnostics.as_ref(),
            points: field.values.len(),
        };
        output::write_json(Some(&path), &sidecar)?;
    }
    if !solution {
        eprintln!("not a solution: worst condition residual {:.3e} exceeds {:.1e}", report.worst(), a.tol);
    }
    Ok(status(solution))
}

fn run_check(a: CheckArgs) -> Outcome {
    require_tolerance(a.tol, TOLERANCE_FLOOR)?;
    let data = document(&a.data)?.validate::<f64>()?;
    let report = sweep_conditions(&data, &a.rules, a.tol)?;
    output::write_json(a.report.as_deref(), &report)?;
    Ok(status(report.passes()))
}

fn run_verify(a: VerifyArgs) -> Outcome {
    require_tolerance(a.tol, TOLERANCE_FLOOR)?;
    let data = document(&a.data)?.validate::<f64>()?;
    let grid = parse_grid(&a.grid)?;
    let rules = RuleArgs { compensated: true, ..a.rules };
    let (solver, _) = build(&data, a.method, &rules)?;
    let tol = Tolerances { field: a.tol, ..Tolerances::default() };
    let field = |z: C| solver.value(z);
    let mut diagnostics = verify::verify_solution(&field, &data, &grid, &tol)?;
    let report = sweep_conditions(&data, &rules, tol.condition)?;
    for c in &report.per_condition {
        diagnostics.push(format!("condition {}", c.condition_id), c.sup_residual, tol.condition);
    }
    if let Some(path) = &a.field {
        let rows = output::read_field(path)?;
        let points = rows.iter().map(|r| DiscPoint::from_f64(r[0], r[1])).collect::<Result<Vec<_>, _>>()?;
        let fresh = solver.solve_all(&points)?;
        let err = rows.iter().zip(&fresh).map(|(r, v)| (C::new(r[2], r[3]) - v).norm()).fold(0.0, f64::max);
        diagnostics.push("field matches data", err, tol.field);
    }
    output::write_json(a.report.as_deref(), &diagnostics)?;
    for c in diagnostics.checks.iter().filter(|c| !c.pass) {
        eprintln!("failed: {} = {:.3e} > {:.1e}", c.name, c.value, c.tolerance);
    }
    Ok(status(diagnostics.passes()))
}

fn run_identities(a: IdentitiesArgs) -> Outcome {
    require_tolerance(a.tol, identities::ERROR_FLOOR)?;
    let entries: Vec<IdentityEntry> = if a.only.is_empty() {
        identities::catalog()
    } else {
        a.only.iter().map(|id| identities::find(id)).collect::<Result<_, _>>()?
    };
    let mut desc = descriptor(RuleDescriptor::default(), &a.rules);
    if a.doubled {
        desc = desc.doubled();
    }
    let quad = Quadrature::new(desc)?.compensated(a.rules.compensated);
    let reports = identities::sweep(&entries, a.samples, a.seed, &quad)?;
    output::write_json(a.out.as_deref(), &reports)?;
    let failing: Vec<&str> = reports.iter().filter(|r| !(r.max_err <= a.tol)).map(|r| r.id.as_str()).collect();
    if !failing.is_empty() {
        eprintln!("identities above {:.1e}: {}", a.tol, failing.join(", "));
    }
    Ok(status(failing.is_empty()))
}

fn run_manufacture(a: ManufactureArgs) -> Outcome {
    let kind: ProblemKind = a.kind.parse()?;
    let omega = Expression::parse(&a.omega)?;
    let problem = verify::manufacture(&omega, kind)?;
    output::write_json(a.out.as_deref(), &problem.document)?;
    if let Some(path) = &a.reference {
        let grid = parse_grid(&a.grid)?;
        let values = grid.points.iter().map(|p| problem.reference::<f64>(p.value())).collect::<Result<Vec<_>, _>>()?;
        let rows = grid.points.iter().zip(&values).map(|(p, v)| [p.value().re, p.value().im, v.re, v.im]);
        output::write_field(Some(path), rows)?;
    }
    Ok(Exit::Pass)
}
