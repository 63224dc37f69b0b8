//! Catalog of the closed-form integral identities behind the solution
//! formulas, each checked as quadrature left side against closed right side.
//!
//! Notation: `A[g] = (1/π)∬ g`, `B[g]` the boundary mean of `g` and `Bd[g]`
//! the boundary mean of `g ζ`; `t` stands for the second point `z̃`.
//! Integrands with two poles `1/((t − ζ) ζ (ζ − z))` are split by partial
//! fractions so that each piece runs on a rule centered at its own pole.
//!
//! Where a printed form needed correcting, the entry keeps the printed
//! reading too, so tests can show that it disagrees with quadrature.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DiscPoint;
use crate::ops::{log1m, log_remainder};
use crate::quad::{boundary_mean, Measure, Quadrature};

type C = Complex<f64>;

/// Seed of the default sample set.
pub const DEFAULT_SEED: u64 = 7;

/// Below this an identity counts as converged; refinement is not required
/// to improve it further.
pub const CONVERGED: f64 = 1e-9;

/// Smallest tolerance a sweep can meet at default budgets.
pub const ERROR_FLOOR: f64 = 1e-12;

type Lhs = fn(&Ctx, C, C) -> Result<C>;
type Rhs = fn(C, C) -> C;

/// One identity: quadrature left side, closed right side.
#[derive(Clone, Copy)]
pub struct IdentityEntry {
    pub id: &'static str,
    pub statement: &'static str,
    lhs: Lhs,
    rhs: Rhs,
    /// Singular at `z = 0`, `t = 0` or `t = z` (partial fractions).
    distinct: bool,
    printed_lhs: Option<Lhs>,
    printed_rhs: Option<Rhs>,
}

impl std::fmt::Debug for IdentityEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentityEntry").field("id", &self.id).field("statement", &self.statement).finish()
    }
}

impl IdentityEntry {
    pub fn has_printed_variant(&self) -> bool {
        self.printed_lhs.is_some() || self.printed_rhs.is_some()
    }
}

/// Left side, right side and their distance at one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub lhs: C,
    pub rhs: C,
    pub err: f64,
}

/// Worst sample of one entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub id: String,
    pub max_err: f64,
    pub argmax_z: [f64; 2],
    pub argmax_zt: [f64; 2],
}

/// Max error of one entry at two budgets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub id: String,
    pub max_err: f64,
    pub max_err_doubled: f64,
}

impl ConvergenceRow {
    /// Doubling improved the error at least fourfold, or it had converged.
    pub fn passes(&self) -> bool {
        self.max_err <= CONVERGED || self.max_err >= 4.0 * self.max_err_doubled
    }
}

struct Ctx<'a> {
    quad: &'a Quadrature<f64>,
}

impl Ctx<'_> {
    /// `A[g]` on the origin rule.
    fn a0(&self, g: impl Fn(C) -> C) -> Result<C> {
        self.quad.origin().mean(|s| Ok(g(s)))
    }

    /// `A[g/(ζ − c)]` on a rule centered at `c`.
    fn a_over(&self, c: C, g: impl Fn(C) -> C) -> Result<C> {
        self.quad.centered(c).mean_over_offset(|s| Ok(g(s)))
    }

    fn b(&self, g: impl Fn(C) -> C) -> Result<C> {
        boundary_mean(|s| Ok(g(s)), self.quad.boundary())
    }

    fn bd(&self, g: impl Fn(C) -> C) -> Result<C> {
        boundary_mean(|s| Ok(g(s)), &self.quad.boundary().with_measure(Measure::Plain))
    }

    /// `A[num/((t − ζ) ζ (ζ − z))]`.
    fn pf3(&self, z: C, t: C, num: impl Fn(C) -> C + Copy) -> Result<C> {
        Ok(-self.a0(|s| num(s) / s)? / (t * z) - self.a_over(t, num)? / (t * (t - z))
            + self.a_over(z, num)? / ((t - z) * z))
    }
}

fn one() -> C {
    C::new(1.0, 0.0)
}

/// `log(1 − s t̄)/s`, regular at `s = 0`.
fn r1(s: C, tb: C) -> C {
    log_remainder(s, tb, 1)
}

/// `(1 − |z|²)² log(1 − z t̄)/(2z²) + t̄/(2z)` without the division by `z`.
fn log_bracket(z: C, t: C) -> C {
    let (zb, tb, z2) = (z.conj(), t.conj(), z.norm_sqr());
    let decay = 1.0 - z2;
    log_remainder(z, tb, 2) * (decay * decay / 2.0) + tb * zb * (2.0 - z2) / 2.0
}

fn entry(id: &'static str, statement: &'static str, lhs: Lhs, rhs: Rhs) -> IdentityEntry {
    IdentityEntry { id, statement, lhs, rhs, distinct: false, printed_lhs: None, printed_rhs: None }
}

/// All cataloged identities in catalog order.
pub fn catalog() -> Vec<IdentityEntry> {
    vec![
        entry("L2.i", "A[ζ̄ z̄/(1 − z̄ζ)²] = z̄²", |c, z, _| {
            let zb = z.conj();
            c.a0(|s| s.conj() * zb / (one() - zb * s).powu(2))
        }, |z, _| z.conj().powu(2)),
        entry(
            "L2.ii",
            "A[z̄/((t − ζ)(1 − z̄ζ)²)] = (z̄t̄ − 2z̄² + z̄³t)/(1 − z̄t)²",
            |c, z, t| {
                let zb = z.conj();
                Ok(-c.a_over(t, |s| zb / (one() - zb * s).powu(2))?)
            },
            |z, t| {
                let (zb, tb) = (z.conj(), t.conj());
                (zb * tb - zb * zb * 2.0 + zb.powu(3) * t) / (one() - zb * t).powu(2)
            },
        ),
        entry(
            "L2.iii",
            "A[(1 − |ζ|²) log(1 − ζt̄)/ζ · z̄/(1 − z̄ζ)²] = −z̄t̄/2",
            |c, z, t| {
                let (zb, tb) = (z.conj(), t.conj());
                c.a0(|s| r1(s, tb) * (1.0 - s.norm_sqr()) * zb / (one() - zb * s).powu(2))
            },
            |z, t| -z.conj() * t.conj() / 2.0,
        ),
        IdentityEntry {
            printed_rhs: Some(|z, t| {
                let (zb, tb, a2) = (z.conj(), t.conj(), t.norm_sqr());
                (zb * a2 * (t * 2.0 - zb * 4.0 + t * zb * zb * 2.0 - tb) + zb * zb * 2.0) / ((one() - zb * t).powu(2) * 2.0)
            }),
            ..entry(
                "L2.iv",
                "A[(|t|² − |ζ|²)/(t − ζ) · z̄/(1 − z̄ζ)²] = z̄(|t|²t̄ − 4|t|²z̄ + 2|t|²z̄²t − z̄²t + 2z̄)/(2(1 − z̄t)²)",
                |c, z, t| {
                    let (zb, a2) = (z.conj(), t.norm_sqr());
                    Ok(-c.a_over(t, |s| (a2 - s.norm_sqr()) * zb / (one() - zb * s).powu(2))?)
                },
                |z, t| {
                    let (zb, tb, a2) = (z.conj(), t.conj(), t.norm_sqr());
                    zb * (tb * a2 - zb * a2 * 4.0 + zb * zb * t * a2 * 2.0 - zb * zb * t + zb * 2.0)
                        / ((one() - zb * t).powu(2) * 2.0)
                },
            )
        },
        entry(
            "L2.iv.a",
            "Bd[ζ̄/(ζ³(ζ̄ − z̄)²(1 − tζ̄))] = (2z̄ − tz̄²)/(1 − z̄t)²",
            |c, z, t| {
                let zb = z.conj();
                c.bd(|s| s.conj() / (s.powu(3) * (s.conj() - zb).powu(2) * (one() - t * s.conj())))
            },
            |z, t| {
                let zb = z.conj();
                (zb * 2.0 - t * zb * zb) / (one() - zb * t).powu(2)
            },
        ),
        IdentityEntry {
            printed_rhs: Some(|z, t| z.conj() / (one() - z.conj() * t).powu(2)),
            ..entry(
                "L2.iv.b",
                "Bd[ζ ζ̄²/(2(ζ − t)(1 − z̄ζ)²)] = (2z̄ − z̄²t)/(2(1 − z̄t)²)",
                |c, z, t| {
                    let zb = z.conj();
                    c.bd(|s| s * s.conj().powu(2) / ((s - t) * (one() - zb * s).powu(2) * 2.0))
                },
                |z, t| {
                    let zb = z.conj();
                    (zb * 2.0 - zb * zb * t) / ((one() - zb * t).powu(2) * 2.0)
                },
            )
        },
        entry(
            "L2.v",
            "A[ζ̄ z/(ζ(ζ − z))] = −z̄²/2",
            |c, z, _| Ok(c.a_over(z, |s| s.conj())? - c.a0(|s| s.conj() / s)?),
            |z, _| -z.conj().powu(2) / 2.0,
        ),
        IdentityEntry {
            distinct: true,
            ..entry(
                "L2.vi",
                "A[z/((t − ζ)ζ(ζ − z))] = (t̄ − z̄)/(t − z) − t̄/t",
                |c, z, t| Ok(z * c.pf3(z, t, |_| one())?),
                |z, t| (t.conj() - z.conj()) / (t - z) - t.conj() / t,
            )
        },
        entry(
            "L2.vii",
            "(1/2)A[(ζ + z)/((ζ − z)ζ) · (1 − |ζ|²) log(1 − ζt̄)/ζ] = (1 − |z|²)² log(1 − zt̄)/(2z²) + t̄/(2z) + t̄²/8",
            |c, z, t| {
                let tb = t.conj();
                let g = |s: C| r1(s, tb) * (1.0 - s.norm_sqr());
                Ok((c.a_over(z, |s| g(s) * 2.0)? - c.a0(|s| g(s) / s)?) / 2.0)
            },
            |z, t| log_bracket(z, t) + t.conj().powu(2) / 8.0,
        ),
        IdentityEntry {
            distinct: true,
            ..entry(
                "L2.viii",
                "A[(|t|² − |ζ|²)z/((t − ζ)ζ(ζ − z))] = |t|²[(t̄ − z̄)/(t − z) − t̄/t] − z(t̄² − z̄²)/(2(t − z))",
                |c, z, t| {
                    let a2 = t.norm_sqr();
                    Ok(z * c.pf3(z, t, |s| C::new(a2 - s.norm_sqr(), 0.0))?)
                },
                |z, t| {
                    let (zb, tb, a2) = (z.conj(), t.conj(), t.norm_sqr());
                    ((tb - zb) / (t - z) - tb / t) * a2 - z * (tb * tb - zb * zb) / ((t - z) * 2.0)
                },
            )
        },
        IdentityEntry {
            printed_rhs: Some(|z, t| {
                let (tb, z2) = (t.conj(), z.norm_sqr());
                tb / 2.0 + tb * tb * 0.75 + log1m(z * tb) * (1.0 - z2).powi(2) / (z * z * 2.0)
            }),
            ..entry(
                "L2.ix",
                "A[(1 − |ζ|²) log(1 − ζt̄)/ζ · z/(ζ(ζ − z))] = (1 − |z|²)² log(1 − zt̄)/(2z²) + t̄/(2z) + t̄²/4",
                |c, z, t| {
                    let tb = t.conj();
                    let g = |s: C| r1(s, tb) * (1.0 - s.norm_sqr());
                    Ok(c.a_over(z, g)? - c.a0(|s| g(s) / s)?)
                },
                |z, t| log_bracket(z, t) + t.conj().powu(2) / 4.0,
            )
        },
        IdentityEntry {
            distinct: true,
            printed_lhs: Some(|c, z, t| {
                let zb = z.conj();
                Ok(c.a0(|s| (1.0 - s.norm_sqr()) / ((one() - zb * s) * s))? / (t - z))
            }),
            ..entry(
                "L3.i",
                "A[(1 − |ζ|²)/(ζ(1 − z̄ζ)(t − ζ))] = (2t̄ − t(t̄² + z̄²))/(2t(1 − z̄t))",
                |c, z, t| {
                    let zb = z.conj();
                    let g = |s: C| (1.0 - s.norm_sqr()) / (one() - zb * s);
                    Ok((c.a0(|s| g(s) / s)? - c.a_over(t, g)?) / t)
                },
                |z, t| {
                    let (zb, tb) = (z.conj(), t.conj());
                    (tb * 2.0 - t * (tb * tb + zb * zb)) / (t * (one() - zb * t) * 2.0)
                },
            )
        },
        entry(
            "L3.ii",
            "B[ζ̄/(t − ζ) · (1 − |z|²) log(1 − zζ̄)/z] = 0",
            |c, z, t| {
                let decay = 1.0 - z.norm_sqr();
                c.b(|s| s.conj() / (t - s) * log_remainder(z, s.conj(), 1) * decay)
            },
            |_, _| C::new(0.0, 0.0),
        ),
        IdentityEntry {
            distinct: true,
            printed_rhs: Some(|z, t| {
                let (zb, tb, a2, z2) = (z.conj(), t.conj(), t.norm_sqr(), z.norm_sqr());
                (tb * (a2 - 2.0 * z2) + zb * zb * (2.0 - t)) / (t * (t - z) * 2.0)
            }),
            ..entry(
                "L3.iii",
                "A[(|ζ|² − |z|²)/(ζ(ζ − z)(t − ζ))] = (t̄(|t|² − 2|z|²) + z̄²t)/(2t(t − z))",
                |c, z, t| {
                    let z2 = z.norm_sqr();
                    c.pf3(z, t, |s| C::new(s.norm_sqr() - z2, 0.0))
                },
                |z, t| {
                    let (zb, tb, a2, z2) = (z.conj(), t.conj(), t.norm_sqr(), z.norm_sqr());
                    (tb * (a2 - 2.0 * z2) + zb * zb * t) / (t * (t - z) * 2.0)
                },
            )
        },
        IdentityEntry {
            printed_lhs: Some(|c, z, t| {
                let zb = z.conj();
                c.b(|s| t.conj() / ((t - s) * (one() - zb * s)))
            }),
            ..entry(
                "AUX.1",
                "B[ζ̄/((t − ζ)(1 − z̄ζ))] = −z̄²/(1 − z̄t)",
                |c, z, t| {
                    let zb = z.conj();
                    c.b(|s| s.conj() / ((t - s) * (one() - zb * s)))
                },
                |z, t| -z.conj().powu(2) / (one() - z.conj() * t),
            )
        },
        IdentityEntry {
            printed_rhs: Some(|z, t| z.conj().powu(2) * (1.0 - t.norm_sqr()) / (one() - z * t)),
            ..entry(
                "AUX.2",
                "B[(|t|² − |ζ|²)ζ̄/((t − ζ)(1 − z̄ζ))] = z̄²(1 − |t|²)/(1 − z̄t)",
                |c, z, t| {
                    let (zb, a2) = (z.conj(), t.norm_sqr());
                    c.b(|s| s.conj() * (a2 - s.norm_sqr()) / ((t - s) * (one() - zb * s)))
                },
                |z, t| z.conj().powu(2) * (1.0 - t.norm_sqr()) / (one() - z.conj() * t),
            )
        },
        entry(
            "AUX.3",
            "B[(|t|² − |ζ|²)ζ̄ log(1 − zζ̄)/(t − ζ)] = 0",
            |c, z, t| {
                let a2 = t.norm_sqr();
                c.b(|s| s.conj() * (a2 - s.norm_sqr()) * log1m(z * s.conj()) / (t - s))
            },
            |_, _| C::new(0.0, 0.0),
        ),
        IdentityEntry {
            printed_lhs: Some(|c, z, t| {
                let zb = z.conj();
                c.b(|_| t.conj().powu(2) / (one() - zb * t))
            }),
            ..entry(
                "AUX.4",
                "B[ζ̄²/(1 − z̄ζ)] = z̄²",
                |c, z, _| {
                    let zb = z.conj();
                    c.b(|s| s.conj().powu(2) / (one() - zb * s))
                },
                |z, _| z.conj().powu(2),
            )
        },
        entry(
            "AUX.5",
            "B[ζ̄ log(1 − zζ̄)/(t − ζ)] = 0",
            |c, z, t| c.b(|s| s.conj() * log1m(z * s.conj()) / (t - s)),
            |_, _| C::new(0.0, 0.0),
        ),
        entry(
            "AUX.6",
            "B[ζ̄² log(1 − zζ̄)] = 0",
            |c, z, _| c.b(|s| s.conj().powu(2) * log1m(z * s.conj())),
            |_, _| C::new(0.0, 0.0),
        ),
    ]
}

/// Looks an entry up by id.
pub fn find(id: &str) -> Result<IdentityEntry> {
    catalog().into_iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

fn admit(entry: &IdentityEntry, z: C, t: C, quad: &Quadrature<f64>) -> Result<()> {
    let r_max = quad.r_max();
    DiscPoint::new(z)?.require_safe(r_max)?;
    DiscPoint::new(t)?.require_safe(r_max)?;
    if entry.distinct && (z.norm() == 0.0 || t.norm() == 0.0 || z == t) {
        return Err(Error::Domain(format!("{} needs z, z̃ nonzero and distinct", entry.id)));
    }
    Ok(())
}

/// Evaluates both sides of `entry` at `(z, t)`.
pub fn check(entry: &IdentityEntry, z: C, t: C, quad: &Quadrature<f64>) -> Result<Outcome> {
    admit(entry, z, t, quad)?;
    let lhs = (entry.lhs)(&Ctx { quad }, z, t)?;
    let rhs = (entry.rhs)(z, t);
    Ok(Outcome { lhs, rhs, err: (lhs - rhs).norm() })
}

/// Like [`check`] but with the printed reading of the entry, where one differs.
pub fn check_printed(entry: &IdentityEntry, z: C, t: C, quad: &Quadrature<f64>) -> Result<Option<Outcome>> {
    if !entry.has_printed_variant() {
        return Ok(None);
    }
    admit(entry, z, t, quad)?;
    let lhs = (entry.printed_lhs.unwrap_or(entry.lhs))(&Ctx { quad }, z, t)?;
    let rhs = (entry.printed_rhs.unwrap_or(entry.rhs))(z, t);
    Ok(Some(Outcome { lhs, rhs, err: (lhs - rhs).norm() }))
}

/// Reproducible `(z, z̃)` pairs, uniform by area in `|·| ≤ r_max`.
pub fn samples(n: usize, seed: u64, r_max: f64) -> Vec<(C, C)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut point = || {
        let r = r_max * rng.gen::<f64>().sqrt();
        C::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>())
    };
    (0..n).map(|_| (point(), point())).collect()
}

/// Max error of each entry over `n_samples` seeded pairs.
pub fn sweep(entries: &[IdentityEntry], n_samples: usize, seed: u64, quad: &Quadrature<f64>) -> Result<Vec<IdentityReport>> {
    if n_samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let pairs = samples(n_samples, seed, quad.r_max());
    entries
        .par_iter()
        .map(|entry| {
            let errs: Vec<f64> =
                pairs.par_iter().map(|&(z, t)| check(entry, z, t, quad).map(|o| o.err)).collect::<Result<_>>()?;
            let mut best = 0;
            for (i, &e) in errs.iter().enumerate() {
                if e > errs[best] || e.is_nan() {
                    best = i;
                }
            }
            let (z, t) = pairs[best];
            Ok(IdentityReport { id: entry.id.to_string(), max_err: errs[best], argmax_z: [z.re, z.im], argmax_zt: [t.re, t.im] })
        })
        .collect()
}

/// Sweeps at `quad`'s budget and at the doubled area budget.
pub fn convergence(entries: &[IdentityEntry], n_samples: usize, seed: u64, quad: &Quadrature<f64>) -> Result<Vec<ConvergenceRow>> {
    let fine = Quadrature::new(quad.descriptor().doubled())?;
    let coarse = sweep(entries, n_samples, seed, quad)?;
    let doubled = sweep(entries, n_samples, seed, &fine)?;
    Ok(coarse
        .into_iter()
        .zip(doubled)
        .map(|(a, b)| ConvergenceRow { id: a.id, max_err: a.max_err, max_err_doubled: b.max_err })
        .collect())
}
