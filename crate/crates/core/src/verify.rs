//! Named verification suites and their structured reports.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::bimod::{gr_comparison, gr_span, spherical_generators, times_trivial_idempotent, GrOptions, Side};
use crate::cherednik::{calogero_moser, idempotent, is_good, laplacian, phi_twist, radial_rhs, theta_spher, CherednikContext};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::isotypic::{isotypic_basis, molien_dimension};
use crate::locfrac::{delta_poly, LocFrac};
use crate::perm::{all_perms, Character, Perm};
use crate::poly::{compositions, Monomial, Poly};
use crate::rank::Echelon;
use crate::scalar::RatFunc;
use crate::skew::SkewOperator;

type Op = SkewOperator<RatFunc>;

pub const SUITES: &[&str] = &[
    "dunkl_commute",
    "pbw_slices",
    "heckman",
    "cm_appendix",
    "sc5_radial",
    "twist_lemma",
    "qgr_main",
    "pgr_main",
    "good_values",
    "isotypic_molien",
];

/// Terms shown when a failing check embeds a nonzero difference.
const DIFF_TERMS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    Formal,
    Rational(BigRational),
}

impl Param {
    /// The parameter as a field element: `c` itself or the constant.
    pub fn value(&self) -> RatFunc {
        match self {
            Param::Formal => RatFunc::param(),
            Param::Rational(r) => RatFunc::from_rational(r),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub param: Param,
    pub m: u32,
    pub bounds: (u32, u32),
    pub slack: u32,
    /// Bounds on `|a|` and `|b|` for the PBW operator slice.
    pub pbw_bounds: (u32, u32),
    /// Bound on `|a| + |b|` for the spherical PBW check.
    pub spherical_degree: u32,
    /// Bound on `i + j` for isotypic/Molien comparisons.
    pub molien_degree: u32,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            param: Param::Formal,
            m: 1,
            bounds: (4, 4),
            slack: 2,
            pbw_bounds: (3, 3),
            spherical_degree: 6,
            molien_degree: 8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
    pub ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamReport {
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub n: usize,
    pub param: ParamReport,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with every timing field set to zero.
    pub fn to_json_without_timing(&self) -> String {
        let mut copy = self.clone();
        for c in &mut copy.checks {
            c.ms = 0;
        }
        copy.to_json()
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn pass(detail: impl Into<String>) -> Self {
        Outcome {
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Outcome {
            passed: false,
            detail: detail.into(),
        }
    }

    fn equal(lhs: &Op, rhs: &Op) -> Self {
        let diff = lhs.sub(rhs);
        if diff.is_zero() {
            Outcome::pass(format!("difference is zero ({} terms compared)", lhs.len().max(rhs.len())))
        } else {
            Outcome::fail(format!("nonzero difference: {}", diff.render_truncated(DIFF_TERMS)))
        }
    }
}

struct Runner {
    checks: Vec<Check>,
}

impl Runner {
    fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<Outcome>) {
        let start = Instant::now();
        let (status, detail) = match f() {
            Ok(o) if o.passed => (CheckStatus::Pass, o.detail),
            Ok(o) => (CheckStatus::Fail, o.detail),
            Err(e) => (CheckStatus::Fail, format!("error: {e}")),
        };
        self.checks.push(Check {
            name: name.into(),
            status,
            detail,
            ms: start.elapsed().as_millis() as u64,
        });
    }

    fn skip(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status: CheckStatus::Skip,
            detail: reason.into(),
            ms: 0,
        });
    }
}

/// Runs a registered suite. Deterministic apart from the `ms` fields.
pub fn run_suite(name: &str, n: usize, opts: &SuiteOptions) -> Result<CheckReport> {
    if !SUITES.contains(&name) {
        return Err(Error::UnknownSuite(name.to_string()));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("rank must be at least 2, got {n}")));
    }
    let mut r = Runner { checks: Vec::new() };
    let c = opts.param.value();
    match name {
        "dunkl_commute" => dunkl_commute(&mut r, n, &c),
        "pbw_slices" => pbw_slices(&mut r, n, &c, opts),
        "heckman" => heckman(&mut r, n, &c),
        "cm_appendix" => cm_appendix(&mut r, n, &c),
        "sc5_radial" => sc5_radial(&mut r, n, &c, &opts.param),
        "twist_lemma" => twist_lemma(&mut r, n, &c),
        "qgr_main" => gr_main(&mut r, n, &c, Side::Q, opts),
        "pgr_main" => gr_main(&mut r, n, &c, Side::P, opts),
        "good_values" => good_values(&mut r),
        "isotypic_molien" => isotypic_molien(&mut r, n, opts.molien_degree),
        _ => unreachable!("registry checked above"),
    }
    let param = match &opts.param {
        Param::Formal => ParamReport {
            mode: "formal".into(),
            value: None,
        },
        Param::Rational(v) => ParamReport {
            mode: "rational".into(),
            value: Some(v.to_string()),
        },
    };
    Ok(CheckReport {
        suite: name.to_string(),
        n,
        param,
        checks: r.checks,
    })
}

fn context(n: usize, kappa: &RatFunc) -> Result<CherednikContext<RatFunc>> {
    CherednikContext::new(n, kappa.clone())
}

fn dunkl_commute(r: &mut Runner, n: usize, c: &RatFunc) {
    let Ok(ctx) = context(n, c) else {
        return r.run("context", || Err(Error::InvalidArgument("bad rank".into())));
    };
    let dunkl = ctx.dunkl_all();
    for i in 0..n {
        for j in i + 1..n {
            r.run(format!("[D(y{}), D(y{})] = 0", i + 1, j + 1), || {
                let comm = dunkl[i].commutator(&dunkl[j]);
                Ok(if comm.is_zero() {
                    Outcome::pass("commutator normalizes to zero")
                } else {
                    Outcome::fail(format!("nonzero commutator: {}", comm.render_truncated(DIFF_TERMS)))
                })
            });
        }
    }
}

/// Flattens a principal symbol into a sparse vector over `(w, y, x)` after
/// clearing the common denominator `δ^k`.
fn symbol_vector(op: &Op, k: u32) -> Result<BTreeMap<(Perm, Monomial), RatFunc>> {
    let n = op.n();
    let delta = delta_poly::<RatFunc>(n);
    let mut v = BTreeMap::new();
    for (w, p) in op.principal_symbol()?.components() {
        for (y, f) in p.terms() {
            let num = f.numerator().mul(&delta.pow(k - f.delta_exponent()));
            for (x, c) in num.terms() {
                v.insert((w.clone(), Monomial::new(x.x(), y)), c.clone());
            }
        }
    }
    Ok(v)
}

fn pbw_slices(r: &mut Runner, n: usize, c: &RatFunc, opts: &SuiteOptions) {
    let (max_a, max_b) = opts.pbw_bounds;
    r.run(format!("x^a D^b w independent, |a| <= {max_a}, |b| <= {max_b}"), || {
        let ctx = context(n, c)?;
        let dunkl = ctx.dunkl_all();
        let mut powers: Vec<Op> = Vec::new();
        for db in 0..=max_b {
            for b in compositions(n, db) {
                let mut op = Op::one(n);
                for (i, &e) in b.iter().enumerate() {
                    op = op.mul(&dunkl[i].pow(e as u32));
                }
                powers.push(op);
            }
        }
        let group = all_perms(n);
        let mut ops = Vec::new();
        for da in 0..=max_a {
            for a in compositions(n, da) {
                let xa = LocFrac::from_poly(Poly::monomial(n, Monomial::new(&a, &vec![0; n]), RatFunc::one()))?;
                for d in &powers {
                    let left = d.mul_locfrac(&xa);
                    for w in &group {
                        ops.push(left.mul(&Op::group_element(w)));
                    }
                }
            }
        }
        let k = ops
            .iter()
            .flat_map(|op| op.terms().map(|(_, f)| f.delta_exponent()))
            .max()
            .unwrap_or(0);
        let mut by_order: BTreeMap<i64, Echelon<(Perm, Monomial), RatFunc>> = BTreeMap::new();
        for op in &ops {
            by_order
                .entry(op.gamma_degree())
                .or_default()
                .insert(symbol_vector(op, k)?);
        }
        let rank: usize = by_order.values().map(|e| e.rank()).sum();
        let detail = format!("rank {rank} of {} operators (filtered-symbol bound)", ops.len());
        Ok(if rank == ops.len() {
            Outcome::pass(detail)
        } else {
            Outcome::fail(detail)
        })
    });
    let total = opts.spherical_degree;
    r.run(format!("spherical symbol dims = Molien(triv), i + j <= {total}"), || {
        let gens = spherical_generators(n, c, total);
        let table = gr_span(n, &gens)?.table("gr(eHe)");
        let mut bad = Vec::new();
        for i in 0..=total {
            for j in 0..=total - i {
                let got = table.get(i as i64, j);
                let want = molien_dimension(n, Character::Trivial, (i, j));
                if got != want {
                    bad.push(format!("({i},{j}): {got} != {want}"));
                }
            }
        }
        Ok(if bad.is_empty() {
            Outcome::pass(format!("{} bidegrees agree", table.entries.len()))
        } else {
            Outcome::fail(bad.join("; "))
        })
    });
}

fn heckman(r: &mut Runner, n: usize, c: &RatFunc) {
    r.run("δ⁻¹ ∇²(c+1) e₋ δ = ∇²(c) e", || {
        let ctx = context(n, c)?;
        let e = idempotent::<RatFunc>(n, Character::Trivial);
        let em = idempotent::<RatFunc>(n, Character::Sign);
        let lhs = Op::delta_power(n, -1)
            .mul(&ctx.shifted(1).nabla2())
            .mul(&em)
            .mul(&Op::delta_power(n, 1));
        let rhs = ctx.nabla2().mul(&e);
        Ok(Outcome::equal(&lhs, &rhs))
    });
}

fn cm_appendix(r: &mut Runner, n: usize, w: &RatFunc) {
    r.run("Θ_w(Σ D_w(y_t)² e)·e = L_w·e", || {
        let ctx = context(n, w)?;
        // Σ D(y_t)²·e = ū·e with ū group-free; Θ_w is then applied to ū
        let collapsed = ctx.nabla2().drop_group();
        let twisted = theta_spher(&collapsed, w)?;
        let lhs = times_trivial_idempotent(&twisted);
        let rhs = times_trivial_idempotent(&calogero_moser(n, w));
        Ok(Outcome::equal(&lhs, &rhs))
    });
}

fn sc5_radial(r: &mut Runner, n: usize, w: &RatFunc, param: &Param) {
    r.run("δ^(w+1) radial_rhs δ^-(w+1) = L_w", || {
        let rhs = radial_rhs(n, w)?;
        let shift = -(w.clone() + RatFunc::one());
        let lhs = rhs.conjugate_by_delta_power(&shift)?;
        Ok(Outcome::equal(&lhs, &calogero_moser(n, w)))
    });
    match param {
        Param::Formal => r.run("L_w = L_-(w+1)", || {
            let lw = calogero_moser(n, w);
            let flipped = lw.substitute_param(&(-RatFunc::param() - RatFunc::one()))?;
            Ok(Outcome::equal(&flipped, &lw))
        }),
        Param::Rational(_) => r.run("L_w = L_-(w+1)", || {
            let other = -(w.clone() + RatFunc::one());
            Ok(Outcome::equal(&calogero_moser(n, &other), &calogero_moser(n, w)))
        }),
    }
    r.run("δ Δ δ⁻¹ = Δ - Σ (δ/α) ∂_α δ⁻¹", || {
        let delta = Op::delta_power(n, 1);
        let inv = Op::delta_power(n, -1);
        let lhs = delta.mul(&laplacian(n)).mul(&inv);
        let mut correction = Op::zero(n);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let dh = Op::partial(n, i + 1)?.sub(&Op::partial(n, j + 1)?);
                let coeff = LocFrac::delta_power(n, 1).mul(&LocFrac::inv_root(n, i, j));
                correction = correction.add(&dh.mul_locfrac(&coeff).mul(&inv));
            }
        }
        Ok(Outcome::equal(&lhs, &laplacian(n).sub(&correction)))
    });
}

/// Monomial symmetric functions `m_λ` for partitions with `|λ| ≤ max_degree`.
fn monomial_symmetric(n: usize, max_degree: u32) -> Vec<Poly<RatFunc>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for d in 0..=max_degree {
        for a in compositions(n, d) {
            let mut sorted = a.to_vec();
            sorted.sort_unstable_by(|x, y| y.cmp(x));
            if !seen.insert(sorted.clone()) {
                continue;
            }
            let orbit: BTreeSet<Vec<u16>> = all_perms(n)
                .iter()
                .map(|w| w.permute_exponents(&sorted).to_vec())
                .collect();
            let mut p = Poly::zero(n);
            for e in orbit {
                p.add_term(Monomial::new(&e, &vec![0; n]), RatFunc::one());
            }
            out.push(p);
        }
    }
    out
}

fn twist_lemma(r: &mut Runner, n: usize, c: &RatFunc) {
    let e = idempotent::<RatFunc>(n, Character::Trivial);
    let em = idempotent::<RatFunc>(n, Character::Sign);
    let d2 = Op::delta_power(n, 2);
    let dm2 = Op::delta_power(n, -2);
    let shifted = c.clone() + RatFunc::one();
    let twist_identity = |z: &Op| -> Outcome {
        let lhs = phi_twist(z, &shifted);
        let rhs = dm2.mul(&phi_twist(z, c)).mul(&d2);
        Outcome::equal(&lhs, &rhs)
    };
    for (k, p) in monomial_symmetric(n, 3).into_iter().enumerate() {
        let label = if p.len() == 1 && p.as_constant().is_some() {
            "1".to_string()
        } else {
            p.to_string()
        };
        r.run(format!("φ(c+1)(p e) = δ⁻² φ(c)(p e) δ², p = {label}"), || {
            let z = Op::from_poly(p.clone())?.mul(&e);
            Ok(twist_identity(&z))
        });
        if k > 0 {
            r.run(format!("φ(c+1)(δ⁻²p e) = δ⁻² φ(c)(δ⁻²p e) δ², p = {label}"), || {
                let z = dm2.mul(&Op::from_poly(p.clone())?).mul(&e);
                Ok(twist_identity(&z))
            });
        }
    }
    let nabla = match context(n, c) {
        Ok(ctx) => ctx.nabla2(),
        Err(err) => return r.run("context", || Err(err)),
    };
    r.run("φ(c+1)(∇²(c) e) = δ⁻² φ(c)(∇²(c) e) δ²", || {
        Ok(twist_identity(&nabla.mul(&e)))
    });
    r.run("φ(c)(∇²(c) e) = ∇²(-c) e₋", || {
        let flipped = context(n, &-c.clone())?.nabla2();
        Ok(Outcome::equal(&phi_twist(&nabla.mul(&e), c), &flipped.mul(&em)))
    });
    r.run("δ⁻² ∇²(-c) e₋ δ² = δ⁻¹ ∇²(-c-1) e δ", || {
        let minus = context(n, &-c.clone())?;
        let lhs = dm2.mul(&minus.nabla2()).mul(&em).mul(&d2);
        let rhs = Op::delta_power(n, -1)
            .mul(&minus.shifted(-1).nabla2())
            .mul(&e)
            .mul(&Op::delta_power(n, 1));
        Ok(Outcome::equal(&lhs, &rhs))
    });
}

fn gr_main(r: &mut Runner, n: usize, c: &RatFunc, side: Side, opts: &SuiteOptions) {
    let m = opts.m;
    let (dx, dy) = opts.bounds;
    let mut gr = GrOptions::new(n, m, side, dx, dy, c.clone());
    gr.slack = opts.slack;
    let cmp = match gr_comparison(&gr) {
        Ok(cmp) => cmp,
        Err(err) => return r.run("spanning set", || Err(err)),
    };
    r.run("containment: no overflow, all symbols in target", || {
        let detail = format!(
            "{} bidegrees, {} overflow, {} nonmember symbols",
            cmp.rows.len(),
            cmp.overflows(),
            cmp.nonmembers()
        );
        Ok(if cmp.overflows() == 0 && cmp.nonmembers() == 0 {
            Outcome::pass(detail)
        } else {
            Outcome::fail(detail)
        })
    });
    r.run(format!("equality on trusted region i <= {dx}, j <= {dy}"), || {
        let missing: Vec<String> = cmp
            .rows
            .iter()
            .filter(|row| row.trusted && row.span_dim != row.target_dim)
            .map(|row| format!("({},{}): {} of {}", row.i, row.j, row.span_dim, row.target_dim))
            .collect();
        let warn = cmp.untrusted_deficits();
        Ok(if missing.is_empty() {
            Outcome::pass(format!("all trusted bidegrees match; {warn} untrusted deficits (warnings)"))
        } else {
            Outcome::fail(missing.join("; "))
        })
    });
    if m == 1 {
        r.run("base case dims = A¹ shifted by δ", || {
            let nd = crate::poly::discriminant_degree(n) as i64;
            let shift = if side == Side::Q { nd } else { -nd };
            let mut bad = Vec::new();
            for row in cmp.rows.iter().filter(|row| row.trusted) {
                let ti = row.i + shift;
                let want = if ti < 0 {
                    0
                } else {
                    isotypic_basis::<RatFunc>(n, Character::Sign, (ti as u32, row.j)).dim()
                };
                if want != row.span_dim {
                    bad.push(format!("({},{}): {} != {}", row.i, row.j, row.span_dim, want));
                }
            }
            Ok(if bad.is_empty() {
                Outcome::pass("trusted dimensions equal the shifted sign-isotypic dimensions")
            } else {
                Outcome::fail(bad.join("; "))
            })
        });
    } else {
        r.skip("base case dims = A¹ shifted by δ", "only defined for m = 1");
    }
}

/// Independent reference: `r` lies in `{a/b : 2 ≤ b ≤ n} ∩ (-1, 0)`.
fn exceptional_by_enumeration(r: &BigRational, n: usize) -> bool {
    (2..=n as i64).any(|b| (1..b).any(|a| *r == BigRational::new(BigInt::from(-a), BigInt::from(b))))
}

fn good_values(r: &mut Runner) {
    for n in 2..=4usize {
        r.run(format!("is_good on p/q, |p| <= 6, q <= 4, n = {n}"), || {
            let mut bad = Vec::new();
            let mut count = 0;
            for q in 1..=4i64 {
                for p in -6..=6i64 {
                    let v = BigRational::new(p.into(), q.into());
                    count += 1;
                    if is_good(&v, n) == exceptional_by_enumeration(&v, n) {
                        bad.push(v.to_string());
                    }
                }
            }
            Ok(if bad.is_empty() {
                Outcome::pass(format!("{count} values agree"))
            } else {
                Outcome::fail(format!("disagreement at {}", bad.join(", ")))
            })
        });
    }
    r.run("-1/2 is not good and 1/2 is good for n = 2", || {
        let half = BigRational::new(BigInt::one(), 2.into());
        Ok(if !is_good(&-half.clone(), 2) && is_good(&half, 2) {
            Outcome::pass("as expected")
        } else {
            Outcome::fail("unexpected value")
        })
    });
}

fn isotypic_molien(r: &mut Runner, n: usize, max_degree: u32) {
    for ch in [Character::Trivial, Character::Sign] {
        r.run(format!("{ch} isotypic dims = Molien, i + j <= {max_degree}"), || {
            let mut bad = Vec::new();
            for i in 0..=max_degree {
                for j in 0..=max_degree - i {
                    let got = isotypic_basis::<BigRational>(n, ch, (i, j)).dim();
                    let want = molien_dimension(n, ch, (i, j));
                    if got != want {
                        bad.push(format!("({i},{j}): {got} != {want}"));
                    }
                }
            }
            Ok(if bad.is_empty() {
                Outcome::pass("all bidegrees agree")
            } else {
                Outcome::fail(bad.join("; "))
            })
        });
    }
}
