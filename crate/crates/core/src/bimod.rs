//! Spanning sets of the shift bimodules `Q_{c-m,c}` and `P_{c,c-m}`, the
//! associated graded of their spans, and comparison with `δ^{∓m} A^m e`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::cherednik::CherednikContext;
use crate::error::{Error, Result};
use crate::field::{factorial, Field};
use crate::isotypic::{poly_vector, APowers, DimensionTable};
use crate::locfrac::{delta_poly, LocFrac};
use crate::perm::{all_perms, Perm};
use crate::poly::{compositions, discriminant_degree, Exps, Monomial, Poly};
use crate::rank::{Echelon, SparseVec};
use crate::skew::{OpKey, SkewOperator, SymbolPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Q,
    P,
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Q" | "q" => Ok(Side::Q),
            "P" | "p" => Ok(Side::P),
            other => Err(Error::InvalidArgument(format!("unknown side {other:?}"))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Q => "Q",
            Side::P => "P",
        })
    }
}

/// How degree bounds are distributed over the factors of a product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundMode {
    /// Bounds apply to the sum over all factors.
    Merged,
    /// Each factor is bounded separately.
    Factorwise,
}

#[derive(Clone, Debug)]
pub struct GrOptions<K: Field> {
    pub n: usize,
    pub m: u32,
    pub side: Side,
    pub dx: u32,
    pub dy: u32,
    pub slack: u32,
    /// The parameter `c`; formal `c` or a specialization.
    pub c: K,
    pub bound_mode: BoundMode,
}

impl<K: Field> GrOptions<K> {
    pub fn new(n: usize, m: u32, side: Side, dx: u32, dy: u32, c: K) -> Self {
        GrOptions {
            n,
            m,
            side,
            dx,
            dy,
            slack: 2,
            c,
            bound_mode: BoundMode::Merged,
        }
    }

    fn delta_degree(&self) -> u32 {
        discriminant_degree(self.n)
    }

    /// Dunkl parameters of the factors, left to right.
    fn factor_parameters(&self) -> Vec<K> {
        let m = self.m.max(1) as i64;
        (0..m)
            .map(|k| match self.side {
                Side::Q => self.c.add_ref(&K::from_i64(k - (m - 1))),
                Side::P => self.c.add_ref(&K::from_i64(-k)),
            })
            .collect()
    }

    /// Total bounds on `(Σ|a|, Σ|b|)` and per-factor bounds.
    fn bounds(&self) -> ((u32, u32), (u32, u32)) {
        let nd = self.delta_degree();
        let m = self.m.max(1);
        let per_x = match self.side {
            Side::Q => self.dx + nd + self.slack,
            Side::P => self.dx + self.slack,
        };
        let per_y = self.dy + self.slack;
        let total_x = match self.side {
            Side::Q => self.dx + m * nd + self.slack,
            Side::P => self.dx + self.slack,
        };
        match self.bound_mode {
            BoundMode::Merged => ((total_x, per_y), (total_x, per_y)),
            BoundMode::Factorwise => ((per_x * m, per_y * m), (per_x, per_y)),
        }
    }
}

/// Orbit representative test for the diagonal action on exponent pairs.
fn is_orbit_representative(a: &[u16], b: &[u16], group: &[Perm]) -> bool {
    group.iter().all(|w| {
        let wa = w.permute_exponents(a);
        let wb = w.permute_exponents(b);
        (a, b) <= (&wa[..], &wb[..])
    })
}

/// `D^b` applied to `base·e`, collapsed: returns group-free `Z_b` with
/// `D^b·base·e = Z_b·e` for every `|b| ≤ max_b`.
fn dunkl_powers_on_idempotent<K: Field>(
    ctx: &CherednikContext<K>,
    base: &SkewOperator<K>,
    max_b: u32,
) -> HashMap<Exps, SkewOperator<K>> {
    let n = ctx.n();
    let dunkl = ctx.dunkl_all();
    let mut out: HashMap<Exps, SkewOperator<K>> = HashMap::new();
    out.insert(SmallVec::from_elem(0, n), base.drop_group());
    for deg in 1..=max_b {
        let level: Vec<Exps> = compositions(n, deg).into_iter().collect();
        let computed: Vec<(Exps, SkewOperator<K>)> = level
            .par_iter()
            .map(|b| {
                let i = b.iter().position(|&e| e > 0).expect("positive degree");
                let mut lower = b.clone();
                lower[i] -= 1;
                (b.clone(), dunkl[i].mul(&out[&lower]).drop_group())
            })
            .collect();
        out.extend(computed);
    }
    out
}

/// Collapsed generators `avg(left·x^a·Z_b)` for the given exponent pairs,
/// where `D^b·base·e = Z_b·e`. Zero operators are dropped.
fn collapsed_generators<K: Field>(
    ctx: &CherednikContext<K>,
    base: &SkewOperator<K>,
    left: &LocFrac<K>,
    pairs: &[(Exps, Exps)],
) -> Vec<((u32, u32), SkewOperator<K>)> {
    let n = ctx.n();
    let max_b = pairs
        .iter()
        .map(|(_, b)| b.iter().map(|&e| e as u32).sum())
        .max()
        .unwrap_or(0);
    let z = dunkl_powers_on_idempotent(ctx, base, max_b);
    pairs
        .par_iter()
        .filter_map(|(a, b)| {
            let xa = LocFrac::from_poly(Poly::monomial(n, Monomial::new(a, &vec![0; n]), K::one()))
                .expect("x-only monomial");
            let op = z[b].mul_locfrac(&left.mul(&xa)).group_average();
            let key = (a.iter().map(|&e| e as u32).sum(), b.iter().map(|&e| e as u32).sum());
            (!op.is_zero()).then_some((key, op))
        })
        .collect()
}

/// Exponent pairs `(a, b)` up to the diagonal `S_n` action.
fn orbit_pairs(n: usize, keep: impl Fn(u32, u32) -> bool, max_a: u32, max_b: u32) -> Vec<(Exps, Exps)> {
    let group = all_perms(n);
    let mut pairs = Vec::new();
    for da in 0..=max_a {
        for a in compositions(n, da) {
            for db in 0..=max_b {
                if !keep(da, db) {
                    continue;
                }
                for b in compositions(n, db) {
                    if is_orbit_representative(&a, &b, &group) {
                        pairs.push((a.clone(), b));
                    }
                }
            }
        }
    }
    pairs
}

/// One factor's generators `A` (group-free, `W`-invariant), keyed by `(|a|, |b|)`.
/// The sandwiched generator is `A·e`.
fn factor_generators<K: Field>(
    n: usize,
    kappa: &K,
    side: Side,
    max_a: u32,
    max_b: u32,
) -> Vec<((u32, u32), SkewOperator<K>)> {
    let ctx = CherednikContext::new(n, kappa.clone()).expect("rank at least 2");
    let (base, left) = match side {
        Side::Q => (SkewOperator::one(n), LocFrac::delta_power(n, -1)),
        Side::P => (SkewOperator::delta_power(n, 1), LocFrac::one(n)),
    };
    let pairs = orbit_pairs(n, |_, _| true, max_a, max_b);
    collapsed_generators(&ctx, &base, &left, &pairs)
}

/// Collapsed forms `A` of the spherical elements `e·x^a·D_κ(y)^b·e`, `|a| + |b| ≤ total`.
pub fn spherical_generators<K: Field>(n: usize, kappa: &K, total: u32) -> Vec<SkewOperator<K>> {
    let ctx = CherednikContext::new(n, kappa.clone()).expect("rank at least 2");
    let pairs = orbit_pairs(n, |a, b| a + b <= total, total, total);
    collapsed_generators(&ctx, &SkewOperator::one(n), &LocFrac::one(n), &pairs)
        .into_iter()
        .map(|(_, op)| op)
        .collect()
}

/// Group-free `W`-invariant operators `A` whose `A·e` span the truncated bimodule.
pub fn collapsed_spanning_set<K: Field>(opts: &GrOptions<K>) -> Vec<SkewOperator<K>> {
    let ((tx, ty), (fx, fy)) = opts.bounds();
    let params = opts.factor_parameters();
    let factors: Vec<Vec<((u32, u32), SkewOperator<K>)>> = params
        .iter()
        .map(|kappa| factor_generators(opts.n, kappa, opts.side, fx, fy))
        .collect();
    let mut current: Vec<((u32, u32), SkewOperator<K>)> = factors[0].clone();
    for next in &factors[1..] {
        let jobs: Vec<(usize, usize)> = (0..current.len())
            .flat_map(|i| (0..next.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| {
                let ((a1, b1), (a2, b2)) = (current[i].0, next[j].0);
                a1 + a2 <= tx && b1 + b2 <= ty
            })
            .collect();
        current = jobs
            .par_iter()
            .filter_map(|&(i, j)| {
                let ((a1, b1), l) = &current[i];
                let ((a2, b2), r) = &next[j];
                let prod = l.mul(r);
                (!prod.is_zero()).then_some(((a1 + a2, b1 + b2), prod))
            })
            .collect();
    }
    current.into_iter().map(|(_, op)| op).collect()
}

/// `A·e` for group-free `A`.
pub fn times_trivial_idempotent<K: Field>(a: &SkewOperator<K>) -> SkewOperator<K> {
    let n = a.n();
    let inv = K::from_bigint(factorial(n)).inv().expect("n! is nonzero");
    let group = all_perms(n);
    SkewOperator::from_terms(
        n,
        a.terms().flat_map(|(k, f)| {
            let f = f.scale(&inv);
            group
                .iter()
                .map(move |w| (OpKey::new(k.derivatives().into(), w.clone()), f.clone()))
        }),
    )
}

/// Recovers `A` from `u = A·e` with `A` group-free and `W`-invariant.
pub fn spherical_part<K: Field>(u: &SkewOperator<K>) -> Result<SkewOperator<K>> {
    let n = u.n();
    let id = Perm::identity(n);
    let fact = K::from_bigint(factorial(n));
    let a = SkewOperator::from_terms(
        n,
        u.terms()
            .filter(|(k, _)| k.group() == &id)
            .map(|(k, f)| (k.clone(), f.scale(&fact))),
    );
    if &times_trivial_idempotent(&a) != u || a.group_average() != a {
        return Err(Error::NotSpherical {
            detail: "operator is not of the form A·e with W-invariant A".into(),
        });
    }
    Ok(a)
}

pub fn q_spanning_set<K: Field>(n: usize, m: u32, bounds: (u32, u32), slack: u32, c: &K) -> Vec<SkewOperator<K>> {
    let mut opts = GrOptions::new(n, m, Side::Q, bounds.0, bounds.1, c.clone());
    opts.slack = slack;
    collapsed_spanning_set(&opts).iter().map(times_trivial_idempotent).collect()
}

pub fn p_spanning_set<K: Field>(n: usize, m: u32, bounds: (u32, u32), slack: u32, c: &K) -> Vec<SkewOperator<K>> {
    let mut opts = GrOptions::new(n, m, Side::P, bounds.0, bounds.1, c.clone());
    opts.slack = slack;
    collapsed_spanning_set(&opts).iter().map(times_trivial_idempotent).collect()
}

/// Degree for the Euler grading `x ↦ 1`, `∂ ↦ -1`, if the operator is homogeneous.
fn euler_degree<K: Field>(op: &SkewOperator<K>) -> Result<i64> {
    let mut seen = BTreeSet::new();
    for (k, f) in op.terms() {
        for (d, _) in f.degree_components() {
            seen.insert(d - k.order() as i64);
        }
    }
    match seen.len() {
        1 => Ok(*seen.iter().next().expect("one element")),
        _ => Err(Error::InvalidArgument(
            "spanning operators must be homogeneous for the Euler grading".into(),
        )),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Column {
    order: Reverse<u32>,
    d: Exps,
    x: Monomial,
}

/// A basis of the associated graded of a span, grouped by bidegree.
#[derive(Clone, Debug)]
pub struct GrSpan<K: Field> {
    pub n: usize,
    pub symbols: BTreeMap<(i64, u32), Vec<SymbolPoly<K>>>,
}

impl<K: Field> GrSpan<K> {
    pub fn table(&self, space: &str) -> DimensionTable {
        let mut t = DimensionTable::new(space, self.n);
        for (&bd, syms) in &self.symbols {
            t.entries.insert(bd, syms.len());
        }
        t
    }
}

/// Associated graded of `span{A·e}` for group-free homogeneous `A`.
pub fn gr_span<K: Field>(n: usize, ops: &[SkewOperator<K>]) -> Result<GrSpan<K>> {
    let mut classes: BTreeMap<i64, Vec<&SkewOperator<K>>> = BTreeMap::new();
    for op in ops.iter().filter(|op| !op.is_zero()) {
        classes.entry(euler_degree(op)?).or_default().push(op);
    }
    let per_class: Vec<Vec<((i64, u32), SymbolPoly<K>)>> = classes
        .into_par_iter()
        .map(|(e, ops)| filtered_symbols(n, e, &ops))
        .collect();
    let mut symbols: BTreeMap<(i64, u32), Vec<SymbolPoly<K>>> = BTreeMap::new();
    for (bd, s) in per_class.into_iter().flatten() {
        symbols.entry(bd).or_default().push(s);
    }
    Ok(GrSpan { n, symbols })
}

fn filtered_symbols<K: Field>(n: usize, euler: i64, ops: &[&SkewOperator<K>]) -> Vec<((i64, u32), SymbolPoly<K>)> {
    let top_k = ops
        .iter()
        .flat_map(|op| op.terms().map(|(_, f)| f.delta_exponent()))
        .max()
        .unwrap_or(0);
    let delta = delta_poly::<K>(n);
    let mut ech: Echelon<Column, K> = Echelon::new();
    for op in ops {
        let mut v: SparseVec<Column, K> = BTreeMap::new();
        for (k, f) in op.terms() {
            let p = f.numerator().mul(&delta.pow(top_k - f.delta_exponent()));
            for (x, c) in p.terms() {
                v.insert(
                    Column {
                        order: Reverse(k.order()),
                        d: k.derivatives().into(),
                        x: x.clone(),
                    },
                    c.clone(),
                );
            }
        }
        ech.insert(v);
    }
    let zero_y = vec![0u16; n];
    ech.rows()
        .map(|(lead, row)| {
            let j = lead.order.0;
            let mut by_d: BTreeMap<Exps, Poly<K>> = BTreeMap::new();
            for (col, c) in row.iter().filter(|(col, _)| col.order.0 == j) {
                let x = Monomial::new(col.x.x(), &zero_y);
                by_d.entry(col.d.clone())
                    .or_insert_with(|| Poly::zero(n))
                    .add_term(x, c.clone());
            }
            let mut sym = SymbolPoly::zero(n);
            for (d, p) in by_d {
                sym.add_term(d, LocFrac::normalize(p, top_k).expect("x-only numerator"));
            }
            ((euler + j as i64, j), sym)
        })
        .collect()
}

/// Associated graded dimensions of the span of sandwiched operators `A·e`.
pub fn gr_dimension_table<K: Field>(n: usize, spanning: &[SkewOperator<K>]) -> Result<DimensionTable> {
    let collapsed = spanning
        .iter()
        .enumerate()
        .map(|(idx, u)| {
            spherical_part(u).map_err(|e| match e {
                Error::NotSpherical { detail } => Error::NotSpherical {
                    detail: format!("generator {idx}: {detail}"),
                },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(gr_span(n, &collapsed)?.table("gr"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrStatus {
    Match,
    Deficit,
    Overflow,
}

impl fmt::Display for GrStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrStatus::Match => "match",
            GrStatus::Deficit => "deficit",
            GrStatus::Overflow => "overflow",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrRow {
    pub i: i64,
    pub j: u32,
    pub span_dim: usize,
    pub target_dim: usize,
    pub status: GrStatus,
    /// Symbols at this bidegree that are not in the target space.
    pub nonmembers: usize,
    pub trusted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrComparison {
    pub n: usize,
    pub m: u32,
    pub side: Side,
    pub dx: u32,
    pub dy: u32,
    pub slack: u32,
    pub param: String,
    pub rows: Vec<GrRow>,
}

impl GrComparison {
    pub fn overflows(&self) -> usize {
        self.rows.iter().filter(|r| r.status == GrStatus::Overflow).count()
    }

    pub fn nonmembers(&self) -> usize {
        self.rows.iter().map(|r| r.nonmembers).sum()
    }

    pub fn trusted_deficits(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.trusted && r.status == GrStatus::Deficit)
            .count()
    }

    /// Deficits outside the trusted region; reported, not failed.
    pub fn untrusted_deficits(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| !r.trusted && r.status == GrStatus::Deficit)
            .count()
    }

    pub fn passes(&self) -> bool {
        self.overflows() == 0 && self.nonmembers() == 0 && self.trusted_deficits() == 0
    }

    pub fn row(&self, i: i64, j: u32) -> Option<&GrRow> {
        self.rows.iter().find(|r| r.i == i && r.j == j)
    }
}

/// Multiplies a symbol by `δ^e` and reads it as a polynomial in `x, y`, if possible.
fn symbol_to_poly<K: Field>(s: &SymbolPoly<K>, e: i64) -> Option<Poly<K>> {
    let n = s.n();
    let shift = LocFrac::delta_power(n, e);
    let mut out = Poly::zero(n);
    for (y, f) in s.terms() {
        let g = f.mul(&shift);
        let p = g.as_polynomial()?;
        for (x, c) in p.terms() {
            out.add_term(Monomial::new(x.x(), y), c.clone());
        }
    }
    Some(out)
}

/// Compares a computed associated graded with `δ^{-m}A^m` (side Q) or `δ^m A^m` (side P).
pub fn compare_with_target<K: Field>(
    span: &GrSpan<K>,
    m: u32,
    side: Side,
    dx: u32,
    dy: u32,
    slack: u32,
    param: &str,
) -> GrComparison {
    let n = span.n;
    let shift = (m * discriminant_degree(n)) as i64;
    // Degrees shift by `m·deg δ`; symbols are multiplied by `δ^{±m}`.
    let (lo, e, power) = match side {
        Side::Q => (-shift, shift, m as i64),
        Side::P => (shift, -shift, -(m as i64)),
    };
    let mut grid: BTreeSet<(i64, u32)> = BTreeSet::new();
    for i in lo..=dx as i64 {
        for j in 0..=dy {
            grid.insert((i, j));
        }
    }
    grid.extend(span.symbols.keys().copied());
    let mut powers = APowers::<K>::new(n);
    let rows = grid
        .into_iter()
        .map(|(i, j)| {
            let ti = i + e;
            let empty = Vec::new();
            let syms = span.symbols.get(&(i, j)).unwrap_or(&empty);
            let (target_dim, nonmembers) = if ti < 0 {
                (0, syms.len())
            } else {
                let ech = powers.echelon(m, ti as u32, j);
                let bad = syms
                    .iter()
                    .filter(|s| match symbol_to_poly(s, power) {
                        Some(p) => !ech.contains(poly_vector(&p)),
                        None => true,
                    })
                    .count();
                (ech.rank(), bad)
            };
            let span_dim = syms.len();
            let status = match span_dim.cmp(&target_dim) {
                std::cmp::Ordering::Equal => GrStatus::Match,
                std::cmp::Ordering::Less => GrStatus::Deficit,
                std::cmp::Ordering::Greater => GrStatus::Overflow,
            };
            GrRow {
                i,
                j,
                span_dim,
                target_dim,
                status,
                nonmembers,
                trusted: i >= lo && i <= dx as i64 && j <= dy,
            }
        })
        .collect();
    GrComparison {
        n,
        m,
        side,
        dx,
        dy,
        slack,
        param: param.to_string(),
        rows,
    }
}

/// Builds the spanning set, its associated graded and the comparison in one go.
pub fn gr_comparison<K: Field>(opts: &GrOptions<K>) -> Result<GrComparison> {
    let ops = collapsed_spanning_set(opts);
    let span = gr_span(opts.n, &ops)?;
    Ok(compare_with_target(
        &span,
        opts.m,
        opts.side,
        opts.dx,
        opts.dy,
        opts.slack,
        &opts.c.to_string(),
    ))
}
