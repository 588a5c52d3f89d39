//! Super-biderivations: bilinear maps `f` of parity γ with
//!
//! ```text
//! f([x,y], z) = (-1)^{|x|γ} [x, f(y,z)] + (-1)^{|y||z|} [f(x,z), y]
//! f(x, [y,z]) = [f(x,y), z] + (-1)^{(γ+|x|)|y|} [y, f(x,z)]
//! ```
//!
//! No skew-symmetry is imposed. Unknowns are the coefficients `u(a,b,k)` of
//! `e_k` in `f(e_a, e_b)`, indexed `(a * dim + b) * dim + k`. Every scalar
//! equation only involves unknowns of one weight `ε = wt k - wt a - wt b`
//! and one degree, so the system splits into independent blocks.

mod factor;
mod residual;

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::exterior::Parity;
use crate::linalg::{solve_blocked, BlockSpec, BlockStatus, Echelon, Field, FieldTag, PrimeField, Rationals, SparseVec};
use crate::superfields::{degree_difference, weight_difference, AlgebraTable, GradingCode};
use crate::system::{RowAccumulator, UnknownIndex};
use crate::Error;

pub use factor::{factor_biderivation, FactorStatus, FactorizationResult};
pub use residual::{bider_residual, respects_parity, skew_witness, BilinearMap, ResidualWitness};

#[derive(Clone, Copy, Debug)]
pub struct BiderOptions {
    /// Per-block cap on rows fed to elimination.
    pub row_limit: Option<usize>,
    /// Solve everything as one block.
    pub unblocked: bool,
    /// Keep kernel bases of blocks with nonzero nullity.
    pub retain: bool,
}

impl Default for BiderOptions {
    fn default() -> Self {
        BiderOptions { row_limit: None, unblocked: false, retain: true }
    }
}

/// One `(γ, ε, i)` block.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BiderBlock {
    pub parity: Parity,
    pub weight: String,
    pub weight_is_zero: bool,
    pub degree: i64,
    pub unknowns: usize,
    pub rows: usize,
    pub rank: usize,
    pub nullity: usize,
    /// Proven lower bound on the nullity used to stop early.
    pub lower_bound: usize,
    pub status: BlockStatus,
}

#[derive(Clone, Debug)]
pub struct ParitySolution<E> {
    pub parity: Parity,
    pub field: FieldTag,
    pub unknowns: usize,
    pub blocks: Vec<BiderBlock>,
    pub total_nullity: usize,
    /// Kernel basis in global coordinates (when retained).
    pub solutions: Vec<SparseVec<E>>,
    pub cross_block_rows: usize,
    pub complete: bool,
}

impl<E> ParitySolution<E> {
    /// Blocks off the zero weight or off degree zero with nonzero nullity.
    pub fn nonzero_off_diagonal(&self) -> Vec<&BiderBlock> {
        self.blocks.iter().filter(|b| b.nullity > 0 && !(b.weight_is_zero && b.degree == 0)).collect()
    }
}

/// Both parities together with the innerness decision.
#[derive(Clone, Debug)]
pub struct BiderSolution<E> {
    pub dim: usize,
    pub even: ParitySolution<E>,
    pub odd: ParitySolution<E>,
    /// The bracket satisfies both identities exactly over the rationals.
    pub bracket_is_solution: bool,
    pub bracket_in_span: bool,
    pub inner: bool,
}

/// Number of admissible unknowns `u(a,b,k)` with `|e_k| = |e_a| + |e_b| + γ`.
pub fn bider_unknowns(t: &AlgebraTable, gamma: Parity) -> usize {
    let p = t.parities();
    let (even, odd) = (p.iter().filter(|x| **x == Parity::Even).count(), p.iter().filter(|x| **x == Parity::Odd).count());
    let count = |q: Parity| if q == Parity::Even { even } else { odd };
    p.iter().flat_map(|pa| p.iter().map(move |pb| count(*pa + *pb + gamma))).sum()
}

/// Block keys `(ε, i)` with their unknown counts, in key order.
pub fn enumerate_blocks(t: &AlgebraTable, gamma: Parity) -> Result<Vec<(String, i64, usize)>, Error> {
    let (idx, _) = index(t, gamma, false)?;
    let dim = t.dim();
    Ok(idx
        .blocks
        .iter()
        .map(|ids| {
            let u = ids[0] as usize;
            let (a, b, k) = (u / (dim * dim), u / dim % dim, u % dim);
            (weight_difference(t, k, &[a, b]).to_string(), degree_difference(t, k, &[a, b]), ids.len())
        })
        .collect())
}

fn index(t: &AlgebraTable, gamma: Parity, unblocked: bool) -> Result<(UnknownIndex, GradingCode), Error> {
    let dim = t.dim();
    let code = GradingCode::new(t)?;
    let par = t.parities();
    let idx = UnknownIndex::new(dim * dim * dim, unblocked, |u| {
        let (a, b, k) = (u / (dim * dim), u / dim % dim, u % dim);
        (par[k] == par[a] + par[b] + gamma).then(|| code.key(k, &[a, b]))
    });
    Ok((idx, code))
}

/// The bracket as a global coefficient vector, mapped into `field`.
pub fn bracket_vector<F: Field>(t: &AlgebraTable, field: &F) -> Result<SparseVec<F::Elem>, Error> {
    let dim = t.dim();
    let mut v = Vec::new();
    for a in 0..dim {
        for b in 0..dim {
            for (k, c) in t.bracket_basis(a, b) {
                let x = field.from_rational(c)?;
                if !field.is_zero(&x) {
                    v.push(((a * dim + b) * dim + k, x));
                }
            }
        }
    }
    Ok(v)
}

/// Whether the bracket satisfies both identities exactly over the rationals.
pub fn bracket_is_biderivation(t: &AlgebraTable) -> bool {
    let s = t.structure(Rationals::new()).expect("rationals accept every constant");
    let f = BilinearMap::bracket(&s, &crate::scalar::rat(1));
    bider_residual(&s, Parity::Even, &f).is_none()
}

/// Solves one parity. With `bracket_lower_bound`, the block holding the
/// bracket is known to have nullity at least 1 and elimination stops there
/// at rank `unknowns - 1`.
pub fn solve_bder_parity<F: Field>(
    t: &AlgebraTable,
    gamma: Parity,
    field: F,
    opts: BiderOptions,
    bracket_lower_bound: bool,
) -> Result<ParitySolution<F::Elem>, Error> {
    let dim = t.dim();
    let s = t.structure(field.clone())?;
    let (idx, code) = index(t, gamma, opts.unblocked)?;
    let par = t.parities();
    let bracket_block = (gamma == Parity::Even && bracket_lower_bound && t.constant_rows().iter().any(|r| !r.is_empty()))
        .then(|| idx.block_with_key((0, 0)))
        .flatten();
    let specs: Vec<BlockSpec> = idx
        .blocks
        .iter()
        .enumerate()
        .map(|(b, ids)| {
            let lower = usize::from(Some(b) == bracket_block);
            BlockSpec { unknowns: ids.len(), stop_rank: ids.len() - lower }
        })
        .collect();

    let cross = AtomicUsize::new(0);
    let f = &field;
    let n2 = dim * dim;
    let outcomes = solve_blocked(f, &specs, dim, opts.row_limit, opts.retain, |a, sink| {
        let mut acc1 = RowAccumulator::new(dim);
        let mut acc2 = RowAccumulator::new(dim);
        let mut targets = vec![None; dim];
        for b in 0..dim {
            for c in 0..dim {
                let base = code.base(&[a, b, c]);
                let mut any = false;
                for (m, slot) in targets.iter_mut().enumerate() {
                    *slot = idx.block_with_key(code.shift(base, m)).filter(|bl| sink.wants(*bl));
                    any |= slot.is_some();
                }
                if !any {
                    continue;
                }
                acc1.set_targets(|m| targets[m]);
                acc2.set_targets(|m| targets[m]);

                // f([a,b], c) - (-1)^{|a|γ}[a, f(b,c)] - (-1)^{|b||c|}[f(a,c), b]
                for (d, v) in s.bracket_basis(a, b) {
                    let row = (d * dim + c) * dim;
                    for m in 0..dim {
                        acc1.add(&idx, m, row + m, v.clone());
                    }
                }
                let s1 = par[a].koszul_negative(gamma);
                for k in 0..dim {
                    let u = (b * dim + c) * dim + k;
                    if !idx.is_unknown(u) {
                        continue;
                    }
                    for (m, v) in s.bracket_basis(a, k) {
                        acc1.add(&idx, *m, u, if s1 { v.clone() } else { f.neg(v) });
                    }
                }
                let s2 = par[b].koszul_negative(par[c]);
                for k in 0..dim {
                    let u = (a * dim + c) * dim + k;
                    if !idx.is_unknown(u) {
                        continue;
                    }
                    for (m, v) in s.bracket_basis(k, b) {
                        acc1.add(&idx, *m, u, if s2 { v.clone() } else { f.neg(v) });
                    }
                }

                // f(a, [b,c]) - [f(a,b), c] - (-1)^{(γ+|a|)|b|}[b, f(a,c)]
                for (d, v) in s.bracket_basis(b, c) {
                    let row = a * n2 + d * dim;
                    for m in 0..dim {
                        acc2.add(&idx, m, row + m, v.clone());
                    }
                }
                for k in 0..dim {
                    let u = (a * dim + b) * dim + k;
                    if !idx.is_unknown(u) {
                        continue;
                    }
                    for (m, v) in s.bracket_basis(k, c) {
                        acc2.add(&idx, *m, u, f.neg(v));
                    }
                }
                let s3 = (gamma + par[a]).koszul_negative(par[b]);
                for k in 0..dim {
                    let u = (a * dim + c) * dim + k;
                    if !idx.is_unknown(u) {
                        continue;
                    }
                    for (m, v) in s.bracket_basis(b, k) {
                        acc2.add(&idx, *m, u, if s3 { v.clone() } else { f.neg(v) });
                    }
                }
                acc1.flush(f, &idx, sink, &cross);
                acc2.flush(f, &idx, sink, &cross);
            }
        }
    });

    let mut blocks = Vec::with_capacity(outcomes.len());
    let mut solutions = Vec::new();
    let mut complete = true;
    for (b, o) in outcomes.iter().enumerate() {
        let u = idx.blocks[b][0] as usize;
        let (x, y, k) = (u / n2, u / dim % dim, u % dim);
        let w = weight_difference(t, k, &[x, y]);
        blocks.push(BiderBlock {
            parity: gamma,
            weight: if opts.unblocked { "all".into() } else { w.to_string() },
            weight_is_zero: !opts.unblocked && w.is_zero(),
            degree: if opts.unblocked { 0 } else { degree_difference(t, k, &[x, y]) },
            unknowns: o.unknowns,
            rows: o.rows,
            rank: o.rank,
            nullity: o.nullity(),
            lower_bound: specs[b].unknowns - specs[b].stop_rank,
            status: o.status,
        });
        complete &= o.status != BlockStatus::LimitExceeded;
        if let Some(ns) = &o.nullspace {
            solutions.extend(ns.iter().map(|v| idx.globalize(b, v)));
        }
    }
    Ok(ParitySolution {
        parity: gamma,
        field: field.tag(),
        unknowns: idx.total(),
        total_nullity: blocks.iter().map(|b| b.nullity).sum(),
        blocks,
        solutions,
        cross_block_rows: cross.load(Ordering::Relaxed),
        complete,
    })
}

/// Solves both parities and decides whether every biderivation is inner:
/// even nullity 1 with the bracket in the span, odd nullity 0.
pub fn solve_bder<F: Field>(t: &AlgebraTable, field: F, opts: BiderOptions) -> Result<BiderSolution<F::Elem>, Error> {
    let bracket_ok = bracket_is_biderivation(t);
    let even = solve_bder_parity(t, Parity::Even, field.clone(), opts, bracket_ok)?;
    let odd = solve_bder_parity(t, Parity::Odd, field.clone(), opts, false)?;
    let dim = t.dim();
    let bracket_in_span = bracket_in_span(t, field, &even)?;
    let inner = bracket_ok && even.complete && odd.complete && even.total_nullity == 1 && odd.total_nullity == 0 && bracket_in_span;
    Ok(BiderSolution { dim, even, odd, bracket_is_solution: bracket_ok, bracket_in_span, inner })
}

/// Whether the (nonzero) bracket lies in the span of a complete, retained
/// even solution.
pub fn bracket_in_span<F: Field>(t: &AlgebraTable, field: F, even: &ParitySolution<F::Elem>) -> Result<bool, Error> {
    let bracket = bracket_vector(t, &field)?;
    if bracket.is_empty() || even.parity != Parity::Even || !even.complete || even.solutions.len() != even.total_nullity {
        return Ok(false);
    }
    let dim = t.dim();
    let mut ech = Echelon::new(field, dim * dim * dim);
    for v in &even.solutions {
        ech.insert(v.clone());
    }
    Ok(ech.contains(bracket))
}

/// Biderivations of a Lie algebra (every basis element even).
pub fn solve_bder_lie<F: Field>(t: &AlgebraTable, field: F, opts: BiderOptions) -> Result<BiderSolution<F::Elem>, Error> {
    if t.parities().contains(&Parity::Odd) {
        return Err(Error::Precondition { family: t.family().into(), n: t.n(), requirement: "a purely even table".into() });
    }
    solve_bder(t, field, opts)
}

/// Modular certificate for `BDer = IBDer`.
///
/// Rank can only drop mod p, so the rational nullity of each block is at
/// most its F_p nullity. The bracket is an exact rational solution, so the
/// rational even nullity is at least 1. F_p nullities (1, 0) therefore pin
/// the rational dimensions to (1, 0).
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Certificate {
    pub prime: u64,
    pub even_nullity_mod_p: usize,
    pub odd_nullity_mod_p: usize,
    pub bracket_residual_zero: bool,
    pub bracket_in_span_mod_p: bool,
    pub complete: bool,
    pub cross_block_rows: usize,
    pub valid: bool,
}

impl Certificate {
    pub fn new(prime: u64, even: &ParitySolution<u64>, odd: &ParitySolution<u64>, bracket_residual_zero: bool, bracket_in_span_mod_p: bool) -> Self {
        let complete = even.complete && odd.complete;
        let cross_block_rows = even.cross_block_rows + odd.cross_block_rows;
        Certificate {
            prime,
            even_nullity_mod_p: even.total_nullity,
            odd_nullity_mod_p: odd.total_nullity,
            bracket_residual_zero,
            bracket_in_span_mod_p,
            complete,
            cross_block_rows,
            valid: bracket_residual_zero
                && bracket_in_span_mod_p
                && complete
                && cross_block_rows == 0
                && even.total_nullity == 1
                && odd.total_nullity == 0,
        }
    }
}

pub fn certify_mod_p(t: &AlgebraTable, p: u64, opts: BiderOptions) -> Result<(Certificate, BiderSolution<u64>), Error> {
    let sol = solve_bder(t, PrimeField::new(p)?, opts)?;
    let cert = Certificate::new(p, &sol.even, &sol.odd, sol.bracket_is_solution, sol.bracket_in_span);
    Ok((cert, sol))
}

#[cfg(test)]
mod tests;
