//! Superderivations `D[x,y] = [Dx,y] + (-1)^{|D||x|}[x,Dy]`, solved as one
//! linear system per parity, split into weight/degree blocks.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::exterior::Parity;
use crate::families::LPrime;
use crate::linalg::{solve_blocked, BlockSpec, BlockStatus, Echelon, Field, FieldTag, SparseVec};
use crate::superfields::{degree_difference, weight_difference, AlgebraTable, GradingCode, Structure};
use crate::system::{RowAccumulator, UnknownIndex};
use crate::Error;

#[derive(Clone, Copy, Debug, Default)]
pub struct DerOptions {
    pub row_limit: Option<usize>,
    /// Solve everything as one block instead of splitting by grade.
    pub unblocked: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DerBlockReport {
    pub weight: String,
    pub degree: i64,
    pub unknowns: usize,
    pub rows: usize,
    pub rank: usize,
    pub nullity: usize,
    pub status: BlockStatus,
}

/// Derivations of one parity. Basis vectors are indexed by `k * dim + m`,
/// the coefficient of `e_m` in `D e_k`.
#[derive(Clone, Debug)]
pub struct DerivationSolution<E> {
    pub parity: Parity,
    pub field: FieldTag,
    pub dim: usize,
    pub unknowns: usize,
    pub blocks: Vec<DerBlockReport>,
    pub basis: Vec<SparseVec<E>>,
    pub cross_block_rows: usize,
    pub complete: bool,
}

impl<E: Clone> DerivationSolution<E> {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Basis map `i` as images `D e_k`, one sparse vector per `k`.
    pub fn map(&self, i: usize) -> Vec<SparseVec<E>> {
        let mut out = vec![Vec::new(); self.dim];
        for (t, x) in &self.basis[i] {
            out[t / self.dim].push((t % self.dim, x.clone()));
        }
        out
    }
}

/// Number of unknowns `d_k^m` with `|e_m| = |e_k| + γ`.
pub fn derivation_unknowns(t: &AlgebraTable, gamma: Parity) -> usize {
    let p = t.parities();
    p.iter().map(|pk| p.iter().filter(|pm| **pm == *pk + gamma).count()).sum()
}

pub fn solve_derivations<F: Field>(t: &AlgebraTable, gamma: Parity, field: F, opts: DerOptions) -> Result<DerivationSolution<F::Elem>, Error> {
    let dim = t.dim();
    let s = t.structure(field.clone())?;
    let code = GradingCode::new(t)?;
    let par = t.parities();
    let idx = UnknownIndex::new(dim * dim, opts.unblocked, |u| {
        let (k, m) = (u / dim, u % dim);
        (par[m] == par[k] + gamma).then(|| code.key(m, &[k]))
    });
    let specs: Vec<BlockSpec> = idx.blocks.iter().map(|b| BlockSpec { unknowns: b.len(), stop_rank: b.len() }).collect();
    let cross = AtomicUsize::new(0);
    let f = &field;
    let outcomes = solve_blocked(f, &specs, dim, opts.row_limit, true, |a, sink| {
        let mut acc = RowAccumulator::new(dim);
        let minus_one = f.neg(&f.one());
        for b in 0..dim {
            let base = code.base(&[a, b]);
            acc.set_targets(|m| idx.block_with_key(code.shift(base, m)).filter(|bl| sink.wants(*bl)));
            // D[e_a, e_b]
            for (d, c) in s.bracket_basis(a, b) {
                for m in 0..dim {
                    acc.add(&idx, m, d * dim + m, c.clone());
                }
            }
            // -[D e_a, e_b]
            for k in 0..dim {
                for (m, c) in s.bracket_basis(k, b) {
                    acc.add(&idx, *m, a * dim + k, f.neg(c));
                }
            }
            // -(-1)^{γ|a|}[e_a, D e_b]
            let sign = if gamma.koszul_negative(par[a]) { f.one() } else { minus_one.clone() };
            for k in 0..dim {
                for (m, c) in s.bracket_basis(a, k) {
                    acc.add(&idx, *m, b * dim + k, f.mul(&sign, c));
                }
            }
            acc.flush(f, &idx, sink, &cross);
        }
    });

    let mut blocks = Vec::with_capacity(outcomes.len());
    let mut basis = Vec::new();
    let mut complete = true;
    for (b, o) in outcomes.iter().enumerate() {
        let rep = idx.blocks[b][0] as usize;
        let (k, m) = (rep / dim, rep % dim);
        blocks.push(DerBlockReport {
            weight: if opts.unblocked { "all".into() } else { weight_difference(t, m, &[k]).to_string() },
            degree: if opts.unblocked { 0 } else { degree_difference(t, m, &[k]) },
            unknowns: o.unknowns,
            rows: o.rows,
            rank: o.rank,
            nullity: o.nullity(),
            status: o.status,
        });
        complete &= o.status != BlockStatus::LimitExceeded;
        if let Some(ns) = &o.nullspace {
            basis.extend(ns.iter().map(|v| idx.globalize(b, v)));
        }
    }
    Ok(DerivationSolution {
        parity: gamma,
        field: field.tag(),
        dim,
        unknowns: idx.total(),
        blocks,
        basis,
        cross_block_rows: cross.load(Ordering::Relaxed),
        complete,
    })
}

/// Evaluates the derivation identity for a map given by images `D e_k`;
/// returns the first pair `(a, b)` with a nonzero residual.
pub fn derivation_residual<F: Field>(s: &Structure<F>, gamma: Parity, map: &[SparseVec<F::Elem>]) -> Option<(usize, usize)> {
    let f = s.field();
    let dim = s.dim();
    let apply = |x: &[(usize, F::Elem)]| -> Vec<F::Elem> {
        let mut out = vec![f.zero(); dim];
        for (k, c) in x {
            for (m, d) in &map[*k] {
                out[*m] = f.add(&out[*m], &f.mul(c, d));
            }
        }
        out
    };
    for a in 0..dim {
        for b in 0..dim {
            let mut r = apply(s.bracket_basis(a, b));
            for (k, c) in &map[a] {
                for (m, v) in s.bracket_basis(*k, b) {
                    r[*m] = f.sub(&r[*m], &f.mul(c, v));
                }
            }
            let negative = gamma.koszul_negative(s.parity(a));
            for (k, c) in &map[b] {
                for (m, v) in s.bracket_basis(a, *k) {
                    let term = f.mul(c, v);
                    r[*m] = if negative { f.add(&r[*m], &term) } else { f.sub(&r[*m], &term) };
                }
            }
            if r.iter().any(|x| !f.is_zero(x)) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Comparison of the computed derivations with `ad L′`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DerClassification {
    pub parity: Parity,
    pub der_dim: usize,
    /// Basis elements of L′ of this parity.
    pub lprime_count: usize,
    pub ad_rank: usize,
    /// `x -> ad x` is injective on this parity part of L′.
    pub injective: bool,
    pub ad_in_der: bool,
    pub der_in_ad: bool,
    /// Outer elements of L′ whose adjoint action is not inner.
    pub outer: Vec<String>,
    pub witness: Option<String>,
    pub passed: bool,
}

/// Checks `Der_γ L = ad L′_γ`: both inclusions by span membership, plus
/// injectivity of `ad` on L′.
pub fn classify_derivations<F: Field>(sol: &DerivationSolution<F::Elem>, field: F, lprime: &LPrime) -> Result<DerClassification, Error> {
    let lp = lprime.table.structure(field.clone())?;
    let dim = lprime.base_dim;
    assert_eq!(dim, sol.dim, "solution and L′ disagree on dim L");
    let gamma = sol.parity;
    let n2 = dim * dim;
    let mut witness = None;

    let mut ad_vectors = Vec::new();
    let mut names = Vec::new();
    for x in 0..lprime.table.dim() {
        if lprime.table.parity(x) != gamma {
            continue;
        }
        let mut v = Vec::new();
        for k in 0..dim {
            for (m, c) in lp.bracket_basis(x, lprime.embed(k)) {
                if *m >= dim && witness.is_none() {
                    witness = Some(format!("ad of L′ element {x} maps e_{k} outside L"));
                }
                v.push((k * dim + m, c.clone()));
            }
        }
        v.sort_by_key(|(t, _)| *t);
        ad_vectors.push((x, v));
        names.push(lprime.outer.iter().find(|(p, _)| *p == x).map(|(_, s)| s.clone()));
    }

    let mut der = Echelon::new(field.clone(), n2);
    for v in &sol.basis {
        der.insert(v.clone());
    }
    let mut ad = Echelon::new(field.clone(), n2);
    let mut inner = Echelon::new(field.clone(), n2);
    let mut ad_in_der = true;
    for (x, v) in &ad_vectors {
        ad.insert(v.clone());
        if *x < dim {
            inner.insert(v.clone());
        }
        if !der.contains(v.clone()) {
            ad_in_der = false;
            witness.get_or_insert_with(|| format!("ad of L′ element {x} is not a derivation"));
        }
    }
    let outer: Vec<String> = ad_vectors
        .iter()
        .zip(&names)
        .filter_map(|((_, v), name)| name.as_ref().filter(|_| !inner.contains(v.clone())).cloned())
        .collect();
    let mut der_in_ad = true;
    for (i, v) in sol.basis.iter().enumerate() {
        if !ad.contains(v.clone()) {
            der_in_ad = false;
            witness.get_or_insert_with(|| format!("derivation basis vector {i} is not in ad L′"));
            break;
        }
    }
    let injective = ad.rank() == ad_vectors.len();
    if !injective {
        witness.get_or_insert_with(|| "ad is not injective on L′".to_string());
    }
    let passed = sol.complete && injective && ad_in_der && der_in_ad && witness.is_none();
    Ok(DerClassification {
        parity: gamma,
        der_dim: sol.dimension(),
        lprime_count: ad_vectors.len(),
        ad_rank: ad.rank(),
        injective,
        ad_in_der,
        der_in_ad,
        outer,
        witness,
        passed,
    })
}

#[cfg(test)]
mod tests;
