//! Structural properties of the graded algebras that the biderivation
//! argument relies on, checked by exact rank computations.
//!
//! Irreducibility and simplicity are checked by proxies and sampling; the
//! reports say so in their `method` field.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior::Parity;
use crate::families::LPrime;
use crate::linalg::{Echelon, Rationals, SparseMatrix, SparseVec};
use crate::scalar::{rat, Rational};
use crate::superfields::{AlgebraTable, Structure, TableMeta, Weight};
use crate::Error;

/// Random vectors used by the sampled checks.
pub const SAMPLES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LemmaReport {
    pub id: String,
    pub passed: bool,
    /// On failure, data that can be re-checked against the table directly.
    pub witness: Option<String>,
    pub method: String,
}

impl LemmaReport {
    fn new(id: &str, method: &str, witness: Option<String>) -> Self {
        LemmaReport { id: id.into(), passed: witness.is_none(), witness, method: method.into() }
    }
}

fn q() -> Rationals {
    Rationals::new()
}

fn structure(t: &AlgebraTable) -> Structure<Rationals> {
    t.structure(q()).expect("rationals accept every constant")
}

fn basis_vec(k: usize) -> SparseVec<Rational> {
    vec![(k, rat(1))]
}

/// Indices of degree `d`, with `d` reduced for modular gradings.
fn degree_part(t: &AlgebraTable, d: i64) -> Vec<usize> {
    let d = t.reduce_degree(d);
    (0..t.dim()).filter(|&k| t.reduce_degree(t.degree(k)) == d).collect()
}

fn random_vector(rng: &mut ChaCha8Rng, support: &[usize]) -> SparseVec<Rational> {
    let mut v: SparseVec<Rational> = support.iter().map(|&k| (k, rat(rng.random_range(-5..=5)))).filter(|(_, x)| *x != rat(0)).collect();
    if v.is_empty() {
        v.push((support[0], rat(1)));
    }
    v
}

/// Dimension of the smallest subspace containing `start` and closed under
/// `x -> [g, x]` for every `g` in `ops`.
pub fn closure_dim(s: &Structure<Rationals>, ops: &[SparseVec<Rational>], start: &[SparseVec<Rational>]) -> usize {
    let mut ech = Echelon::new(q(), s.dim());
    let mut queue: Vec<SparseVec<Rational>> = Vec::new();
    for v in start {
        if ech.insert(v.clone()) {
            queue.push(v.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for g in ops {
            if ech.rank() == s.dim() {
                return ech.rank();
            }
            let w = s.bracket(g, &v);
            if !w.is_empty() && ech.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    ech.rank()
}

/// `[L₋₁, L_i] = L_{i-1}` for `0 ≤ i ≤ ξ`.
pub fn check_bracket_onto(t: &AlgebraTable) -> LemmaReport {
    let s = structure(t);
    let minus = degree_part(t, -1);
    let mut witness = None;
    for i in 0..=t.top_degree() {
        let target = degree_part(t, i - 1);
        let mut ech = Echelon::new(q(), t.dim());
        for &a in &minus {
            for &b in &degree_part(t, i) {
                ech.insert(s.bracket_basis(a, b).to_vec());
            }
        }
        let inside = target.iter().all(|&k| ech.contains(basis_vec(k)));
        if ech.rank() != target.len() || !inside {
            witness = Some(format!("i = {i}: span of brackets has rank {}, dim L_(i-1) = {}", ech.rank(), target.len()));
            break;
        }
    }
    LemmaReport::new("bracket-onto", "exact rank", witness)
}

/// The subalgebra generated by `L₋₁ ⊕ L₀ ⊕ L₁` is all of L.
pub fn check_generated(t: &AlgebraTable) -> LemmaReport {
    let start: Vec<usize> = [-1, 0, 1].iter().flat_map(|&d| degree_part(t, d)).collect();
    let reached = generated_dim(t, &start);
    let witness = (reached != t.dim()).then(|| format!("closure has dim {reached} of {}", t.dim()));
    LemmaReport::new("generated-by-local-part", "exact closure", witness)
}

/// Dimension of the subalgebra generated by the given basis elements.
pub fn generated_dim(t: &AlgebraTable, gens: &[usize]) -> usize {
    let s = structure(t);
    // alg(V) is spanned by iterated brackets [v1, [v2, ... v_r]] with v_j in V.
    let ops: Vec<_> = gens.iter().map(|&k| basis_vec(k)).collect();
    closure_dim(&s, &ops, &ops)
}

/// Transitivity of L′: `a ↦ [a, ·]|L′₋₁` is injective on the non-negative part.
pub fn check_transitive(lprime: &LPrime) -> LemmaReport {
    transitive_on(&lprime.table)
}

pub fn transitive_on(t: &AlgebraTable) -> LemmaReport {
    let s = structure(t);
    let dim = t.dim();
    let minus = degree_part(t, -1);
    let nonneg: Vec<usize> = (0..dim).filter(|&k| !minus.contains(&k)).collect();
    let mut ech = Echelon::new(q(), minus.len() * dim);
    let mut witness = None;
    for &a in &nonneg {
        let v: SparseVec<Rational> = minus.iter().enumerate().flat_map(|(x, &e)| s.bracket_basis(a, e).iter().map(move |(m, c)| (x * dim + m, c.clone()))).collect();
        if !ech.insert(v) {
            witness = Some(format!("[e_{a}, L_-1] is spanned by earlier non-negative elements"));
            break;
        }
    }
    LemmaReport::new("transitive", "exact rank", witness)
}

/// Commutant dimension and sampled generation for a family of operators on
/// an `r`-dimensional space (matrices as rows `m -> [(x, coeff)]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityProxy {
    pub commutant_dim: usize,
    /// First start vector (basis index, or `r + j` for the j-th random one)
    /// whose generated submodule is proper.
    pub proper_submodule_from: Option<usize>,
}

pub fn irreducibility_proxy(r: usize, ops: &[Vec<SparseVec<Rational>>], seed: u64) -> IrreducibilityProxy {
    // A M - M A = 0, unknown A[i][j] at i * r + j
    let mut rows = Vec::new();
    for m in ops {
        for i in 0..r {
            for j in 0..r {
                // (A M)[i][j] = Σ_k A[i][k] M[k][j];  (M A)[i][j] = Σ_k M[i][k] A[k][j]
                let mut row: Vec<(usize, Rational)> = Vec::new();
                for (k, mk) in m.iter().enumerate() {
                    for (c, v) in mk {
                        if *c == j {
                            row.push((i * r + k, v.clone()));
                        }
                    }
                }
                for (k, v) in &m[i] {
                    row.push((k * r + j, -v.clone()));
                }
                rows.push(crate::linalg::canonicalize(&q(), row));
            }
        }
    }
    let commutant_dim = SparseMatrix::from_rows(q(), r * r, rows).expect("indices in range").nullspace().dim();

    let apply = |m: &Vec<SparseVec<Rational>>, v: &SparseVec<Rational>| -> SparseVec<Rational> {
        let dense: Vec<Rational> = m.iter().map(|row| row.iter().filter_map(|(x, c)| v.iter().find(|(y, _)| y == x).map(|(_, w)| c * w)).sum()).collect();
        dense.into_iter().enumerate().filter(|(_, x)| *x != rat(0)).collect()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<usize> = (0..r).collect();
    let starts: Vec<SparseVec<Rational>> = (0..r).map(basis_vec).chain((0..SAMPLES).map(|_| random_vector(&mut rng, &all))).collect();
    let proper_submodule_from = starts.iter().position(|v| {
        let mut ech = Echelon::new(q(), r);
        ech.insert(v.clone());
        let mut queue = vec![v.clone()];
        while let Some(w) = queue.pop() {
            for m in ops {
                let u = apply(m, &w);
                if !u.is_empty() && ech.insert(u.clone()) {
                    queue.push(u);
                }
            }
        }
        ech.rank() < r
    });
    IrreducibilityProxy { commutant_dim, proper_submodule_from }
}

/// L₋₁ is an irreducible L₀-module (proxy: commutant of dimension 1 and
/// every sampled vector generates L₋₁).
pub fn check_irreducible(t: &AlgebraTable, seed: u64) -> LemmaReport {
    let s = structure(t);
    let minus = degree_part(t, -1);
    let pos = |k: usize| minus.iter().position(|&x| x == k);
    let ops: Vec<Vec<SparseVec<Rational>>> = degree_part(t, 0)
        .into_iter()
        .map(|h| {
            let mut m = vec![Vec::new(); minus.len()];
            for (x, &e) in minus.iter().enumerate() {
                for (k, c) in s.bracket_basis(h, e) {
                    m[pos(*k).expect("L_0 preserves L_-1")].push((x, c.clone()));
                }
            }
            m
        })
        .collect();
    let p = irreducibility_proxy(minus.len(), &ops, seed);
    let witness = if p.commutant_dim != 1 {
        Some(format!("commutant has dim {}", p.commutant_dim))
    } else {
        p.proper_submodule_from.map(|j| format!("start vector {j} generates a proper submodule"))
    };
    LemmaReport::new("irreducible-minus-one", "proxy: commutant dimension and sampled generation", witness)
}

/// Whether `x ↦ [x, ·]` from `span(left)` to maps on `span(right)` is injective.
pub fn pairing_injective(s: &Structure<Rationals>, left: &[usize], right: &[SparseVec<Rational>]) -> Option<usize> {
    let dim = s.dim();
    let mut ech = Echelon::new(q(), right.len() * dim);
    left.iter().copied().find(|&x| {
        let v: Vec<(usize, Rational)> = right.iter().enumerate().flat_map(|(j, y)| s.bracket(&basis_vec(x), y).into_iter().map(move |(m, c)| (j * dim + m, c))).collect();
        !ech.insert(crate::linalg::canonicalize(&q(), v))
    })
}

/// For `k + l = ξ`, `[x, L_l] = 0` with `x ∈ L_k` forces `x = 0`.
pub fn check_h_pairing(t: &AlgebraTable) -> LemmaReport {
    let s = structure(t);
    let xi = t.top_degree();
    let mut witness = None;
    for k in -1..=xi {
        let l = xi - k;
        if !(-1..=xi).contains(&l) {
            continue;
        }
        let right: Vec<_> = degree_part(t, l).into_iter().map(basis_vec).collect();
        if let Some(x) = pairing_injective(&s, &degree_part(t, k), &right) {
            witness = Some(format!("(k, l) = ({k}, {l}): e_{x} is in the span of earlier images"));
            break;
        }
    }
    LemmaReport::new("top-degree-pairing", "exact rank", witness)
}

/// The ideal generated by each basis vector and by sampled vectors is L.
pub fn check_simplicity_sample(t: &AlgebraTable, seed: u64) -> LemmaReport {
    let s = structure(t);
    let dim = t.dim();
    let ops: Vec<_> = (0..dim).map(basis_vec).collect();
    let all: Vec<usize> = (0..dim).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<SparseVec<Rational>> = (0..dim).map(basis_vec).chain((0..SAMPLES).map(|_| random_vector(&mut rng, &all))).collect();
    let witness = starts.iter().enumerate().find_map(|(j, v)| {
        let d = closure_dim(&s, &ops, std::slice::from_ref(v));
        (d != dim).then(|| format!("start vector {j} generates an ideal of dim {d}"))
    });
    LemmaReport::new("simplicity-sample", "sampled ideal closure", witness)
}

/// `t ⊕ ℂz` with `z` even, central, of degree 0 and weight 0.
pub fn with_central_element(t: &AlgebraTable) -> Result<AlgebraTable, Error> {
    let dim = t.dim();
    let mut constants = Vec::with_capacity((dim + 1) * (dim + 1));
    for a in 0..=dim {
        for b in 0..=dim {
            constants.push(if a < dim && b < dim { t.bracket_basis(a, b).to_vec() } else { Vec::new() });
        }
    }
    let mut parity = t.parities().to_vec();
    parity.push(Parity::Even);
    let mut degree = t.degrees().to_vec();
    degree.push(0);
    let mut weight = t.weights().to_vec();
    weight.push(Weight::zero(t.cartan().len()));
    let mut meta = TableMeta::new(format!("{} + center", t.family()), t.n());
    meta.degree_modulus = t.degree_modulus();
    AlgebraTable::from_parts(meta, parity, degree, weight, t.cartan().to_vec(), constants)
}

#[cfg(test)]
mod tests;
