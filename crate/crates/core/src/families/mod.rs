//! The Cartan-type families W(n), S(n), S̃(n), H(n), the auxiliary H̃(n),
//! and the algebras L′ with Der L = ad L′.

mod roots;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::exterior::{Monomial, Parity};
use crate::linalg::{Echelon, Rationals};
use crate::scalar::{rat, Rational};
use crate::superfields::{AlgebraTable, TableMeta, VectorField};
use crate::{Error, Poly};

pub use roots::{compare_roots, paper_coordinates, paper_roots, roots, RootComparison};

/// The four simple families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Family {
    W,
    S,
    #[serde(rename = "Stilde")]
    STilde,
    H,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::W, Family::S, Family::STilde, Family::H];

    pub fn name(self) -> &'static str {
        match self {
            Family::W => "W",
            Family::S => "S",
            Family::STilde => "Stilde",
            Family::H => "H",
        }
    }

    /// Rejects `n` for which the family is not defined here.
    pub fn check(self, n: usize) -> Result<(), Error> {
        let fail = |requirement: &str| Err(Error::Precondition { family: self.name().into(), n, requirement: requirement.into() });
        if n < 2 {
            return fail("n >= 2");
        }
        if n > 10 {
            return fail("n <= 10");
        }
        if self == Family::H && n < 4 {
            return fail("n >= 4");
        }
        if self == Family::STilde && n % 2 == 1 {
            return fail("n even");
        }
        Ok(())
    }

    /// Whether `n` lies in the range where the family is simple and the
    /// biderivation theorems apply: n >= 4 (W, S, S̃), n > 4 (H).
    pub fn in_theorem_scope(self, n: usize) -> bool {
        self.check(n).is_ok()
            && match self {
                Family::H => n > 4,
                _ => n >= 4,
            }
    }

    /// Top degree `ξ_L`.
    pub fn top_degree(self, n: usize) -> i64 {
        let n = n as i64;
        match self {
            Family::W => n - 1,
            Family::S | Family::STilde => n - 2,
            Family::H => n - 3,
        }
    }

    pub fn build(self, n: usize) -> Result<AlgebraTable, Error> {
        match self {
            Family::W => build_w(n),
            Family::S => build_s(n),
            Family::STilde => build_s_tilde(n),
            Family::H => build_h(n),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "W" | "w" => Ok(Family::W),
            "S" | "s" => Ok(Family::S),
            "Stilde" | "stilde" | "S~" => Ok(Family::STilde),
            "H" | "h" => Ok(Family::H),
            _ => Err(format!("unknown family `{s}` (expected W, S, Stilde or H)")),
        }
    }
}

/// `sum_i partial_i(f_i)`.
pub fn divergence(d: &VectorField) -> Poly {
    let mut out = Poly::zero(d.n());
    for i in 1..=d.n() {
        out = &out + &d.component(i).partial(i).expect("index in range");
    }
    out
}

/// The index involution `i -> i′`: `i + r` for `i <= r`, `i - r` for
/// `r < i <= 2r`, and `i` otherwise, where `r = [n/2]`.
pub fn prime_index(i: usize, n: usize) -> Result<usize, Error> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let r = n / 2;
    Ok(if i <= r {
        i + r
    } else if i <= 2 * r {
        i - r
    } else {
        i
    })
}

/// The Hamiltonian field `D_H(f) = sum_i (-1)^{|f|} partial_i(f) partial_{i′}`,
/// applied termwise so that inhomogeneous `f` is handled linearly.
pub fn hamiltonian(f: &Poly) -> VectorField {
    let n = f.n();
    let mut out = VectorField::zero(n);
    for (m, c) in f.terms() {
        for i in 1..=n {
            let Some((neg, rest)) = m.partial(i) else { continue };
            let neg = neg != m.parity().is_odd();
            out.add_term(rest, prime_index(i, n).unwrap(), if neg { -c.clone() } else { c.clone() });
        }
    }
    out
}

/// `C = sum_i x_i partial_i`.
pub fn grading_element(n: usize) -> VectorField {
    let mut c = VectorField::zero(n);
    for i in 1..=n {
        c.add_term(Monomial::generator(n, i).unwrap(), i, rat(1));
    }
    c
}

fn term(n: usize, idx: &[usize], i: usize) -> VectorField {
    VectorField::term(Monomial::from_indices(n, idx).unwrap(), i, rat(1)).unwrap()
}

fn position(basis: &[VectorField], v: &VectorField) -> usize {
    basis.iter().position(|b| b == v).expect("Cartan element in basis")
}

/// Basis `{x_I partial_i}` ordered by degree, index set, then `i`.
pub fn w_basis(n: usize) -> Vec<VectorField> {
    let mut basis = Vec::with_capacity(n << n);
    for k in 0..=n {
        for m in Monomial::of_degree(n, k) {
            for i in 1..=n {
                basis.push(VectorField::term(m, i, rat(1)).unwrap());
            }
        }
    }
    basis
}

pub fn build_w(n: usize) -> Result<AlgebraTable, Error> {
    Family::W.check(n)?;
    let basis = w_basis(n);
    let cartan = (1..=n).map(|i| position(&basis, &term(n, &[i], i))).collect();
    AlgebraTable::from_fields(TableMeta::new("W", n), basis, cartan)
}

/// `x_j partial_j - x_{j+1} partial_{j+1}`.
fn traceless_diagonal(n: usize, j: usize) -> VectorField {
    &term(n, &[j], j) - &term(n, &[j + 1], j + 1)
}

/// Divergence-free fields of degree `d`, one weight space at a time, so that
/// every basis element is a weight vector. The zero-weight part of degree 0
/// is spanned by the traceless diagonal elements.
fn s_degree_basis(n: usize, d: i64) -> Vec<VectorField> {
    let mut blocks: BTreeMap<Vec<i64>, Vec<(Monomial, usize)>> = BTreeMap::new();
    for m in Monomial::of_degree(n, (d + 1) as usize) {
        for i in 1..=n {
            let mut w: Vec<i64> = (1..=n).map(|j| m.contains(j) as i64).collect();
            w[i - 1] -= 1;
            blocks.entry(w).or_default().push((m, i));
        }
    }
    let mut out = Vec::new();
    let q = Rationals::new();
    // blocks in order of their first term, for a degree-then-lexicographic basis
    let mut ordered: Vec<_> = blocks.into_iter().collect();
    ordered.sort_by_key(|(_, terms)| terms[0]);
    for (w, terms) in ordered {
        if d == 0 && w.iter().all(|&x| x == 0) {
            out.extend((1..n).map(|j| traceless_diagonal(n, j)));
            continue;
        }
        // row r of the divergence matrix is the coefficient of monomial r
        let images: Vec<Poly> = terms.iter().map(|&(m, i)| divergence(&VectorField::term(m, i, rat(1)).unwrap())).collect();
        let mut rows: BTreeMap<Monomial, Vec<(usize, Rational)>> = BTreeMap::new();
        for (col, img) in images.iter().enumerate() {
            for (m, c) in img.terms() {
                rows.entry(*m).or_default().push((col, c.clone()));
            }
        }
        let mut ech = Echelon::new(q.clone(), terms.len());
        for (_, r) in rows {
            ech.insert(r);
        }
        for v in ech.nullspace() {
            let mut f = VectorField::zero(n);
            for (col, c) in v {
                f.add_term(terms[col].0, terms[col].1, c);
            }
            out.push(f);
        }
    }
    out
}

fn s_basis(n: usize, from_degree: i64) -> Vec<VectorField> {
    (from_degree..=(n as i64 - 2)).flat_map(|d| s_degree_basis(n, d)).collect()
}

fn s_cartan(n: usize, basis: &[VectorField]) -> Vec<usize> {
    (1..n).map(|j| position(basis, &traceless_diagonal(n, j))).collect()
}

pub fn build_s(n: usize) -> Result<AlgebraTable, Error> {
    Family::S.check(n)?;
    let basis = s_basis(n, -1);
    let cartan = s_cartan(n, &basis);
    AlgebraTable::from_fields(TableMeta::new("S", n), basis, cartan)
}

/// `(1 - x_1 ... x_n) partial_i`.
pub fn twisted_partial(n: usize, i: usize) -> VectorField {
    let mut v = VectorField::partial(n, i).unwrap();
    v.add_term(Monomial::top(n), i, rat(-1));
    v
}

pub fn build_s_tilde(n: usize) -> Result<AlgebraTable, Error> {
    Family::STilde.check(n)?;
    let mut basis: Vec<VectorField> = (1..=n).map(|i| twisted_partial(n, i)).collect();
    basis.extend(s_basis(n, 0));
    let cartan = s_cartan(n, &basis);
    AlgebraTable::from_fields(TableMeta::new("Stilde", n).with_modulus(n as i64), basis, cartan)
}

fn h_basis(n: usize, max_degree: usize) -> Vec<VectorField> {
    (1..=max_degree).flat_map(|k| Monomial::of_degree(n, k)).map(|m| hamiltonian(&Poly::monomial(m, rat(1)))).collect()
}

fn h_cartan(n: usize, basis: &[VectorField]) -> Vec<usize> {
    (1..=n / 2)
        .map(|i| {
            let m = Monomial::from_indices(n, &[i, prime_index(i, n).unwrap()]).unwrap();
            position(basis, &hamiltonian(&Poly::monomial(m, rat(1))))
        })
        .collect()
}

pub fn build_h(n: usize) -> Result<AlgebraTable, Error> {
    Family::H.check(n)?;
    let basis = h_basis(n, n - 1);
    let cartan = h_cartan(n, &basis);
    AlgebraTable::from_fields(TableMeta::new("H", n), basis, cartan)
}

/// `{D_H(f) : f in Λ(n)}`, i.e. H(n) plus `D_H(x_1 ... x_n)`.
pub fn build_h_tilde(n: usize) -> Result<AlgebraTable, Error> {
    Family::H.check(n)?;
    let basis = h_basis(n, n);
    let cartan = h_cartan(n, &basis);
    AlgebraTable::from_fields(TableMeta::new("Htilde", n), basis, cartan)
}

/// The algebra L′ with Der L = ad L′, containing L as the first `base_dim`
/// basis elements.
#[derive(Clone, Debug)]
pub struct LPrime {
    pub family: Family,
    pub table: AlgebraTable,
    pub base_dim: usize,
    /// Positions and names of the elements added to L.
    pub outer: Vec<(usize, String)>,
}

impl LPrime {
    /// Position in L′ of basis element `k` of L.
    pub fn embed(&self, k: usize) -> usize {
        assert!(k < self.base_dim);
        k
    }
}

pub fn build_lprime(family: Family, n: usize) -> Result<LPrime, Error> {
    family.check(n)?;
    let base = family.build(n)?;
    let base_dim = base.dim();
    let mut basis = base.fields().expect("constructed from fields").to_vec();
    let cartan = base.cartan().to_vec();
    let mut outer = Vec::new();
    let mut meta = TableMeta::new(format!("L'({})", family.name()), n);
    match family {
        Family::W => {}
        Family::STilde => meta = meta.with_modulus(n as i64),
        Family::S => {
            outer.push((basis.len(), "C".to_string()));
            basis.push(grading_element(n));
        }
        Family::H => {
            outer.push((basis.len(), "D_H(x1...xn)".to_string()));
            basis.push(hamiltonian(&Poly::monomial(Monomial::top(n), rat(1))));
            outer.push((basis.len(), "C".to_string()));
            basis.push(grading_element(n));
        }
    }
    let table = AlgebraTable::from_fields(meta, basis, cartan)?;
    Ok(LPrime { family, table, base_dim, outer })
}

/// Checks `[D_H(f), D_H(g)] = D_H(D_H(f)(g))` for all monomials `f`, `g`;
/// returns the number of pairs checked or the first failing pair.
pub fn check_hamiltonian_bracket(n: usize) -> Result<usize, (Monomial, Monomial)> {
    let monos = Monomial::all(n);
    for &f in &monos {
        let pf = Poly::monomial(f, rat(1));
        let df = hamiltonian(&pf);
        for &g in &monos {
            let pg = Poly::monomial(g, rat(1));
            if df.bracket(&hamiltonian(&pg)) != hamiltonian(&df.apply(&pg)) {
                return Err((f, g));
            }
        }
    }
    Ok(monos.len() * monos.len())
}

/// Dimension of each degree component, in increasing degree.
pub fn degree_census(t: &AlgebraTable) -> Vec<(i64, usize)> {
    let mut m: BTreeMap<i64, usize> = BTreeMap::new();
    for k in 0..t.dim() {
        *m.entry(t.degree(k)).or_default() += 1;
    }
    m.into_iter().collect()
}

/// Dimension of each parity component `(even, odd)`.
pub fn parity_census(t: &AlgebraTable) -> (usize, usize) {
    let odd = t.parities().iter().filter(|p| **p == Parity::Odd).count();
    (t.dim() - odd, odd)
}
