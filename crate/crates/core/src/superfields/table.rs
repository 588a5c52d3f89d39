use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use super::vector::SuperVectorField;
use crate::exterior::Parity;
use crate::linalg::{Field, Rationals, SpanBasis, SparseVec};
use crate::scalar::{format_rational, Rational};
use crate::Error;

/// Vector field with rational coefficients.
pub type VectorField = SuperVectorField<Rational>;

/// A weight: eigenvalues of the Cartan basis elements, in order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Weight(pub Vec<Rational>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![Rational::zero(); rank])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Weight(v.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Coordinate sum.
    pub fn l(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_rational(x))?;
        }
        f.write_str(")")
    }
}

/// Family label and grading conventions of a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableMeta {
    pub family: String,
    pub n: usize,
    /// `Some(m)` when degrees are only defined mod `m`.
    pub degree_modulus: Option<i64>,
}

impl TableMeta {
    pub fn new(family: impl Into<String>, n: usize) -> Self {
        TableMeta { family: family.into(), n, degree_modulus: None }
    }

    pub fn with_modulus(mut self, m: i64) -> Self {
        self.degree_modulus = Some(m);
        self
    }
}

/// A finite-dimensional Lie superalgebra given by structure constants
/// `[e_a, e_b] = sum_k c_ab^k e_k` in a homogeneous weight basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraTable {
    meta: TableMeta,
    parity: Vec<Parity>,
    degree: Vec<i64>,
    weight: Vec<Weight>,
    cartan: Vec<usize>,
    constants: Vec<SparseVec<Rational>>,
    fields: Option<Vec<VectorField>>,
}

/// Outcome of the exhaustive super-Jacobi check.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct JacobiReport {
    pub passed: bool,
    pub triples_checked: usize,
    /// First failing triple `(x, y, z)` in lexicographic order.
    pub counterexample: Option<[usize; 3]>,
    /// Nonzero coordinates of the residual at the counterexample.
    pub residual: Vec<(usize, String)>,
}

fn reduce_mod(d: i64, modulus: Option<i64>) -> i64 {
    match modulus {
        // representatives -1..=m-2
        Some(m) => (d + 1).rem_euclid(m) - 1,
        None => d,
    }
}

impl AlgebraTable {
    /// Coordinatizes brackets of a basis of vector fields.
    ///
    /// `cartan` lists basis positions of pairwise commuting elements that must
    /// act diagonally; their eigenvalues become the weights.
    pub fn from_fields(meta: TableMeta, fields: Vec<VectorField>, cartan: Vec<usize>) -> Result<Self, Error> {
        let n = meta.n;
        let dim = fields.len();
        let mut parity = Vec::with_capacity(dim);
        let mut degree = Vec::with_capacity(dim);
        for (k, v) in fields.iter().enumerate() {
            assert_eq!(v.n(), n, "field over a different generator count");
            parity.push(v.parity().ok_or(Error::Inhomogeneous(k, "parity"))?);
            let d0 = v.min_degree().ok_or(Error::Inhomogeneous(k, "zero field"))?;
            let d0 = reduce_mod(d0, meta.degree_modulus);
            for (m, _, _) in v.terms() {
                if reduce_mod(m.degree() as i64 - 1, meta.degree_modulus) != d0 {
                    return Err(Error::Inhomogeneous(k, "degree"));
                }
            }
            degree.push(d0);
        }

        let q = Rationals::new();
        let ambient = n << n;
        let mut span = SpanBasis::new(q.clone(), ambient);
        for (k, v) in fields.iter().enumerate() {
            span.push(ambient_coords(v)).map_err(|_| Error::DependentBasis(k))?;
        }

        let constants: Vec<SparseVec<Rational>> = (0..dim * dim)
            .into_par_iter()
            .map(|ab| {
                let (a, b) = (ab / dim, ab % dim);
                let br = fields[a].bracket(&fields[b]);
                span.coordinates(ambient_coords(&br)).ok_or(Error::NonClosure { a, b })
            })
            .collect::<Result<_, _>>()?;

        let mut weight = vec![Weight(Vec::with_capacity(cartan.len())); dim];
        for (i, &h) in cartan.iter().enumerate() {
            for &h2 in &cartan[i + 1..] {
                if !constants[h * dim + h2].is_empty() {
                    return Err(Error::CartanNotAbelian(h, h2));
                }
            }
            for (k, w) in weight.iter_mut().enumerate() {
                let row = &constants[h * dim + k];
                let ev = match row.as_slice() {
                    [] => Rational::zero(),
                    [(j, v)] if *j == k => v.clone(),
                    _ => return Err(Error::NonDiagonalCartan { h, k }),
                };
                w.0.push(ev);
            }
        }

        let table = AlgebraTable { meta, parity, degree, weight, cartan, constants, fields: Some(fields) };
        table.validate()?;
        Ok(table)
    }

    /// Builds a table from raw data and validates it.
    pub fn from_parts(
        meta: TableMeta,
        parity: Vec<Parity>,
        degree: Vec<i64>,
        weight: Vec<Weight>,
        cartan: Vec<usize>,
        constants: Vec<SparseVec<Rational>>,
    ) -> Result<Self, Error> {
        let t = Self::from_parts_unchecked(meta, parity, degree, weight, cartan, constants);
        t.validate()?;
        Ok(t)
    }

    /// Builds a table without validation; for loading tables that are checked
    /// afterwards, and for mutation tests.
    pub fn from_parts_unchecked(
        meta: TableMeta,
        parity: Vec<Parity>,
        degree: Vec<i64>,
        weight: Vec<Weight>,
        cartan: Vec<usize>,
        constants: Vec<SparseVec<Rational>>,
    ) -> Self {
        let dim = parity.len();
        assert_eq!(degree.len(), dim);
        assert_eq!(weight.len(), dim);
        assert_eq!(constants.len(), dim * dim);
        AlgebraTable { meta, parity, degree, weight, cartan, constants, fields: None }
    }

    /// A purely even table with zero degrees and no Cartan data.
    pub fn lie(family: impl Into<String>, constants: Vec<SparseVec<Rational>>) -> Result<Self, Error> {
        let dim = (constants.len() as f64).sqrt() as usize;
        assert_eq!(dim * dim, constants.len(), "constants must be dim x dim");
        Self::from_parts(
            TableMeta::new(family, 0),
            vec![Parity::Even; dim],
            vec![0; dim],
            vec![Weight(Vec::new()); dim],
            Vec::new(),
            constants,
        )
    }

    /// Checks the homogeneity and skew-symmetry invariants of the constants.
    pub fn validate(&self) -> Result<(), Error> {
        let dim = self.dim();
        let rank = self.cartan.len();
        for (k, w) in self.weight.iter().enumerate() {
            if w.rank() != rank {
                return Err(Error::InvalidTable { a: k, b: k, k, property: "weight rank" });
            }
        }
        for &h in &self.cartan {
            if h >= dim {
                return Err(Error::InvalidTable { a: h, b: h, k: h, property: "cartan index" });
            }
        }
        for a in 0..dim {
            for b in 0..dim {
                let row = &self.constants[a * dim + b];
                if !row.windows(2).all(|w| w[0].0 < w[1].0) || row.iter().any(|(_, v)| v.is_zero()) {
                    return Err(Error::InvalidTable { a, b, k: 0, property: "canonical row" });
                }
                for (k, c) in row {
                    let k = *k;
                    if k >= dim {
                        return Err(Error::InvalidTable { a, b, k, property: "index range" });
                    }
                    if self.parity[k] != self.parity[a] + self.parity[b] {
                        return Err(Error::InvalidTable { a, b, k, property: "parity" });
                    }
                    if self.reduce_degree(self.degree[a] + self.degree[b]) != self.degree[k] {
                        return Err(Error::InvalidTable { a, b, k, property: "degree" });
                    }
                    if self.weight[a].add(&self.weight[b]) != self.weight[k] {
                        return Err(Error::InvalidTable { a, b, k, property: "weight" });
                    }
                    let expected = if self.parity[a].koszul_negative(self.parity[b]) { c.clone() } else { -c.clone() };
                    if self.constant(b, a, k) != expected {
                        return Err(Error::InvalidTable { a, b, k, property: "super skew-symmetry" });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn meta(&self) -> &TableMeta {
        &self.meta
    }

    pub fn family(&self) -> &str {
        &self.meta.family
    }

    pub fn n(&self) -> usize {
        self.meta.n
    }

    pub fn dim(&self) -> usize {
        self.parity.len()
    }

    pub fn parity(&self, k: usize) -> Parity {
        self.parity[k]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parity
    }

    pub fn degree(&self, k: usize) -> i64 {
        self.degree[k]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degree
    }

    pub fn degree_modulus(&self) -> Option<i64> {
        self.meta.degree_modulus
    }

    /// Canonical representative of a degree (mod the degree modulus, if any).
    pub fn reduce_degree(&self, d: i64) -> i64 {
        reduce_mod(d, self.meta.degree_modulus)
    }

    pub fn weight(&self, k: usize) -> &Weight {
        &self.weight[k]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weight
    }

    pub fn cartan(&self) -> &[usize] {
        &self.cartan
    }

    /// Largest degree present.
    pub fn top_degree(&self) -> i64 {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    /// Lowest degree present.
    pub fn bottom_degree(&self) -> i64 {
        self.degree.iter().copied().min().unwrap_or(0)
    }

    /// Basis positions of degree `d`.
    pub fn degree_indices(&self, d: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.degree[k] == d).collect()
    }

    pub fn fields(&self) -> Option<&[VectorField]> {
        self.fields.as_deref()
    }

    pub fn without_fields(&self) -> Self {
        AlgebraTable { fields: None, ..self.clone() }
    }

    /// `[e_a, e_b]` in coordinates.
    pub fn bracket_basis(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        &self.constants[a * self.dim() + b]
    }

    pub fn constant(&self, a: usize, b: usize, k: usize) -> Rational {
        let row = self.bracket_basis(a, b);
        match row.binary_search_by_key(&k, |(j, _)| *j) {
            Ok(i) => row[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// All structure constant rows, indexed `a * dim + b`.
    pub fn constant_rows(&self) -> &[SparseVec<Rational>] {
        &self.constants
    }

    /// Overwrites one structure constant without any validation.
    pub fn set_constant_unchecked(&mut self, a: usize, b: usize, k: usize, value: Rational) {
        let dim = self.dim();
        let row = &mut self.constants[a * dim + b];
        match row.binary_search_by_key(&k, |(j, _)| *j) {
            Ok(i) if value.is_zero() => {
                row.remove(i);
            }
            Ok(i) => row[i].1 = value,
            Err(_) if value.is_zero() => {}
            Err(i) => row.insert(i, (k, value)),
        }
    }

    /// Structure constants mapped into another field.
    pub fn structure<F: Field>(&self, field: F) -> Result<Structure<F>, Error> {
        let constants = self
            .constants
            .iter()
            .map(|row| {
                let mapped = row.iter().map(|(k, v)| Ok((*k, field.from_rational(v)?))).collect::<Result<Vec<_>, Error>>()?;
                Ok(mapped.into_iter().filter(|(_, v)| !field.is_zero(v)).collect())
            })
            .collect::<Result<_, Error>>()?;
        Ok(Structure { field, dim: self.dim(), parity: self.parity.clone(), constants })
    }

    /// Subalgebra spanned by a subset of basis elements, renumbered in order.
    pub fn restrict(&self, indices: &[usize], family: impl Into<String>) -> Result<Self, Error> {
        let dim = self.dim();
        let mut position = vec![None; dim];
        for (new, &old) in indices.iter().enumerate() {
            position[old] = Some(new);
        }
        let mut constants = Vec::with_capacity(indices.len() * indices.len());
        for &a in indices {
            for &b in indices {
                let row = self
                    .bracket_basis(a, b)
                    .iter()
                    .map(|(k, v)| position[*k].map(|p| (p, v.clone())).ok_or(Error::NonClosure { a, b }))
                    .collect::<Result<Vec<_>, _>>()?;
                constants.push(row);
            }
        }
        let cartan: Vec<usize> = if self.cartan.iter().all(|h| position[*h].is_some()) {
            self.cartan.iter().map(|h| position[*h].unwrap()).collect()
        } else {
            Vec::new()
        };
        let weight = indices
            .iter()
            .map(|&k| if cartan.is_empty() { Weight(Vec::new()) } else { self.weight[k].clone() })
            .collect();
        let meta = TableMeta { family: family.into(), n: self.meta.n, degree_modulus: self.meta.degree_modulus };
        let fields = self.fields.as_ref().map(|f| indices.iter().map(|&k| f[k].clone()).collect());
        let mut t = Self::from_parts(
            meta,
            indices.iter().map(|&k| self.parity[k]).collect(),
            indices.iter().map(|&k| self.degree[k]).collect(),
            weight,
            cartan,
            constants,
        )?;
        t.fields = fields;
        Ok(t)
    }

    /// The degree-zero subalgebra `L_0`.
    pub fn degree_zero(&self) -> Result<Self, Error> {
        self.restrict(&self.degree_indices(0), format!("{}_0", self.meta.family))
    }

    /// Exhaustive super-Jacobi check over all basis triples:
    /// `[x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]`.
    pub fn check_super_jacobi(&self) -> JacobiReport {
        let s = self.structure(Rationals::new()).expect("rationals accept every constant");
        let dim = self.dim();
        let failure = (0..dim).into_par_iter().find_map_first(|x| {
            for y in 0..dim {
                for z in 0..dim {
                    let r = s.jacobi_residual(x, y, z);
                    if !r.is_empty() {
                        return Some(([x, y, z], r));
                    }
                }
            }
            None
        });
        match failure {
            None => JacobiReport { passed: true, triples_checked: dim * dim * dim, counterexample: None, residual: Vec::new() },
            Some((t, r)) => JacobiReport {
                passed: false,
                triples_checked: dim * dim * dim,
                counterexample: Some(t),
                residual: r.into_iter().map(|(k, v)| (k, format_rational(&v))).collect(),
            },
        }
    }
}

fn ambient_coords(v: &VectorField) -> SparseVec<Rational> {
    let n = v.n();
    let mut out: SparseVec<Rational> = v.terms().map(|(m, i, c)| (VectorField::coordinate_index(n, m, i), c.clone())).collect();
    out.sort_by_key(|(k, _)| *k);
    out
}

/// Structure constants over an arbitrary field, with bracket helpers.
#[derive(Clone, Debug)]
pub struct Structure<F: Field> {
    field: F,
    dim: usize,
    parity: Vec<Parity>,
    constants: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> Structure<F> {
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parity(&self, k: usize) -> Parity {
        self.parity[k]
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &[(usize, F::Elem)] {
        &self.constants[a * self.dim + b]
    }

    /// `acc += c * [e_a, e_b]` on a dense accumulator.
    pub fn add_bracket_into(&self, acc: &mut [F::Elem], c: &F::Elem, a: usize, b: usize) {
        let f = &self.field;
        for (k, v) in self.bracket_basis(a, b) {
            acc[*k] = f.add(&acc[*k], &f.mul(c, v));
        }
    }

    /// Bracket of two elements given in coordinates.
    pub fn bracket(&self, x: &[(usize, F::Elem)], y: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut acc = vec![f.zero(); self.dim];
        for (a, xa) in x {
            for (b, yb) in y {
                self.add_bracket_into(&mut acc, &f.mul(xa, yb), *a, *b);
            }
        }
        dense_to_sparse(f, acc)
    }

    /// `[x,[y,z]] - [[x,y],z] - (-1)^{|x||y|}[y,[x,z]]` for basis elements.
    pub fn jacobi_residual(&self, x: usize, y: usize, z: usize) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut acc = vec![f.zero(); self.dim];
        let minus = f.neg(&f.one());
        for (d, c) in self.bracket_basis(y, z) {
            self.add_bracket_into(&mut acc, c, x, *d);
        }
        for (d, c) in self.bracket_basis(x, y) {
            self.add_bracket_into(&mut acc, &f.mul(&minus, c), *d, z);
        }
        let sign = if self.parity[x].koszul_negative(self.parity[y]) { f.one() } else { minus };
        for (d, c) in self.bracket_basis(x, z) {
            self.add_bracket_into(&mut acc, &f.mul(&sign, c), y, *d);
        }
        dense_to_sparse(f, acc)
    }

    /// Column `k` of `ad(e_a)`: the matrix as a list of rows `m -> [(k, coeff)]`.
    pub fn ad_columns(&self, a: usize) -> Vec<SparseVec<F::Elem>> {
        (0..self.dim).map(|b| self.bracket_basis(a, b).to_vec()).collect()
    }
}

pub(crate) fn dense_to_sparse<F: Field>(f: &F, v: Vec<F::Elem>) -> SparseVec<F::Elem> {
    v.into_iter().enumerate().filter(|(_, x)| !f.is_zero(x)).collect()
}

impl fmt::Display for AlgebraTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}), dim {}", self.meta.family, self.meta.n, self.dim())
    }
}
