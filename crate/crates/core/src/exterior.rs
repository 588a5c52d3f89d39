//! The Grassmann algebra on `n` odd generators `x_1, ..., x_n`.
//!
//! Monomials are index sets stored as bit sets (bit `i - 1` for `x_i`).
//! Generator indices in the public API are 1-based, as in `x_1 ... x_n`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;
use crate::Error;

/// Largest supported number of generators.
pub const MAX_GENERATORS: usize = 16;

/// Element of `Z/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: usize) -> Self {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// True when the Koszul sign `(-1)^{|a||b|}` is negative.
    pub fn koszul_negative(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A monomial `x_{i_1} ... x_{i_k}` with `i_1 < ... < i_k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    bits: u32,
    n: u8,
}

impl Monomial {
    /// The unit monomial.
    pub fn one(n: usize) -> Self {
        assert!(n <= MAX_GENERATORS, "at most {MAX_GENERATORS} generators supported");
        Monomial { bits: 0, n: n as u8 }
    }

    pub fn generator(n: usize, i: usize) -> Result<Self, Error> {
        check_index(n, i)?;
        Ok(Monomial { bits: 1 << (i - 1), n: n as u8 })
    }

    /// Monomial from 1-based indices; repeated indices are rejected.
    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self, Error> {
        let mut bits = 0u32;
        for &i in indices {
            check_index(n, i)?;
            if bits & (1 << (i - 1)) != 0 {
                return Err(Error::RepeatedIndex(i));
            }
            bits |= 1 << (i - 1);
        }
        Ok(Monomial { bits, n: n as u8 })
    }

    /// Monomial from a raw bit set (bit `i - 1` marks `x_i`).
    pub fn from_bits(n: usize, bits: u32) -> Self {
        assert!(n <= MAX_GENERATORS);
        assert!(bits >> n == 0, "bit set {bits:#b} exceeds {n} generators");
        Monomial { bits, n: n as u8 }
    }

    /// The top monomial `x_1 x_2 ... x_n`.
    pub fn top(n: usize) -> Self {
        Monomial::from_bits(n, ((1u64 << n) - 1) as u32)
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn n(self) -> usize {
        self.n as usize
    }

    pub fn degree(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn parity(self) -> Parity {
        Parity::from_bit(self.degree())
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && i <= self.n() && self.bits & (1 << (i - 1)) != 0
    }

    /// Sorted 1-based indices.
    pub fn indices(self) -> Vec<usize> {
        (1..=self.n()).filter(|&i| self.contains(i)).collect()
    }

    /// All `2^n` monomials in basis order.
    pub fn all(n: usize) -> Vec<Monomial> {
        let mut v: Vec<Monomial> = (0..(1u32 << n)).map(|b| Monomial::from_bits(n, b)).collect();
        v.sort();
        v
    }

    /// Monomials of a fixed degree in basis order.
    pub fn of_degree(n: usize, k: usize) -> Vec<Monomial> {
        Monomial::all(n).into_iter().filter(|m| m.degree() == k).collect()
    }

    /// Product `a * b`: `None` if the index sets meet, otherwise the sign
    /// (`true` for `-1`) and the union.
    pub fn mul(self, other: Monomial) -> Option<(bool, Monomial)> {
        assert_eq!(self.n, other.n, "monomials over different generator counts");
        if self.bits & other.bits != 0 {
            return None;
        }
        // Count pairs (i in a, j in b) with i > j.
        let mut inversions = 0u32;
        let mut rest = self.bits;
        while rest != 0 {
            let i = rest.trailing_zeros();
            inversions += (other.bits & ((1u32 << i) - 1)).count_ones();
            rest &= rest - 1;
        }
        Some((inversions % 2 == 1, Monomial { bits: self.bits | other.bits, n: self.n }))
    }

    /// `partial_i` applied to the monomial: `None` if `x_i` is absent,
    /// otherwise the sign `(-1)^{#{j in I : j < i}}` and `x_{I \ {i}}`.
    pub fn partial(self, i: usize) -> Option<(bool, Monomial)> {
        if !self.contains(i) {
            return None;
        }
        let below = (self.bits & ((1u32 << (i - 1)) - 1)).count_ones();
        Some((below % 2 == 1, Monomial { bits: self.bits & !(1 << (i - 1)), n: self.n }))
    }
}

impl Ord for Monomial {
    /// Degree first, then lexicographic order of the sorted index lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| {
                // Lexicographic order of sorted index lists for equal sizes:
                // the set containing the smallest differing index comes first.
                let diff = self.bits ^ other.bits;
                if diff == 0 {
                    Ordering::Equal
                } else if self.bits & (1 << diff.trailing_zeros()) != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            })
            .then_with(|| self.n.cmp(&other.n))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits == 0 {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.indices().iter().map(|i| format!("x{i}")).collect();
        f.write_str(&parts.join("*"))
    }
}

pub(crate) fn check_index(n: usize, i: usize) -> Result<(), Error> {
    if i == 0 || i > n {
        Err(Error::IndexOutOfRange { index: i, n })
    } else {
        Ok(())
    }
}

/// A finitely supported linear combination of monomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GrassmannPoly<S: Scalar> {
    n: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> GrassmannPoly<S> {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_GENERATORS);
        GrassmannPoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(Monomial::one(n), S::one())
    }

    pub fn monomial(m: Monomial, coeff: S) -> Self {
        let mut p = Self::zero(m.n());
        p.add_term(m, coeff);
        p
    }

    /// The generator `x_i`.
    pub fn generator(n: usize, i: usize) -> Result<Self, Error> {
        Ok(Self::monomial(Monomial::generator(n, i)?, S::one()))
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Adds `coeff * m` in place, dropping a coefficient that cancels.
    pub fn add_term(&mut self, m: Monomial, coeff: S) {
        assert_eq!(m.n(), self.n, "monomial over a different generator count");
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(c) => {
                let s = c.clone() + coeff;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(m, coeff);
            }
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        GrassmannPoly {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (*m, v.clone() * c.clone())).collect(),
        }
    }

    /// The component of a given parity.
    pub fn parity_part(&self, p: Parity) -> Self {
        GrassmannPoly {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| m.parity() == p).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// The component `Lambda(n)_k` of polynomial degree `k`.
    pub fn degree_part(&self, k: usize) -> Self {
        GrassmannPoly {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == k).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// Parity of a nonzero homogeneous element; `None` for zero or mixed parity.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.parity());
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Degree of a nonzero homogeneous element; `None` for zero or mixed degree.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "polynomials over different generator counts");
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((neg, m)) = a.mul(*b) {
                    let c = ca.clone() * cb.clone();
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// The odd superderivation `partial_i` with `partial_i(x_j) = delta_ij`.
    pub fn partial(&self, i: usize) -> Result<Self, Error> {
        check_index(self.n, i)?;
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            if let Some((neg, rest)) = m.partial(i) {
                out.add_term(rest, if neg { -c.clone() } else { c.clone() });
            }
        }
        Ok(out)
    }
}

impl<S: Scalar> Add for &GrassmannPoly<S> {
    type Output = GrassmannPoly<S>;
    fn add(self, rhs: Self) -> GrassmannPoly<S> {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &GrassmannPoly<S> {
    type Output = GrassmannPoly<S>;
    fn sub(self, rhs: Self) -> GrassmannPoly<S> {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<S: Scalar> Neg for &GrassmannPoly<S> {
    type Output = GrassmannPoly<S>;
    fn neg(self) -> GrassmannPoly<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Mul for &GrassmannPoly<S> {
    type Output = GrassmannPoly<S>;
    fn mul(self, rhs: Self) -> GrassmannPoly<S> {
        GrassmannPoly::mul(self, rhs)
    }
}

impl<S: Scalar> fmt::Debug for GrassmannPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<S: Scalar> fmt::Display for GrassmannPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| if c.is_one() { m.to_string() } else { format!("({c})*{m}") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
