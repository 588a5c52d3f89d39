use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::exterior::{check_index, GrassmannPoly, Monomial, Parity, MAX_GENERATORS};
use crate::scalar::Scalar;
use crate::Error;

/// A vector field `sum_i f_i partial_i` on the Grassmann algebra, i.e. an
/// element of W(n).
///
/// Stored as a map from `(x_I, i)` to the coefficient of `x_I partial_i`.
/// The term `x_I partial_i` has parity `|I| + 1` and degree `|I| - 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SuperVectorField<S: Scalar> {
    n: usize,
    terms: BTreeMap<(Monomial, usize), S>,
}

/// Parity of the term `x_I partial_i`.
pub fn term_parity(m: Monomial) -> Parity {
    m.parity() + Parity::Odd
}

/// Degree of the term `x_I partial_i`.
pub fn term_degree(m: Monomial) -> i64 {
    m.degree() as i64 - 1
}

impl<S: Scalar> SuperVectorField<S> {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_GENERATORS);
        SuperVectorField { n, terms: BTreeMap::new() }
    }

    /// `coeff * x_I partial_i`.
    pub fn term(m: Monomial, i: usize, coeff: S) -> Result<Self, Error> {
        check_index(m.n(), i)?;
        let mut v = Self::zero(m.n());
        v.add_term(m, i, coeff);
        Ok(v)
    }

    /// `partial_i`.
    pub fn partial(n: usize, i: usize) -> Result<Self, Error> {
        Self::term(Monomial::one(n), i, S::one())
    }

    /// `f partial_i`.
    pub fn from_component(f: &GrassmannPoly<S>, i: usize) -> Result<Self, Error> {
        check_index(f.n(), i)?;
        let mut v = Self::zero(f.n());
        for (m, c) in f.terms() {
            v.add_term(*m, i, c.clone());
        }
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, usize, &S)> {
        self.terms.iter().map(|((m, i), c)| (*m, *i, c))
    }

    pub fn coeff(&self, m: Monomial, i: usize) -> S {
        self.terms.get(&(m, i)).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, m: Monomial, i: usize, coeff: S) {
        assert_eq!(m.n(), self.n, "monomial over a different generator count");
        assert!((1..=self.n).contains(&i), "derivation index {i} out of range");
        if coeff.is_zero() {
            return;
        }
        let key = (m, i);
        match self.terms.get_mut(&key) {
            Some(c) => {
                let s = c.clone() + coeff;
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    /// The coefficient `f_i` of `partial_i`.
    pub fn component(&self, i: usize) -> GrassmannPoly<S> {
        GrassmannPoly::from_terms(self.n, self.terms.iter().filter(|((_, j), _)| *j == i).map(|((m, _), c)| (*m, c.clone())))
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        SuperVectorField { n: self.n, terms: self.terms.iter().map(|(k, v)| (*k, v.clone() * c.clone())).collect() }
    }

    /// Parity of a nonzero homogeneous field.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|(m, _)| term_parity(*m));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Degree of a nonzero homogeneous field.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|(m, _)| term_degree(*m));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Smallest degree among the terms.
    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().map(|(m, _)| term_degree(*m)).min()
    }

    pub fn parity_part(&self, p: Parity) -> Self {
        SuperVectorField {
            n: self.n,
            terms: self.terms.iter().filter(|((m, _), _)| term_parity(*m) == p).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    pub fn degree_part(&self, d: i64) -> Self {
        SuperVectorField {
            n: self.n,
            terms: self.terms.iter().filter(|((m, _), _)| term_degree(*m) == d).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    /// The action `sum_i f_i partial_i(g)` on the Grassmann algebra.
    pub fn apply(&self, g: &GrassmannPoly<S>) -> GrassmannPoly<S> {
        assert_eq!(self.n, g.n());
        let mut out = GrassmannPoly::zero(self.n);
        for ((f, i), c) in &self.terms {
            for (m, d) in g.terms() {
                let Some((neg1, rest)) = m.partial(*i) else { continue };
                let Some((neg2, prod)) = f.mul(rest) else { continue };
                let v = c.clone() * d.clone();
                out.add_term(prod, if neg1 != neg2 { -v } else { v });
            }
        }
        out
    }

    /// The supercommutator `[D, E]`, extended bilinearly over homogeneous terms:
    /// `[f d_a, g d_b] = f d_a(g) d_b - (-1)^{|f d_a||g d_b|} g d_b(f) d_a`.
    pub fn bracket(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for ((f, a), cf) in &self.terms {
            for ((g, b), cg) in &other.terms {
                let c = cf.clone() * cg.clone();
                if let Some((neg1, dg)) = g.partial(*a) {
                    if let Some((neg2, m)) = f.mul(dg) {
                        out.add_term(m, *b, if neg1 != neg2 { -c.clone() } else { c.clone() });
                    }
                }
                if let Some((neg1, df)) = f.partial(*b) {
                    if let Some((neg2, m)) = g.mul(df) {
                        let koszul = term_parity(*f).koszul_negative(term_parity(*g));
                        // minus sign of the second term, flipped by the Koszul sign
                        let neg = (neg1 != neg2) != !koszul;
                        out.add_term(m, *a, if neg { -c.clone() } else { c });
                    }
                }
            }
        }
        out
    }

    /// Position of `x_I partial_i` in the ambient W(n) coordinates.
    pub fn coordinate_index(n: usize, m: Monomial, i: usize) -> usize {
        m.bits() as usize * n + (i - 1)
    }

    /// Inverse of [`Self::coordinate_index`].
    pub fn coordinate_term(n: usize, idx: usize) -> (Monomial, usize) {
        (Monomial::from_bits(n, (idx / n) as u32), idx % n + 1)
    }
}

impl<S: Scalar> Add for &SuperVectorField<S> {
    type Output = SuperVectorField<S>;
    fn add(self, rhs: Self) -> SuperVectorField<S> {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for ((m, i), c) in &rhs.terms {
            out.add_term(*m, *i, c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &SuperVectorField<S> {
    type Output = SuperVectorField<S>;
    fn sub(self, rhs: Self) -> SuperVectorField<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Neg for &SuperVectorField<S> {
    type Output = SuperVectorField<S>;
    fn neg(self) -> SuperVectorField<S> {
        SuperVectorField { n: self.n, terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }
}

impl<S: Scalar> fmt::Display for SuperVectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, ((m, i), c)) in self.terms.iter().enumerate() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag != "1" {
                write!(f, "{mag}*")?;
            }
            for j in m.indices() {
                write!(f, "x{j}")?;
            }
            write!(f, "d{i}")?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for SuperVectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use proptest::prelude::*;

    type V = SuperVectorField<Rational>;
    type P = GrassmannPoly<Rational>;

    fn mono(n: usize, idx: &[usize]) -> Monomial {
        Monomial::from_indices(n, idx).unwrap()
    }

    fn t(n: usize, idx: &[usize], i: usize) -> V {
        V::term(mono(n, idx), i, rat(1)).unwrap()
    }

    fn p(n: usize, idx: &[usize]) -> P {
        P::monomial(mono(n, idx), rat(1))
    }

    /// `D(E(g)) - (-1)^{|D||E|} E(D(g))`, computed by composing actions.
    fn operator_bracket(d: &V, e: &V, g: &P) -> P {
        let de = d.apply(&e.apply(g));
        let ed = e.apply(&d.apply(g));
        let sign = if d.parity().unwrap().koszul_negative(e.parity().unwrap()) { rat(-1) } else { rat(1) };
        &de - &ed.scale(&sign)
    }

    #[test]
    fn apply_examples() {
        assert_eq!(t(2, &[], 1).apply(&p(2, &[1, 2])), p(2, &[2]));
        assert_eq!(t(2, &[1], 2).apply(&p(2, &[2])), p(2, &[1]));
        let d = &t(2, &[2], 1) + &t(2, &[1], 2);
        assert!(d.apply(&p(2, &[1, 2])).is_zero());
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(t(2, &[], 1).bracket(&t(2, &[1], 2)), t(2, &[], 2));
        assert!(t(2, &[], 1).bracket(&t(2, &[], 2)).is_zero());
        assert_eq!(t(2, &[1], 1).bracket(&t(2, &[1], 2)), t(2, &[1], 2));
    }

    #[test]
    fn parity_and_degree_of_terms() {
        let d = t(3, &[1, 2], 3);
        assert_eq!(d.parity(), Some(Parity::Odd));
        assert_eq!(d.degree(), Some(1));
        assert_eq!(t(3, &[], 1).degree(), Some(-1));
        assert_eq!(t(3, &[2], 1).parity(), Some(Parity::Even));
        assert_eq!((&t(3, &[2], 1) + &t(3, &[], 1)).parity(), None);
    }

    #[test]
    fn component_extraction() {
        let d = &t(3, &[1], 2) + &t(3, &[1, 3], 2);
        assert_eq!(d.component(2), &p(3, &[1]) + &p(3, &[1, 3]));
        assert!(d.component(1).is_zero());
        assert_eq!(V::from_component(&d.component(2), 2).unwrap(), d);
    }

    #[test]
    fn display() {
        let d = &t(3, &[1, 2], 3).scale(&rat(-2)) + &t(3, &[], 1);
        assert_eq!(d.to_string(), "d1 - 2*x1x2d3");
    }

    #[test]
    fn operator_equivalence_exhaustive_n3() {
        let n = 3;
        let basis: Vec<V> = Monomial::all(n).into_iter().flat_map(|m| (1..=n).map(move |i| V::term(m, i, rat(1)).unwrap())).collect();
        for d in &basis {
            for e in &basis {
                let br = d.bracket(e);
                for g in Monomial::all(n) {
                    let g = P::monomial(g, rat(1));
                    assert_eq!(br.apply(&g), operator_bracket(d, e, &g), "[{d}, {e}] on {g}");
                }
            }
        }
    }

    #[test]
    fn coordinate_round_trip() {
        let n = 4;
        for m in Monomial::all(n) {
            for i in 1..=n {
                assert_eq!(V::coordinate_term(n, V::coordinate_index(n, m, i)), (m, i));
            }
        }
    }

    /// Nonzero fields with all terms of one polynomial degree `k`.
    fn homogeneous(n: usize) -> impl Strategy<Value = V> {
        (0..=n).prop_flat_map(move |k| {
            let monos = Monomial::of_degree(n, k);
            let term = (0..monos.len(), 1..=n, prop_oneof![-3i64..=-1, 1i64..=3]);
            proptest::collection::vec(term, 1..4).prop_map(move |ts| {
                let mut v = V::zero(n);
                for (m, i, c) in ts {
                    v.add_term(monos[m], i, rat(c));
                }
                v
            })
        })
    }

    proptest! {
        #[test]
        fn operator_equivalence_n5(d in homogeneous(5), e in homogeneous(5), gbits in 0u32..32) {
            prop_assume!(!d.is_zero() && !e.is_zero());
            let g = P::monomial(Monomial::from_bits(5, gbits), rat(1));
            prop_assert_eq!(d.bracket(&e).apply(&g), operator_bracket(&d, &e, &g));
        }

        #[test]
        fn super_skew(d in homogeneous(4), e in homogeneous(4)) {
            prop_assume!(!d.is_zero() && !e.is_zero());
            let sign = if d.parity().unwrap().koszul_negative(e.parity().unwrap()) { rat(1) } else { rat(-1) };
            prop_assert_eq!(d.bracket(&e), e.bracket(&d).scale(&sign));
        }

        #[test]
        fn bracket_adds_degrees(d in homogeneous(4), e in homogeneous(4)) {
            prop_assume!(!d.is_zero() && !e.is_zero());
            let br = d.bracket(&e);
            if !br.is_zero() {
                prop_assert_eq!(br.degree(), Some(d.degree().unwrap() + e.degree().unwrap()));
                prop_assert_eq!(br.parity(), Some(d.parity().unwrap() + e.parity().unwrap()));
            }
        }
    }
}
