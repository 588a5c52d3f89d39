use std::fmt::Debug;
use std::marker::PhantomData;

use num_traits::{One, Zero};

use crate::scalar::{is_prime, mul_mod, pow_mod, rational_mod, Rational, Scalar};
use crate::Error;

/// Which field a computation ran over; recorded in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldTag {
    Rational,
    Prime { p: u64 },
}

impl std::fmt::Display for FieldTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldTag::Rational => f.write_str("Q"),
            FieldTag::Prime { p } => write!(f, "F_{p}"),
        }
    }
}

/// Arithmetic context for the linear-algebra routines.
///
/// Elements do not carry their field; the context does. This lets a prime
/// chosen at run time and the exact rationals share one elimination code path.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn tag(&self) -> FieldTag;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Image of a rational; fails when the denominator is not invertible.
    fn from_rational(&self, q: &Rational) -> Result<Self::Elem, Error>;

    /// `a - b * c`
    fn mul_sub(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(b, c))
    }
}

/// Field context for any [`Scalar`] type.
#[derive(Debug)]
pub struct ExactField<S>(PhantomData<S>);

/// Exact rational arithmetic.
pub type Rationals = ExactField<Rational>;

impl<S> ExactField<S> {
    pub fn new() -> Self {
        ExactField(PhantomData)
    }
}

impl<S> Default for ExactField<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S> Clone for ExactField<S> {
    fn clone(&self) -> Self {
        ExactField(PhantomData)
    }
}

impl<S: Scalar> Field for ExactField<S> {
    type Elem = S;

    fn tag(&self) -> FieldTag {
        match S::CHARACTERISTIC {
            0 => FieldTag::Rational,
            p => FieldTag::Prime { p },
        }
    }
    fn zero(&self) -> S {
        S::zero()
    }
    fn one(&self) -> S {
        S::one()
    }
    fn is_zero(&self, a: &S) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &S, b: &S) -> S {
        a.clone() + b.clone()
    }
    fn sub(&self, a: &S, b: &S) -> S {
        a.clone() - b.clone()
    }
    fn mul(&self, a: &S, b: &S) -> S {
        a.clone() * b.clone()
    }
    fn neg(&self, a: &S) -> S {
        -a.clone()
    }
    fn inv(&self, a: &S) -> Option<S> {
        a.try_inv()
    }
    fn from_i64(&self, v: i64) -> S {
        S::from_i64(v)
    }
    fn from_rational(&self, q: &Rational) -> Result<S, Error> {
        S::from_rational(q).ok_or_else(|| Error::NotReducible(q.to_string()))
    }
}

/// The prime field `F_p` with `p` fixed at construction (`p < 2^63`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Default certificate prime `2^31 - 1`.
    pub const DEFAULT_PRIME: u64 = 2_147_483_647;

    pub fn new(p: u64) -> Result<Self, Error> {
        if p >= 1 << 63 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn tag(&self) -> FieldTag {
        FieldTag::Prime { p: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(pow_mod(*a, self.p - 2, self.p))
        }
    }
    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }
    fn from_rational(&self, q: &Rational) -> Result<u64, Error> {
        if q.is_zero() {
            return Ok(0);
        }
        if q.is_one() {
            return Ok(1);
        }
        rational_mod(q, self.p).ok_or_else(|| Error::NotReducible(q.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, F31};

    #[test]
    fn composite_modulus_rejected() {
        assert!(matches!(PrimeField::new(4), Err(Error::NotPrime(4))));
        assert!(matches!(PrimeField::new(1), Err(Error::NotPrime(1))));
        assert!(PrimeField::new(PrimeField::DEFAULT_PRIME).is_ok());
    }

    #[test]
    fn tags() {
        assert_eq!(Rationals::new().tag(), FieldTag::Rational);
        assert_eq!(ExactField::<F31>::new().tag(), FieldTag::Prime { p: 2_147_483_647 });
        assert_eq!(PrimeField::new(7).unwrap().tag(), FieldTag::Prime { p: 7 });
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.from_rational(&ratio(1, 2)).unwrap(), 4);
        assert!(f.from_rational(&ratio(1, 14)).is_err());
        assert_eq!(f.sub(&2, &5), 4);
        assert_eq!(f.neg(&0), 0);
    }
}
