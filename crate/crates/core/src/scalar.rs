//! Exact scalar types.
//!
//! Everything in this crate is computed exactly. The algebraic layers
//! (Grassmann polynomials, vector fields) are generic over [`Scalar`], which
//! is implemented for arbitrary-precision rationals and for the const-generic
//! prime field [`ModP`]. The linear-algebra layer additionally supports a
//! prime chosen at run time, see [`crate::linalg::PrimeField`].

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// An exact field element.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    /// 0 for the rationals, `p` for a prime field.
    const CHARACTERISTIC: u64;

    fn from_i64(v: i64) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn try_inv(&self) -> Option<Self>;

    /// Image of a rational number, `None` if the denominator is not invertible.
    fn from_rational(q: &Rational) -> Option<Self>;
}

impl Scalar for Rational {
    const CHARACTERISTIC: u64 = 0;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_rational(q: &Rational) -> Option<Self> {
        Some(q.clone())
    }
}

/// Integer rational `v/1`.
pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Rational `num/den`; panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Residue of a rational number modulo `p`, `None` if `p` divides the denominator.
pub fn rational_mod(q: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = q.numer().mod_floor(&pb).to_u64()?;
    let den = q.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    Some(mul_mod(num, pow_mod(den, p - 2, p), p))
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const fn const_is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of the prime field `Z/PZ`, `P < 2^32`, fixed at compile time.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ModP<const P: u64>(u64);

/// The Mersenne prime field used for certificates by default.
pub type F31 = ModP<2_147_483_647>;

impl<const P: u64> ModP<P> {
    const VALID: () = assert!(P < (1 << 32) && const_is_prime(P), "modulus must be a prime below 2^32");

    pub fn new(v: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::VALID;
        ModP(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub const fn modulus() -> u64 {
        P
    }
}

impl<const P: u64> fmt::Debug for ModP<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> fmt::Display for ModP<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for ModP<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ModP((self.0 + rhs.0) % P)
    }
}

impl<const P: u64> Sub for ModP<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ModP((self.0 + P - rhs.0) % P)
    }
}

impl<const P: u64> Mul for ModP<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        ModP(self.0 * rhs.0 % P)
    }
}

impl<const P: u64> Neg for ModP<P> {
    type Output = Self;
    fn neg(self) -> Self {
        ModP((P - self.0) % P)
    }
}

impl<const P: u64> Zero for ModP<P> {
    fn zero() -> Self {
        ModP(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for ModP<P> {
    fn one() -> Self {
        ModP::new(1)
    }
}

impl<const P: u64> Scalar for ModP<P> {
    const CHARACTERISTIC: u64 = P;

    fn from_i64(v: i64) -> Self {
        let r = v.rem_euclid(P as i64) as u64;
        ModP::new(r)
    }

    fn try_inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(ModP(pow_mod(self.0, P - 2, P)))
        }
    }

    fn from_rational(q: &Rational) -> Option<Self> {
        rational_mod(q, P).map(ModP::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), const_is_prime(n), "n = {n}");
        }
        assert!(is_prime(2_147_483_647));
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(4));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn modp_field_axioms_small() {
        type F7 = ModP<7>;
        for a in 0..7 {
            let x = F7::new(a);
            if a != 0 {
                assert_eq!(x * x.try_inv().unwrap(), F7::one());
            }
            assert_eq!(x + (-x), F7::zero());
        }
        assert_eq!(F7::from_i64(-1), F7::new(6));
    }

    #[test]
    fn rational_reduction() {
        assert_eq!(rational_mod(&ratio(1, 2), 7), Some(4));
        assert_eq!(rational_mod(&ratio(-3, 1), 7), Some(4));
        assert_eq!(rational_mod(&ratio(1, 7), 7), None);
        assert_eq!(F31::from_rational(&ratio(1, 2)).unwrap() * F31::new(2), F31::one());
    }

    #[test]
    fn rational_text_round_trip() {
        for q in [rat(0), rat(-5), ratio(3, 4), ratio(-7, 12)] {
            assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }
}
