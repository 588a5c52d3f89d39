use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::table::{AlgebraTable, Weight};
use crate::scalar::Rational;
use crate::Error;

/// Integer codes for weights, linear in the weight, so that the weight of a
/// sum of up to four basis weights (with signs) can be compared by adding
/// codes. Degrees are kept separately because they may be reduced mod n.
#[derive(Clone, Debug)]
pub struct GradingCode {
    code: Vec<i64>,
    degree: Vec<i64>,
    modulus: Option<i64>,
}

/// Block label: weight code and reduced degree.
pub type GradeKey = (i64, i64);

impl GradingCode {
    pub fn new(t: &AlgebraTable) -> Result<Self, Error> {
        let rank = t.cartan().len();
        let dim = t.dim();
        let mut code = vec![0i64; dim];
        let mut place: i128 = 1;
        for j in 0..rank {
            let den = t.weights().iter().fold(num_bigint::BigInt::from(1), |acc, w| acc.lcm(w.0[j].denom()));
            let scaled: Vec<Rational> = t.weights().iter().map(|w| &w.0[j] * Rational::from_integer(den.clone())).collect();
            let bound = scaled.iter().map(|x| x.abs().to_integer()).max().unwrap_or_default();
            let bound = bound.to_i64().filter(|b| *b < 1 << 20).ok_or(Error::GradingTooWide)?;
            let radix = 8 * bound as i128 + 1;
            for (k, x) in scaled.iter().enumerate() {
                let v = x.to_integer().to_i64().ok_or(Error::GradingTooWide)? as i128 * place;
                code[k] += i64::try_from(v).map_err(|_| Error::GradingTooWide)?;
            }
            place *= radix;
            if place > 1 << 60 {
                return Err(Error::GradingTooWide);
            }
        }
        Ok(GradingCode { code, degree: t.degrees().to_vec(), modulus: t.degree_modulus() })
    }

    fn reduce(&self, d: i64) -> i64 {
        match self.modulus {
            Some(m) => (d + 1).rem_euclid(m) - 1,
            None => d,
        }
    }

    /// Key of `grade(plus) - sum grade(minus)`.
    pub fn key(&self, plus: usize, minus: &[usize]) -> GradeKey {
        let mut c = self.code[plus];
        let mut d = self.degree[plus];
        for &m in minus {
            c -= self.code[m];
            d -= self.degree[m];
        }
        (c, self.reduce(d))
    }

    /// Key of `- sum grade(minus)`, to be completed by [`Self::shift`].
    pub fn base(&self, minus: &[usize]) -> (i64, i64) {
        minus.iter().fold((0, 0), |(c, d), &m| (c - self.code[m], d - self.degree[m]))
    }

    pub fn shift(&self, base: (i64, i64), plus: usize) -> GradeKey {
        (base.0 + self.code[plus], self.reduce(base.1 + self.degree[plus]))
    }
}

/// `weight(plus) - sum weight(minus)` as an explicit weight.
pub fn weight_difference(t: &AlgebraTable, plus: usize, minus: &[usize]) -> Weight {
    minus.iter().fold(t.weight(plus).clone(), |w, &m| w.sub(t.weight(m)))
}

/// `degree(plus) - sum degree(minus)`, reduced.
pub fn degree_difference(t: &AlgebraTable, plus: usize, minus: &[usize]) -> i64 {
    t.reduce_degree(minus.iter().fold(t.degree(plus), |d, &m| d - t.degree(m)))
}
