use std::collections::BTreeSet;

use num_traits::Zero;

use super::Family;
use crate::scalar::{format_rational, rat, Rational};
use crate::superfields::AlgebraTable;

/// Nonzero weights of basis elements outside the Cartan subalgebra.
pub fn roots(t: &AlgebraTable) -> BTreeSet<Vec<Rational>> {
    (0..t.dim())
        .filter(|k| !t.cartan().contains(k))
        .map(|k| t.weight(k).0.clone())
        .filter(|w| !w.iter().all(Zero::is_zero))
        .collect()
}

/// Weights rewritten in the coordinates of the root descriptions: the
/// `ε_i` basis for W, S and S̃, and the `r = [n/2]` Cartan coordinates for H.
///
/// For S and S̃ the Cartan elements `x_j d_j - x_{j+1} d_{j+1}` only see
/// `t_j = k_j - k_{j+1}`; the missing coordinate sum `l = sum k_i` is the
/// degree, which pins down `k`.
pub fn paper_coordinates(family: Family, t: &AlgebraTable) -> Vec<Vec<Rational>> {
    let n = t.n();
    (0..t.dim())
        .map(|k| {
            let w = &t.weight(k).0;
            match family {
                Family::W | Family::H => w.clone(),
                Family::S | Family::STilde => {
                    let l = rat(t.degree(k));
                    let moment = w.iter().enumerate().fold(Rational::zero(), |acc, (j, tj)| acc + rat(j as i64 + 1) * tj);
                    let kn = (l - moment) / rat(n as i64);
                    let mut out = vec![kn.clone(); n];
                    let mut acc = kn;
                    for j in (0..n - 1).rev() {
                        acc += &w[j];
                        out[j] = acc.clone();
                    }
                    out
                }
            }
        })
        .collect()
}

/// The root system as described for each family, without the zero weight.
pub fn paper_roots(family: Family, n: usize) -> BTreeSet<Vec<Rational>> {
    let mut out = BTreeSet::new();
    match family {
        Family::W | Family::S | Family::STilde => {
            for bits in 0u32..(1 << n) {
                for i in 0..n {
                    let mut k: Vec<i64> = (0..n).map(|j| (bits >> j & 1) as i64).collect();
                    k[i] -= 1;
                    let top = bits == (1 << n) - 1;
                    if family != Family::W && top {
                        continue;
                    }
                    out.insert(k);
                }
            }
        }
        Family::H => {
            let r = n / 2;
            for code in 0..3usize.pow(r as u32) {
                let mut c = code;
                let mut k = Vec::with_capacity(r);
                for _ in 0..r {
                    k.push((c % 3) as i64 - 1);
                    c /= 3;
                }
                out.insert(k);
            }
        }
    }
    out.into_iter().filter(|k| k.iter().any(|&x| x != 0)).map(|k| k.into_iter().map(rat).collect()).collect()
}

/// Computed roots against the described ones, and L′ against L.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RootComparison {
    pub computed: usize,
    pub expected: usize,
    pub missing: Vec<String>,
    pub unexpected: Vec<String>,
    pub lprime_roots: usize,
    pub lprime_equal: bool,
    pub matches: bool,
}

fn lifted_roots(family: Family, t: &AlgebraTable) -> BTreeSet<Vec<Rational>> {
    let coords = paper_coordinates(family, t);
    (0..t.dim())
        .filter(|k| !t.cartan().contains(k))
        .map(|k| coords[k].clone())
        .filter(|w| !w.iter().all(Zero::is_zero))
        .collect()
}

fn show(w: &[Rational]) -> String {
    let parts: Vec<String> = w.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

pub fn compare_roots(family: Family, table: &AlgebraTable, lprime: &AlgebraTable) -> RootComparison {
    let computed = lifted_roots(family, table);
    let expected = paper_roots(family, table.n());
    let lp = lifted_roots(family, lprime);
    let missing: Vec<String> = expected.difference(&computed).map(|w| show(w)).collect();
    let unexpected: Vec<String> = computed.difference(&expected).map(|w| show(w)).collect();
    let lprime_equal = lp == computed;
    RootComparison {
        computed: computed.len(),
        expected: expected.len(),
        matches: missing.is_empty() && unexpected.is_empty() && lprime_equal,
        missing,
        unexpected,
        lprime_roots: lp.len(),
        lprime_equal,
    }
}
