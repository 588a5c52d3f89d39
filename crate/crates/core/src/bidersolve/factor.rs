use crate::exterior::Parity;
use crate::families::LPrime;
use crate::linalg::{Rationals, SpanBasis, SparseVec};
use crate::scalar::Rational;
use crate::superfields::{degree_difference, weight_difference};

use super::residual::BilinearMap;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorStatus {
    Success,
    /// `f` mixes several weights, degrees or parities.
    NotHomogeneous,
    /// No `φ(e_a)` in L′ with `[φ(e_a), y] = f(e_a, y)` for all `y`.
    NoLeft { a: usize },
    /// No `ψ(e_b)` in L′ with `[x, ψ(e_b)] = f(x, e_b)` for all `x`.
    NoRight { b: usize },
    /// `φ(e_a)` has a component of the wrong weight, degree or parity.
    LeftGrading { a: usize },
    RightGrading { b: usize },
    Recompose { a: usize, b: usize },
}

/// `f(x, y) = [φ(x), y] = [x, ψ(y)]` with `φ, ψ : L -> L′`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationResult {
    /// `φ(e_a)` in L′ coordinates.
    pub phi: Vec<SparseVec<Rational>>,
    pub psi: Vec<SparseVec<Rational>>,
    pub weight: Option<String>,
    pub degree: Option<i64>,
    pub parity: Option<Parity>,
    pub status: FactorStatus,
}

impl FactorizationResult {
    pub fn passed(&self) -> bool {
        self.status == FactorStatus::Success
    }
}

/// Solves for both linear maps exactly, checks that they shift weight,
/// degree and parity like `f`, and recomposes `f` from each.
pub fn factor_biderivation(lprime: &LPrime, f: &BilinearMap<Rational>) -> FactorizationResult {
    let t = &lprime.table;
    let dim = lprime.base_dim;
    let big = t.dim();
    let s = t.structure(Rationals::new()).expect("rationals accept every constant");
    let mut result = FactorizationResult { phi: Vec::new(), psi: Vec::new(), weight: None, degree: None, parity: None, status: FactorStatus::Success };

    // grading of f
    let mut shift = None;
    for a in 0..dim {
        for b in 0..dim {
            for (k, _) in f.get(a, b) {
                let g = (weight_difference(t, *k, &[a, b]), degree_difference(t, *k, &[a, b]), t.parity(*k) + t.parity(a) + t.parity(b));
                match &shift {
                    None => shift = Some(g),
                    Some(h) if *h != g => {
                        result.status = FactorStatus::NotHomogeneous;
                        return result;
                    }
                    _ => {}
                }
            }
        }
    }
    if let Some((w, d, p)) = &shift {
        result.weight = Some(w.to_string());
        result.degree = Some(*d);
        result.parity = Some(*p);
    }

    // columns: left j -> ([e'_j, e_x])_{x, m}; right j -> ([e_x, e'_j])_{x, m}
    let solve = |left: bool| -> Result<Vec<SparseVec<Rational>>, usize> {
        let mut span = SpanBasis::new(Rationals::new(), dim * big);
        let mut gens = Vec::new();
        for j in 0..big {
            let mut col: SparseVec<Rational> = Vec::new();
            for x in 0..dim {
                let v = if left { s.bracket_basis(j, x) } else { s.bracket_basis(x, j) };
                col.extend(v.iter().map(|(m, c)| (x * big + m, c.clone())));
            }
            if span.push(col).is_ok() {
                gens.push(j);
            }
        }
        (0..dim)
            .map(|a| {
                let target: SparseVec<Rational> = (0..dim)
                    .flat_map(|x| {
                        let v = if left { f.get(a, x) } else { f.get(x, a) };
                        v.iter().map(move |(k, c)| (x * big + lprime.embed(*k), c.clone()))
                    })
                    .collect();
                span.coordinates(target).map(|c| c.into_iter().map(|(g, v)| (gens[g], v)).collect::<SparseVec<_>>()).ok_or(a)
            })
            .map(|r| r.map(|mut v| {
                v.sort_by_key(|(j, _)| *j);
                v
            }))
            .collect()
    };
    result.phi = match solve(true) {
        Ok(v) => v,
        Err(a) => {
            result.status = FactorStatus::NoLeft { a };
            return result;
        }
    };
    result.psi = match solve(false) {
        Ok(v) => v,
        Err(b) => {
            result.status = FactorStatus::NoRight { b };
            return result;
        }
    };

    if let Some((w, d, p)) = &shift {
        let graded = |x: usize, img: &SparseVec<Rational>| {
            img.iter().all(|(j, _)| {
                t.weight(*j).sub(t.weight(x)) == *w && t.reduce_degree(t.degree(*j) - t.degree(x)) == *d && t.parity(*j) == t.parity(x) + *p
            })
        };
        if let Some(a) = (0..dim).find(|&a| !graded(a, &result.phi[a])) {
            result.status = FactorStatus::LeftGrading { a };
            return result;
        }
        if let Some(b) = (0..dim).find(|&b| !graded(b, &result.psi[b])) {
            result.status = FactorStatus::RightGrading { b };
            return result;
        }
    }

    for a in 0..dim {
        for b in 0..dim {
            let want: SparseVec<Rational> = f.get(a, b).iter().map(|(k, c)| (lprime.embed(*k), c.clone())).collect();
            let one = [(b, crate::scalar::rat(1))];
            let ea = [(a, crate::scalar::rat(1))];
            if s.bracket(&result.phi[a], &one) != want || s.bracket(&ea, &result.psi[b]) != want {
                result.status = FactorStatus::Recompose { a, b };
                return result;
            }
        }
    }
    result
}
