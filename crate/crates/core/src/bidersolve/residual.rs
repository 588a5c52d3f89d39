use rayon::prelude::*;

use crate::exterior::Parity;
use crate::linalg::{Field, SparseVec};
use crate::superfields::Structure;

/// A bilinear map on basis elements: `values[a * dim + b] = f(e_a, e_b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearMap<E> {
    pub dim: usize,
    pub values: Vec<SparseVec<E>>,
}

impl<E> BilinearMap<E> {
    pub fn get(&self, a: usize, b: usize) -> &[(usize, E)] {
        &self.values[a * self.dim + b]
    }
}

impl<E: Clone> BilinearMap<E> {
    pub fn zero(dim: usize) -> Self {
        BilinearMap { dim, values: vec![Vec::new(); dim * dim] }
    }

    /// From a coefficient vector indexed `(a * dim + b) * dim + k`.
    pub fn from_global(dim: usize, v: &[(usize, E)]) -> Self {
        let mut out = Self::zero(dim);
        for (t, x) in v {
            out.values[t / dim].push((t % dim, x.clone()));
        }
        out
    }

    pub fn to_global(&self) -> SparseVec<E> {
        let dim = self.dim;
        self.values.iter().enumerate().flat_map(|(ab, v)| v.iter().map(move |(k, x)| (ab * dim + k, x.clone()))).collect()
    }

    /// `λ [·,·]`.
    pub fn bracket<F: Field<Elem = E>>(s: &Structure<F>, lambda: &E) -> Self {
        let f = s.field();
        let dim = s.dim();
        let values = (0..dim * dim)
            .map(|ab| s.bracket_basis(ab / dim, ab % dim).iter().map(|(k, c)| (*k, f.mul(lambda, c))).filter(|(_, x)| !f.is_zero(x)).collect())
            .collect();
        BilinearMap { dim, values }
    }
}

/// Where a bilinear map first fails one of the two identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ResidualWitness {
    /// 1 for the identity in the first slot, 2 for the second.
    pub identity: u8,
    pub triple: [usize; 3],
}

/// Evaluates both biderivation identities of parity `γ` on every basis
/// triple, independently of the assembled linear system.
pub fn bider_residual<F: Field>(s: &Structure<F>, gamma: Parity, f: &BilinearMap<F::Elem>) -> Option<ResidualWitness> {
    let dim = s.dim();
    assert_eq!(f.dim, dim);
    let fl = s.field();
    // acc += sign * [x, y] for x, y in coordinates
    let add_bracket = |acc: &mut [F::Elem], x: &[(usize, F::Elem)], y: &[(usize, F::Elem)], negate: bool| {
        for (i, xi) in x {
            for (j, yj) in y {
                let c = if negate { fl.neg(&fl.mul(xi, yj)) } else { fl.mul(xi, yj) };
                s.add_bracket_into(acc, &c, *i, *j);
            }
        }
    };
    let add_f = |acc: &mut [F::Elem], left: &[(usize, F::Elem)], right: usize, first_slot: bool, scale: &F::Elem| {
        for (d, c) in left {
            let v = if first_slot { f.get(*d, right) } else { f.get(right, *d) };
            for (m, x) in v {
                acc[*m] = fl.add(&acc[*m], &fl.mul(&fl.mul(scale, c), x));
            }
        }
    };
    let one = fl.one();
    (0..dim).into_par_iter().find_map_first(|a| {
        let mut acc = vec![fl.zero(); dim];
        let ea = [(a, one.clone())];
        for b in 0..dim {
            let eb = [(b, one.clone())];
            for c in 0..dim {
                let ec = [(c, one.clone())];
                // f([a,b], c) - (-1)^{|a|γ}[a, f(b,c)] - (-1)^{|b||c|}[f(a,c), b]
                acc.iter_mut().for_each(|x| *x = fl.zero());
                add_f(&mut acc, s.bracket_basis(a, b), c, true, &one);
                add_bracket(&mut acc, &ea, f.get(b, c), !s.parity(a).koszul_negative(gamma));
                add_bracket(&mut acc, f.get(a, c), &eb, !s.parity(b).koszul_negative(s.parity(c)));
                if acc.iter().any(|x| !fl.is_zero(x)) {
                    return Some(ResidualWitness { identity: 1, triple: [a, b, c] });
                }
                // f(a, [b,c]) - [f(a,b), c] - (-1)^{(γ+|a|)|b|}[b, f(a,c)]
                acc.iter_mut().for_each(|x| *x = fl.zero());
                add_f(&mut acc, s.bracket_basis(b, c), a, false, &one);
                add_bracket(&mut acc, f.get(a, b), &ec, true);
                add_bracket(&mut acc, &eb, f.get(a, c), !(gamma + s.parity(a)).koszul_negative(s.parity(b)));
                if acc.iter().any(|x| !fl.is_zero(x)) {
                    return Some(ResidualWitness { identity: 2, triple: [a, b, c] });
                }
            }
        }
        None
    })
}

/// A pair `(a, b)` with `f(e_a, e_b) ≠ ±f(e_b, e_a)`, showing that `f` is
/// neither symmetric nor skew on basis elements.
pub fn skew_witness<F: Field>(field: &F, f: &BilinearMap<F::Elem>) -> Option<(usize, usize)> {
    let neg = |v: &[(usize, F::Elem)]| -> SparseVec<F::Elem> { v.iter().map(|(k, x)| (*k, field.neg(x))).collect() };
    (0..f.dim).flat_map(|a| (a..f.dim).map(move |b| (a, b))).find(|&(a, b)| {
        let (x, y) = (f.get(a, b), f.get(b, a));
        x != y && x != neg(y).as_slice()
    })
}

/// Whether `f(L_α, L_β) ⊆ L_{α+β+γ}` on every basis pair.
pub fn respects_parity<E>(parities: &[Parity], gamma: Parity, f: &BilinearMap<E>) -> bool {
    (0..f.dim).all(|a| (0..f.dim).all(|b| f.get(a, b).iter().all(|(k, _)| parities[*k] == parities[a] + parities[b] + gamma)))
}
