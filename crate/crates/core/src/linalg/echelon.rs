use super::field::Field;

/// A sparse vector: `(index, value)` pairs, strictly increasing in index,
/// with no stored zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// Sorts, merges duplicate indices and drops zeros.
pub fn canonicalize<F: Field>(field: &F, mut v: Vec<(usize, F::Elem)>) -> SparseVec<F::Elem> {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec<F::Elem> = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y = field.add(y, &x),
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !field.is_zero(x));
    out
}

/// `a - factor * b` for sorted sparse vectors.
pub(crate) fn axpy_sub<F: Field>(field: &F, a: &[(usize, F::Elem)], factor: &F::Elem, b: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (ca, cb) = (a[i].0, b[j].0);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, field.neg(&field.mul(factor, &b[j].1))));
            j += 1;
        } else {
            let v = field.mul_sub(&a[i].1, factor, &b[j].1);
            if !field.is_zero(&v) {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    for (c, x) in &b[j..] {
        out.push((*c, field.neg(&field.mul(factor, x))));
    }
    out
}

/// Incremental row echelon form.
///
/// Each stored row has its pivot at its smallest column, normalized to 1.
/// Rows can be streamed in one at a time; dependent rows reduce to zero and
/// are discarded.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    ncols: usize,
    pivots: Vec<Option<SparseVec<F::Elem>>>,
    rank: usize,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, ncols: usize) -> Self {
        Echelon { field, ncols, pivots: vec![None; ncols], rank: 0 }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rank
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots[col].is_some()
    }

    /// Total stored entries, a measure of fill-in.
    pub fn fill(&self) -> usize {
        self.pivots.iter().flatten().map(|r| r.len()).sum()
    }

    /// Reduces until the leading column is not a pivot; returns the remainder.
    pub fn reduce(&self, mut v: SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        while let Some((c, lead)) = v.first() {
            match &self.pivots[*c] {
                None => break,
                Some(p) => {
                    let factor = lead.clone();
                    v = axpy_sub(&self.field, &v[1..], &factor, &p[1..]);
                }
            }
        }
        v
    }

    /// True if `v` lies in the row space.
    pub fn contains(&self, v: SparseVec<F::Elem>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts a canonical sparse row; returns true if it raised the rank.
    pub fn insert(&mut self, v: SparseVec<F::Elem>) -> bool {
        debug_assert!(v.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(v.last().is_none_or(|(c, _)| *c < self.ncols));
        let mut v = self.reduce(v);
        let Some((c, lead)) = v.first() else {
            return false;
        };
        let c = *c;
        let inv = self.field.inv(lead).expect("nonzero leading entry");
        for (_, x) in v.iter_mut() {
            *x = self.field.mul(x, &inv);
        }
        self.pivots[c] = Some(v);
        self.rank += 1;
        true
    }

    /// Basis of the solution space `{x : r . x = 0 for every stored row r}`,
    /// one vector per free column, with a 1 in that column.
    pub fn nullspace(&self) -> Vec<SparseVec<F::Elem>> {
        let f = &self.field;
        let mut basis = Vec::with_capacity(self.nullity());
        for free in (0..self.ncols).filter(|&c| self.pivots[c].is_none()) {
            let mut x = vec![f.zero(); self.ncols];
            x[free] = f.one();
            // Columns beyond the free one only ever see zeros.
            for c in (0..free).rev() {
                if let Some(p) = &self.pivots[c] {
                    let mut acc = f.zero();
                    for (j, v) in &p[1..] {
                        if !f.is_zero(&x[*j]) {
                            acc = f.mul_sub(&acc, v, &x[*j]);
                        }
                    }
                    x[c] = acc;
                }
            }
            basis.push(x.into_iter().enumerate().filter(|(_, v)| !f.is_zero(v)).collect());
        }
        basis
    }

    /// Particular solution treating the last column as the negated right-hand
    /// side: returns `x` (length `ncols - 1`) with `r . (x, 1) = 0` for every
    /// stored row, or `None` if the last column is a pivot (inconsistent).
    pub fn solve_augmented(&self) -> Option<SparseVec<F::Elem>> {
        let f = &self.field;
        let last = self.ncols.checked_sub(1)?;
        if self.pivots[last].is_some() {
            return None;
        }
        let mut x = vec![f.zero(); self.ncols];
        x[last] = f.one();
        for c in (0..last).rev() {
            if let Some(p) = &self.pivots[c] {
                let mut acc = f.zero();
                for (j, v) in &p[1..] {
                    if !f.is_zero(&x[*j]) {
                        acc = f.mul_sub(&acc, v, &x[*j]);
                    }
                }
                x[c] = acc;
            }
        }
        x.truncate(last);
        Some(x.into_iter().enumerate().filter(|(_, v)| !f.is_zero(v)).collect())
    }
}

/// A reduced row and its expression in the generators.
type Tracked<E> = (SparseVec<E>, SparseVec<E>);

/// Echelon form that records how each stored row was obtained from the
/// inserted generators, so membership queries return coordinates.
#[derive(Clone, Debug)]
pub struct SpanBasis<F: Field> {
    field: F,
    pivots: Vec<Option<Tracked<F::Elem>>>,
    count: usize,
}

impl<F: Field> SpanBasis<F> {
    pub fn new(field: F, ambient_dim: usize) -> Self {
        SpanBasis { field, pivots: vec![None; ambient_dim], count: 0 }
    }

    /// Number of generators inserted so far.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    fn reduce(&self, mut v: SparseVec<F::Elem>) -> (SparseVec<F::Elem>, SparseVec<F::Elem>) {
        let f = &self.field;
        let mut combo: SparseVec<F::Elem> = Vec::new();
        while let Some((c, lead)) = v.first() {
            match &self.pivots[*c] {
                None => break,
                Some((p, pc)) => {
                    let factor = lead.clone();
                    v = axpy_sub(f, &v[1..], &factor, &p[1..]);
                    // v_new = v_old - factor * p, so v_old = v_new + factor * p
                    combo = axpy_sub(f, &combo, &f.neg(&factor), pc);
                }
            }
        }
        (v, combo)
    }

    /// Appends generator number `len()`; fails if it is in the current span.
    pub fn push(&mut self, v: SparseVec<F::Elem>) -> Result<(), SparseVec<F::Elem>> {
        let f = self.field.clone();
        let (rest, combo) = self.reduce(v);
        let Some((c, lead)) = rest.first() else {
            return Err(combo);
        };
        let c = *c;
        let inv = f.inv(lead).expect("nonzero leading entry");
        // rest = v - combo . generators
        let mut track = axpy_sub(&f, &[(self.count, f.one())], &f.one(), &combo);
        for (_, x) in track.iter_mut() {
            *x = f.mul(x, &inv);
        }
        let rest: SparseVec<F::Elem> = rest.into_iter().map(|(j, x)| (j, f.mul(&x, &inv))).collect();
        track.sort_by_key(|(j, _)| *j);
        self.pivots[c] = Some((rest, track));
        self.count += 1;
        Ok(())
    }

    /// Coordinates of `v` with respect to the generators, if it is in their span.
    pub fn coordinates(&self, v: SparseVec<F::Elem>) -> Option<SparseVec<F::Elem>> {
        let (rest, combo) = self.reduce(v);
        rest.is_empty().then_some(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::{PrimeField, Rationals};
    use crate::scalar::{rat, Rational};

    fn row(v: &[(usize, i64)]) -> SparseVec<Rational> {
        v.iter().map(|&(i, x)| (i, rat(x))).collect()
    }

    #[test]
    fn streaming_rank_and_nullspace() {
        let mut e = Echelon::new(Rationals::new(), 3);
        assert!(e.insert(row(&[(0, 1), (1, 2)])));
        assert!(e.insert(row(&[(1, 1), (2, 1)])));
        assert!(!e.insert(row(&[(0, 1), (1, 3), (2, 1)])));
        assert_eq!(e.rank(), 2);
        let ns = e.nullspace();
        assert_eq!(ns, vec![row(&[(0, 2), (1, -1), (2, 1)])]);
    }

    #[test]
    fn span_coordinates() {
        let f = Rationals::new();
        let mut s = SpanBasis::new(f, 3);
        s.push(row(&[(0, 1), (1, 1)])).unwrap();
        s.push(row(&[(1, 1), (2, 1)])).unwrap();
        assert!(s.push(row(&[(0, 1), (2, -1)])).is_err());
        let c = s.coordinates(row(&[(0, 2), (1, 5), (2, 3)])).unwrap();
        assert_eq!(c, row(&[(0, 2), (1, 3)]));
        assert!(s.coordinates(row(&[(2, 1)])).is_none());
    }

    #[test]
    fn augmented_solve() {
        // x0 + x1 = 3, x1 = 1 (rhs negated in the last column)
        let mut e = Echelon::new(Rationals::new(), 3);
        e.insert(row(&[(0, 1), (1, 1), (2, -3)]));
        e.insert(row(&[(1, 1), (2, -1)]));
        assert_eq!(e.solve_augmented().unwrap(), row(&[(0, 2), (1, 1)]));
        e.insert(row(&[(0, 1), (1, 1), (2, -4)]));
        assert!(e.solve_augmented().is_none());
    }

    #[test]
    fn prime_field_echelon() {
        let f = PrimeField::new(5).unwrap();
        let mut e = Echelon::new(f, 2);
        assert!(e.insert(vec![(0, 1), (1, 2)]));
        assert!(!e.insert(vec![(0, 3), (1, 1)])); // 3 * (1, 2) = (3, 6 = 1)
        assert_eq!(e.nullspace(), vec![vec![(0, 3), (1, 1)]]);
    }
}
