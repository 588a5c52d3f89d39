use super::echelon::{canonicalize, Echelon, SparseVec};
use super::field::{Field, FieldTag};
use crate::Error;

/// Sparse matrix stored by rows in canonical form.
#[derive(Clone, Debug)]
pub struct SparseMatrix<F: Field> {
    field: F,
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec<F::Elem>>,
}

/// Basis of a right kernel.
#[derive(Clone, Debug)]
pub struct NullspaceBasis<F: Field> {
    pub field: FieldTag,
    pub ncols: usize,
    pub vectors: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> NullspaceBasis<F> {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

impl<F: Field> SparseMatrix<F> {
    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(field: F, nrows: usize, ncols: usize, triplets: impl IntoIterator<Item = (usize, usize, F::Elem)>) -> Result<Self, Error> {
        let mut rows: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            if r >= nrows || c >= ncols {
                return Err(Error::MatrixIndex { row: r, col: c, nrows, ncols });
            }
            rows[r].push((c, v));
        }
        let rows = rows.into_iter().map(|r| canonicalize(&field, r)).collect();
        Ok(SparseMatrix { field, nrows, ncols, rows })
    }

    pub fn from_rows(field: F, ncols: usize, rows: Vec<Vec<(usize, F::Elem)>>) -> Result<Self, Error> {
        let nrows = rows.len();
        let triplets = rows.into_iter().enumerate().flat_map(|(r, row)| row.into_iter().map(move |(c, v)| (r, c, v)));
        Self::from_triplets(field, nrows, ncols, triplets)
    }

    pub fn zeros(field: F, nrows: usize, ncols: usize) -> Self {
        SparseMatrix { field, nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// `M v`
    pub fn mul_vec(&self, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut dense = vec![f.zero(); self.ncols];
        for (i, x) in v {
            dense[*i] = x.clone();
        }
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(r, row)| {
                let mut acc = f.zero();
                for (c, x) in row {
                    if !f.is_zero(&dense[*c]) {
                        acc = f.add(&acc, &f.mul(x, &dense[*c]));
                    }
                }
                (!f.is_zero(&acc)).then_some((r, acc))
            })
            .collect()
    }

    /// Column order for elimination: sparse columns first (a static
    /// Markowitz-style ordering), ties broken by index.
    fn column_order(&self) -> (Vec<usize>, Vec<usize>) {
        let mut counts = vec![0usize; self.ncols];
        for row in &self.rows {
            for (c, _) in row {
                counts[*c] += 1;
            }
        }
        let mut order: Vec<usize> = (0..self.ncols).collect();
        order.sort_by_key(|&c| (counts[c], c));
        let mut position = vec![0; self.ncols];
        for (pos, &c) in order.iter().enumerate() {
            position[c] = pos;
        }
        (order, position)
    }

    fn eliminate(&self) -> (Echelon<F>, Vec<usize>) {
        let (order, position) = self.column_order();
        let mut rows: Vec<&SparseVec<F::Elem>> = self.rows.iter().filter(|r| !r.is_empty()).collect();
        rows.sort_by_key(|r| r.len());
        let mut ech = Echelon::new(self.field.clone(), self.ncols);
        for row in rows {
            let mut permuted: SparseVec<F::Elem> = row.iter().map(|(c, v)| (position[*c], v.clone())).collect();
            permuted.sort_by_key(|(c, _)| *c);
            ech.insert(permuted);
            if ech.rank() == self.ncols {
                break;
            }
        }
        (ech, order)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0.rank()
    }

    /// Exact kernel basis `{v : M v = 0}`.
    pub fn nullspace(&self) -> NullspaceBasis<F> {
        let (ech, order) = self.eliminate();
        let vectors = ech
            .nullspace()
            .into_iter()
            .map(|v| {
                let mut w: SparseVec<F::Elem> = v.into_iter().map(|(p, x)| (order[p], x)).collect();
                w.sort_by_key(|(c, _)| *c);
                w
            })
            .collect();
        NullspaceBasis { field: self.field.tag(), ncols: self.ncols, vectors }
    }

    /// A particular solution of `M x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, rhs: &[(usize, F::Elem)]) -> Option<SparseVec<F::Elem>> {
        let f = &self.field;
        let mut b: Vec<Option<F::Elem>> = vec![None; self.nrows];
        for (r, x) in rhs {
            b[*r] = Some(x.clone());
        }
        let mut ech = Echelon::new(f.clone(), self.ncols + 1);
        for (r, row) in self.rows.iter().enumerate() {
            let mut aug = row.clone();
            if let Some(x) = &b[r] {
                if !f.is_zero(x) {
                    aug.push((self.ncols, f.neg(x)));
                }
            }
            if !aug.is_empty() {
                ech.insert(aug);
            }
        }
        ech.solve_augmented()
    }
}

/// Rank of a list of sparse vectors.
pub fn rank_of<F: Field>(field: &F, ncols: usize, vectors: &[SparseVec<F::Elem>]) -> usize {
    let mut ech = Echelon::new(field.clone(), ncols);
    for v in vectors {
        ech.insert(v.clone());
    }
    ech.rank()
}

/// Decides whether `v` is a linear combination of `vectors`.
pub fn in_span<F: Field>(field: &F, ncols: usize, vectors: &[SparseVec<F::Elem>], v: &SparseVec<F::Elem>) -> bool {
    let mut ech = Echelon::new(field.clone(), ncols);
    for w in vectors {
        ech.insert(w.clone());
    }
    ech.contains(v.clone())
}
