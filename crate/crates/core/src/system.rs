//! Shared bookkeeping for the derivation and biderivation systems: unknowns
//! grouped into blocks by grade, and per-output row accumulation.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::linalg::{canonicalize, Field, RowSink, SparseVec};
use crate::superfields::GradeKey;

const NONE: u32 = u32::MAX;

/// Admissible unknowns, numbered globally and grouped into blocks.
#[derive(Clone, Debug)]
pub(crate) struct UnknownIndex {
    block_of: Vec<u32>,
    local_of: Vec<u32>,
    /// Global ids per block, in increasing order.
    pub blocks: Vec<Vec<u32>>,
    by_key: HashMap<GradeKey, u32>,
}

impl UnknownIndex {
    /// `keyed(t)` gives the block key of global unknown `t`, or `None` if the
    /// unknown is excluded. With `single_block` every admissible unknown goes
    /// into one block.
    pub fn new(total: usize, single_block: bool, keyed: impl Fn(usize) -> Option<GradeKey>) -> Self {
        let mut groups: BTreeMap<GradeKey, Vec<u32>> = BTreeMap::new();
        for t in 0..total {
            if let Some(k) = keyed(t) {
                let k = if single_block { (0, 0) } else { k };
                groups.entry(k).or_default().push(t as u32);
            }
        }
        let mut block_of = vec![NONE; total];
        let mut local_of = vec![NONE; total];
        let mut blocks = Vec::with_capacity(groups.len());
        let mut by_key = HashMap::new();
        for (b, (key, ids)) in groups.into_iter().enumerate() {
            for (l, &t) in ids.iter().enumerate() {
                block_of[t as usize] = b as u32;
                local_of[t as usize] = l as u32;
            }
            if !single_block {
                by_key.insert(key, b as u32);
            }
            blocks.push(ids);
        }
        UnknownIndex { block_of, local_of, blocks, by_key }
    }

    pub fn is_unknown(&self, t: usize) -> bool {
        self.block_of[t] != NONE
    }

    pub fn block_of(&self, t: usize) -> Option<usize> {
        let b = self.block_of[t];
        (b != NONE).then_some(b as usize)
    }

    /// Block with a given key, if it has unknowns. Always `Some(0)` in
    /// single-block mode.
    pub fn block_with_key(&self, key: GradeKey) -> Option<usize> {
        if self.by_key.is_empty() {
            return (!self.blocks.is_empty()).then_some(0);
        }
        self.by_key.get(&key).map(|b| *b as usize)
    }

    pub fn total(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Lifts a block-local vector to global coordinates.
    pub fn globalize<E: Clone>(&self, b: usize, v: &[(usize, E)]) -> SparseVec<E> {
        v.iter().map(|(l, x)| (self.blocks[b][*l] as usize, x.clone())).collect()
    }

    fn local(&self, t: usize) -> usize {
        self.local_of[t] as usize
    }
}

/// Rows of one equation family, indexed by output coordinate.
pub(crate) struct RowAccumulator<E> {
    rows: Vec<Vec<(usize, E)>>,
    touched: Vec<usize>,
    /// Block accepting rows for each output coordinate, or `None`.
    target: Vec<Option<usize>>,
}

impl<E: Clone> RowAccumulator<E> {
    pub fn new(outputs: usize) -> Self {
        RowAccumulator { rows: vec![Vec::new(); outputs], touched: Vec::new(), target: vec![None; outputs] }
    }

    /// Sets which block each output row belongs to (`None` skips the row).
    pub fn set_targets(&mut self, target: impl Fn(usize) -> Option<usize>) {
        for (m, slot) in self.target.iter_mut().enumerate() {
            *slot = target(m);
        }
    }

    /// Adds `coeff * u_t` to row `m`; ignores excluded unknowns and skipped rows.
    #[inline]
    pub fn add(&mut self, idx: &UnknownIndex, m: usize, t: usize, coeff: E) {
        if self.target[m].is_none() || !idx.is_unknown(t) {
            return;
        }
        if self.rows[m].is_empty() {
            self.touched.push(m);
        }
        self.rows[m].push((t, coeff));
    }

    /// Sends the finished rows to their blocks, counting any row whose
    /// unknowns fall outside the expected block.
    pub fn flush<F: Field<Elem = E>>(&mut self, field: &F, idx: &UnknownIndex, sink: &mut RowSink<'_, E>, cross: &AtomicUsize) {
        for m in self.touched.drain(..) {
            let raw = std::mem::take(&mut self.rows[m]);
            let Some(b) = self.target[m] else { continue };
            let mut local = Vec::with_capacity(raw.len());
            let mut stray = false;
            for (t, c) in raw {
                if idx.block_of(t) != Some(b) {
                    stray = true;
                    continue;
                }
                local.push((idx.local(t), c));
            }
            if stray {
                cross.fetch_add(1, Ordering::Relaxed);
            }
            let row = canonicalize(field, local);
            if !row.is_empty() {
                sink.push(b, row);
            }
        }
    }
}
