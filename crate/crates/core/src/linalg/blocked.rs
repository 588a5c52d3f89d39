//! Block-diagonal systems solved by streaming rows into one incremental
//! echelon form per block.
//!
//! Rows are produced in fixed chunks. Each round generates a group of chunks
//! in parallel, then feeds every block its rows in chunk order, blocks in
//! parallel. Row order within a block therefore never depends on the thread
//! count, and neither do the reported row counts.

use rayon::prelude::*;

use super::echelon::{Echelon, SparseVec};
use super::field::Field;

/// Chunks generated per round.
const ROUND: usize = 16;

/// Why a block stopped receiving rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockStatus {
    /// Every row was seen.
    Complete,
    /// The rank reached its upper bound; remaining rows were skipped.
    Saturated,
    /// The row limit was hit before the block was resolved.
    LimitExceeded,
}

/// One block: its number of unknowns and the rank at which no further row
/// can change the answer (`unknowns` minus a proven lower bound on the
/// nullity).
#[derive(Clone, Copy, Debug)]
pub struct BlockSpec {
    pub unknowns: usize,
    pub stop_rank: usize,
}

#[derive(Clone, Debug)]
pub struct BlockOutcome<E> {
    pub unknowns: usize,
    pub rows: usize,
    pub rank: usize,
    pub status: BlockStatus,
    /// Kernel basis in local coordinates, when requested and nonzero.
    pub nullspace: Option<Vec<SparseVec<E>>>,
}

impl<E> BlockOutcome<E> {
    pub fn nullity(&self) -> usize {
        self.unknowns - self.rank
    }
}

/// Receives rows from a generator.
pub struct RowSink<'a, E> {
    active: &'a [bool],
    rows: Vec<(u32, SparseVec<E>)>,
}

impl<E> RowSink<'_, E> {
    /// Whether block `b` still accepts rows; generators may skip work otherwise.
    pub fn wants(&self, b: usize) -> bool {
        self.active[b]
    }

    /// Rows must be canonical and in the block's local coordinates.
    pub fn push(&mut self, b: usize, row: SparseVec<E>) {
        if self.active[b] && !row.is_empty() {
            self.rows.push((b as u32, row));
        }
    }
}

struct State<F: Field> {
    spec: BlockSpec,
    ech: Echelon<F>,
    rows: usize,
    status: Option<BlockStatus>,
}

/// Solves all blocks. `generate(chunk, sink)` emits the rows of one chunk.
pub fn solve_blocked<F, G>(
    field: &F,
    specs: &[BlockSpec],
    chunks: usize,
    row_limit: Option<usize>,
    retain: bool,
    generate: G,
) -> Vec<BlockOutcome<F::Elem>>
where
    F: Field,
    G: Fn(usize, &mut RowSink<'_, F::Elem>) + Sync,
{
    let mut states: Vec<State<F>> = specs
        .iter()
        .map(|s| State {
            spec: *s,
            ech: Echelon::new(field.clone(), s.unknowns),
            rows: 0,
            status: (s.stop_rank == 0).then_some(BlockStatus::Saturated),
        })
        .collect();

    let mut start = 0;
    while start < chunks {
        let active: Vec<bool> = states.iter().map(|s| s.status.is_none()).collect();
        if !active.iter().any(|&a| a) {
            break;
        }
        let end = (start + ROUND).min(chunks);
        let produced: Vec<Vec<(u32, SparseVec<F::Elem>)>> = (start..end)
            .into_par_iter()
            .map(|c| {
                let mut sink = RowSink { active: &active, rows: Vec::new() };
                generate(c, &mut sink);
                sink.rows
            })
            .collect();
        let mut buckets: Vec<Vec<SparseVec<F::Elem>>> = (0..states.len()).map(|_| Vec::new()).collect();
        for chunk in produced {
            for (b, row) in chunk {
                buckets[b as usize].push(row);
            }
        }
        states.par_iter_mut().zip(buckets.into_par_iter()).filter(|(_, rows)| !rows.is_empty()).for_each(|(st, rows)| {
            for row in rows {
                if st.status.is_some() {
                    break;
                }
                st.rows += 1;
                st.ech.insert(row);
                if st.ech.rank() >= st.spec.stop_rank {
                    st.status = Some(BlockStatus::Saturated);
                } else if row_limit.is_some_and(|l| st.rows >= l) {
                    st.status = Some(BlockStatus::LimitExceeded);
                }
            }
        });
        start = end;
    }

    states
        .into_par_iter()
        .map(|st| {
            let rank = st.ech.rank();
            let status = st.status.unwrap_or(BlockStatus::Complete);
            let nullspace = (retain && rank < st.spec.unknowns && status != BlockStatus::LimitExceeded).then(|| st.ech.nullspace());
            BlockOutcome { unknowns: st.spec.unknowns, rows: st.rows, rank, status, nullspace }
        })
        .collect()
}
