//! Dynamic programs over nice tree decompositions.

pub mod hamilton;
pub mod steiner;

use std::collections::HashMap;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::Weight;
use crate::partition::{Label, Partition, WeightedTable};
use crate::reduce::ReduceStats;
use crate::stats::{ReducePolicy, RunStats};

pub use hamilton::{solve_hamilton, HamiltonMode, HamiltonOptions, HamiltonOutcome};
pub use steiner::{solve_steiner, SteinerOptions, SteinerOutcome};

/// Called with `(node index, table)` after every node, once the policy ran.
pub type Observer<'a> = &'a mut dyn FnMut(usize, &WeightedTable);

/// Knobs shared by both engines.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunLimits {
    pub deadline: Option<Instant>,
    pub per_node_rows: bool,
}

impl RunLimits {
    pub(crate) fn check(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Timeout),
            _ => Ok(()),
        }
    }
}

/// What a slice reducer gets: the label, the slice's rows restricted to the
/// label's universe, and that universe's size. `None` means "leave as is".
pub(crate) type SliceReducer<'a> =
    dyn Fn(Label, &[(Partition, Weight)], usize) -> Option<Result<(Vec<(Partition, Weight)>, ReduceStats)>> + 'a;

/// Applies the policy to a node table, slice by slice.
///
/// `universe(label)` is the position mask the label's partitions live on; the
/// reducer sees partitions restricted to that mask.
pub(crate) fn apply_policy(
    table: WeightedTable,
    policy: &ReducePolicy,
    width: usize,
    universe: impl Fn(Label) -> u32,
    reducer: &SliceReducer<'_>,
    stats: &mut RunStats,
) -> Result<WeightedTable> {
    stats.max_table_rows_before_reduce = stats.max_table_rows_before_reduce.max(table.len() as u64);
    let reducing = policy.triggers(table.len(), width);
    let slices = table.slices();
    for (label, rows) in &slices {
        if rows.len() as u64 > stats.max_slice_rows {
            stats.max_slice_rows = rows.len() as u64;
            stats.max_slice_universe = universe(*label).count_ones() as u64;
        }
    }
    if !reducing {
        let largest = slices.iter().map(|(_, r)| r.len()).max().unwrap_or(0);
        stats.max_slice_rows_after_reduce = stats.max_slice_rows_after_reduce.max(largest as u64);
        return Ok(table);
    }

    let mut out = WeightedTable::with_capacity(table.universe_len(), table.len());
    drop(table);
    for (label, rows) in slices {
        let mask = universe(label);
        let t = mask.count_ones() as usize;
        let kept: Vec<(Partition, Weight)> = if rows.len() <= 1 {
            rows
        } else {
            let mut back: HashMap<Partition, Partition> = HashMap::with_capacity(rows.len());
            let restricted: Vec<(Partition, Weight)> = rows
                .iter()
                .map(|(p, w)| {
                    let r = p.restrict(mask);
                    back.insert(r, *p);
                    (r, *w)
                })
                .collect();
            debug_assert_eq!(back.len(), rows.len(), "restriction must be injective per label");
            match reducer(label, &restricted, t) {
                None => {
                    stats.reduce_skipped += 1;
                    rows
                }
                Some(res) => {
                    let (small, rs) = res?;
                    stats.reduce_calls += 1;
                    stats.rows_eliminated += rs.rows_in - rs.rows_out;
                    stats.reduce.absorb(&rs);
                    small.into_iter().map(|(r, w)| (back[&r], w)).collect()
                }
            }
        };
        stats.max_slice_rows_after_reduce = stats.max_slice_rows_after_reduce.max(kept.len() as u64);
        for (p, w) in kept {
            out.insert_min(label, p, w);
        }
    }
    Ok(out)
}

/// Inserts a field of `bits` bits holding `value` at field index `pos`.
#[inline]
pub(crate) fn insert_field(label: Label, pos: usize, bits: usize, value: u64) -> Label {
    let shift = pos * bits;
    let low = label & ((1u64 << shift) - 1);
    let high = label >> shift;
    low | value << shift | (high << bits) << shift
}

/// Removes the field of `bits` bits at field index `pos`.
#[inline]
pub(crate) fn remove_field(label: Label, pos: usize, bits: usize) -> Label {
    let shift = pos * bits;
    let low = label & ((1u64 << shift) - 1);
    let high = (label >> shift) >> bits;
    low | high << shift
}
