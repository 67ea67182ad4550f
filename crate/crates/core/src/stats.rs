//! Reduce policy and the per-run statistics record.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reduce::ReduceStats;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Never,
    Always,
    Threshold,
}

/// When to run base-finding on a node's table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReducePolicy {
    pub kind: PolicyKind,
    /// Row budget for [`PolicyKind::Threshold`]; `None` means `2^(width+1)`.
    pub threshold: Option<usize>,
}

impl ReducePolicy {
    pub const NEVER: ReducePolicy = ReducePolicy {
        kind: PolicyKind::Never,
        threshold: None,
    };
    pub const ALWAYS: ReducePolicy = ReducePolicy {
        kind: PolicyKind::Always,
        threshold: None,
    };

    pub fn threshold(rows: usize) -> Result<Self> {
        if rows == 0 {
            return Err(Error::Input("threshold must be at least 1".into()));
        }
        Ok(ReducePolicy {
            kind: PolicyKind::Threshold,
            threshold: Some(rows),
        })
    }

    pub fn from_kind(kind: PolicyKind, threshold: Option<usize>) -> Result<Self> {
        match (kind, threshold) {
            (PolicyKind::Threshold, Some(t)) => Self::threshold(t),
            (_, Some(0)) => Err(Error::Input("threshold must be at least 1".into())),
            (kind, threshold) => Ok(ReducePolicy { kind, threshold }),
        }
    }

    /// Threshold in effect for a decomposition of the given width.
    pub fn resolved_threshold(&self, width: usize) -> usize {
        self.threshold
            .unwrap_or_else(|| 1usize.checked_shl(width as u32 + 1).unwrap_or(usize::MAX))
    }

    /// Whether a node table of `rows` rows gets reduced.
    pub fn triggers(&self, rows: usize, width: usize) -> bool {
        match self.kind {
            PolicyKind::Never => false,
            PolicyKind::Always => true,
            PolicyKind::Threshold => rows > self.resolved_threshold(width),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub nodes: u64,
    pub width: u64,
    /// Largest node table, after the policy ran.
    pub max_table_rows: u64,
    /// Largest node table before the policy ran.
    pub max_table_rows_before_reduce: u64,
    /// Largest single-label slice seen before reduction, and its universe size.
    pub max_slice_rows: u64,
    pub max_slice_universe: u64,
    /// Largest single-label slice left after the policy ran.
    pub max_slice_rows_after_reduce: u64,
    pub reduce_calls: u64,
    pub rows_eliminated: u64,
    /// Slices the policy wanted reduced but whose universe was past the guards.
    pub reduce_skipped: u64,
    pub reduce: ReduceStats,
    /// Largest table per node kind.
    pub node_max_rows: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_node_rows: Vec<u64>,
    pub peak_memory_bytes: u64,
    pub nanos: u64,
}

/// Rough bytes per table entry (key, weight, hash map overhead).
pub(crate) const ENTRY_BYTES: u64 = 64;

impl RunStats {
    pub(crate) fn record_node(&mut self, kind: &str, rows: usize, keep_per_node: bool) {
        let rows = rows as u64;
        self.nodes += 1;
        self.max_table_rows = self.max_table_rows.max(rows);
        let slot = self.node_max_rows.entry(kind.to_string()).or_default();
        *slot = (*slot).max(rows);
        self.peak_memory_bytes = self.peak_memory_bytes.max(rows * ENTRY_BYTES);
        if keep_per_node {
            self.per_node_rows.push(rows);
        }
    }
}
