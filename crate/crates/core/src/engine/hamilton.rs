//! Hamiltonian cycle and TSP over a nice decomposition.
//!
//! State at a node: the degree (0, 1, 2) of every bag vertex in the partial
//! edge set, packed two bits per bag position into the label, and the
//! pairing of open-path endpoints as a partition of the bag in which every
//! degree-1 position shares a block with its partner and every other
//! position is a singleton. Partial solutions are disjoint unions of paths;
//! closing a cycle is only allowed when it completes a Hamiltonian cycle,
//! and then goes to an answer accumulator instead of the table.

use std::collections::HashMap;
use std::time::Instant;

use serde::Serialize;

use super::{apply_policy, insert_field, remove_field, Observer, RunLimits, SliceReducer};
use crate::decomposition::{NiceDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::graph::{add_weight, Graph, Weight};
use crate::partition::{Label, Partition, WeightedTable, MAX_UNIVERSE};
use crate::reduce::{reduce, reduce_matchings, MAX_CUT_UNIVERSE, MAX_MATCHING_UNIVERSE};
use crate::stats::{ReducePolicy, RunStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonMode {
    Decision,
    Tsp,
}

#[derive(Clone, Copy, Debug)]
pub struct HamiltonOptions {
    pub mode: HamiltonMode,
    pub policy: ReducePolicy,
    /// Reduce matching slices with the general cut-matrix reduce instead.
    pub general_reduce: bool,
    pub limits: RunLimits,
}

impl HamiltonOptions {
    pub fn new(mode: HamiltonMode, policy: ReducePolicy) -> Self {
        HamiltonOptions {
            mode,
            policy,
            general_reduce: false,
            limits: RunLimits::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HamiltonOutcome {
    /// Weight of the cheapest Hamiltonian cycle (0 in decision mode).
    pub cycle_weight: Option<Weight>,
    pub stats: RunStats,
}

impl HamiltonOutcome {
    pub fn is_hamiltonian(&self) -> bool {
        self.cycle_weight.is_some()
    }
}

const NONE: u8 = u8::MAX;

#[inline]
fn degree(label: Label, pos: usize) -> u64 {
    label >> (2 * pos) & 3
}

#[inline]
fn with_degree(label: Label, pos: usize, d: u64) -> Label {
    label & !(3 << (2 * pos)) | d << (2 * pos)
}

/// Positions with degree 1, as a bitmask.
fn open_mask(label: Label, t: usize) -> u32 {
    (0..t).filter(|&i| degree(label, i) == 1).fold(0, |m, i| m | 1 << i)
}

fn all_two(label: Label, t: usize, except: &[usize]) -> bool {
    (0..t).all(|i| except.contains(&i) || degree(label, i) == 2)
}

fn partners(p: &Partition) -> [u8; MAX_UNIVERSE] {
    let mut first = [NONE; MAX_UNIVERSE];
    let mut partner = [NONE; MAX_UNIVERSE];
    for (i, &b) in p.digits().iter().enumerate() {
        let f = first[b as usize];
        if f == NONE {
            first[b as usize] = i as u8;
        } else {
            partner[i] = f;
            partner[f as usize] = i as u8;
        }
    }
    partner
}

fn encode(partner: &[u8; MAX_UNIVERSE], t: usize) -> Partition {
    let mut raw = [0u8; MAX_UNIVERSE];
    for i in 0..t {
        raw[i] = if partner[i] == NONE { i as u8 } else { (i as u8).min(partner[i]) };
    }
    Partition::canonicalize(&raw[..t])
}

struct Run<'a> {
    g: &'a Graph,
    nd: &'a NiceDecomposition,
    opts: HamiltonOptions,
    covered: Vec<usize>,
    best: Option<Weight>,
    stats: RunStats,
}

impl Run<'_> {
    fn edge_weight(&self, u: usize, v: usize) -> Result<Weight> {
        let w = self
            .g
            .edge_weight(u, v)
            .ok_or_else(|| Error::Decomposition(format!("({},{}) is not a graph edge", u + 1, v + 1)))?;
        Ok(match self.opts.mode {
            HamiltonMode::Decision => 0,
            HamiltonMode::Tsp => w,
        })
    }

    fn candidate(&mut self, w: Weight) {
        self.best = Some(self.best.map_or(w, |b| b.min(w)));
    }

    fn introduce_edge(&mut self, node: usize, table: WeightedTable, a: usize, b: usize, w: Weight) -> Result<WeightedTable> {
        let t = table.universe_len();
        let complete = self.covered[node] == self.g.n();
        let mut out = WeightedTable::with_capacity(t, table.len() * 2);
        for (label, p, x) in table.iter() {
            out.insert_min(label, *p, x);
            let (da, db) = (degree(label, a), degree(label, b));
            if da == 2 || db == 2 {
                continue;
            }
            let cost = add_weight(x, w)?;
            let mut partner = partners(p);
            match (da, db) {
                (0, 0) => {
                    partner[a] = b as u8;
                    partner[b] = a as u8;
                }
                (1, 1) if partner[a] as usize == b => {
                    if complete && all_two(label, t, &[a, b]) {
                        self.candidate(cost);
                    }
                    continue;
                }
                (1, 1) => {
                    let (x, y) = (partner[a], partner[b]);
                    partner[x as usize] = y;
                    partner[y as usize] = x;
                    partner[a] = NONE;
                    partner[b] = NONE;
                }
                _ => {
                    // one fresh endpoint extends the other's path
                    let (fresh, end) = if da == 0 { (a, b) } else { (b, a) };
                    let other = partner[end];
                    partner[other as usize] = fresh as u8;
                    partner[fresh] = other;
                    partner[end] = NONE;
                }
            }
            let label = with_degree(with_degree(label, a, da + 1), b, db + 1);
            out.insert_min(label, encode(&partner, t), cost);
        }
        Ok(out)
    }

    fn join(&mut self, node: usize, left: WeightedTable, right: WeightedTable) -> Result<WeightedTable> {
        let t = left.universe_len();
        let complete = self.covered[node] == self.g.n();
        let group = |tbl: &WeightedTable| {
            let mut m: HashMap<Label, Vec<(Partition, Weight)>> = HashMap::new();
            for (l, p, w) in tbl.iter() {
                m.entry(l).or_default().push((*p, w));
            }
            let mut v: Vec<_> = m.into_iter().collect();
            v.sort_unstable_by_key(|(l, _)| *l);
            v
        };
        let (ls, rs) = (group(&left), group(&right));
        let mut out = WeightedTable::new(t);
        for (la, rows_a) in &ls {
            for (lb, rows_b) in &rs {
                let mut label = 0u64;
                let mut fits = true;
                for i in 0..t {
                    let d = degree(*la, i) + degree(*lb, i);
                    if d > 2 {
                        fits = false;
                        break;
                    }
                    label |= d << (2 * i);
                }
                if !fits {
                    continue;
                }
                let all_full = all_two(label, t, &[]);
                for (pa, wa) in rows_a {
                    let ma = partners(pa);
                    for (pb, wb) in rows_b {
                        let mb = partners(pb);
                        let cost = add_weight(*wa, *wb)?;
                        match glue_paths(&ma, &mb, t) {
                            Glued::Paths(partner) => out.insert_min(label, encode(&partner, t), cost),
                            Glued::OneCycle => {
                                if complete && all_full {
                                    self.candidate(cost);
                                }
                            }
                            Glued::Invalid => {}
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

enum Glued {
    Paths([u8; MAX_UNIVERSE]),
    /// Exactly one cycle and no open path left.
    OneCycle,
    Invalid,
}

/// Union of two endpoint pairings, with union-find cycle detection.
fn glue_paths(a: &[u8; MAX_UNIVERSE], b: &[u8; MAX_UNIVERSE], t: usize) -> Glued {
    let mut parent: [u8; MAX_UNIVERSE] = std::array::from_fn(|i| i as u8);
    fn find(parent: &mut [u8; MAX_UNIVERSE], mut x: u8) -> u8 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    let mut cycles = 0;
    for side in [a, b] {
        for (i, &j) in side[..t].iter().enumerate() {
            if j == NONE || (j as usize) < i {
                continue;
            }
            let (x, y) = (find(&mut parent, i as u8), find(&mut parent, j));
            if x == y {
                cycles += 1;
            } else {
                parent[x as usize] = y;
            }
        }
    }
    let mut ends_of_root = [NONE; MAX_UNIVERSE];
    let mut out = [NONE; MAX_UNIVERSE];
    let mut open = 0;
    for i in 0..t {
        let deg = (a[i] != NONE) as u8 + (b[i] != NONE) as u8;
        if deg != 1 {
            continue;
        }
        open += 1;
        let r = find(&mut parent, i as u8) as usize;
        if ends_of_root[r] == NONE {
            ends_of_root[r] = i as u8;
        } else {
            let j = ends_of_root[r];
            out[i] = j;
            out[j as usize] = i as u8;
        }
    }
    match (cycles, open) {
        (0, _) => Glued::Paths(out),
        (1, 0) => Glued::OneCycle,
        _ => Glued::Invalid,
    }
}

fn check_fit(g: &Graph, nd: &NiceDecomposition) -> Result<()> {
    if nd.vertex_count() != g.n() {
        return Err(Error::Decomposition(format!(
            "decomposition is over {} vertices, graph has {}",
            nd.vertex_count(),
            g.n()
        )));
    }
    if nd.width() + 1 > MAX_UNIVERSE {
        return Err(Error::Decomposition(format!(
            "bags of {} vertices exceed the supported {MAX_UNIVERSE}",
            nd.width() + 1
        )));
    }
    let mut introduced = 0;
    for node in nd.nodes() {
        if let NodeKind::IntroduceEdge(u, v) = node.kind {
            if !g.has_edge(u, v) {
                return Err(Error::Decomposition(format!("({},{}) is not a graph edge", u + 1, v + 1)));
            }
            introduced += 1;
        }
    }
    if introduced != g.m() {
        return Err(Error::Decomposition(format!(
            "decomposition introduces {introduced} edges, graph has {}",
            g.m()
        )));
    }
    Ok(())
}

pub fn solve_hamilton(g: &Graph, nd: &NiceDecomposition, opts: HamiltonOptions) -> Result<HamiltonOutcome> {
    solve_hamilton_observed(g, nd, opts, &mut |_, _| {})
}

/// [`solve_hamilton`], reporting every node table to `observer`.
pub fn solve_hamilton_observed(
    g: &Graph,
    nd: &NiceDecomposition,
    opts: HamiltonOptions,
    observer: Observer<'_>,
) -> Result<HamiltonOutcome> {
    let start = Instant::now();
    check_fit(g, nd)?;
    let width = nd.width();
    let mut run = Run {
        g,
        nd,
        opts,
        covered: nd.subtree_counts(|_| true),
        best: None,
        stats: RunStats {
            width: width as u64,
            ..Default::default()
        },
    };
    if g.n() < 3 {
        run.stats.nanos = start.elapsed().as_nanos() as u64;
        return Ok(HamiltonOutcome {
            cycle_weight: None,
            stats: run.stats,
        });
    }

    let general = opts.general_reduce;
    let reducer = move |label: Label, rows: &[(Partition, Weight)], t: usize| {
        let _ = label;
        if !general && t <= MAX_MATCHING_UNIVERSE {
            Some(reduce_matchings(rows, t))
        } else if t <= MAX_CUT_UNIVERSE {
            Some(reduce(rows, t))
        } else {
            None
        }
    };
    let reducer: &SliceReducer<'_> = &reducer;

    let mut tables: Vec<Option<WeightedTable>> = vec![None; run.nd.nodes().len()];
    for (i, node) in run.nd.nodes().iter().enumerate() {
        opts.limits.check()?;
        let mut take = |c: usize| tables[c].take().expect("child table");
        let table = match node.kind {
            NodeKind::Leaf => {
                let mut t = WeightedTable::new(0);
                t.insert_min(0, Partition::empty(), 0);
                t
            }
            NodeKind::IntroduceVertex(v) => {
                let pos = node.bag.binary_search(&v).expect("in bag");
                take(node.children[0]).insert_at(pos, |l| insert_field(l, pos, 2, 0))?
            }
            NodeKind::IntroduceEdge(u, v) => {
                let a = node.bag.binary_search(&u).expect("in bag");
                let b = node.bag.binary_search(&v).expect("in bag");
                let w = run.edge_weight(u, v)?;
                let child = take(node.children[0]);
                run.introduce_edge(i, child, a, b, w)?
            }
            NodeKind::Forget(v) => {
                let child = take(node.children[0]);
                let pos = run.nd.nodes()[node.children[0]]
                    .bag
                    .binary_search(&v)
                    .expect("in child bag");
                let mut kept = child;
                kept.retain(|l, _, _| degree(l, pos) == 2);
                kept.project(pos, |_| false, |l| remove_field(l, pos, 2))?
            }
            NodeKind::Join => {
                let left = take(node.children[0]);
                let right = take(node.children[1]);
                run.join(i, left, right)?
            }
        };
        let t = node.bag.len();
        let table = apply_policy(
            table,
            &opts.policy,
            width,
            |l| open_mask(l, t),
            reducer,
            &mut run.stats,
        )?;
        run.stats
            .record_node(node.kind.name(), table.len(), opts.limits.per_node_rows);
        observer(i, &table);
        tables[i] = Some(table);
    }

    run.stats.nanos = start.elapsed().as_nanos() as u64;
    Ok(HamiltonOutcome {
        cycle_weight: run.best,
        stats: run.stats,
    })
}
