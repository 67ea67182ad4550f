//! Edge-weighted Steiner tree over a nice decomposition.
//!
//! State at a node: the set `S` of bag positions in the partial solution
//! (one bit per position in the label; bag terminals are always in `S`) and
//! the connectivity of the partial forest on the bag, as a partition of the
//! bag where positions outside `S` are singletons. Every component must keep
//! a vertex in the bag; when the last bag vertex of the only component is
//! forgotten and every terminal has been seen, the weight becomes an answer
//! candidate.

use std::time::Instant;

use super::{apply_policy, insert_field, remove_field, Observer, RunLimits, SliceReducer};
use crate::decomposition::{NiceDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::graph::{SteinerInstance, Weight};
use crate::partition::{Label, Partition, WeightedTable, MAX_UNIVERSE};
use crate::reduce::{reduce, MAX_CUT_UNIVERSE};
use crate::stats::{ReducePolicy, RunStats};

#[derive(Clone, Copy, Debug)]
pub struct SteinerOptions {
    pub policy: ReducePolicy,
    pub limits: RunLimits,
}

impl SteinerOptions {
    pub fn new(policy: ReducePolicy) -> Self {
        SteinerOptions {
            policy,
            limits: RunLimits::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SteinerOutcome {
    /// Minimum weight of a connected subgraph spanning all terminals.
    pub weight: Option<Weight>,
    pub stats: RunStats,
}

#[inline]
fn selected(label: Label, pos: usize) -> bool {
    label >> pos & 1 == 1
}

pub fn solve_steiner(inst: &SteinerInstance, nd: &NiceDecomposition, opts: SteinerOptions) -> Result<SteinerOutcome> {
    solve_steiner_observed(inst, nd, opts, &mut |_, _| {})
}

/// [`solve_steiner`], reporting every node table to `observer`.
pub fn solve_steiner_observed(
    inst: &SteinerInstance,
    nd: &NiceDecomposition,
    opts: SteinerOptions,
    observer: Observer<'_>,
) -> Result<SteinerOutcome> {
    let start = Instant::now();
    let g = &inst.graph;
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
    let width = nd.width();
    let mut stats = RunStats {
        width: width as u64,
        ..Default::default()
    };
    let terminals = inst.terminals();
    if terminals.len() <= 1 {
        stats.nanos = start.elapsed().as_nanos() as u64;
        return Ok(SteinerOutcome {
            weight: Some(0),
            stats,
        });
    }
    let seen_terminals = nd.subtree_counts(|v| terminals.contains(&v));
    let mut best: Option<Weight> = None;

    let reducer = |_: Label, rows: &[(Partition, Weight)], t: usize| {
        (t <= MAX_CUT_UNIVERSE).then(|| reduce(rows, t))
    };
    let reducer: &SliceReducer<'_> = &reducer;

    let mut introduced = 0usize;
    let mut tables: Vec<Option<WeightedTable>> = vec![None; nd.nodes().len()];
    for (i, node) in nd.nodes().iter().enumerate() {
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
                let child = take(node.children[0]);
                let inside = child.insert_at(pos, |l| insert_field(l, pos, 1, 1))?;
                if terminals.contains(&v) {
                    inside
                } else {
                    inside.union(child.insert_at(pos, |l| insert_field(l, pos, 1, 0))?)?
                }
            }
            NodeKind::IntroduceEdge(u, v) => {
                let w = g
                    .edge_weight(u, v)
                    .ok_or_else(|| Error::Decomposition(format!("({},{}) is not a graph edge", u + 1, v + 1)))?;
                introduced += 1;
                let a = node.bag.binary_search(&u).expect("in bag");
                let b = node.bag.binary_search(&v).expect("in bag");
                let child = take(node.children[0]);
                let mut both = child.clone();
                both.retain(|l, _, _| selected(l, a) && selected(l, b));
                child.union(both.glue(a, b, w)?)?
            }
            NodeKind::Forget(v) => {
                let child = take(node.children[0]);
                let pos = nd.nodes()[node.children[0]]
                    .bag
                    .binary_search(&v)
                    .expect("in child bag");
                if seen_terminals[i] == terminals.len() {
                    // the component leaving with v is the whole solution
                    for (l, p, w) in child.iter() {
                        if l == 1 << pos && p.is_singleton(pos) {
                            best = Some(best.map_or(w, |b| b.min(w)));
                        }
                    }
                }
                child.project(pos, |l| selected(l, pos), |l| remove_field(l, pos, 1))?
            }
            NodeKind::Join => {
                let left = take(node.children[0]);
                let right = take(node.children[1]);
                left.join(&right)?
            }
        };
        let table = apply_policy(
            table,
            &opts.policy,
            width,
            |l| l as u32,
            reducer,
            &mut stats,
        )?;
        stats.record_node(node.kind.name(), table.len(), opts.limits.per_node_rows);
        observer(i, &table);
        tables[i] = Some(table);
    }
    if introduced != g.m() {
        return Err(Error::Decomposition(format!(
            "decomposition introduces {introduced} edges, graph has {}",
            g.m()
        )));
    }

    stats.nanos = start.elapsed().as_nanos() as u64;
    Ok(SteinerOutcome { weight: best, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{heuristic_decompose, nicify, Strategy};
    use crate::graph::Graph;
    use crate::oracles;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::{BTreeSet, HashMap};

    fn solve(inst: &SteinerInstance, policy: ReducePolicy) -> Option<Weight> {
        let nd = nicify(&heuristic_decompose(&inst.graph, Strategy::MinDegree), &inst.graph).unwrap();
        solve_steiner(inst, &nd, SteinerOptions::new(policy)).unwrap().weight
    }

    #[test]
    fn star_with_leaf_terminals() {
        let g = Graph::unweighted(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let inst = SteinerInstance::new(g, BTreeSet::from([1, 2, 3])).unwrap();
        assert_eq!(solve(&inst, ReducePolicy::NEVER), Some(3));
        assert_eq!(solve(&inst, ReducePolicy::ALWAYS), Some(3));
    }

    #[test]
    fn single_terminal_and_disconnected() {
        let g = Graph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        let one = SteinerInstance::new(g.clone(), BTreeSet::from([2])).unwrap();
        assert_eq!(solve(&one, ReducePolicy::ALWAYS), Some(0));
        let apart = SteinerInstance::new(g, BTreeSet::from([0, 3])).unwrap();
        assert_eq!(solve(&apart, ReducePolicy::ALWAYS), None);
    }

    fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> SteinerInstance {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(0.45) {
                    edges.push((u, v, rng.random_range(1..=10)));
                }
            }
        }
        let g = Graph::new(n, edges).unwrap();
        let k = rng.random_range(1..=n.min(4));
        let terms: BTreeSet<usize> = (0..k).map(|_| rng.random_range(0..n)).collect();
        SteinerInstance::new(g, terms).unwrap()
    }

    #[test]
    fn random_instances_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..150 {
            let n = rng.random_range(2..=9);
            let inst = random_instance(&mut rng, n);
            let expect = oracles::oracle_steiner(&inst).unwrap();
            for policy in [ReducePolicy::NEVER, ReducePolicy::ALWAYS, ReducePolicy::threshold(3).unwrap()] {
                assert_eq!(solve(&inst, policy), expect, "{}", inst.graph.to_gr());
            }
        }
    }

    #[test]
    fn zero_weight_edge_never_hurts() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..40 {
            let inst = random_instance(&mut rng, 8);
            let before = solve(&inst, ReducePolicy::ALWAYS);
            let (u, v) = (rng.random_range(0..8), rng.random_range(0..8));
            if u == v || inst.graph.has_edge(u, v) {
                continue;
            }
            let mut edges: Vec<_> = inst.graph.edges().iter().map(|e| (e.u, e.v, e.weight)).collect();
            edges.push((u, v, 0));
            let g = Graph::new(8, edges).unwrap();
            let after = solve(&SteinerInstance::new(g, inst.terminals().clone()).unwrap(), ReducePolicy::ALWAYS);
            match (before, after) {
                (Some(b), Some(a)) => assert!(a <= b),
                (Some(_), None) => panic!("adding an edge lost feasibility"),
                _ => {}
            }
        }
    }

    #[test]
    fn node_tables_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut checked = 0;
        while checked < 25 {
            let n = rng.random_range(3..=8);
            let inst = random_instance(&mut rng, n);
            if inst.graph.m() > 12 || inst.terminals().len() < 2 {
                continue;
            }
            let nd = nicify(&heuristic_decompose(&inst.graph, Strategy::MinFill), &inst.graph).unwrap();
            let mut seen = Vec::new();
            solve_steiner_observed(&inst, &nd, SteinerOptions::new(ReducePolicy::NEVER), &mut |i, t| {
                seen.push((i, t.clone()))
            })
            .unwrap();
            for (i, table) in seen {
                let expect = oracles::steiner_node_table(&inst, &nd, i).unwrap();
                let got: HashMap<(u64, Partition), Weight> =
                    table.iter().map(|(l, p, w)| ((l, *p), w)).collect();
                assert_eq!(got, expect, "node {i} of\n{}", inst.graph.to_gr());
            }
            checked += 1;
        }
    }

    #[test]
    fn reduced_slices_respect_cut_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let inst = random_instance(&mut rng, 10);
            let nd = nicify(&heuristic_decompose(&inst.graph, Strategy::MinFill), &inst.graph).unwrap();
            let mut worst = 0i64;
            solve_steiner_observed(&inst, &nd, SteinerOptions::new(ReducePolicy::ALWAYS), &mut |_, table| {
                for (label, rows) in table.slices() {
                    let t = label.count_ones();
                    let cap = if t == 0 { 1 } else { 1i64 << (t - 1) };
                    worst = worst.max(rows.len() as i64 - cap);
                }
            })
            .unwrap();
            assert!(worst <= 0);
        }
    }
}
