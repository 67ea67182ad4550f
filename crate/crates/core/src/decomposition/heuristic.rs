use std::collections::{BTreeSet, HashSet};

use super::td::TreeDecomposition;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    MinDegree,
    MinFill,
}

fn fill_in(adj: &[HashSet<usize>], v: usize) -> usize {
    let nb: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Greedy elimination-ordering decomposition. Ties go to the lowest vertex id.
pub fn heuristic_decompose(g: &Graph, strategy: Strategy) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::new(0, vec![Vec::new()], Vec::new());
    }
    let mut adj: Vec<HashSet<usize>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let score = |adj: &[HashSet<usize>], v: usize| match strategy {
        Strategy::MinDegree => adj[v].len(),
        Strategy::MinFill => fill_in(adj, v),
    };
    let mut current: Vec<usize> = (0..n).map(|v| score(&adj, v)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (current[v], v)).collect();

    let mut order = Vec::with_capacity(n);
    let mut position = vec![usize::MAX; n];
    let mut bags = Vec::with_capacity(n);

    while let Some((_, v)) = queue.pop_first() {
        position[v] = order.len();
        order.push(v);
        let nb: Vec<usize> = {
            let mut nb: Vec<usize> = adj[v].iter().copied().collect();
            nb.sort_unstable();
            nb
        };
        let mut bag = nb.clone();
        bag.push(v);
        bags.push(bag);

        for &a in &nb {
            adj[a].remove(&v);
        }
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();

        let mut touched: BTreeSet<usize> = nb.iter().copied().collect();
        if strategy == Strategy::MinFill {
            for &a in &nb {
                touched.extend(adj[a].iter().copied());
            }
        }
        for u in touched {
            if position[u] != usize::MAX {
                continue;
            }
            let s = score(&adj, u);
            if s != current[u] {
                queue.remove(&(current[u], u));
                current[u] = s;
                queue.insert((s, u));
            }
        }
    }

    // bag i hangs below the bag of its earliest-eliminated later neighbour;
    // components are chained together through their last bags.
    let mut edges = Vec::with_capacity(n - 1);
    let mut roots = Vec::new();
    for (i, bag) in bags.iter().enumerate() {
        let v = order[i];
        let parent = bag
            .iter()
            .filter(|&&u| u != v)
            .map(|&u| position[u])
            .min();
        match parent {
            Some(p) => edges.push((i, p)),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition::new(n, bags, edges)
}
