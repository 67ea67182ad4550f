//! Brute-force ground truth at desk scale.
//!
//! Nothing here calls into the engines or the reduction code; only the plain
//! data types (graphs, partitions, decompositions) are shared.

use std::collections::{BTreeSet, HashMap};

use crate::decomposition::{NiceDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::graph::{Graph, SteinerInstance, Weight};
use crate::partition::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_universe: usize,
    pub max_matching_universe: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 10,
            max_universe: 8,
            max_matching_universe: 8,
        }
    }
}

impl OracleBudget {
    fn vertices(&self, n: usize) -> Result<()> {
        if n > self.max_vertices {
            return Err(Error::Budget(format!("{n} vertices > {}", self.max_vertices)));
        }
        Ok(())
    }
}

/// Bell numbers by the Bell triangle.
pub fn bell(t: usize) -> u128 {
    let mut row: Vec<u128> = vec![1];
    for _ in 0..t {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for x in &row {
            let prev = *next.last().unwrap();
            next.push(prev + x);
        }
        row = next;
    }
    row[0]
}

/// Every partition of `t` elements as a list of blocks, built by placing
/// each element into an existing block or a fresh one.
fn all_partitions(t: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new()];
    for x in 0..t {
        let mut next = Vec::new();
        for blocks in out {
            for i in 0..blocks.len() {
                let mut b: Vec<Vec<usize>> = blocks.clone();
                b[i].push(x);
                next.push(b);
            }
            let mut b = blocks;
            b.push(vec![x]);
            next.push(b);
        }
        out = next;
    }
    out
}

fn all_matchings(t: usize) -> Vec<Vec<(usize, usize)>> {
    if t == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for j in 1..t {
        let rest: Vec<usize> = (1..t).filter(|&x| x != j).collect();
        for sub in all_matchings(t - 2) {
            let mut m = vec![(0, j)];
            m.extend(sub.into_iter().map(|(a, b)| (rest[a], rest[b])));
            out.push(m);
        }
    }
    out
}

fn to_partition(t: usize, blocks: &[Vec<usize>]) -> Partition {
    let mut labels = vec![0usize; t];
    for (i, b) in blocks.iter().enumerate() {
        for &x in b {
            labels[x] = i;
        }
    }
    Partition::canonicalize(&labels)
}

fn block_masks(p: &Partition) -> Vec<u32> {
    let mut masks: Vec<u32> = Vec::new();
    for (i, &b) in p.digits().iter().enumerate() {
        if masks.len() <= b as usize {
            masks.resize(b as usize + 1, 0);
        }
        masks[b as usize] |= 1 << i;
    }
    masks
}

fn masks_of(blocks: &[Vec<usize>]) -> Vec<u32> {
    blocks
        .iter()
        .map(|b| b.iter().fold(0u32, |m, &x| m | 1 << x))
        .collect()
}

/// Whether the union of the two block systems connects all `t` positions:
/// grow the set reachable from position 0 until it stops changing.
fn connects_everything(t: usize, a: &[u32], b: &[u32]) -> bool {
    if t == 0 {
        return true;
    }
    let full = if t == 32 { u32::MAX } else { (1u32 << t) - 1 };
    let mut reach = 1u32;
    loop {
        let mut next = reach;
        for &m in a.iter().chain(b) {
            if m & next != 0 {
                next |= m;
            }
        }
        if next == reach {
            return reach == full;
        }
        reach = next;
    }
}

fn subset_of(output: &[(Partition, Weight)], input: &[(Partition, Weight)]) -> bool {
    output.iter().all(|r| input.contains(r))
}

fn cheapest(rows: &[(Vec<u32>, Weight)], compatible: impl Fn(&[u32]) -> bool) -> Option<Weight> {
    rows.iter()
        .filter(|(m, _)| compatible(m))
        .map(|(_, w)| *w)
        .min()
}

fn compare_minima(
    input: &[(Partition, Weight)],
    output: &[(Partition, Weight)],
    completions: &[Vec<u32>],
    t: usize,
) -> bool {
    if !subset_of(output, input) {
        return false;
    }
    let inp: Vec<_> = input.iter().map(|(p, w)| (block_masks(p), *w)).collect();
    let out: Vec<_> = output.iter().map(|(p, w)| (block_masks(p), *w)).collect();
    completions.iter().all(|q| {
        let ok = |m: &[u32]| connects_everything(t, m, q);
        cheapest(&inp, ok) == cheapest(&out, ok)
    })
}

/// For every partition `q`, the cheapest row joining with `q` to a single
/// block must cost the same in `output` as in `input`.
pub fn check_representative(
    input: &[(Partition, Weight)],
    output: &[(Partition, Weight)],
    t: usize,
) -> Result<bool> {
    check_representative_with(input, output, t, &OracleBudget::default())
}

pub fn check_representative_with(
    input: &[(Partition, Weight)],
    output: &[(Partition, Weight)],
    t: usize,
    budget: &OracleBudget,
) -> Result<bool> {
    if t > budget.max_universe {
        return Err(Error::Budget(format!("universe {t} > {}", budget.max_universe)));
    }
    let qs: Vec<Vec<u32>> = all_partitions(t).iter().map(|b| masks_of(b)).collect();
    Ok(compare_minima(input, output, &qs, t))
}

/// Matching version of [`check_representative`]: completions range over all
/// perfect matchings and compatibility is "the union is one cycle" (for two
/// perfect matchings, a connected union is exactly one cycle).
pub fn check_matching_representative(
    input: &[(Partition, Weight)],
    output: &[(Partition, Weight)],
    t: usize,
) -> Result<bool> {
    let budget = OracleBudget::default();
    if t > budget.max_matching_universe || t % 2 == 1 {
        return Err(Error::Budget(format!("matching universe {t}")));
    }
    let qs: Vec<Vec<u32>> = all_matchings(t)
        .iter()
        .map(|m| m.iter().map(|&(a, b)| 1u32 << a | 1 << b).collect())
        .collect();
    Ok(compare_minima(input, output, &qs, t))
}

/// All partitions of `t` elements via the block-placement enumeration.
pub fn partitions(t: usize) -> Result<Vec<Partition>> {
    if t > OracleBudget::default().max_universe {
        return Err(Error::Budget(format!("universe {t}")));
    }
    Ok(all_partitions(t).iter().map(|b| to_partition(t, b)).collect())
}

/// All perfect matchings of `t` elements as partitions.
pub fn matchings(t: usize) -> Result<Vec<Partition>> {
    if t > OracleBudget::default().max_matching_universe || t % 2 == 1 {
        return Err(Error::Budget(format!("matching universe {t}")));
    }
    Ok(all_matchings(t)
        .iter()
        .map(|m| {
            let blocks: Vec<Vec<usize>> = m.iter().map(|&(a, b)| vec![a, b]).collect();
            to_partition(t, &blocks)
        })
        .collect())
}

fn weight_matrix(g: &Graph) -> Vec<Vec<Option<Weight>>> {
    let mut w = vec![vec![None; g.n()]; g.n()];
    for e in g.edges() {
        w[e.u][e.v] = Some(e.weight);
        w[e.v][e.u] = Some(e.weight);
    }
    w
}

/// Visits every cyclic order starting at vertex 0 (Heap's algorithm on the rest).
fn for_each_tour(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let k = n - 1;
    let mut c = vec![0usize; k];
    f(&perm);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(1, 1 + i);
            } else {
                perm.swap(1 + c[i], 1 + i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn tour_weight(w: &[Vec<Option<Weight>>], tour: &[usize]) -> Option<Weight> {
    let mut total: Weight = 0;
    for i in 0..tour.len() {
        let x = w[tour[i]][tour[(i + 1) % tour.len()]]?;
        total = total.checked_add(x)?;
    }
    Some(total)
}

/// Hamiltonicity by enumerating vertex orders.
pub fn oracle_hamilton(g: &Graph) -> Result<bool> {
    Ok(oracle_tsp_permutations(g)?.is_some())
}

/// Minimum Hamiltonian cycle weight by enumerating vertex orders (n ≤ 10).
pub fn oracle_tsp_permutations(g: &Graph) -> Result<Option<Weight>> {
    OracleBudget::default().vertices(g.n())?;
    let n = g.n();
    if n < 3 {
        return Ok(None);
    }
    let w = weight_matrix(g);
    let mut best: Option<Weight> = None;
    for_each_tour(n, |tour| {
        if let Some(x) = tour_weight(&w, tour) {
            best = Some(best.map_or(x, |b| b.min(x)));
        }
    });
    Ok(best)
}

/// Held–Karp over subsets containing vertex 0 (n ≤ 16).
pub fn oracle_tsp(g: &Graph) -> Result<Option<Weight>> {
    let n = g.n();
    if n > 16 {
        return Err(Error::Budget(format!("{n} vertices > 16 for Held-Karp")));
    }
    if n < 3 {
        return Ok(None);
    }
    let w = weight_matrix(g);
    const NONE: Weight = Weight::MAX;
    let full = 1usize << n;
    // dp[set][v]: cheapest path from 0 through `set` ending at v
    let mut dp = vec![NONE; full * n];
    dp[n] = 0; // set {0}, ending at 0
    for set in 1..full {
        if set & 1 == 0 {
            continue;
        }
        for v in 0..n {
            let cur = dp[set * n + v];
            if cur == NONE || set >> v & 1 == 0 {
                continue;
            }
            for u in 0..n {
                if set >> u & 1 == 1 {
                    continue;
                }
                if let Some(x) = w[v][u] {
                    let next = set | 1 << u;
                    let cand = cur + x;
                    if cand < dp[next * n + u] {
                        dp[next * n + u] = cand;
                    }
                }
            }
        }
    }
    let mut best = None;
    for v in 1..n {
        let cur = dp[(full - 1) * n + v];
        if let (true, Some(x)) = (cur != NONE, w[v][0]) {
            let c = cur + x;
            best = Some(best.map_or(c, |b: Weight| b.min(c)));
        }
    }
    Ok(best)
}

fn all_pairs(g: &Graph) -> Vec<Vec<Option<Weight>>> {
    let n = g.n();
    let mut d = weight_matrix(g);
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    let c = a + b;
                    if d[i][j].is_none_or(|x| c < x) {
                        d[i][j] = Some(c);
                    }
                }
            }
        }
    }
    d
}

/// Steiner tree weight by Dreyfus–Wagner subset DP.
pub fn oracle_steiner(inst: &SteinerInstance) -> Result<Option<Weight>> {
    let g = &inst.graph;
    OracleBudget::default().vertices(g.n())?;
    let terms: Vec<usize> = inst.terminals().iter().copied().collect();
    if terms.len() <= 1 {
        return Ok(Some(0));
    }
    let n = g.n();
    let dist = all_pairs(g);
    let (root, rest) = (terms[0], &terms[1..]);
    let k = rest.len();
    // dp[s][v]: cheapest tree spanning rest[s] ∪ {v}
    let mut dp: Vec<Vec<Option<Weight>>> = vec![vec![None; n]; 1 << k];
    for (i, &t) in rest.iter().enumerate() {
        for v in 0..n {
            dp[1 << i][v] = dist[t][v];
        }
    }
    for s in 1usize..1 << k {
        if s.count_ones() < 2 {
            continue;
        }
        let mut merged: Vec<Option<Weight>> = vec![None; n];
        for (u, slot) in merged.iter_mut().enumerate() {
            let mut sub = (s - 1) & s;
            while sub > 0 {
                if let (Some(a), Some(b)) = (dp[sub][u], dp[s ^ sub][u]) {
                    if slot.is_none_or(|x| a + b < x) {
                        *slot = Some(a + b);
                    }
                }
                sub = (sub - 1) & s;
            }
        }
        for v in 0..n {
            let mut best: Option<Weight> = None;
            for u in 0..n {
                if let (Some(a), Some(b)) = (merged[u], dist[u][v]) {
                    if best.is_none_or(|x| a + b < x) {
                        best = Some(a + b);
                    }
                }
            }
            dp[s][v] = best;
        }
    }
    Ok(dp[(1 << k) - 1][root])
}

/// Steiner tree weight as the best minimum spanning tree over every vertex
/// set that contains the terminals.
pub fn oracle_steiner_mst(inst: &SteinerInstance) -> Result<Option<Weight>> {
    let g = &inst.graph;
    OracleBudget::default().vertices(g.n())?;
    let n = g.n();
    let terms: BTreeSet<usize> = inst.terminals().clone();
    if terms.len() <= 1 {
        return Ok(Some(0));
    }
    let w = weight_matrix(g);
    let optional: Vec<usize> = (0..n).filter(|v| !terms.contains(v)).collect();
    let mut best: Option<Weight> = None;
    for pick in 0u32..1 << optional.len() {
        let mut set: Vec<usize> = terms.iter().copied().collect();
        set.extend(optional.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &v)| v));
        // Prim
        let mut inside = vec![false; set.len()];
        let mut key: Vec<Option<Weight>> = vec![None; set.len()];
        key[0] = Some(0);
        let mut total = 0;
        let mut ok = true;
        for _ in 0..set.len() {
            let Some((i, k)) = (0..set.len())
                .filter(|&i| !inside[i])
                .filter_map(|i| key[i].map(|k| (i, k)))
                .min_by_key(|&(i, k)| (k, i))
            else {
                ok = false;
                break;
            };
            inside[i] = true;
            total += k;
            for j in 0..set.len() {
                if let (false, Some(x)) = (inside[j], w[set[i]][set[j]]) {
                    if key[j].is_none_or(|y| x < y) {
                        key[j] = Some(x);
                    }
                }
            }
        }
        if ok {
            best = Some(best.map_or(total, |b| b.min(total)));
        }
    }
    Ok(best)
}

/// Edges introduced in each node's subtree.
fn subtree_edges(nd: &NiceDecomposition) -> Vec<Vec<(usize, usize)>> {
    let mut out: Vec<Vec<(usize, usize)>> = Vec::with_capacity(nd.nodes().len());
    for node in nd.nodes() {
        let mut e: Vec<(usize, usize)> = node.children.iter().flat_map(|&c| out[c].clone()).collect();
        if let NodeKind::IntroduceEdge(u, v) = node.kind {
            e.push((u, v));
        }
        out.push(e);
    }
    out
}

/// Vertices (bag or forgotten) in each node's subtree.
fn subtree_vertices(nd: &NiceDecomposition) -> Vec<BTreeSet<usize>> {
    let mut out: Vec<BTreeSet<usize>> = Vec::with_capacity(nd.nodes().len());
    for node in nd.nodes() {
        let mut s: BTreeSet<usize> = node.children.iter().flat_map(|&c| out[c].clone()).collect();
        s.extend(node.bag.iter().copied());
        out.push(s);
    }
    out
}

/// Key of a Hamiltonian partial solution at a node: the degree of every bag
/// vertex (two bits per bag position) and the pairing of path endpoints,
/// as a partition of the bag where unpaired positions are singletons.
pub type HamKey = (u64, Partition);

/// Enumerates every edge subset of a node's subtree that is a disjoint
/// union of paths with all forgotten vertices at degree 2, and tabulates
/// the cheapest per key. Nodes with more than 20 subtree edges are refused.
pub fn hamilton_node_table(g: &Graph, nd: &NiceDecomposition, node: usize) -> Result<HashMap<HamKey, Weight>> {
    let edges = &subtree_edges(nd)[node];
    if edges.len() > 20 {
        return Err(Error::Budget(format!("{} subtree edges", edges.len())));
    }
    let verts = &subtree_vertices(nd)[node];
    let bag = &nd.nodes()[node].bag;
    let w = weight_matrix(g);
    let mut table: HashMap<HamKey, Weight> = HashMap::new();
    'subsets: for pick in 0u32..1 << edges.len() {
        let chosen: Vec<(usize, usize)> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| pick >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let mut deg: HashMap<usize, usize> = HashMap::new();
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut weight = 0;
        for &(u, v) in &chosen {
            *deg.entry(u).or_default() += 1;
            *deg.entry(v).or_default() += 1;
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
            weight += w[u][v].expect("edge");
        }
        if deg.values().any(|&d| d > 2) {
            continue;
        }
        for &v in verts {
            if !bag.contains(&v) && deg.get(&v) != Some(&2) {
                continue 'subsets;
            }
        }
        // walk each path from a degree-1 endpoint; a leftover degree-2 vertex means a cycle
        let mut pair_of: HashMap<usize, usize> = HashMap::new();
        let mut visited: BTreeSet<usize> = BTreeSet::new();
        for (&s, _) in deg.iter().filter(|(_, &d)| d == 1) {
            if visited.contains(&s) {
                continue;
            }
            let (mut prev, mut cur) = (usize::MAX, s);
            visited.insert(s);
            loop {
                let next = adj[&cur].iter().copied().find(|&x| x != prev);
                match next {
                    Some(x) => {
                        prev = cur;
                        cur = x;
                        visited.insert(cur);
                    }
                    None => break,
                }
            }
            pair_of.insert(s, cur);
            pair_of.insert(cur, s);
        }
        if deg.keys().any(|v| !visited.contains(v)) {
            continue;
        }
        let mut label = 0u64;
        let mut block = vec![usize::MAX; bag.len()];
        for (i, v) in bag.iter().enumerate() {
            let d = deg.get(v).copied().unwrap_or(0) as u64;
            label |= d << (2 * i);
            block[i] = i;
        }
        for (i, v) in bag.iter().enumerate() {
            if let Some(x) = pair_of.get(v) {
                let j = bag.iter().position(|y| y == x).expect("path ends in bag");
                block[i] = i.min(j);
            }
        }
        let key = (label, Partition::canonicalize(&block));
        let slot = table.entry(key).or_insert(weight);
        *slot = (*slot).min(weight);
    }
    Ok(table)
}

/// Steiner analogue of [`hamilton_node_table`]. Enumerates edge subsets of
/// the subtree together with selections of extra bag vertices, keeping the
/// forests whose every component reaches the bag and which select every
/// subtree terminal.
///
/// Key: (selected bag positions bitmask, partition of the bag where
/// unselected positions are singletons).
pub fn steiner_node_table(
    inst: &SteinerInstance,
    nd: &NiceDecomposition,
    node: usize,
) -> Result<HashMap<(u64, Partition), Weight>> {
    let g = &inst.graph;
    let edges = &subtree_edges(nd)[node];
    if edges.len() > 16 {
        return Err(Error::Budget(format!("{} subtree edges", edges.len())));
    }
    let verts = &subtree_vertices(nd)[node];
    let bag = &nd.nodes()[node].bag;
    let w = weight_matrix(g);
    let mut table = HashMap::new();
    for pick in 0u32..1 << edges.len() {
        let chosen: Vec<(usize, usize)> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| pick >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let weight: Weight = chosen.iter().map(|&(u, v)| w[u][v].unwrap()).sum();
        let touched: BTreeSet<usize> = chosen.iter().flat_map(|&(u, v)| [u, v]).collect();
        // selected bag positions: all touched bag vertices, all bag terminals,
        // and optionally any other bag vertex
        let optional: Vec<usize> = (0..bag.len())
            .filter(|&i| !touched.contains(&bag[i]) && !inst.terminals().contains(&bag[i]))
            .collect();
        for extra in 0u32..1 << optional.len() {
            let mut selected: BTreeSet<usize> = touched.clone();
            selected.extend(bag.iter().filter(|v| inst.terminals().contains(v)));
            for (k, &i) in optional.iter().enumerate() {
                if extra >> k & 1 == 1 {
                    selected.insert(bag[i]);
                }
            }
            // forgotten terminals must be selected
            if verts
                .iter()
                .any(|v| !bag.contains(v) && inst.terminals().contains(v) && !selected.contains(v))
            {
                continue;
            }
            // union-find over selected vertices
            let sel: Vec<usize> = selected.iter().copied().collect();
            let idx = |v: usize| sel.iter().position(|&x| x == v).unwrap();
            let mut parent: Vec<usize> = (0..sel.len()).collect();
            fn find(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    x = p[x];
                }
                x
            }
            for &(u, v) in &chosen {
                let (a, b) = (find(&mut parent, idx(u)), find(&mut parent, idx(v)));
                parent[a] = b;
            }
            // every component must reach the bag
            let mut touches_bag: HashMap<usize, bool> = HashMap::new();
            for (i, &v) in sel.iter().enumerate() {
                let r = find(&mut parent, i);
                let e = touches_bag.entry(r).or_insert(false);
                *e |= bag.contains(&v);
            }
            if touches_bag.values().any(|&b| !b) {
                continue;
            }
            let mut label = 0u64;
            let mut block = vec![0usize; bag.len()];
            for (i, &v) in bag.iter().enumerate() {
                if selected.contains(&v) {
                    label |= 1 << i;
                    block[i] = find(&mut parent, idx(v));
                } else {
                    block[i] = usize::MAX - i;
                }
            }
            let key = (label, Partition::canonicalize(&block));
            let slot = table.entry(key).or_insert(weight);
            *slot = (*slot).min(weight);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        assert_eq!(bell(0), 1);
        assert_eq!(bell(1), 1);
        assert_eq!(bell(3), 5);
        assert_eq!(bell(4), 15);
        assert_eq!(bell(10), 115975);
        for t in 0..=7 {
            assert_eq!(partitions(t).unwrap().len() as u128, bell(t));
        }
    }

    #[test]
    fn matchings_are_double_factorial() {
        assert_eq!(matchings(0).unwrap().len(), 1);
        assert_eq!(matchings(4).unwrap().len(), 3);
        assert_eq!(matchings(8).unwrap().len(), 105);
    }

    fn cycle(n: usize) -> Graph {
        Graph::unweighted(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn hamilton_examples() {
        assert!(oracle_hamilton(&cycle(4)).unwrap());
        let k4_minus_matching = Graph::unweighted(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(oracle_hamilton(&k4_minus_matching).unwrap());
        let star = Graph::unweighted(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!oracle_hamilton(&star).unwrap());
        assert!(oracle_hamilton(&cycle(11)).is_err());
    }

    #[test]
    fn tsp_examples() {
        assert_eq!(oracle_tsp(&cycle(5)).unwrap(), Some(5));
        let k3 = Graph::new(3, [(0, 1, 1), (1, 2, 2), (0, 2, 3)]).unwrap();
        assert_eq!(oracle_tsp(&k3).unwrap(), Some(6));
        assert_eq!(oracle_tsp_permutations(&k3).unwrap(), Some(6));
        let path = Graph::unweighted(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(oracle_tsp(&path).unwrap(), None);
    }

    #[test]
    fn held_karp_agrees_with_permutations() {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.random_range(3..=8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.8) {
                        edges.push((u, v, rng.random_range(1..=20)));
                    }
                }
            }
            let g = Graph::new(n, edges).unwrap();
            assert_eq!(oracle_tsp(&g).unwrap(), oracle_tsp_permutations(&g).unwrap());
        }
    }

    #[test]
    fn steiner_examples() {
        let path = Graph::new(4, [(0, 1, 2), (1, 2, 3), (2, 3, 4), (0, 3, 20)]).unwrap();
        let one = SteinerInstance::new(path.clone(), BTreeSet::from([2])).unwrap();
        assert_eq!(oracle_steiner(&one).unwrap(), Some(0));
        let two = SteinerInstance::new(path.clone(), BTreeSet::from([0, 3])).unwrap();
        assert_eq!(oracle_steiner(&two).unwrap(), Some(9));
        assert_eq!(oracle_steiner_mst(&two).unwrap(), Some(9));
        let split = Graph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        let far = SteinerInstance::new(split, BTreeSet::from([0, 3])).unwrap();
        assert_eq!(oracle_steiner(&far).unwrap(), None);
        assert_eq!(oracle_steiner_mst(&far).unwrap(), None);
    }

    #[test]
    fn steiner_oracles_agree() {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..60 {
            let n = rng.random_range(2..=9);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.4) {
                        edges.push((u, v, rng.random_range(1..=10)));
                    }
                }
            }
            let g = Graph::new(n, edges).unwrap();
            let k = rng.random_range(1..=n.min(4));
            let terms: BTreeSet<usize> = (0..k).map(|_| rng.random_range(0..n)).collect();
            let inst = SteinerInstance::new(g, terms).unwrap();
            assert_eq!(oracle_steiner(&inst).unwrap(), oracle_steiner_mst(&inst).unwrap());
        }
    }

    #[test]
    fn representative_check_basics() {
        let rows: Vec<_> = partitions(3).unwrap().into_iter().zip(1..).collect();
        assert!(check_representative(&rows, &rows, 3).unwrap());
        assert!(!check_representative(&rows, &[], 3).unwrap());
        let m: Vec<_> = matchings(4).unwrap().into_iter().map(|p| (p, 1)).collect();
        assert!(check_matching_representative(&m, &m, 4).unwrap());
        assert!(!check_matching_representative(&m, &m[..1], 4).unwrap());
        assert!(check_representative(&[], &[], 9).is_err());
    }
}
