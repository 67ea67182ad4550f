use std::collections::HashMap;

use super::td::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf,
    IntroduceVertex(usize),
    /// Endpoints stored with `u < v`.
    IntroduceEdge(usize, usize),
    Forget(usize),
    Join,
}

impl NodeKind {
    pub fn name(&self) -> &'static str {
        match self {
            NodeKind::Leaf => "leaf",
            NodeKind::IntroduceVertex(_) => "introduce_vertex",
            NodeKind::IntroduceEdge(..) => "introduce_edge",
            NodeKind::Forget(_) => "forget",
            NodeKind::Join => "join",
        }
    }
}

#[derive(Clone, Debug)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted ascending; a vertex's position in the bag is its rank here.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// A nice tree decomposition stored in post-order: every child index is
/// smaller than its parent's and the root is the last node.
#[derive(Clone, Debug)]
pub struct NiceDecomposition {
    nodes: Vec<NiceNode>,
    n: usize,
}

struct Builder<'g> {
    g: &'g Graph,
    nodes: Vec<NiceNode>,
    assigned: HashMap<(usize, usize), bool>,
}

impl Builder<'_> {
    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    fn forget(&mut self, mut top: usize, v: usize) -> usize {
        let mut bag = self.nodes[top].bag.clone();
        let pos = bag.binary_search(&v).expect("forgotten vertex in bag");
        bag.remove(pos);
        top = self.push(NodeKind::Forget(v), bag, vec![top]);
        top
    }

    fn introduce(&mut self, mut top: usize, v: usize) -> usize {
        let mut bag = self.nodes[top].bag.clone();
        let pos = bag.binary_search(&v).expect_err("introduced vertex not in bag");
        bag.insert(pos, v);
        top = self.push(NodeKind::IntroduceVertex(v), bag.clone(), vec![top]);
        let mut partners: Vec<usize> = self
            .g
            .neighbors(v)
            .filter(|u| bag.binary_search(u).is_ok())
            .collect();
        partners.sort_unstable();
        for u in partners {
            let key = (u.min(v), u.max(v));
            let done = self.assigned.get_mut(&key).expect("graph edge");
            if !*done {
                *done = true;
                top = self.push(NodeKind::IntroduceEdge(key.0, key.1), bag.clone(), vec![top]);
            }
        }
        top
    }

    /// Moves from the bag at `top` to `target` by forgetting, then introducing.
    fn transition(&mut self, mut top: usize, target: &[usize]) -> usize {
        let from = self.nodes[top].bag.clone();
        for &v in &from {
            if target.binary_search(&v).is_err() {
                top = self.forget(top, v);
            }
        }
        for &v in target {
            if from.binary_search(&v).is_err() {
                top = self.introduce(top, v);
            }
        }
        top
    }
}

impl NiceDecomposition {
    /// Converts a validated decomposition into nice form rooted at bag 0.
    pub fn from_td(td: &TreeDecomposition, g: &Graph) -> Result<Self> {
        td.validate(g)?;
        let mut b = Builder {
            g,
            nodes: Vec::new(),
            assigned: g.edges().iter().map(|e| ((e.u, e.v), false)).collect(),
        };
        let bags = td.bags();
        let adj = td.adjacency();

        // iterative post-order over the rooted tree
        let mut parent = vec![usize::MAX; bags.len()];
        let mut order = Vec::with_capacity(bags.len());
        let mut stack = vec![0usize];
        parent[0] = 0;
        while let Some(x) = stack.pop() {
            order.push(x);
            for &y in &adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); bags.len()];
        for &x in order.iter().skip(1) {
            children[parent[x]].push(x);
        }
        for c in &mut children {
            c.sort_unstable();
        }

        let mut top = vec![usize::MAX; bags.len()];
        for &x in order.iter().rev() {
            let target = &bags[x];
            let mut stubs = Vec::with_capacity(children[x].len().max(1));
            for &c in &children[x] {
                stubs.push(b.transition(top[c], target));
            }
            if stubs.is_empty() {
                let leaf = b.push(NodeKind::Leaf, Vec::new(), Vec::new());
                stubs.push(b.transition(leaf, target));
            }
            let mut acc = stubs[0];
            for &s in &stubs[1..] {
                acc = b.push(NodeKind::Join, target.clone(), vec![acc, s]);
            }
            top[x] = acc;
        }
        let root = b.transition(top[0], &[]);
        debug_assert_eq!(root, b.nodes.len() - 1);

        if let Some((&(u, v), _)) = b.assigned.iter().find(|(_, &done)| !done) {
            return Err(Error::Decomposition(format!(
                "edge ({},{}) never introduced",
                u + 1,
                v + 1
            )));
        }
        Ok(NiceDecomposition {
            nodes: b.nodes,
            n: g.n(),
        })
    }

    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|x| x.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// For every node, the number of subtree vertices `v` (bag or forgotten
    /// below) with `counted(v)`.
    pub fn subtree_counts(&self, counted: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut forgotten = vec![0usize; self.nodes.len()];
        let mut out = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            let mut f: usize = node.children.iter().map(|&c| forgotten[c]).sum();
            if let NodeKind::Forget(v) = node.kind {
                if counted(v) {
                    f += 1;
                }
            }
            forgotten[i] = f;
            out[i] = f + node.bag.iter().filter(|&&v| counted(v)).count();
        }
        out
    }

    /// Flattens into a plain decomposition (one bag per nice node).
    pub fn to_td(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|x| x.bag.clone()).collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(i, x)| x.children.iter().map(move |&c| (c, i)))
            .collect();
        TreeDecomposition::new(self.n, bags, edges)
    }

    /// Checks every structural invariant of the nice form against `g`.
    pub fn check(&self, g: &Graph) -> Result<()> {
        let bad = |i: usize, what: &str| Err(Error::Decomposition(format!("nice node {i}: {what}")));
        let root = self.nodes.last().ok_or_else(|| Error::Decomposition("empty".into()))?;
        if !root.bag.is_empty() {
            return bad(self.root(), "root bag not empty");
        }
        let mut introduced: HashMap<(usize, usize), usize> = HashMap::new();
        let mut has_parent = vec![false; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if node.bag.windows(2).any(|w| w[0] >= w[1]) {
                return bad(i, "bag not strictly sorted");
            }
            for &c in &node.children {
                if c >= i || has_parent[c] {
                    return bad(i, "children not in post-order");
                }
                has_parent[c] = true;
            }
            let child = |k: usize| &self.nodes[node.children[k]].bag;
            match node.kind {
                NodeKind::Leaf => {
                    if !node.children.is_empty() || !node.bag.is_empty() {
                        return bad(i, "leaf must be empty and childless");
                    }
                }
                NodeKind::IntroduceVertex(v) => {
                    let mut expect = node.bag.clone();
                    let Ok(p) = expect.binary_search(&v) else {
                        return bad(i, "introduced vertex missing");
                    };
                    expect.remove(p);
                    if node.children.len() != 1 || *child(0) != expect {
                        return bad(i, "introduce child bag mismatch");
                    }
                }
                NodeKind::Forget(v) => {
                    let mut expect = node.bag.clone();
                    let Err(p) = expect.binary_search(&v) else {
                        return bad(i, "forgotten vertex still present");
                    };
                    expect.insert(p, v);
                    if node.children.len() != 1 || *child(0) != expect {
                        return bad(i, "forget child bag mismatch");
                    }
                }
                NodeKind::IntroduceEdge(u, v) => {
                    if node.children.len() != 1 || *child(0) != node.bag {
                        return bad(i, "introduce-edge must keep the bag");
                    }
                    if node.bag.binary_search(&u).is_err() || node.bag.binary_search(&v).is_err() {
                        return bad(i, "edge endpoint not in bag");
                    }
                    if !g.has_edge(u, v) {
                        return bad(i, "introduced non-edge");
                    }
                    *introduced.entry((u, v)).or_default() += 1;
                }
                NodeKind::Join => {
                    if node.children.len() != 2 || *child(0) != node.bag || *child(1) != node.bag {
                        return bad(i, "join children bags differ");
                    }
                }
            }
        }
        if has_parent[..self.nodes.len() - 1].iter().any(|&p| !p) {
            return Err(Error::Decomposition("nice tree is not connected".into()));
        }
        for e in g.edges() {
            if introduced.get(&(e.u, e.v)) != Some(&1) {
                return Err(Error::Decomposition(format!(
                    "edge ({},{}) not introduced exactly once",
                    e.u + 1,
                    e.v + 1
                )));
            }
        }
        if introduced.values().sum::<usize>() != g.m() {
            return Err(Error::Decomposition("extra introduce-edge nodes".into()));
        }
        self.to_td().validate(g)
    }
}

/// Convenience wrapper: nice form of `td` over `g`.
pub fn nicify(td: &TreeDecomposition, g: &Graph) -> Result<NiceDecomposition> {
    NiceDecomposition::from_td(td, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{heuristic_decompose, parse_td, Strategy};
    use proptest::prelude::*;

    #[test]
    fn single_bag_edge() {
        let g = Graph::unweighted(2, [(0, 1)]).unwrap();
        let td = parse_td("s td 1 2 2\nb 1 1 2\n").unwrap();
        let nd = nicify(&td, &g).unwrap();
        let kinds: Vec<NodeKind> = nd.nodes().iter().map(|x| x.kind).collect();
        assert_eq!(
            kinds,
            vec![
                NodeKind::Leaf,
                NodeKind::IntroduceVertex(0),
                NodeKind::IntroduceVertex(1),
                NodeKind::IntroduceEdge(0, 1),
                NodeKind::Forget(0),
                NodeKind::Forget(1),
            ]
        );
        nd.check(&g).unwrap();
    }

    #[test]
    fn two_bag_path_forgets_between_bags() {
        let g = Graph::unweighted(3, [(0, 1), (1, 2)]).unwrap();
        let td = parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n").unwrap();
        let nd = nicify(&td, &g).unwrap();
        nd.check(&g).unwrap();
        assert_eq!(nd.width(), 1);
        // the non-root bag {2,3} must lose vertex 3 before reaching {1,2}
        let forgets = nd
            .nodes()
            .iter()
            .filter(|x| matches!(x.kind, NodeKind::Forget(_)))
            .count();
        assert_eq!(forgets, 3);
    }

    #[test]
    fn star_decomposition_uses_binary_joins() {
        let g = Graph::unweighted(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let td = parse_td("s td 4 2 4\nb 1 1\nb 2 1 2\nb 3 1 3\nb 4 1 4\n1 2\n1 3\n1 4\n").unwrap();
        let nd = nicify(&td, &g).unwrap();
        nd.check(&g).unwrap();
        let joins = nd.nodes().iter().filter(|x| x.kind == NodeKind::Join).count();
        assert_eq!(joins, 2);
    }

    #[test]
    fn rejects_invalid_decomposition() {
        let g = Graph::unweighted(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let td = parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n").unwrap();
        assert!(nicify(&td, &g).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn every_edge_introduced_once(n in 1usize..=12, bits in prop::collection::vec(any::<bool>(), 66), fill in any::<bool>()) {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k % bits.len()] { edges.push((u, v)); }
                    k += 1;
                }
            }
            let g = Graph::unweighted(n, edges).unwrap();
            let strategy = if fill { Strategy::MinFill } else { Strategy::MinDegree };
            let td = heuristic_decompose(&g, strategy);
            let nd = nicify(&td, &g).unwrap();
            nd.check(&g).unwrap();
            prop_assert_eq!(nd.width(), td.width());
            let count = nd.nodes().iter().filter(|x| matches!(x.kind, NodeKind::IntroduceEdge(..))).count();
            prop_assert_eq!(count, g.m());
        }
    }
}
