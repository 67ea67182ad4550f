//! Undirected edge-weighted graphs and the PACE `.gr` / terminals readers.
//!
//! Vertex ids are 1-based in files and 0-based everywhere else.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Weight = u64;

/// Sentinel for "no solution". Never added to.
pub const INFINITY: Weight = Weight::MAX;

pub fn add_weight(a: Weight, b: Weight) -> Result<Weight> {
    if a == INFINITY || b == INFINITY {
        return Err(Error::Overflow);
    }
    match a.checked_add(b) {
        Some(s) if s != INFINITY => Ok(s),
        _ => Err(Error::Overflow),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Builds a graph from 0-based weighted edges. Self-loops are rejected and
    /// parallel edges collapse to their minimum weight.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, Weight)>) -> Result<Self> {
        let mut best: BTreeMap<(usize, usize), Weight> = BTreeMap::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::Input(format!(
                    "edge ({}, {}) out of range for n={n}",
                    u + 1,
                    v + 1
                )));
            }
            if u == v {
                return Err(Error::Input(format!("self-loop at vertex {}", u + 1)));
            }
            if w == INFINITY {
                return Err(Error::Input("edge weight equals the infinity sentinel".into()));
            }
            let key = (u.min(v), u.max(v));
            best.entry(key)
                .and_modify(|x| *x = (*x).min(w))
                .or_insert(w);
        }
        let edges: Vec<Edge> = best
            .into_iter()
            .map(|((u, v), weight)| Edge { u, v, weight })
            .collect();
        let mut adj = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn unweighted(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(n, edges.into_iter().map(|(u, v)| (u, v, 1)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(u, _)| u)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<Weight> {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a]
            .iter()
            .find(|&&(x, _)| x == b)
            .map(|&(_, i)| self.edges[i].weight)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_weight(u, v).is_some()
    }

    /// Checks that the adjacency index agrees with the edge list.
    pub fn validate(&self) -> Result<()> {
        let mut seen = 0usize;
        for (v, list) in self.adj.iter().enumerate() {
            for &(u, i) in list {
                let e = self.edges.get(i).ok_or_else(|| {
                    Error::Contract(format!("adjacency of {} points at missing edge {i}", v + 1))
                })?;
                if !((e.u == u && e.v == v) || (e.u == v && e.v == u)) || u == v {
                    return Err(Error::Contract(format!(
                        "adjacency of {} disagrees with edge {i}",
                        v + 1
                    )));
                }
                seen += 1;
            }
        }
        if seen != 2 * self.edges.len() {
            return Err(Error::Contract("adjacency size mismatch".into()));
        }
        Ok(())
    }

    /// Serializes in `.gr` form. The weight column is omitted when every weight is 1.
    pub fn to_gr(&self) -> String {
        let weighted = self.edges.iter().any(|e| e.weight != 1);
        let mut out = format!("p tw {} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            if weighted {
                let _ = writeln!(out, "{} {} {}", e.u + 1, e.v + 1, e.weight);
            } else {
                let _ = writeln!(out, "{} {}", e.u + 1, e.v + 1);
            }
        }
        out
    }
}

/// Parses a PACE `.gr` file with an optional third weight column.
pub fn parse_gr(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut edge_lines = 0usize;
    let mut last_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "p" {
            if header.is_some() {
                return Err(Error::parse(line_no, "duplicate header"));
            }
            if fields.len() != 4 || fields[1] != "tw" {
                return Err(Error::parse(line_no, "malformed header, expected `p tw <n> <m>`"));
            }
            let n = fields[2]
                .parse::<usize>()
                .map_err(|_| Error::parse(line_no, "malformed header vertex count"))?;
            let m = fields[3]
                .parse::<usize>()
                .map_err(|_| Error::parse(line_no, "malformed header edge count"))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(Error::parse(line_no, "edge before header"));
        };
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::parse(line_no, "malformed edge line"));
        }
        let mut ends = [0usize; 2];
        for (k, f) in fields[..2].iter().enumerate() {
            let id = f
                .parse::<i64>()
                .map_err(|_| Error::parse(line_no, "malformed vertex id"))?;
            if id < 1 || id as u64 > n as u64 {
                return Err(Error::parse(line_no, "vertex id out of range"));
            }
            ends[k] = id as usize - 1;
        }
        let weight = match fields.get(2) {
            None => 1,
            Some(f) => {
                if f.starts_with('-') {
                    return Err(Error::parse(line_no, "negative weight"));
                }
                f.parse::<Weight>()
                    .ok()
                    .filter(|&w| w != INFINITY)
                    .ok_or_else(|| Error::parse(line_no, "malformed weight"))?
            }
        };
        if ends[0] == ends[1] {
            return Err(Error::parse(line_no, "self-loop"));
        }
        edge_lines += 1;
        edges.push((ends[0], ends[1], weight));
    }

    let (n, m) = header.ok_or_else(|| Error::parse(last_line.max(1), "missing header"))?;
    if edge_lines != m {
        return Err(Error::parse(
            last_line.max(1),
            format!("edge count mismatch: header says {m}, found {edge_lines}"),
        ));
    }
    Graph::new(n, edges)
}

/// Parses whitespace-separated 1-based terminal ids into a 0-based set.
pub fn parse_terminals(text: &str, n: usize) -> Result<BTreeSet<usize>> {
    let mut set = BTreeSet::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('c') {
            continue;
        }
        for tok in line.split_whitespace() {
            let id = tok
                .parse::<u64>()
                .map_err(|_| Error::parse(idx + 1, format!("malformed terminal `{tok}`")))?;
            if id < 1 || id > n as u64 {
                return Err(Error::parse(idx + 1, format!("terminal {id} out of range")));
            }
            set.insert(id as usize - 1);
        }
    }
    if set.is_empty() {
        return Err(Error::Input("Steiner requires ≥1 terminal".into()));
    }
    Ok(set)
}

#[derive(Clone, Debug)]
pub struct SteinerInstance {
    pub graph: Graph,
    terminals: BTreeSet<usize>,
}

impl SteinerInstance {
    pub fn new(graph: Graph, terminals: BTreeSet<usize>) -> Result<Self> {
        if terminals.is_empty() {
            return Err(Error::Input("Steiner requires ≥1 terminal".into()));
        }
        if let Some(&t) = terminals.iter().find(|&&t| t >= graph.n()) {
            return Err(Error::Input(format!("terminal {} out of range", t + 1)));
        }
        Ok(SteinerInstance { graph, terminals })
    }

    pub fn terminals(&self) -> &BTreeSet<usize> {
        &self.terminals
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_unweighted_path() {
        let g = parse_gr("p tw 3 2\n1 2\n2 3").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(
            g.edges(),
            &[Edge { u: 0, v: 1, weight: 1 }, Edge { u: 1, v: 2, weight: 1 }]
        );
        g.validate().unwrap();
    }

    #[test]
    fn parses_weight_column() {
        let g = parse_gr("c hello\np tw 2 1\n1 2 7\n").unwrap();
        assert_eq!(g.edges(), &[Edge { u: 0, v: 1, weight: 7 }]);
    }

    #[test]
    fn rejects_out_of_range_vertex() {
        let err = parse_gr("p tw 2 1\n1 3").unwrap_err();
        assert_eq!(err.to_string(), "vertex id out of range, line 2");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_gr("p tw x 1\n1 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_gr("p tw 2 1\n1 2 -4"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_gr("p tw 3 3\n1 2\n2 3"), Err(Error::Parse { .. })));
        assert!(matches!(parse_gr("p tw 2 1\n1 1"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_gr("1 2\n").is_err());
    }

    #[test]
    fn parallel_edges_keep_minimum() {
        let g = parse_gr("p tw 2 3\n1 2 9\n2 1 4\n1 2 6").unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.edge_weight(1, 0), Some(4));
    }

    #[test]
    fn terminals() {
        assert_eq!(parse_terminals("1 4 4", 4).unwrap(), BTreeSet::from([0, 3]));
        assert!(parse_terminals("", 4).is_err());
        assert!(parse_terminals("9", 5).is_err());
        assert!(parse_terminals("0", 5).is_err());
    }

    #[test]
    fn checked_weights() {
        assert_eq!(add_weight(2, 3).unwrap(), 5);
        assert!(add_weight(INFINITY, 0).is_err());
        assert!(add_weight(INFINITY - 1, 1).is_err());
    }

    proptest! {
        #[test]
        fn gr_round_trip(n in 1usize..12, raw in prop::collection::vec((0usize..12, 0usize..12, 1u64..20), 0..30)) {
            let edges: Vec<_> = raw.into_iter().filter(|&(u, v, _)| u < n && v < n && u != v).collect();
            let g = Graph::new(n, edges).unwrap();
            let back = parse_gr(&g.to_gr()).unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
