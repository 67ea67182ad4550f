use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A tree decomposition with 0-based bag ids and 0-based vertices.
/// Bags are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    n: usize,
}

impl TreeDecomposition {
    pub fn new(n: usize, bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, edges, n }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Checks the tree shape and the three covering properties against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.n != g.n() {
            return Err(Error::Decomposition(format!(
                "decomposition is over {} vertices, graph has {}",
                self.n,
                g.n()
            )));
        }
        let k = self.bags.len();
        if k == 0 {
            return Err(Error::Decomposition("no bags".into()));
        }
        for bag in &self.bags {
            if let Some(&v) = bag.iter().find(|&&v| v >= self.n) {
                return Err(Error::Decomposition(format!("bag vertex {} out of range", v + 1)));
            }
        }

        // tree shape: k - 1 edges, connected
        if self.edges.len() != k - 1 {
            return Err(Error::Decomposition(format!(
                "not a tree: {} bags but {} tree edges",
                k,
                self.edges.len()
            )));
        }
        if let Some(&(a, b)) = self.edges.iter().find(|&&(a, b)| a >= k || b >= k || a == b) {
            return Err(Error::Decomposition(format!(
                "bad tree edge ({}, {})",
                a + 1,
                b + 1
            )));
        }
        let adj = self.adjacency();
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        if reached != k {
            return Err(Error::Decomposition("not a tree: disconnected".into()));
        }

        // vertex coverage
        let mut occurrences = vec![0usize; self.n];
        for bag in &self.bags {
            for &v in bag {
                occurrences[v] += 1;
            }
        }
        if let Some(v) = occurrences.iter().position(|&c| c == 0) {
            return Err(Error::Decomposition(format!(
                "vertex coverage violated: vertex {} is in no bag",
                v + 1
            )));
        }

        // edge coverage
        let mut covered = vec![false; g.m()];
        let mut mark = vec![usize::MAX; self.n];
        let index: std::collections::HashMap<(usize, usize), usize> = g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| ((e.u, e.v), i))
            .collect();
        for (b, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                mark[v] = b;
            }
            for &u in bag {
                for w in g.neighbors(u) {
                    if u < w && mark[w] == b {
                        covered[index[&(u, w)]] = true;
                    }
                }
            }
        }
        if let Some(i) = covered.iter().position(|&c| !c) {
            let e = g.edges()[i];
            return Err(Error::Decomposition(format!(
                "edge coverage violated: edge ({},{}) is in no bag",
                e.u + 1,
                e.v + 1
            )));
        }

        // running intersection: the bags holding v span occurrences[v] - 1 tree edges
        let mut shared = vec![0usize; self.n];
        for &(a, b) in &self.edges {
            let (x, y) = (&self.bags[a], &self.bags[b]);
            let (mut i, mut j) = (0, 0);
            while i < x.len() && j < y.len() {
                match x[i].cmp(&y[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        shared[x[i]] += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        if let Some(v) = (0..self.n).find(|&v| shared[v] + 1 != occurrences[v]) {
            return Err(Error::Decomposition(format!(
                "connectivity violated: bags containing vertex {} are not connected",
                v + 1
            )));
        }
        Ok(())
    }

    pub fn to_td(&self) -> String {
        let mut out = format!(
            "s td {} {} {}\n",
            self.bags.len(),
            self.bags.iter().map(Vec::len).max().unwrap_or(0),
            self.n
        );
        for (i, bag) in self.bags.iter().enumerate() {
            let _ = write!(out, "b {}", i + 1);
            for v in bag {
                let _ = write!(out, " {}", v + 1);
            }
            out.push('\n');
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "{} {}", a + 1, b + 1);
        }
        out
    }
}

/// Parses a PACE `.td` file. Structural problems in the file are reported
/// with line numbers; call [`TreeDecomposition::validate`] for the graph checks.
pub fn parse_td(text: &str) -> Result<TreeDecomposition> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    let mut last_line = 1;

    let num = |s: &str, line: usize, what: &str| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|_| Error::parse(line, format!("malformed {what}")))
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        match f[0] {
            "s" => {
                if header.is_some() {
                    return Err(Error::parse(line_no, "duplicate header"));
                }
                if f.len() != 5 || f[1] != "td" {
                    return Err(Error::parse(line_no, "malformed header, expected `s td <bags> <width+1> <n>`"));
                }
                let h = (
                    num(f[2], line_no, "bag count")?,
                    num(f[3], line_no, "bag size")?,
                    num(f[4], line_no, "vertex count")?,
                );
                bags = vec![None; h.0];
                header = Some(h);
            }
            "b" => {
                let Some((k, _, n)) = header else {
                    return Err(Error::parse(line_no, "bag before header"));
                };
                if f.len() < 2 {
                    return Err(Error::parse(line_no, "malformed bag line"));
                }
                let id = num(f[1], line_no, "bag id")?;
                if id < 1 || id > k {
                    return Err(Error::parse(line_no, "bag id out of range"));
                }
                if bags[id - 1].is_some() {
                    return Err(Error::parse(line_no, "duplicate bag id"));
                }
                let mut bag = Vec::with_capacity(f.len() - 2);
                for s in &f[2..] {
                    let v = num(s, line_no, "vertex id")?;
                    if v < 1 || v > n {
                        return Err(Error::parse(line_no, "vertex id out of range"));
                    }
                    bag.push(v - 1);
                }
                bags[id - 1] = Some(bag);
            }
            _ => {
                let Some((k, _, _)) = header else {
                    return Err(Error::parse(line_no, "tree edge before header"));
                };
                if f.len() != 2 {
                    return Err(Error::parse(line_no, "malformed tree edge"));
                }
                let a = num(f[0], line_no, "bag id")?;
                let b = num(f[1], line_no, "bag id")?;
                if a < 1 || a > k || b < 1 || b > k {
                    return Err(Error::parse(line_no, "bag id out of range"));
                }
                edges.push((a - 1, b - 1));
            }
        }
    }

    let (_, declared, n) = header.ok_or_else(|| Error::parse(last_line, "missing header"))?;
    let mut out = Vec::with_capacity(bags.len());
    for (i, b) in bags.into_iter().enumerate() {
        out.push(b.ok_or_else(|| Error::parse(last_line, format!("bag {} missing", i + 1)))?);
    }
    let td = TreeDecomposition::new(n, out, edges);
    let actual = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    if actual != declared {
        return Err(Error::Decomposition(format!(
            "declared width {} but largest bag has {} vertices",
            declared.saturating_sub(1),
            actual
        )));
    }
    Ok(td)
}
