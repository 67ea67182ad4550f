//! Set partitions of a bag universe and weighted partition tables.
//!
//! A [`Partition`] stores one block id per universe position in
//! restricted-growth form, so equal partitions have equal encodings. A
//! [`WeightedTable`] maps `(label, partition)` to the minimum weight seen for
//! that key; every operator keeps at most one entry per key.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{add_weight, Weight, INFINITY};

/// Largest supported universe (bag size).
pub const MAX_UNIVERSE: usize = 31;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Partition {
    len: u8,
    blocks: [u8; MAX_UNIVERSE],
}

impl Partition {
    pub fn empty() -> Self {
        Partition {
            len: 0,
            blocks: [0; MAX_UNIVERSE],
        }
    }

    /// All singletons (the lattice bottom).
    pub fn singletons(t: usize) -> Self {
        assert!(t <= MAX_UNIVERSE, "universe too large");
        let mut p = Self::empty();
        p.len = t as u8;
        for i in 0..t {
            p.blocks[i] = i as u8;
        }
        p
    }

    /// One block (the lattice top).
    pub fn whole(t: usize) -> Self {
        assert!(t <= MAX_UNIVERSE, "universe too large");
        let mut p = Self::empty();
        p.len = t as u8;
        p
    }

    /// Relabels arbitrary block labels into restricted-growth form.
    pub fn canonicalize<T: Copy + PartialEq>(labels: &[T]) -> Self {
        assert!(labels.len() <= MAX_UNIVERSE, "universe too large");
        let mut p = Self::empty();
        p.len = labels.len() as u8;
        let mut seen: Vec<T> = Vec::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            let id = match seen.iter().position(|s| s == l) {
                Some(k) => k,
                None => {
                    seen.push(*l);
                    seen.len() - 1
                }
            };
            p.blocks[i] = id as u8;
        }
        p
    }

    fn canon_bytes(raw: &[u8]) -> Self {
        let mut map = [u8::MAX; 256];
        let mut p = Self::empty();
        p.len = raw.len() as u8;
        let mut next = 0u8;
        for (i, &l) in raw.iter().enumerate() {
            if map[l as usize] == u8::MAX {
                map[l as usize] = next;
                next += 1;
            }
            p.blocks[i] = map[l as usize];
        }
        p
    }

    /// Builds from a restricted-growth string, rejecting anything else.
    pub fn from_rgs(digits: &[u8]) -> Result<Self> {
        if digits.len() > MAX_UNIVERSE {
            return Err(Error::Contract("universe too large".into()));
        }
        let mut next = 0u8;
        for &d in digits {
            if d > next {
                return Err(Error::Contract(format!("{digits:?} is not restricted-growth")));
            }
            if d == next {
                next += 1;
            }
        }
        let mut p = Self::empty();
        p.len = digits.len() as u8;
        p.blocks[..digits.len()].copy_from_slice(digits);
        Ok(p)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn digits(&self) -> &[u8] {
        &self.blocks[..self.len as usize]
    }

    #[inline]
    pub fn block_of(&self, pos: usize) -> u8 {
        debug_assert!(pos < self.len());
        self.blocks[pos]
    }

    pub fn block_count(&self) -> usize {
        self.digits().iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Position bitmask of every block, indexed by block id.
    pub fn block_masks(&self) -> Vec<u32> {
        let mut masks = vec![0u32; self.block_count()];
        for (i, &b) in self.digits().iter().enumerate() {
            masks[b as usize] |= 1 << i;
        }
        masks
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.blocks[a] == self.blocks[b]
    }

    pub fn is_singleton(&self, pos: usize) -> bool {
        let b = self.blocks[pos];
        self.digits().iter().filter(|&&x| x == b).count() == 1
    }

    /// True when every block has exactly two elements.
    pub fn is_perfect_matching(&self) -> bool {
        let mut sizes = [0u8; MAX_UNIVERSE];
        for &b in self.digits() {
            sizes[b as usize] += 1;
        }
        sizes[..self.block_count()].iter().all(|&s| s == 2)
    }

    /// Merges the blocks holding positions `a` and `b`.
    pub fn merge(&self, a: usize, b: usize) -> Self {
        let (x, y) = (self.blocks[a], self.blocks[b]);
        if x == y {
            return *self;
        }
        let (keep, drop) = (x.min(y), x.max(y));
        let mut raw = self.blocks;
        for d in &mut raw[..self.len()] {
            if *d == drop {
                *d = keep;
            }
        }
        Self::canon_bytes(&raw[..self.len()])
    }

    /// Inserts a new singleton block at position `pos`.
    pub fn insert_singleton(&self, pos: usize) -> Self {
        assert!(self.len() < MAX_UNIVERSE, "universe too large");
        assert!(pos <= self.len());
        let mut raw = [0u8; MAX_UNIVERSE];
        raw[..pos].copy_from_slice(&self.blocks[..pos]);
        raw[pos] = u8::MAX;
        raw[pos + 1..=self.len()].copy_from_slice(&self.blocks[pos..self.len()]);
        Self::canon_bytes(&raw[..=self.len()])
    }

    /// Drops position `pos` from its block.
    pub fn remove(&self, pos: usize) -> Self {
        let mut raw = [0u8; MAX_UNIVERSE];
        let t = self.len();
        raw[..pos].copy_from_slice(&self.blocks[..pos]);
        raw[pos..t - 1].copy_from_slice(&self.blocks[pos + 1..t]);
        Self::canon_bytes(&raw[..t - 1])
    }

    /// The partition induced on the positions set in `mask`, in position order.
    pub fn restrict(&self, mask: u32) -> Self {
        let mut raw = [0u8; MAX_UNIVERSE];
        let mut k = 0;
        for i in 0..self.len() {
            if mask >> i & 1 == 1 {
                raw[k] = self.blocks[i];
                k += 1;
            }
        }
        Self::canon_bytes(&raw[..k])
    }

    /// Finest common coarsening of two partitions of the same universe.
    pub fn join(&self, other: &Self) -> Result<Self> {
        if self.len != other.len {
            return Err(Error::Contract(format!(
                "lattice join of universes {} and {}",
                self.len, other.len
            )));
        }
        let t = self.len();
        // union-find over block ids of `self`, linked through blocks of `other`
        let mut parent: [u8; MAX_UNIVERSE] = std::array::from_fn(|i| i as u8);
        fn find(parent: &mut [u8; MAX_UNIVERSE], mut x: u8) -> u8 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        let mut first = [u8::MAX; MAX_UNIVERSE];
        for i in 0..t {
            let ob = other.blocks[i] as usize;
            let sb = self.blocks[i];
            if first[ob] == u8::MAX {
                first[ob] = sb;
            } else {
                let a = find(&mut parent, first[ob]);
                let b = find(&mut parent, sb);
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
        let mut raw = [0u8; MAX_UNIVERSE];
        for (r, &b) in raw.iter_mut().zip(&self.blocks[..t]) {
            *r = find(&mut parent, b);
        }
        Ok(Self::canon_bytes(&raw[..t]))
    }

    pub fn is_whole(&self) -> bool {
        self.digits().iter().all(|&d| d == 0)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the restricted-growth digits (shorter universes first).
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.digits().cmp(other.digits()))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.digits().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "-");
        }
        for d in self.digits() {
            write!(f, "{}", char::from_digit(*d as u32, 36).unwrap_or('?'))?;
        }
        Ok(())
    }
}

/// Every partition of a `t`-element universe, in lexicographic
/// restricted-growth order.
pub fn enumerate_partitions(t: usize) -> Result<Vec<Partition>> {
    if t > 12 {
        return Err(Error::Budget(format!("enumerating partitions of {t} > 12 elements")));
    }
    let mut out = Vec::new();
    let mut digits = vec![0u8; t];
    fn rec(i: usize, max: u8, digits: &mut Vec<u8>, out: &mut Vec<Partition>) {
        if i == digits.len() {
            out.push(Partition::from_rgs(digits).expect("restricted growth"));
            return;
        }
        for d in 0..=max + 1 {
            digits[i] = d;
            rec(i + 1, max.max(d), digits, out);
        }
    }
    if t == 0 {
        out.push(Partition::empty());
    } else {
        rec(1, 0, &mut digits, &mut out);
    }
    Ok(out)
}

/// The ordered vertices of a bag. Positions are indices into `vertices`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Universe {
    vertices: Vec<usize>,
}

impl Universe {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.len() > MAX_UNIVERSE {
            return Err(Error::Contract(format!(
                "bag of {} vertices exceeds the supported {MAX_UNIVERSE}",
                vertices.len()
            )));
        }
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::Contract(format!("vertex {v} repeated in universe")));
            }
        }
        Ok(Universe { vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    pub fn push(&mut self, v: usize) -> Result<usize> {
        self.insert_at(self.vertices.len(), v)
    }

    pub fn insert_at(&mut self, pos: usize, v: usize) -> Result<usize> {
        if self.vertices.contains(&v) {
            return Err(Error::Contract(format!("vertex {v} already in universe")));
        }
        if self.vertices.len() == MAX_UNIVERSE {
            return Err(Error::Contract("universe full".into()));
        }
        self.vertices.insert(pos, v);
        Ok(pos)
    }

    pub fn remove(&mut self, v: usize) -> Result<usize> {
        let pos = self
            .position(v)
            .ok_or_else(|| Error::Contract(format!("vertex {v} not in universe")))?;
        self.vertices.remove(pos);
        Ok(pos)
    }
}

/// Opaque engine-defined state label (a subset bitmask, a degree vector, ...).
pub type Label = u64;

/// Map from `(label, partition)` to minimum weight over a fixed universe size.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedTable {
    t: usize,
    entries: HashMap<(Label, Partition), Weight>,
}

impl WeightedTable {
    pub fn new(t: usize) -> Self {
        WeightedTable {
            t,
            entries: HashMap::new(),
        }
    }

    pub fn with_capacity(t: usize, cap: usize) -> Self {
        WeightedTable {
            t,
            entries: HashMap::with_capacity(cap),
        }
    }

    pub fn universe_len(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, label: Label, p: &Partition) -> Option<Weight> {
        self.entries.get(&(label, *p)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, &Partition, Weight)> + '_ {
        self.entries.iter().map(|(&(l, ref p), &w)| (l, p, w))
    }

    /// Adds an entry, keeping the smaller weight on collision.
    pub fn insert_min(&mut self, label: Label, p: Partition, w: Weight) {
        debug_assert_eq!(p.len(), self.t, "partition universe mismatch");
        debug_assert!(w != INFINITY, "infinity entered a table");
        self.entries
            .entry((label, p))
            .and_modify(|x| *x = (*x).min(w))
            .or_insert(w);
    }

    pub fn retain(&mut self, mut keep: impl FnMut(Label, &Partition, Weight) -> bool) {
        self.entries.retain(|&(l, ref p), w| keep(l, p, *w));
    }

    /// Entries grouped by label, each group sorted by `(weight, partition)`.
    pub fn slices(&self) -> Vec<(Label, Vec<(Partition, Weight)>)> {
        let mut by_label: HashMap<Label, Vec<(Partition, Weight)>> = HashMap::new();
        for (&(l, p), &w) in &self.entries {
            by_label.entry(l).or_default().push((p, w));
        }
        let mut out: Vec<_> = by_label.into_iter().collect();
        out.sort_unstable_by_key(|(l, _)| *l);
        for (_, rows) in &mut out {
            rows.sort_unstable_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        }
        out
    }

    /// Union with minimum on colliding keys.
    pub fn union(mut self, other: WeightedTable) -> Result<WeightedTable> {
        if self.t != other.t {
            return Err(Error::Contract("union of tables over different universes".into()));
        }
        if self.entries.len() < other.entries.len() {
            return other.union(self);
        }
        for ((l, p), w) in other.entries {
            self.insert_min(l, p, w);
        }
        Ok(self)
    }

    /// Introduces a vertex at universe position `pos` as a singleton block.
    pub fn insert_at(&self, pos: usize, relabel: impl Fn(Label) -> Label) -> Result<WeightedTable> {
        if pos > self.t || self.t >= MAX_UNIVERSE {
            return Err(Error::Contract(format!(
                "insert at position {pos} into universe of {}",
                self.t
            )));
        }
        let mut out = WeightedTable::with_capacity(self.t + 1, self.len());
        for (&(l, p), &w) in &self.entries {
            out.insert_min(relabel(l), p.insert_singleton(pos), w);
        }
        Ok(out)
    }

    /// Introduces a vertex at the end of the universe.
    pub fn insert(&self, relabel: impl Fn(Label) -> Label) -> Result<WeightedTable> {
        self.insert_at(self.t, relabel)
    }

    /// Merges the blocks of positions `u` and `v` in every entry and adds `edge_weight`.
    pub fn glue(&self, u: usize, v: usize, edge_weight: Weight) -> Result<WeightedTable> {
        if u >= self.t || v >= self.t {
            return Err(Error::Contract("glue position outside universe".into()));
        }
        let mut out = WeightedTable::with_capacity(self.t, self.len());
        for (&(l, p), &w) in &self.entries {
            out.insert_min(l, p.merge(u, v), add_weight(w, edge_weight)?);
        }
        Ok(out)
    }

    /// Removes position `pos`. Entries whose label says the vertex must stay
    /// connected and whose block at `pos` is a singleton are dropped.
    pub fn project(
        &self,
        pos: usize,
        must_connect: impl Fn(Label) -> bool,
        relabel: impl Fn(Label) -> Label,
    ) -> Result<WeightedTable> {
        if pos >= self.t {
            return Err(Error::Contract("project position outside universe".into()));
        }
        let mut out = WeightedTable::with_capacity(self.t - 1, self.len());
        for (&(l, p), &w) in &self.entries {
            if must_connect(l) && p.is_singleton(pos) {
                continue;
            }
            out.insert_min(relabel(l), p.remove(pos), w);
        }
        Ok(out)
    }

    /// Pairs entries with identical labels, joining their partitions and
    /// adding weights.
    pub fn join(&self, other: &WeightedTable) -> Result<WeightedTable> {
        if self.t != other.t {
            return Err(Error::Contract("join of tables over different universes".into()));
        }
        let mut by_label: HashMap<Label, Vec<(Partition, Weight)>> = HashMap::new();
        for (&(l, p), &w) in &other.entries {
            by_label.entry(l).or_default().push((p, w));
        }
        let mut out = WeightedTable::new(self.t);
        for (&(l, p), &w) in &self.entries {
            if let Some(rows) = by_label.get(&l) {
                for (q, x) in rows {
                    out.insert_min(l, p.join(q)?, add_weight(w, *x)?);
                }
            }
        }
        Ok(out)
    }

    /// One line per entry, `label partition weight`, sorted.
    pub fn dump(&self) -> String {
        let mut rows: Vec<_> = self.iter().map(|(l, p, w)| (l, *p, w)).collect();
        rows.sort_unstable();
        let mut s = String::new();
        for (l, p, w) in rows {
            s.push_str(&format!("{l} {p} {w}\n"));
        }
        s
    }
}

impl FromIterator<(Label, Partition, Weight)> for WeightedTable {
    fn from_iter<I: IntoIterator<Item = (Label, Partition, Weight)>>(iter: I) -> Self {
        let mut iter = iter.into_iter().peekable();
        let t = iter.peek().map_or(0, |(_, p, _)| p.len());
        let mut table = WeightedTable::new(t);
        for (l, p, w) in iter {
            table.insert_min(l, p, w);
        }
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(d: &[u8]) -> Partition {
        Partition::from_rgs(d).unwrap()
    }

    fn table(rows: &[(&[u8], Weight)]) -> WeightedTable {
        rows.iter().map(|(d, w)| (0, p(d), *w)).collect()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(Partition::canonicalize(&[5, 5, 9]), p(&[0, 0, 1]));
        assert_eq!(Partition::canonicalize(&[0, 1, 2]), p(&[0, 1, 2]));
        assert_eq!(Partition::canonicalize(&[2, 1, 2, 1]), p(&[0, 1, 0, 1]));
        assert!(Partition::from_rgs(&[1, 0]).is_err());
        assert!(Partition::from_rgs(&[0, 2]).is_err());
    }

    #[test]
    fn lattice_join_examples() {
        assert_eq!(p(&[0, 0, 1]).join(&p(&[0, 1, 1])).unwrap(), p(&[0, 0, 0]));
        let q = p(&[0, 1, 0, 2]);
        assert_eq!(q.join(&q).unwrap(), q);
        assert_eq!(Partition::singletons(4).join(&q).unwrap(), q);
        assert_eq!(q.join(&Partition::whole(4)).unwrap(), Partition::whole(4));
        assert!(q.join(&p(&[0, 1])).is_err());
    }

    #[test]
    fn union_keeps_minimum() {
        let a = table(&[(&[0, 1], 3)]);
        let b = table(&[(&[0, 1], 5)]);
        assert_eq!(a.clone().union(b).unwrap().get(0, &p(&[0, 1])), Some(3));
        let c = table(&[(&[0, 0], 5)]);
        assert_eq!(a.clone().union(c).unwrap().len(), 2);
        assert_eq!(WeightedTable::new(2).union(a.clone()).unwrap(), a);
    }

    #[test]
    fn insert_appends_singleton() {
        let a = table(&[(&[0, 0], 4)]);
        let b = a.insert(|l| l).unwrap();
        assert_eq!(b.get(0, &p(&[0, 0, 1])), Some(4));
        assert!(WeightedTable::new(2).insert(|l| l).unwrap().is_empty());
        let mut e = WeightedTable::new(0);
        e.insert_min(0, Partition::empty(), 0);
        assert_eq!(e.insert(|l| l).unwrap().get(0, &p(&[0])), Some(0));
        let mid = table(&[(&[0, 1], 1)]).insert_at(1, |l| l).unwrap();
        assert_eq!(mid.get(0, &p(&[0, 1, 2])), Some(1));
    }

    #[test]
    fn glue_merges_and_adds() {
        let a = table(&[(&[0, 1], 2)]);
        assert_eq!(a.glue(0, 1, 5).unwrap().get(0, &p(&[0, 0])), Some(7));
        let same = table(&[(&[0, 0], 2)]);
        assert_eq!(same.glue(0, 1, 5).unwrap().get(0, &p(&[0, 0])), Some(7));
        assert!(WeightedTable::new(2).glue(0, 1, 1).unwrap().is_empty());
        let big = table(&[(&[0, 1], INFINITY - 1)]);
        assert!(matches!(big.glue(0, 1, 1), Err(Error::Overflow)));
    }

    #[test]
    fn project_drops_isolated() {
        let a = table(&[(&[0, 1], 3)]);
        assert!(a.project(1, |_| true, |l| l).unwrap().is_empty());
        let b = table(&[(&[0, 0], 3)]);
        assert_eq!(b.project(1, |_| true, |l| l).unwrap().get(0, &p(&[0])), Some(3));
        let c = table(&[(&[0, 0, 1], 3), (&[0, 1, 1], 9), (&[0, 1, 0], 2)]);
        let out = c.project(2, |_| false, |l| l).unwrap();
        assert_eq!(out.get(0, &p(&[0, 0])), Some(3));
        assert_eq!(out.get(0, &p(&[0, 1])), Some(2));
    }

    #[test]
    fn join_products() {
        let a = table(&[(&[0, 1, 2], 1)]);
        let b = table(&[(&[0, 1, 2], 0)]);
        assert_eq!(a.join(&b).unwrap().get(0, &p(&[0, 1, 2])), Some(1));
        let a = table(&[(&[0, 1, 2, 3], 1), (&[0, 1, 2, 2], 2)]);
        let b = table(&[(&[0, 1, 2, 3], 10), (&[0, 0, 1, 2], 20), (&[0, 1, 1, 2], 30)]);
        assert_eq!(a.join(&b).unwrap().len(), 6);
        assert!(WeightedTable::new(4).join(&b).unwrap().is_empty());
        let mut other_label = WeightedTable::new(4);
        other_label.insert_min(1, p(&[0, 1, 2, 3]), 0);
        assert!(a.join(&other_label).unwrap().is_empty());
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_partitions(1).unwrap(), vec![p(&[0])]);
        let three = enumerate_partitions(3).unwrap();
        assert_eq!(three.len(), 5);
        assert!(three.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_partitions(4).unwrap().len(), 15);
        assert_eq!(enumerate_partitions(0).unwrap().len(), 1);
        assert!(enumerate_partitions(13).is_err());
    }

    #[test]
    fn dump_format() {
        let a = table(&[(&[0, 1], 3), (&[0, 0], 1)]);
        assert_eq!(a.dump(), "0 00 1\n0 01 3\n");
    }

    #[test]
    fn universe_positions() {
        let mut u = Universe::new(vec![7, 3]).unwrap();
        assert_eq!(u.push(9).unwrap(), 2);
        assert!(u.push(3).is_err());
        assert_eq!(u.remove(3).unwrap(), 1);
        assert_eq!(u.vertices(), &[7, 9]);
        assert!(Universe::new(vec![1, 1]).is_err());
    }

    fn labeling(max_t: usize) -> impl Strategy<Value = Vec<u8>> {
        (0..=max_t).prop_flat_map(|t| prop::collection::vec(0u8..6, t))
    }

    fn triple(t: usize) -> impl Strategy<Value = (Vec<u8>, Vec<u8>, Vec<u8>)> {
        (
            prop::collection::vec(0u8..5, t),
            prop::collection::vec(0u8..5, t),
            prop::collection::vec(0u8..5, t),
        )
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent_and_label_blind(raw in labeling(8), shift in 1u8..50) {
            let a = Partition::canonicalize(&raw);
            prop_assert_eq!(Partition::canonicalize(a.digits()), a);
            let renamed: Vec<u8> = raw.iter().map(|x| (x * 7 + shift) % 251).collect();
            prop_assert_eq!(Partition::canonicalize(&renamed), a);
        }

        #[test]
        fn lattice_join_laws((a, b, c) in (0usize..=8).prop_flat_map(triple)) {
            let (p, q, r) = (
                Partition::canonicalize(&a),
                Partition::canonicalize(&b),
                Partition::canonicalize(&c),
            );
            let t = p.len();
            prop_assert_eq!(p.join(&q).unwrap(), q.join(&p).unwrap());
            prop_assert_eq!(
                p.join(&q).unwrap().join(&r).unwrap(),
                p.join(&q.join(&r).unwrap()).unwrap()
            );
            prop_assert_eq!(p.join(&p).unwrap(), p);
            prop_assert_eq!(p.join(&Partition::singletons(t)).unwrap(), p);
            prop_assert_eq!(p.join(&Partition::whole(t)).unwrap(), Partition::whole(t));
        }
    }
}
