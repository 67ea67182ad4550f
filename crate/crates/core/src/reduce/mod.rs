//! Representative-set reduction of weighted partition tables.
//!
//! A table slice (all rows share one label and universe) is shrunk to a
//! subset that keeps, for every possible completion, the cheapest compatible
//! row. Compatibility of `p` with a completion `q` is `p ⊔ q = top`; over
//! GF(2) that matrix factors through the cut matrix (rows = partitions,
//! columns = two-sided cuts with position 0 on the left, entry 1 iff the
//! partition refines the cut). Taking a minimum-weight row basis of the cut
//! matrix therefore gives a representative subset of at most `2^(t-1)` rows.
//!
//! For perfect-matching tables the completions are themselves perfect
//! matchings and compatibility means "the union is one Hamiltonian cycle";
//! the same greedy basis over that matrix gives [`reduce_matchings`].

mod gf2;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use gf2::{gaussian_row_basis, rank, Gf2Matrix, MAX_COLUMNS};

use crate::error::{Error, Result};
use crate::graph::Weight;
use crate::partition::{Partition, MAX_UNIVERSE};

/// Largest universe accepted by [`cut_row`] (2^20 columns).
pub const MAX_CUT_UNIVERSE: usize = 21;

/// Largest universe for which [`reduce_matchings`] enumerates all matchings
/// as columns (10395 columns at 12).
pub const MAX_MATCHING_UNIVERSE: usize = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceStats {
    pub rows_in: u64,
    pub rows_out: u64,
    pub cols: u64,
    pub xor_word_ops: u64,
    pub nanos: u64,
}

impl ReduceStats {
    pub fn absorb(&mut self, other: &ReduceStats) {
        self.rows_in += other.rows_in;
        self.rows_out += other.rows_out;
        self.cols += other.cols;
        self.xor_word_ops += other.xor_word_ops;
        self.nanos += other.nanos;
    }
}

/// Row of the cut matrix for `p`: bit `S >> 1` is set for every position
/// set `S` containing position 0 such that each block of `p` lies on one
/// side of `(S, complement)`.
pub fn cut_row(p: &Partition) -> Result<Vec<u64>> {
    let t = p.len();
    if t == 0 || t > MAX_CUT_UNIVERSE {
        return Err(Error::Contract(format!(
            "cut row for universe {t}; supported range is 1..={MAX_CUT_UNIVERSE} \
             (raise MAX_CUT_UNIVERSE to go further)"
        )));
    }
    let cols = 1usize << (t - 1);
    let mut row = vec![0u64; cols.div_ceil(64)];
    let masks = p.block_masks();
    let anchor = masks[p.block_of(0) as usize];
    let others: Vec<u32> = masks
        .iter()
        .copied()
        .filter(|&m| m != anchor)
        .collect();
    // every union of non-anchor blocks, plus the anchor block
    for pick in 0u32..(1 << others.len()) {
        let mut s = anchor;
        for (k, m) in others.iter().enumerate() {
            if pick >> k & 1 == 1 {
                s |= m;
            }
        }
        let col = (s >> 1) as usize;
        row[col / 64] |= 1 << (col % 64);
    }
    Ok(row)
}

fn sorted(rows: &[(Partition, Weight)]) -> Vec<(Partition, Weight)> {
    let mut rows = rows.to_vec();
    rows.sort_unstable_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    rows
}

fn check_universe(rows: &[(Partition, Weight)], t: usize) -> Result<()> {
    if let Some((p, _)) = rows.iter().find(|(p, _)| p.len() != t) {
        return Err(Error::Contract(format!(
            "row {p:?} is over universe {}, expected {t}",
            p.len()
        )));
    }
    Ok(())
}

fn select(
    rows: Vec<(Partition, Weight)>,
    matrix: &Gf2Matrix,
    start: Instant,
) -> (Vec<(Partition, Weight)>, ReduceStats) {
    let order: Vec<usize> = (0..rows.len()).collect();
    let (kept, xors) = gaussian_row_basis(matrix, &order);
    let out: Vec<_> = kept.iter().map(|&i| rows[i]).collect();
    let stats = ReduceStats {
        rows_in: rows.len() as u64,
        rows_out: out.len() as u64,
        cols: matrix.cols() as u64,
        xor_word_ops: xors,
        nanos: start.elapsed().as_nanos() as u64,
    };
    (out, stats)
}

/// Shrinks a slice of distinct partitions of a `t`-element universe to a
/// representative subset of at most `2^(t-1)` rows.
///
/// Rows are ordered by `(weight, partition)` and the cut-matrix rows are
/// eliminated in that order; the rows that contribute a new pivot are kept,
/// returned in that same order.
pub fn reduce(rows: &[(Partition, Weight)], t: usize) -> Result<(Vec<(Partition, Weight)>, ReduceStats)> {
    let start = Instant::now();
    check_universe(rows, t)?;
    if rows.is_empty() || t == 0 {
        let out = sorted(rows);
        let n = out.len() as u64;
        return Ok((
            out,
            ReduceStats {
                rows_in: n,
                rows_out: n,
                ..Default::default()
            },
        ));
    }
    let rows = sorted(rows);
    let cols = 1usize << (t - 1);
    let mut matrix = Gf2Matrix::zeros(0, cols);
    for (p, _) in &rows {
        matrix.push_row(&cut_row(p)?);
    }
    let (out, stats) = select(rows, &matrix, start);
    assert!(out.len() <= cols, "reduce produced {} rows over cap {cols}", out.len());
    Ok((out, stats))
}

/// Partner of every position in a perfect matching.
fn partners(p: &Partition) -> [u8; MAX_UNIVERSE] {
    let mut first = [u8::MAX; MAX_UNIVERSE];
    let mut partner = [u8::MAX; MAX_UNIVERSE];
    for (i, &b) in p.digits().iter().enumerate() {
        let f = first[b as usize];
        if f == u8::MAX {
            first[b as usize] = i as u8;
        } else {
            partner[i] = f;
            partner[f as usize] = i as u8;
        }
    }
    partner
}

fn cycle_length(pa: &[u8; MAX_UNIVERSE], pb: &[u8; MAX_UNIVERSE]) -> usize {
    let mut x = 0u8;
    let mut len = 0;
    loop {
        x = pb[pa[x as usize] as usize];
        len += 2;
        if x == 0 {
            return len;
        }
    }
}

/// Whether the union of two perfect matchings is a single cycle through
/// every position.
pub fn fits_cycle(p: &Partition, q: &Partition) -> Result<bool> {
    let t = p.len();
    if q.len() != t || t % 2 == 1 || !p.is_perfect_matching() || !q.is_perfect_matching() {
        return Err(Error::Contract(format!("fits_cycle needs two perfect matchings, got {p:?} and {q:?}")));
    }
    if t == 0 {
        return Ok(true);
    }
    Ok(cycle_length(&partners(p), &partners(q)) == t)
}

/// All perfect matchings of `t` positions, sorted by encoding.
pub fn perfect_matchings(t: usize) -> Result<Vec<Partition>> {
    if t % 2 == 1 || t > MAX_UNIVERSE {
        return Err(Error::Contract(format!("no perfect matchings on {t} positions")));
    }
    if t > MAX_MATCHING_UNIVERSE + 2 {
        return Err(Error::Budget(format!("enumerating matchings of {t} positions")));
    }
    fn rec(labels: &mut [u8], next: u8, out: &mut Vec<Partition>) {
        let Some(i) = labels.iter().position(|&l| l == u8::MAX) else {
            out.push(Partition::canonicalize(labels));
            return;
        };
        labels[i] = next;
        for j in i + 1..labels.len() {
            if labels[j] == u8::MAX {
                labels[j] = next;
                rec(labels, next + 1, out);
                labels[j] = u8::MAX;
            }
        }
        labels[i] = u8::MAX;
    }
    let mut out = Vec::new();
    rec(&mut vec![u8::MAX; t], 0, &mut out);
    out.sort_unstable();
    Ok(out)
}

/// Shrinks a slice of perfect matchings so that for every perfect matching
/// `q` the cheapest row forming a Hamiltonian cycle with `q` survives.
///
/// Columns are all perfect matchings of the universe. The output never
/// exceeds the GF(2) rank of the full fits-cycle matrix, `2^(t/2 - 1)`.
pub fn reduce_matchings(
    rows: &[(Partition, Weight)],
    t: usize,
) -> Result<(Vec<(Partition, Weight)>, ReduceStats)> {
    let start = Instant::now();
    check_universe(rows, t)?;
    if t % 2 == 1 {
        return Err(Error::Contract(format!("matching universe {t} is odd")));
    }
    if let Some((p, _)) = rows.iter().find(|(p, _)| !p.is_perfect_matching()) {
        return Err(Error::Contract(format!("{p:?} is not a perfect matching")));
    }
    if t > MAX_MATCHING_UNIVERSE {
        return Err(Error::Contract(format!(
            "matching universe {t} over MAX_MATCHING_UNIVERSE={MAX_MATCHING_UNIVERSE}"
        )));
    }
    if rows.is_empty() || t == 0 {
        let out = sorted(rows);
        let n = out.len() as u64;
        return Ok((
            out,
            ReduceStats {
                rows_in: n,
                rows_out: n,
                ..Default::default()
            },
        ));
    }
    let rows = sorted(rows);
    let columns: Vec<[u8; MAX_UNIVERSE]> = perfect_matchings(t)?.iter().map(partners).collect();
    let mut matrix = Gf2Matrix::zeros(0, columns.len());
    let mut buf = vec![0u64; matrix.words_per_row()];
    for (p, _) in &rows {
        buf.fill(0);
        let pp = partners(p);
        for (j, q) in columns.iter().enumerate() {
            if cycle_length(&pp, q) == t {
                buf[j / 64] |= 1 << (j % 64);
            }
        }
        matrix.push_row(&buf);
    }
    let (out, stats) = select(rows, &matrix, start);
    let cap = 1usize << (t / 2 - 1);
    assert!(out.len() <= cap, "reduce_matchings produced {} rows over cap {cap}", out.len());
    Ok((out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;
    use crate::partition::enumerate_partitions;
    use proptest::prelude::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(d: &[u8]) -> Partition {
        Partition::from_rgs(d).unwrap()
    }

    #[test]
    fn cut_rows_small() {
        assert_eq!(cut_row(&p(&[0])).unwrap(), vec![0b1]);
        assert_eq!(cut_row(&p(&[0, 1])).unwrap(), vec![0b11]);
        assert_eq!(cut_row(&p(&[0, 0])).unwrap(), vec![0b10]);
        assert!(cut_row(&Partition::empty()).is_err());
        assert!(cut_row(&Partition::singletons(22)).is_err());
    }

    #[test]
    fn cut_row_matches_definition() {
        for t in 1..=5 {
            for q in enumerate_partitions(t).unwrap() {
                let row = cut_row(&q).unwrap();
                for s in (0u32..1 << t).filter(|s| s & 1 == 1) {
                    let refines = q.block_masks().iter().all(|&m| m & s == 0 || m & s == m);
                    let col = (s >> 1) as usize;
                    assert_eq!(row[col / 64] >> (col % 64) & 1 == 1, refines);
                }
            }
        }
    }

    #[test]
    fn reduce_trivial_inputs() {
        assert!(reduce(&[], 3).unwrap().0.is_empty());
        let one = [(p(&[0, 1, 0]), 4)];
        assert_eq!(reduce(&one, 3).unwrap().0, one.to_vec());
        assert!(reduce(&one, 2).is_err());
    }

    #[test]
    fn reduce_all_partitions_of_three() {
        let input: Vec<_> = enumerate_partitions(3)
            .unwrap()
            .into_iter()
            .zip(1..)
            .collect();
        let (out, stats) = reduce(&input, 3).unwrap();
        assert!(out.len() <= 4);
        assert_eq!(stats.rows_in, 5);
        assert_eq!(stats.rows_out, out.len() as u64);
        assert_eq!(stats.cols, 4);
        assert!(oracles::check_representative(&input, &out, 3).unwrap());
    }

    #[test]
    fn fits_cycle_examples() {
        assert!(fits_cycle(&p(&[0, 0]), &p(&[0, 0])).unwrap());
        assert!(fits_cycle(&p(&[0, 0, 1, 1]), &p(&[0, 1, 1, 0])).unwrap());
        assert!(!fits_cycle(&p(&[0, 0, 1, 1]), &p(&[0, 0, 1, 1])).unwrap());
        assert!(fits_cycle(&p(&[0, 0, 1]), &p(&[0, 0, 1])).is_err());
        assert!(fits_cycle(&p(&[0, 0, 0, 0]), &p(&[0, 0, 1, 1])).is_err());
    }

    #[test]
    fn matching_counts() {
        for (t, count) in [(0, 1), (2, 1), (4, 3), (6, 15), (8, 105), (10, 945)] {
            let all = perfect_matchings(t).unwrap();
            assert_eq!(all.len(), count);
            assert!(all.iter().all(Partition::is_perfect_matching));
        }
        assert!(perfect_matchings(3).is_err());
    }

    /// Rank of the full fits-cycle matrix, by an elimination written here.
    fn full_rank(t: usize) -> usize {
        let all = perfect_matchings(t).unwrap();
        let mut rows: Vec<Vec<bool>> = all
            .iter()
            .map(|a| all.iter().map(|b| fits_cycle(a, b).unwrap()).collect())
            .collect();
        let mut r = 0;
        for c in 0..all.len() {
            let Some(k) = (r..rows.len()).find(|&k| rows[k][c]) else { continue };
            rows.swap(r, k);
            for k in 0..rows.len() {
                if k != r && rows[k][c] {
                    let pivot = rows[r].clone();
                    for (x, y) in rows[k].iter_mut().zip(pivot) {
                        *x ^= y;
                    }
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn fits_matrix_rank_is_two_to_half_minus_one() {
        for (t, expect) in [(2, 1), (4, 2), (6, 4), (8, 8)] {
            assert_eq!(full_rank(t), expect, "t={t}");
        }
    }

    #[test]
    fn reduce_matchings_examples() {
        let single = [(p(&[0, 0]), 3)];
        assert_eq!(reduce_matchings(&single, 2).unwrap().0, single.to_vec());

        let four: Vec<_> = perfect_matchings(4).unwrap().into_iter().map(|m| (m, 1)).collect();
        assert_eq!(reduce_matchings(&four, 4).unwrap().0.len(), full_rank(4));

        let six: Vec<_> = perfect_matchings(6).unwrap().into_iter().map(|m| (m, 1)).collect();
        let (out, _) = reduce_matchings(&six, 6).unwrap();
        assert_eq!(out.len(), full_rank(6));
        assert!(out.len() <= 8);
        assert!(oracles::check_matching_representative(&six, &out, 6).unwrap());

        assert!(reduce_matchings(&[(p(&[0, 1]), 1)], 2).is_err());
        assert!(reduce_matchings(&[(p(&[0, 0, 0]), 1)], 3).is_err());
    }

    fn random_table(rng: &mut ChaCha8Rng, t: usize) -> Vec<(Partition, Weight)> {
        let all = enumerate_partitions(t).unwrap();
        let mut rows = Vec::new();
        for q in all {
            if rng.random_bool(0.5) {
                rows.push((q, rng.random_range(0..20)));
            }
        }
        if rows.is_empty() {
            rows.push((Partition::whole(t), 1));
        }
        rows
    }

    #[test]
    fn reduce_is_representative_and_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for t in 1..=6 {
            for _ in 0..40 {
                let input = random_table(&mut rng, t);
                let (once, _) = reduce(&input, t).unwrap();
                assert!(once.len() <= 1 << (t - 1));
                assert!(oracles::check_representative(&input, &once, t).unwrap());
                let (twice, _) = reduce(&once, t).unwrap();
                assert!(oracles::check_representative(&input, &twice, t).unwrap());
            }
        }
    }

    #[test]
    fn dropped_rows_are_spanned_by_cheaper_kept_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for t in 2..=5 {
            for _ in 0..30 {
                let input = random_table(&mut rng, t);
                let (kept, _) = reduce(&input, t).unwrap();
                let cols = 1 << (t - 1);
                for (q, w) in &input {
                    if kept.contains(&(*q, *w)) {
                        continue;
                    }
                    let cheaper: Vec<_> = kept.iter().filter(|(_, x)| x <= w).collect();
                    let base = Gf2Matrix::from_rows(cols, cheaper.iter().map(|(k, _)| cut_row(k).unwrap()));
                    let mut with = base.clone();
                    with.push_row(&cut_row(q).unwrap());
                    assert_eq!(rank(&base), rank(&with), "{q:?} not spanned by cheaper rows");
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn reduce_respects_cap(seed in any::<u64>(), t in 1usize..=8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.random_range(1..300);
            let mut rows = std::collections::HashMap::new();
            for _ in 0..n {
                let raw: Vec<u8> = (0..t).map(|_| rng.random_range(0..t as u8)).collect();
                rows.insert(Partition::canonicalize(&raw), rng.random_range(0..50u64));
            }
            let rows: Vec<_> = rows.into_iter().collect();
            let (out, _) = reduce(&rows, t).unwrap();
            prop_assert!(out.len() <= 1 << (t - 1));
        }
    }
}
