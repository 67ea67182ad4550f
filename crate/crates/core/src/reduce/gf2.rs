/// Dense bit-packed matrix over GF(2), row-major, 64 columns per word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

/// Columns beyond this are refused (2^30).
pub const MAX_COLUMNS: usize = 1 << 30;

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols <= MAX_COLUMNS, "column count {cols} over guard");
        let words = cols.div_ceil(64);
        Gf2Matrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn from_rows(cols: usize, rows: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let mut m = Self::zeros(0, cols);
        for r in rows {
            m.push_row(&r);
        }
        m
    }

    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.words, "row length mismatch");
        if let Some(&last) = row.last() {
            let spare = self.words * 64 - self.cols;
            debug_assert!(spare == 0 || last >> (64 - spare) == 0, "bits past last column");
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn words_per_row(&self) -> usize {
        self.words
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.row(i)[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        let w = &mut self.data[i * self.words + j / 64];
        if bit {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }
}

/// Row basis by forward elimination. Rows are visited in `order`; a row is
/// kept iff it is independent of the rows kept before it, so earlier rows
/// are always preferred. Returns the kept row indices (in visiting order) and
/// the number of word XORs performed.
pub fn gaussian_row_basis(m: &Gf2Matrix, order: &[usize]) -> (Vec<usize>, u64) {
    let words = m.words;
    // basis rows keyed by their lowest set column
    let mut pivot_of: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut basis: Vec<u64> = Vec::new();
    let mut kept = Vec::new();
    let mut xors = 0u64;
    let mut scratch = vec![0u64; words];

    for &i in order {
        scratch.copy_from_slice(m.row(i));
        let mut w = 0;
        let independent = loop {
            while w < words && scratch[w] == 0 {
                w += 1;
            }
            if w == words {
                break false;
            }
            let col = w * 64 + scratch[w].trailing_zeros() as usize;
            match pivot_of.get(&col) {
                Some(&b) => {
                    let src = &basis[b * words..(b + 1) * words];
                    for k in w..words {
                        scratch[k] ^= src[k];
                    }
                    xors += (words - w) as u64;
                }
                None => {
                    pivot_of.insert(col, kept.len());
                    break true;
                }
            }
        };
        if independent {
            basis.extend_from_slice(&scratch);
            kept.push(i);
        }
    }
    (kept, xors)
}

/// Rank over GF(2).
pub fn rank(m: &Gf2Matrix) -> usize {
    let order: Vec<usize> = (0..m.rows()).collect();
    gaussian_row_basis(m, &order).0.len()
}
