use crate::error::{Error, Result};

/// Sparse binary matrix with both row and column adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBitMatrix {
    rows: usize,
    cols: usize,
    row_idx: Vec<Vec<usize>>,
    col_idx: Vec<Vec<usize>>,
}

impl SparseBitMatrix {
    /// Builds from per-row column lists. Lists are sorted; duplicates or
    /// out-of-range columns are rejected.
    pub fn from_row_lists(cols: usize, mut row_idx: Vec<Vec<usize>>) -> Result<SparseBitMatrix> {
        let mut col_idx = vec![Vec::new(); cols];
        for (r, list) in row_idx.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Construction(format!("duplicate entry in row {r}")));
            }
            for &c in list.iter() {
                if c >= cols {
                    return Err(Error::Construction(format!("column {c} out of range in row {r}")));
                }
                col_idx[c].push(r);
            }
        }
        Ok(SparseBitMatrix {
            rows: row_idx.len(),
            cols,
            row_idx,
            col_idx,
        })
    }

    pub fn from_dense(dense: &[Vec<u8>]) -> Result<SparseBitMatrix> {
        let cols = dense.first().map_or(0, Vec::len);
        let rows = dense
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &b)| b != 0).map(|(c, _)| c).collect())
            .collect();
        SparseBitMatrix::from_row_lists(cols, rows)
    }

    pub fn identity(n: usize) -> SparseBitMatrix {
        SparseBitMatrix::from_row_lists(n, (0..n).map(|i| vec![i]).collect()).expect("valid")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_idx[r]
    }

    pub fn col(&self, c: usize) -> &[usize] {
        &self.col_idx[c]
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row_idx[r].binary_search(&c).is_ok()
    }

    pub fn to_bit_rows(&self) -> Vec<Vec<u64>> {
        let words = self.cols.div_ceil(64);
        self.row_idx
            .iter()
            .map(|list| {
                let mut w = vec![0u64; words];
                for &c in list {
                    w[c / 64] |= 1 << (c % 64);
                }
                w
            })
            .collect()
    }

    /// H·x over GF(2) for a 0/1 vector.
    pub fn syndrome(&self, x: &[u8]) -> Vec<u8> {
        self.row_idx
            .iter()
            .map(|list| list.iter().fold(0u8, |acc, &c| acc ^ x[c]))
            .collect()
    }
}

/// GF(2) row rank by elimination.
pub fn rank_gf2(mat: &SparseBitMatrix) -> usize {
    let mut rows = mat.to_bit_rows();
    let mut rank = 0;
    for c in 0..mat.cols() {
        let (w, b) = (c / 64, 1u64 << (c % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            if row[w] & b != 0 {
                for (x, y) in row[w..].iter_mut().zip(&pivot[w..]) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}
