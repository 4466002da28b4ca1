//! Binary LDPC codes: projective-geometry and random 4-cycle-free
//! constructions, systematic encoding, sum-product and majority-logic decoding.

mod decode;
pub mod pg;
pub mod random;
pub mod sparse;

pub use decode::{SpaOutput, DEFAULT_LLR_CLIP, DEFAULT_MLG_ITERATIONS, DEFAULT_SPA_ITERATIONS};
pub use sparse::{rank_gf2, SparseBitMatrix};

use crate::error::{Error, Result};

/// Edge layout for message passing: edges grouped by check.
#[derive(Debug, Clone)]
pub(crate) struct TannerGraph {
    pub check_ptr: Vec<usize>,
    pub edge_var: Vec<usize>,
    pub var_edges: Vec<Vec<usize>>,
}

impl TannerGraph {
    fn new(h: &SparseBitMatrix) -> TannerGraph {
        let mut check_ptr = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::with_capacity(h.nnz());
        let mut var_edges = vec![Vec::new(); h.cols()];
        check_ptr.push(0);
        for c in 0..h.rows() {
            for &v in h.row(c) {
                var_edges[v].push(edge_var.len());
                edge_var.push(v);
            }
            check_ptr.push(edge_var.len());
        }
        TannerGraph {
            check_ptr,
            edge_var,
            var_edges,
        }
    }
}

/// Systematic encoder from the reduced row echelon form of H.
///
/// Pivots are taken right to left, so information positions sit at the low
/// indices whenever H allows it.
#[derive(Debug, Clone)]
struct Encoder {
    /// (pivot column, reduced row) pairs.
    pivots: Vec<(usize, Vec<u64>)>,
    info_positions: Vec<usize>,
}

impl Encoder {
    fn new(h: &SparseBitMatrix) -> Encoder {
        let n = h.cols();
        let mut rows = h.to_bit_rows();
        let mut pivot_cols = Vec::new();
        let mut rank = 0;
        for c in (0..n).rev() {
            let (w, b) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = std::mem::take(&mut rows[rank]);
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & b != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            rows[rank] = pivot;
            pivot_cols.push(c);
            rank += 1;
        }
        rows.truncate(rank);
        let mut is_pivot = vec![false; n];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        Encoder {
            pivots: pivot_cols.into_iter().zip(rows).collect(),
            info_positions: (0..n).filter(|&c| !is_pivot[c]).collect(),
        }
    }

    fn encode(&self, n: usize, info: &[u8]) -> Vec<u8> {
        let mut c = vec![0u8; n];
        let mut packed = vec![0u64; n.div_ceil(64)];
        for (&p, &b) in self.info_positions.iter().zip(info) {
            c[p] = b & 1;
            packed[p / 64] |= ((b & 1) as u64) << (p % 64);
        }
        for (col, row) in &self.pivots {
            let parity = row
                .iter()
                .zip(&packed)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1;
            c[*col] = parity as u8;
        }
        c
    }
}

/// A binary LDPC code given by its parity-check matrix.
#[derive(Debug, Clone)]
pub struct LdpcCode {
    h: SparseBitMatrix,
    graph: TannerGraph,
    encoder: Encoder,
    col_weight: usize,
    row_weight: usize,
    d_min_claimed: Option<usize>,
    label: String,
}

impl LdpcCode {
    pub fn from_parity_matrix(h: SparseBitMatrix, d_min_claimed: Option<usize>, label: impl Into<String>) -> LdpcCode {
        let col_weight = (0..h.cols()).map(|c| h.col(c).len()).max().unwrap_or(0);
        let row_weight = (0..h.rows()).map(|r| h.row(r).len()).max().unwrap_or(0);
        LdpcCode {
            graph: TannerGraph::new(&h),
            encoder: Encoder::new(&h),
            h,
            col_weight,
            row_weight,
            d_min_claimed,
            label: label.into(),
        }
    }

    /// Cyclic PG(2, 2^s) code, s in 2..=5. Its minimum distance 2^s + 2 is
    /// recorded as metadata, not verified.
    pub fn pg(s: u32) -> Result<LdpcCode> {
        let h = pg::pg_incidence(s)?;
        Ok(LdpcCode::from_parity_matrix(
            h,
            Some((1 << s) + 2),
            format!("pg2-{}", 1u32 << s),
        ))
    }

    /// Random 4-cycle-free code with n - k checks of column weight `col_weight`.
    /// The resulting dimension is at least `k` (more if checks are dependent).
    pub fn random(n: usize, k: usize, col_weight: usize, seed: u64) -> Result<LdpcCode> {
        let h = random::random_parity_matrix(n, k, col_weight, seed)?;
        Ok(LdpcCode::from_parity_matrix(
            h,
            None,
            format!("random-{n}-{k}-w{col_weight}"),
        ))
    }

    pub fn h(&self) -> &SparseBitMatrix {
        &self.h
    }

    pub(crate) fn graph(&self) -> &TannerGraph {
        &self.graph
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn k(&self) -> usize {
        self.encoder.info_positions.len()
    }

    pub fn rank(&self) -> usize {
        self.encoder.pivots.len()
    }

    /// Largest column weight (equal to every column's weight for regular codes).
    pub fn col_weight(&self) -> usize {
        self.col_weight
    }

    pub fn row_weight(&self) -> usize {
        self.row_weight
    }

    pub fn d_min_claimed(&self) -> Option<usize> {
        self.d_min_claimed
    }

    /// Codeword positions carrying information bits, ascending.
    pub fn info_positions(&self) -> &[usize] {
        &self.encoder.info_positions
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                actual: info.len(),
            });
        }
        Ok(self.encoder.encode(self.n(), info))
    }

    /// One generator row per information position.
    pub fn generator_rows(&self) -> Vec<Vec<u8>> {
        (0..self.k())
            .map(|i| {
                let mut info = vec![0u8; self.k()];
                info[i] = 1;
                self.encoder.encode(self.n(), &info)
            })
            .collect()
    }

    pub fn syndrome(&self, bits: &[u8]) -> Vec<u8> {
        self.h.syndrome(bits)
    }

    pub fn unsatisfied_checks(&self, bits: &[u8]) -> usize {
        (0..self.h.rows())
            .filter(|&r| self.h.row(r).iter().fold(0u8, |a, &c| a ^ bits[c]) == 1)
            .count()
    }

    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        (0..self.h.rows()).all(|r| self.h.row(r).iter().fold(0u8, |a, &c| a ^ bits[c]) == 0)
    }

    /// Solves for the positions flagged in `erased` from the others. Returns
    /// false and leaves `bits` untouched when the solution is not unique.
    pub fn fill_erasures(&self, bits: &mut [u8], erased: &[bool]) -> bool {
        let unknowns: Vec<usize> = (0..self.n()).filter(|&v| erased[v]).collect();
        if unknowns.is_empty() {
            return true;
        }
        let mut slot = vec![usize::MAX; self.n()];
        for (i, &v) in unknowns.iter().enumerate() {
            slot[v] = i;
        }
        let u = unknowns.len();
        let words = (u + 1).div_ceil(64);
        // row layout: unknown coefficients in bits 0..u, right-hand side in bit u
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for r in 0..self.h.rows() {
            let mut row = vec![0u64; words];
            let mut rhs = 0u8;
            let mut any = false;
            for &v in self.h.row(r) {
                if erased[v] {
                    row[slot[v] / 64] ^= 1 << (slot[v] % 64);
                    any = true;
                } else {
                    rhs ^= bits[v];
                }
            }
            if any {
                row[u / 64] |= (rhs as u64) << (u % 64);
                rows.push(row);
            }
        }
        let mut rank = 0;
        for c in 0..u {
            let (w, b) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
                return false;
            };
            rows.swap(rank, p);
            let pivot = std::mem::take(&mut rows[rank]);
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & b != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            rows[rank] = pivot;
            rank += 1;
        }
        // remaining rows must be consistent
        if rows[rank..].iter().any(|r| (r[u / 64] >> (u % 64)) & 1 == 1) {
            return false;
        }
        for (i, &v) in unknowns.iter().enumerate() {
            bits[v] = ((rows[i][u / 64] >> (u % 64)) & 1) as u8;
        }
        true
    }
}
