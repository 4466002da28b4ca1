//! Product codes: RS binary images along the rows, LDPC codewords down the columns.
//!
//! The code array has `n2` rows and `n1` columns. Information rows (the LDPC
//! information positions) are split into groups of m rows; each complete group
//! holds the binary image of one RS codeword and leftover rows are zero. Every
//! column is then LDPC-encoded. Because every information row has even weight
//! and column encoding is GF(2)-linear, every row of the array has even weight.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::GfElement;
use crate::ldpc::{LdpcCode, DEFAULT_MLG_ITERATIONS, DEFAULT_SPA_ITERATIONS};
use crate::permdec::{enumerate_automorphisms, permutation_decode, AutomorphismSet, DecoderParams, SoftImage};
use crate::rscode::{BinaryImage, RsCode};

/// n2 × n1 bit array, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductArray {
    rows: usize,
    cols: usize,
    bits: Vec<u8>,
}

impl ProductArray {
    pub fn zeros(rows: usize, cols: usize) -> ProductArray {
        ProductArray {
            rows,
            cols,
            bits: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<ProductArray> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut bits = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    actual: r.len(),
                });
            }
            bits.extend_from_slice(r);
        }
        Ok(ProductArray {
            rows: rows.len(),
            cols,
            bits,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.bits[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, b: u8) {
        self.bits[r * self.cols + c] = b;
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.bits[r * self.cols + c] ^= 1;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.bits[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn set_column(&mut self, c: usize, col: &[u8]) {
        for (r, &b) in col.iter().enumerate() {
            self.set(r, c, b);
        }
    }

    /// Row-major bits; this is also the transmission order.
    pub fn as_flat(&self) -> &[u8] {
        &self.bits
    }

    pub fn from_flat(rows: usize, cols: usize, bits: Vec<u8>) -> ProductArray {
        assert_eq!(bits.len(), rows * cols, "array size");
        ProductArray { rows, cols, bits }
    }

    pub fn hamming_distance(&self, other: &ProductArray) -> usize {
        self.bits.iter().zip(&other.bits).filter(|(a, b)| a != b).count()
    }
}

/// Per-bit LLRs of a product array, row-major. Positive favours 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftArray {
    rows: usize,
    cols: usize,
    llr: Vec<f64>,
}

impl SoftArray {
    pub fn new(rows: usize, cols: usize, llr: Vec<f64>) -> SoftArray {
        assert_eq!(llr.len(), rows * cols, "soft array size");
        SoftArray { rows, cols, llr }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.llr[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.llr[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn set_column(&mut self, c: usize, col: &[f64]) {
        for (r, &v) in col.iter().enumerate() {
            self.set(r, c, v);
        }
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.llr
    }

    pub fn hard_decision(&self) -> ProductArray {
        ProductArray {
            rows: self.rows,
            cols: self.cols,
            bits: self.llr.iter().map(|&v| (v < 0.0) as u8).collect(),
        }
    }
}

/// Which positions the column step of error detection keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdaRule {
    /// Rows in the support of every failed check.
    #[default]
    FailedIntersection,
    /// As above, minus rows covered by any satisfied check.
    ExcludeSatisfied,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnDetection {
    pub column: usize,
    pub failed_checks: Vec<usize>,
    /// Rows common to all failed checks (before intersecting with odd rows).
    pub candidates: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdaReport {
    /// Rows with odd weight.
    pub odd_rows: Vec<usize>,
    /// Columns with at least one failed check.
    pub columns: Vec<ColumnDetection>,
    /// Detected (row, column) error positions, column-major order.
    pub positions: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdaStatus {
    /// Input hard decision was already a product codeword.
    Clean,
    /// Output passes every row and column check.
    Corrected,
    ResidualErrors,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdaParams {
    /// Unreliable symbol columns tried by the permutation decoder.
    pub eta: usize,
    /// Error detection / SPA rounds.
    pub outer_rounds: usize,
    /// Majority-logic / RS hard rounds.
    pub hard_rounds: usize,
    pub spa_max_iter: usize,
    pub mlg_max_iter: usize,
    pub eda_rule: EdaRule,
    /// Reject any stage that increases the number of unsatisfied column checks.
    pub stage_guard: bool,
}

impl Default for PdaParams {
    fn default() -> PdaParams {
        PdaParams {
            eta: 4,
            outer_rounds: 3,
            hard_rounds: 10,
            spa_max_iter: DEFAULT_SPA_ITERATIONS,
            mlg_max_iter: DEFAULT_MLG_ITERATIONS,
            eda_rule: EdaRule::FailedIntersection,
            stage_guard: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PdaStats {
    pub outer_rounds: usize,
    /// Positions erased by error detection in each outer round.
    pub detections: Vec<usize>,
    pub spa_iterations: usize,
    pub spa_failed_columns: usize,
    pub rs_groups_changed: usize,
    pub hard_rounds: usize,
    pub rejected_stages: usize,
    /// Unsatisfied column checks after each stage (input first).
    pub unsatisfied_trace: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdaOutput {
    pub array: ProductArray,
    pub status: PdaStatus,
    pub stats: PdaStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Audit {
    pub unsatisfied_column_checks: usize,
    pub odd_rows: usize,
    pub invalid_groups: usize,
}

impl Audit {
    pub fn is_valid(&self) -> bool {
        self.unsatisfied_column_checks == 0 && self.odd_rows == 0 && self.invalid_groups == 0
    }
}

/// RS(n1, n1-2) binary images × LDPC(n2, k2).
#[derive(Debug, Clone)]
pub struct ProductCode {
    rs: RsCode,
    ldpc: LdpcCode,
    autos: AutomorphismSet,
    /// Array rows of each RS image group, m per group.
    groups: Vec<Vec<usize>>,
    pad_rows: Vec<usize>,
}

impl ProductCode {
    pub fn new(rs: RsCode, ldpc: LdpcCode) -> ProductCode {
        let m = rs.m();
        let info = ldpc.info_positions();
        let n_images = info.len() / m;
        let groups = info.chunks_exact(m).take(n_images).map(<[usize]>::to_vec).collect();
        let pad_rows = info[n_images * m..].to_vec();
        let autos = enumerate_automorphisms(&rs);
        ProductCode {
            rs,
            ldpc,
            autos,
            groups,
            pad_rows,
        }
    }

    /// RS(2^m - 1, 2^m - 3) × PG(2, 2^s).
    pub fn with_pg(m: u32, s: u32) -> Result<ProductCode> {
        Ok(ProductCode::new(RsCode::new(m)?, LdpcCode::pg(s)?))
    }

    /// RS(31, 29) over GF(32) × PG(2, 32) LDPC (1057, 813).
    pub fn c_pg() -> ProductCode {
        ProductCode::with_pg(5, 5).expect("supported parameters")
    }

    pub fn rs(&self) -> &RsCode {
        &self.rs
    }

    pub fn ldpc(&self) -> &LdpcCode {
        &self.ldpc
    }

    pub fn automorphisms(&self) -> &AutomorphismSet {
        &self.autos
    }

    pub fn n1(&self) -> usize {
        self.rs.n()
    }

    pub fn n2(&self) -> usize {
        self.ldpc.n()
    }

    pub fn length(&self) -> usize {
        self.n1() * self.n2()
    }

    pub fn n_images(&self) -> usize {
        self.groups.len()
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn pad_rows(&self) -> &[usize] {
        &self.pad_rows
    }

    /// Information bits per array: `n_images · m · (n1 - 2)`.
    pub fn payload_bits(&self) -> usize {
        self.n_images() * self.rs.m() * self.rs.k()
    }

    pub fn rate(&self) -> f64 {
        self.payload_bits() as f64 / self.length() as f64
    }

    /// Two-step encoding. Payload order: image, then information symbol
    /// (positions 2..n1 of the RS word), then bit within the symbol.
    pub fn encode(&self, payload: &[u8]) -> Result<ProductArray> {
        if payload.len() != self.payload_bits() {
            return Err(Error::LengthMismatch {
                expected: self.payload_bits(),
                actual: payload.len(),
            });
        }
        let (m, k1) = (self.rs.m(), self.rs.k());
        let mut arr = ProductArray::zeros(self.n2(), self.n1());
        for (g, rows) in self.groups.iter().enumerate() {
            let chunk = &payload[g * m * k1..(g + 1) * m * k1];
            let info = chunk
                .chunks_exact(m)
                .map(|bits| self.rs.field().from_bits(bits))
                .collect::<Result<Vec<GfElement>>>()?;
            let img = self.rs.to_binary_image(&self.rs.encode(&info)?);
            self.write_group(&mut arr, rows, &img);
        }
        let info_rows = self.ldpc.info_positions();
        for c in 0..self.n1() {
            let info: Vec<u8> = info_rows.iter().map(|&r| arr.get(r, c)).collect();
            arr.set_column(c, &self.ldpc.encode(&info)?);
        }
        Ok(arr)
    }

    /// Inverse of the payload layout used by [`encode`](Self::encode).
    pub fn extract_payload(&self, arr: &ProductArray) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.payload_bits());
        for rows in &self.groups {
            for j in 2..self.n1() {
                for &r in rows {
                    out.push(arr.get(r, j));
                }
            }
        }
        out
    }

    fn write_group(&self, arr: &mut ProductArray, rows: &[usize], img: &BinaryImage) {
        for (i, &r) in rows.iter().enumerate() {
            for j in 0..self.n1() {
                arr.set(r, j, img.get(i, j));
            }
        }
    }

    pub fn group_image(&self, arr: &ProductArray, g: usize) -> BinaryImage {
        let rows: Vec<Vec<u8>> = self.groups[g].iter().map(|&r| arr.row(r).to_vec()).collect();
        BinaryImage::from_rows(&rows).expect("rectangular")
    }

    fn group_soft(&self, soft: &SoftArray, g: usize) -> SoftImage {
        let llr = self.groups[g]
            .iter()
            .flat_map(|&r| (0..self.n1()).map(move |j| soft.get(r, j)))
            .collect();
        SoftImage::new(self.rs.m(), self.n1(), llr)
    }

    pub fn unsatisfied_column_checks(&self, arr: &ProductArray) -> usize {
        (0..self.n1())
            .map(|c| self.ldpc.unsatisfied_checks(&arr.column(c)))
            .sum()
    }

    pub fn audit(&self, arr: &ProductArray) -> Audit {
        Audit {
            unsatisfied_column_checks: self.unsatisfied_column_checks(arr),
            odd_rows: (0..arr.rows())
                .filter(|&r| arr.row(r).iter().fold(0, |a, &b| a ^ b) == 1)
                .count(),
            invalid_groups: (0..self.n_images())
                .filter(|&g| {
                    let c = self.rs.from_binary_image(&self.group_image(arr, g));
                    !self.rs.is_codeword(&c)
                })
                .count()
                + self.pad_rows.iter().filter(|&&r| arr.row(r).iter().any(|&b| b != 0)).count(),
        }
    }

    pub fn is_codeword(&self, arr: &ProductArray) -> bool {
        self.audit(arr).is_valid()
    }

    /// Error detection from row checksums and column parity checks.
    pub fn eda(&self, arr: &ProductArray) -> EdaReport {
        self.eda_with_rule(arr, EdaRule::FailedIntersection)
    }

    pub fn eda_with_rule(&self, arr: &ProductArray, rule: EdaRule) -> EdaReport {
        let h = self.ldpc.h();
        let odd_rows: Vec<usize> = (0..arr.rows())
            .filter(|&r| arr.row(r).iter().fold(0, |a, &b| a ^ b) == 1)
            .collect();
        let mut is_odd = vec![false; arr.rows()];
        for &r in &odd_rows {
            is_odd[r] = true;
        }
        let mut report = EdaReport {
            odd_rows,
            ..EdaReport::default()
        };
        let mut count = vec![0usize; arr.rows()];
        let mut covered = vec![false; arr.rows()];
        for c in 0..arr.cols() {
            let col = arr.column(c);
            let syn = h.syndrome(&col);
            let failed: Vec<usize> = (0..h.rows()).filter(|&k| syn[k] == 1).collect();
            if failed.is_empty() {
                continue;
            }
            count.iter_mut().for_each(|x| *x = 0);
            for &k in &failed {
                for &r in h.row(k) {
                    count[r] += 1;
                }
            }
            let mut candidates: Vec<usize> = (0..arr.rows()).filter(|&r| count[r] == failed.len()).collect();
            if rule == EdaRule::ExcludeSatisfied {
                covered.iter_mut().for_each(|x| *x = false);
                for k in (0..h.rows()).filter(|&k| syn[k] == 0) {
                    for &r in h.row(k) {
                        covered[r] = true;
                    }
                }
                candidates.retain(|&r| !covered[r]);
            }
            for &r in &candidates {
                if is_odd[r] {
                    report.positions.push((r, c));
                }
            }
            report.columns.push(ColumnDetection {
                column: c,
                failed_checks: failed,
                candidates,
            });
        }
        report
    }

    /// Sum-product decoding of every column, without any row processing.
    pub fn spa_only(&self, soft: &SoftArray, max_iter: usize) -> ProductArray {
        let cols: Vec<Vec<u8>> = (0..self.n1())
            .into_par_iter()
            .map(|c| self.ldpc.spa_decode(&soft.column(c), max_iter).bits)
            .collect();
        let mut arr = ProductArray::zeros(self.n2(), self.n1());
        for (c, col) in cols.iter().enumerate() {
            arr.set_column(c, col);
        }
        arr
    }

    /// Product decoding: detect and erase, SPA on columns, permutation decoding
    /// of RS rows, then alternating majority-logic column / RS row hard decoding.
    pub fn pda(&self, input: &SoftArray, params: &PdaParams) -> PdaOutput {
        assert_eq!((input.rows(), input.cols()), (self.n2(), self.n1()), "soft array shape");
        let mut stats = PdaStats::default();
        let mut hard = input.hard_decision();
        let unsat0 = self.unsatisfied_column_checks(&hard);
        stats.unsatisfied_trace.push(unsat0);
        if unsat0 == 0 && self.is_codeword(&hard) {
            return PdaOutput {
                array: hard,
                status: PdaStatus::Clean,
                stats,
            };
        }

        // (a) erase detected positions, SPA every column
        let mut soft = input.clone();
        let mut unsat = unsat0;
        for _ in 0..params.outer_rounds {
            stats.outer_rounds += 1;
            let det = self.eda_with_rule(&hard, params.eda_rule);
            stats.detections.push(det.positions.len());
            let mut erased = soft.clone();
            for &(r, c) in &det.positions {
                erased.set(r, c, 0.0);
            }
            let outs: Vec<_> = (0..self.n1())
                .into_par_iter()
                .map(|c| self.ldpc.spa_decode(&erased.column(c), params.spa_max_iter))
                .collect();
            let mut next_soft = erased;
            let mut next_hard = hard.clone();
            stats.spa_failed_columns = 0;
            for (c, o) in outs.iter().enumerate() {
                stats.spa_iterations += o.iterations;
                stats.spa_failed_columns += (!o.converged) as usize;
                next_soft.set_column(c, &o.posterior);
                next_hard.set_column(c, &o.bits);
            }
            let next_unsat = self.unsatisfied_column_checks(&next_hard);
            if params.stage_guard && next_unsat > unsat {
                stats.rejected_stages += 1;
            } else {
                soft = next_soft;
                hard = next_hard;
                unsat = next_unsat;
            }
            stats.unsatisfied_trace.push(unsat);
            if det.positions.is_empty() {
                break;
            }
        }

        // (b) RS rows from the soft state; zero LLRs are erasures
        if !self.is_codeword(&hard) {
            let mut next = hard.clone();
            let mut erased: Vec<bool> = soft.as_flat().iter().map(|&v| v == 0.0).collect();
            let n1 = self.n1();
            let decoded: Vec<Option<BinaryImage>> = (0..self.n_images())
                .into_par_iter()
                .map(|g| self.decode_group(&soft, &hard, g, params.eta))
                .collect();
            for (g, img) in decoded.into_iter().enumerate() {
                if let Some(img) = img {
                    if img != self.group_image(&hard, g) {
                        stats.rs_groups_changed += 1;
                    }
                    self.write_group(&mut next, &self.groups[g], &img);
                    for &r in &self.groups[g] {
                        erased[r * n1..(r + 1) * n1].iter_mut().for_each(|e| *e = false);
                    }
                }
            }
            // pad rows are known zeros, never unknowns
            for &r in &self.pad_rows {
                for c in 0..n1 {
                    next.set(r, c, 0);
                    erased[r * n1 + c] = false;
                }
            }
            for c in 0..n1 {
                let mask: Vec<bool> = (0..self.n2()).map(|r| erased[r * n1 + c]).collect();
                if mask.iter().any(|&e| e) {
                    let mut col = next.column(c);
                    if self.ldpc.fill_erasures(&mut col, &mask) {
                        next.set_column(c, &col);
                    }
                }
            }
            let next_unsat = self.unsatisfied_column_checks(&next);
            if params.stage_guard && next_unsat > unsat {
                stats.rejected_stages += 1;
            } else {
                hard = next;
                unsat = next_unsat;
            }
            stats.unsatisfied_trace.push(unsat);
        }

        // (c) majority logic on columns, hard RS on rows
        for _ in 0..params.hard_rounds {
            if self.is_codeword(&hard) {
                break;
            }
            stats.hard_rounds += 1;
            let mut changed = false;

            let cols: Vec<(Vec<u8>, bool)> = (0..self.n1())
                .into_par_iter()
                .map(|c| self.ldpc.mlg_decode(&hard.column(c), params.mlg_max_iter))
                .collect();
            if cols.iter().any(|(_, ch)| *ch) {
                let mut next = hard.clone();
                for (c, (col, _)) in cols.iter().enumerate() {
                    next.set_column(c, col);
                }
                let next_unsat = self.unsatisfied_column_checks(&next);
                if params.stage_guard && next_unsat > unsat {
                    stats.rejected_stages += 1;
                } else {
                    changed |= next != hard;
                    hard = next;
                    unsat = next_unsat;
                }
                stats.unsatisfied_trace.push(unsat);
            }

            let mut next = hard.clone();
            let mut rs_changed = false;
            for g in 0..self.n_images() {
                let img = self.group_image(&hard, g);
                let word = self.rs.from_binary_image(&img);
                if let Ok(c) = self.rs.decode_hard(&word) {
                    if c != word {
                        self.write_group(&mut next, &self.groups[g], &self.rs.to_binary_image(&c));
                        rs_changed = true;
                    }
                }
            }
            if rs_changed {
                let next_unsat = self.unsatisfied_column_checks(&next);
                if params.stage_guard && next_unsat > unsat {
                    stats.rejected_stages += 1;
                } else {
                    changed = true;
                    hard = next;
                    unsat = next_unsat;
                }
                stats.unsatisfied_trace.push(unsat);
            }
            if !changed {
                break;
            }
        }

        let status = if self.is_codeword(&hard) {
            PdaStatus::Corrected
        } else {
            PdaStatus::ResidualErrors
        };
        PdaOutput {
            array: hard,
            status,
            stats,
        }
    }

    /// RS decoding of one image group. One or two symbols holding zero LLRs are
    /// filled by erasure decoding; otherwise the permutation decoder runs on
    /// the soft values. `None` leaves the group as it is.
    fn decode_group(&self, soft: &SoftArray, hard: &ProductArray, g: usize, eta: usize) -> Option<BinaryImage> {
        let y = self.group_soft(soft, g);
        let erased_cols: Vec<usize> = (0..self.n1())
            .filter(|&j| (0..self.rs.m()).any(|i| y.get(i, j) == 0.0))
            .collect();
        let word = self.rs.from_binary_image(&self.group_image(hard, g));
        if (1..=2).contains(&erased_cols.len()) {
            if let Ok(c) = self.rs.decode_erasure_set(&word, &erased_cols) {
                return Some(self.rs.to_binary_image(&c));
            }
        }
        if self.rs.is_codeword(&word) {
            return None;
        }
        let params = DecoderParams {
            eta,
            automorphisms: &self.autos,
        };
        let out = permutation_decode(&self.rs, &y, &params);
        (!out.failed).then_some(out.image)
    }
}
