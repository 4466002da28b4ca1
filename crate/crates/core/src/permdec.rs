//! Permutation decoding of RS binary images.
//!
//! Each image row is permuted by its own affine column map
//! `π_i(j) = 2^k·j + s_i (mod n)`. Only maps that send every codeword image to a
//! codeword image are kept. Decoding moves unreliable bits into a couple of
//! symbol columns, erases them, fills them by erasure decoding, maps the result
//! back and keeps the candidate that best matches the soft input.

use std::collections::BTreeSet;

use crate::gf::GfElement;
use crate::rscode::{BinaryImage, BinaryParityMatrix, RsCode};

/// Per-row affine column permutation of an m×n image.
///
/// Destination convention: bit at column j of row i moves to column `map(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowAffinePerm {
    k: u32,
    shifts: Vec<usize>,
    n: usize,
}

impl RowAffinePerm {
    pub fn new(k: u32, shifts: Vec<usize>, n: usize) -> RowAffinePerm {
        let shifts = shifts.into_iter().map(|s| s % n).collect();
        RowAffinePerm { k, shifts, n }
    }

    pub fn identity(m: usize, n: usize) -> RowAffinePerm {
        RowAffinePerm::new(0, vec![0; m], n)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn shifts(&self) -> &[usize] {
        &self.shifts
    }

    /// Column multiplier 2^k mod n.
    pub fn multiplier(&self) -> usize {
        (1usize << self.k) % self.n
    }

    pub fn map(&self, row: usize, col: usize) -> usize {
        (self.multiplier() * col + self.shifts[row]) % self.n
    }

    /// The inverse map. Uses 2^m ≡ 1 (mod n) with m = number of rows.
    pub fn inverse(&self) -> RowAffinePerm {
        let m = self.shifts.len() as u32;
        let k_inv = (m - self.k % m) % m;
        let mult_inv = (1usize << k_inv) % self.n;
        let shifts = self
            .shifts
            .iter()
            .map(|&s| (self.n - (mult_inv * s) % self.n) % self.n)
            .collect();
        RowAffinePerm::new(k_inv, shifts, self.n)
    }

    /// Cycle decomposition of the column map of one row (fixed points omitted).
    pub fn cycles(&self, row: usize) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut j = self.map(row, start);
            while j != start {
                seen[j] = true;
                cyc.push(j);
                j = self.map(row, j);
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    pub fn is_bijection(&self) -> bool {
        (0..self.shifts.len()).all(|i| {
            let mut hit = vec![false; self.n];
            (0..self.n).all(|j| !std::mem::replace(&mut hit[self.map(i, j)], true))
        })
    }

    fn permute_masks(&self, rows: &[u64]) -> Vec<u64> {
        rows.iter()
            .enumerate()
            .map(|(i, &r)| {
                let mut out = 0u64;
                let mut bits = r;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    out |= 1 << self.map(i, j);
                    bits &= bits - 1;
                }
                out
            })
            .collect()
    }

    pub fn apply_bits(&self, img: &BinaryImage) -> BinaryImage {
        let mut out = BinaryImage::zeros(img.m(), img.n());
        for i in 0..img.m() {
            for j in 0..img.n() {
                out.set(i, self.map(i, j), img.get(i, j));
            }
        }
        out
    }

    pub fn apply(&self, y: &SoftImage) -> SoftImage {
        let mut out = SoftImage::zeros(y.m, y.n);
        for i in 0..y.m {
            for j in 0..y.n {
                out.set(i, self.map(i, j), y.get(i, j));
            }
        }
        out
    }
}

/// Per-bit LLRs of an m×n image. Positive means bit 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftImage {
    m: usize,
    n: usize,
    llr: Vec<f64>,
}

impl SoftImage {
    pub fn zeros(m: usize, n: usize) -> SoftImage {
        SoftImage {
            m,
            n,
            llr: vec![0.0; m * n],
        }
    }

    /// Row-major LLRs.
    pub fn new(m: usize, n: usize, llr: Vec<f64>) -> SoftImage {
        assert_eq!(llr.len(), m * n, "soft image size");
        SoftImage { m, n, llr }
    }

    /// BPSK-style soft image of a bit image: bit b maps to `(1 - 2b)·magnitude`.
    pub fn from_bits(img: &BinaryImage, magnitude: f64) -> SoftImage {
        let llr = img
            .as_flat()
            .iter()
            .map(|&b| if b == 0 { magnitude } else { -magnitude })
            .collect();
        SoftImage::new(img.m(), img.n(), llr)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.llr[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.llr[i * self.n + j] = v;
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.llr
    }

    pub fn hard_decision(&self) -> BinaryImage {
        let mut img = BinaryImage::zeros(self.m, self.n);
        for (idx, &v) in self.llr.iter().enumerate() {
            if v < 0.0 {
                img.set(idx / self.n, idx % self.n, 1);
            }
        }
        img
    }

    /// Symbol reliability: smallest |LLR| among the column's m bits.
    pub fn symbol_reliability(&self, j: usize) -> f64 {
        (0..self.m)
            .map(|i| self.get(i, j).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Σ (1 - 2·bit)·llr over the image.
    pub fn correlation(&self, img: &BinaryImage) -> f64 {
        img.as_flat()
            .iter()
            .zip(&self.llr)
            .map(|(&b, &l)| if b == 0 { l } else { -l })
            .sum()
    }
}

/// The η least reliable symbol columns, most unreliable first. Ties go to the
/// lower column index.
pub fn candidate_set(y: &SoftImage, eta: usize) -> Vec<usize> {
    let mut cols: Vec<(f64, usize)> = (0..y.n()).map(|j| (y.symbol_reliability(j), j)).collect();
    cols.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    cols.into_iter().take(eta.min(y.n())).map(|(_, j)| j).collect()
}

/// Basis of the binary image code: one image per (information symbol, bit).
fn basis_images(code: &RsCode) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity(code.k() * code.m());
    for t in 0..code.k() {
        for i in 0..code.m() {
            let mut info = vec![GfElement::ZERO; code.k()];
            info[t] = GfElement(1 << i);
            let c = code.encode(&info).expect("valid info");
            out.push(code.to_binary_image(&c).row_masks());
        }
    }
    out
}

/// Whether `g` maps every image in `basis` to a codeword image.
pub fn is_automorphism(g: &RowAffinePerm, h: &BinaryParityMatrix, basis: &[Vec<u64>]) -> bool {
    g.is_bijection() && basis.iter().all(|b| h.annihilates_masks(&g.permute_masks(b)))
}

/// Validated automorphisms of an RS binary image within the row-affine family.
#[derive(Debug, Clone)]
pub struct AutomorphismSet {
    m: usize,
    n: usize,
    perms: Vec<RowAffinePerm>,
    exhaustive: bool,
}

impl AutomorphismSet {
    pub fn perms(&self) -> &[RowAffinePerm] {
        &self.perms
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    /// True when every candidate tuple was tested (m ≤ 4).
    pub fn is_exhaustive(&self) -> bool {
        self.exhaustive
    }

    pub fn contains(&self, g: &RowAffinePerm) -> bool {
        self.perms.binary_search(g).is_ok()
    }

    /// Automorphisms sending column `col` of row `row` to column 0.
    pub fn anchored(&self, row: usize, col: usize) -> impl Iterator<Item = &RowAffinePerm> {
        self.perms.iter().filter(move |g| g.map(row, col) == 0)
    }
}

/// Enumerates row-affine automorphisms of the binary image of `code`.
///
/// For m ≤ 4 every `(k, s_1..s_m)` is tested. For larger fields the candidates
/// are the cosets `s_i = t + (2^k - 1)·i` seen in the exhaustive small-field sets,
/// each still validated; if none of a multiplier's candidates validate, only the
/// uniform shifts and pure Frobenius maps that pass are kept.
pub fn enumerate_automorphisms(code: &RsCode) -> AutomorphismSet {
    let (m, n) = (code.m(), code.n());
    let h = code
        .binary_parity_matrix()
        .expect("parity structure verified for supported fields");
    let basis = basis_images(code);
    let mut found = BTreeSet::new();
    let exhaustive = m <= 4;
    if exhaustive {
        let mut shifts = vec![0usize; m];
        for k in 0..m as u32 {
            loop {
                let g = RowAffinePerm::new(k, shifts.clone(), n);
                if is_automorphism(&g, &h, &basis) {
                    found.insert(g);
                }
                // odometer over n^m shift tuples
                let mut pos = 0;
                while pos < m {
                    shifts[pos] += 1;
                    if shifts[pos] < n {
                        break;
                    }
                    shifts[pos] = 0;
                    pos += 1;
                }
                if pos == m {
                    break;
                }
            }
        }
    } else {
        for k in 0..m as u32 {
            let step = ((1usize << k) - 1) % n;
            let mut any = false;
            for t in 0..n {
                let shifts = (0..m).map(|i| (t + step * i) % n).collect();
                let g = RowAffinePerm::new(k, shifts, n);
                if is_automorphism(&g, &h, &basis) {
                    found.insert(g);
                    any = true;
                }
            }
            if !any {
                for t in 0..n {
                    for g in [
                        RowAffinePerm::new(0, vec![t; m], n),
                        RowAffinePerm::new(k, vec![0; m], n),
                    ] {
                        if is_automorphism(&g, &h, &basis) {
                            found.insert(g);
                        }
                    }
                }
            }
        }
    }
    AutomorphismSet {
        m,
        n,
        perms: found.into_iter().collect(),
        exhaustive,
    }
}

#[derive(Debug, Clone)]
pub struct DecoderParams<'a> {
    /// Number of unreliable symbol columns tried as anchors.
    pub eta: usize,
    pub automorphisms: &'a AutomorphismSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PermDecodeOutput {
    pub codeword: Vec<GfElement>,
    pub image: BinaryImage,
    /// Set when the list was empty and `image` is the raw hard decision.
    pub failed: bool,
    pub list_size: usize,
}

/// One list-decoding candidate: which automorphism, which symbols were erased
/// in the permuted domain, and what came out.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub perm: RowAffinePerm,
    pub permuted: SoftImage,
    pub erased: (usize, usize),
    pub codeword: Vec<GfElement>,
}

/// Candidates explored for anchor column `j`.
pub fn candidates_for(
    code: &RsCode,
    y: &SoftImage,
    j: usize,
    autos: &AutomorphismSet,
) -> Vec<Candidate> {
    assert_eq!((y.m(), y.n()), (autos.m, autos.n), "soft image shape");
    let anchor_row = (0..y.m())
        .min_by(|&a, &b| y.get(a, j).abs().total_cmp(&y.get(b, j).abs()))
        .expect("m >= 1");
    // Rows whose weakest bit each perm gathers into column 0; best first.
    let weakest: Vec<usize> = (0..y.m())
        .map(|i| {
            (0..y.n())
                .min_by(|&a, &b| y.get(i, a).abs().total_cmp(&y.get(i, b).abs()))
                .expect("n >= 1")
        })
        .collect();
    let mut perms: Vec<&RowAffinePerm> = autos.anchored(anchor_row, j).collect();
    perms.sort_by_key(|g| {
        let gathered = weakest
            .iter()
            .enumerate()
            .filter(|&(i, &c)| g.map(i, c) == 0)
            .count();
        std::cmp::Reverse(gathered)
    });

    let mut out = Vec::with_capacity(perms.len());
    for g in perms {
        let yg = g.apply(y);
        let mut tau = (f64::INFINITY, 1usize);
        for jj in 1..yg.n() {
            for i in 0..yg.m() {
                let v = yg.get(i, jj).abs();
                if v < tau.0 {
                    tau = (v, jj);
                }
            }
        }
        let word = code.from_binary_image(&yg.hard_decision());
        if let Ok(cg) = code.decode_erasures(&word, 0, tau.1) {
            let back = g.inverse().apply_bits(&code.to_binary_image(&cg));
            out.push(Candidate {
                perm: g.clone(),
                permuted: yg,
                erased: (0, tau.1),
                codeword: code.from_binary_image(&back),
            });
        }
    }
    out
}

/// List decoding over the hard decision and the permuted erasure decodes of the
/// η least reliable columns; returns the candidate with the largest correlation.
pub fn permutation_decode(code: &RsCode, y: &SoftImage, params: &DecoderParams<'_>) -> PermDecodeOutput {
    let hard = y.hard_decision();
    let mut list: Vec<Vec<GfElement>> = Vec::new();
    if let Ok(c) = code.decode_hard(&code.from_binary_image(&hard)) {
        list.push(c);
    }
    for j in candidate_set(y, params.eta) {
        for cand in candidates_for(code, y, j, params.automorphisms) {
            debug_assert!(code.is_codeword(&cand.codeword));
            if !list.contains(&cand.codeword) {
                list.push(cand.codeword);
            }
        }
    }
    let best = list
        .iter()
        .map(|c| (y.correlation(&code.to_binary_image(c)), c))
        .fold(None::<(f64, &Vec<GfElement>)>, |acc, (s, c)| match acc {
            Some((bs, _)) if bs >= s => acc,
            _ => Some((s, c)),
        });
    match best {
        Some((_, c)) => PermDecodeOutput {
            codeword: c.clone(),
            image: code.to_binary_image(c),
            failed: false,
            list_size: list.len(),
        },
        None => PermDecodeOutput {
            codeword: code.from_binary_image(&hard),
            image: hard,
            failed: true,
            list_size: 0,
        },
    }
}
