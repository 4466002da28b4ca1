//! Double-parity (n, n-2, 3) Reed-Solomon codes over GF(2^m) and their binary images.
//!
//! The generator roots are 1 and α, so every codeword satisfies `c(1) = 0` and
//! `c(α) = 0`. Encoding is systematic with the two parity symbols in positions
//! 0 and 1 and information in positions `2..n`.

use crate::error::{Error, Result};
use crate::gf::{Field, GfElement};

/// Shift vectors for the polynomial basis, indexed by m-3.
const U_VECTORS: [&[usize]; 4] = [
    &[2, 1, 0],
    &[2, 1, 0, 14],
    &[30, 29, 28, 27, 26],
    &[4, 3, 2, 1, 0, 62],
];

/// Why a hard or erasure decode gave up. Not fatal: product decoding keeps going.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeFailure {
    /// More errors than the decoder can handle were detected.
    Uncorrectable,
    /// Erasure positions out of range or repeated.
    BadErasures,
}

#[derive(Debug, Clone)]
pub struct RsCode {
    field: Field,
}

impl RsCode {
    pub fn new(m: u32) -> Result<RsCode> {
        Ok(RsCode {
            field: Field::new(m)?,
        })
    }

    pub fn from_field(field: Field) -> RsCode {
        RsCode { field }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.field.m() as usize
    }

    pub fn n(&self) -> usize {
        self.field.n()
    }

    pub fn k(&self) -> usize {
        self.n() - 2
    }

    /// Table shift vector u for this field.
    pub fn u_vector(&self) -> &'static [usize] {
        U_VECTORS[self.m() - 3]
    }

    fn check_symbols(&self, word: &[GfElement]) -> Result<()> {
        match word.iter().find(|s| !self.field.contains(**s)) {
            Some(s) => Err(Error::SymbolOutOfField(s.0)),
            None => Ok(()),
        }
    }

    /// Systematic encoding: `info` lands in positions `2..n`.
    pub fn encode(&self, info: &[GfElement]) -> Result<Vec<GfElement>> {
        if info.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                actual: info.len(),
            });
        }
        self.check_symbols(info)?;
        let f = &self.field;
        let mut c = vec![GfElement::ZERO; self.n()];
        c[2..].copy_from_slice(info);
        let (a, b) = self.syndromes(&c);
        // c0 + c1 = a, c0 + c1·α = b
        let one_plus_alpha = GfElement::ONE + f.alpha_pow(1);
        let c1 = f.div(a + b, one_plus_alpha).expect("1+α is nonzero");
        c[1] = c1;
        c[0] = a + c1;
        Ok(c)
    }

    /// `(S0, S1) = (r(1), r(α))`.
    pub fn syndromes(&self, word: &[GfElement]) -> (GfElement, GfElement) {
        let f = &self.field;
        let mut s0 = GfElement::ZERO;
        let mut s1 = GfElement::ZERO;
        for (j, &r) in word.iter().enumerate() {
            s0 += r;
            s1 += f.mul(r, f.alpha_pow(j as i64));
        }
        (s0, s1)
    }

    pub fn is_codeword(&self, word: &[GfElement]) -> bool {
        word.len() == self.n() && self.syndromes(word) == (GfElement::ZERO, GfElement::ZERO)
    }

    /// Corrects at most one symbol error.
    ///
    /// Panics if `word.len() != n`.
    pub fn decode_hard(&self, word: &[GfElement]) -> std::result::Result<Vec<GfElement>, DecodeFailure> {
        assert_eq!(word.len(), self.n(), "word length");
        let f = &self.field;
        let (s0, s1) = self.syndromes(word);
        if s0.is_zero() && s1.is_zero() {
            return Ok(word.to_vec());
        }
        if s0.is_zero() || s1.is_zero() {
            return Err(DecodeFailure::Uncorrectable);
        }
        let ratio = f.div(s1, s0).expect("s0 nonzero");
        let p = f.log(ratio).expect("ratio nonzero");
        let mut out = word.to_vec();
        out[p] += s0;
        Ok(out)
    }

    /// Fills erased positions `e1`, `e2` so the word becomes a codeword.
    ///
    /// Two erasures use all the redundancy, so this always succeeds for valid
    /// positions; errors elsewhere produce a wrong codeword, not a failure.
    pub fn decode_erasures(
        &self,
        word: &[GfElement],
        e1: usize,
        e2: usize,
    ) -> std::result::Result<Vec<GfElement>, DecodeFailure> {
        self.decode_erasure_set(word, &[e1, e2])
    }

    /// Erasure decoding for up to two erased positions. With zero or one erasure
    /// the remaining redundancy is used to verify the result.
    pub fn decode_erasure_set(
        &self,
        word: &[GfElement],
        erased: &[usize],
    ) -> std::result::Result<Vec<GfElement>, DecodeFailure> {
        assert_eq!(word.len(), self.n(), "word length");
        let n = self.n();
        let f = &self.field;
        if erased.len() > 2 || erased.iter().any(|&e| e >= n) {
            return Err(DecodeFailure::BadErasures);
        }
        if erased.len() == 2 && erased[0] == erased[1] {
            return Err(DecodeFailure::BadErasures);
        }
        let mut out = word.to_vec();
        for &e in erased {
            out[e] = GfElement::ZERO;
        }
        let (s0, s1) = self.syndromes(&out);
        match *erased {
            [] => {}
            [e] => {
                out[e] = s0;
            }
            [e1, e2] => {
                // x1 + x2 = s0, x1·α^e1 + x2·α^e2 = s1
                let a1 = f.alpha_pow(e1 as i64);
                let a2 = f.alpha_pow(e2 as i64);
                let x2 = f.div(s1 + f.mul(s0, a1), a1 + a2).expect("distinct positions");
                out[e1] = s0 + x2;
                out[e2] = x2;
            }
            _ => unreachable!(),
        }
        if self.is_codeword(&out) {
            Ok(out)
        } else {
            Err(DecodeFailure::Uncorrectable)
        }
    }

    pub fn to_binary_image(&self, c: &[GfElement]) -> BinaryImage {
        let (m, n) = (self.m(), self.n());
        assert_eq!(c.len(), n, "word length");
        let mut bits = vec![0u8; m * n];
        for (j, s) in c.iter().enumerate() {
            for i in 0..m {
                bits[i * n + j] = (s.0 >> i) & 1;
            }
        }
        BinaryImage { m, n, bits }
    }

    pub fn from_binary_image(&self, img: &BinaryImage) -> Vec<GfElement> {
        assert_eq!((img.m, img.n), (self.m(), self.n()), "image shape");
        (0..img.n)
            .map(|j| {
                let mut v = 0u8;
                for i in 0..img.m {
                    v |= img.get(i, j) << i;
                }
                GfElement(v)
            })
            .collect()
    }

    /// Binary parity-check matrix of the binary image, built from the root
    /// constraints and then checked for the circulant idempotent structure.
    pub fn binary_parity_matrix(&self) -> Result<BinaryParityMatrix> {
        let (m, n) = (self.m(), self.n());
        let f = &self.field;
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut rows = Vec::with_capacity(2 * m);
        for i in 0..m {
            let mut r = vec![0u64; m];
            r[i] = full;
            rows.push(r);
        }
        // Coordinate l of Σ c_{i,j} α^(i+j).
        for l in 0..m {
            let r = (0..m)
                .map(|i| {
                    (0..n).fold(0u64, |acc, j| {
                        let bit = (f.alpha_pow((i + j) as i64).0 >> l) & 1;
                        acc | ((bit as u64) << j)
                    })
                })
                .collect();
            rows.push(r);
        }

        let mut theta = None;
        let mut shifts = Vec::with_capacity(m);
        for l in 0..m {
            let pieces = &rows[m + l];
            // piece_i = x^{d_i} · piece_0
            let d: Vec<usize> = pieces
                .iter()
                .map(|&p| {
                    (0..n)
                        .find(|&s| rotate(pieces[0], s, n) == p)
                        .ok_or_else(|| Error::Structure(format!("row {l} is not circulant")))
                })
                .collect::<Result<_>>()?;
            // piece_0 = x^{-a} θ with θ idempotent
            let a = (0..n)
                .find(|&a| is_idempotent(rotate(pieces[0], a, n), n))
                .ok_or_else(|| Error::Structure(format!("row {l} has no idempotent shift")))?;
            let th = rotate(pieces[0], a, n);
            match theta {
                None => theta = Some(th),
                Some(t) if t != th => {
                    return Err(Error::Structure("rows use different idempotents".into()))
                }
                _ => {}
            }
            shifts.push(d.iter().map(|&di| (di + n - a) % n).collect::<Vec<_>>());
        }
        let theta = theta.expect("m >= 1");

        let u = self.u_vector();
        let mut offsets = Vec::with_capacity(m);
        for s in &shifts {
            for i in 0..m {
                if (s[i] + n - s[0]) % n != (u[i] + n - u[0]) % n {
                    return Err(Error::Structure(format!(
                        "shift pattern {s:?} does not match u = {u:?}"
                    )));
                }
            }
            offsets.push((s[0] + n - u[0]) % n);
        }

        Ok(BinaryParityMatrix {
            m,
            n,
            rows,
            theta_eps: (0..n).map(|j| ((theta >> j) & 1) as u8).collect(),
            shifts,
            u: u.to_vec(),
            offsets,
            epsilon: f.alpha_pow(-1),
        })
    }
}

/// `x^s · p(x)` modulo `x^n - 1` on an n-bit mask.
pub(crate) fn rotate(p: u64, s: usize, n: usize) -> u64 {
    let s = s % n;
    if s == 0 {
        return p;
    }
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    ((p << s) | (p >> (n - s))) & mask
}

/// θ(x)^2 = θ(x^2) = θ(x) in F2[x]/(x^n - 1).
fn is_idempotent(p: u64, n: usize) -> bool {
    let mut sq = 0u64;
    for j in 0..n {
        if (p >> j) & 1 == 1 {
            sq ^= 1 << ((2 * j) % n);
        }
    }
    sq == p
}

/// An m×n bit matrix; row i, column j holds coordinate i of symbol j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    m: usize,
    n: usize,
    bits: Vec<u8>,
}

impl BinaryImage {
    pub fn zeros(m: usize, n: usize) -> BinaryImage {
        BinaryImage {
            m,
            n,
            bits: vec![0; m * n],
        }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<BinaryImage> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let mut bits = Vec::with_capacity(m * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: r.len(),
                });
            }
            bits.extend_from_slice(r);
        }
        Ok(BinaryImage { m, n, bits })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.bits[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, b: u8) {
        self.bits[i * self.n + j] = b;
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.bits[i * self.n + j] ^= 1;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.bits[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.m).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row-major flattening.
    pub fn as_flat(&self) -> &[u8] {
        &self.bits
    }

    /// Each row as a bit mask, column j in bit j.
    pub fn row_masks(&self) -> Vec<u64> {
        (0..self.m)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, &b)| acc | ((b as u64) << j))
            })
            .collect()
    }
}

/// Binary parity checks of the image code: m row-parity checks followed by m
/// checks expanding `c(α) = 0` coordinate-wise.
#[derive(Debug, Clone)]
pub struct BinaryParityMatrix {
    m: usize,
    n: usize,
    /// `rows[r][i]` is the mask of check r restricted to image row i.
    rows: Vec<Vec<u64>>,
    theta_eps: Vec<u8>,
    shifts: Vec<Vec<usize>>,
    u: Vec<usize>,
    offsets: Vec<usize>,
    epsilon: GfElement,
}

impl BinaryParityMatrix {
    pub fn num_checks(&self) -> usize {
        self.rows.len()
    }

    /// Check r restricted to image row i, as a 0/1 vector.
    pub fn block(&self, r: usize, i: usize) -> Vec<u8> {
        (0..self.n)
            .map(|j| ((self.rows[r][i] >> j) & 1) as u8)
            .collect()
    }

    /// Check r over the row-major flattened image.
    pub fn dense_row(&self, r: usize) -> Vec<u8> {
        (0..self.m).flat_map(|i| self.block(r, i)).collect()
    }

    /// Coefficients of the idempotent shared by all second-block checks.
    pub fn theta_eps(&self) -> &[u8] {
        &self.theta_eps
    }

    /// Per second-block check, the exponents μ_i with block i = θ(x)·x^{μ_i}.
    pub fn shifts(&self) -> &[Vec<usize>] {
        &self.shifts
    }

    pub fn u(&self) -> &[usize] {
        &self.u
    }

    /// Uniform offset between each second-block check's shifts and u.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn epsilon(&self) -> GfElement {
        self.epsilon
    }

    /// Syndrome bits of an image given as per-row masks.
    pub fn syndrome_masks(&self, rows: &[u64]) -> Vec<u8> {
        self.rows
            .iter()
            .map(|check| {
                check
                    .iter()
                    .zip(rows)
                    .fold(0u32, |acc, (c, r)| acc ^ (c & r).count_ones())
                    as u8
                    & 1
            })
            .collect()
    }

    pub fn annihilates_masks(&self, rows: &[u64]) -> bool {
        self.rows.iter().all(|check| {
            check
                .iter()
                .zip(rows)
                .fold(0u32, |acc, (c, r)| acc ^ (c & r).count_ones())
                & 1
                == 0
        })
    }

    pub fn annihilates(&self, img: &BinaryImage) -> bool {
        self.annihilates_masks(&img.row_masks())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_codeword(code: &RsCode) -> Vec<GfElement> {
        let f = code.field();
        vec![
            GfElement::ZERO,
            GfElement::ONE,
            GfElement::ZERO,
            f.alpha_pow(5),
            GfElement::ZERO,
            f.alpha_pow(2),
            f.alpha_pow(1),
        ]
    }

    fn all_codewords_m3(code: &RsCode) -> Vec<Vec<GfElement>> {
        (0u32..1 << 15)
            .map(|x| {
                let info: Vec<_> = (0..5).map(|t| GfElement(((x >> (3 * t)) & 7) as u8)).collect();
                code.encode(&info).unwrap()
            })
            .collect()
    }

    #[test]
    fn golden_word_is_codeword_and_encodes_from_its_info() {
        let code = RsCode::new(3).unwrap();
        let c = golden_codeword(&code);
        assert!(code.is_codeword(&c));
        assert_eq!(code.encode(&c[2..]).unwrap(), c);
        assert_eq!(code.encode(&[GfElement::ZERO; 5]).unwrap(), vec![GfElement::ZERO; 7]);
        assert!(code.encode(&c[1..]).is_err());
    }

    #[test]
    fn syndrome_examples() {
        let code = RsCode::new(3).unwrap();
        let mut c = golden_codeword(&code);
        assert_eq!(code.syndromes(&c), (GfElement::ZERO, GfElement::ZERO));
        c[0] += GfElement::ONE;
        assert_eq!(code.syndromes(&c), (GfElement::ONE, GfElement::ONE));
    }

    #[test]
    fn encode_random_gf16_has_zero_syndromes() {
        use rand::{Rng, SeedableRng};
        let code = RsCode::new(4).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let info: Vec<_> = (0..code.k()).map(|_| GfElement(rng.random_range(0..16))).collect();
            let c = code.encode(&info).unwrap();
            assert!(code.is_codeword(&c));
            assert_eq!(&c[2..], &info[..]);
        }
    }

    #[test]
    fn hard_decode_examples() {
        let code = RsCode::new(3).unwrap();
        let c = golden_codeword(&code);
        let mut r = c.clone();
        r[6] = GfElement(0b011);
        let f = code.field();
        assert_eq!(code.syndromes(&r), (GfElement::ONE, f.alpha_pow(6)));
        assert_eq!(code.decode_hard(&r).unwrap(), c);
        assert_eq!(code.decode_hard(&c).unwrap(), c);

        // golden received pattern: bits (row 0, col 6), (row 1, col 0), (row 2, col 1).
        let mut img = code.to_binary_image(&c);
        img.flip(0, 6);
        img.flip(1, 0);
        img.flip(2, 1);
        let r = code.from_binary_image(&img);
        // Three symbol errors exceed the code's reach; the decoder lands on a
        // different codeword one symbol away.
        let d = code.decode_hard(&r).unwrap();
        assert_ne!(d, c);
        assert!(code.is_codeword(&d));
        assert_eq!(d.iter().zip(&r).filter(|(a, b)| a != b).count(), 1);
    }

    #[test]
    fn hard_decode_matches_brute_force_nearest_codeword() {
        let code = RsCode::new(3).unwrap();
        let words = all_codewords_m3(&code);
        // Sampled codewords, every weight <= 1 error pattern.
        for c in words.iter().step_by(4099) {
            for p in 0..7 {
                for e in 0..8u8 {
                    let mut r = c.clone();
                    r[p] += GfElement(e);
                    let nearest = words
                        .iter()
                        .min_by_key(|w| w.iter().zip(&r).filter(|(a, b)| a != b).count())
                        .unwrap();
                    assert_eq!(&code.decode_hard(&r).unwrap(), nearest);
                    assert_eq!(&code.decode_hard(&r).unwrap(), c);
                }
            }
        }
    }

    #[test]
    fn minimum_distance_is_three() {
        let code = RsCode::new(3).unwrap();
        let min = all_codewords_m3(&code)
            .iter()
            .map(|c| c.iter().filter(|s| !s.is_zero()).count())
            .filter(|&w| w > 0)
            .min()
            .unwrap();
        assert_eq!(min, 3);
    }

    #[test]
    fn erasure_examples() {
        let code = RsCode::new(3).unwrap();
        let c = golden_codeword(&code);
        let mut r = c.clone();
        r[0] = GfElement(5);
        r[6] = GfElement(3);
        let d = code.decode_erasures(&r, 0, 6).unwrap();
        assert_eq!((d[0], d[6]), (GfElement::ZERO, code.field().alpha_pow(1)));
        assert_eq!(code.decode_erasures(&c, 2, 4).unwrap(), c);
        assert_eq!(code.decode_erasures(&c, 3, 3), Err(DecodeFailure::BadErasures));
        assert_eq!(code.decode_erasures(&c, 0, 7), Err(DecodeFailure::BadErasures));
    }

    #[test]
    fn two_erasures_plus_error_miscorrects_silently() {
        // Two erasures exhaust the redundancy: the filled word is always a
        // codeword, so an extra error yields a different codeword.
        let code = RsCode::new(3).unwrap();
        let c = golden_codeword(&code);
        let mut r = c.clone();
        r[3] += GfElement::ONE;
        let d = code.decode_erasures(&r, 0, 6).unwrap();
        assert!(code.is_codeword(&d));
        assert_ne!(d, c);
    }

    #[test]
    fn single_erasure_detects_extra_error() {
        let code = RsCode::new(3).unwrap();
        let c = golden_codeword(&code);
        let mut r = c.clone();
        r[6] = GfElement::ZERO;
        assert_eq!(code.decode_erasure_set(&r, &[6]).unwrap(), c);
        r[3] += GfElement::ONE;
        assert_eq!(code.decode_erasure_set(&r, &[6]), Err(DecodeFailure::Uncorrectable));
    }

    #[test]
    fn any_two_erasures_recover_m3() {
        use rand::{Rng, SeedableRng};
        let code = RsCode::new(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let info: Vec<_> = (0..5).map(|_| GfElement(rng.random_range(0..8))).collect();
            let c = code.encode(&info).unwrap();
            for a in 0..7 {
                for b in (a + 1)..7 {
                    let mut r = c.clone();
                    r[a] = GfElement(rng.random_range(0..8));
                    r[b] = GfElement(rng.random_range(0..8));
                    assert_eq!(code.decode_erasures(&r, a, b).unwrap(), c);
                }
            }
        }
    }

    #[test]
    fn golden_binary_image() {
        let code = RsCode::new(3).unwrap();
        let img = code.to_binary_image(&golden_codeword(&code));
        assert_eq!(
            img.rows(),
            vec![
                vec![0, 1, 0, 1, 0, 0, 0],
                vec![0, 0, 0, 1, 0, 0, 1],
                vec![0, 0, 0, 1, 0, 1, 0],
            ]
        );
        assert_eq!(code.from_binary_image(&img), golden_codeword(&code));
        let z = code.to_binary_image(&[GfElement::ZERO; 7]);
        assert!(z.as_flat().iter().all(|&b| b == 0));
    }

    #[test]
    fn codeword_image_rows_have_even_weight() {
        let code = RsCode::new(3).unwrap();
        for c in all_codewords_m3(&code).iter().step_by(37) {
            let img = code.to_binary_image(c);
            for i in 0..3 {
                assert_eq!(img.row(i).iter().sum::<u8>() % 2, 0);
            }
        }
    }

    #[test]
    fn parity_matrix_structure_m3() {
        let code = RsCode::new(3).unwrap();
        let h = code.binary_parity_matrix().unwrap();
        assert_eq!(h.num_checks(), 6);
        for i in 0..3 {
            for ii in 0..3 {
                let expect = if i == ii { vec![1; 7] } else { vec![0; 7] };
                assert_eq!(h.block(i, ii), expect);
            }
        }
        for s in h.shifts() {
            let rel: Vec<_> = s.iter().map(|&x| (x + 7 - s[0]) % 7).collect();
            assert_eq!(rel, vec![0, 6, 5]); // [2,1,0] minus 2
        }
        assert_eq!(h.epsilon(), code.field().alpha_pow(6));
        for c in all_codewords_m3(&code) {
            assert!(h.annihilates(&code.to_binary_image(&c)));
        }
    }

    #[test]
    fn parity_matrix_builds_for_all_fields() {
        for m in 3..=6 {
            let code = RsCode::new(m).unwrap();
            let h = code.binary_parity_matrix().unwrap();
            let n = code.n();
            // θ is idempotent and every second-block piece is a shift of it.
            let theta = h.theta_eps();
            let sq: Vec<u8> = (0..n)
                .map(|j| {
                    (0..n)
                        .filter(|&t| theta[t] == 1 && (2 * t) % n == j)
                        .count() as u8
                        % 2
                })
                .collect();
            assert_eq!(sq, theta);
            for (l, s) in h.shifts().iter().enumerate() {
                for (i, &mu) in s.iter().enumerate() {
                    let expect: Vec<u8> = (0..n).map(|j| theta[(j + n - mu) % n]).collect();
                    assert_eq!(h.block(m as usize + l, i), expect);
                }
            }
        }
    }
}
