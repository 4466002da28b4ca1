//! Sum-product and one-step majority-logic decoding.

use super::LdpcCode;

/// Default cap on message magnitudes.
pub const DEFAULT_LLR_CLIP: f64 = 30.0;

/// Default SPA iteration limit.
pub const DEFAULT_SPA_ITERATIONS: usize = 20;

/// Default number of majority-logic passes.
pub const DEFAULT_MLG_ITERATIONS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SpaOutput {
    pub bits: Vec<u8>,
    /// Channel LLR plus all incoming check messages.
    pub posterior: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl LdpcCode {
    /// Log-domain sum-product decoding with the tanh rule and flooding schedule.
    ///
    /// LLR convention: positive favours bit 0. Stops after the first iteration
    /// whose hard decision satisfies every check.
    pub fn spa_decode(&self, llr: &[f64], max_iter: usize) -> SpaOutput {
        self.spa_decode_clipped(llr, max_iter, DEFAULT_LLR_CLIP)
    }

    pub fn spa_decode_clipped(&self, llr: &[f64], max_iter: usize, clip: f64) -> SpaOutput {
        let h = self.h();
        assert_eq!(llr.len(), h.cols(), "llr length");
        let g = self.graph();
        let edges = g.edge_var.len();
        let mut v2c: Vec<f64> = g.edge_var.iter().map(|&v| llr[v].clamp(-clip, clip)).collect();
        let mut c2v = vec![0.0f64; edges];
        let mut posterior = llr.to_vec();
        let mut bits: Vec<u8> = llr.iter().map(|&l| (l < 0.0) as u8).collect();
        let mut t = Vec::new();
        let mut fwd = Vec::new();

        for it in 1..=max_iter {
            for c in 0..h.rows() {
                let range = g.check_ptr[c]..g.check_ptr[c + 1];
                let deg = range.len();
                t.clear();
                t.extend(v2c[range.clone()].iter().map(|&q| (0.5 * q).tanh()));
                // leave-one-out products: prefix in fwd, suffix on the fly
                fwd.clear();
                let mut acc = 1.0;
                for &x in &t {
                    fwd.push(acc);
                    acc *= x;
                }
                let mut bwd = 1.0;
                for i in (0..deg).rev() {
                    let p = fwd[i] * bwd;
                    c2v[range.start + i] = (2.0 * p.atanh()).clamp(-clip, clip);
                    bwd *= t[i];
                }
            }
            for (v, post) in posterior.iter_mut().enumerate() {
                let es = &g.var_edges[v];
                let total = llr[v] + es.iter().map(|&e| c2v[e]).sum::<f64>();
                *post = total;
                for &e in es {
                    v2c[e] = (total - c2v[e]).clamp(-clip, clip);
                }
                bits[v] = (total < 0.0) as u8;
            }
            if self.is_codeword(&bits) {
                return SpaOutput {
                    bits,
                    posterior,
                    converged: true,
                    iterations: it,
                };
            }
        }
        let converged = max_iter == 0 && self.is_codeword(&bits);
        SpaOutput {
            bits,
            posterior,
            converged,
            iterations: max_iter,
        }
    }

    /// One-step majority-logic decoding, repeated until no bit flips or
    /// `max_iter` passes. A bit flips when more than half of its checks fail.
    /// Returns the decoded bits and whether anything changed.
    pub fn mlg_decode(&self, bits: &[u8], max_iter: usize) -> (Vec<u8>, bool) {
        let h = self.h();
        assert_eq!(bits.len(), h.cols(), "bits length");
        let mut x = bits.to_vec();
        let mut changed = false;
        let mut flips = Vec::new();
        for _ in 0..max_iter {
            let syn = h.syndrome(&x);
            flips.clear();
            for (v, checks) in (0..h.cols()).map(|v| (v, h.col(v))) {
                let failed = checks.iter().filter(|&&c| syn[c] == 1).count();
                if 2 * failed > checks.len() {
                    flips.push(v);
                }
            }
            if flips.is_empty() {
                break;
            }
            for &v in &flips {
                x[v] ^= 1;
            }
            changed = true;
        }
        (x, changed)
    }
}
