//! Random column-regular LDPC matrices without 4-cycles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::sparse::SparseBitMatrix;

const MAX_ATTEMPTS: usize = 16;

/// Row pairs already covered by some column.
struct PairSet {
    rows: usize,
    bits: Vec<u64>,
}

impl PairSet {
    fn new(rows: usize) -> PairSet {
        PairSet {
            rows,
            bits: vec![0; (rows * rows).div_ceil(64)],
        }
    }

    fn idx(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        a * self.rows + b
    }

    fn contains(&self, a: usize, b: usize) -> bool {
        let i = self.idx(a, b);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn insert(&mut self, a: usize, b: usize) {
        let i = self.idx(a, b);
        self.bits[i / 64] |= 1 << (i % 64);
    }
}

/// Rows grouped by current load, with O(1) moves between groups.
struct LoadBuckets {
    buckets: Vec<Vec<usize>>,
    load: Vec<usize>,
    pos: Vec<usize>,
}

impl LoadBuckets {
    fn new(rows: usize) -> LoadBuckets {
        LoadBuckets {
            buckets: vec![(0..rows).collect()],
            load: vec![0; rows],
            pos: (0..rows).collect(),
        }
    }

    fn bump(&mut self, r: usize) {
        let l = self.load[r];
        let p = self.pos[r];
        let bucket = &mut self.buckets[l];
        let last = *bucket.last().expect("row present");
        bucket.swap_remove(p);
        if last != r {
            self.pos[last] = p;
        }
        self.load[r] += 1;
        if self.buckets.len() <= l + 1 {
            self.buckets.push(Vec::new());
        }
        self.pos[r] = self.buckets[l + 1].len();
        self.buckets[l + 1].push(r);
    }
}

fn attempt(checks: usize, n: usize, wc: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<usize>>> {
    let mut pairs = PairSet::new(checks);
    let mut loads = LoadBuckets::new(checks);
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); checks];
    let mut chosen = Vec::with_capacity(wc);
    for col in 0..n {
        chosen.clear();
        'levels: for level in 0..loads.buckets.len() {
            let bucket = &loads.buckets[level];
            if bucket.is_empty() {
                continue;
            }
            let start = rng.random_range(0..bucket.len());
            for off in 0..bucket.len() {
                let r = bucket[(start + off) % bucket.len()];
                if chosen.iter().all(|&c| c != r && !pairs.contains(c, r)) {
                    chosen.push(r);
                    if chosen.len() == wc {
                        break 'levels;
                    }
                }
            }
        }
        if chosen.len() < wc {
            return None;
        }
        for a in 0..wc {
            for b in (a + 1)..wc {
                pairs.insert(chosen[a], chosen[b]);
            }
        }
        for &r in &chosen {
            loads.bump(r);
            rows[r].push(col);
        }
    }
    Some(rows)
}

/// An (n - k) × n parity-check matrix with column weight `wc`, balanced row
/// weights and no two columns sharing more than one row.
pub fn random_parity_matrix(n: usize, k: usize, wc: usize, seed: u64) -> Result<SparseBitMatrix> {
    if k >= n || wc < 2 || wc > n - k {
        return Err(Error::Construction(format!(
            "infeasible parameters n={n}, k={k}, column weight={wc}"
        )));
    }
    let checks = n - k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        if let Some(rows) = attempt(checks, n, wc, &mut rng) {
            return SparseBitMatrix::from_row_lists(n, rows);
        }
    }
    Err(Error::Construction(format!(
        "no 4-cycle-free matrix found after {MAX_ATTEMPTS} attempts"
    )))
}
