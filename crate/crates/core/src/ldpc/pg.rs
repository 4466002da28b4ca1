//! Cyclic projective-geometry LDPC codes over PG(2, 2^s).
//!
//! Points of the plane are the nonzero elements of GF(2^{3s}) modulo the
//! nonzero elements of the subfield GF(2^s); with a primitive β they are
//! indexed by `log_β mod n`, n = 2^{2s} + 2^s + 1. The line through β^0 and β^1
//! is `{1 + bβ : b ∈ GF(2^s)} ∪ {β}` and the remaining lines are its cyclic
//! shifts, so H is an n×n circulant with row and column weight 2^s + 1.

use crate::error::{Error, Result};

use super::sparse::SparseBitMatrix;

fn primitive_poly(degree: u32) -> Option<u32> {
    match degree {
        6 => Some(0x43),    // x^6 + x + 1
        9 => Some(0x211),   // x^9 + x^4 + 1
        12 => Some(0x1053), // x^12 + x^6 + x^4 + x + 1
        15 => Some(0x8003), // x^15 + x + 1
        _ => None,
    }
}

/// exp/log tables for GF(2^degree).
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Tables {
    fn new(degree: u32) -> Result<Tables> {
        let poly = primitive_poly(degree).ok_or(Error::UnsupportedGeometry(degree / 3))?;
        let order = (1usize << degree) - 1;
        let mut exp = vec![0u32; order];
        let mut log = vec![u32::MAX; order + 1];
        let mut x = 1u32;
        for (i, e) in exp.iter_mut().enumerate() {
            if log[x as usize] != u32::MAX {
                return Err(Error::Construction(format!(
                    "polynomial {poly:#x} is not primitive"
                )));
            }
            *e = x;
            log[x as usize] = i as u32;
            x <<= 1;
            if x & (1 << degree) != 0 {
                x ^= poly;
            }
        }
        Ok(Tables { exp, log })
    }
}

/// Number of points (and lines) of PG(2, 2^s).
pub fn pg_length(s: u32) -> usize {
    (1usize << (2 * s)) + (1usize << s) + 1
}

/// Point indices of the base line through β^0 and β^1, sorted.
pub fn base_line(s: u32) -> Result<Vec<usize>> {
    if !(2..=5).contains(&s) {
        return Err(Error::UnsupportedGeometry(s));
    }
    let t = Tables::new(3 * s)?;
    let n = pg_length(s);
    let q = 1usize << s;
    // GF(2^s)* = <β^n>
    let mut pts: Vec<usize> = (0..q - 1)
        .map(|i| {
            let b = t.exp[(i * n) % t.exp.len()];
            let beta_b = t.exp[(t.log[b as usize] as usize + 1) % t.exp.len()];
            let x = 1 ^ beta_b;
            t.log[x as usize] as usize % n
        })
        .collect();
    pts.push(0); // b = 0
    pts.push(1); // β
    pts.sort_unstable();
    pts.dedup();
    if pts.len() != q + 1 {
        return Err(Error::Construction(format!(
            "base line has {} points, expected {}",
            pts.len(),
            q + 1
        )));
    }
    Ok(pts)
}

/// Line-by-point incidence matrix of PG(2, 2^s).
pub fn pg_incidence(s: u32) -> Result<SparseBitMatrix> {
    let n = pg_length(s);
    let line = base_line(s)?;
    let rows = (0..n)
        .map(|r| line.iter().map(|&p| (p + r) % n).collect())
        .collect();
    SparseBitMatrix::from_row_lists(n, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths() {
        assert_eq!(pg_length(2), 21);
        assert_eq!(pg_length(3), 73);
        assert_eq!(pg_length(5), 1057);
    }

    #[test]
    fn lines_meet_in_one_point() {
        for s in 2..=3 {
            let h = pg_incidence(s).unwrap();
            let n = h.rows();
            for a in 0..n {
                for b in (a + 1)..n {
                    let common = h.row(a).iter().filter(|c| h.row(b).binary_search(c).is_ok()).count();
                    assert_eq!(common, 1, "lines {a},{b}");
                    let common = h.col(a).iter().filter(|r| h.col(b).binary_search(r).is_ok()).count();
                    assert_eq!(common, 1, "points {a},{b}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_s() {
        assert!(matches!(pg_incidence(1), Err(Error::UnsupportedGeometry(1))));
        assert!(matches!(pg_incidence(6), Err(Error::UnsupportedGeometry(6))));
    }
}
