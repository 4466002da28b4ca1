//! Arithmetic in GF(2^m) for the small fields used by double-parity RS codes.
//!
//! Elements are stored as their coefficient vector in the polynomial basis
//! `[1, α, …, α^(m-1)]`: bit `i` of [`GfElement::value`] is the coefficient of
//! `α^i`. Multiplication goes through exp/log tables.

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};

/// Extension degrees for which a field can be built.
pub const SUPPORTED_DEGREES: [u32; 4] = [3, 4, 5, 6];

/// Primitive polynomial (including the `x^m` term) for each supported degree.
///
/// m=3: α^3 = α + 1, m=4: α^4 = α + 1, m=5: α^5 = α^2 + 1, m=6: α^6 = α + 1.
fn primitive_poly(m: u32) -> Option<u16> {
    match m {
        3 => Some(0b1011),
        4 => Some(0b1_0011),
        5 => Some(0b10_0101),
        6 => Some(0b100_0011),
        _ => None,
    }
}

/// A field element as an m-bit coefficient vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GfElement(pub u8);

impl GfElement {
    pub const ZERO: GfElement = GfElement(0);
    pub const ONE: GfElement = GfElement(1);

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for GfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf({:#b})", self.0)
    }
}

impl Add for GfElement {
    type Output = GfElement;

    #[allow(clippy::suspicious_arithmetic_impl)] // characteristic 2
    fn add(self, rhs: GfElement) -> GfElement {
        GfElement(self.0 ^ rhs.0)
    }
}

impl AddAssign for GfElement {
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: GfElement) {
        self.0 ^= rhs.0;
    }
}

/// GF(2^m) with a fixed primitive element α.
#[derive(Clone, PartialEq, Eq)]
pub struct Field {
    m: u32,
    n: usize,
    prim_poly: u16,
    exp: Vec<u8>,
    log: Vec<u16>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("m", &self.m)
            .field("prim_poly", &format_args!("{:#b}", self.prim_poly))
            .finish()
    }
}

impl Field {
    /// Builds GF(2^m) for `m` in 3..=6.
    pub fn new(m: u32) -> Result<Field> {
        let prim_poly = primitive_poly(m).ok_or(Error::UnsupportedDegree(m))?;
        let n = (1usize << m) - 1;
        let mut exp = vec![0u8; n];
        let mut log = vec![0u16; n + 1];
        let mut x: u16 = 1;
        for (i, e) in exp.iter_mut().enumerate() {
            *e = x as u8;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= prim_poly;
            }
        }
        debug_assert_eq!(x, 1, "polynomial is not primitive");
        Ok(Field {
            m,
            n,
            prim_poly,
            exp,
            log,
        })
    }

    /// Bits per symbol.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Multiplicative order 2^m - 1, also the RS code length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The primitive polynomial as a bit mask, `x^m` included.
    pub fn prim_poly(&self) -> u16 {
        self.prim_poly
    }

    /// α^e, with `e` taken modulo n (negative exponents allowed).
    pub fn alpha_pow(&self, e: i64) -> GfElement {
        GfElement(self.exp[e.rem_euclid(self.n as i64) as usize])
    }

    /// Discrete log base α. `None` for zero.
    pub fn log(&self, a: GfElement) -> Option<usize> {
        if a.is_zero() {
            None
        } else {
            Some(self.log[a.0 as usize] as usize)
        }
    }

    pub fn add(&self, a: GfElement, b: GfElement) -> GfElement {
        a + b
    }

    pub fn mul(&self, a: GfElement, b: GfElement) -> GfElement {
        if a.is_zero() || b.is_zero() {
            return GfElement::ZERO;
        }
        let e = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        GfElement(self.exp[e % self.n])
    }

    pub fn inv(&self, a: GfElement) -> Result<GfElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let l = self.log[a.0 as usize] as usize;
        Ok(GfElement(self.exp[(self.n - l) % self.n]))
    }

    pub fn div(&self, a: GfElement, b: GfElement) -> Result<GfElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e. `0^0` is taken as 1.
    pub fn pow(&self, a: GfElement, e: u64) -> GfElement {
        if e == 0 {
            return GfElement::ONE;
        }
        match self.log(a) {
            None => GfElement::ZERO,
            Some(l) => {
                let k = (l as u128 * e as u128 % self.n as u128) as usize;
                GfElement(self.exp[k])
            }
        }
    }

    /// Coordinates of `a` in the basis `[1, α, …, α^(m-1)]`.
    pub fn to_bits(&self, a: GfElement) -> Vec<u8> {
        (0..self.m).map(|i| (a.0 >> i) & 1).collect()
    }

    pub fn from_bits(&self, bits: &[u8]) -> Result<GfElement> {
        if bits.len() != self.m as usize {
            return Err(Error::LengthMismatch {
                expected: self.m as usize,
                actual: bits.len(),
            });
        }
        let mut v = 0u8;
        for (i, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(Error::NotABit(b));
            }
            v |= b << i;
        }
        Ok(GfElement(v))
    }

    /// The polynomial basis γ as bit patterns: `basis()[i]` is α^i.
    pub fn basis(&self) -> Vec<GfElement> {
        (0..self.m as i64).map(|i| self.alpha_pow(i)).collect()
    }

    /// All 2^m elements in coefficient order.
    pub fn elements(&self) -> impl Iterator<Item = GfElement> {
        (0..=self.n as u8).map(GfElement)
    }

    pub fn contains(&self, a: GfElement) -> bool {
        (a.0 as usize) <= self.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_m_reduces_per_primitive_rule() {
        let f3 = Field::new(3).unwrap();
        assert_eq!(f3.to_bits(f3.alpha_pow(3)), vec![1, 1, 0]);
        let f4 = Field::new(4).unwrap();
        assert_eq!(f4.to_bits(f4.alpha_pow(4)), vec![1, 1, 0, 0]);
        let f5 = Field::new(5).unwrap();
        assert_eq!(f5.to_bits(f5.alpha_pow(5)), vec![1, 0, 1, 0, 0]);
        let f6 = Field::new(6).unwrap();
        assert_eq!(f6.to_bits(f6.alpha_pow(6)), vec![1, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn exp_table_wraps() {
        let f = Field::new(3).unwrap();
        assert_eq!(f.alpha_pow(7), GfElement::ONE);
        assert_eq!(f.alpha_pow(-1), f.alpha_pow(6));
    }

    #[test]
    fn unsupported_degree_rejected() {
        assert!(matches!(Field::new(2), Err(Error::UnsupportedDegree(2))));
        assert!(matches!(Field::new(8), Err(Error::UnsupportedDegree(8))));
    }

    #[test]
    fn tables_are_inverse_bijections() {
        for m in SUPPORTED_DEGREES {
            let f = Field::new(m).unwrap();
            let mut seen = vec![false; f.n() + 1];
            assert_eq!(f.exp[0], 1);
            for e in 0..f.n() {
                let a = f.alpha_pow(e as i64);
                assert!(!a.is_zero());
                assert!(!seen[a.0 as usize]);
                seen[a.0 as usize] = true;
                assert_eq!(f.log(a), Some(e));
            }
            for a in f.elements().skip(1) {
                assert_eq!(f.alpha_pow(f.log(a).unwrap() as i64), a);
            }
        }
    }

    #[test]
    fn addition_examples() {
        let f = Field::new(3).unwrap();
        let a = f.alpha_pow(5);
        assert_eq!(a + a, GfElement::ZERO);
        assert_eq!(a + GfElement::ZERO, a);
        // 1 + α^5 + α^2 + α = 0, the c(1) check of the (0,1,0,α^5,0,α^2,α) codeword.
        let s = GfElement::ONE + f.alpha_pow(5) + f.alpha_pow(2) + f.alpha_pow(1);
        assert_eq!(s, GfElement::ZERO);
    }

    #[test]
    fn multiplication_examples() {
        let f = Field::new(3).unwrap();
        assert_eq!(f.mul(f.alpha_pow(3), f.alpha_pow(4)), GfElement::ONE);
        assert_eq!(f.mul(f.alpha_pow(1), f.alpha_pow(2)), GfElement(0b011));
        assert_eq!(f.pow(f.alpha_pow(1), 3), GfElement(0b011));
        assert_eq!(f.pow(GfElement::ZERO, 0), GfElement::ONE);
        assert_eq!(f.pow(GfElement::ZERO, 5), GfElement::ZERO);
        assert!(matches!(f.inv(GfElement::ZERO), Err(Error::ZeroInverse)));
    }

    #[test]
    fn inverse_exhaustive_gf16() {
        let f = Field::new(4).unwrap();
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), GfElement::ONE);
        }
    }

    #[test]
    fn bits_round_trip() {
        let f = Field::new(3).unwrap();
        assert_eq!(f.to_bits(f.alpha_pow(5)), vec![1, 1, 1]);
        assert_eq!(f.to_bits(f.alpha_pow(1)), vec![0, 1, 0]);
        for a in f.elements() {
            assert_eq!(f.from_bits(&f.to_bits(a)).unwrap(), a);
        }
        assert!(f.from_bits(&[1, 0]).is_err());
    }

    #[test]
    fn basis_is_alpha_powers() {
        let f = Field::new(5).unwrap();
        for (i, b) in f.basis().into_iter().enumerate() {
            assert_eq!(b, GfElement(1 << i));
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for m in [3, 4] {
            let f = Field::new(m).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                for &b in &els {
                    assert_eq!(f.to_bits(a + b), {
                        let (x, y) = (f.to_bits(a), f.to_bits(b));
                        x.iter().zip(&y).map(|(p, q)| p ^ q).collect::<Vec<_>>()
                    });
                    for &c in &els {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
                    }
                }
            }
        }
    }
}
