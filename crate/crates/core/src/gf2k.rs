//! Arithmetic in the binary field GF(2^k).
//!
//! Elements are polynomials over GF(2) packed into the low `k` bits of a
//! `u32`. The modulus is always the smallest irreducible polynomial of degree
//! `k` with constant term 1 (by integer encoding), so a given `k` yields the same field, and the
//! same generator sets downstream, on every run.

use std::fmt;

use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_K: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("extension degree k={0} outside supported range 1..={MAX_K}")]
    UnsupportedDegree(u32),
    #[error("value {bits:#x} is not an element of GF(2^{k})")]
    NotAnElement { bits: u32, k: u32 },
}

/// An element of GF(2^k), bit `i` holding the coefficient of `x^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#b}", self.0)
    }
}

// Addition in characteristic 2 is XOR of coefficient vectors.
#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Add for FieldElem {
    type Output = FieldElem;

    fn add(self, rhs: FieldElem) -> FieldElem {
        FieldElem(self.0 ^ rhs.0)
    }
}

/// Arithmetic context for GF(2^k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldCtx {
    k: u32,
    modulus: u32,
}

impl FieldCtx {
    /// Builds GF(2^k) over the smallest irreducible polynomial of degree `k`
    /// with nonzero constant term.
    pub fn new(k: u32) -> Result<Self, FieldError> {
        if k == 0 || k > MAX_K {
            return Err(FieldError::UnsupportedDegree(k));
        }
        // odd candidates only: for k = 1 this picks x + 1 over x
        let modulus = ((1u32 << k) + 1..(1u32 << (k + 1)))
            .step_by(2)
            .find(|&p| is_irreducible(p))
            .expect("an irreducible polynomial exists in every degree");
        Ok(FieldCtx { k, modulus })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The modulus as a `k + 1` bit vector with the leading coefficient set.
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of field elements, `2^k`.
    pub fn order(&self) -> u32 {
        1 << self.k
    }

    pub fn elem(&self, bits: u32) -> Result<FieldElem, FieldError> {
        if bits >> self.k != 0 {
            return Err(FieldError::NotAnElement { bits, k: self.k });
        }
        Ok(FieldElem(bits))
    }

    /// All elements in increasing bit order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order()).map(FieldElem)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        a + b
    }

    /// Shift-and-xor multiplication with reduction after every shift.
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert!(a.0 >> self.k == 0 && b.0 >> self.k == 0);
        let top = 1u32 << self.k;
        let mut acc = 0u32;
        let mut a = a.0;
        let mut b = b.0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus;
            }
        }
        FieldElem(acc)
    }

    /// Square-and-multiply exponentiation. `pow(0, 0)` is `1`.
    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Degree of a nonzero polynomial.
fn degree(p: u32) -> u32 {
    31 - p.leading_zeros()
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division against every polynomial of
/// degree `1..=deg(p)/2`.
pub fn is_irreducible(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let d = degree(p);
    let half = d / 2;
    (2u32..(1u32 << (half + 1))).all(|q| poly_rem(p, q) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Full carry-less product followed by long division: a different route
    /// from the interleaved reduction in `FieldCtx::mul`.
    fn clmul_then_reduce(a: u32, b: u32, modulus: u32) -> u32 {
        let mut prod = 0u64;
        for i in 0..32 {
            if (b >> i) & 1 == 1 {
                prod ^= (a as u64) << i;
            }
        }
        let dm = degree(modulus);
        while prod != 0 && 63 - prod.leading_zeros() >= dm {
            let shift = 63 - prod.leading_zeros() - dm;
            prod ^= (modulus as u64) << shift;
        }
        prod as u32
    }

    #[test]
    fn smallest_irreducible_moduli() {
        assert_eq!(FieldCtx::new(1).unwrap().modulus(), 0b11);
        assert_eq!(FieldCtx::new(2).unwrap().modulus(), 0b111);
        assert_eq!(FieldCtx::new(4).unwrap().modulus(), 0b10011);
    }

    #[test]
    fn degree_four_modulus_by_enumeration() {
        // Enumerate every monic degree-4 polynomial and test for a factor of
        // degree 1 or 2 by brute-force multiplication of candidate factors.
        let mut reducible = std::collections::BTreeSet::new();
        for f in 2u32..8 {
            for g in 2u32..32 {
                let mut prod = 0u32;
                for i in 0..5 {
                    if (g >> i) & 1 == 1 {
                        prod ^= f << i;
                    }
                }
                reducible.insert(prod);
            }
        }
        let first = (16u32..32).find(|p| !reducible.contains(p)).unwrap();
        assert_eq!(first, 0b10011);
    }

    #[test]
    fn rejects_out_of_range_degree() {
        assert_eq!(FieldCtx::new(0), Err(FieldError::UnsupportedDegree(0)));
        assert_eq!(FieldCtx::new(17), Err(FieldError::UnsupportedDegree(17)));
        assert!(FieldCtx::new(16).is_ok());
    }

    #[test]
    fn elem_range_check() {
        let f = FieldCtx::new(3).unwrap();
        assert!(f.elem(7).is_ok());
        assert!(f.elem(8).is_err());
    }

    #[test]
    fn mul_examples() {
        let f4 = FieldCtx::new(4).unwrap();
        assert_eq!(f4.mul(FieldElem(0b101), FieldElem::ONE), FieldElem(0b101));
        assert_eq!(f4.mul(FieldElem::ZERO, FieldElem(0b1011)), FieldElem::ZERO);
        let f2 = FieldCtx::new(2).unwrap();
        assert_eq!(f2.mul(FieldElem(0b10), FieldElem(0b10)), FieldElem(0b11));
        assert_eq!(
            clmul_then_reduce(0b10, 0b10, f2.modulus()),
            0b11,
            "oracle agrees on x*x = x+1"
        );
    }

    #[test]
    fn pow_examples() {
        let f4 = FieldCtx::new(4).unwrap();
        let x = FieldElem(0b0010);
        assert_eq!(f4.pow(x, 5), FieldElem(0b0110));
        let mut rep = FieldElem::ONE;
        for _ in 0..5 {
            rep = FieldElem(clmul_then_reduce(rep.0, x.0, f4.modulus()));
        }
        assert_eq!(rep, FieldElem(0b0110));
        assert_eq!(f4.pow(FieldElem(0b1101), 1), FieldElem(0b1101));
        assert_eq!(f4.pow(FieldElem::ZERO, 0), FieldElem::ONE);
        for a in f4.elements().skip(1) {
            assert_eq!(f4.pow(a, 15), FieldElem::ONE);
        }
    }

    #[test]
    fn mul_matches_oracle_exhaustively() {
        for k in 1..=8 {
            let f = FieldCtx::new(k).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b).0, clmul_then_reduce(a.0, b.0, f.modulus()));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for k in 1..=8 {
            let f = FieldCtx::new(k).unwrap();
            let els: Vec<_> = f.elements().collect();
            // a*b lookup table keeps the triple loop cheap at k = 8
            let q = els.len();
            let table: Vec<u32> = els
                .iter()
                .flat_map(|&a| els.iter().map(move |&b| (a, b)))
                .map(|(a, b)| f.mul(a, b).0)
                .collect();
            let m = |a: u32, b: u32| table[a as usize * q + b as usize];
            for a in 0..q as u32 {
                assert_eq!(m(a, 1), a);
                assert_eq!(m(a, 0), 0);
                for b in 0..q as u32 {
                    assert_eq!(m(a, b), m(b, a));
                    for c in 0..q as u32 {
                        assert_eq!(m(a, m(b, c)), m(m(a, b), c));
                        assert_eq!(m(a, b ^ c), m(a, b) ^ m(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicative_order_divides_group_order() {
        for k in 1..=8 {
            let f = FieldCtx::new(k).unwrap();
            let group = (1u64 << k) - 1;
            for a in f.elements().skip(1) {
                let mut x = a;
                let mut period = 1u64;
                while x != FieldElem::ONE {
                    x = f.mul(x, a);
                    period += 1;
                }
                assert_eq!(group % period, 0, "k={k} a={a}");
            }
        }
    }

    #[test]
    fn small_powers_match_iterated_mul() {
        for k in 1..=8 {
            let f = FieldCtx::new(k).unwrap();
            for a in f.elements() {
                let a2 = f.mul(a, a);
                let a3 = f.mul(a2, a);
                let a5 = f.mul(f.mul(a3, a), a);
                assert_eq!(f.pow(a, 3), a3);
                assert_eq!(f.pow(a, 5), a5);
            }
        }
    }

    #[test]
    fn irreducibility_known_cases() {
        assert!(is_irreducible(0b111));
        assert!(!is_irreducible(0b101)); // (x+1)^2
        assert!(is_irreducible(0b1011));
        assert!(!is_irreducible(0b10101)); // (x^2+x+1)^2
    }
}
