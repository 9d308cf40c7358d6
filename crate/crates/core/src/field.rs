//! Finite fields GF(q) for prime powers q <= 16, as precomputed tables.
//!
//! An element is coded as an integer 0..q: the base-p digits are the
//! coefficients of a polynomial in the generator x, lowest degree first.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MAX_Q: u8 = 16;

/// Supported orders with the reducing polynomial for non-prime fields.
/// Coefficients are lowest degree first and include the leading 1.
const MODULI: &[(u8, u8, u8, &[u8])] = &[
    (2, 2, 1, &[0, 1]),
    (3, 3, 1, &[0, 1]),
    (4, 2, 2, &[1, 1, 1]),
    (5, 5, 1, &[0, 1]),
    (7, 7, 1, &[0, 1]),
    (8, 2, 3, &[1, 1, 0, 1]),
    (9, 3, 2, &[2, 2, 1]),
    (11, 11, 1, &[0, 1]),
    (13, 13, 1, &[0, 1]),
    (16, 2, 4, &[1, 1, 0, 0, 1]),
];

#[derive(Debug)]
pub struct Gf {
    pub q: u8,
    pub p: u8,
    /// Extension degree over the prime field.
    pub degree: u8,
    add: [[u8; 16]; 16],
    mul: [[u8; 16]; 16],
    neg: [u8; 16],
    inv: [u8; 16],
}

impl Gf {
    /// Shared table for GF(q); errors if q is not a supported prime power.
    pub fn get(q: u8) -> Result<&'static Gf> {
        static CACHE: [OnceLock<Option<Gf>>; 17] = [const { OnceLock::new() }; 17];
        if q as usize >= CACHE.len() {
            return Err(Error::UnsupportedField(q));
        }
        CACHE[q as usize]
            .get_or_init(|| Gf::build(q))
            .as_ref()
            .ok_or(Error::UnsupportedField(q))
    }

    fn build(q: u8) -> Option<Gf> {
        let &(_, p, degree, modulus) = MODULI.iter().find(|m| m.0 == q)?;
        let n = q as usize;
        let digits = |x: u8| -> Vec<u8> {
            let mut d = vec![0u8; degree as usize];
            let mut x = x;
            for slot in d.iter_mut() {
                *slot = x % p;
                x /= p;
            }
            d
        };
        let code = |d: &[u8]| -> u8 { d.iter().rev().fold(0u8, |acc, &c| acc * p + c) };
        let mut f = Gf { q, p, degree, add: [[0; 16]; 16], mul: [[0; 16]; 16], neg: [0; 16], inv: [0; 16] };
        for a in 0..n as u8 {
            let da = digits(a);
            for b in 0..n as u8 {
                let db = digits(b);
                let sum: Vec<u8> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                f.add[a as usize][b as usize] = code(&sum);
                // schoolbook product, then reduce by the monic modulus
                let mut prod = vec![0u32; 2 * degree as usize];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] += x as u32 * y as u32;
                    }
                }
                let d = degree as usize;
                for top in (d..prod.len()).rev() {
                    let c = prod[top] % p as u32;
                    if c == 0 {
                        continue;
                    }
                    for (k, &m) in modulus.iter().enumerate().take(d) {
                        let idx = top - d + k;
                        prod[idx] += (p as u32 - c) * m as u32;
                    }
                    prod[top] = 0;
                }
                let red: Vec<u8> = prod[..d].iter().map(|&c| (c % p as u32) as u8).collect();
                f.mul[a as usize][b as usize] = code(&red);
            }
        }
        for a in 0..n {
            f.neg[a] = (0..n as u8).find(|&b| f.add[a][b as usize] == 0).unwrap();
            f.inv[a] = if a == 0 { 0 } else { (1..n as u8).find(|&b| f.mul[a][b as usize] == 1).unwrap_or(0) };
        }
        Some(f)
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize][b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize][b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `inv(0)` is 0 by convention.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u8, mut e: u32) -> u8 {
        let (mut base, mut acc) = (a, 1u8);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// x -> x^(p^e), the e-th power of the Frobenius automorphism.
    pub fn frobenius(&self, a: u8, e: u32) -> u8 {
        let e = e % self.degree as u32;
        self.pow(a, (self.p as u32).pow(e))
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive(&self) -> u8 {
        (1..self.q)
            .find(|&a| (1..self.q as u32 - 1).all(|k| self.pow(a, k) != 1))
            .expect("finite field has a primitive element")
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q
    }

    pub fn nonzero(&self) -> impl Iterator<Item = u8> {
        1..self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_hold_for_every_supported_order() {
        for &(q, ..) in MODULI {
            let f = Gf::get(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1, "q={q} a={a}");
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn unsupported_orders_are_rejected() {
        for q in [0u8, 1, 6, 10, 12, 14, 15, 17] {
            assert!(Gf::get(q).is_err());
        }
    }

    #[test]
    fn frobenius_is_a_field_automorphism_of_gf4() {
        let f = Gf::get(4).unwrap();
        let fr = |a| f.frobenius(a, 1);
        let images: Vec<u8> = f.elements().map(fr).collect();
        // squaring swaps the two roots of x^2+x+1 and fixes the prime field
        assert_eq!(images, vec![0, 1, 3, 2]);
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(fr(f.mul(a, b)), f.mul(fr(a), fr(b)));
                assert_eq!(fr(f.add(a, b)), f.add(fr(a), fr(b)));
            }
        }
    }

    #[test]
    fn primitive_elements_generate_the_unit_group() {
        for &(q, ..) in MODULI {
            let f = Gf::get(q).unwrap();
            let g = f.primitive();
            let mut seen: Vec<u8> = (0..q as u32 - 1).map(|k| f.pow(g, k)).collect();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), q as usize - 1);
        }
    }
}
