//! GF(2^m) for 1 <= m <= 16, elements stored as `u16` coefficient bitmasks
//! (bit i is the coefficient of t^i).

use crate::error::{Error, Result};

/// Lexicographically least irreducible polynomial of degree m over GF(2),
/// indexed by m - 1. Bit i is the coefficient of t^i.
pub const BASE_POLYS: [u32; 16] = [
    0x2, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b,
];

/// Carry-less product of two GF(2) polynomials of degree < 16.
#[inline]
pub fn clmul(a: u16, b: u16) -> u32 {
    let a = a as u32;
    let mut b = b;
    let mut acc = 0u32;
    let mut shift = 0;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Trial division by every polynomial of degree 1..=deg/2.
pub fn is_irreducible_gf2(p: u32) -> bool {
    let p = p as u64;
    let d = degree(p);
    if d < 1 {
        return false;
    }
    for g in 2u64..(1u64 << (d / 2 + 1)) {
        if poly_rem(p, g) == 0 {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseField {
    m: u32,
    poly: u32,
}

impl BaseField {
    pub fn new(m: u32, poly: u32) -> Result<Self> {
        if !(1..=16).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        if degree(poly as u64) != m as i32 || !is_irreducible_gf2(poly) {
            return Err(Error::ReducibleBase(poly));
        }
        Ok(BaseField { m, poly })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    pub fn order(&self) -> u32 {
        1 << self.m
    }

    /// Reduce an unreduced carry-less product (degree <= 30).
    #[inline]
    pub fn reduce(&self, mut x: u32) -> u16 {
        let m = self.m;
        while x >> m != 0 {
            let d = 31 - x.leading_zeros();
            x ^= self.poly << (d - m);
        }
        x as u16
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.reduce(clmul(a, b))
    }

    pub fn pow(&self, a: u16, mut e: u64) -> u16 {
        let mut base = a;
        let mut acc = 1u16;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u16) -> Result<u16> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order() as u64 - 2))
    }
}
