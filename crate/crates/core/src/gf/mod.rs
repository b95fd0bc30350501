//! The tower GF(2) ⊂ F_q = GF(2^m) ⊂ F_{q^3}.
//!
//! F_q is GF(2)[t]/(p) with p from [`base::BASE_POLYS`], and F_{q^3} is
//! F_q[s]/(c) for a monic irreducible cubic c. An [`ExtElem`] stores the
//! coordinates (a0, a1, a2) of a0 + a1 s + a2 s^2. Because the extension is
//! cubic over F_q, the Frobenius x -> x^q is F_q-linear and is applied as a
//! precomputed 3x3 matrix.

pub mod base;
pub mod linalg;
mod spec;

use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use crate::error::{Error, Result};
use base::BaseField;
use linalg::Mat3;

pub use spec::FieldSpec;

/// Ext-field log/antilog tables are built when 3m is at most this.
pub const LOG_TABLE_MAX_BITS: u32 = 18;

/// Element a0 + a1 s + a2 s^2 of F_{q^3}; coordinates are F_q bitmasks.
///
/// The derived ordering is lexicographic in (a0, a1, a2) and is the canonical
/// enumeration order used by sweeps and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExtElem(pub [u16; 3]);

impl ExtElem {
    pub const ZERO: ExtElem = ExtElem([0, 0, 0]);
    pub const ONE: ExtElem = ExtElem([1, 0, 0]);

    pub const fn from_base(c: u16) -> Self {
        ExtElem([c, 0, 0])
    }

    pub fn coords(&self) -> [u16; 3] {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }
}

impl Add for ExtElem {
    type Output = ExtElem;

    #[inline]
    fn add(self, rhs: ExtElem) -> ExtElem {
        ExtElem([self.0[0] ^ rhs.0[0], self.0[1] ^ rhs.0[1], self.0[2] ^ rhs.0[2]])
    }
}

impl AddAssign for ExtElem {
    #[inline]
    fn add_assign(&mut self, rhs: ExtElem) {
        *self = *self + rhs;
    }
}

impl serde::Serialize for ExtElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for ExtElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x},{:x},{:x}", self.0[0], self.0[1], self.0[2])
    }
}

/// Parses the "a0,a1,a2" hex encoding without range checks; use
/// [`FieldTower::parse_elem`] to also check the coordinates fit the field.
impl FromStr for ExtElem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Encoding(s.to_string()));
        }
        let mut coords = [0u16; 3];
        for (c, part) in coords.iter_mut().zip(&parts) {
            let digits = part
                .strip_prefix("0x")
                .or_else(|| part.strip_prefix("0X"))
                .unwrap_or(part);
            *c = u16::from_str_radix(digits, 16).map_err(|_| Error::Encoding(s.to_string()))?;
        }
        Ok(ExtElem(coords))
    }
}

#[derive(Debug)]
struct LogTables {
    /// packed index -> discrete log (entry 0 unused)
    log: Vec<u32>,
    /// discrete log -> packed index, length q^3 - 1
    exp: Vec<u32>,
}

#[derive(Debug)]
pub struct FieldTower {
    base: BaseField,
    m: u32,
    q: u64,
    /// c0 + c1 s + c2 s^2 + s^3, stored low to high.
    ext_poly: [u16; 4],
    /// Rows are the images of 1, s, s^2 under x -> x^q and x -> x^(q^2).
    frob: [[ExtElem; 3]; 2],
    primitive: ExtElem,
    norm_one_generator: ExtElem,
    normal_xi: ExtElem,
    /// Inverse of the matrix whose columns are the coordinates of ξ, ξ^q, ξ^(q^2).
    normal_inv: Mat3,
    tables: Option<LogTables>,
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.ext_poly == other.ext_poly
    }
}

impl Eq for FieldTower {}

/// Distinct prime divisors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldTower {
    /// Tower for q = 2^m using the built-in base polynomial and the least
    /// irreducible cubic.
    pub fn new(m: u32) -> Result<Self> {
        if !(1..=16).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        let base = BaseField::new(m, base::BASE_POLYS[m as usize - 1])?;
        let ext = least_irreducible_cubic(&base);
        Self::build(base, ext)
    }

    pub fn with_polys(m: u32, base_poly: u32, ext_poly: [u16; 4]) -> Result<Self> {
        let base = BaseField::new(m, base_poly)?;
        let q = base.order();
        if ext_poly[3] != 1 || ext_poly.iter().any(|&c| c as u32 >= q) {
            return Err(Error::ReducibleExtension);
        }
        let c = [ext_poly[0], ext_poly[1], ext_poly[2]];
        if !cubic_is_irreducible(&base, c) {
            return Err(Error::ReducibleExtension);
        }
        Self::build(base, c)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        match (spec.base_poly()?, spec.ext_poly()?) {
            (None, None) => Self::new(spec.m),
            (bp, ep) => {
                let bp = bp.unwrap_or_else(|| {
                    base::BASE_POLYS.get(spec.m as usize - 1).copied().unwrap_or(0)
                });
                let ep = match ep {
                    Some(e) => e,
                    None => {
                        let base = BaseField::new(spec.m, bp)?;
                        let c = least_irreducible_cubic(&base);
                        [c[0], c[1], c[2], 1]
                    }
                };
                Self::with_polys(spec.m, bp, ep)
            }
        }
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec::from_polys(self.m, self.base.poly(), self.ext_poly)
    }

    fn build(base: BaseField, c: [u16; 3]) -> Result<Self> {
        let m = base.m();
        let q = base.order() as u64;
        let placeholder = ExtElem::ZERO;
        let mut tower = FieldTower {
            base,
            m,
            q,
            ext_poly: [c[0], c[1], c[2], 1],
            frob: [[placeholder; 3]; 2],
            primitive: placeholder,
            norm_one_generator: placeholder,
            normal_xi: placeholder,
            normal_inv: [[0; 3]; 3],
            tables: None,
        };
        let s = ExtElem([0, 1, 0]);
        for (k, e) in [q, q * q].into_iter().enumerate() {
            let sq = tower.pow_schoolbook(s, e);
            tower.frob[k] = [ExtElem::ONE, sq, tower.mul_schoolbook(sq, sq)];
        }
        tower.primitive = tower.search_primitive();
        tower.norm_one_generator = tower.pow(tower.primitive, q - 1);
        if 3 * m <= LOG_TABLE_MAX_BITS {
            tower.tables = Some(tower.build_tables());
        }
        tower.normal_xi = tower.find_normal_basis();
        let xi = tower.normal_xi;
        let conj = tower.conjugate_matrix(xi);
        tower.normal_inv = linalg::inverse(&tower.base, &conj)
            .expect("find_normal_basis returned a dependent element");
        Ok(tower)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// q^3, the number of elements of the extension.
    pub fn order(&self) -> u64 {
        self.q * self.q * self.q
    }

    pub fn base_field(&self) -> &BaseField {
        &self.base
    }

    pub fn base_poly(&self) -> u32 {
        self.base.poly()
    }

    pub fn ext_poly(&self) -> [u16; 4] {
        self.ext_poly
    }

    /// (log, exp) tables over packed indices when the field is small enough.
    pub(crate) fn log_tables(&self) -> Option<(&[u32], &[u32])> {
        self.tables.as_ref().map(|t| (t.log.as_slice(), t.exp.as_slice()))
    }

    pub fn has_log_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// Rejects encodings with coordinates outside F_q.
    pub fn parse_elem(&self, s: &str) -> Result<ExtElem> {
        let e: ExtElem = s.parse()?;
        if e.0.iter().any(|&c| c as u64 >= self.q) {
            return Err(Error::Encoding(s.to_string()));
        }
        Ok(e)
    }

    // Packed index: a0 in the high bits, so numeric order equals ExtElem order.
    #[inline]
    pub fn pack(&self, x: ExtElem) -> u64 {
        let m = self.m;
        ((x.0[0] as u64) << (2 * m)) | ((x.0[1] as u64) << m) | x.0[2] as u64
    }

    #[inline]
    pub fn unpack(&self, idx: u64) -> ExtElem {
        let m = self.m;
        let mask = (1u64 << m) - 1;
        ExtElem([
            ((idx >> (2 * m)) & mask) as u16,
            ((idx >> m) & mask) as u16,
            (idx & mask) as u16,
        ])
    }

    /// All q^3 elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        (0..self.order()).map(move |i| self.unpack(i))
    }

    /// All q^3 - 1 nonzero elements in canonical order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        (1..self.order()).map(move |i| self.unpack(i))
    }

    /// Images of F_q under the inclusion c -> (c, 0, 0).
    pub fn base_elements(&self) -> impl Iterator<Item = ExtElem> {
        (0..self.q as u16).map(ExtElem::from_base)
    }

    fn mul_schoolbook(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        let f = &self.base;
        let (a, b) = (a.0, b.0);
        // unreduced coefficients of the degree-4 product in s
        let mut c = [0u32; 5];
        for i in 0..3 {
            if a[i] == 0 {
                continue;
            }
            for j in 0..3 {
                c[i + j] ^= base::clmul(a[i], b[j]);
            }
        }
        let c: Vec<u16> = c.iter().map(|&x| f.reduce(x)).collect();
        let [e0, e1, e2, _] = self.ext_poly;
        // s^3 = e2 s^2 + e1 s + e0 (characteristic 2)
        let (mut r0, mut r1, mut r2) = (c[0], c[1], c[2]);
        // s^4 = e2 s^3 + e1 s^2 + e0 s
        let c3 = c[3] ^ f.mul(c[4], e2);
        r2 ^= f.mul(c[4], e1);
        r1 ^= f.mul(c[4], e0);
        r2 ^= f.mul(c3, e2);
        r1 ^= f.mul(c3, e1);
        r0 ^= f.mul(c3, e0);
        ExtElem([r0, r1, r2])
    }

    fn pow_schoolbook(&self, a: ExtElem, mut e: u64) -> ExtElem {
        let mut acc = ExtElem::ONE;
        let mut base = a;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul_schoolbook(acc, base);
            }
            base = self.mul_schoolbook(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn mul(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        if a.is_zero() || b.is_zero() {
            return ExtElem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n = self.order() - 1;
                let l = t.log[self.pack(a) as usize] as u64 + t.log[self.pack(b) as usize] as u64;
                let l = if l >= n { l - n } else { l };
                self.unpack(t.exp[l as usize] as u64)
            }
            None => self.mul_schoolbook(a, b),
        }
    }

    pub fn square(&self, a: ExtElem) -> ExtElem {
        self.mul(a, a)
    }

    /// Multiply by an element of F_q.
    pub fn scale_base(&self, c: u16, a: ExtElem) -> ExtElem {
        let f = &self.base;
        ExtElem([f.mul(c, a.0[0]), f.mul(c, a.0[1]), f.mul(c, a.0[2])])
    }

    /// Square-and-multiply. For nonzero `a` the exponent is reduced modulo
    /// q^3 - 1; `pow(0, 0)` is 1 and `pow(0, e)` is 0 for e > 0.
    pub fn pow(&self, a: ExtElem, e: u64) -> ExtElem {
        if a.is_zero() {
            return if e == 0 { ExtElem::ONE } else { ExtElem::ZERO };
        }
        let mut e = e % (self.order() - 1);
        if let Some(t) = &self.tables {
            let n = self.order() - 1;
            let l = (t.log[self.pack(a) as usize] as u128 * e as u128 % n as u128) as usize;
            return self.unpack(t.exp[l] as u64);
        }
        let mut acc = ExtElem::ONE;
        let mut base = a;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse via x^{-1} = x^q x^(q^2) / N(x), where the norm lies in F_q.
    pub fn inv(&self, a: ExtElem) -> Result<ExtElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let conj = self.mul(self.frobenius(a, 1), self.frobenius(a, 2));
        let n = self.mul(a, conj);
        debug_assert!(n.0[1] == 0 && n.0[2] == 0);
        Ok(self.scale_base(self.base.inv(n.0[0])?, conj))
    }

    pub fn div(&self, a: ExtElem, b: ExtElem) -> Result<ExtElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// x^(q^e) via the Frobenius matrix; `e` is taken modulo 3.
    pub fn frobenius(&self, x: ExtElem, e: u32) -> ExtElem {
        match e % 3 {
            0 => x,
            k => {
                let rows = &self.frob[k as usize - 1];
                let mut out = ExtElem::from_base(x.0[0]);
                out += self.scale_base(x.0[1], rows[1]);
                out += self.scale_base(x.0[2], rows[2]);
                out
            }
        }
    }

    /// x^(1 + q + q^2); the result lies in F_q.
    pub fn norm(&self, x: ExtElem) -> ExtElem {
        self.mul(x, self.mul(self.frobenius(x, 1), self.frobenius(x, 2)))
    }

    pub fn trace(&self, x: ExtElem) -> ExtElem {
        x + self.frobenius(x, 1) + self.frobenius(x, 2)
    }

    /// Membership in F_q, tested as z^q = z.
    pub fn in_base_field(&self, z: ExtElem) -> bool {
        self.frobenius(z, 1) == z
    }

    pub fn primitive_element(&self) -> ExtElem {
        self.primitive
    }

    /// Generator of the cyclic group {x : N(x) = 1} of order q^2 + q + 1.
    pub fn norm_one_generator(&self) -> ExtElem {
        self.norm_one_generator
    }

    /// The q^2 + q + 1 elements of norm 1, as successive powers of the generator.
    pub fn norm_one_elements(&self) -> Vec<ExtElem> {
        let n = self.q * self.q + self.q + 1;
        let g = self.norm_one_generator;
        let mut out = Vec::with_capacity(n as usize);
        let mut x = ExtElem::ONE;
        for _ in 0..n {
            out.push(x);
            x = self.mul(x, g);
        }
        out
    }

    fn search_primitive(&self) -> ExtElem {
        let n = self.order() - 1;
        let primes = prime_factors(n);
        for idx in 2..self.order() {
            let g = self.unpack(idx);
            if primes.iter().all(|p| !self.pow_schoolbook(g, n / p).is_one()) {
                return g;
            }
        }
        if n == 1 {
            return ExtElem::ONE;
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&self) -> LogTables {
        let n = (self.order() - 1) as usize;
        let mut log = vec![0u32; n + 1];
        let mut exp = vec![0u32; n];
        let mut x = ExtElem::ONE;
        for (i, slot) in exp.iter_mut().enumerate() {
            let p = self.pack(x) as u32;
            *slot = p;
            log[p as usize] = i as u32;
            x = self.mul_schoolbook(x, self.primitive);
        }
        LogTables { log, exp }
    }

    fn conjugate_matrix(&self, xi: ExtElem) -> Mat3 {
        let cols = [xi, self.frobenius(xi, 1), self.frobenius(xi, 2)];
        let mut m = [[0u16; 3]; 3];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..3 {
                m[i][j] = c.0[i];
            }
        }
        m
    }

    /// First element, in canonical order, whose conjugates ξ, ξ^q, ξ^(q^2)
    /// are linearly independent over F_q.
    pub fn find_normal_basis(&self) -> ExtElem {
        self.nonzero_elements()
            .find(|&xi| linalg::det(&self.base, &self.conjugate_matrix(xi)) != 0)
            .expect("every finite extension has a normal basis")
    }

    pub fn normal_xi(&self) -> ExtElem {
        self.normal_xi
    }

    /// (x0, x1, x2) with x = x0 ξ + x1 ξ^q + x2 ξ^(q^2).
    pub fn lambda_coords(&self, x: ExtElem) -> [u16; 3] {
        linalg::mat_vec(&self.base, &self.normal_inv, x.0)
    }

    pub fn from_lambda_coords(&self, c: [u16; 3]) -> ExtElem {
        let xi = self.normal_xi;
        let mut out = self.scale_base(c[0], xi);
        out += self.scale_base(c[1], self.frobenius(xi, 1));
        out += self.scale_base(c[2], self.frobenius(xi, 2));
        out
    }

    /// (x, x^q, x^(q^2)).
    pub fn theta_coords(&self, x: ExtElem) -> [ExtElem; 3] {
        [x, self.frobenius(x, 1), self.frobenius(x, 2)]
    }

    /// Some nonzero x with x^(q-1) = u, which exists exactly when N(u) = 1.
    ///
    /// x^q = u x is an F_q-linear condition on x, so x spans the kernel of
    /// Frob - (mult by u).
    pub fn qth_power_ratio_root(&self, u: ExtElem) -> Option<ExtElem> {
        let mut a = [[0u16; 3]; 3];
        let basis = [ExtElem([1, 0, 0]), ExtElem([0, 1, 0]), ExtElem([0, 0, 1])];
        for (j, e) in basis.into_iter().enumerate() {
            let col = self.frobenius(e, 1) + self.mul(u, e);
            for i in 0..3 {
                a[i][j] = col.0[i];
            }
        }
        linalg::kernel_vector(&self.base, &a).map(ExtElem)
    }
}

fn cubic_is_irreducible(base: &BaseField, c: [u16; 3]) -> bool {
    // a cubic is irreducible iff it has no root in F_q
    (0..base.order()).all(|x| {
        let x = x as u16;
        let x2 = base.mul(x, x);
        let x3 = base.mul(x2, x);
        let v = x3 ^ base.mul(c[2], x2) ^ base.mul(c[1], x) ^ c[0];
        v != 0
    })
}

/// Least monic irreducible s^3 + c2 s^2 + c1 s + c0, ordered by (c2, c1, c0).
fn least_irreducible_cubic(base: &BaseField) -> [u16; 3] {
    let q = base.order();
    for c2 in 0..q {
        for c1 in 0..q {
            for c0 in 1..q {
                let c = [c0 as u16, c1 as u16, c2 as u16];
                if cubic_is_irreducible(base, c) {
                    return c;
                }
            }
        }
    }
    unreachable!("irreducible cubics exist over every finite field")
}
