//! Dense univariate polynomials over F_{q^3} with root finding.

use crate::gf::{ExtElem, FieldTower};

/// Fields up to this many elements are searched exhaustively for roots.
const BRUTE_FORCE_ORDER: u64 = 1 << 18;

/// Coefficients from the constant term up, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly(pub Vec<ExtElem>);

impl UPoly {
    pub fn new(mut c: Vec<ExtElem>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn x() -> Self {
        UPoly(vec![ExtElem::ZERO, ExtElem::ONE])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, f: &FieldTower, x: ExtElem) -> ExtElem {
        self.0.iter().rev().fold(ExtElem::ZERO, |acc, &c| f.mul(acc, x) + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let get = |p: &Self, i: usize| p.0.get(i).copied().unwrap_or(ExtElem::ZERO);
        UPoly::new((0..n).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn mul(&self, f: &FieldTower, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UPoly(Vec::new());
        }
        let mut out = vec![ExtElem::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += f.mul(a, b);
            }
        }
        UPoly::new(out)
    }

    /// Remainder of division by a nonzero `d`.
    pub fn rem(&self, f: &FieldTower, d: &Self) -> Self {
        self.div_rem(f, d).1
    }

    /// Panics if `d` is zero.
    pub fn div_rem(&self, f: &FieldTower, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(d.0[dd]).expect("nonzero leading coefficient");
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (UPoly(Vec::new()), self.clone());
        }
        let mut q = vec![ExtElem::ZERO; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = f.mul(r[k], lead_inv);
            if c.is_zero() {
                continue;
            }
            q[k - dd] = c;
            for (i, &di) in d.0.iter().enumerate() {
                r[k - dd + i] += f.mul(c, di);
            }
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn monic(&self, f: &FieldTower) -> Self {
        match self.0.last() {
            None => self.clone(),
            Some(&l) => {
                let inv = f.inv(l).expect("nonzero");
                UPoly(self.0.iter().map(|&c| f.mul(c, inv)).collect())
            }
        }
    }

    /// Monic greatest common divisor; zero only if both inputs are zero.
    pub fn gcd(f: &FieldTower, a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    fn mul_mod(&self, f: &FieldTower, other: &Self, m: &Self) -> Self {
        self.mul(f, other).rem(f, m)
    }

    /// x^(2^k) mod m by repeated squaring.
    fn x_pow2k_mod(f: &FieldTower, k: u32, m: &Self) -> Self {
        let mut acc = Self::x().rem(f, m);
        for _ in 0..k {
            acc = acc.mul_mod(f, &acc, m);
        }
        acc
    }

    /// Distinct roots in F_{q^3}, sorted in canonical order.
    pub fn roots(&self, f: &FieldTower) -> Vec<ExtElem> {
        let Some(d) = self.degree() else {
            return Vec::new();
        };
        if d == 0 {
            return Vec::new();
        }
        let mut out = if f.order() <= BRUTE_FORCE_ORDER {
            f.elements().filter(|&x| self.eval(f, x).is_zero()).collect()
        } else {
            // restrict to the product of the linear factors: gcd(p, x^|F| - x)
            let p = self.monic(f);
            let frob = Self::x_pow2k_mod(f, 3 * f.m(), &p).add(&Self::x());
            let split = Self::gcd(f, &p, &frob);
            let mut acc = Vec::new();
            split_linear(f, &split, 0, &mut acc);
            acc
        };
        out.sort();
        out
    }
}

/// Splits a squarefree product of distinct linear factors with the trace
/// maps x -> Tr(c x) for a deterministic sequence of c.
fn split_linear(f: &FieldTower, p: &UPoly, mut salt: u64, out: &mut Vec<ExtElem>) {
    match p.degree() {
        None | Some(0) => {}
        Some(1) => out.push(f.div(p.0[0], p.0[1]).expect("monic")),
        Some(_) => {
            let bits = 3 * f.m();
            loop {
                salt += 1;
                let c = f.unpack(salt % f.order());
                if c.is_zero() {
                    continue;
                }
                // Tr(c x) = sum of (c x)^(2^i), i < 3m, reduced mod p
                let cx = UPoly(vec![ExtElem::ZERO, c]).rem(f, p);
                let mut term = cx.clone();
                let mut tr = cx;
                for _ in 1..bits {
                    term = term.mul_mod(f, &term, p);
                    tr = tr.add(&term);
                }
                let g = UPoly::gcd(f, p, &tr);
                let dg = g.degree().unwrap_or(0);
                if dg > 0 && dg < p.degree().unwrap() {
                    let (h, _) = p.div_rem(f, &g);
                    split_linear(f, &g, salt, out);
                    split_linear(f, &h.monic(f), salt + 1000, out);
                    return;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn from_roots(f: &FieldTower, roots: &[ExtElem]) -> UPoly {
        roots.iter().fold(UPoly(vec![ExtElem::ONE]), |acc, &r| acc.mul(f, &UPoly(vec![r, ExtElem::ONE])))
    }

    #[test]
    fn div_rem_reconstructs() {
        let f = FieldTower::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = UPoly::new((0..7).map(|_| f.unpack(rng.gen_range(0..f.order()))).collect());
            let b = UPoly::new((0..3).map(|_| f.unpack(rng.gen_range(1..f.order()))).collect());
            let (q, r) = a.div_rem(&f, &b);
            assert_eq!(q.mul(&f, &b).add(&r), a);
            assert!(r.degree().map_or(true, |d| d < b.degree().unwrap()));
        }
    }

    #[test]
    fn roots_small_and_large_fields() {
        for m in [2, 7] {
            let f = FieldTower::new(m).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
            let mut roots: Vec<ExtElem> =
                (0..3).map(|_| f.unpack(rng.gen_range(0..f.order()))).collect();
            // an irreducible quadratic factor contributes no roots
            let extra = UPoly(vec![ExtElem::ONE, ExtElem::ONE, ExtElem::ONE]);
            let p = from_roots(&f, &roots).mul(&f, &extra).mul(&f, &UPoly(vec![roots[0], ExtElem::ONE]));
            roots.sort();
            roots.dedup();
            let mut expected = roots.clone();
            // x^2+x+1 splits over F_{2^{3m}} exactly when 3m is even
            if (3 * m) % 2 == 0 {
                expected.extend(f.elements().filter(|&x| extra.eval(&f, x).is_zero()));
                expected.sort();
                expected.dedup();
            }
            assert_eq!(p.roots(&f), expected, "m = {m}");
        }
    }
}
