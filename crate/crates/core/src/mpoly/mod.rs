//! Sparse polynomials over F_{q^3} in X0, X1, X2, Y0, Y1, Y2.
//!
//! Terms are kept sorted in descending graded-lex order (X0 > X1 > X2 > Y0 >
//! Y1 > Y2) with no zero coefficients, so structural equality is equality of
//! term lists.

pub mod identity;
mod monomial;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{ExtElem, FieldTower};

pub use monomial::{Monomial, Var};

#[derive(Clone)]
pub struct MultiPoly {
    field: Arc<FieldTower>,
    terms: Vec<(Monomial, ExtElem)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other) && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

/// JSON form of one term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: [u8; 6],
    pub coeff: ExtElem,
}

impl MultiPoly {
    pub fn zero(field: &Arc<FieldTower>) -> Self {
        MultiPoly { field: field.clone(), terms: Vec::new() }
    }

    pub fn constant(field: &Arc<FieldTower>, c: ExtElem) -> Self {
        Self::term(field, c, Monomial::ONE)
    }

    pub fn one(field: &Arc<FieldTower>) -> Self {
        Self::constant(field, ExtElem::ONE)
    }

    pub fn var(field: &Arc<FieldTower>, v: Var) -> Self {
        Self::term(field, ExtElem::ONE, Monomial::var(v))
    }

    pub fn term(field: &Arc<FieldTower>, c: ExtElem, m: Monomial) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        MultiPoly { field: field.clone(), terms }
    }

    /// Sums the given terms, merging repeated monomials.
    pub fn from_terms<I>(field: &Arc<FieldTower>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, ExtElem)>,
    {
        let mut acc: HashMap<Monomial, ExtElem> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_default() += c;
        }
        Self::from_map(field, acc)
    }

    fn from_map(field: &Arc<FieldTower>, acc: HashMap<Monomial, ExtElem>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { field: field.clone(), terms }
    }

    pub fn field(&self) -> &Arc<FieldTower> {
        &self.field
    }

    pub fn terms(&self) -> &[(Monomial, ExtElem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exp(v) as u32).max()
    }

    pub fn involves(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.degree() {
            None => true,
            Some(d) => self.terms.iter().all(|(m, _)| m.degree() == d),
        }
    }

    pub fn leading_term(&self) -> Option<(Monomial, ExtElem)> {
        self.terms.first().copied()
    }

    pub fn coeff_of(&self, m: Monomial) -> ExtElem {
        self.terms
            .binary_search_by(|probe| m.cmp(&probe.0))
            .map(|i| self.terms[i].1)
            .unwrap_or(ExtElem::ZERO)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if !self.same_field(other) {
            return Err(Error::FieldMismatch);
        }
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = a[i].1 + b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(MultiPoly { field: self.field.clone(), terms: out })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if !self.same_field(other) {
            return Err(Error::FieldMismatch);
        }
        let f = &*self.field;
        let mut acc: HashMap<Monomial, ExtElem> = HashMap::with_capacity(self.len() * other.len());
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &other.terms {
                *acc.entry(ma * mb).or_default() += f.mul(ca, cb);
            }
        }
        Ok(Self::from_map(&self.field, acc))
    }

    pub fn scale(&self, c: ExtElem) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &*self.field;
        let terms = self.terms.iter().map(|&(m, x)| (m, f.mul(c, x))).collect();
        MultiPoly { field: self.field.clone(), terms }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Self {
        // multiplying by a monomial preserves the term order
        let terms = self.terms.iter().map(|&(t, c)| (t * m, c)).collect();
        MultiPoly { field: self.field.clone(), terms }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        while e != 0 {
            if e & 1 != 0 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e != 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficients of v^0, v^1, ..., v^d as polynomials free of v.
    pub fn coefficients_in(&self, v: Var) -> Vec<MultiPoly> {
        let d = self.degree_in(v).unwrap_or(0) as usize;
        let mut parts: Vec<Vec<(Monomial, ExtElem)>> = vec![Vec::new(); d + 1];
        for &(m, c) in &self.terms {
            parts[m.exp(v) as usize].push((m.with_exp(v, 0), c));
        }
        parts.into_iter().map(|t| Self::from_terms(&self.field, t)).collect()
    }

    /// (num, den) with `self` at v = a / b equal to num / den, where
    /// num = Σ_k c_k a^k b^(d-k) and den = b^d, d = deg_v(self).
    ///
    /// Nothing is cancelled; removing common factors is left to the caller.
    pub fn substitute(&self, v: Var, a: &Self, b: &Self) -> Result<(Self, Self)> {
        if !self.same_field(a) || !self.same_field(b) {
            return Err(Error::FieldMismatch);
        }
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let coeffs = self.coefficients_in(v);
        let d = coeffs.len() - 1;
        let mut a_pows = vec![Self::one(&self.field)];
        let mut b_pows = vec![Self::one(&self.field)];
        for k in 1..=d {
            a_pows.push(&a_pows[k - 1] * a);
            b_pows.push(&b_pows[k - 1] * b);
        }
        let mut num = Self::zero(&self.field);
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                num = &num + &(&(c * &a_pows[k]) * &b_pows[d - k]);
            }
        }
        Ok((num, b_pows[d].clone()))
    }

    /// (num, den) with v = num / den the solution of `self` = 0, for `self`
    /// of degree exactly 1 in v.
    pub fn solve_linear(&self, v: Var) -> Result<(Self, Self)> {
        let coeffs = self.coefficients_in(v);
        if coeffs.len() != 2 {
            return Err(Error::NotLinear(v.name()));
        }
        // c1 v + c0 = 0 in characteristic 2 gives v = c0 / c1
        Ok((coeffs[0].clone(), coeffs[1].clone()))
    }

    /// Exact quotient `self / b`, or [`Error::NotDivisible`].
    ///
    /// Leading-term elimination in graded-lex order. If b divides self, every
    /// remainder is again a multiple of b, so its leading monomial is divisible
    /// by LM(b); the first failure proves non-divisibility. The quotient is
    /// multiplied back before returning.
    pub fn exact_div(&self, b: &Self) -> Result<Self> {
        if !self.same_field(b) {
            return Err(Error::FieldMismatch);
        }
        let Some((lm_b, lc_b)) = b.leading_term() else {
            return Err(Error::DivisionByZero);
        };
        let f = &*self.field;
        let lc_inv = f.inv(lc_b)?;
        let mut rem: BTreeMap<Monomial, ExtElem> = self.terms.iter().copied().collect();
        let mut quot: Vec<(Monomial, ExtElem)> = Vec::new();
        while let Some((&m, &c)) = rem.last_key_value() {
            if !lm_b.divides(m) {
                return Err(Error::NotDivisible);
            }
            let qm = m / lm_b;
            let qc = f.mul(c, lc_inv);
            quot.push((qm, qc));
            for &(bm, bc) in &b.terms {
                let key = bm * qm;
                let entry = rem.entry(key).or_default();
                *entry += f.mul(bc, qc);
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
        }
        let q = MultiPoly { field: self.field.clone(), terms: quot };
        if &(&q * b) != self {
            return Err(Error::NotDivisible);
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.exact_div(self).is_ok()
    }

    fn map_terms<F>(&self, g: F) -> Self
    where
        F: Fn(Monomial, ExtElem) -> (Monomial, ExtElem),
    {
        Self::from_terms(&self.field, self.terms.iter().map(|&(m, c)| g(m, c)))
    }

    /// H(X0, X1, X2, Y0, Y1, Y2) -> H^q(X1, X2, X0, Y1, Y2, Y0): coefficients
    /// raised to the q-th power, X0 replaced by X1, X1 by X2, X2 by X0, and
    /// likewise in the Y block.
    pub fn psi_twist(&self) -> Self {
        let f = &*self.field;
        self.map_terms(|m, c| {
            let [x0, x1, x2, y0, y1, y2] = m.exps();
            (Monomial::new([x2, x0, x1, y2, y0, y1]), f.frobenius(c, 1))
        })
    }

    /// Exchange of the X and Y blocks.
    pub fn swap_blocks(&self) -> Self {
        self.map_terms(|m, c| {
            let [x0, x1, x2, y0, y1, y2] = m.exps();
            (Monomial::new([y0, y1, y2, x0, x1, x2]), c)
        })
    }

    /// Y2 := 1 on a polynomial in X0, Y0, Y1, Y2.
    pub fn dehomog_star(&self) -> Result<Self> {
        for v in [Var::X1, Var::X2] {
            if self.involves(v) {
                return Err(Error::UnexpectedVariable(v.name()));
            }
        }
        Ok(self.map_terms(|m, c| (m.with_exp(Var::Y2, 0), c)))
    }

    /// Y2^deg(self) · self(Y2 = 1 undone): inverse of [`Self::dehomog_star`] for
    /// polynomials in X0, Y0, Y1 of the given total degree.
    pub fn homogenize_y2(&self, degree: u32) -> Self {
        self.map_terms(|m, c| {
            let e = degree - m.degree();
            (m.with_exp(Var::Y2, e as u8), c)
        })
    }

    pub fn eval_at(&self, point: &[ExtElem; 6]) -> ExtElem {
        let f = &*self.field;
        let max_exp = self.terms.iter().flat_map(|(m, _)| m.exps()).max().unwrap_or(0) as usize;
        let pows: Vec<Vec<ExtElem>> = point
            .iter()
            .map(|&x| {
                let mut p = vec![ExtElem::ONE; max_exp + 1];
                for k in 1..=max_exp {
                    p[k] = f.mul(p[k - 1], x);
                }
                p
            })
            .collect();
        let mut acc = ExtElem::ZERO;
        for &(m, c) in &self.terms {
            let mut t = c;
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = f.mul(t, pows[i][e as usize]);
                }
            }
            acc += t;
        }
        acc
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field.inv(c).expect("nonzero")),
        }
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms.iter().map(|&(m, c)| TermJson { exponents: m.exps(), coeff: c }).collect()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if *m != Monomial::ONE {
                write!(f, " {m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    /// Panics if the operands live over different fields; see [`MultiPoly::checked_add`].
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("operands over different fields")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    /// Panics if the operands live over different fields; see [`MultiPoly::checked_mul`].
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("operands over different fields")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(m: u32) -> Arc<FieldTower> {
        Arc::new(FieldTower::new(m).unwrap())
    }

    fn random_poly(f: &Arc<FieldTower>, rng: &mut ChaCha8Rng, terms: usize, max_deg: u8) -> MultiPoly {
        MultiPoly::from_terms(
            f,
            (0..terms).map(|_| {
                let mut e = [0u8; 6];
                let mut budget = rng.gen_range(0..=max_deg);
                while budget > 0 {
                    e[rng.gen_range(0..6)] += 1;
                    budget -= 1;
                }
                (Monomial::new(e), f.unpack(rng.gen_range(1..f.order())))
            }),
        )
    }

    fn random_point(f: &FieldTower, rng: &mut ChaCha8Rng) -> [ExtElem; 6] {
        std::array::from_fn(|_| f.unpack(rng.gen_range(0..f.order())))
    }

    fn v(f: &Arc<FieldTower>, x: Var) -> MultiPoly {
        MultiPoly::var(f, x)
    }

    #[test]
    fn characteristic_two_cancellation() {
        let f = field(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_poly(&f, &mut rng, 12, 5);
        assert!((&p + &p).is_zero());
    }

    #[test]
    fn freshmans_dream() {
        let f = field(2);
        let s = &v(&f, Var::X0) + &v(&f, Var::Y0);
        let sq = &s * &s;
        let expected = &v(&f, Var::X0).pow(2) + &v(&f, Var::Y0).pow(2);
        assert_eq!(sq, expected);
    }

    #[test]
    fn product_degree_is_additive() {
        let f = field(3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let a = random_poly(&f, &mut rng, 6, 4);
            let b = random_poly(&f, &mut rng, 6, 4);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let ab = &a * &b;
            assert_eq!(ab.degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
            // the product is nonzero: find a point where it does not vanish
            assert!((0..50).any(|_| !ab.eval_at(&random_point(&f, &mut rng)).is_zero()));
        }
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let (f, g) = (field(2), field(3));
        let a = v(&f, Var::X0);
        let b = v(&g, Var::X0);
        assert_eq!(a.checked_add(&b), Err(Error::FieldMismatch));
        assert_eq!(a.checked_mul(&b), Err(Error::FieldMismatch));
        assert_eq!(a.exact_div(&b), Err(Error::FieldMismatch));
        // equal fields built separately are compatible
        let h = field(2);
        assert!(a.checked_add(&v(&h, Var::X1)).is_ok());
    }

    #[test]
    fn substitute_examples() {
        let f = field(2);
        let (x0, y0, y1) = (v(&f, Var::X0), v(&f, Var::Y0), v(&f, Var::Y1));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = random_poly(&f, &mut rng, 5, 3);
        let d = &random_poly(&f, &mut rng, 5, 3) + &MultiPoly::one(&f);
        assert_eq!(x0.substitute(Var::X0, &n, &d).unwrap(), (n.clone(), d.clone()));
        let (num, den) = x0.pow(2).substitute(Var::X0, &y0, &y1).unwrap();
        assert_eq!(num, y0.pow(2));
        assert_eq!(den, y1.pow(2));
        assert_eq!(x0.substitute(Var::X0, &y0, &MultiPoly::zero(&f)), Err(Error::DivisionByZero));
    }

    #[test]
    fn substitute_then_evaluate() {
        let f = field(3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let p = random_poly(&f, &mut rng, 8, 4);
            let a = random_poly(&f, &mut rng, 4, 2);
            let b = &random_poly(&f, &mut rng, 4, 2) + &MultiPoly::one(&f);
            let (num, den) = p.substitute(Var::X1, &a, &b).unwrap();
            let pt = random_point(&f, &mut rng);
            let bv = b.eval_at(&pt);
            if bv.is_zero() {
                continue;
            }
            let mut moved = pt;
            moved[Var::X1.index()] = f.div(a.eval_at(&pt), bv).unwrap();
            assert_eq!(f.div(num.eval_at(&pt), den.eval_at(&pt)).unwrap(), p.eval_at(&moved));
        }
    }

    #[test]
    fn exact_division_round_trip() {
        let f = field(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let b = random_poly(&f, &mut rng, 5, 4);
            let c = random_poly(&f, &mut rng, 6, 4);
            if b.is_zero() {
                continue;
            }
            assert_eq!((&b * &c).exact_div(&b).unwrap(), c);
        }
    }

    #[test]
    fn exact_division_failures() {
        let f = field(2);
        let x0 = v(&f, Var::X0);
        let p = &(&x0 * &v(&f, Var::Y1)) + &MultiPoly::one(&f);
        assert_eq!(p.exact_div(&x0), Err(Error::NotDivisible));
        assert_eq!(p.exact_div(&MultiPoly::zero(&f)), Err(Error::DivisionByZero));
        let q = &x0 + &v(&f, Var::Y0);
        assert_eq!((&q * &q).exact_div(&(&x0 + &v(&f, Var::Y1))), Err(Error::NotDivisible));
    }

    #[test]
    fn psi_twist_cubed_is_identity() {
        let f = field(3);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let p = random_poly(&f, &mut rng, 10, 5);
            assert_eq!(p.psi_twist().psi_twist().psi_twist(), p);
        }
    }

    #[test]
    fn psi_twist_is_ring_homomorphism() {
        let f = field(3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_poly(&f, &mut rng, 6, 3);
            let b = random_poly(&f, &mut rng, 6, 3);
            assert_eq!((&a + &b).psi_twist(), &a.psi_twist() + &b.psi_twist());
            assert_eq!((&a * &b).psi_twist(), &a.psi_twist() * &b.psi_twist());
        }
    }

    #[test]
    fn psi_twist_moves_variables_and_raises_coefficients() {
        let f = field(2);
        let c = ExtElem([0, 1, 0]);
        let p = MultiPoly::term(&f, c, Monomial::new([2, 0, 1, 0, 0, 3]));
        let expected = MultiPoly::term(&f, f.frobenius(c, 1), Monomial::new([1, 2, 0, 3, 0, 0]));
        assert_eq!(p.psi_twist(), expected);
    }

    #[test]
    fn coefficients_and_dehomogenization() {
        let f = field(2);
        let z = MultiPoly::zero(&f);
        assert_eq!(z.coeff_of(Monomial::new([1, 0, 0, 0, 0, 0])), ExtElem::ZERO);
        assert_eq!(v(&f, Var::Y2).pow(3).dehomog_star().unwrap(), MultiPoly::one(&f));
        assert_eq!(
            v(&f, Var::X1).dehomog_star(),
            Err(Error::UnexpectedVariable("X1"))
        );
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = random_poly(&f, &mut rng, 10, 4);
        for &(m, c) in p.terms() {
            assert_eq!(p.coeff_of(m), c);
        }
        let parts = p.coefficients_in(Var::X0);
        let rebuilt = parts.iter().enumerate().fold(MultiPoly::zero(&f), |acc, (k, c)| {
            &acc + &(c * &v(&f, Var::X0).pow(k as u32))
        });
        assert_eq!(rebuilt, p);
    }

    #[test]
    fn evaluation_examples() {
        let f = field(3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = f.unpack(rng.gen_range(0..f.order()));
        let s = &v(&f, Var::X0) + &v(&f, Var::Y0);
        let mut pt = random_point(&f, &mut rng);
        pt[0] = a;
        pt[3] = a;
        assert_eq!(s.eval_at(&pt), ExtElem::ZERO);
        for _ in 0..20 {
            let p = random_poly(&f, &mut rng, 6, 3);
            let r = random_poly(&f, &mut rng, 6, 3);
            let pt = random_point(&f, &mut rng);
            assert_eq!((&p * &r).eval_at(&pt), f.mul(p.eval_at(&pt), r.eval_at(&pt)));
        }
    }

    #[test]
    fn text_form() {
        let f = field(2);
        let p = &MultiPoly::term(&f, ExtElem([1, 2, 0]), Monomial::new([3, 0, 0, 1, 2, 0]))
            + &MultiPoly::one(&f);
        assert_eq!(p.to_string(), "(1,2,0) X0^3 Y0^1 Y1^2 + (1,0,0)");
        assert_eq!(MultiPoly::zero(&f).to_string(), "0");
        let json = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(json, r#"[{"exponents":[3,0,0,1,2,0],"coeff":"1,2,0"},{"exponents":[0,0,0,0,0,0],"coeff":"1,0,0"}]"#);
    }

    #[test]
    fn swap_blocks_involution() {
        let f = field(2);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let p = random_poly(&f, &mut rng, 10, 4);
        assert_eq!(p.swap_blocks().swap_blocks(), p);
    }
}
