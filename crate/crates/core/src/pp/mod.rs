//! The trinomial f(X) = X^(q^2-q+1) + A X^(q^2) + B X over F_{q^3}.
//!
//! Besides evaluation and the permutation test this module holds the two
//! parameter conditions under which f permutes F_{q^3}, the two families of
//! parameters for which f has a nonzero root, and the exhaustive / sampled
//! sweep driver in [`sweep`].

pub mod sweep;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{ExtElem, FieldTower};

/// Nonzero coefficients (A, B).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrinomialParams {
    a: ExtElem,
    b: ExtElem,
}

impl TrinomialParams {
    pub fn new(a: ExtElem, b: ExtElem) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroParameter);
        }
        Ok(TrinomialParams { a, b })
    }

    pub fn a(&self) -> ExtElem {
        self.a
    }

    pub fn b(&self) -> ExtElem {
        self.b
    }
}

/// One row of a classification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyRecord {
    #[serde(rename = "A")]
    pub a: ExtElem,
    #[serde(rename = "B")]
    pub b: ExtElem,
    pub is_pp: bool,
    pub cond1: bool,
    pub cond2: bool,
    pub prop3_i: bool,
    pub prop3_ii: bool,
    pub root_witness: Option<ExtElem>,
}

/// x^(q^2 - q + 1), taken as 0 at x = 0.
pub fn leading_power(f: &FieldTower, x: ExtElem) -> ExtElem {
    if x.is_zero() {
        return ExtElem::ZERO;
    }
    let inv_xq = f.inv(f.frobenius(x, 1)).expect("x is nonzero");
    f.mul(f.mul(f.frobenius(x, 2), x), inv_xq)
}

pub fn eval_f(f: &FieldTower, p: &TrinomialParams, x: ExtElem) -> ExtElem {
    if x.is_zero() {
        return ExtElem::ZERO;
    }
    leading_power(f, x) + f.mul(p.a, f.frobenius(x, 2)) + f.mul(p.b, x)
}

/// Occupancy bitset over packed element indices.
pub(crate) struct Occupancy(Vec<u64>);

impl Occupancy {
    pub(crate) fn new(n: u64) -> Self {
        Occupancy(vec![0; n.div_ceil(64) as usize])
    }

    /// Marks `idx`; returns false if it was already marked.
    #[inline]
    pub(crate) fn insert(&mut self, idx: u64) -> bool {
        let (w, bit) = ((idx >> 6) as usize, 1u64 << (idx & 63));
        let fresh = self.0[w] & bit == 0;
        self.0[w] |= bit;
        fresh
    }
}

/// Injectivity of f on F_{q^3}, stopping at the first repeated value.
pub fn is_permutation(f: &FieldTower, p: &TrinomialParams) -> bool {
    let mut seen = Occupancy::new(f.order());
    f.elements().all(|x| seen.insert(f.pack(eval_f(f, p, x))))
}

/// Reference test: tabulate all values and count distinct ones.
pub fn is_permutation_full_table(f: &FieldTower, p: &TrinomialParams) -> bool {
    let mut values: Vec<ExtElem> = f.elements().map(|x| eval_f(f, p, x)).collect();
    values.sort_unstable();
    values.dedup();
    values.len() as u64 == f.order()
}

fn aq_b(f: &FieldTower, p: &TrinomialParams) -> ExtElem {
    f.mul(f.frobenius(p.a, 1), p.b)
}

/// N(A) = N(B) and A^q B ∈ F_q \ {0, 1}.
pub fn cond1(f: &FieldTower, p: &TrinomialParams) -> bool {
    let z = aq_b(f, p);
    f.norm(p.a) == f.norm(p.b) && f.in_base_field(z) && !z.is_zero() && !z.is_one()
}

/// A^q B = 1 and N(B) != 1.
pub fn cond2(f: &FieldTower, p: &TrinomialParams) -> bool {
    aq_b(f, p).is_one() && !f.norm(p.b).is_one()
}

/// N(A) + A B^(q^2) + A^q B + A^(q^2) B^q + N(B) + 1, the scalar factor of
/// the X0^3 coefficient of G besides A^q B + 1.
pub fn norm_expression(f: &FieldTower, p: &TrinomialParams) -> ExtElem {
    let (a, b) = (p.a, p.b);
    f.norm(a)
        + f.mul(a, f.frobenius(b, 2))
        + f.mul(f.frobenius(a, 1), b)
        + f.mul(f.frobenius(a, 2), f.frobenius(b, 1))
        + f.norm(b)
        + ExtElem::ONE
}

/// A^q B = 1 and N(A) = 1.
pub fn prop3_i(f: &FieldTower, p: &TrinomialParams) -> bool {
    aq_b(f, p).is_one() && f.norm(p.a).is_one()
}

/// A^q B != 1 and the norm expression vanishes.
pub fn prop3_ii(f: &FieldTower, p: &TrinomialParams) -> bool {
    !aq_b(f, p).is_one() && norm_expression(f, p).is_zero()
}

/// All y with y^(q+1) + y^q + 1 = 0, searched inside the norm-one subgroup,
/// in canonical order.
pub fn unit_equation_solutions(f: &FieldTower) -> Vec<ExtElem> {
    let mut out: Vec<ExtElem> = f
        .norm_one_elements()
        .into_iter()
        .filter(|&y| is_unit_solution(f, y))
        .collect();
    out.sort_unstable();
    out
}

fn is_unit_solution(f: &FieldTower, y: ExtElem) -> bool {
    let yq = f.frobenius(y, 1);
    (f.mul(yq, y) + yq + ExtElem::ONE).is_zero()
}

/// Full scan over F_{q^3}; reference for [`unit_equation_solutions`].
pub fn unit_equation_solutions_full_scan(f: &FieldTower) -> Vec<ExtElem> {
    f.elements().filter(|&y| is_unit_solution(f, y)).collect()
}

/// u^q + A u^(q+1) + B, whose vanishing at u = x^(q-1) is f(x)/x = 0.
pub fn root_equation(f: &FieldTower, p: &TrinomialParams, u: ExtElem) -> ExtElem {
    let uq = f.frobenius(u, 1);
    uq + f.mul(p.a, f.mul(uq, u)) + p.b
}

/// A nonzero root of f, found by scanning u over the norm-one subgroup.
pub fn nontrivial_root(f: &FieldTower, p: &TrinomialParams) -> Option<ExtElem> {
    f.norm_one_elements()
        .into_iter()
        .find(|&u| root_equation(f, p, u).is_zero())
        .map(|u| f.qth_power_ratio_root(u).expect("u has norm one"))
}

/// Reference: the first nonzero x in canonical order with f(x) = 0.
pub fn nontrivial_root_full_scan(f: &FieldTower, p: &TrinomialParams) -> Option<ExtElem> {
    f.nonzero_elements().find(|&x| eval_f(f, p, x).is_zero())
}

/// Explicit nonzero root for the two non-permutation families.
///
/// Case (i): u = y / A for a solution y of the unit equation. Case (ii):
/// u = (A^q B + 1) / (A + B^(q+1)). In both cases the root is a nonzero x with
/// x^(q-1) = u.
pub fn prop3_witness(f: &FieldTower, p: &TrinomialParams) -> Option<ExtElem> {
    if prop3_i(f, p) {
        let a_inv = f.inv(p.a).expect("A is nonzero");
        for y in unit_equation_solutions(f) {
            let u = f.mul(y, a_inv);
            let x = f.qth_power_ratio_root(u).expect("N(y/A) = 1");
            if eval_f(f, p, x).is_zero() {
                return Some(x);
            }
        }
        unreachable!("every unit-equation solution yields a root when A^q B = 1 and N(A) = 1")
    }
    if prop3_ii(f, p) {
        let den = p.a + f.mul(p.b, f.frobenius(p.b, 1));
        assert!(
            !den.is_zero(),
            "A + B^(q+1) = 0 forces N(A) = N(B) = 1, contradicting A^q B != 1"
        );
        let u = f.div(aq_b(f, p) + ExtElem::ONE, den).expect("nonzero");
        let x = f.qth_power_ratio_root(u).expect("u has norm one in case (ii)");
        return Some(x);
    }
    None
}

/// Evaluates every predicate for one pair; `is_pp` uses the early-exit test.
pub fn classify_pair(f: &FieldTower, p: &TrinomialParams) -> ClassifyRecord {
    let root_witness = nontrivial_root(f, p);
    ClassifyRecord {
        a: p.a,
        b: p.b,
        is_pp: root_witness.is_none() && is_permutation(f, p),
        cond1: cond1(f, p),
        cond2: cond2(f, p),
        prop3_i: prop3_i(f, p),
        prop3_ii: prop3_ii(f, p),
        root_witness,
    }
}
