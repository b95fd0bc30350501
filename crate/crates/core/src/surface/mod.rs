//! The three-equation surface system over F_{q^3}, its elimination down to
//! the degree-8 polynomial G, and the coefficient and factorization checks
//! built on G.

pub mod claims;
pub mod elimination;
pub mod points;
pub mod system;

use std::sync::Arc;

use crate::gf::{ExtElem, FieldTower};
use crate::mpoly::{Monomial, MultiPoly, Var};
use crate::pp::TrinomialParams;

pub use claims::{
    factor_candidate_test, cond1_factorization, verify_claim_table, verify_factorization_aqb1, AqB1Factorization,
    ClaimKind, ClaimRow, ClaimTableReport, FactorCandidate, Cond1Factorization, Shape, SideCondition,
};
pub use elimination::{
    alpha_coefficient, derive_g, derive_g_alternate, gamma_top_coefficient, GChecks, GDecomposition, StripRecord,
};
pub use points::{curve_point_count, CurvePointCount};
pub use system::{build_system, component_membership, Component, ComponentReport, SurfaceSystem};

/// Shorthand for building polynomials over one field.
#[derive(Clone)]
pub(crate) struct Ring {
    pub field: Arc<FieldTower>,
}

impl Ring {
    pub fn new(field: &Arc<FieldTower>) -> Self {
        Ring { field: field.clone() }
    }

    pub fn v(&self, v: Var) -> MultiPoly {
        MultiPoly::var(&self.field, v)
    }

    pub fn zero(&self) -> MultiPoly {
        MultiPoly::zero(&self.field)
    }

    /// c · X0^e0 X1^e1 X2^e2 Y0^f0 Y1^f1 Y2^f2
    pub fn t(&self, c: ExtElem, exps: [u8; 6]) -> MultiPoly {
        MultiPoly::term(&self.field, c, Monomial::new(exps))
    }

    pub fn sum(&self, parts: &[MultiPoly]) -> MultiPoly {
        parts.iter().fold(self.zero(), |acc, p| &acc + p)
    }
}

/// A, B and their conjugates.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Conj {
    pub a: [ExtElem; 3],
    pub b: [ExtElem; 3],
}

impl Conj {
    pub fn new(f: &FieldTower, p: &TrinomialParams) -> Self {
        Conj {
            a: [p.a(), f.frobenius(p.a(), 1), f.frobenius(p.a(), 2)],
            b: [p.b(), f.frobenius(p.b(), 1), f.frobenius(p.b(), 2)],
        }
    }
}

/// N = Y0Y2 + A Y1Y2 + B Y0Y1.
pub fn n_poly(field: &Arc<FieldTower>, p: &TrinomialParams) -> MultiPoly {
    let r = Ring::new(field);
    r.sum(&[
        r.t(ExtElem::ONE, [0, 0, 0, 1, 0, 1]),
        r.t(p.a(), [0, 0, 0, 0, 1, 1]),
        r.t(p.b(), [0, 0, 0, 1, 1, 0]),
    ])
}

/// M = Y0Y1 + A^q Y0Y2 + B^q Y1Y2.
pub fn m_poly(field: &Arc<FieldTower>, p: &TrinomialParams) -> MultiPoly {
    let r = Ring::new(field);
    let c = Conj::new(field, p);
    r.sum(&[
        r.t(ExtElem::ONE, [0, 0, 0, 1, 1, 0]),
        r.t(c.a[1], [0, 0, 0, 1, 0, 1]),
        r.t(c.b[1], [0, 0, 0, 0, 1, 1]),
    ])
}

/// L = Y1Y2 + A^(q^2) Y0Y1 + B^(q^2) Y0Y2.
pub fn l_poly(field: &Arc<FieldTower>, p: &TrinomialParams) -> MultiPoly {
    let r = Ring::new(field);
    let c = Conj::new(field, p);
    r.sum(&[
        r.t(ExtElem::ONE, [0, 0, 0, 0, 1, 1]),
        r.t(c.a[2], [0, 0, 0, 1, 1, 0]),
        r.t(c.b[2], [0, 0, 0, 1, 0, 1]),
    ])
}
