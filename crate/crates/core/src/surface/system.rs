use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::{n_poly, Ring};
use crate::gf::{ExtElem, FieldTower};
use crate::mpoly::{MultiPoly, Var};
use crate::pp::TrinomialParams;

/// The system eq1 = eq2 = eq3 = 0 with eq2 and eq3 the successive twists of
/// eq1 = Y1(X0X2 + A X1X2 + B X0X1) + X1(Y0Y2 + A Y1Y2 + B Y0Y1).
#[derive(Debug, Clone)]
pub struct SurfaceSystem {
    pub params: TrinomialParams,
    pub eqs: [MultiPoly; 3],
}

pub fn build_system(field: &Arc<FieldTower>, p: &TrinomialParams) -> SurfaceSystem {
    let eq1 = f_bar(field, p);
    let eq2 = eq1.psi_twist();
    let eq3 = eq2.psi_twist();
    SurfaceSystem { params: *p, eqs: [eq1, eq2, eq3] }
}

/// eq1 as a single polynomial.
pub fn f_bar(field: &Arc<FieldTower>, p: &TrinomialParams) -> MultiPoly {
    let r = Ring::new(field);
    let x_side = r.sum(&[
        r.t(ExtElem::ONE, [1, 0, 1, 0, 0, 0]),
        r.t(p.a(), [0, 1, 1, 0, 0, 0]),
        r.t(p.b(), [1, 1, 0, 0, 0, 0]),
    ]);
    &(&r.v(Var::Y1) * &x_side) + &(&r.v(Var::X1) * &n_poly(field, p))
}

impl SurfaceSystem {
    pub fn field(&self) -> &Arc<FieldTower> {
        self.eqs[0].field()
    }

    pub fn satisfied_at(&self, pt: &[ExtElem; 6]) -> bool {
        self.eqs.iter().all(|e| e.eval_at(pt).is_zero())
    }

    pub fn twist_consistent(&self) -> bool {
        self.eqs[1] == self.eqs[0].psi_twist()
            && self.eqs[2] == self.eqs[1].psi_twist()
            && self.eqs[0] == self.eqs[2].psi_twist()
    }

    pub fn swap_symmetric(&self) -> bool {
        self.eqs.iter().all(|e| e.swap_blocks() == *e)
    }

    pub fn homogeneous_cubic(&self) -> bool {
        self.eqs.iter().all(|e| e.is_homogeneous() && e.degree() == Some(3))
    }
}

/// Image of a point under the map compatible with the twist: if H vanishes
/// at u then the twist of H vanishes at (u2^q, u0^q, u1^q, ...).
pub fn twist_point(f: &FieldTower, u: &[ExtElem; 6]) -> [ExtElem; 6] {
    let q = |x| f.frobenius(x, 1);
    [q(u[2]), q(u[0]), q(u[1]), q(u[5]), q(u[3]), q(u[4])]
}

pub fn swap_point(u: &[ExtElem; 6]) -> [ExtElem; 6] {
    [u[3], u[4], u[5], u[0], u[1], u[2]]
}

/// (x, x^q, x^(q^2), y, y^q, y^(q^2)).
pub fn conjugate_point(f: &FieldTower, x: ExtElem, y: ExtElem) -> [ExtElem; 6] {
    [x, f.frobenius(x, 1), f.frobenius(x, 2), y, f.frobenius(y, 1), f.frobenius(y, 2)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Component {
    /// X0 = X1 = X2 = 0.
    U1,
    /// Y0 = Y1 = Y2 = 0.
    U2,
    /// X = Y.
    U3,
    /// X0 = X2 = 0 and Y0Y2 + A Y1Y2 + B Y0Y1 = 0.
    U,
    /// The six images of U under the swap and the twist.
    Orbit,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    pub component: Component,
    pub samples: usize,
    pub all_on_system: bool,
    pub all_on_component: bool,
    /// Only for [`Component::Orbit`]: the six equation sets are pairwise distinct.
    pub distinct: Option<bool>,
}

impl ComponentReport {
    pub fn passed(&self) -> bool {
        self.all_on_system && self.all_on_component && self.distinct.unwrap_or(true)
    }
}

/// Generators of U as monic polynomials.
fn u_equations(field: &Arc<FieldTower>, p: &TrinomialParams) -> Vec<MultiPoly> {
    let r = Ring::new(field);
    vec![r.v(Var::X0), r.v(Var::X2), n_poly(field, p)]
}

/// The six members of the orbit of U with their equation sets and the point
/// maps carrying U onto each. Order: U, ΣU, ΨU, ΣΨU, Ψ²U, ΣΨ²U.
pub fn orbit_equations(field: &Arc<FieldTower>, p: &TrinomialParams) -> Vec<Vec<MultiPoly>> {
    let base = u_equations(field, p);
    let mut out = Vec::new();
    let mut cur = base;
    for _ in 0..3 {
        out.push(cur.clone());
        out.push(cur.iter().map(|e| e.swap_blocks()).collect());
        cur = cur.iter().map(|e| e.psi_twist()).collect();
    }
    out
}

fn random_u_point<R: Rng>(f: &FieldTower, p: &TrinomialParams, rng: &mut R) -> [ExtElem; 6] {
    let mut rand_elem = || f.unpack(rng.gen_range(0..f.order()));
    loop {
        let (x1, y0, y1) = (rand_elem(), rand_elem(), rand_elem());
        // N = Y2 (Y0 + A Y1) + B Y0 Y1 = 0
        let den = y0 + f.mul(p.a(), y1);
        if den.is_zero() {
            continue;
        }
        let y2 = f.div(f.mul(p.b(), f.mul(y0, y1)), den).expect("nonzero");
        return [ExtElem::ZERO, x1, ExtElem::ZERO, y0, y1, y2];
    }
}

fn canonical_set(eqs: &[MultiPoly]) -> Vec<String> {
    let mut v: Vec<String> = eqs.iter().map(|e| e.monic().to_string()).collect();
    v.sort();
    v
}

/// Samples points on a component and checks they lie on the system.
pub fn component_membership<R: Rng>(
    s: &SurfaceSystem,
    which: Component,
    samples: usize,
    rng: &mut R,
) -> ComponentReport {
    let field = s.field().clone();
    let f = &*field;
    let p = &s.params;
    let rand_elem = |rng: &mut R| f.unpack(rng.gen_range(0..f.order()));
    let mut all_on_system = true;
    let mut all_on_component = true;
    let mut distinct = None;
    match which {
        Component::U1 | Component::U2 | Component::U3 => {
            for _ in 0..samples {
                let a: [ExtElem; 3] = std::array::from_fn(|_| rand_elem(rng));
                let b: [ExtElem; 3] = std::array::from_fn(|_| rand_elem(rng));
                let pt = match which {
                    Component::U1 => [ExtElem::ZERO, ExtElem::ZERO, ExtElem::ZERO, b[0], b[1], b[2]],
                    Component::U2 => [a[0], a[1], a[2], ExtElem::ZERO, ExtElem::ZERO, ExtElem::ZERO],
                    _ => [a[0], a[1], a[2], a[0], a[1], a[2]],
                };
                all_on_system &= s.satisfied_at(&pt);
            }
        }
        Component::U => {
            let eqs = u_equations(&field, p);
            for _ in 0..samples {
                let pt = random_u_point(f, p, rng);
                all_on_component &= eqs.iter().all(|e| e.eval_at(&pt).is_zero());
                all_on_system &= s.satisfied_at(&pt);
            }
        }
        Component::Orbit => {
            let members = orbit_equations(&field, p);
            for _ in 0..samples {
                let u = random_u_point(f, p, rng);
                let t1 = twist_point(f, &u);
                let t2 = twist_point(f, &t1);
                let images = [u, swap_point(&u), t1, swap_point(&t1), t2, swap_point(&t2)];
                for (eqs, pt) in members.iter().zip(images.iter()) {
                    all_on_component &= eqs.iter().all(|e| e.eval_at(pt).is_zero());
                    all_on_system &= s.satisfied_at(pt);
                }
            }
            let sets: Vec<_> = members.iter().map(|m| canonical_set(m)).collect();
            let mut sorted = sets.clone();
            sorted.sort();
            sorted.dedup();
            distinct = Some(sorted.len() == 6);
        }
    }
    ComponentReport { component: which, samples, all_on_system, all_on_component, distinct }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_params(f: &FieldTower, rng: &mut ChaCha8Rng) -> TrinomialParams {
        TrinomialParams::new(f.unpack(rng.gen_range(1..f.order())), f.unpack(rng.gen_range(1..f.order())))
            .unwrap()
    }

    #[test]
    fn twist_and_swap_structure() {
        for m in 1..=4 {
            let f = Arc::new(FieldTower::new(m).unwrap());
            let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
            for _ in 0..5 {
                let s = build_system(&f, &random_params(&f, &mut rng));
                assert!(s.twist_consistent());
                assert!(s.swap_symmetric());
                assert!(s.homogeneous_cubic());
            }
        }
    }

    #[test]
    fn second_equation_literal() {
        let f = Arc::new(FieldTower::new(3).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = random_params(&f, &mut rng);
        let r = Ring::new(&f);
        let (aq, bq) = (f.frobenius(p.a(), 1), f.frobenius(p.b(), 1));
        // Y2(X0X1 + A^q X0X2 + B^q X1X2) + X2(Y0Y1 + A^q Y0Y2 + B^q Y1Y2)
        let expected = r.sum(&[
            r.t(ExtElem::ONE, [1, 1, 0, 0, 0, 1]),
            r.t(aq, [1, 0, 1, 0, 0, 1]),
            r.t(bq, [0, 1, 1, 0, 0, 1]),
            r.t(ExtElem::ONE, [0, 0, 1, 1, 1, 0]),
            r.t(aq, [0, 0, 1, 1, 0, 1]),
            r.t(bq, [0, 0, 1, 0, 1, 1]),
        ]);
        assert_eq!(build_system(&f, &p).eqs[1], expected);
    }

    #[test]
    fn curve_points_lie_on_system() {
        let f = Arc::new(FieldTower::new(2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut found = 0;
        for _ in 0..6 {
            let p = random_params(&f, &mut rng);
            let s = build_system(&f, &p);
            for x in f.nonzero_elements() {
                for y in f.nonzero_elements() {
                    let pt = conjugate_point(&f, x, y);
                    let on_curve = s.eqs[0].eval_at(&pt).is_zero();
                    assert_eq!(on_curve, pp_curve(&f, &p, x, y).is_zero());
                    if on_curve {
                        found += 1;
                        assert!(s.satisfied_at(&pt));
                    }
                }
            }
        }
        assert!(found > 0);
    }

    fn pp_curve(f: &FieldTower, p: &TrinomialParams, x: ExtElem, y: ExtElem) -> ExtElem {
        // y^q (x^(q^2+1) + A x^(q^2+q) + B x^(q+1)) + x^q (same in y)
        let part = |u: ExtElem, v: ExtElem| {
            let q = |z| f.frobenius(z, 1);
            let q2 = |z| f.frobenius(z, 2);
            let inner = f.mul(q2(u), u) + f.mul(p.a(), f.mul(q2(u), q(u))) + f.mul(p.b(), f.mul(q(u), u));
            f.mul(q(v), inner)
        };
        part(x, y) + part(y, x)
    }

    #[test]
    fn components_lie_on_system() {
        let f = Arc::new(FieldTower::new(2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..4 {
            let s = build_system(&f, &random_params(&f, &mut rng));
            for c in [Component::U1, Component::U2, Component::U3, Component::U, Component::Orbit] {
                let rep = component_membership(&s, c, 20, &mut rng);
                assert!(rep.passed(), "{c:?}");
            }
        }
    }
}
