//! Candidate linear factors of G_* and the coefficient identities that rule
//! them in or out.
//!
//! For ε = Y0^i Y1^j and σ = λ M_*^l N_*^k,
//! G̃ = ε^3 G_*(σ/ε) = λ^3 T3 + λ^2 T2 + λ T1 + T0 with
//! T3 = α M^(3l) N^(3k), T2 = β M^(2l) N^(2k) ε, T1 = γ M^l N^k ε^2, T0 = δ ε^3.
//! Every coefficient of G̃ is therefore a cubic in λ, which lets identities be
//! checked for all λ at once and lets the λ making G̃ vanish be solved for.

use std::sync::Arc;

use serde::Serialize;

use super::elimination::{derive_g, GDecomposition};
use super::Conj;
use crate::error::Result;
use crate::gf::{ExtElem, FieldTower};
use crate::mpoly::{Monomial, MultiPoly, Var};
use crate::pp::{norm_expression, TrinomialParams};
use crate::upoly::UPoly;

/// ε X0 + σ with ε = Y0^i Y1^j and σ = λ M_*^l N_*^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FactorCandidate {
    pub i: u8,
    pub j: u8,
    pub l: u8,
    pub k: u8,
    pub lambda: ExtElem,
}

/// The shape of a candidate without its scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Shape {
    pub i: u8,
    pub j: u8,
    pub l: u8,
    pub k: u8,
}

impl Shape {
    pub const fn new(i: u8, j: u8, l: u8, k: u8) -> Self {
        Shape { i, j, l, k }
    }

    pub fn with_lambda(self, lambda: ExtElem) -> FactorCandidate {
        FactorCandidate { i: self.i, j: self.j, l: self.l, k: self.k, lambda }
    }

    /// e.g. "Y0 Y1^2 X0 + λ M N^2".
    pub fn label(&self) -> String {
        let pw = |name: &str, e: u8| match e {
            0 => String::new(),
            1 => format!("{name} "),
            _ => format!("{name}^{e} "),
        };
        let eps = format!("{}{}", pw("Y0", self.i), pw("Y1", self.j));
        let sig = format!("{}{}", pw("M", self.l), pw("N", self.k));
        format!("{eps}X0 + λ {}", sig.trim_end()).trim_end().to_string()
    }

    fn epsilon(&self, f: &Arc<FieldTower>) -> MultiPoly {
        MultiPoly::term(f, ExtElem::ONE, Monomial::new([0, 0, 0, self.i, self.j, 0]))
    }
}

/// The four pieces T0..T3 of G̃ for a shape; G̃(λ) = Σ λ^e T_e.
pub fn lambda_expansion(g: &GDecomposition, s: Shape) -> [MultiPoly; 4] {
    let f = g.field();
    let eps = s.epsilon(f);
    let base = &g.m_star.pow(s.l as u32) * &g.n_star.pow(s.k as u32);
    let t3 = &g.alpha * &base.pow(3);
    let t2 = &(&g.beta * &base.pow(2)) * &eps;
    let t1 = &(&g.gamma * &base) * &eps.pow(2);
    let t0 = &g.delta * &eps.pow(3);
    [t0, t1, t2, t3]
}

fn evaluate_expansion(f: &FieldTower, t: &[MultiPoly; 4], lambda: ExtElem) -> MultiPoly {
    let mut acc = t[0].clone();
    let mut pw = ExtElem::ONE;
    for piece in &t[1..] {
        pw = f.mul(pw, lambda);
        acc = &acc + &piece.scale(pw);
    }
    acc
}

/// G̃ for a concrete candidate.
pub fn g_tilde(g: &GDecomposition, c: &FactorCandidate) -> MultiPoly {
    let t = lambda_expansion(g, Shape::new(c.i, c.j, c.l, c.k));
    evaluate_expansion(g.field(), &t, c.lambda)
}

/// True iff G̃ vanishes, i.e. ε X0 + σ divides G_*.
pub fn factor_candidate_test(g: &GDecomposition, c: &FactorCandidate) -> bool {
    g_tilde(g, c).is_zero()
}

/// The linear factor ε X0 + σ itself.
pub fn candidate_poly(g: &GDecomposition, c: &FactorCandidate) -> MultiPoly {
    let f = g.field();
    let s = Shape::new(c.i, c.j, c.l, c.k);
    let x0 = MultiPoly::var(f, Var::X0);
    let sigma = (&g.m_star.pow(c.l as u32) * &g.n_star.pow(c.k as u32)).scale(c.lambda);
    &(&s.epsilon(f) * &x0) + &sigma
}

/// Coefficient of a monomial of G̃ as a cubic in λ.
pub fn coefficient_in_lambda(t: &[MultiPoly; 4], mono: Monomial) -> UPoly {
    UPoly::new(t.iter().map(|p| p.coeff_of(mono)).collect())
}

/// All nonzero λ with G̃ = 0, from the gcd of the per-monomial cubics.
pub fn vanishing_lambdas(g: &GDecomposition, s: Shape) -> Vec<ExtElem> {
    let f = g.field();
    let t = lambda_expansion(g, s);
    let mut monos: Vec<Monomial> = t.iter().flat_map(|p| p.terms().iter().map(|(m, _)| *m)).collect();
    monos.sort();
    monos.dedup();
    let mut acc = UPoly::new(Vec::new());
    for m in monos {
        acc = UPoly::gcd(f, &acc, &coefficient_in_lambda(&t, m));
        if acc.degree() == Some(0) {
            return Vec::new();
        }
    }
    if acc.is_zero() {
        // G̃ is identically zero: every λ works
        return f.nonzero_elements().collect();
    }
    acc.roots(f).into_iter().filter(|x| !x.is_zero()).collect()
}

/// Y0^a Y1^b.
fn y(a: u8, b: u8) -> Monomial {
    Monomial::new([0, 0, 0, a, b, 0])
}

/// Parameter substitution a claim is stated under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SideCondition {
    None,
    /// A = B^(q+1).
    AEqualsBqPlus1,
    /// A = B^(q+1) and N(B) = 1.
    AEqualsBqPlus1NormOne,
    /// λ = B^q / (A^(q+1) + B^q).
    SpecialLambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClaimKind {
    /// A monomial coefficient of G̃ equals a closed form for every λ.
    Coefficient,
    /// No nonzero λ makes G̃ vanish (requires α ≠ 0).
    NoDivisor,
    /// Some λ makes G̃ vanish only if A^q B ∈ F_q \ {0, 1} and N(A) = N(B).
    DivisorImpliesCond1,
    /// No λ makes G̃ vanish, for the shapes excluded by degree counting.
    ExcludedShape,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimRow {
    pub id: String,
    pub candidate: String,
    pub kind: ClaimKind,
    pub side_condition: SideCondition,
    #[serde(rename = "A")]
    pub a: ExtElem,
    #[serde(rename = "B")]
    pub b: ExtElem,
    /// Exponents of Y0 and Y1, for coefficient claims.
    pub monomial: Option<[u8; 2]>,
    pub lambdas_checked: usize,
    pub passed: bool,
    /// Expected and actual values on failure.
    pub counterexample: Option<String>,
    /// For rows whose stated form is known to be off: whether the corrected form holds.
    pub corrected_passed: Option<bool>,
    pub correction: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimTableReport {
    #[serde(rename = "A")]
    pub a: ExtElem,
    #[serde(rename = "B")]
    pub b: ExtElem,
    pub alpha_nonzero: bool,
    pub rows: Vec<ClaimRow>,
}

impl ClaimTableReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    /// Every row passes, counting a row with a known correction as passing when
    /// the corrected form holds.
    pub fn passed_with_corrections(&self) -> bool {
        self.rows.iter().all(|r| r.passed || r.corrected_passed == Some(true))
    }
}

/// Closed form of a coefficient claim as a polynomial in λ, constant term first.
type ClosedForm = fn(&FieldTower, &Conj) -> [ExtElem; 4];

struct CoefficientClaim {
    id: &'static str,
    shape: Shape,
    mono: (u8, u8),
    side: SideCondition,
    closed: ClosedForm,
    /// Form that the computation actually produces, where it differs from the stated one.
    corrected: Option<Correction>,
}

#[derive(Clone, Copy)]
struct Correction {
    mono: (u8, u8),
    closed: ClosedForm,
    note: &'static str,
}

fn norm(f: &FieldTower, x: ExtElem) -> ExtElem {
    f.norm(x)
}

fn aqb1(f: &FieldTower, c: &Conj) -> ExtElem {
    f.mul(c.a[1], c.b[0]) + ExtElem::ONE
}

fn normexpr(f: &FieldTower, c: &Conj) -> ExtElem {
    let p = TrinomialParams::new(c.a[0], c.b[0]).expect("nonzero");
    norm_expression(f, &p)
}

fn mul_all(f: &FieldTower, xs: &[ExtElem]) -> ExtElem {
    xs.iter().fold(ExtElem::ONE, |acc, &x| f.mul(acc, x))
}

const Z: ExtElem = ExtElem::ZERO;

fn coefficient_claims() -> Vec<CoefficientClaim> {
    vec![
        CoefficientClaim {
            id: "Y1^2, N^2",
            shape: Shape::new(0, 2, 0, 2),
            mono: (5, 7),
            side: SideCondition::None,
            // λ A^(1+q^2) (A^q B + 1)
            closed: |f, c| [Z, mul_all(f, &[c.a[0], c.a[2], aqb1(f, c)]), Z, Z],
            corrected: Some(Correction {
                mono: (5, 7),
                closed: |f, c| [Z, mul_all(f, &[c.a[0], c.a[2], f.square(aqb1(f, c))]), Z, Z],
                note: "λ A^(1+q^2) (A^q B + 1)^2",
            }),
        },
        CoefficientClaim {
            id: "Y0Y1, N^2",
            shape: Shape::new(1, 1, 0, 2),
            mono: (6, 5),
            side: SideCondition::None,
            // λ A B^q (A^q B + 1) (A + B^(q+1))^(q^2)
            closed: |f, c| {
                let s = c.a[0] + f.mul(c.b[0], c.b[1]);
                [Z, mul_all(f, &[c.a[0], c.b[1], aqb1(f, c), f.frobenius(s, 2)]), Z, Z]
            },
            corrected: None,
        },
        CoefficientClaim {
            id: "Y0Y1, N^2 | A = B^(q+1)",
            shape: Shape::new(1, 1, 0, 2),
            mono: (1, 7),
            side: SideCondition::AEqualsBqPlus1,
            // λ^3 B^(6(1+q)) (N(B) + 1)^3
            closed: |f, c| {
                let b6 = f.pow(f.mul(c.b[0], c.b[1]), 6);
                let nb1 = norm(f, c.b[0]) + ExtElem::ONE;
                [Z, Z, Z, f.mul(b6, f.pow(nb1, 3))]
            },
            corrected: Some(Correction {
                mono: (1, 8),
                closed: |f, c| {
                    let b6 = f.pow(f.mul(c.b[0], c.b[1]), 6);
                    let nb1 = norm(f, c.b[0]) + ExtElem::ONE;
                    [Z, Z, Z, f.mul(b6, f.pow(nb1, 3))]
                },
                note: "same value at Y0 Y1^8",
            }),
        },
        CoefficientClaim {
            id: "Y0Y1, N^2 | A = B^(q+1), N(B) = 1",
            shape: Shape::new(1, 1, 0, 2),
            mono: (7, 7),
            side: SideCondition::AEqualsBqPlus1NormOne,
            // B^2
            closed: |f, c| [f.square(c.b[0]), Z, Z, Z],
            corrected: None,
        },
        CoefficientClaim {
            id: "Y1^2, MN",
            shape: Shape::new(0, 2, 1, 1),
            mono: (7, 8),
            side: SideCondition::None,
            // λ^3 B^3 (A^q B + 1) (normexpr)
            closed: |f, c| [Z, Z, Z, mul_all(f, &[f.pow(c.b[0], 3), aqb1(f, c), normexpr(f, c)])],
            corrected: None,
        },
        CoefficientClaim {
            id: "Y1^2, M^2",
            shape: Shape::new(0, 2, 2, 0),
            mono: (5, 7),
            side: SideCondition::None,
            // λ B^(q+q^2) (A^q B + 1)
            closed: |f, c| [Z, mul_all(f, &[c.b[1], c.b[2], aqb1(f, c)]), Z, Z],
            corrected: Some(Correction {
                mono: (5, 7),
                closed: |f, c| [Z, mul_all(f, &[c.b[1], c.b[2], f.square(aqb1(f, c))]), Z, Z],
                note: "λ B^(q+q^2) (A^q B + 1)^2",
            }),
        },
        CoefficientClaim {
            id: "Y1, N",
            shape: Shape::new(0, 1, 0, 1),
            mono: (1, 7),
            side: SideCondition::None,
            // λ A^3 (A^q B + 1)^q
            closed: |f, c| [Z, f.mul(f.pow(c.a[0], 3), f.frobenius(aqb1(f, c), 1)), Z, Z],
            corrected: None,
        },
        CoefficientClaim {
            id: "Y0, N",
            shape: Shape::new(1, 0, 0, 1),
            mono: (7, 0),
            side: SideCondition::None,
            // A^(2q)
            closed: |f, c| [f.square(c.a[1]), Z, Z, Z],
            corrected: None,
        },
        CoefficientClaim {
            id: "1, M",
            shape: Shape::new(0, 0, 1, 0),
            mono: (1, 3),
            side: SideCondition::None,
            // λ B^(3q) (A^q B + 1)^(q^2)
            closed: |f, c| [Z, f.mul(f.pow(c.b[1], 3), f.frobenius(aqb1(f, c), 2)), Z, Z],
            corrected: None,
        },
        CoefficientClaim {
            id: "Y0, M",
            shape: Shape::new(1, 0, 1, 0),
            mono: (7, 0),
            side: SideCondition::None,
            // A^(2q)
            closed: |f, c| [f.square(c.a[1]), Z, Z, Z],
            corrected: None,
        },
        CoefficientClaim {
            id: "1, N",
            shape: Shape::new(0, 0, 0, 1),
            mono: (0, 4),
            side: SideCondition::None,
            // A^2 B^q ((A^(q+1) + B^q) λ + B^q)
            closed: |f, c| {
                let k = f.mul(f.square(c.a[0]), c.b[1]);
                let s = f.mul(c.a[0], c.a[1]) + c.b[1];
                [f.mul(k, c.b[1]), f.mul(k, s), Z, Z]
            },
            corrected: None,
        },
        CoefficientClaim {
            id: "1, N | λ = B^q/(A^(q+1)+B^q), Y0^2Y1^2",
            shape: Shape::new(0, 0, 0, 1),
            mono: (2, 2),
            side: SideCondition::SpecialLambda,
            // A^(1+q) (A^(q+1) + B^q) (A^(1+2q) + B^(2q+q^2))
            closed: |f, c| {
                let s = f.mul(c.a[0], c.a[1]) + c.b[1];
                let t = f.mul(c.a[0], f.square(c.a[1])) + f.mul(f.square(c.b[1]), c.b[2]);
                [mul_all(f, &[c.a[0], c.a[1], s, t]), Z, Z, Z]
            },
            corrected: Some(Correction {
                mono: (2, 2),
                // A^(2+q) (A^(1+2q) + B^(2q+q^2)) / (A^(q+1) + B^q)
                closed: |f, c| {
                    let s = f.mul(c.a[0], c.a[1]) + c.b[1];
                    let t = f.mul(c.a[0], f.square(c.a[1])) + f.mul(f.square(c.b[1]), c.b[2]);
                    let v = mul_all(f, &[f.square(c.a[0]), c.a[1], t]);
                    [f.div(v, s).expect("side condition"), Z, Z, Z]
                },
                note: "stated value times A / (A^(q+1) + B^q)^2",
            }),
        },
        CoefficientClaim {
            id: "1, N | λ = B^q/(A^(q+1)+B^q), Y0^2Y1^3",
            shape: Shape::new(0, 0, 0, 1),
            mono: (2, 3),
            side: SideCondition::SpecialLambda,
            // A^(1+q) B^q (A^(q+1) + B^q) (N(A) + A^q B + A^(q^2) B^q + N(B))
            closed: |f, c| {
                let s = f.mul(c.a[0], c.a[1]) + c.b[1];
                let t = norm(f, c.a[0]) + f.mul(c.a[1], c.b[0]) + f.mul(c.a[2], c.b[1]) + norm(f, c.b[0]);
                [mul_all(f, &[c.a[0], c.a[1], c.b[1], s, t]), Z, Z, Z]
            },
            corrected: Some(Correction {
                mono: (2, 3),
                // A^(2+q) B^q (N(A) + A^q B + A^(q^2) B^q + N(B)) / (A^(q+1) + B^q)
                closed: |f, c| {
                    let s = f.mul(c.a[0], c.a[1]) + c.b[1];
                    let t = norm(f, c.a[0]) + f.mul(c.a[1], c.b[0]) + f.mul(c.a[2], c.b[1]) + norm(f, c.b[0]);
                    let v = mul_all(f, &[f.square(c.a[0]), c.a[1], c.b[1], t]);
                    [f.div(v, s).expect("side condition"), Z, Z, Z]
                },
                note: "stated value times A / (A^(q+1) + B^q)^2",
            }),
        },
    ]
}

/// Shapes whose non-divisibility is argued by analogy rather than by a
/// stated coefficient.
const ANALOGOUS_SHAPES: [(&str, Shape); 4] = [
    ("Y0Y1^2, N^2", Shape::new(1, 2, 0, 2)),
    ("Y0Y1^2, MN", Shape::new(1, 2, 1, 1)),
    ("Y0Y1, M^2", Shape::new(1, 1, 2, 0)),
    ("Y0Y1^2, M^2", Shape::new(1, 2, 2, 0)),
];

/// The two shapes whose divisibility forces the first parameter condition.
const COND1_SHAPES: [(&str, Shape); 2] =
    [("1, N", Shape::new(0, 0, 0, 1)), ("Y1, M", Shape::new(0, 1, 1, 0))];

/// Shapes excluded by the degree argument: l+k >= 3; l+k = 2 with i+j < 2;
/// l+k = 0; l+k = 1 with i+j >= 2.
pub fn excluded_shapes() -> Vec<Shape> {
    let mut out = Vec::new();
    for i in 0..=1 {
        for j in 0..=2 {
            for l in 0..=2 {
                for k in 0..=2 {
                    let (e, s) = (i + j, l + k);
                    if s >= 3 || (s == 2 && e < 2) || s == 0 || (s == 1 && e >= 2) {
                        out.push(Shape::new(i, j, l, k));
                    }
                }
            }
        }
    }
    out
}

/// Deterministic λ values: the first few nonzero elements in canonical order.
pub fn lambda_set(f: &FieldTower, n: usize) -> Vec<ExtElem> {
    f.nonzero_elements().take(n).collect()
}

/// Parameters satisfying a side condition, derived from (A, B).
pub fn side_condition_params(f: &FieldTower, p: &TrinomialParams, side: SideCondition) -> Option<TrinomialParams> {
    let b = p.b();
    match side {
        SideCondition::None => Some(*p),
        SideCondition::AEqualsBqPlus1 => TrinomialParams::new(f.mul(f.frobenius(b, 1), b), b).ok(),
        SideCondition::AEqualsBqPlus1NormOne => {
            // B^(q-1) has norm 1
            let b1 = f.div(f.frobenius(b, 1), b).ok()?;
            TrinomialParams::new(f.mul(f.frobenius(b1, 1), b1), b1).ok()
        }
        SideCondition::SpecialLambda => {
            let s = f.mul(p.a(), f.frobenius(p.a(), 1)) + f.frobenius(b, 1);
            (!s.is_zero()).then_some(*p)
        }
    }
}

fn special_lambda(f: &FieldTower, p: &TrinomialParams) -> ExtElem {
    let bq = f.frobenius(p.b(), 1);
    let s = f.mul(p.a(), f.frobenius(p.a(), 1)) + bq;
    f.div(bq, s).expect("side condition checked")
}

/// "c0 + c1 λ + ..." with zero terms omitted.
fn lambda_poly_text(p: &UPoly) -> String {
    let terms: Vec<String> = p
        .0
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| match e {
            0 => format!("({c})"),
            1 => format!("({c}) λ"),
            _ => format!("({c}) λ^{e}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Compares one monomial coefficient of G̃ with a closed form: for every λ at
/// once, or at the special λ under that side condition.
fn check_form(
    f: &FieldTower,
    q: &TrinomialParams,
    t: &[MultiPoly; 4],
    mono: (u8, u8),
    closed: ClosedForm,
    side: SideCondition,
    lambdas: &[ExtElem],
) -> (bool, usize, Option<String>) {
    let c = Conj::new(f, q);
    let m = y(mono.0, mono.1);
    let actual = coefficient_in_lambda(t, m);
    let expected = UPoly::new(closed(f, &c).to_vec());
    if side == SideCondition::SpecialLambda {
        let lam = special_lambda(f, q);
        let got = actual.eval(f, lam);
        let want = expected.eval(f, lam);
        let ok = got == want;
        return (ok, 1, (!ok).then(|| format!("expected {want}, got {got} at λ = {lam}")));
    }
    let mut ok = actual == expected;
    // spot evaluation of the full G̃ at concrete λ
    for &lam in lambdas {
        ok &= evaluate_expansion(f, t, lam).coeff_of(m) == expected.eval(f, lam);
    }
    let detail = (!ok).then(|| format!("expected {}, got {}", lambda_poly_text(&expected), lambda_poly_text(&actual)));
    (ok, lambdas.len(), detail)
}

fn coefficient_row(
    f: &Arc<FieldTower>,
    p: &TrinomialParams,
    claim: &CoefficientClaim,
    cache: &mut Vec<(TrinomialParams, GDecomposition)>,
    lambdas: &[ExtElem],
) -> Result<Option<ClaimRow>> {
    let Some(q) = side_condition_params(f, p, claim.side) else {
        return Ok(None);
    };
    let g = decomposition(f, &q, cache)?;
    let t = lambda_expansion(&g, claim.shape);
    let (passed, lambdas_checked, counterexample) =
        check_form(f, &q, &t, claim.mono, claim.closed, claim.side, lambdas);
    let corrected_passed =
        claim.corrected.map(|c| check_form(f, &q, &t, c.mono, c.closed, claim.side, lambdas).0);
    Ok(Some(ClaimRow {
        id: claim.id.to_string(),
        candidate: claim.shape.label(),
        kind: ClaimKind::Coefficient,
        side_condition: claim.side,
        a: q.a(),
        b: q.b(),
        monomial: Some([claim.mono.0, claim.mono.1]),
        lambdas_checked,
        passed,
        counterexample,
        corrected_passed,
        correction: claim.corrected.map(|c| {
            let (a, b) = c.mono;
            format!("Y0^{a} Y1^{b}: {}", c.note)
        }),
    }))
}

fn decomposition(
    f: &Arc<FieldTower>,
    p: &TrinomialParams,
    cache: &mut Vec<(TrinomialParams, GDecomposition)>,
) -> Result<GDecomposition> {
    if let Some((_, g)) = cache.iter().find(|(k, _)| k == p) {
        return Ok(g.clone());
    }
    let g = derive_g(f, p)?;
    cache.push((*p, g.clone()));
    Ok(g)
}

fn is_cond1(f: &FieldTower, p: &TrinomialParams) -> bool {
    crate::pp::cond1(f, p)
}

/// Runs every claim for one parameter pair. Rows needing α ≠ 0 are skipped
/// when α = 0; rows under side conditions use parameters derived from (A, B).
pub fn verify_claim_table(f: &Arc<FieldTower>, p: &TrinomialParams) -> Result<ClaimTableReport> {
    let mut cache = Vec::new();
    let g = decomposition(f, p, &mut cache)?;
    let alpha_nonzero = !g.alpha.is_zero();
    let lambdas = lambda_set(f, 4);
    let mut rows = Vec::new();
    for claim in coefficient_claims() {
        if let Some(row) = coefficient_row(f, p, &claim, &mut cache, &lambdas)? {
            rows.push(row);
        }
    }
    let row = |id: &str, shape: Shape, kind: ClaimKind, passed: bool, detail: Option<String>| ClaimRow {
        id: match kind {
            ClaimKind::NoDivisor => format!("{id}: no λ"),
            ClaimKind::DivisorImpliesCond1 => format!("{id}: divisor forces condition"),
            _ => id.to_string(),
        },
        candidate: shape.label(),
        kind,
        side_condition: SideCondition::None,
        a: p.a(),
        b: p.b(),
        monomial: None,
        lambdas_checked: f.order() as usize - 1,
        passed,
        counterexample: detail,
        corrected_passed: None,
        correction: None,
    };
    if alpha_nonzero {
        for claim in coefficient_claims().iter().filter(|c| c.side == SideCondition::None && c.id != "1, N") {
            let sols = vanishing_lambdas(&g, claim.shape);
            let detail = (!sols.is_empty()).then(|| format!("divides for λ = {}", sols[0]));
            rows.push(row(claim.id, claim.shape, ClaimKind::NoDivisor, sols.is_empty(), detail));
        }
        for (id, shape) in ANALOGOUS_SHAPES {
            let sols = vanishing_lambdas(&g, shape);
            let detail = (!sols.is_empty()).then(|| format!("divides for λ = {}", sols[0]));
            rows.push(row(id, shape, ClaimKind::NoDivisor, sols.is_empty(), detail));
        }
        let cond1 = is_cond1(f, p);
        for (id, shape) in COND1_SHAPES {
            let sols = vanishing_lambdas(&g, shape);
            let ok = sols.is_empty() || cond1;
            let detail = (!ok).then(|| format!("divides for λ = {} without the condition", sols[0]));
            rows.push(row(id, shape, ClaimKind::DivisorImpliesCond1, ok, detail));
        }
        let bad: Vec<Shape> =
            excluded_shapes().into_iter().filter(|&s| !vanishing_lambdas(&g, s).is_empty()).collect();
        let detail = bad.first().map(|s| format!("{} divides", s.label()));
        rows.push(row("excluded shapes", Shape::new(0, 0, 0, 0), ClaimKind::ExcludedShape, bad.is_empty(), detail));
    }
    Ok(ClaimTableReport { a: p.a(), b: p.b(), alpha_nonzero, rows })
}

/// G_* = (A^q B + 1)^2 (Y0Y1 X0 + λ1 M N)(X0 + λ2 N)(Y1 X0 + λ3 M).
#[derive(Debug, Clone, Serialize)]
pub struct Cond1Factorization {
    #[serde(rename = "A")]
    pub a: ExtElem,
    #[serde(rename = "B")]
    pub b: ExtElem,
    pub lambdas: Option<[ExtElem; 3]>,
    pub multiply_back: bool,
}

pub const COND1_FACTOR_SHAPES: [Shape; 3] = [Shape::new(1, 1, 1, 1), Shape::new(0, 0, 0, 1), Shape::new(0, 1, 1, 0)];

/// Solves for λ1, λ2, λ3 by coefficient matching and multiplies back.
pub fn cond1_factorization(f: &Arc<FieldTower>, p: &TrinomialParams) -> Result<Cond1Factorization> {
    let g = derive_g(f, p)?;
    let scale = f.square(f.mul(f.frobenius(p.a(), 1), p.b()) + ExtElem::ONE);
    let sols: Vec<Vec<ExtElem>> = COND1_FACTOR_SHAPES.iter().map(|&s| vanishing_lambdas(&g, s)).collect();
    let mut found = None;
    'search: for &l1 in &sols[0] {
        for &l2 in &sols[1] {
            for &l3 in &sols[2] {
                let lams = [l1, l2, l3];
                let product = COND1_FACTOR_SHAPES
                    .iter()
                    .zip(lams)
                    .fold(MultiPoly::constant(f, scale), |acc, (s, l)| &acc * &candidate_poly(&g, &s.with_lambda(l)));
                if product == g.g_star {
                    found = Some(lams);
                    break 'search;
                }
            }
        }
    }
    Ok(Cond1Factorization { a: p.a(), b: p.b(), lambdas: found, multiply_back: found.is_some() })
}

/// Ñ = B^(1+q^2) Y0Y1 + B^(q^2) Y0Y2 + Y1Y2.
pub fn n_tilde(f: &Arc<FieldTower>, b: ExtElem) -> MultiPoly {
    let bq2 = f.frobenius(b, 2);
    let terms = [
        (Monomial::new([0, 0, 0, 1, 1, 0]), f.mul(b, bq2)),
        (Monomial::new([0, 0, 0, 1, 0, 1]), bq2),
        (Monomial::new([0, 0, 0, 0, 1, 1]), ExtElem::ONE),
    ];
    MultiPoly::from_terms(f, terms)
}

/// M̃ = B Y0Y1 + Y0Y2 + B^(1+q) Y1Y2.
pub fn m_tilde(f: &Arc<FieldTower>, b: ExtElem) -> MultiPoly {
    let terms = [
        (Monomial::new([0, 0, 0, 1, 1, 0]), b),
        (Monomial::new([0, 0, 0, 1, 0, 1]), ExtElem::ONE),
        (Monomial::new([0, 0, 0, 0, 1, 1]), f.mul(b, f.frobenius(b, 1))),
    ];
    MultiPoly::from_terms(f, terms)
}

#[derive(Debug, Clone, Serialize)]
pub struct AqB1Factorization {
    #[serde(rename = "B")]
    pub b: ExtElem,
    pub norm_b_is_one: bool,
    pub m_tilde_is_twist: bool,
    pub identity: bool,
}

/// With A = B^(-q^2): B^(2+q+2q^2) G = M̃ Ñ [(N(B)+1) Y2 X0 + M̃][(N(B)+1) Y1 X0 + B^q Ñ].
pub fn verify_factorization_aqb1(f: &Arc<FieldTower>, b: ExtElem) -> Result<AqB1Factorization> {
    let a = f.inv(f.frobenius(b, 2))?;
    let p = TrinomialParams::new(a, b)?;
    let g = derive_g(f, &p)?;
    let nt = n_tilde(f, b);
    let mt = m_tilde(f, b);
    let nb1 = f.norm(b) + ExtElem::ONE;
    let x0y2 = MultiPoly::term(f, nb1, Monomial::new([1, 0, 0, 0, 0, 1]));
    let x0y1 = MultiPoly::term(f, nb1, Monomial::new([1, 0, 0, 0, 1, 0]));
    let rhs = &(&(&mt * &nt) * &(&x0y2 + &mt)) * &(&x0y1 + &nt.scale(f.frobenius(b, 1)));
    let scale = f.pow(b, 2 + f.q() + 2 * f.q() * f.q());
    Ok(AqB1Factorization {
        b,
        norm_b_is_one: nb1.is_zero(),
        m_tilde_is_twist: nt.psi_twist() == mt,
        identity: g.g.scale(scale) == rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pp;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_params(f: &FieldTower, rng: &mut ChaCha8Rng) -> TrinomialParams {
        TrinomialParams::new(f.unpack(rng.gen_range(1..f.order())), f.unpack(rng.gen_range(1..f.order())))
            .unwrap()
    }

    #[test]
    fn candidate_test_matches_division() {
        let f = Arc::new(FieldTower::new(2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let p = random_params(&f, &mut rng);
            let g = derive_g(&f, &p).unwrap();
            for shape in COND1_FACTOR_SHAPES.iter().chain(excluded_shapes().iter().take(5)) {
                for lam in lambda_set(&f, 6) {
                    let c = shape.with_lambda(lam);
                    let divides = g.g_star.exact_div(&candidate_poly(&g, &c)).is_ok();
                    assert_eq!(factor_candidate_test(&g, &c), divides);
                }
            }
        }
    }

    const KNOWN_OFF: [&str; 5] = [
        "Y1^2, N^2",
        "Y1^2, M^2",
        "Y0Y1, N^2 | A = B^(q+1)",
        "1, N | λ = B^q/(A^(q+1)+B^q), Y0^2Y1^2",
        "1, N | λ = B^q/(A^(q+1)+B^q), Y0^2Y1^3",
    ];

    #[test]
    fn claim_table_holds() {
        let mut off_failures = std::collections::BTreeSet::new();
        for m in 2..=3 {
            let f = Arc::new(FieldTower::new(m).unwrap());
            let mut rng = ChaCha8Rng::seed_from_u64(20 + m as u64);
            for _ in 0..6 {
                let p = random_params(&f, &mut rng);
                let rep = verify_claim_table(&f, &p).unwrap();
                for r in &rep.rows {
                    if r.kind == ClaimKind::Coefficient && KNOWN_OFF.contains(&r.id.as_str()) {
                        assert_eq!(r.corrected_passed, Some(true), "m = {m}: {r:?}");
                        if !r.passed {
                            off_failures.insert(r.id.clone());
                        }
                    } else {
                        assert!(r.passed, "m = {m}: {r:?}");
                    }
                }
                assert!(rep.passed_with_corrections());
            }
        }
        assert_eq!(off_failures.len(), KNOWN_OFF.len());
    }

    #[test]
    fn cond1_factorization_multiplies_back() {
        let f = Arc::new(FieldTower::new(2).unwrap());
        let mut n = 0;
        for a in f.nonzero_elements() {
            for b in f.nonzero_elements() {
                let p = TrinomialParams::new(a, b).unwrap();
                if pp::cond1(&f, &p) && n < 8 {
                    n += 1;
                    assert!(cond1_factorization(&f, &p).unwrap().multiply_back, "{p:?}");
                }
            }
        }
        assert_eq!(n, 8);
    }

    #[test]
    fn aqb1_factorization() {
        for m in 2..=3 {
            let f = Arc::new(FieldTower::new(m).unwrap());
            let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
            for _ in 0..5 {
                let b = f.unpack(rng.gen_range(1..f.order()));
                let r = verify_factorization_aqb1(&f, b).unwrap();
                assert!(r.identity && r.m_tilde_is_twist, "m = {m}, B = {b}");
            }
        }
    }

    #[test]
    fn labels() {
        assert_eq!(Shape::new(1, 2, 1, 1).label(), "Y0 Y1^2 X0 + λ M N");
        assert_eq!(Shape::new(0, 0, 0, 1).label(), "X0 + λ N");
    }
}

