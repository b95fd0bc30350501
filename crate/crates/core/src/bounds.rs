//! Exact evaluation of the Lang-Weil lower bound
//! q^r - (δ-1)(δ-2) q^(r-1/2) - 5 δ^(13/3) q^(r-1) against an intersection
//! budget, for q = 2^m.
//!
//! The two irrational factors, sqrt(q) and δ^(1/3), are enclosed between
//! dyadic rationals a/2^k and (a+1)/2^k obtained by integer root extraction.
//! The precision k doubles until the enclosure of the whole expression lies
//! strictly on one side of the budget.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

/// Dimension, degree bound and point budget of the main application.
pub const DEFAULT_R: u32 = 2;
pub const DEFAULT_DELTA: u64 = 12;
pub const DEFAULT_THRESHOLD: u64 = 36;

const INITIAL_BITS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundQuery {
    pub r: u32,
    pub delta: u64,
    pub threshold: u64,
    pub m: u32,
}

impl BoundQuery {
    pub fn new(r: u32, delta: u64, threshold: u64, m: u32) -> Self {
        assert!(r >= 1 && delta >= 1 && m >= 1, "r, delta and m must be positive");
        BoundQuery { r, delta, threshold, m }
    }

    pub fn main(m: u32) -> Self {
        Self::new(DEFAULT_R, DEFAULT_DELTA, DEFAULT_THRESHOLD, m)
    }

    /// (δ-1)(δ-2), the coefficient of q^(r-1/2).
    pub fn middle_coefficient(&self) -> u64 {
        (self.delta - 1) * (self.delta - 2)
    }
}

/// 2^m > 2 (r+1) δ^2.
pub fn lang_weil_applicable(bq: &BoundQuery) -> bool {
    let lhs = BigUint::one() << bq.m;
    let rhs = BigUint::from(2u64) * BigUint::from(bq.r + 1) * BigUint::from(bq.delta).pow(2);
    lhs > rhs
}

/// floor(x · 2^k) for x = n^(1/d), with the certificate a^d <= n 2^(dk) < (a+1)^d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootEnclosure {
    pub radicand: String,
    pub degree: u32,
    pub bits: u64,
    /// a with a / 2^bits <= n^(1/d) <= (a+1) / 2^bits.
    pub floor_scaled: String,
    pub exact: bool,
}

fn root_enclosure(n: &BigUint, d: u32, bits: u64) -> (BigUint, bool, RootEnclosure) {
    let scaled = n << (bits as usize * d as usize);
    let a = scaled.nth_root(d);
    debug_assert!(a.pow(d) <= scaled && (&a + 1u32).pow(d) > scaled);
    let exact = a.pow(d) == scaled;
    let cert = RootEnclosure {
        radicand: n.to_string(),
        degree: d,
        bits,
        floor_scaled: a.to_string(),
        exact,
    };
    (a, exact, cert)
}

/// Dyadic enclosure lo/2^bits <= value <= hi/2^bits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Enclosure {
    pub bits: u64,
    pub lo: String,
    pub hi: String,
    /// Midpoint as a float, for display only.
    pub approx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundVerdict {
    pub query: BoundQuery,
    pub holds: bool,
    pub lower_bound: Enclosure,
    pub roots: Vec<RootEnclosure>,
}

fn to_f64(x: &BigInt, bits: u64) -> f64 {
    // shift down to keep the conversion in range
    let shift = bits.saturating_sub(52);
    let y: BigInt = x >> shift as usize;
    let v: f64 = y.to_string().parse().unwrap_or(f64::NAN);
    v / 2f64.powi((bits - shift) as i32)
}

/// Decides q^r - (δ-1)(δ-2) q^(r-1/2) - 5 δ^(13/3) q^(r-1) > threshold exactly.
pub fn evaluate(bq: &BoundQuery) -> BoundVerdict {
    let q = BigUint::one() << bq.m;
    let q_r1 = q.pow(bq.r - 1);
    let q_r = &q_r1 * &q;
    let delta13 = BigUint::from(bq.delta).pow(13);
    let c_mid = BigUint::from(bq.middle_coefficient());
    let mut bits = INITIAL_BITS;
    loop {
        let (s, s_exact, s_cert) = root_enclosure(&q, 2, bits);
        let (t, t_exact, t_cert) = root_enclosure(&delta13, 3, bits);
        let one = BigUint::one();
        let s_hi = if s_exact { s.clone() } else { &s + &one };
        let t_hi = if t_exact { t.clone() } else { &t + &one };
        // all quantities scaled by 2^bits
        let base = BigInt::from(&q_r << bits as usize);
        let sub = |sq: &BigUint, tq: &BigUint| -> BigInt {
            BigInt::from(&c_mid * &q_r1 * sq) + BigInt::from(BigUint::from(5u32) * &q_r1 * tq)
        };
        let lo = &base - sub(&s_hi, &t_hi);
        let hi = &base - sub(&s, &t);
        let thr = BigInt::from(BigUint::from(bq.threshold) << bits as usize);
        let decided = if lo > thr {
            Some(true)
        } else if hi <= thr {
            Some(false)
        } else {
            None
        };
        if let Some(holds) = decided {
            let mid = (&lo + &hi) / 2;
            return BoundVerdict {
                query: *bq,
                holds,
                lower_bound: Enclosure { bits, lo: lo.to_string(), hi: hi.to_string(), approx: to_f64(&mid, bits) },
                roots: vec![s_cert, t_cert],
            };
        }
        bits *= 2;
    }
}

pub fn bound_holds(bq: &BoundQuery) -> bool {
    evaluate(bq).holds
}

/// The main inequality q^2 - 110 q^(3/2) - 5·12^(13/3) q > 36 at q = 2^m.
pub fn main_bound_holds(m: u32) -> bool {
    bound_holds(&BoundQuery::main(m))
}

/// Least m in 1..=max_m at which the bound holds for the given parameters.
pub fn minimal_m_for(r: u32, delta: u64, threshold: u64, max_m: u32) -> Option<u32> {
    (1..=max_m).find(|&m| bound_holds(&BoundQuery::new(r, delta, threshold, m)))
}

/// Least m for the main inequality.
pub fn minimal_m() -> u32 {
    minimal_m_for(DEFAULT_R, DEFAULT_DELTA, DEFAULT_THRESHOLD, 64).expect("the bound holds for large m")
}

/// True iff the verdict never switches from true back to false for m in 1..=max_m.
pub fn monotone_up_to(r: u32, delta: u64, threshold: u64, max_m: u32) -> bool {
    let v: Vec<bool> = (1..=max_m).map(|m| bound_holds(&BoundQuery::new(r, delta, threshold, m))).collect();
    v.windows(2).all(|w| !w[0] || w[1])
}

/// Whether the enclosure bracket really contains the value; used by tests with
/// an independent float evaluation.
pub fn enclosure_width_is_tight(v: &BoundVerdict) -> bool {
    let lo: BigInt = v.lower_bound.lo.parse().expect("integer");
    let hi: BigInt = v.lower_bound.hi.parse().expect("integer");
    let w = hi - lo;
    !w.is_zero() || v.roots.iter().all(|r| r.exact)
}
