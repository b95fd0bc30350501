//! Randomized polynomial identity testing.

use rand::Rng;
use serde::Serialize;

use super::MultiPoly;
use crate::gf::ExtElem;

/// Target bound on the probability of accepting a false identity.
pub const ERROR_EXPONENT: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub structural: bool,
    pub rounds: usize,
    pub sampled_agree: bool,
    /// log2 of the bound on accepting a false identity; 0 when no sampling was done.
    pub error_log2: f64,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.structural
    }
}

/// Number of random points after which a nonzero polynomial of total
/// degree `degree` over a field of `order` elements survives with
/// probability at most 2^-30, by the Schwartz-Zippel bound. `None` when
/// `degree >= order`, where sampling proves nothing.
pub fn rounds_needed(degree: u32, order: u64) -> Option<usize> {
    let degree = degree.max(1);
    if degree as u64 >= order {
        return None;
    }
    let per_round = (order as f64 / degree as f64).log2();
    Some((ERROR_EXPONENT / per_round).ceil() as usize)
}

/// Evaluates both sides at random points; false as soon as they differ.
pub fn sampled_agree<R: Rng>(a: &MultiPoly, b: &MultiPoly, rounds: usize, rng: &mut R) -> bool {
    let f = a.field();
    (0..rounds).all(|_| {
        let pt: [ExtElem; 6] = std::array::from_fn(|_| f.unpack(rng.gen_range(0..f.order())));
        a.eval_at(&pt) == b.eval_at(&pt)
    })
}

/// Structural comparison backed by random evaluation.
pub fn check_identity<R: Rng>(a: &MultiPoly, b: &MultiPoly, rng: &mut R) -> IdentityCheck {
    let structural = a == b;
    let degree = a.degree().unwrap_or(0).max(b.degree().unwrap_or(0)).max(1);
    match rounds_needed(degree, a.field().order()) {
        Some(rounds) => {
            let agree = sampled_agree(a, b, rounds, rng);
            let per_round = (a.field().order() as f64 / degree as f64).log2();
            IdentityCheck {
                structural,
                rounds,
                sampled_agree: agree,
                error_log2: -(per_round * rounds as f64),
            }
        }
        None => IdentityCheck { structural, rounds: 0, sampled_agree: structural, error_log2: 0.0 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldTower;
    use crate::mpoly::Var;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn rounds_meet_target() {
        let n = rounds_needed(20, 64).unwrap();
        assert!((20.0f64 / 64.0).powi(n as i32) <= 2f64.powi(-30));
        assert!((20.0f64 / 64.0).powi(n as i32 - 1) > 2f64.powi(-30));
        assert_eq!(rounds_needed(64, 64), None);
    }

    #[test]
    fn detects_difference() {
        let f = Arc::new(FieldTower::new(3).unwrap());
        let x = MultiPoly::var(&f, Var::X0);
        let y = MultiPoly::var(&f, Var::Y0);
        let lhs = (&x + &y).pow(2);
        let rhs = &x.pow(2) + &y.pow(2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ok = check_identity(&lhs, &rhs, &mut rng);
        assert!(ok.structural && ok.sampled_agree);
        let bad = check_identity(&lhs, &(&rhs + &(&x * &y)), &mut rng);
        assert!(!bad.structural && !bad.sampled_agree);
        assert!(ok.error_log2 <= -30.0);
    }
}
