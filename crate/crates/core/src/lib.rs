//! Permutation trinomials f(X) = X^(q^2-q+1) + A X^(q^2) + B X over F_{q^3}, q = 2^m.
//!
//! * [`gf`]: the tower F_q ⊂ F_{q^3} with Frobenius, norm and normal-basis coordinates.
//! * [`pp`]: evaluation, permutation testing, the parameter conditions and sweeps.
//! * [`mpoly`]: sparse polynomials in X0, X1, X2, Y0, Y1, Y2 with the twist operator.
//! * [`surface`]: the three-equation surface system, elimination down to G and the
//!   coefficient/factorization checks built on it.
//! * [`bounds`]: exact evaluation of the Lang-Weil threshold.
//! * [`cli`]: the `trinomial` command-line driver.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod gf;
pub mod mpoly;
pub mod pp;
pub mod surface;
pub mod upoly;

pub use error::{Error, Result};
pub use gf::{ExtElem, FieldTower};
