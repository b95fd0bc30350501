use std::fmt;
use std::ops::{Div, Mul};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X0,
    X1,
    X2,
    Y0,
    Y1,
    Y2,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::X0, Var::X1, Var::X2, Var::Y0, Var::Y1, Var::Y2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["X0", "X1", "X2", "Y0", "Y1", "Y2"][self as usize]
    }

    fn shift(self) -> u32 {
        8 * (5 - self as u32)
    }
}

const TOTAL_SHIFT: u32 = 48;

/// Exponent vector packed into a u64: total degree in bits 48..56, then one
/// byte per variable with X0 highest. Integer order is graded-lex order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    /// Panics if the total degree exceeds 255.
    pub fn new(exps: [u8; 6]) -> Self {
        let total: u32 = exps.iter().map(|&e| e as u32).sum();
        assert!(total <= 255, "monomial degree {total} exceeds 255");
        let mut packed = (total as u64) << TOTAL_SHIFT;
        for v in Var::ALL {
            packed |= (exps[v.index()] as u64) << v.shift();
        }
        Monomial(packed)
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 6];
        e[v.index()] = 1;
        Self::new(e)
    }

    pub fn exps(self) -> [u8; 6] {
        Var::ALL.map(|v| self.exp(v))
    }

    pub fn exp(self, v: Var) -> u8 {
        (self.0 >> v.shift()) as u8
    }

    pub fn with_exp(self, v: Var, e: u8) -> Self {
        let mut x = self.exps();
        x[v.index()] = e;
        Self::new(x)
    }

    pub fn degree(self) -> u32 {
        (self.0 >> TOTAL_SHIFT) as u32
    }

    pub fn divides(self, other: Monomial) -> bool {
        Var::ALL.iter().all(|&v| self.exp(v) <= other.exp(v))
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        // each exponent is at most the total, so bounding the total rules out carries
        assert!(self.degree() + rhs.degree() <= 255, "monomial degree overflow");
        Monomial(self.0 + rhs.0)
    }
}

impl Div for Monomial {
    type Output = Monomial;

    /// Panics unless `rhs` divides `self`.
    fn div(self, rhs: Monomial) -> Monomial {
        assert!(rhs.divides(self), "monomial does not divide");
        Monomial(self.0 - rhs.0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e > 0 {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}^{e}", v.name())?;
                first = false;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({self})")
    }
}
