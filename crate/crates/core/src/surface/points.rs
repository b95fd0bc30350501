use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{ExtElem, FieldTower};
use crate::pp::TrinomialParams;

/// Largest m for which the q^6 pair scan is allowed.
pub const MAX_CURVE_M: u32 = 3;

const MAX_EXAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurvePointCount {
    /// Ordered pairs (x, y) with x y (x + y) != 0 on the curve; a lower
    /// bound when the scan stopped early.
    pub off_line_points: u64,
    pub complete: bool,
    pub examples: Vec<(ExtElem, ExtElem)>,
}

/// Counts (x, y) with x y (x + y) != 0 and
/// y^q (x^(q^2+1) + A x^(q^2+q) + B x^(q+1)) + x^q (y^(q^2+1) + A y^(q^2+q) + B y^(q+1)) = 0.
/// With `stop_at_first` the scan ends at the first point.
pub fn curve_point_count(f: &FieldTower, p: &TrinomialParams, stop_at_first: bool) -> Result<CurvePointCount> {
    if f.m() > MAX_CURVE_M {
        let predicted = (f.order() as u128).pow(2);
        let limit = 1u128 << (6 * MAX_CURVE_M);
        return Err(Error::Budget { predicted, limit });
    }
    let xs: Vec<ExtElem> = f.nonzero_elements().collect();
    // (x^q, x^(q^2+1) + A x^(q^2+q) + B x^(q+1)) per x
    let table: Vec<(ExtElem, ExtElem)> = xs
        .iter()
        .map(|&x| {
            let xq = f.frobenius(x, 1);
            let xq2 = f.frobenius(x, 2);
            let inner = f.mul(xq2, x) + f.mul(p.a(), f.mul(xq2, xq)) + f.mul(p.b(), f.mul(xq, x));
            (xq, inner)
        })
        .collect();
    let mut out = CurvePointCount { off_line_points: 0, complete: true, examples: Vec::new() };
    for (i, &(xq, ix)) in table.iter().enumerate() {
        for (j, &(yq, iy)) in table.iter().enumerate() {
            if i == j {
                continue;
            }
            if (f.mul(yq, ix) + f.mul(xq, iy)).is_zero() {
                out.off_line_points += 1;
                if out.examples.len() < MAX_EXAMPLES {
                    out.examples.push((xs[i], xs[j]));
                }
                if stop_at_first {
                    out.complete = false;
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}
