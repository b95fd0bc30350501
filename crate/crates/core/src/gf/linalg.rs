//! 3x3 linear algebra over the base field.

use super::base::BaseField;

/// Row-major 3x3 matrix over GF(2^m).
pub type Mat3 = [[u16; 3]; 3];

pub fn mat_vec(f: &BaseField, a: &Mat3, v: [u16; 3]) -> [u16; 3] {
    let mut out = [0u16; 3];
    for (i, row) in a.iter().enumerate() {
        out[i] = f.mul(row[0], v[0]) ^ f.mul(row[1], v[1]) ^ f.mul(row[2], v[2]);
    }
    out
}

pub fn mat_mul(f: &BaseField, a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0u16; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).fold(0, |acc, k| acc ^ f.mul(a[i][k], b[k][j]));
        }
    }
    out
}

/// Cofactor expansion; characteristic 2 makes every sign positive.
pub fn det(f: &BaseField, a: &Mat3) -> u16 {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        f.mul(a[r1][c1], a[r2][c2]) ^ f.mul(a[r1][c2], a[r2][c1])
    };
    f.mul(a[0][0], minor(1, 2, 1, 2)) ^ f.mul(a[0][1], minor(1, 2, 0, 2)) ^ f.mul(a[0][2], minor(1, 2, 0, 1))
}

/// Gauss-Jordan inverse, `None` when singular.
pub fn inverse(f: &BaseField, a: &Mat3) -> Option<Mat3> {
    let mut m = *a;
    let mut inv: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for col in 0..3 {
        let pivot = (col..3).find(|&r| m[r][col] != 0)?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p_inv = f.inv(m[col][col]).ok()?;
        for j in 0..3 {
            m[col][j] = f.mul(m[col][j], p_inv);
            inv[col][j] = f.mul(inv[col][j], p_inv);
        }
        for r in 0..3 {
            if r != col && m[r][col] != 0 {
                let k = m[r][col];
                for j in 0..3 {
                    m[r][j] ^= f.mul(k, m[col][j]);
                    inv[r][j] ^= f.mul(k, inv[col][j]);
                }
            }
        }
    }
    Some(inv)
}

/// A nonzero vector v with a v = 0, or `None` if `a` is invertible.
pub fn kernel_vector(f: &BaseField, a: &Mat3) -> Option<[u16; 3]> {
    let mut m = *a;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..3 {
        let Some(p) = (row..3).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, p);
        let p_inv = f.inv(m[row][col]).expect("pivot is nonzero");
        for j in 0..3 {
            m[row][j] = f.mul(m[row][j], p_inv);
        }
        for r in 0..3 {
            if r != row && m[r][col] != 0 {
                let k = m[r][col];
                for j in 0..3 {
                    m[r][j] ^= f.mul(k, m[row][j]);
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let free = (0..3).find(|c| !pivots.iter().any(|&(_, pc)| pc == *c))?;
    let mut v = [0u16; 3];
    v[free] = 1;
    for &(r, c) in &pivots {
        v[c] = m[r][free];
    }
    Some(v)
}
