//! Exact determinant signs for f64 matrices via dyadic integers.
//!
//! Every finite f64 is `m * 2^e` with integer `m`, so a matrix of f64s can be
//! rescaled by a common power of two into a BigInt matrix without any
//! rounding. Bareiss fraction-free elimination then yields the exact sign of
//! the determinant. This is the fallback path for dimensions where no
//! adaptive-precision predicate is available (d >= 4); it is slow but only
//! ever runs on small inputs.

use num_bigint::BigInt;

/// Decompose a finite f64 into `(mantissa, exponent)` with `x = m * 2^e` exact.
fn decompose(x: f64) -> (i64, i32) {
    assert!(x.is_finite());
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let exp_bits = ((bits >> 52) & 0x7FF) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    if exp_bits == 0 {
        (sign * frac, -1074)
    } else {
        (sign * (frac | (1 << 52)), exp_bits - 1075)
    }
}

/// Exact sign of `det(rows)` for a square matrix of finite f64 entries.
///
/// Returns -1, 0, or +1. Scaling all entries by a common positive power of
/// two multiplies the determinant by a positive constant, so the sign is
/// unaffected by the rescaling.
pub fn det_sign(rows: &[Vec<f64>]) -> i8 {
    let k = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == k));

    let parts: Vec<Vec<(i64, i32)>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| decompose(x)).collect())
        .collect();
    let min_e = parts
        .iter()
        .flatten()
        .filter(|&&(m, _)| m != 0)
        .map(|&(_, e)| e)
        .min()
        .unwrap_or(0);

    let mut m: Vec<Vec<BigInt>> = parts
        .iter()
        .map(|row| {
            row.iter()
                .map(|&(mant, e)| {
                    if mant == 0 {
                        BigInt::from(0)
                    } else {
                        BigInt::from(mant) << (e - min_e) as usize
                    }
                })
                .collect()
        })
        .collect();

    bareiss_sign(&mut m)
}

/// Bareiss fraction-free elimination; returns the sign of the determinant.
fn bareiss_sign(m: &mut [Vec<BigInt>]) -> i8 {
    let k = m.len();
    let zero = BigInt::from(0);
    let mut sign = 1i8;
    let mut prev = BigInt::from(1);
    for col in 0..k {
        // Pivot search: any nonzero entry in this column works.
        let pivot_row = (col..k).find(|&r| m[r][col] != zero);
        let Some(p) = pivot_row else {
            return 0;
        };
        if p != col {
            m.swap(p, col);
            sign = -sign;
        }
        for r in col + 1..k {
            for c in col + 1..k {
                let num = &m[col][col] * &m[r][c] - &m[r][col] * &m[col][c];
                // Bareiss guarantees exact divisibility by the previous pivot.
                m[r][c] = num / &prev;
            }
            m[r][col] = zero.clone();
        }
        prev = m[col][col].clone();
    }
    let last = &m[k - 1][k - 1];
    if *last == zero {
        0
    } else if last.sign() == num_bigint::Sign::Minus {
        -sign
    } else {
        sign
    }
}

/// Exact rank of a (not necessarily square) matrix of finite f64 entries.
pub fn rank(rows: &[Vec<f64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let parts: Vec<Vec<(i64, i32)>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| decompose(x)).collect())
        .collect();
    let min_e = parts
        .iter()
        .flatten()
        .filter(|&&(mant, _)| mant != 0)
        .map(|&(_, e)| e)
        .min()
        .unwrap_or(0);
    let mut m: Vec<Vec<BigInt>> = parts
        .iter()
        .map(|row| {
            row.iter()
                .map(|&(mant, e)| {
                    if mant == 0 {
                        BigInt::from(0)
                    } else {
                        BigInt::from(mant) << (e - min_e) as usize
                    }
                })
                .collect()
        })
        .collect();

    let zero = BigInt::from(0);
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let pivot = (row..m.len()).find(|&r| m[r][col] != zero);
        let Some(p) = pivot else { continue };
        m.swap(p, row);
        for r in row + 1..m.len() {
            if m[r][col] == zero {
                continue;
            }
            let (a, b) = (m[row][col].clone(), m[r][col].clone());
            let (pivot_row, target) = {
                let (head, tail) = m.split_at_mut(r);
                (&head[row], &mut tail[0])
            };
            for (t, pv) in target[col..].iter_mut().zip(&pivot_row[col..]) {
                *t = &*t * &a - pv * &b;
            }
        }
        rank += 1;
        row += 1;
    }
    rank
}
