//! Small exact linear algebra: Hermite and Smith normal forms over the
//! integers and 4x4 rational inverses/determinants. Everything here works at
//! desk scale (rank 4, entries that stay small), so the plain row/column
//! reduction algorithms with smallest-pivot selection are all that is
//! needed.

use crate::arith::{Integer, Rational};
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

pub type RMat4 = [[Rational; 4]; 4];
pub(crate) type IMat4 = [[Integer; 4]; 4];

/// Row-style Hermite normal form of a full-column-rank integer matrix with 4
/// columns: upper triangular, positive pivots, entries above each pivot
/// reduced into [0, pivot). Rows beyond the rank come out zero and are
/// dropped.
pub(crate) fn hermite_normal_form(mut rows: Vec<[Integer; 4]>) -> IMat4 {
    let mut pivot_row = 0usize;
    for col in 0..4 {
        loop {
            // smallest nonzero magnitude in this column at or below pivot_row
            let mut best: Option<usize> = None;
            for (r, row) in rows.iter().enumerate().skip(pivot_row) {
                if !row[col].is_zero()
                    && best.is_none_or(|b| row[col].abs() < rows[b][col].abs())
                {
                    best = Some(r);
                }
            }
            let Some(best) = best else {
                // column has no pivot; cannot happen for our inputs, which
                // always contain a scaled identity block
                unreachable!("rank-deficient superlattice input");
            };
            rows.swap(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                if !rows[r][col].is_zero() {
                    let q = &rows[r][col] / &rows[pivot_row][col];
                    row_sub_mul(&mut rows, r, pivot_row, &q);
                    if !rows[r][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row][col].is_negative() {
            for x in rows[pivot_row].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        // reduce entries above the pivot into [0, pivot)
        for r in 0..pivot_row {
            let q = rows[r][col].div_floor(&rows[pivot_row][col]);
            row_sub_mul(&mut rows, r, pivot_row, &q);
        }
        pivot_row += 1;
    }
    debug_assert!(rows[4..].iter().all(|r| r.iter().all(|x| x.is_zero())));
    rows.truncate(4);
    rows.try_into().expect("four rows after truncation")
}

fn row_sub_mul(rows: &mut [[Integer; 4]], target: usize, source: usize, factor: &Integer) {
    if factor.is_zero() {
        return;
    }
    for c in 0..4 {
        let delta = factor * &rows[source][c];
        rows[target][c] -= delta;
    }
}

/// Diagonal of the Smith normal form of a square integer matrix: entries
/// non-negative, each dividing the next. Pivots on the smallest nonzero
/// magnitude.
pub(crate) fn smith_diagonal(mut a: Vec<Vec<Integer>>) -> Vec<Integer> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        'pivot: loop {
            let mut best: Option<(usize, usize)> = None;
            for r in t..n {
                for c in t..n {
                    if !a[r][c].is_zero()
                        && best.is_none_or(|(br, bc)| a[r][c].abs() < a[br][bc].abs())
                    {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else {
                // remaining block is zero
                for _ in t..n {
                    diag.push(Integer::zero());
                }
                return diag;
            };
            a.swap(t, br);
            for row in a.iter_mut() {
                row.swap(t, bc);
            }

            for r in t + 1..n {
                if !a[r][t].is_zero() {
                    let q = &a[r][t] / &a[t][t];
                    for c in t..n {
                        let delta = &q * &a[t][c];
                        a[r][c] -= delta;
                    }
                    if !a[r][t].is_zero() {
                        continue 'pivot;
                    }
                }
            }
            for c in t + 1..n {
                if !a[t][c].is_zero() {
                    let q = &a[t][c] / &a[t][t];
                    for r in t..n {
                        let delta = &q * &a[r][t];
                        a[r][c] -= delta;
                    }
                    if !a[t][c].is_zero() {
                        continue 'pivot;
                    }
                }
            }
            // divisibility: the pivot must divide every remaining entry
            for r in t + 1..n {
                for c in t + 1..n {
                    if !(&a[r][c] % &a[t][t]).is_zero() {
                        for cc in t..n {
                            let add = a[r][cc].clone();
                            a[t][cc] += add;
                        }
                        continue 'pivot;
                    }
                }
            }
            diag.push(a[t][t].abs());
            break;
        }
    }
    diag
}

pub(crate) fn det4(m: &RMat4) -> Rational {
    let mut det = Rational::zero();
    for c in 0..4 {
        let minor = minor3(m, 0, c);
        let term = &m[0][c] * det3(&minor);
        if c % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

fn minor3(m: &RMat4, skip_r: usize, skip_c: usize) -> [[Rational; 3]; 3] {
    let mut out: [[Rational; 3]; 3] = Default::default();
    let mut rr = 0;
    for r in 0..4 {
        if r == skip_r {
            continue;
        }
        let mut cc = 0;
        for c in 0..4 {
            if c == skip_c {
                continue;
            }
            out[rr][cc] = m[r][c].clone();
            cc += 1;
        }
        rr += 1;
    }
    out
}

fn det3(m: &[[Rational; 3]; 3]) -> Rational {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// Exact inverse by Gauss-Jordan elimination; None when singular.
pub(crate) fn invert4(m: &RMat4) -> Option<RMat4> {
    let mut a = m.clone();
    let mut inv: RMat4 = Default::default();
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    for col in 0..4 {
        let pivot = (col..4).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for c in 0..4 {
            a[col][c] /= &p;
            inv[col][c] /= &p;
        }
        for r in 0..4 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..4 {
                    let da = &f * &a[col][c];
                    let di = &f * &inv[col][c];
                    a[r][c] -= da;
                    inv[r][c] -= di;
                }
            }
        }
    }
    Some(inv)
}
