//! Exact integer lattice routines: left kernels by unimodular row reduction
//! and the row-style Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Basis of `{v in Z^m : v^T A = 0}` for an `m x k` integer matrix `A`.
///
/// Row-reduces `[A | I]` with unimodular integer operations; rows whose
/// left part vanishes span the kernel, and since the transformation is
/// unimodular that span is already saturated.
pub fn left_kernel(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let m = a.len();
    let k = a.first().map_or(0, Vec::len);
    let mut rows: Vec<(Vec<BigInt>, Vec<BigInt>)> = (0..m)
        .map(|i| {
            let mut id = vec![BigInt::zero(); m];
            id[i] = BigInt::one();
            (a[i].clone(), id)
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..k {
        if pivot_row == m {
            break;
        }
        // Euclid on the column until only one nonzero entry remains at or
        // below the pivot row.
        loop {
            let nonzero: Vec<usize> = (pivot_row..m).filter(|&r| !rows[r].0[col].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero.iter().min_by_key(|&&r| rows[r].0[col].abs()).expect("nonempty");
            rows.swap(pivot_row, best);
            if nonzero.len() == 1 {
                pivot_row += 1;
                break;
            }
            let p = rows[pivot_row].0[col].clone();
            for r in (pivot_row + 1)..m {
                if rows[r].0[col].is_zero() {
                    continue;
                }
                let q = rows[r].0[col].div_floor(&p);
                let (pl, pr) = rows[pivot_row].clone();
                sub_scaled(&mut rows[r].0, &pl, &q);
                sub_scaled(&mut rows[r].1, &pr, &q);
            }
        }
    }
    rows.into_iter().filter(|(l, _)| l.iter().all(Zero::is_zero)).map(|(_, r)| r).collect()
}

fn sub_scaled(row: &mut [BigInt], other: &[BigInt], q: &BigInt) {
    for (x, y) in row.iter_mut().zip(other) {
        *x -= q * y;
    }
}

/// Canonical row Hermite normal form of the lattice spanned by `basis`:
/// echelon rows with positive pivots and entries above each pivot reduced
/// into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form(basis: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = basis.to_vec();
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r0 = 0;
    for col in 0..n {
        if r0 == m {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (r0..m).filter(|&r| !rows[r][col].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero.iter().min_by_key(|&&r| rows[r][col].abs()).expect("nonempty");
            rows.swap(r0, best);
            if nonzero.len() == 1 {
                if rows[r0][col].is_negative() {
                    for x in rows[r0].iter_mut() {
                        *x = -&*x;
                    }
                }
                pivots.push((r0, col));
                r0 += 1;
                break;
            }
            let p = rows[r0][col].clone();
            for r in (r0 + 1)..m {
                if !rows[r][col].is_zero() {
                    let q = rows[r][col].div_floor(&p);
                    let pr = rows[r0].clone();
                    sub_scaled(&mut rows[r], &pr, &q);
                }
            }
        }
    }
    for &(r, col) in &pivots {
        let p = rows[r][col].clone();
        for above in 0..r {
            let q = rows[above][col].div_floor(&p);
            if !q.is_zero() {
                let pr = rows[r].clone();
                sub_scaled(&mut rows[above], &pr, &q);
            }
        }
    }
    rows.truncate(r0);
    rows
}
