//! Exact Gaussian elimination over the rationals.

use crate::rat::Rat;

/// Solves the square system `a · y = b`. Returns `None` when `a` is singular.
pub fn solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));

    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &a[col][col];
            let (top, rest) = a.split_at_mut(r);
            for (dst, src) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                *dst -= &(&factor * src);
            }
            let delta = &factor * &b[col];
            b[r] -= &delta;
        }
    }

    let mut y = vec![Rat::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc -= &(&a[row][k] * &y[k]);
        }
        y[row] = acc / &a[row][row];
    }
    Some(y)
}
