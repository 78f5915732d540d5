//! Minimal dense linear algebra for the statistical routines. Problem sizes
//! here are tiny (a handful of variables), so simple Gaussian elimination
//! with partial pivoting is both fast enough and dependency-free.

/// Solves `a x = b` in place. Returns `None` when a pivot underflows the
/// relative tolerance (singular system).
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    let scale = a
        .iter()
        .flatten()
        .fold(0f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    let tol = scale * 1e-12;
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&r, &s| a[r][k].abs().total_cmp(&a[s][k].abs()))
            .unwrap();
        if a[pivot_row][k].abs() < tol {
            return None;
        }
        a.swap(k, pivot_row);
        b.swap(k, pivot_row);
        for r in (k + 1)..n {
            let f = a[r][k] / a[k][k];
            if f == 0.0 {
                continue;
            }
            for c in k..n {
                a[r][c] -= f * a[k][c];
            }
            b[r] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for c in (k + 1)..n {
            s -= a[k][c] * x[c];
        }
        x[k] = s / a[k][k];
    }
    Some(x)
}

/// Matrix inverse by Gauss-Jordan elimination with partial pivoting.
/// Returns `None` for singular input.
pub fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    debug_assert!(a.iter().all(|r| r.len() == n));
    let scale = a
        .iter()
        .flatten()
        .fold(0f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    let tol = scale * 1e-12;
    let mut work: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&r, &s| work[r][k].abs().total_cmp(&work[s][k].abs()))
            .unwrap();
        if work[pivot_row][k].abs() < tol {
            return None;
        }
        work.swap(k, pivot_row);
        let p = work[k][k];
        for c in 0..2 * n {
            work[k][c] /= p;
        }
        for r in 0..n {
            if r == k {
                continue;
            }
            let f = work[r][k];
            if f == 0.0 {
                continue;
            }
            for c in 0..2 * n {
                work[r][c] -= f * work[k][c];
            }
        }
    }
    Some(work.into_iter().map(|r| r[n..].to_vec()).collect())
}
