//! Small dense linear-algebra helpers (no external solver dependency).

use crate::error::{Error, Result};
use ndarray::{Array1, Array2};

pub fn sq_norm(v: &Array1<f64>) -> f64 {
    v.dot(v)
}

pub fn l2_norm(v: &Array1<f64>) -> f64 {
    v.dot(v).sqrt()
}

pub fn all_finite(v: &Array1<f64>) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Solve `a x = b` by LU factorization with partial pivoting.
pub fn lu_solve(a: &Array2<f64>, b: &Array1<f64>) -> Result<Array1<f64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Parameter(format!(
            "lu_solve needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if b.len() != n {
        return Err(Error::Parameter(format!(
            "lu_solve rhs length {} does not match matrix order {n}",
            b.len()
        )));
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if lu[[row, col]].abs() > lu[[pivot, col]].abs() {
                pivot = row;
            }
        }
        if lu[[pivot, col]].abs() < 1e-300 {
            return Err(Error::Parameter(
                "lu_solve: matrix is numerically singular".into(),
            ));
        }
        if pivot != col {
            for k in 0..n {
                lu.swap([pivot, k], [col, k]);
            }
            x.swap(pivot, col);
        }
        let diag = lu[[col, col]];
        for row in col + 1..n {
            let factor = lu[[row, col]] / diag;
            lu[[row, col]] = factor;
            for k in col + 1..n {
                lu[[row, k]] -= factor * lu[[col, k]];
            }
            x[row] -= factor * x[col];
        }
    }
    for row in (0..n).rev() {
        let mut sum = x[row];
        for k in row + 1..n {
            sum -= lu[[row, k]] * x[k];
        }
        x[row] = sum / lu[[row, row]];
    }
    Ok(x)
}

/// Frobenius norm; an upper bound on the spectral norm.
pub fn frobenius_norm(a: &Array2<f64>) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn solves_small_system() {
        let a = array![[2.0, 1.0], [1.0, 3.0]];
        let b = array![5.0, 10.0];
        let x = lu_solve(&a, &b).unwrap();
        let residual = &a.dot(&x) - &b;
        assert!(l2_norm(&residual) < 1e-12);
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = array![[0.0, 1.0], [1.0, 0.0]];
        let b = array![3.0, -2.0];
        let x = lu_solve(&a, &b).unwrap();
        assert!((x[0] + 2.0).abs() < 1e-14);
        assert!((x[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_singular_matrix() {
        let a = array![[1.0, 2.0], [2.0, 4.0]];
        let b = array![1.0, 2.0];
        assert!(lu_solve(&a, &b).is_err());
    }
}
