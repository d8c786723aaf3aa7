//! Dense Gaussian elimination with partial pivoting for the small systems
//! assembled by the direct solver.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Pivots below this magnitude (relative to the largest entry of the matrix) are singular.
const SINGULAR_RTOL: f64 = 1e-14;

/// Solves `a x = rhs`.
pub fn solve_dense(a: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let n = a.nrows();
    if a.ncols() != n || rhs.len() != n {
        return Err(Error::Length(format!(
            "system is {}x{} with a right-hand side of length {}",
            a.nrows(),
            a.ncols(),
            rhs.len()
        )));
    }
    let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::Singular {
            column: 0,
            pivot: 0.0,
        });
    }

    let mut m = a.clone();
    let mut x = rhs.clone();
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, m[(r, col)]))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("non-empty pivot search");
        if pivot.abs() <= SINGULAR_RTOL * scale {
            return Err(Error::Singular { column: col, pivot });
        }
        if pivot_row != col {
            m.swap_rows(pivot_row, col);
            x.swap_rows(pivot_row, col);
        }
        for r in col + 1..n {
            let factor = m[(r, col)] / pivot;
            if factor == 0.0 {
                continue;
            }
            m[(r, col)] = 0.0;
            for c in col + 1..n {
                m[(r, c)] -= factor * m[(col, c)];
            }
            x[r] -= factor * x[col];
        }
    }
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|c| m[(row, c)] * x[c]).sum();
        x[row] = (x[row] - tail) / m[(row, row)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn needs_pivoting() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 2.0, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        let x_true = DVector::from_vec(vec![1.0, -2.0, 3.0]);
        let b = &a * &x_true;
        let x = solve_dense(&a, &b).unwrap();
        assert!((x - x_true).amax() < 1e-14);
    }

    #[test]
    fn singular_is_reported() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        let b = DVector::from_vec(vec![1.0, 1.0]);
        assert!(matches!(solve_dense(&a, &b), Err(Error::Singular { .. })));
    }

    #[test]
    fn shape_mismatch() {
        let a = DMatrix::<f64>::identity(3, 3);
        let b = DVector::from_vec(vec![1.0, 1.0]);
        assert!(matches!(solve_dense(&a, &b), Err(Error::Length(_))));
    }

    #[test]
    fn random_systems_agree_with_lu() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 1..12 {
            let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let b = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
            let ours = solve_dense(&a, &b).unwrap();
            let theirs = a.clone().lu().solve(&b).unwrap();
            assert!((ours - theirs).amax() < 1e-9);
        }
    }
}
