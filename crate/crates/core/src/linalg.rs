//! Dense least squares and singular values, backed by nalgebra's SVD.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub(crate) struct LeastSquares {
    pub solution: Vec<f64>,
    pub residual_norm: f64,
    /// Ratio of extreme singular values of the design matrix.
    pub condition: f64,
}

/// Minimize `‖A x − b‖` for a row-major `rows × cols` matrix `A`.
pub(crate) fn least_squares(rows: usize, cols: usize, a: &[f64], b: &[f64]) -> Result<LeastSquares> {
    if a.len() != rows * cols {
        return Err(Error::Shape { expected: rows * cols, found: a.len() });
    }
    if b.len() != rows {
        return Err(Error::Shape { expected: rows, found: b.len() });
    }
    let mat = DMatrix::from_row_slice(rows, cols, a);
    let rhs = DVector::from_column_slice(b);
    let svd = mat.clone().svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let x = svd.solve(&rhs, 0.0).map_err(|_| Error::NoConvergence { what: "least-squares SVD", iterations: 0 })?;
    let residual_norm = (&mat * &x - &rhs).norm();
    Ok(LeastSquares { solution: x.iter().copied().collect(), residual_norm, condition })
}

/// Singular values in descending order.
pub(crate) fn singular_values(rows: usize, cols: usize, a: &[f64]) -> Vec<f64> {
    let mat = DMatrix::from_row_slice(rows, cols, a);
    let mut sv: Vec<f64> = mat.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_a_line() {
        // y = 2 + 3x sampled exactly
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let a: Vec<f64> = xs.iter().flat_map(|&x| [1.0, x]).collect();
        let b: Vec<f64> = xs.iter().map(|x| 2.0 + 3.0 * x).collect();
        let ls = least_squares(5, 2, &a, &b).unwrap();
        assert!((ls.solution[0] - 2.0).abs() < 1e-13);
        assert!((ls.solution[1] - 3.0).abs() < 1e-13);
        assert!(ls.residual_norm < 1e-12);
        assert!(ls.condition > 1.0);
    }

    #[test]
    fn residual_of_inconsistent_system() {
        // x = 0 and x = 2 → x = 1, residual sqrt(2)
        let ls = least_squares(2, 1, &[1.0, 1.0], &[0.0, 2.0]).unwrap();
        assert!((ls.solution[0] - 1.0).abs() < 1e-15);
        assert!((ls.residual_norm - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rank_deficient_condition_is_huge() {
        let ls = least_squares(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!(ls.condition > 1e12);
    }

    #[test]
    fn shape_errors() {
        assert!(least_squares(2, 2, &[1.0; 3], &[0.0; 2]).is_err());
        assert!(least_squares(2, 1, &[1.0; 2], &[0.0; 3]).is_err());
    }

    #[test]
    fn singular_values_sorted() {
        let sv = singular_values(2, 2, &[3.0, 0.0, 0.0, 5.0]);
        assert_eq!(sv.len(), 2);
        assert!((sv[0] - 5.0).abs() < 1e-14 && (sv[1] - 3.0).abs() < 1e-14);
    }
}
