//! Dense LU, full GMRES, the Nyström system operator in its three
//! realizations, and the Stein-equation solver for separable kernels.

mod dense;
mod gmres;
mod operator;
mod stein;

use alloc::vec::Vec;

pub use dense::{inverse, lu_solve, LuFactor, Matrix};
pub use gmres::{gmres, GmresOptions, GmresOutput, KrylovStats, DEFAULT_TOL};
pub use operator::{KernelMatrix, LinearOperator, Realization, RowFn, SystemOperator};
pub use stein::{spectral_radius_estimate, stein_solve, SteinOptions, SteinOutput};

use crate::error::{Error, Result};

/// Lexicographic flattening `ℓ = i1 + i2·n1` of an `n1 × n2` array.
///
/// [`Matrix`] is column-major, so this is its storage order.
pub fn unfold(a: &Matrix) -> Vec<f64> {
    a.data().to_vec()
}

pub fn fold(v: &[f64], n1: usize, n2: usize) -> Result<Matrix> {
    if v.len() != n1 * n2 {
        return Err(Error::DimensionMismatch { expected: n1 * n2, found: v.len() });
    }
    Matrix::from_col_major(n1, n2, v.to_vec())
}

/// `κ_∞(A) = ‖A‖_∞ ‖A⁻¹‖_∞`.
pub fn condition_inf(a: &Matrix) -> Result<f64> {
    Ok(a.inf_norm() * inverse(a)?.inf_norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unfold_order() {
        let (a, b, c, d) = (1.0, 2.0, 3.0, 4.0);
        let m = Matrix::from_fn(2, 2, |i, j| [[a, b], [c, d]][i][j]);
        assert_eq!(unfold(&m), alloc::vec![a, c, b, d]);
        assert_eq!(fold(&unfold(&m), 2, 2).unwrap(), m);
        assert!(fold(&[1.0, 2.0, 3.0], 2, 2).is_err());
    }

    #[test]
    fn identity_condition() {
        assert_eq!(condition_inf(&Matrix::identity(4)).unwrap(), 1.0);
    }
}
