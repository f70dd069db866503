use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::lattice::Torus;
use crate::{Error, Result};

/// `ln det` of a symmetric positive definite matrix via its Cholesky factor.
pub(crate) fn log_det_spd(m: DMatrix<f64>) -> Result<f64> {
    let chol = m.cholesky().ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l_dirty();
    Ok(2.0 * (0..l.nrows()).map(|i| l[(i, i)].ln()).sum::<f64>())
}

/// Sub-matrix `M[a][b] = row[lag(site_a − site_b)]` of a circulant operator.
pub(crate) fn circulant_block(torus: &Torus, row: &[f64], rows: &[Vec<usize>], cols: &[Vec<usize>]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| row[torus.lag_index(&rows[i], &cols[j])])
}
