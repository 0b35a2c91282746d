//! Dense eigensolvers returning spectral measures with respect to `e_1`.
//!
//! Unitary matrices are normal, so the complex Schur form is diagonal and the
//! Schur vectors are eigenvectors. Eigenvector phases never matter: only the
//! squared moduli of first components are used.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::cmv::{unitarity_residual, CMatrix, CmvMatrix, JacobiMatrix, C64};
use crate::error::{Error, Result};
use crate::measure::{angular_distance, wrap_angle, SpectralMeasureCircle, SpectralMeasureLine, SEPARATION_TOL};

pub const UNITARY_TOL: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-11;

/// Eigenvalues of a unitary matrix with the squared first components of the
/// matching unit eigenvectors.
#[derive(Debug, Clone)]
pub struct UnitaryEigen {
    pub values: Vec<C64>,
    pub first_weights: Vec<f64>,
    pub max_residual: f64,
}

pub fn unitary_eigen(a: &CMatrix) -> Result<UnitaryEigen> {
    let residual = unitarity_residual(a);
    if !(residual <= UNITARY_TOL) {
        return Err(Error::NotUnitary { residual });
    }
    let n = a.nrows();
    let (q, t) = a.clone().schur().unpack();
    let mut values = Vec::with_capacity(n);
    let mut first_weights = Vec::with_capacity(n);
    let mut max_residual: f64 = 0.0;
    for j in 0..n {
        let v = q.column(j);
        let lambda = t[(j, j)];
        let r = (a * v - v * lambda).norm();
        max_residual = max_residual.max(r);
        values.push(lambda);
        first_weights.push(v[0].norm_sqr());
    }
    Ok(UnitaryEigen {
        values,
        first_weights,
        max_residual,
    })
}

/// Eigenvalue angles of a unitary matrix, ascending. No degeneracy check.
pub fn unitary_eigenangles(a: &CMatrix) -> Result<Vec<f64>> {
    let eig = unitary_eigen(a)?;
    let mut angles: Vec<f64> = eig.values.iter().map(|z| wrap_angle(z.arg())).collect();
    angles.sort_by(f64::total_cmp);
    Ok(angles)
}

/// Spectral measure of `C` and `e_1`.
pub fn unitary_eigensystem(c: &CmvMatrix) -> Result<SpectralMeasureCircle> {
    measure_of_unitary(c.entries())
}

pub fn measure_of_unitary(a: &CMatrix) -> Result<SpectralMeasureCircle> {
    let eig = unitary_eigen(a)?;
    if eig.max_residual > RESIDUAL_TOL {
        return Err(Error::EigenResidual {
            residual: eig.max_residual,
        });
    }
    let points: Vec<f64> = eig.values.iter().map(|z| wrap_angle(z.arg())).collect();
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            let sep = angular_distance(points[i], points[j]);
            if sep < SEPARATION_TOL {
                return Err(Error::DegenerateSpectrum { separation: sep });
            }
        }
    }
    SpectralMeasureCircle::normalized(points, eig.first_weights)
}

/// Spectral measure of a Jacobi matrix and `e_1`.
pub fn jacobi_eigensystem(j: &JacobiMatrix) -> Result<SpectralMeasureLine> {
    let dense = j.to_dense();
    let eig = SymmetricEigen::new(dense.clone());
    let n = j.n();
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let v = eig.eigenvectors.column(k);
        worst = worst.max((&dense * v - v * eig.eigenvalues[k]).norm());
    }
    let scale = dense.amax().max(1.0);
    if worst > RESIDUAL_TOL * scale {
        return Err(Error::EigenResidual { residual: worst });
    }
    let points: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let weights: Vec<f64> = (0..n).map(|k| eig.eigenvectors[(0, k)].powi(2)).collect();
    SpectralMeasureLine::normalized(points, weights)
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}
