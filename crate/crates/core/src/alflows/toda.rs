use nalgebra::DMatrix;

use crate::cmv::{build_jacobi, JacobiMatrix};
use crate::error::{Error, Result};

/// `P = J_+ - J_-`: the off-diagonal of `J` with the lower half negated.
pub fn toda_partner(j: &JacobiMatrix) -> DMatrix<f64> {
    let n = j.n();
    let mut p = DMatrix::zeros(n, n);
    for (k, &a) in j.off_diagonal().iter().enumerate() {
        p[(k, k + 1)] = a;
        p[(k + 1, k)] = -a;
    }
    p
}

/// Toda velocity `dJ/dt = [J, P]`, a symmetric tridiagonal matrix.
pub fn toda_vector_field(j: &JacobiMatrix) -> DMatrix<f64> {
    let dense = j.to_dense();
    let p = toda_partner(j);
    &dense * &p - &p * &dense
}

fn split(m: &DMatrix<f64>) -> (Vec<f64>, Vec<f64>) {
    let n = m.nrows();
    ((0..n).map(|k| m[(k, k)]).collect(), (0..n - 1).map(|k| m[(k, k + 1)]).collect())
}

/// Classical RK4 on the Toda flow with fixed step `dt`.
pub fn integrate_toda(j0: &JacobiMatrix, t_final: f64, dt: f64) -> Result<JacobiMatrix> {
    if !(dt > 0.0) || !(t_final >= 0.0) {
        return Err(Error::InvalidStep(format!("dt = {dt}, t = {t_final}")));
    }
    let steps = (t_final / dt).ceil() as usize;
    let field = |b: &[f64], a: &[f64]| -> Result<(Vec<f64>, Vec<f64>)> {
        let j = build_jacobi(b.to_vec(), a.to_vec())?;
        Ok(split(&toda_vector_field(&j)))
    };
    let axpy = |x: &[f64], h: f64, y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(x, y)| x + h * y).collect() };
    let mut b = j0.diagonal().to_vec();
    let mut a = j0.off_diagonal().to_vec();
    let mut t = 0.0;
    for step in 0..steps {
        let h = if step + 1 == steps { t_final - t } else { dt };
        let (kb1, ka1) = field(&b, &a)?;
        let (kb2, ka2) = field(&axpy(&b, h / 2.0, &kb1), &axpy(&a, h / 2.0, &ka1))?;
        let (kb3, ka3) = field(&axpy(&b, h / 2.0, &kb2), &axpy(&a, h / 2.0, &ka2))?;
        let (kb4, ka4) = field(&axpy(&b, h, &kb3), &axpy(&a, h, &ka3))?;
        for i in 0..b.len() {
            b[i] += h / 6.0 * (kb1[i] + 2.0 * kb2[i] + 2.0 * kb3[i] + kb4[i]);
        }
        for i in 0..a.len() {
            a[i] += h / 6.0 * (ka1[i] + 2.0 * ka2[i] + 2.0 * ka3[i] + ka4[i]);
        }
        t += h;
    }
    build_jacobi(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::symmetric_eigenvalues;

    #[test]
    fn diagonal_matrix_is_stationary() {
        let j = build_jacobi(vec![1.0, -2.0, 0.5], vec![1e-300, 1e-300]).unwrap();
        assert!(toda_vector_field(&j).amax() < 1e-250);
    }

    #[test]
    fn two_by_two_commutator() {
        // J = [[0, 1], [1, 0]], P = [[0, 1], [-1, 0]]: [J, P] = diag(-2, 2).
        let j = build_jacobi(vec![0.0, 0.0], vec![1.0]).unwrap();
        let f = toda_vector_field(&j);
        assert_eq!(f, DMatrix::from_row_slice(2, 2, &[-2.0, 0.0, 0.0, 2.0]));
    }

    #[test]
    fn field_is_symmetric_tridiagonal() {
        let j = build_jacobi(vec![0.3, -1.0, 2.0, 0.1], vec![0.5, 1.5, 0.7]).unwrap();
        let f = toda_vector_field(&j);
        assert!((&f - f.transpose()).amax() < 1e-15);
        for r in 0..4usize {
            for c in 0..4usize {
                if r.abs_diff(c) > 1 {
                    assert_eq!(f[(r, c)], 0.0);
                }
            }
        }
    }

    #[test]
    fn rk4_is_isospectral() {
        let j = build_jacobi(vec![0.3, -1.0, 2.0, 0.1], vec![0.5, 1.5, 0.7]).unwrap();
        let before = symmetric_eigenvalues(&j.to_dense());
        let after = integrate_toda(&j, 1.0, 1e-3).unwrap();
        let e = symmetric_eigenvalues(&after.to_dense());
        for (x, y) in before.iter().zip(&e) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}
