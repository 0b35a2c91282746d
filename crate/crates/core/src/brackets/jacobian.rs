use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::measure::{wrap_angle, SpectralMeasureCircle};
use crate::opuc::verblunsky_from_measure;

/// `arg(alpha_{n-1})` must stay this far from the branch cut at `pi`.
pub const BRANCH_MARGIN: f64 = 0.1;

/// `-2^{1-n} (rho_0^2 ... rho_{n-2}^2) / (mu_1 ... mu_n)`.
pub fn jacobian_formula(mu: &SpectralMeasureCircle) -> Result<f64> {
    let v = verblunsky_from_measure(mu)?;
    let n = mu.len() as i32;
    let rho_sq: f64 = v.rho().iter().map(|r| r * r).product();
    let mass: f64 = mu.weights().iter().product();
    Ok(-(2f64).powi(1 - n) * rho_sq / mass)
}

/// Coordinates `(u_0, v_0, ..., u_{n-2}, v_{n-2}, phi)` as functions of
/// `(theta_1, mu_1, ..., theta_{n-1}, mu_{n-1}, theta_n)`.
fn forward(x: &[f64], n: usize, phi0: f64) -> Result<Vec<f64>> {
    let mut points = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for j in 0..n - 1 {
        points.push(x[2 * j]);
        weights.push(x[2 * j + 1]);
    }
    points.push(x[2 * n - 2]);
    weights.push(1.0 - weights.iter().sum::<f64>());
    let mu = SpectralMeasureCircle::new(points, weights)?;
    let v = verblunsky_from_measure(&mu)?;
    let mut y = Vec::with_capacity(2 * n - 1);
    for a in v.interior() {
        y.push(a.re);
        y.push(a.im);
    }
    y.push(phi0 + wrap_angle(v.last().arg() - phi0));
    Ok(y)
}

/// Determinant of the Jacobian of the inverse spectral map by Richardson
/// extrapolated central differences. Masses are stepped relative to the
/// smaller of themselves and the dependent mass `mu_n`.
pub fn spectral_to_verblunsky_jacobian(mu: &SpectralMeasureCircle) -> Result<f64> {
    let n = mu.len();
    let v = verblunsky_from_measure(mu)?;
    let phi0 = v.last().arg();
    if std::f64::consts::PI - phi0.abs() < BRANCH_MARGIN {
        return Err(Error::BranchProximity { phi: phi0 });
    }
    let dim = 2 * n - 1;
    let mut x = Vec::with_capacity(dim);
    for j in 0..n - 1 {
        x.push(mu.points()[j]);
        x.push(mu.weights()[j]);
    }
    x.push(mu.points()[n - 1]);
    let last_mass = mu.weights()[n - 1];
    let base_step = 1e-3;
    let mut jac = DMatrix::<f64>::zeros(dim, dim);
    for c in 0..dim {
        let is_mass = c % 2 == 1 && c + 1 < dim;
        let h = if is_mass { base_step * x[c].min(last_mass) } else { base_step };
        let diff = |h: f64| -> Result<Vec<f64>> {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[c] += h;
            xm[c] -= h;
            let step = xp[c] - xm[c];
            let (yp, ym) = (forward(&xp, n, phi0)?, forward(&xm, n, phi0)?);
            Ok(yp.iter().zip(&ym).map(|(a, b)| (a - b) / step).collect())
        };
        let coarse = diff(h)?;
        let fine = diff(h / 2.0)?;
        for r in 0..dim {
            jac[(r, c)] = (4.0 * fine[r] - coarse[r]) / 3.0;
        }
    }
    Ok(jac.determinant())
}
