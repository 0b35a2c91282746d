use crate::cmv::{rho_of, C64};
use crate::error::{Error, Result};

use super::integrate::Trajectory;

/// `beta_k(t) = e^{-2it} alpha_k(t)` for every state, boundary included.
pub fn gauge_transform(traj: &Trajectory) -> Vec<Vec<C64>> {
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&t, v)| {
            let phase = C64::from_polar(1.0, -2.0 * t);
            v.alpha().iter().map(|a| a * phase).collect()
        })
        .collect()
}

/// Largest `|-i beta_j' - rho_j^2 (beta_{j+1} + beta_{j-1}) + 2 beta_j|` over
/// interior `j` and interior sample times, with `beta_{-1}(t) = -e^{-2it}`
/// and `beta'` from the five-point central stencil. The samples must be
/// equally spaced.
pub fn ale1_residual(times: &[f64], betas: &[Vec<C64>]) -> Result<f64> {
    if times.len() != betas.len() || times.len() < 5 {
        return Err(Error::InvalidStep("need at least five equally spaced samples".into()));
    }
    let h = times[1] - times[0];
    if !(h > 0.0) || times.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0)) {
        return Err(Error::InvalidStep("samples are not equally spaced".into()));
    }
    let n = betas[0].len();
    let mut worst: f64 = 0.0;
    for s in 2..times.len() - 2 {
        let beta = &betas[s];
        let before = C64::from_polar(-1.0, -2.0 * times[s]);
        for j in 0..n.saturating_sub(1) {
            let d = (betas[s - 2][j] - betas[s - 1][j] * 8.0 + betas[s + 1][j] * 8.0 - betas[s + 2][j]) / (12.0 * h);
            let prev = if j == 0 { before } else { beta[j - 1] };
            let rho2 = rho_of(beta[j]).powi(2);
            let r = -C64::i() * d - (beta[j + 1] + prev) * rho2 + beta[j] * 2.0;
            worst = worst.max(r.norm());
        }
    }
    Ok(worst)
}
