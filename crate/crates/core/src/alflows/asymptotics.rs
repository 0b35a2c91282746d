use serde::{Deserialize, Serialize};

use crate::cmv::{build_cmv, VerblunskySet, C64};
use crate::error::{Error, Result};
use crate::measure::SpectralMeasureCircle;
use crate::opuc::heine_coefficients;
use crate::spectral::unitary_eigensystem;

use super::hamiltonian::HamiltonianSpec;
use super::propagate::exact_propagate_log;

/// Smallest admissible gap between consecutive `lambda_j = F(z_j)`.
pub const LAMBDA_GAP_TOL: f64 = 1e-8;

/// Predicted and fitted long-time behaviour of `alpha_{k-1}(t)` and of the
/// spectral masses. Eigenvalues are labelled so that `lambda_1 > ... > lambda_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub k: usize,
    /// `lambda_j`, descending.
    pub lambdas: Vec<f64>,
    /// `z_j` in the same order.
    pub nodes: Vec<C64>,
    pub predicted_limit: C64,
    pub predicted_rate: f64,
    pub xi: C64,
    /// Leading coefficient of `rho_{k-1}^2(t)`, equal to `-2 Re xi`.
    pub predicted_rho_sq: f64,
    pub fitted_limit: C64,
    pub fitted_rate: f64,
    pub fitted_xi: C64,
    pub fitted_rho_sq: f64,
    /// `lambda_1 - lambda_j` for `j = 1..n`.
    pub predicted_mass_rates: Vec<f64>,
    /// Minus the fitted slopes of `log mu_j(t)`.
    pub fitted_mass_rates: Vec<f64>,
}

impl AsymptoticReport {
    pub fn rate_error(&self) -> f64 {
        (self.fitted_rate / self.predicted_rate - 1.0).abs()
    }

    pub fn limit_error(&self) -> f64 {
        (self.fitted_limit - self.predicted_limit).norm()
    }

    /// `|arg(fitted correction) - arg(z_k conj(z_{k+1}) - 1)|`, wrapped.
    pub fn direction_error(&self) -> f64 {
        let k = self.k;
        let target = (self.nodes[k - 1] * self.nodes[k].conj() - 1.0).arg();
        crate::measure::angular_distance(self.fitted_xi.arg(), target)
    }

    /// Worst relative error over the decaying masses `j = 2..n`.
    pub fn mass_rate_error(&self) -> f64 {
        self.fitted_mass_rates
            .iter()
            .zip(&self.predicted_mass_rates)
            .skip(1)
            .map(|(f, p)| (f / p - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Storage indices of `mu` sorted by `F(theta)` descending.
pub fn lambda_order(mu: &SpectralMeasureCircle, spec: &HamiltonianSpec) -> Result<Vec<usize>> {
    let lambda: Vec<f64> = mu.points().iter().map(|&t| spec.f_of_theta(t)).collect();
    let mut order: Vec<usize> = (0..mu.len()).collect();
    order.sort_by(|&a, &b| lambda[b].total_cmp(&lambda[a]));
    if let Some(gap) = order
        .windows(2)
        .map(|w| lambda[w[0]] - lambda[w[1]])
        .find(|&g| g < LAMBDA_GAP_TOL)
    {
        return Err(Error::NonDistinctLambda { gap });
    }
    Ok(order)
}

/// Sample times suited to `asymptotic_report`: the fit window starts once the
/// subleading exponentials are negligible, spans 15 decay lengths, and a
/// final point 35 decay lengths out fixes the limit.
pub fn adaptive_grid(v0: &VerblunskySet, spec: &HamiltonianSpec, k: usize, points: usize) -> Result<Vec<f64>> {
    let mu = unitary_eigensystem(&build_cmv(v0))?;
    let order = lambda_order(&mu, spec)?;
    check_k(k, mu.len())?;
    let lambda: Vec<f64> = order.iter().map(|&i| spec.f_of_theta(mu.points()[i])).collect();
    let min_gap = lambda.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
    let rate = lambda[k - 1] - lambda[k];
    let start = (30.0 / min_gap).min(500.0 / rate);
    let points = points.max(2);
    let mut grid: Vec<f64> = (0..points)
        .map(|i| start + 15.0 / rate * i as f64 / (points - 1) as f64)
        .collect();
    grid.push(start + 35.0 / rate);
    Ok(grid)
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::InvalidParams(format!("k = {k} must lie in 1..{}", n.saturating_sub(1).max(1))));
    }
    Ok(())
}

/// Least-squares line `y = a + b t`; returns `(a, b)`.
fn linear_fit(t: &[f64], y: &[f64]) -> (f64, f64) {
    let m = t.len() as f64;
    let tm = t.iter().sum::<f64>() / m;
    let ym = y.iter().sum::<f64>() / m;
    let sxy: f64 = t.iter().zip(y).map(|(t, y)| (t - tm) * (y - ym)).sum();
    let sxx: f64 = t.iter().map(|t| (t - tm) * (t - tm)).sum();
    let b = sxy / sxx;
    (ym - b * tm, b)
}

/// Compares the exact evolution of `alpha_{k-1}` on `t_grid` with its
/// predicted limit and leading correction. The last grid time supplies the
/// fitted limit; the remaining times are used for the log-linear fits.
pub fn asymptotic_report(
    v0: &VerblunskySet,
    spec: &HamiltonianSpec,
    k: usize,
    t_grid: &[f64],
) -> Result<AsymptoticReport> {
    let mu = unitary_eigensystem(&build_cmv(v0))?;
    let n = mu.len();
    check_k(k, n)?;
    if t_grid.len() < 3 || t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidStep("need at least three increasing times".into()));
    }
    let order = lambda_order(&mu, spec)?;
    let theta: Vec<f64> = order.iter().map(|&i| mu.points()[i]).collect();
    let weights: Vec<f64> = order.iter().map(|&i| mu.weights()[i]).collect();
    let nodes: Vec<C64> = theta.iter().map(|&t| C64::from_polar(1.0, t)).collect();
    let lambdas: Vec<f64> = theta.iter().map(|&t| spec.f_of_theta(t)).collect();
    let relabeled = SpectralMeasureCircle::new(theta.clone(), weights.clone())?;
    // the constructor sorts by angle; keep a map back to the lambda order
    let position: Vec<usize> = theta
        .iter()
        .map(|t| relabeled.points().iter().position(|p| p == t).expect("point survives relabeling"))
        .collect();

    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    let predicted_limit = nodes[..k].iter().fold(C64::new(sign, 0.0), |acc, z| acc * z.conj());
    let predicted_rate = lambdas[k - 1] - lambdas[k];
    let (zk, zk1) = (nodes[k - 1], nodes[k]);
    let product: f64 = nodes[..k - 1].iter().map(|zl| ((zk1 - zl) / (zk - zl)).norm_sqr()).product();
    let xi = (zk * zk1.conj() - 1.0) * (weights[k] / weights[k - 1]) * product;

    let mut alpha = Vec::with_capacity(t_grid.len());
    let mut log_mu = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let lw = exact_propagate_log(&relabeled, spec, t);
        let c = heine_coefficients(relabeled.points(), &lw)?[k - 1];
        alpha.push(c);
        log_mu.push(position.iter().map(|&p| lw[p]).collect::<Vec<f64>>());
    }
    let last = *alpha.last().expect("grid is non-empty");
    let fitted_limit = last.alpha;

    let fit_times = &t_grid[..t_grid.len() - 1];
    let mut ts = Vec::new();
    let mut log_dev = Vec::new();
    let mut log_rho = Vec::new();
    let mut last_dev = C64::default();
    for (c, &t) in alpha.iter().zip(fit_times) {
        let dev = if c.dominant_subset == last.dominant_subset {
            (c.relative_deviation - last.relative_deviation) / (1.0 + last.relative_deviation)
        } else {
            c.alpha / fitted_limit - 1.0
        };
        let d = c.relative_deviation;
        let rho_sq = -(2.0 * d.re + d.norm_sqr());
        if dev.norm() > 0.0 && rho_sq > 0.0 {
            ts.push(t);
            log_dev.push(dev.norm().ln());
            log_rho.push(rho_sq.ln());
            last_dev = dev;
        }
    }
    if ts.len() < 2 {
        return Err(Error::InvalidStep("correction underflows on the fit window".into()));
    }
    let (intercept, slope) = linear_fit(&ts, &log_dev);
    let (rho_intercept, _) = linear_fit(&ts, &log_rho);
    let fitted_xi = C64::from_polar(intercept.exp(), last_dev.arg());

    let fitted_mass_rates = (0..n)
        .map(|j| {
            let y: Vec<f64> = log_mu[..fit_times.len()].iter().map(|row| row[j]).collect();
            -linear_fit(fit_times, &y).1
        })
        .collect();
    let predicted_mass_rates = lambdas.iter().map(|l| lambdas[0] - l).collect();

    Ok(AsymptoticReport {
        k,
        nodes,
        predicted_limit,
        predicted_rate,
        xi,
        predicted_rho_sq: -2.0 * xi.re,
        fitted_limit,
        fitted_rate: -slope,
        fitted_xi,
        fitted_rho_sq: rho_intercept.exp(),
        predicted_mass_rates,
        fitted_mass_rates,
        lambdas,
    })
}
