use crate::cmv::{build_cmv, VerblunskySet};
use crate::error::{Error, Result};
use crate::measure::SpectralMeasureCircle;
use crate::opuc::{heine_coefficients, verblunsky_from_measure, MAX_HEINE_SUPPORT};
use crate::spectral::{unitary_eigenangles, unitary_eigensystem};

use super::hamiltonian::HamiltonianSpec;
use super::integrate::{diagnose, Trajectory};

/// Normalized log masses at time `t` of the evolution `d/dt g = {phi, g}`:
/// points stay fixed and
/// `log mu_j(t) = log mu_j(0) + F(theta_j) t - log sum_l mu_l(0) e^{F(theta_l) t}`.
pub fn exact_propagate_log(mu0: &SpectralMeasureCircle, spec: &HamiltonianSpec, t: f64) -> Vec<f64> {
    let raw: Vec<f64> = mu0
        .points()
        .iter()
        .zip(mu0.weights())
        .map(|(&theta, &w)| w.ln() + spec.f_of_theta(theta) * t)
        .collect();
    let max = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + raw.iter().map(|x| (x - max).exp()).sum::<f64>().ln();
    raw.into_iter().map(|x| x - lse).collect()
}

/// Spectral measure at time `t` under the flow of `spec`.
pub fn exact_propagate(mu0: &SpectralMeasureCircle, spec: &HamiltonianSpec, t: f64) -> Result<SpectralMeasureCircle> {
    if t == 0.0 {
        return Ok(mu0.clone());
    }
    let weights = exact_propagate_log(mu0, spec, t).into_iter().map(f64::exp).collect();
    SpectralMeasureCircle::normalized(mu0.points().to_vec(), weights)
}

/// Coefficients of `mu0` propagated by [`exact_propagate_log`] for time `t`.
pub(crate) fn coefficients_at(mu0: &SpectralMeasureCircle, spec: &HamiltonianSpec, t: f64) -> Result<VerblunskySet> {
    if mu0.len() <= MAX_HEINE_SUPPORT {
        // subset sums stay accurate when the masses spread over many decades
        let log_w = exact_propagate_log(mu0, spec, t);
        let coeffs = heine_coefficients(mu0.points(), &log_w)?;
        VerblunskySet::new(coeffs.into_iter().map(|c| c.alpha).collect())
    } else {
        verblunsky_from_measure(&exact_propagate(mu0, spec, t)?)
    }
}

/// Exact time-`t` map of the Lax flow `dC/dt = [C, P]`: eigensolve,
/// propagate the masses, and invert the spectral map.
///
/// The Lax flow is `d/dt g = {g, phi}`, the reverse of the mass evolution in
/// [`exact_propagate`], so the masses are taken at time `-t`.
pub fn flow_via_spectral(v0: &VerblunskySet, spec: &HamiltonianSpec, t: f64) -> Result<VerblunskySet> {
    let mu0 = unitary_eigensystem(&build_cmv(v0))?;
    coefficients_at(&mu0, spec, -t)
}

/// [`flow_via_spectral`] sampled at the given increasing times.
pub fn trajectory_via_spectral(v0: &VerblunskySet, spec: &HamiltonianSpec, times: &[f64]) -> Result<Trajectory> {
    if times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidStep("times must be finite and increasing".into()));
    }
    let mu0 = unitary_eigensystem(&build_cmv(v0))?;
    let initial = unitary_eigenangles(build_cmv(v0).entries())?;
    let mut traj = Trajectory { times: Vec::new(), states: Vec::new(), diagnostics: Vec::new() };
    for &t in times {
        let v = coefficients_at(&mu0, spec, -t)?;
        traj.diagnostics.push(diagnose(&v, &initial)?);
        traj.times.push(t);
        traj.states.push(v);
    }
    Ok(traj)
}
