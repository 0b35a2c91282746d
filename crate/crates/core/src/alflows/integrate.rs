use serde::{Deserialize, Serialize};

use crate::cmv::{build_cmv, VerblunskySet, C64};
use crate::error::{Error, Result};
use crate::measure::angular_distance;
use crate::spectral::unitary_eigenangles;

use super::hamiltonian::Generator;
use super::lax::al_vector_field;

/// States whose interior coefficients reach this modulus stop the integrator.
pub const DEGENERATE_MODULUS: f64 = 1.0 - 1e-8;

/// Per-state health checks recorded along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepDiagnostics {
    /// Largest angular distance from an initial eigenvalue to its nearest
    /// current eigenvalue.
    pub eigenvalue_drift: f64,
    pub unitarity_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<VerblunskySet>,
    pub diagnostics: Vec<StepDiagnostics>,
}

impl Trajectory {
    pub fn last(&self) -> &VerblunskySet {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn max_eigenvalue_drift(&self) -> f64 {
        self.diagnostics.iter().map(|d| d.eigenvalue_drift).fold(0.0, f64::max)
    }

    pub fn max_unitarity_residual(&self) -> f64 {
        self.diagnostics.iter().map(|d| d.unitarity_residual).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowOptions {
    /// Keep every `record_every`-th step; the final state is always kept.
    pub record_every: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self { record_every: 1 }
    }
}

pub(crate) fn diagnose(v: &VerblunskySet, initial: &[f64]) -> Result<StepDiagnostics> {
    let c = build_cmv(v);
    let angles = unitary_eigenangles(c.entries())?;
    let eigenvalue_drift = initial
        .iter()
        .map(|&a| angles.iter().map(|&b| angular_distance(a, b)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    Ok(StepDiagnostics {
        eigenvalue_drift,
        unitarity_residual: c.unitarity_residual(),
    })
}

fn state(v0: &VerblunskySet, interior: &[C64]) -> Result<VerblunskySet> {
    if let Some((index, a)) = interior.iter().enumerate().find(|(_, a)| !(a.norm() <= DEGENERATE_MODULUS)) {
        return Err(Error::RhoTooSmall { index, rho: crate::cmv::rho_of(*a) });
    }
    v0.with_interior(interior)
}

fn axpy(x: &[C64], h: f64, y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(x, y)| x + y * h).collect()
}

/// One classical RK4 step of the flow of `g`.
pub fn rk4_step(v: &VerblunskySet, g: Generator, h: f64) -> Result<VerblunskySet> {
    let x = v.interior();
    let k1 = al_vector_field(v, g)?;
    let k2 = al_vector_field(&state(v, &axpy(x, h / 2.0, &k1))?, g)?;
    let k3 = al_vector_field(&state(v, &axpy(x, h / 2.0, &k2))?, g)?;
    let k4 = al_vector_field(&state(v, &axpy(x, h, &k3))?, g)?;
    let next: Vec<C64> = (0..x.len())
        .map(|i| x[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0))
        .collect();
    state(v, &next)
}

pub fn integrate_flow(v0: &VerblunskySet, g: Generator, t_final: f64, dt: f64) -> Result<Trajectory> {
    integrate_flow_with(v0, g, t_final, dt, FlowOptions::default())
}

/// Fixed-step RK4 from `v0` to `t_final`. The last step is shortened to land
/// on `t_final` exactly; the boundary coefficient is never touched.
pub fn integrate_flow_with(
    v0: &VerblunskySet,
    g: Generator,
    t_final: f64,
    dt: f64,
    opts: FlowOptions,
) -> Result<Trajectory> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidStep(format!("dt = {dt}")));
    }
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::InvalidStep(format!("t = {t_final}")));
    }
    let record_every = opts.record_every.max(1);
    state(v0, v0.interior())?;
    let initial = unitary_eigenangles(build_cmv(v0).entries())?;
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![v0.clone()],
        diagnostics: vec![diagnose(v0, &initial)?],
    };
    let steps = (t_final / dt - 1e-9).ceil().max(0.0) as usize;
    let mut v = v0.clone();
    for step in 1..=steps {
        let t0 = (step - 1) as f64 * dt;
        let t1 = if step == steps { t_final } else { step as f64 * dt };
        v = rk4_step(&v, g, t1 - t0)?;
        if step % record_every == 0 || step == steps {
            traj.times.push(t1);
            traj.diagnostics.push(diagnose(&v, &initial)?);
            traj.states.push(v.clone());
        }
    }
    Ok(traj)
}
