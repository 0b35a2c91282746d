//! The finite Ablowitz-Ladik hierarchy on Verblunsky coefficients.
//!
//! Flows are generated by `phi(C) = Im tr f(C)`; the basic Hamiltonians are
//! `K_m = tr(C^m) / m`. Each flow is available three ways: as the Lax
//! equation `dC/dt = [C, P]` integrated with RK4, exactly through the linear
//! evolution of the spectral masses, and (for `m = 1`) in closed form.

mod asymptotics;
mod gauge;
mod hamiltonian;
mod integrate;
mod lax;
mod propagate;
mod toda;

pub use asymptotics::{adaptive_grid, asymptotic_report, lambda_order, AsymptoticReport};
pub use gauge::{ale1_residual, gauge_transform};
pub use hamiltonian::{hamiltonian_k, matrix_power, Generator, HamiltonianSpec, Part};
pub use integrate::{
    integrate_flow, integrate_flow_with, rk4_step, FlowOptions, StepDiagnostics, Trajectory, DEGENERATE_MODULUS,
};
pub use lax::{
    al_field_closed_form, al_vector_field, commutator, lax_p, lax_velocity, plus_projection, schur_vector_field,
    RHO_GUARD,
};
pub use propagate::{exact_propagate, exact_propagate_log, flow_via_spectral, trajectory_via_spectral};
pub use toda::{integrate_toda, toda_partner, toda_vector_field};
