//! Exact sparse matrix models for beta-ensembles, plus the Gibbs densities and
//! goodness-of-fit statistics used to check them.
//!
//! * circular: CMV matrix with independent `alpha_k ~ Theta_{beta(n-k-1)+1}`;
//! * jacobi: Geronimus image of independent real beta-distributed coefficients;
//! * hermite: Gaussian diagonal with `chi`-distributed off-diagonal.

mod gibbs;
mod ks;
mod rng;
mod variates;

pub use gibbs::gibbs_log_density;
pub use ks::{kolmogorov_sf, ks_statistic, ks_two_sample};
pub use rng::RngStream;
pub use variates::{sample_beta_interval, sample_chi, sample_gamma, sample_theta, sample_theta_sphere};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::cmv::{build_cmv, build_jacobi, JacobiMatrix, VerblunskySet, C64, INTERIOR_MARGIN};
use crate::error::{Error, Result};
use crate::opuc::geronimus_real;
use crate::par::{try_map_indexed, Execution};
use crate::spectral::{symmetric_eigenvalues, unitary_eigenangles};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Circular,
    Jacobi,
    Hermite,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circular" => Ok(Family::Circular),
            "jacobi" => Ok(Family::Jacobi),
            "hermite" => Ok(Family::Hermite),
            other => Err(Error::InvalidParams(format!("unknown family '{other}'"))),
        }
    }
}

/// Which ensemble to sample, with its parameters. `a` and `b` are only
/// used by the Jacobi family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub family: Family,
    pub n: usize,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
}

impl EnsembleSpec {
    pub fn circular(n: usize, beta: f64) -> Self {
        Self { family: Family::Circular, n, beta, a: 0.0, b: 0.0 }
    }

    pub fn hermite(n: usize, beta: f64) -> Self {
        Self { family: Family::Hermite, n, beta, a: 0.0, b: 0.0 }
    }

    pub fn jacobi(n: usize, beta: f64, a: f64, b: f64) -> Self {
        Self { family: Family::Jacobi, n, beta, a, b }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::InvalidParams(format!("beta = {} must be positive", self.beta)));
        }
        if self.family == Family::Jacobi && !(self.a > -1.0 && self.b > -1.0) {
            return Err(Error::InvalidParams(format!(
                "jacobi parameters a = {}, b = {} must exceed -1",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

/// Circular model: `alpha_k ~ Theta_{beta(n-k-1)+1}`, `k = 0..n-1`.
///
/// Interior draws are clamped to modulus `1 - 1e-12`; for small `beta` the
/// exact law puts visible mass that close to the circle.
pub fn sample_circular_beta<R: Rng + ?Sized>(n: usize, beta: f64, rng: &mut R) -> Result<VerblunskySet> {
    EnsembleSpec::circular(n, beta).validate()?;
    let mut alpha = Vec::with_capacity(n);
    for k in 0..n {
        let nu = beta * (n - k - 1) as f64 + 1.0;
        let mut z = sample_theta(nu, rng)?;
        if k + 1 < n && z.norm() > 1.0 - INTERIOR_MARGIN {
            z *= (1.0 - INTERIOR_MARGIN) / z.norm();
        }
        alpha.push(z);
    }
    VerblunskySet::new(alpha)
}

/// Beta parameters `(s, t)` of `alpha_k` in the Jacobi model of size `n`.
pub fn jacobi_coefficient_params(n: usize, beta: f64, a: f64, b: f64, k: usize) -> (f64, f64) {
    let (n, k) = (n as f64, k as f64);
    if (k as usize) % 2 == 0 {
        let c = (2.0 * n - k - 2.0) / 4.0 * beta;
        (c + a + 1.0, c + b + 1.0)
    } else {
        (
            (2.0 * n - k - 3.0) / 4.0 * beta + a + b + 2.0,
            (2.0 * n - k - 1.0) / 4.0 * beta,
        )
    }
}

/// Real interior coefficients `alpha_0..alpha_{2n-2}` of the Jacobi model.
pub fn sample_jacobi_coefficients<R: Rng + ?Sized>(
    n: usize,
    beta: f64,
    a: f64,
    b: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    EnsembleSpec::jacobi(n, beta, a, b).validate()?;
    (0..2 * n - 1)
        .map(|k| {
            let (s, t) = jacobi_coefficient_params(n, beta, a, b, k);
            sample_beta_interval(s, t, rng)
        })
        .collect()
}

/// Jacobi model: independent beta coefficients pushed through the Geronimus
/// relations with `alpha_{-1} = alpha_{2n-1} = -1`.
pub fn sample_jacobi_beta<R: Rng + ?Sized>(n: usize, beta: f64, a: f64, b: f64, rng: &mut R) -> Result<JacobiMatrix> {
    let coeffs = sample_jacobi_coefficients(n, beta, a, b, rng)?;
    geronimus_real(&coeffs)
}

/// Hermite model: standard Gaussian diagonal and
/// `a_k = chi_{beta (n - k)} / sqrt(2)` for `k = 1..n-1`.
pub fn sample_hermite_beta<R: Rng + ?Sized>(n: usize, beta: f64, rng: &mut R) -> Result<JacobiMatrix> {
    EnsembleSpec::hermite(n, beta).validate()?;
    let b: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let mut a = Vec::with_capacity(n.saturating_sub(1));
    for k in 1..n {
        let dof = beta * (n - k) as f64;
        let x = loop {
            let x = sample_chi(dof, rng)?;
            if x > 0.0 {
                break x;
            }
        };
        a.push(x / std::f64::consts::SQRT_2);
    }
    build_jacobi(b, a)
}

/// One draw of sorted eigenvalues (angles in `(-pi, pi]` for the circular
/// family).
pub fn sample_eigenvalues<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> Result<Vec<f64>> {
    spec.validate()?;
    match spec.family {
        Family::Circular => {
            let v = sample_circular_beta(spec.n, spec.beta, rng)?;
            unitary_eigenangles(build_cmv(&v).entries())
        }
        Family::Jacobi => {
            let j = sample_jacobi_beta(spec.n, spec.beta, spec.a, spec.b, rng)?;
            Ok(symmetric_eigenvalues(&j.to_dense()))
        }
        Family::Hermite => {
            let j = sample_hermite_beta(spec.n, spec.beta, rng)?;
            Ok(symmetric_eigenvalues(&j.to_dense()))
        }
    }
}

/// The coefficient data behind one draw.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelDraw {
    Circular(VerblunskySet),
    Jacobi { coefficients: Vec<f64>, matrix: JacobiMatrix },
    Hermite(JacobiMatrix),
}

pub fn sample_model<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> Result<ModelDraw> {
    spec.validate()?;
    Ok(match spec.family {
        Family::Circular => ModelDraw::Circular(sample_circular_beta(spec.n, spec.beta, rng)?),
        Family::Jacobi => {
            let coefficients = sample_jacobi_coefficients(spec.n, spec.beta, spec.a, spec.b, rng)?;
            let matrix = geronimus_real(&coefficients)?;
            ModelDraw::Jacobi { coefficients, matrix }
        }
        Family::Hermite => ModelDraw::Hermite(sample_hermite_beta(spec.n, spec.beta, rng)?),
    })
}

impl ModelDraw {
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        match self {
            ModelDraw::Circular(v) => unitary_eigenangles(build_cmv(v).entries()),
            ModelDraw::Jacobi { matrix, .. } | ModelDraw::Hermite(matrix) => {
                Ok(symmetric_eigenvalues(&matrix.to_dense()))
            }
        }
    }

    /// Complex coefficient list for serialization (real data for the line
    /// ensembles: diagonal followed by off-diagonal).
    pub fn coefficients(&self) -> Vec<C64> {
        match self {
            ModelDraw::Circular(v) => v.alpha().to_vec(),
            ModelDraw::Jacobi { coefficients, .. } => coefficients.iter().map(|&x| C64::new(x, 0.0)).collect(),
            ModelDraw::Hermite(j) => j
                .diagonal()
                .iter()
                .chain(j.off_diagonal())
                .map(|&x| C64::new(x, 0.0))
                .collect(),
        }
    }
}

/// `count` independent draws; replica `i` uses `RngStream::new(seed, i)`.
pub fn sample_batch(spec: &EnsembleSpec, seed: u64, count: usize, exec: Execution) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    try_map_indexed(count, exec, |i| {
        let mut rng = RngStream::new(seed, i as u64).rng();
        sample_eigenvalues(spec, &mut rng)
    })
}
