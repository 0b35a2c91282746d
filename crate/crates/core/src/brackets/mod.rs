//! Finite-difference evaluation of the Ablowitz-Ladik bracket
//!
//! ```text
//! {f, g} = sum_j rho_j^2 (df/du_j dg/dv_j - df/dv_j dg/du_j),   alpha_j = u_j + i v_j
//! ```
//!
//! over the interior coefficients, with the boundary coefficient held fixed.
//! Partials are central differences at steps `h` and `h/2` combined by
//! Richardson extrapolation.

mod jacobian;
mod observables;
mod suites;

pub use jacobian::{jacobian_formula, spectral_to_verblunsky_jacobian, BRANCH_MARGIN};
pub use observables::{cotangent_residual, cotangent_sum, hamiltonian_observables, phi_observable, SpectralObservables};
pub use suites::{run_suite, IdentityResult, Suite, SuiteConfig, SuiteReport};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cmv::{VerblunskySet, C64};
use crate::error::{Error, Result};

/// Probe points need `rho_j` above this.
pub const PROBE_RHO_MIN: f64 = 1e-6;

type EvalFn = dyn Fn(&VerblunskySet) -> Result<f64> + Send + Sync;

/// A named real function of the coefficients.
#[derive(Clone)]
pub struct Observable {
    pub name: String,
    eval: Arc<EvalFn>,
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Observable").field("name", &self.name).finish()
    }
}

impl Observable {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&VerblunskySet) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, v: &VerblunskySet) -> Result<f64> {
        (self.eval)(v)
    }

    /// `u_j = Re alpha_j`.
    pub fn u(j: usize) -> Self {
        Self::new(format!("u_{j}"), move |v| coordinate(v, j).map(|a| a.re))
    }

    /// `v_j = Im alpha_j`.
    pub fn v(j: usize) -> Self {
        Self::new(format!("v_{j}"), move |v| coordinate(v, j).map(|a| a.im))
    }

    pub fn product(&self, other: &Observable) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Self::new(format!("{}*{}", self.name, other.name), move |v| Ok(f.eval(v)? * g.eval(v)?))
    }

    pub fn scaled(&self, c: f64) -> Self {
        let f = self.clone();
        Self::new(format!("{c}*{}", self.name), move |v| Ok(c * f.eval(v)?))
    }

    pub fn minus(&self, other: &Observable) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Self::new(format!("{}-{}", self.name, other.name), move |v| Ok(f.eval(v)? - g.eval(v)?))
    }
}

fn coordinate(v: &VerblunskySet, j: usize) -> Result<C64> {
    v.interior()
        .get(j)
        .copied()
        .ok_or_else(|| Error::DimensionMismatch(format!("no interior coefficient {j} for n = {}", v.n())))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketOptions {
    pub h: f64,
    /// Allowed disagreement between the two step sizes, relative to the
    /// gradient's max norm (floored at 1).
    pub gradient_tolerance: f64,
}

impl Default for BracketOptions {
    fn default() -> Self {
        Self {
            h: 1e-5,
            gradient_tolerance: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketReport {
    pub value: f64,
    pub h: f64,
    pub h_fine: f64,
    /// Difference between the extrapolated value and the fine-step value.
    pub error_estimate: f64,
}

/// Partials in `(u_j, v_j)` at one probe point.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub du: Vec<f64>,
    pub dv: Vec<f64>,
    fine_du: Vec<f64>,
    fine_dv: Vec<f64>,
}

fn shifted(v: &VerblunskySet, j: usize, delta: C64) -> Result<VerblunskySet> {
    let mut interior = v.interior().to_vec();
    interior[j] += delta;
    v.with_interior(&interior)
}

fn central(f: &Observable, v: &VerblunskySet, j: usize, dir: C64, h: f64) -> Result<f64> {
    let plus = f.eval(&shifted(v, j, dir * h)?)?;
    let minus = f.eval(&shifted(v, j, -dir * h)?)?;
    Ok((plus - minus) / (2.0 * h))
}

pub fn gradient(f: &Observable, v: &VerblunskySet, opts: &BracketOptions) -> Result<Gradient> {
    let m = v.n() - 1;
    let (h, h2) = (opts.h, opts.h / 2.0);
    let mut g = Gradient {
        du: vec![0.0; m],
        dv: vec![0.0; m],
        fine_du: vec![0.0; m],
        fine_dv: vec![0.0; m],
    };
    let mut disagreement: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for j in 0..m {
        for (dir, out, fine) in [
            (C64::new(1.0, 0.0), &mut g.du, &mut g.fine_du),
            (C64::new(0.0, 1.0), &mut g.dv, &mut g.fine_dv),
        ] {
            let coarse = central(f, v, j, dir, h)?;
            let fine_value = central(f, v, j, dir, h2)?;
            disagreement = disagreement.max((coarse - fine_value).abs());
            let extrapolated = (4.0 * fine_value - coarse) / 3.0;
            scale = scale.max(extrapolated.abs());
            out[j] = extrapolated;
            fine[j] = fine_value;
        }
    }
    if disagreement > opts.gradient_tolerance * scale {
        return Err(Error::NonDifferentiable {
            name: f.name.clone(),
            disagreement: disagreement / scale,
        });
    }
    Ok(g)
}

fn pairing(rho: &[f64], fu: &[f64], fv: &[f64], gu: &[f64], gv: &[f64]) -> f64 {
    (0..rho.len()).map(|j| rho[j] * rho[j] * (fu[j] * gv[j] - fv[j] * gu[j])).sum()
}

/// The bracket of two precomputed gradients at `v`.
pub fn bracket_of_gradients(v: &VerblunskySet, f: &Gradient, g: &Gradient, h: f64) -> BracketReport {
    let rho = v.rho();
    let value = pairing(rho, &f.du, &f.dv, &g.du, &g.dv);
    let fine = pairing(rho, &f.fine_du, &f.fine_dv, &g.fine_du, &g.fine_dv);
    BracketReport {
        value,
        h,
        h_fine: h / 2.0,
        error_estimate: (value - fine).abs(),
    }
}

fn check_probe(v: &VerblunskySet) -> Result<()> {
    if let Some((index, &rho)) = v.rho().iter().enumerate().find(|(_, &r)| r <= PROBE_RHO_MIN) {
        return Err(Error::RhoTooSmall { index, rho });
    }
    Ok(())
}

pub fn al_bracket(f: &Observable, g: &Observable, v: &VerblunskySet) -> Result<BracketReport> {
    al_bracket_with(f, g, v, &BracketOptions::default())
}

pub fn al_bracket_with(f: &Observable, g: &Observable, v: &VerblunskySet, opts: &BracketOptions) -> Result<BracketReport> {
    check_probe(v)?;
    let gf = gradient(f, v, opts)?;
    let gg = gradient(g, v, opts)?;
    Ok(bracket_of_gradients(v, &gf, &gg, opts.h))
}

/// Gradients of several observables at one probe point, for filling bracket
/// matrices without recomputing partials.
pub struct GradientTable<'a> {
    v: &'a VerblunskySet,
    h: f64,
    grads: Vec<Gradient>,
}

impl<'a> GradientTable<'a> {
    pub fn new(v: &'a VerblunskySet, observables: &[Observable], opts: &BracketOptions) -> Result<Self> {
        check_probe(v)?;
        let grads = observables.iter().map(|f| gradient(f, v, opts)).collect::<Result<Vec<_>>>()?;
        Ok(Self { v, h: opts.h, grads })
    }

    pub fn bracket(&self, i: usize, j: usize) -> BracketReport {
        bracket_of_gradients(self.v, &self.grads[i], &self.grads[j], self.h)
    }

    pub fn gradient(&self, i: usize) -> &Gradient {
        &self.grads[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmv::random_verblunsky;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn probe(n: usize, seed: u64) -> VerblunskySet {
        random_verblunsky(n, 0.8, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn coordinate_brackets() {
        let v = probe(5, 1);
        for k in 0..4 {
            let b = al_bracket(&Observable::u(k), &Observable::v(k), &v).unwrap();
            assert!((b.value - v.rho()[k].powi(2)).abs() < 1e-9);
            for l in 0..4 {
                if l != k {
                    assert!(al_bracket(&Observable::u(k), &Observable::u(l), &v).unwrap().value.abs() < 1e-12);
                    assert!(al_bracket(&Observable::u(k), &Observable::v(l), &v).unwrap().value.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn antisymmetry_and_leibniz() {
        let v = probe(4, 2);
        let f = Observable::u(0).product(&Observable::v(1));
        let g = Observable::v(0).product(&Observable::u(2));
        let h = Observable::u(1).product(&Observable::u(0));
        let fg = al_bracket(&f, &g, &v).unwrap().value;
        let gf = al_bracket(&g, &f, &v).unwrap().value;
        assert!((fg + gf).abs() < 1e-12);
        let lhs = al_bracket(&f.product(&g), &h, &v).unwrap().value;
        let rhs = f.eval(&v).unwrap() * al_bracket(&g, &h, &v).unwrap().value
            + g.eval(&v).unwrap() * al_bracket(&f, &h, &v).unwrap().value;
        assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn kinks_are_flagged() {
        let v = VerblunskySet::new(vec![C64::new(0.0, 0.3), C64::new(1.0, 0.0)]).unwrap();
        let kink = Observable::new("|u_0 - c|", |v: &VerblunskySet| Ok((v.alpha()[0].re - 7e-6).abs()));
        assert!(matches!(
            al_bracket(&kink, &Observable::v(0), &v),
            Err(Error::NonDifferentiable { .. })
        ));
    }

    #[test]
    fn single_coefficient_has_no_brackets() {
        let v = VerblunskySet::new(vec![C64::from_polar(1.0, 0.2)]).unwrap();
        let f = Observable::new("re", |v: &VerblunskySet| Ok(v.alpha()[0].re));
        assert_eq!(al_bracket(&f, &f, &v).unwrap().value, 0.0);
    }
}
