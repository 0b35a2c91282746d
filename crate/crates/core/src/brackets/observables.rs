use std::sync::Arc;

use crate::alflows::{hamiltonian_k, HamiltonianSpec};
use crate::cmv::{build_cmv, VerblunskySet};
use crate::error::{Error, Result};
use crate::measure::{wrap_angle, SpectralMeasureCircle};
use crate::spectral::unitary_eigensystem;

use super::{al_bracket, Observable};

/// Base points closer than this are not tracked.
pub const MIN_TRACKED_SEPARATION: f64 = 1e-6;

/// Eigenvalue angles and masses as observables near a base point. Each
/// evaluation re-solves the eigenproblem and labels the eigenvalues by
/// nearest angle to the base spectrum.
#[derive(Debug, Clone)]
pub struct SpectralObservables {
    base: Arc<SpectralMeasureCircle>,
}

fn matched(base: &SpectralMeasureCircle, v: &VerblunskySet) -> Result<(Vec<f64>, Vec<f64>)> {
    let mu = unitary_eigensystem(&build_cmv(v))?;
    let n = base.len();
    if mu.len() != n {
        return Err(Error::DimensionMismatch(format!("{} eigenvalues, expected {n}", mu.len())));
    }
    let mut theta = vec![0.0; n];
    let mut weight = vec![0.0; n];
    let mut used = vec![false; n];
    for (j, &t0) in base.points().iter().enumerate() {
        let mut dist: Vec<(f64, usize)> = mu
            .points()
            .iter()
            .enumerate()
            .map(|(i, &t)| (wrap_angle(t - t0).abs(), i))
            .collect();
        dist.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (d1, i) = dist[0];
        if n > 1 && dist[1].0 < 2.0 * d1 {
            return Err(Error::MatchingAmbiguous);
        }
        if used[i] {
            return Err(Error::MatchingAmbiguous);
        }
        used[i] = true;
        // unwrap relative to the base angle so the observable is smooth
        theta[j] = t0 + wrap_angle(mu.points()[i] - t0);
        weight[j] = mu.weights()[i];
    }
    Ok((theta, weight))
}

impl SpectralObservables {
    pub fn new(v: &VerblunskySet) -> Result<Self> {
        let base = unitary_eigensystem(&build_cmv(v))?;
        let sep = base.min_separation();
        if sep <= MIN_TRACKED_SEPARATION {
            return Err(Error::DegenerateSpectrum { separation: sep });
        }
        Ok(Self { base: Arc::new(base) })
    }

    pub fn base(&self) -> &SpectralMeasureCircle {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    fn observable<F>(&self, name: String, pick: F) -> Observable
    where
        F: Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        let base = self.base.clone();
        Observable::new(name, move |v| {
            let (theta, weight) = matched(&base, v)?;
            Ok(pick(&theta, &weight))
        })
    }

    /// `theta_j`, labels `j = 0..n-1` in ascending base angle.
    pub fn theta(&self, j: usize) -> Observable {
        self.observable(format!("theta_{j}"), move |t, _| t[j])
    }

    pub fn mu(&self, j: usize) -> Observable {
        self.observable(format!("mu_{j}"), move |_, w| w[j])
    }

    pub fn total_mass(&self) -> Observable {
        self.observable("sum_mu".into(), |_, w| w.iter().sum())
    }

    /// `log(mu_j / mu_l)`.
    pub fn log_ratio(&self, j: usize, l: usize) -> Observable {
        self.observable(format!("log(mu_{j}/mu_{l})"), move |_, w| (w[j] / w[l]).ln())
    }

    /// `log(mu_j / mu_l) / 2`.
    pub fn half_log_ratio(&self, j: usize, l: usize) -> Observable {
        self.observable(format!("log(mu_{j}/mu_{l})/2"), move |_, w| 0.5 * (w[j] / w[l]).ln())
    }
}

/// `Re K_m` and `Im K_m` as observables.
pub fn hamiltonian_observables(m: usize) -> (Observable, Observable) {
    assert!(m >= 1);
    (
        Observable::new(format!("Re K_{m}"), move |v| Ok(hamiltonian_k(&build_cmv(v), m).re)),
        Observable::new(format!("Im K_{m}"), move |v| Ok(hamiltonian_k(&build_cmv(v), m).im)),
    )
}

/// `phi = Im tr f(C)` as an observable.
pub fn phi_observable(spec: &HamiltonianSpec) -> Observable {
    let spec = spec.clone();
    Observable::new("phi", move |v| Ok(spec.value(build_cmv(v).entries())))
}

/// `2cot((t_a - t_b)/2) + 2cot((t_b - t_c)/2) + 2cot((t_c - t_a)/2)`.
pub fn cotangent_sum(ta: f64, tb: f64, tc: f64) -> f64 {
    let cot = |x: f64| 2.0 / (x / 2.0).tan();
    cot(ta - tb) + cot(tb - tc) + cot(tc - ta)
}

/// `{log(mu_b/mu_a), log(mu_c/mu_a)} - cotangent_sum(theta_a, theta_b, theta_c)`
/// for the labels `[a, b, c]` (ascending-angle indices).
pub fn cotangent_residual(v: &VerblunskySet, labels: [usize; 3]) -> Result<f64> {
    let n = v.n();
    let [a, b, c] = labels;
    if n < 3 || a == b || b == c || a == c || labels.iter().any(|&l| l >= n) {
        return Err(Error::InvalidParams(format!("labels {labels:?} for n = {n}")));
    }
    let obs = SpectralObservables::new(v)?;
    let lhs = al_bracket(&obs.log_ratio(b, a), &obs.log_ratio(c, a), v)?.value;
    let t = obs.base().points();
    Ok(lhs - cotangent_sum(t[a], t[b], t[c]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alflows::{al_vector_field, exact_propagate, Generator, Part};
    use crate::brackets::{GradientTable, Observable};
    use crate::cmv::{random_verblunsky, C64};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn probe(n: usize, seed: u64) -> VerblunskySet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let v = random_verblunsky(n, 0.7, &mut rng);
            let mu = unitary_eigensystem(&build_cmv(&v)).unwrap();
            if mu.min_separation() > 0.4 {
                return v;
            }
        }
    }

    #[test]
    fn theta_commute_and_mass_is_casimir_like() {
        let v = probe(4, 3);
        let obs = SpectralObservables::new(&v).unwrap();
        let mut list: Vec<Observable> = (0..4).map(|j| obs.theta(j)).collect();
        list.push(obs.total_mass());
        list.push(Observable::u(1));
        let table = GradientTable::new(&v, &list, &Default::default()).unwrap();
        for j in 0..4 {
            for k in 0..4 {
                assert!(table.bracket(j, k).value.abs() < 1e-6);
            }
            assert!(table.bracket(j, 4).value.abs() < 1e-6);
        }
        assert!(table.bracket(5, 4).value.abs() < 1e-6);
    }

    #[test]
    fn canonical_pairs() {
        for n in 2..6 {
            let v = probe(n, 10 + n as u64);
            let obs = SpectralObservables::new(&v).unwrap();
            for l in 0..n - 1 {
                for j in 0..n - 1 {
                    let b = al_bracket(&obs.theta(l), &obs.half_log_ratio(j, n - 1), &v).unwrap().value;
                    let expected = if j == l { 1.0 } else { 0.0 };
                    assert!((b - expected).abs() < 1e-5, "n = {n}, l = {l}, j = {j}: {b}");
                }
            }
        }
    }

    #[test]
    fn hamiltonians_commute_and_generate_the_lax_flow() {
        let v = probe(5, 4);
        let mut list = Vec::new();
        for m in 1..4 {
            let (re, im) = hamiltonian_observables(m);
            list.push(re);
            list.push(im);
        }
        for j in 0..4 {
            list.push(Observable::u(j));
            list.push(Observable::v(j));
        }
        let table = GradientTable::new(&v, &list, &Default::default()).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert!(table.bracket(a, b).value.abs() < 1e-6);
            }
        }
        for (m, part, col) in [(1, Part::Re, 0), (1, Part::Im, 1), (2, Part::Re, 2), (3, Part::Im, 5)] {
            let field = al_vector_field(&v, Generator::new(m, part).unwrap()).unwrap();
            for j in 0..4 {
                let du = table.bracket(6 + 2 * j, col).value;
                let dv = table.bracket(7 + 2 * j, col).value;
                assert!((C64::new(du, dv) - field[j]).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn mass_bracket_with_phi() {
        // {phi, log mu_j} = F_j - sum_l F_l mu_l
        let v = probe(4, 6);
        let spec = HamiltonianSpec::new(vec![C64::new(0.3, 0.5), C64::new(-0.2, 0.1)]).unwrap();
        let obs = SpectralObservables::new(&v).unwrap();
        let base = obs.base().clone();
        let mean: f64 = base.points().iter().zip(base.weights()).map(|(&t, &w)| spec.f_of_theta(t) * w).sum();
        for j in 0..4 {
            let log_mu = Observable::new("log mu", {
                let m = obs.mu(j);
                move |v: &VerblunskySet| Ok(m.eval(v)?.ln())
            });
            let b = al_bracket(&phi_observable(&spec), &log_mu, &v).unwrap().value;
            assert!((b - (spec.f_of_theta(base.points()[j]) - mean)).abs() < 1e-6, "{j}: {b}");
        }
        let _ = exact_propagate;
    }

    #[test]
    fn cotangent_identity() {
        for n in 3..6 {
            let v = probe(n, 20 + n as u64);
            let r = cotangent_residual(&v, [0, 1, 2]).unwrap();
            assert!(r.abs() < 1e-5, "n = {n}: {r}");
        }
    }
}
