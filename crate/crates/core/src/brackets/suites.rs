use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::alflows::{al_vector_field, Generator, Part};
use crate::cmv::{build_cmv, random_verblunsky, VerblunskySet, C64};
use crate::ensembles::RngStream;
use crate::error::{Error, Result};
use crate::measure::SpectralMeasureCircle;
use crate::par::{try_map_indexed, Execution};
use crate::spectral::unitary_eigensystem;

use super::jacobian::{jacobian_formula, spectral_to_verblunsky_jacobian, BRANCH_MARGIN};
use super::observables::{cotangent_sum, hamiltonian_observables, SpectralObservables};
use super::{BracketOptions, GradientTable, Observable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Brackets,
    Jacobian,
    Cotangent,
    Canonical,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brackets" => Ok(Suite::Brackets),
            "jacobian" => Ok(Suite::Jacobian),
            "cotangent" => Ok(Suite::Cotangent),
            "canonical" => Ok(Suite::Canonical),
            other => Err(Error::InvalidParams(format!("unknown suite '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub exec: Execution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub identity: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub identities: Vec<IdentityResult>,
    pub passed: bool,
}

/// Minimum eigenvalue separation of bracket probes.
pub const PROBE_SEPARATION: f64 = 0.3;

/// Random coefficients (interior radius 0.7) whose spectrum is separated
/// by at least [`PROBE_SEPARATION`], or `2 pi / (3 n)` for large `n`.
pub fn separated_probe<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<VerblunskySet> {
    let sep = PROBE_SEPARATION.min(2.0 * PI / (3.0 * n as f64));
    for _ in 0..10_000 {
        let v = random_verblunsky(n, 0.7, rng);
        if unitary_eigensystem(&build_cmv(&v))?.min_separation() >= sep {
            return Ok(v);
        }
    }
    Err(Error::InvalidParams(format!("no separated probe found for n = {n}")))
}

/// Random measure with separated points, masses at least `0.2 / n`, and
/// `arg(alpha_{n-1})` away from the branch cut.
pub fn separated_measure<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SpectralMeasureCircle> {
    let sep = PROBE_SEPARATION.min(2.0 * PI / (3.0 * n as f64));
    for _ in 0..10_000 {
        let points: Vec<f64> = (0..n).map(|_| rng.random_range(-PI..PI)).collect();
        let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let total: f64 = raw.iter().sum();
        if raw.iter().any(|w| w / total < 0.2 / n as f64) {
            continue;
        }
        let Ok(mu) = SpectralMeasureCircle::normalized(points, raw) else {
            continue;
        };
        if mu.min_separation() < sep {
            continue;
        }
        let phi = crate::measure::wrap_angle((n as f64 - 1.0) * PI - mu.points().iter().sum::<f64>());
        if PI - phi.abs() < 2.0 * BRANCH_MARGIN {
            continue;
        }
        return Ok(mu);
    }
    Err(Error::InvalidParams(format!("no separated measure found for n = {n}")))
}

type Residuals = Vec<(&'static str, f64, f64)>;

fn brackets_trial(v: &VerblunskySet) -> Result<Residuals> {
    let n = v.n();
    let m = n - 1;
    let opts = BracketOptions::default();
    let obs = SpectralObservables::new(v)?;
    let mut list: Vec<Observable> = Vec::new();
    for j in 0..m {
        list.push(Observable::u(j));
        list.push(Observable::v(j));
    }
    let theta0 = list.len();
    for j in 0..n {
        list.push(obs.theta(j));
    }
    let mass = list.len();
    list.push(obs.total_mass());
    let ham0 = list.len();
    for k in 1..=3 {
        let (re, im) = hamiltonian_observables(k);
        list.push(re);
        list.push(im);
    }
    let table = GradientTable::new(v, &list, &opts)?;
    let b = |i: usize, j: usize| table.bracket(i, j).value;

    let mut br_equal: f64 = 0.0;
    let mut antisym: f64 = 0.0;
    for k in 0..m {
        for l in 0..m {
            let (uk, vk, ul, vl) = (2 * k, 2 * k + 1, 2 * l, 2 * l + 1);
            let a_abar = C64::new(b(uk, ul) + b(vk, vl), b(vk, ul) - b(uk, vl));
            let a_a = C64::new(b(uk, ul) - b(vk, vl), b(uk, vl) + b(vk, ul));
            let expected = if k == l { C64::new(0.0, -2.0 * v.rho()[k].powi(2)) } else { C64::default() };
            br_equal = br_equal.max((a_abar - expected).norm()).max(a_a.norm());
        }
    }
    for i in 0..list.len() {
        for j in 0..list.len() {
            antisym = antisym.max((b(i, j) + b(j, i)).abs());
        }
    }
    let mut theta_commute: f64 = 0.0;
    for j in 0..n {
        for k in 0..n {
            theta_commute = theta_commute.max(b(theta0 + j, theta0 + k).abs());
        }
    }
    let mass_casimir = (0..list.len()).map(|i| b(i, mass).abs()).fold(0.0, f64::max);
    let mut involution: f64 = 0.0;
    for a in 0..6 {
        for c in 0..6 {
            involution = involution.max(b(ham0 + a, ham0 + c).abs());
        }
    }
    let mut flow: f64 = 0.0;
    for k in 1..=3 {
        for (p, part) in [(0, Part::Re), (1, Part::Im)] {
            let field = al_vector_field(v, Generator::new(k, part)?)?;
            let h = ham0 + 2 * (k - 1) + p;
            for j in 0..m {
                flow = flow.max((C64::new(b(2 * j, h), b(2 * j + 1, h)) - field[j]).norm());
            }
        }
    }
    Ok(vec![
        ("brackets of alpha_k and conj(alpha_l)", br_equal, 1e-6),
        ("eigenvalue angles commute", theta_commute, 1e-6),
        ("hamiltonians are in involution", involution, 1e-6),
        ("total mass is a casimir", mass_casimir, 1e-6),
        ("antisymmetry", antisym, 1e-8),
        ("bracket with Re/Im K_m equals the Lax field", flow, 1e-6),
    ])
}

fn canonical_trial(v: &VerblunskySet) -> Result<Residuals> {
    let n = v.n();
    let obs = SpectralObservables::new(v)?;
    let mut list: Vec<Observable> = (0..n - 1).map(|l| obs.theta(l)).collect();
    list.extend((0..n - 1).map(|j| obs.half_log_ratio(j, n - 1)));
    let table = GradientTable::new(v, &list, &BracketOptions::default())?;
    let mut worst: f64 = 0.0;
    for l in 0..n - 1 {
        for j in 0..n - 1 {
            let expected = if l == j { 1.0 } else { 0.0 };
            worst = worst.max((table.bracket(l, n - 1 + j).value - expected).abs());
        }
    }
    Ok(vec![("{theta_l, log(mu_j/mu_n)/2} = delta_jl", worst, 1e-5)])
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn cotangent_trial<R: Rng + ?Sized>(v: &VerblunskySet, rng: &mut R) -> Result<Residuals> {
    let n = v.n();
    let obs = SpectralObservables::new(v)?;
    let mut triple = [0usize, 1, 2];
    if n > 3 {
        // a random triple of distinct labels
        let mut labels: Vec<usize> = (0..n).collect();
        for i in 0..3 {
            let j = rng.random_range(i..n);
            labels.swap(i, j);
        }
        triple.copy_from_slice(&labels[..3]);
    }
    let mut list = Vec::new();
    for p in PERMUTATIONS {
        let [a, b, c] = p.map(|i| triple[i]);
        list.push(obs.log_ratio(b, a));
        list.push(obs.log_ratio(c, a));
    }
    let table = GradientTable::new(v, &list, &BracketOptions::default())?;
    let t = obs.base().points();
    let mut residual: f64 = 0.0;
    let mut spread: f64 = 0.0;
    let mut first = None;
    for (i, p) in PERMUTATIONS.iter().enumerate() {
        let [a, b, c] = p.map(|i| triple[i]);
        let r = table.bracket(2 * i, 2 * i + 1).value - cotangent_sum(t[a], t[b], t[c]);
        residual = residual.max(r.abs());
        let r0 = *first.get_or_insert(r);
        spread = spread.max((r - r0).abs());
    }
    Ok(vec![
        ("cotangent identity", residual, 1e-5),
        ("cotangent residual is labelling invariant", spread, 1e-6),
    ])
}

fn jacobian_trial(mu: &SpectralMeasureCircle) -> Result<Residuals> {
    let numeric = spectral_to_verblunsky_jacobian(mu)?;
    let formula = jacobian_formula(mu)?;
    if mu.len() == 1 {
        return Ok(vec![("jacobian determinant (absolute, n = 1)", (numeric - formula).abs(), 1e-12)]);
    }
    Ok(vec![("jacobian determinant (relative)", (numeric / formula - 1.0).abs(), 1e-6)])
}

fn min_n(suite: Suite) -> usize {
    match suite {
        Suite::Jacobian => 1,
        Suite::Brackets | Suite::Canonical => 2,
        Suite::Cotangent => 3,
    }
}

/// Runs one verification suite over `trials` random instances; trial `i`
/// draws from `RngStream::new(seed, i)`.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    if cfg.n < min_n(cfg.suite) {
        return Err(Error::InvalidParams(format!(
            "suite {:?} needs n >= {}",
            cfg.suite,
            min_n(cfg.suite)
        )));
    }
    if cfg.trials == 0 {
        return Err(Error::InvalidParams("trials must be positive".into()));
    }
    let per_trial = try_map_indexed(cfg.trials, cfg.exec, |i| -> Result<Residuals> {
        let mut rng = RngStream::new(cfg.seed, i as u64).rng();
        match cfg.suite {
            Suite::Brackets => brackets_trial(&separated_probe(cfg.n, &mut rng)?),
            Suite::Canonical => canonical_trial(&separated_probe(cfg.n, &mut rng)?),
            Suite::Cotangent => {
                let v = separated_probe(cfg.n, &mut rng)?;
                cotangent_trial(&v, &mut rng)
            }
            Suite::Jacobian => jacobian_trial(&separated_measure(cfg.n, &mut rng)?),
        }
    })?;
    let mut identities: Vec<IdentityResult> = per_trial[0]
        .iter()
        .map(|&(name, _, tol)| IdentityResult {
            identity: name.to_string(),
            max_residual: 0.0,
            tolerance: tol,
            passed: true,
        })
        .collect();
    for trial in &per_trial {
        for (slot, &(_, r, _)) in identities.iter_mut().zip(trial) {
            // NaN counts as a failure
            slot.max_residual = if r.is_nan() { f64::NAN } else { slot.max_residual.max(r) };
        }
    }
    for id in &mut identities {
        id.passed = id.max_residual <= id.tolerance;
    }
    Ok(SuiteReport {
        suite: cfg.suite,
        n: cfg.n,
        trials: cfg.trials,
        seed: cfg.seed,
        passed: identities.iter().all(|i| i.passed),
        identities,
    })
}
