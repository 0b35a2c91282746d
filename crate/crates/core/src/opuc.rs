//! Orthogonal polynomials on the unit circle and the maps between
//! measures, Verblunsky coefficients and Jacobi matrices.
//!
//! Two independent routes from a measure to its Verblunsky coefficients are
//! provided:
//!
//! * [`verblunsky_from_measure`] runs the Szegő recursion on the values of
//!   `Phi_k` and `Phi_k^*` at the support points. This is the everyday path.
//! * [`heine_coefficients`] evaluates Heine's subset-sum formula
//!   `Phi_k(0) = E[prod_{j in S} (-z_j)]`, where `S` ranges over k-subsets of
//!   the support weighted by `prod mu_j |Vandermonde(S)|^2`. All weights are
//!   positive, so the result keeps full relative precision even when the
//!   masses span hundreds of orders of magnitude. Cost is `O(2^n n)`.

use std::f64::consts::PI;

use crate::cmv::{build_jacobi, JacobiMatrix, VerblunskySet, C64, INTERIOR_MARGIN};
use crate::error::{Error, Result};
use crate::measure::{SpectralMeasureCircle, SpectralMeasureLine};

/// Below this squared norm the recursion refuses to continue.
pub const MIN_NORM_SQ: f64 = 1e-13;
/// Largest support handled by subset enumeration.
pub const MAX_HEINE_SUPPORT: usize = 20;

/// Polynomial with complex coefficients `c_0 + c_1 z + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<C64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<C64>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial needs at least one coefficient");
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Nominal degree (length of the coefficient vector minus one).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::default(), |acc, &c| acc * z + c)
    }

    /// `c_l -> conj(c_{k-l})` with `k` the nominal degree.
    pub fn reversed(&self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().rev().map(|c| c.conj()).collect(),
        }
    }
}

/// Polynomial whose leading coefficient is exactly one.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPolynomial(Polynomial);

impl MonicPolynomial {
    pub fn new(mut coeffs: Vec<C64>) -> Result<Self> {
        match coeffs.last() {
            Some(lead) if (lead - C64::new(1.0, 0.0)).norm() <= 1e-12 => {
                *coeffs.last_mut().unwrap() = C64::new(1.0, 0.0);
                Ok(Self(Polynomial::new(coeffs)))
            }
            _ => Err(Error::InvalidParams("polynomial is not monic".into())),
        }
    }

    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    pub fn coeffs(&self) -> &[C64] {
        self.0.coeffs()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.0.eval(z)
    }

    pub fn as_polynomial(&self) -> &Polynomial {
        &self.0
    }
}

/// Reversed polynomial `Phi^*(z) = z^k conj(Phi(1 / conj z))`.
pub fn reversed_poly(p: &MonicPolynomial) -> Polynomial {
    p.0.reversed()
}

fn inner(weights: &[f64], f: &[C64], g: &[C64]) -> C64 {
    weights
        .iter()
        .zip(f.iter().zip(g))
        .map(|(w, (a, b))| *a * b.conj() * *w)
        .sum()
}

/// Monic orthogonal polynomials `Phi_0 .. Phi_{k_max}` in `L^2(mu)`, by
/// modified Gram-Schmidt on the monomials with one re-orthogonalization pass.
pub fn monic_opuc(mu: &SpectralMeasureCircle, k_max: usize) -> Result<Vec<MonicPolynomial>> {
    let n = mu.len();
    if k_max > n {
        return Err(Error::SupportTooSmall {
            requested: k_max,
            support: n,
        });
    }
    let nodes = mu.nodes();
    let w = mu.weights();
    let mut coeffs: Vec<Vec<C64>> = Vec::with_capacity(k_max + 1);
    let mut values: Vec<Vec<C64>> = Vec::with_capacity(k_max + 1);
    let mut norms: Vec<f64> = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut c = vec![C64::default(); k + 1];
        c[k] = C64::new(1.0, 0.0);
        let mut v: Vec<C64> = nodes.iter().map(|z| z.powu(k as u32)).collect();
        for _pass in 0..2 {
            for j in 0..k {
                let proj = inner(w, &v, &values[j]) / norms[j];
                for (ci, cj) in c.iter_mut().zip(&coeffs[j]) {
                    *ci -= proj * cj;
                }
                for (vi, vj) in v.iter_mut().zip(&values[j]) {
                    *vi -= proj * vj;
                }
            }
        }
        let norm_sq = inner(w, &v, &v).re;
        if k < k_max && norm_sq < MIN_NORM_SQ {
            return Err(Error::IllConditioned { degree: k, norm_sq });
        }
        coeffs.push(c);
        values.push(v);
        norms.push(norm_sq);
    }
    coeffs.into_iter().map(MonicPolynomial::new).collect()
}

/// Inverse spectral map: the Verblunsky coefficients of an n-point measure.
///
/// Runs `Phi_{k+1} = z Phi_k - conj(a_k) Phi_k^*` and
/// `Phi_{k+1}^* = Phi_k^* - a_k z Phi_k` on support values, with
/// `conj(a_k) = <z Phi_k, Phi_k^*> / ||Phi_k^*||^2`, the unique choice making
/// `Phi_{k+1}` orthogonal to `Phi_k^*` (equivalently `conj(a_k) = -Phi_{k+1}(0)`).
pub fn verblunsky_from_measure(mu: &SpectralMeasureCircle) -> Result<VerblunskySet> {
    let n = mu.len();
    let nodes = mu.nodes();
    let w = mu.weights();
    let mut phi = vec![C64::new(1.0, 0.0); n];
    let mut phi_star = phi.clone();
    let mut alpha = Vec::with_capacity(n);
    for k in 0..n {
        let norm_sq = inner(w, &phi_star, &phi_star).re;
        if norm_sq < MIN_NORM_SQ {
            return Err(Error::IllConditioned { degree: k, norm_sq });
        }
        let z_phi: Vec<C64> = nodes.iter().zip(&phi).map(|(z, p)| z * p).collect();
        let alpha_bar = inner(w, &z_phi, &phi_star) / norm_sq;
        let a = alpha_bar.conj();
        alpha.push(a);
        if k + 1 < n {
            if a.norm() > 1.0 - INTERIOR_MARGIN {
                return Err(Error::IllConditioned { degree: k + 1, norm_sq: norm_sq * (1.0 - a.norm_sqr()) });
            }
            for j in 0..n {
                let p = z_phi[j] - alpha_bar * phi_star[j];
                let ps = phi_star[j] - a * z_phi[j];
                phi[j] = p;
                phi_star[j] = ps;
            }
        }
    }
    let last = alpha[n - 1];
    if (last.norm() - 1.0).abs() > 1e-6 {
        return Err(Error::IllConditioned {
            degree: n,
            norm_sq: last.norm(),
        });
    }
    alpha[n - 1] = last / last.norm();
    VerblunskySet::new(alpha)
}

/// One coefficient from the subset-sum representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeineCoefficient {
    /// `alpha_{k-1}` for subsets of size `k`.
    pub alpha: C64,
    /// Contribution of the heaviest k-subset alone, a unimodular number.
    pub dominant: C64,
    /// `alpha / dominant - 1`, accumulated without cancellation.
    pub relative_deviation: C64,
    /// The heaviest subset as a bit mask over the support points.
    pub dominant_subset: u32,
}

/// All `n` Verblunsky coefficients of the measure with the given support
/// angles and natural-log masses (need not be normalized).
pub fn heine_coefficients(points: &[f64], log_weights: &[f64]) -> Result<Vec<HeineCoefficient>> {
    let n = points.len();
    if n == 0 || n != log_weights.len() {
        return Err(Error::InvalidMeasure("mismatched support and weights".into()));
    }
    if n > MAX_HEINE_SUPPORT {
        return Err(Error::SupportTooLarge(n));
    }
    let size = 1usize << n;
    let mut log_w = vec![0.0f64; size];
    let mut phase = vec![0.0f64; size];
    for mask in 1..size {
        let top = usize::BITS - 1 - mask.leading_zeros();
        let top = top as usize;
        let rest = mask & !(1 << top);
        let mut lw = log_w[rest] + log_weights[top];
        let mut bits = rest;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let s = ((points[i] - points[top]) / 2.0).sin().abs();
            lw += (4.0 * s * s).ln();
        }
        log_w[mask] = lw;
        phase[mask] = phase[rest] + points[top];
    }
    let mut best = vec![(f64::NEG_INFINITY, 0usize); n + 1];
    for mask in 1..size {
        let k = mask.count_ones() as usize;
        if log_w[mask] > best[k].0 {
            best[k] = (log_w[mask], mask);
        }
    }
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let (lw_star, star) = best[k];
        if !lw_star.is_finite() {
            return Err(Error::InvalidMeasure("coincident support points".into()));
        }
        let mut total = 0.0;
        let mut dev = C64::default();
        for mask in 1..size {
            if mask.count_ones() as usize != k {
                continue;
            }
            let p = (log_w[mask] - lw_star).exp();
            total += p;
            if mask != star {
                // c_S / c_* - 1 with c_S = prod conj(z_j): e^{i d} - 1
                let d = phase[star] - phase[mask];
                let half = d / 2.0;
                let diff = C64::new(0.0, 2.0 * half.sin()) * C64::from_polar(1.0, half);
                dev += diff * p;
            }
        }
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let dominant = C64::from_polar(sign, -phase[star]);
        let relative_deviation = dev / total;
        out.push(HeineCoefficient {
            alpha: dominant * (C64::new(1.0, 0.0) + relative_deviation),
            dominant,
            relative_deviation,
            dominant_subset: star as u32,
        });
    }
    Ok(out)
}

/// Verblunsky coefficients through [`heine_coefficients`].
pub fn verblunsky_from_measure_subsets(mu: &SpectralMeasureCircle) -> Result<VerblunskySet> {
    let log_w: Vec<f64> = mu.weights().iter().map(|w| w.ln()).collect();
    let coeffs = heine_coefficients(mu.points(), &log_w)?;
    VerblunskySet::new(coeffs.into_iter().map(|c| c.alpha).collect())
}

/// Geronimus relations for real interior coefficients `alpha_0..alpha_{2n-2}`
/// with `alpha_{-1} = alpha_{2n-1} = -1`.
pub fn geronimus_real(interior: &[f64]) -> Result<JacobiMatrix> {
    if interior.len() % 2 == 0 {
        return Err(Error::InvalidBoundary(format!(
            "expected an odd number of interior coefficients, got {}",
            interior.len()
        )));
    }
    if let Some((index, &value)) = interior.iter().enumerate().find(|(_, a)| !(a.abs() < 1.0)) {
        return Err(Error::OutOfRange { index, value });
    }
    let n = (interior.len() + 1) / 2;
    let at = |k: isize| -> f64 {
        if k < 0 || k as usize >= interior.len() {
            -1.0
        } else {
            interior[k as usize]
        }
    };
    let mut b = Vec::with_capacity(n);
    let mut a = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n as isize {
        let prev = at(2 * k - 1);
        let mut bk = (1.0 - prev) * at(2 * k);
        if k > 0 {
            bk -= (1.0 + prev) * at(2 * k - 2);
        }
        b.push(bk);
        if (k as usize) + 1 < n {
            let ak = at(2 * k);
            a.push(((1.0 - prev) * (1.0 - ak) * (1.0 + ak) * (1.0 + at(2 * k + 1))).sqrt());
        }
    }
    build_jacobi(b, a)
}

/// Geronimus relations for a real Verblunsky set of even size with last
/// coefficient `-1`.
pub fn geronimus(v: &VerblunskySet) -> Result<JacobiMatrix> {
    if v.n() % 2 != 0 {
        return Err(Error::InvalidBoundary(format!("size {} is odd", v.n())));
    }
    if (v.last() + 1.0).norm() > 1e-10 {
        return Err(Error::InvalidBoundary(format!("alpha[2n-1] = {} is not -1", v.last())));
    }
    let mut interior = Vec::with_capacity(v.n() - 1);
    for (index, a) in v.interior().iter().enumerate() {
        if a.im.abs() > 1e-12 {
            return Err(Error::InvalidBoundary(format!("alpha[{index}] = {a} is not real")));
        }
        interior.push(a.re);
    }
    geronimus_real(&interior)
}

/// Push-forward of a conjugation-symmetric circle measure under
/// `z -> z + 1/z`.
pub fn szego_project(mu: &SpectralMeasureCircle) -> Result<SpectralMeasureLine> {
    const SYMMETRY_TOL: f64 = 1e-10;
    const AXIS_TOL: f64 = 1e-8;
    let points = mu.points();
    let weights = mu.weights();
    if let Some(&theta) = points
        .iter()
        .find(|t| t.abs() < AXIS_TOL || t.abs() > PI - AXIS_TOL)
    {
        return Err(Error::SupportAtRealAxis { theta });
    }
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for (j, &theta) in points.iter().enumerate() {
        if theta < 0.0 {
            continue;
        }
        let partner = points
            .iter()
            .position(|&t| (t + theta).abs() <= SYMMETRY_TOL)
            .ok_or(Error::NotSymmetric)?;
        xs.push(2.0 * theta.cos());
        ws.push(weights[j] + weights[partner]);
    }
    if 2 * xs.len() != points.len() {
        return Err(Error::NotSymmetric);
    }
    SpectralMeasureLine::normalized(xs, ws)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmv::{build_cmv, random_verblunsky};
    use crate::spectral::unitary_eigensystem;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn reversed_examples() {
        let p = MonicPolynomial::new(vec![c(0., 0.), c(1., 0.)]).unwrap();
        assert_eq!(reversed_poly(&p).coeffs(), &[c(1., 0.), c(0., 0.)]);
        let p = MonicPolynomial::new(vec![c(0., 2.), c(1., 1.), c(1., 0.)]).unwrap();
        assert_eq!(reversed_poly(&p).coeffs(), &[c(1., 0.), c(1., -1.), c(0., -2.)]);
        let z = c(0.3, -1.7);
        let direct = z * z * p.eval(c(1.0, 0.0) / z.conj()).conj();
        assert!((reversed_poly(&p).eval(z) - direct).norm() < 1e-13);
    }

    #[test]
    fn reversing_twice_scales_by_conj_constant() {
        let c0 = C64::from_polar(1.0, 0.9);
        let p = MonicPolynomial::new(vec![c0, c(0.2, -0.4), c(-1.1, 0.3), c(1., 0.)]).unwrap();
        let twice = reversed_poly(&p).reversed();
        for (a, b) in twice.coeffs().iter().zip(p.coeffs()) {
            assert!((a - b).norm() < 1e-15);
        }
        // Normalizing the reversal to monic form and reversing again gives
        // p scaled by 1 / c0 = conj(c0) for a unimodular constant term.
        let once = reversed_poly(&p);
        let lead = *once.coeffs().last().unwrap();
        assert!((lead - c0.conj()).norm() < 1e-15);
        let monic = MonicPolynomial::new(once.coeffs().iter().map(|x| x / lead).collect()).unwrap();
        let back = reversed_poly(&monic);
        for (a, b) in back.coeffs().iter().zip(p.coeffs()) {
            assert!((a - b * c0.conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn symmetric_two_point_measure() {
        let mu = SpectralMeasureCircle::new(vec![0.0, PI], vec![0.5, 0.5]).unwrap();
        let phis = monic_opuc(&mu, 2).unwrap();
        assert!(phis[1].coeffs()[0].norm() < 1e-15);
        // Phi_2 = (z - 1)(z + 1)
        assert!((phis[2].coeffs()[0] + 1.0).norm() < 1e-14);
        assert!(phis[2].coeffs()[1].norm() < 1e-14);
        let v = verblunsky_from_measure(&mu).unwrap();
        assert!(v.alpha()[0].norm() < 1e-15);
        assert!((v.alpha()[1] - 1.0).norm() < 1e-14);
    }

    #[test]
    fn single_point() {
        let theta = -2.2;
        let mu = SpectralMeasureCircle::new(vec![theta], vec![1.0]).unwrap();
        let v = verblunsky_from_measure(&mu).unwrap();
        assert!((v.alpha()[0] - C64::from_polar(1.0, -theta)).norm() < 1e-15);
    }

    #[test]
    fn top_polynomial_vanishes_on_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let v = random_verblunsky(6, 0.8, &mut rng);
        let mu = unitary_eigensystem(&build_cmv(&v)).unwrap();
        let phis = monic_opuc(&mu, 6).unwrap();
        for z in mu.nodes() {
            assert!(phis[6].eval(z).norm() < 1e-10);
        }
        assert!(matches!(monic_opuc(&mu, 7), Err(Error::SupportTooSmall { .. })));
    }

    #[test]
    fn last_coefficient_is_product_of_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..8 {
            let points: Vec<f64> = (0..n).map(|j| -3.0 + 6.0 * (j as f64 + rng.random::<f64>() * 0.5) / n as f64).collect();
            let weights: Vec<f64> = (0..n).map(|_| 0.1 + rng.random::<f64>()).collect();
            let mu = SpectralMeasureCircle::normalized(points, weights).unwrap();
            let v = verblunsky_from_measure(&mu).unwrap();
            let prod: C64 = mu.nodes().iter().product();
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            assert!((v.last() - prod.conj() * sign).norm() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn subset_route_agrees_with_recursion() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for n in 1..=9 {
            let v = random_verblunsky(n, 0.85, &mut rng);
            let mu = unitary_eigensystem(&build_cmv(&v)).unwrap();
            let a = verblunsky_from_measure(&mu).unwrap();
            let b = verblunsky_from_measure_subsets(&mu).unwrap();
            for (x, y) in a.alpha().iter().zip(b.alpha()) {
                assert!((x - y).norm() < 1e-10, "n = {n}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn heine_deviation_keeps_precision_for_extreme_masses() {
        let points = [-2.0, -0.5, 1.0, 2.5];
        let log_w = [0.0, -300.0, -600.0, -650.0];
        let coeffs = heine_coefficients(&points, &log_w).unwrap();
        for (k, h) in coeffs.iter().enumerate() {
            assert_eq!(h.dominant_subset, (1u32 << (k + 1)) - 1);
            assert!((h.dominant.norm() - 1.0).abs() < 1e-15);
        }
        assert!(coeffs[0].relative_deviation.norm() > 0.0);
        assert!(coeffs[0].relative_deviation.norm() < 1e-100);
    }

    #[test]
    fn geronimus_examples() {
        let j = geronimus_real(&[0.0; 5]).unwrap();
        assert_eq!(j.diagonal(), &[0.0, 0.0, 0.0]);
        assert_abs_diff_eq!(j.off_diagonal()[0], 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(j.off_diagonal()[1], 1.0, epsilon = 1e-15);

        let j = geronimus_real(&[0.3]).unwrap();
        assert_eq!(j.diagonal(), &[0.6]);

        let v = VerblunskySet::new(vec![c(0.3, 0.), c(-1., 0.)]).unwrap();
        assert_eq!(geronimus(&v).unwrap().diagonal(), &[0.6]);
        let bad = VerblunskySet::new(vec![c(0.3, 0.), c(1., 0.)]).unwrap();
        assert!(matches!(geronimus(&bad), Err(Error::InvalidBoundary(_))));
        let complex = VerblunskySet::new(vec![c(0.3, 0.1), c(-1., 0.)]).unwrap();
        assert!(geronimus(&complex).is_err());
        assert!(geronimus_real(&[0.3, 0.2]).is_err());
    }

    #[test]
    fn szego_projection_examples() {
        let mu = SpectralMeasureCircle::new(vec![PI / 2.0, -PI / 2.0], vec![0.5, 0.5]).unwrap();
        let nu = szego_project(&mu).unwrap();
        assert_eq!(nu.len(), 1);
        assert!(nu.points()[0].abs() < 1e-15);
        assert_eq!(nu.weights(), &[1.0]);

        let t = PI / 3.0;
        let mu = SpectralMeasureCircle::new(vec![t, -t, 2.0 * t, -2.0 * t], vec![0.25; 4]).unwrap();
        let nu = szego_project(&mu).unwrap();
        assert_abs_diff_eq!(nu.points()[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(nu.points()[1], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(nu.weights()[0], 0.5, epsilon = 1e-15);

        let asym = SpectralMeasureCircle::new(vec![0.5, -0.6], vec![0.5, 0.5]).unwrap();
        assert!(matches!(szego_project(&asym), Err(Error::NotSymmetric)));
        let axis = SpectralMeasureCircle::new(vec![0.0, 1.0, -1.0], vec![0.2, 0.4, 0.4]).unwrap();
        assert!(matches!(szego_project(&axis), Err(Error::SupportAtRealAxis { .. })));
    }
}
