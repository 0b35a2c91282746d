//! Scalar random variates used by the matrix models.

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::cmv::C64;
use crate::error::{Error, Result};

/// Draws from `Theta_nu`: rotation invariant on the disk with density
/// `(nu-1)/(2 pi) (1 - |z|^2)^{(nu-3)/2}` for `nu > 1`, uniform on the unit
/// circle for `nu = 1`.
///
/// The radius is drawn so that `(1 - |z|^2)^{(nu-1)/2}` is uniform.
pub fn sample_theta<R: Rng + ?Sized>(nu: f64, rng: &mut R) -> Result<C64> {
    if !(nu >= 1.0) {
        return Err(Error::InvalidNu(nu));
    }
    let phase = TAU * rng.random::<f64>();
    if nu == 1.0 {
        return Ok(C64::from_polar(1.0, phase));
    }
    let u = 1.0 - rng.random::<f64>();
    let one_minus_s = u.powf(2.0 / (nu - 1.0));
    let s = 1.0 - one_minus_s;
    Ok(C64::from_polar(s.sqrt(), phase))
}

/// `v_1 + i v_2` for `v` uniform on the sphere `S^nu` in `R^{nu+1}`; a
/// second construction of `Theta_nu` for integer `nu >= 2`.
pub fn sample_theta_sphere<R: Rng + ?Sized>(nu: usize, rng: &mut R) -> Result<C64> {
    if nu < 2 {
        return Err(Error::InvalidNu(nu as f64));
    }
    let v: Vec<f64> = (0..=nu).map(|_| StandardNormal.sample(rng)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(C64::new(v[0] / norm, v[1] / norm))
}

/// `Gamma(shape, 1)` variate.
pub fn sample_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> Result<f64> {
    let g = Gamma::new(shape, 1.0).map_err(|e| Error::InvalidParams(format!("gamma shape {shape}: {e}")))?;
    Ok(g.sample(rng))
}

/// Beta variate on `[-1, 1]` with density proportional to
/// `(1-x)^{s-1} (1+x)^{t-1}`, as `x = (G_t - G_s) / (G_s + G_t)` for
/// independent gamma variates. Draws landing on `+-1` are redrawn.
pub fn sample_beta_interval<R: Rng + ?Sized>(s: f64, t: f64, rng: &mut R) -> Result<f64> {
    if !(s > 0.0 && t > 0.0) || !s.is_finite() || !t.is_finite() {
        return Err(Error::InvalidParams(format!("beta parameters s = {s}, t = {t}")));
    }
    let gs = Gamma::new(s, 1.0).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let gt = Gamma::new(t, 1.0).map_err(|e| Error::InvalidParams(e.to_string()))?;
    loop {
        let a = gs.sample(rng);
        let b = gt.sample(rng);
        let x = (b - a) / (a + b);
        if x.abs() < 1.0 {
            return Ok(x);
        }
    }
}

/// `chi_nu` variate for real `nu > 0`, as the square root of `Gamma(nu/2, 2)`.
pub fn sample_chi<R: Rng + ?Sized>(nu: f64, rng: &mut R) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(Error::InvalidParams(format!("chi degrees of freedom {nu}")));
    }
    let g = Gamma::new(nu / 2.0, 2.0).map_err(|e| Error::InvalidParams(e.to_string()))?;
    Ok(g.sample(rng).sqrt())
}
