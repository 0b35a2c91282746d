//! Finitely supported probability measures on the unit circle and the line.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::cmv::C64;
use crate::error::{Error, Result};

/// Minimum separation between support points.
pub const SEPARATION_TOL: f64 = 1e-10;
/// Allowed deviation of the total mass from one.
pub const MASS_TOL: f64 = 1e-12;

/// Principal angle in `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t <= -PI {
        t += TAU;
    } else if t > PI {
        t -= TAU;
    }
    t
}

/// Distance between two angles measured along the circle.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
        return Err(Error::InvalidMeasure(format!("weight {w} is not positive")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
    }
    Ok(())
}

fn sort_pairs(points: Vec<f64>, weights: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    let mut pairs: Vec<(f64, f64)> = points.into_iter().zip(weights).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(y.1.total_cmp(&x.1)));
    pairs.into_iter().unzip()
}

/// Probability measure `sum_j mu_j delta(e^{i theta_j})`, stored with the
/// angles ascending in `(-pi, pi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::io::CircleRepr", into = "crate::io::CircleRepr")]
pub struct SpectralMeasureCircle {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl SpectralMeasureCircle {
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} points with {} weights",
                points.len(),
                weights.len()
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidMeasure("non-finite angle".into()));
        }
        check_weights(&weights)?;
        let points = points.into_iter().map(wrap_angle).collect();
        let (points, weights) = sort_pairs(points, weights);
        let n = points.len();
        for j in 0..n {
            if n > 1 {
                let sep = angular_distance(points[j], points[(j + 1) % n]);
                if sep <= SEPARATION_TOL {
                    return Err(Error::DegenerateSpectrum { separation: sep });
                }
            }
        }
        Ok(Self { points, weights })
    }

    /// Rescales positive weights to unit mass first.
    pub fn normalized(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidMeasure(format!("total mass {total}")));
        }
        Self::new(points, weights.into_iter().map(|w| w / total).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Support points `e^{i theta_j}`.
    pub fn nodes(&self) -> Vec<C64> {
        self.points.iter().map(|&t| C64::from_polar(1.0, t)).collect()
    }

    pub fn min_separation(&self) -> f64 {
        let n = self.len();
        if n < 2 {
            return TAU;
        }
        (0..n)
            .map(|j| angular_distance(self.points[j], self.points[(j + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Probability measure on the real line, points ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::io::LineRepr", into = "crate::io::LineRepr")]
pub struct SpectralMeasureLine {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl SpectralMeasureLine {
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} points with {} weights",
                points.len(),
                weights.len()
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidMeasure("non-finite point".into()));
        }
        check_weights(&weights)?;
        let (points, weights) = sort_pairs(points, weights);
        if let Some(sep) = points
            .windows(2)
            .map(|w| w[1] - w[0])
            .find(|&d| d <= SEPARATION_TOL)
        {
            return Err(Error::DegenerateSpectrum { separation: sep });
        }
        Ok(Self { points, weights })
    }

    pub fn normalized(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidMeasure(format!("total mass {total}")));
        }
        Self::new(points, weights.into_iter().map(|w| w / total).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}
