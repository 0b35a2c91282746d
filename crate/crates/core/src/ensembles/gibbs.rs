use super::{EnsembleSpec, Family};
use crate::error::{Error, Result};

/// Unnormalized log density of the ensemble's eigenvalue law at `points`.
///
/// * circular: `beta sum_{j<k} log|e^{i t_j} - e^{i t_k}|` (points are angles);
/// * hermite: `beta sum_{j<k} log|x_j - x_k| - sum_j x_j^2 / 2`;
/// * jacobi: `beta sum_{j<k} log|x_j - x_k| + sum_j a log(2 - x_j) + b log(2 + x_j)`
///   on `[-2, 2]^n`.
pub fn gibbs_log_density(spec: &EnsembleSpec, points: &[f64]) -> Result<f64> {
    spec.validate()?;
    if points.len() != spec.n {
        return Err(Error::DomainViolation(format!(
            "expected {} points, got {}",
            spec.n,
            points.len()
        )));
    }
    if points.iter().any(|x| !x.is_finite()) {
        return Err(Error::DomainViolation("non-finite point".into()));
    }
    let mut pair = 0.0;
    for j in 0..points.len() {
        for k in j + 1..points.len() {
            let d = match spec.family {
                Family::Circular => 2.0 * ((points[j] - points[k]) / 2.0).sin().abs(),
                _ => (points[j] - points[k]).abs(),
            };
            pair += d.ln();
        }
    }
    let potential: f64 = match spec.family {
        Family::Circular => 0.0,
        Family::Hermite => -points.iter().map(|x| x * x / 2.0).sum::<f64>(),
        Family::Jacobi => {
            if let Some(x) = points.iter().find(|x| x.abs() > 2.0) {
                return Err(Error::DomainViolation(format!("{x} outside [-2, 2]")));
            }
            points
                .iter()
                .map(|x| xlogy(spec.a, 2.0 - x) + xlogy(spec.b, 2.0 + x))
                .sum()
        }
    };
    Ok(spec.beta * pair + potential)
}

fn xlogy(a: f64, y: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * y.ln()
    }
}
