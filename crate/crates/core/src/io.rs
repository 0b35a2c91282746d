//! JSON layouts.
//!
//! * coefficients: `{"n": 3, "alpha": [[re, im], ...]}`
//! * circle measures: `{"points": [{"theta": t, "weight": w}, ...]}`
//! * line measures: `{"points": [{"x": x, "weight": w}, ...]}`
//! * trajectories: `{"times": [...], "states": [...], "diagnostics": [...]}`
//! * matrices: row-major nested arrays of `[re, im]` pairs

use serde::{Deserialize, Serialize};

use crate::cmv::{CMatrix, VerblunskySet, C64};
use crate::error::{Error, Result};
use crate::measure::{SpectralMeasureCircle, SpectralMeasureLine};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerblunskyRepr {
    pub n: usize,
    pub alpha: Vec<[f64; 2]>,
}

impl From<VerblunskySet> for VerblunskyRepr {
    fn from(v: VerblunskySet) -> Self {
        Self {
            n: v.n(),
            alpha: v.alpha().iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

impl TryFrom<VerblunskyRepr> for VerblunskySet {
    type Error = Error;

    fn try_from(r: VerblunskyRepr) -> Result<Self> {
        if r.n != r.alpha.len() {
            return Err(Error::DimensionMismatch(format!("n = {} with {} coefficients", r.n, r.alpha.len())));
        }
        VerblunskySet::new(r.alpha.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CirclePoint {
    pub theta: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleRepr {
    pub points: Vec<CirclePoint>,
}

impl From<SpectralMeasureCircle> for CircleRepr {
    fn from(mu: SpectralMeasureCircle) -> Self {
        Self {
            points: mu
                .points()
                .iter()
                .zip(mu.weights())
                .map(|(&theta, &weight)| CirclePoint { theta, weight })
                .collect(),
        }
    }
}

impl TryFrom<CircleRepr> for SpectralMeasureCircle {
    type Error = Error;

    fn try_from(r: CircleRepr) -> Result<Self> {
        let (points, weights) = r.points.into_iter().map(|p| (p.theta, p.weight)).unzip();
        SpectralMeasureCircle::new(points, weights)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinePoint {
    pub x: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineRepr {
    pub points: Vec<LinePoint>,
}

impl From<SpectralMeasureLine> for LineRepr {
    fn from(nu: SpectralMeasureLine) -> Self {
        Self {
            points: nu
                .points()
                .iter()
                .zip(nu.weights())
                .map(|(&x, &weight)| LinePoint { x, weight })
                .collect(),
        }
    }
}

impl TryFrom<LineRepr> for SpectralMeasureLine {
    type Error = Error;

    fn try_from(r: LineRepr) -> Result<Self> {
        let (points, weights) = r.points.into_iter().map(|p| (p.x, p.weight)).unzip();
        SpectralMeasureLine::new(points, weights)
    }
}

pub type MatrixRows = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_rows(a: &CMatrix) -> MatrixRows {
    (0..a.nrows())
        .map(|r| (0..a.ncols()).map(|c| [a[(r, c)].re, a[(r, c)].im]).collect())
        .collect()
}

pub fn matrix_from_rows(rows: &MatrixRows) -> Result<CMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch("ragged matrix rows".into()));
    }
    Ok(CMatrix::from_fn(nrows, ncols, |r, c| C64::new(rows[r][c][0], rows[r][c][1])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alflows::{integrate_flow, Generator, Part};
    use crate::cmv::{build_cmv, random_verblunsky};
    use crate::spectral::unitary_eigensystem;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn coefficient_schema() {
        let v: VerblunskySet = serde_json::from_str(r#"{"n": 2, "alpha": [[0.5, 0.0], [0.0, 1.0]]}"#).unwrap();
        assert_eq!(v.alpha(), &[C64::new(0.5, 0.0), C64::new(0.0, 1.0)]);
        assert!(serde_json::from_str::<VerblunskySet>(r#"{"n": 3, "alpha": [[0.5, 0.0], [0.0, 1.0]]}"#).is_err());
        assert!(serde_json::from_str::<VerblunskySet>(r#"{"n": 1, "alpha": [[0.5, 0.0]]}"#).is_err());
    }

    #[test]
    fn round_trips_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 1..8 {
            let v = random_verblunsky(n, 0.9, &mut rng);
            let back: VerblunskySet = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
            assert_eq!(back, v);
            let mu = unitary_eigensystem(&build_cmv(&v)).unwrap();
            let back: SpectralMeasureCircle = serde_json::from_str(&serde_json::to_string(&mu).unwrap()).unwrap();
            assert_eq!(back, mu);
            let c = build_cmv(&v);
            assert_eq!(&matrix_from_rows(&matrix_to_rows(c.entries())).unwrap(), c.entries());
        }
        let v = random_verblunsky(4, 0.8, &mut rng);
        let traj = integrate_flow(&v, Generator::new(1, Part::Re).unwrap(), 0.01, 1e-3).unwrap();
        let json = serde_json::to_string(&traj).unwrap();
        assert!(json.starts_with(r#"{"times":"#));
        assert_eq!(serde_json::from_str::<crate::alflows::Trajectory>(&json).unwrap(), traj);
        let nu = SpectralMeasureLine::new(vec![-1.0, 0.5], vec![0.25, 0.75]).unwrap();
        let json = serde_json::to_string(&nu).unwrap();
        assert_eq!(json, r#"{"points":[{"x":-1.0,"weight":0.25},{"x":0.5,"weight":0.75}]}"#);
        assert_eq!(serde_json::from_str::<SpectralMeasureLine>(&json).unwrap(), nu);
    }
}
