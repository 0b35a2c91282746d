use crate::cmv::{CMatrix, CmvMatrix, C64};
use crate::error::{Error, Result};

/// Real or imaginary part of a hierarchy Hamiltonian `K_m = tr(C^m) / m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    Re,
    Im,
}

impl std::str::FromStr for Part {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "re" => Ok(Part::Re),
            "im" => Ok(Part::Im),
            other => Err(Error::InvalidParams(format!("unknown part '{other}'"))),
        }
    }
}

/// Generator of one flow in the hierarchy: `Re K_m` or `Im K_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Generator {
    pub m: usize,
    pub part: Part,
}

impl Generator {
    pub fn new(m: usize, part: Part) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParams("hierarchy index m must be >= 1".into()));
        }
        Ok(Self { m, part })
    }
}

/// `phi(C) = Im tr f(C)` for the polynomial `f(z) = sum_m c_m z^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    /// `c_1, c_2, ...`; there is no constant term.
    coeffs: Vec<C64>,
}

impl HamiltonianSpec {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.iter().all(|c| *c == C64::default()) {
            return Err(Error::EmptyHamiltonian);
        }
        Ok(Self { coeffs })
    }

    /// `f(z) = (i/m) z^m` for `Re K_m`, `f(z) = z^m / m` for `Im K_m`.
    pub fn from_generator(g: Generator) -> Self {
        let mut coeffs = vec![C64::default(); g.m];
        coeffs[g.m - 1] = match g.part {
            Part::Re => C64::new(0.0, 1.0 / g.m as f64),
            Part::Im => C64::new(1.0 / g.m as f64, 0.0),
        };
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// `F(e^{i theta}) = 2 Re[e^{i theta} f'(e^{i theta})]`.
    pub fn f_of_theta(&self, theta: f64) -> f64 {
        let s: C64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let m = (i + 1) as f64;
                c * m * C64::from_polar(1.0, m * theta)
            })
            .sum();
        2.0 * s.re
    }

    /// `Im tr f(C)`.
    pub fn value(&self, c: &CMatrix) -> f64 {
        let mut power = c.clone();
        let mut total = C64::default();
        for (i, coeff) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = &power * c;
            }
            total += coeff * power.trace();
        }
        total.im
    }
}

/// `K_m = tr(C^m) / m`.
pub fn hamiltonian_k(c: &CmvMatrix, m: usize) -> C64 {
    assert!(m >= 1);
    matrix_power(c.entries(), m).trace() / m as f64
}

pub fn matrix_power(a: &CMatrix, m: usize) -> CMatrix {
    let mut out = a.clone();
    for _ in 1..m {
        out = &out * a;
    }
    out
}
