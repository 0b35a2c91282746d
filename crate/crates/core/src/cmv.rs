//! Verblunsky coefficients, CMV matrices and Jacobi matrices.
//!
//! A CMV matrix is assembled as the product `C = L M` of two block-diagonal
//! unitaries built from the 2x2 blocks
//!
//! ```text
//! Xi_k = [ conj(a_k)  rho_k ]
//!        [ rho_k     -a_k   ]
//! ```
//!
//! with `L = diag(Xi_0, Xi_2, ...)` and `M = diag([1], Xi_1, Xi_3, ...)`. The
//! final coefficient lies on the unit circle and contributes the 1x1 block
//! `[conj(a_{n-1})]` to whichever factor its parity selects.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Interior coefficients must satisfy `|alpha| <= 1 - INTERIOR_MARGIN`.
pub const INTERIOR_MARGIN: f64 = 1e-12;
/// Tolerance on `|alpha[n-1]| = 1` before renormalization.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// `sqrt(1 - |alpha|^2)`, factored to keep precision near the boundary.
pub fn rho_of(alpha: C64) -> f64 {
    let r = alpha.norm();
    ((1.0 - r) * (1.0 + r)).max(0.0).sqrt()
}

/// Verblunsky coefficients `alpha_0, ..., alpha_{n-1}` of an n-point measure.
///
/// The interior coefficients lie strictly inside the unit disk and the last
/// one is renormalized to exact unit modulus on construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::io::VerblunskyRepr", into = "crate::io::VerblunskyRepr")]
pub struct VerblunskySet {
    alpha: Vec<C64>,
    rho: Vec<f64>,
}

impl VerblunskySet {
    pub fn new(mut alpha: Vec<C64>) -> Result<Self> {
        let n = alpha.len();
        if n == 0 {
            return Err(Error::DimensionMismatch(
                "at least one coefficient is required".into(),
            ));
        }
        for (index, a) in alpha[..n - 1].iter().enumerate() {
            let modulus = a.norm();
            if !(modulus <= 1.0 - INTERIOR_MARGIN) {
                return Err(Error::CoefficientOutOfRange { index, modulus });
            }
        }
        let modulus = alpha[n - 1].norm();
        if !((modulus - 1.0).abs() <= BOUNDARY_TOL) {
            return Err(Error::BoundaryNotUnimodular { modulus });
        }
        // dividing again after a renormalization would only shuffle the last bits
        if (modulus - 1.0).abs() > 4.0 * f64::EPSILON {
            alpha[n - 1] /= modulus;
        }
        let rho = alpha[..n - 1].iter().map(|&a| rho_of(a)).collect();
        Ok(Self { alpha, rho })
    }

    /// Builds a set from interior coefficients and the angle of the last one.
    pub fn from_parts(interior: &[C64], last: C64) -> Result<Self> {
        let mut alpha = interior.to_vec();
        alpha.push(last);
        Self::new(alpha)
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[C64] {
        &self.alpha
    }

    /// `rho_k` for the interior coefficients, `k = 0..n-2`.
    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn interior(&self) -> &[C64] {
        &self.alpha[..self.alpha.len() - 1]
    }

    pub fn last(&self) -> C64 {
        self.alpha[self.alpha.len() - 1]
    }

    /// Same boundary coefficient, new interior.
    pub fn with_interior(&self, interior: &[C64]) -> Result<Self> {
        if interior.len() + 1 != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} interior coefficients, got {}",
                self.n() - 1,
                interior.len()
            )));
        }
        Self::from_parts(interior, self.last())
    }

    /// `alpha_k` extended by the boundary conventions `alpha_{-1} = -1` and
    /// `alpha_k = 0` for `k >= n`.
    pub fn alpha_ext(&self, k: isize) -> C64 {
        if k < 0 {
            C64::new(-1.0, 0.0)
        } else {
            self.alpha.get(k as usize).copied().unwrap_or_default()
        }
    }

    /// `rho_k` extended by `rho_{-1} = rho_{n-1} = 0`.
    pub fn rho_ext(&self, k: isize) -> f64 {
        if k < 0 {
            0.0
        } else {
            let k = k as usize;
            if k + 1 < self.n() {
                self.rho[k]
            } else if k + 1 == self.n() {
                0.0
            } else {
                1.0
            }
        }
    }
}

/// Uniform interior coefficients in the disk of the given radius, with a
/// uniformly distributed unimodular last coefficient.
pub fn random_verblunsky<R: Rng + ?Sized>(n: usize, radius: f64, rng: &mut R) -> VerblunskySet {
    assert!(n >= 1 && radius < 1.0);
    let mut alpha = Vec::with_capacity(n);
    for _ in 0..n - 1 {
        let r = radius * rng.random::<f64>().sqrt();
        let phase = std::f64::consts::TAU * rng.random::<f64>();
        alpha.push(C64::from_polar(r, phase));
    }
    alpha.push(C64::from_polar(1.0, std::f64::consts::TAU * rng.random::<f64>()));
    VerblunskySet::new(alpha).expect("sampled coefficients are valid")
}

/// The 2x2 block `[[conj(a), rho], [rho, -a]]`.
pub fn build_xi(alpha: C64) -> Matrix2<C64> {
    let rho = C64::new(rho_of(alpha), 0.0);
    Matrix2::new(alpha.conj(), rho, rho, -alpha)
}

/// The block-diagonal factors `(L, M)` with `C = L M`.
pub fn build_lm(v: &VerblunskySet) -> (CMatrix, CMatrix) {
    let n = v.n();
    let mut l = CMatrix::zeros(n, n);
    let mut m = CMatrix::zeros(n, n);
    m[(0, 0)] = C64::new(1.0, 0.0);
    for (k, &alpha) in v.alpha().iter().enumerate() {
        let target = if k % 2 == 0 { &mut l } else { &mut m };
        if k + 1 < n {
            let xi = build_xi(alpha);
            target.fixed_view_mut::<2, 2>(k, k).copy_from(&xi);
        } else {
            target[(k, k)] = alpha.conj();
        }
    }
    (l, m)
}

/// A CMV matrix together with the coefficients it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct CmvMatrix {
    entries: CMatrix,
    source: VerblunskySet,
}

impl CmvMatrix {
    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn source(&self) -> &VerblunskySet {
        &self.source
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    /// `max |C* C - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.entries)
    }

    pub fn is_banded(&self) -> bool {
        let n = self.n();
        (0..n).all(|r| (0..n).all(|c| r.abs_diff(c) <= 2 || self.entries[(r, c)] == C64::default()))
    }

    /// `conj(alpha_0) - sum_k alpha_{k-1} conj(alpha_k)`.
    pub fn expected_trace(&self) -> C64 {
        let a = self.source.alpha();
        a[0].conj() - (1..a.len()).map(|k| a[k - 1] * a[k].conj()).sum::<C64>()
    }

    /// `(-1)^{n-1} conj(alpha_{n-1})`.
    pub fn expected_determinant(&self) -> C64 {
        let sign = if self.n() % 2 == 1 { 1.0 } else { -1.0 };
        self.source.last().conj() * sign
    }
}

pub fn build_cmv(v: &VerblunskySet) -> CmvMatrix {
    let (l, m) = build_lm(v);
    CmvMatrix {
        entries: l * m,
        source: v.clone(),
    }
}

/// `max |A* A - I|` over all entries.
pub fn unitarity_residual(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let gram = a.adjoint() * a;
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((gram[(r, c)] - target).norm());
        }
    }
    worst
}

/// Real symmetric tridiagonal matrix with diagonal `b` and positive
/// off-diagonal `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiMatrix {
    b: Vec<f64>,
    a: Vec<f64>,
}

impl JacobiMatrix {
    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.b
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.a
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut j = DMatrix::zeros(n, n);
        for (k, &b) in self.b.iter().enumerate() {
            j[(k, k)] = b;
        }
        for (k, &a) in self.a.iter().enumerate() {
            j[(k, k + 1)] = a;
            j[(k + 1, k)] = a;
        }
        j
    }
}

pub fn build_jacobi(b: Vec<f64>, a: Vec<f64>) -> Result<JacobiMatrix> {
    if b.is_empty() || a.len() + 1 != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "diagonal of length {} needs {} off-diagonal entries, got {}",
            b.len(),
            b.len().saturating_sub(1),
            a.len()
        )));
    }
    if let Some((index, &value)) = a.iter().enumerate().find(|(_, &x)| !(x > 0.0)) {
        return Err(Error::NonPositiveOffDiagonal { index, value });
    }
    Ok(JacobiMatrix { b, a })
}
