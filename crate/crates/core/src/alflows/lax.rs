//! Lax partners and the induced vector fields on Verblunsky coefficients.

use crate::cmv::{build_cmv, CMatrix, VerblunskySet, C64};
use crate::error::{Error, Result};

use super::hamiltonian::{matrix_power, Generator, Part};

/// Minimum `rho` for extracting the coefficient velocities from `dC/dt`.
pub const RHO_GUARD: f64 = 1e-10;

/// Strict upper triangle plus half the diagonal.
pub fn plus_projection(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    CMatrix::from_fn(n, a.ncols(), |r, c| {
        if r < c {
            a[(r, c)]
        } else if r == c {
            a[(r, c)] * 0.5
        } else {
            C64::default()
        }
    })
}

/// Anti-Hermitian Lax partner: `i(A + A*)` for `Re K_m` and `A - A*` for
/// `Im K_m`, where `A = (C^m)_+`.
pub fn lax_p(c: &CMatrix, g: Generator) -> CMatrix {
    let a = plus_projection(&matrix_power(c, g.m));
    let a_star = a.adjoint();
    match g.part {
        Part::Re => (a + a_star) * C64::new(0.0, 1.0),
        Part::Im => a - a_star,
    }
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `dC/dt = [C, P]`.
pub fn lax_velocity(c: &CMatrix, g: Generator) -> CMatrix {
    commutator(c, &lax_p(c, g))
}

/// Velocities of the interior coefficients under the flow of `g`, read off
/// the entries `C[k-1, k]` (k odd) and `C[k, k-1]` (k even), which equal
/// `rho_{k-1} conj(alpha_k)`, starting from `C[0, 0] = conj(alpha_0)`.
pub fn al_vector_field(v: &VerblunskySet, g: Generator) -> Result<Vec<C64>> {
    let n = v.n();
    if n == 1 {
        return Ok(Vec::new());
    }
    if let Some((index, &rho)) = v.rho().iter().enumerate().find(|(_, &r)| r <= RHO_GUARD) {
        return Err(Error::RhoTooSmall { index, rho });
    }
    let cmv = build_cmv(v);
    let cdot = lax_velocity(cmv.entries(), g);
    Ok(extract_velocities(v, &cdot))
}

pub(crate) fn extract_velocities(v: &VerblunskySet, cdot: &CMatrix) -> Vec<C64> {
    let alpha = v.alpha();
    let rho = v.rho();
    let mut out = Vec::with_capacity(v.n() - 1);
    out.push(cdot[(0, 0)].conj());
    for k in 1..v.n() - 1 {
        let entry = if k % 2 == 1 { cdot[(k - 1, k)] } else { cdot[(k, k - 1)] };
        let rho_prev = rho[k - 1];
        let rho_dot = -(alpha[k - 1].conj() * out[k - 1]).re / rho_prev;
        let alpha_bar_dot = (entry - alpha[k].conj() * rho_dot) / rho_prev;
        out.push(alpha_bar_dot.conj());
    }
    out
}

/// `d alpha_j / dt = i rho_j^2 (alpha_{j-1} + alpha_{j+1})`, the `Re K_1`
/// flow in closed form, with the given value for `alpha_{-1}`.
pub fn al_field_closed_form(v: &VerblunskySet, alpha_minus_one: C64) -> Vec<C64> {
    let a = v.alpha();
    let n = v.n();
    (0..n - 1)
        .map(|j| {
            let prev = if j == 0 { alpha_minus_one } else { a[j - 1] };
            C64::new(0.0, v.rho()[j].powi(2)) * (prev + a[j + 1])
        })
        .collect()
}

/// Schur flow `d alpha_j / dt = (1 - alpha_j^2)(alpha_{j+1} - alpha_{j-1})` on
/// real interior coefficients, with fixed boundary values `before`
/// (`alpha_{-1}`) and `after` (`alpha_{n-1}`).
pub fn schur_vector_field(alpha: &[f64], before: f64, after: f64) -> Result<Vec<f64>> {
    if let Some((index, &value)) = alpha.iter().enumerate().find(|(_, a)| !(a.abs() < 1.0)) {
        return Err(Error::OutOfRange { index, value });
    }
    let at = |j: isize| -> f64 {
        if j < 0 {
            before
        } else if j as usize >= alpha.len() {
            after
        } else {
            alpha[j as usize]
        }
    };
    Ok((0..alpha.len() as isize)
        .map(|j| (1.0 - at(j) * at(j)) * (at(j + 1) - at(j - 1)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmv::random_verblunsky;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gen(m: usize, part: Part) -> Generator {
        Generator::new(m, part).unwrap()
    }

    #[test]
    fn plus_projection_examples() {
        let id = CMatrix::identity(3, 3);
        assert_eq!(plus_projection(&id), id * C64::new(0.5, 0.0));
        let lower = CMatrix::from_fn(3, 3, |r, c| if r > c { C64::new(1.0, 2.0) } else { C64::default() });
        assert_eq!(plus_projection(&lower), CMatrix::zeros(3, 3));
        let a = CMatrix::from_row_slice(2, 2, &[2.0, 4.0, 6.0, 8.0].map(|x| C64::new(x, 0.0)));
        let expected = CMatrix::from_row_slice(2, 2, &[1.0, 4.0, 0.0, 4.0].map(|x| C64::new(x, 0.0)));
        assert_eq!(plus_projection(&a), expected);
    }

    #[test]
    fn lax_partner_is_anti_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..8 {
            let v = random_verblunsky(n, 0.9, &mut rng);
            let c = build_cmv(&v);
            for m in 1..4 {
                for part in [Part::Re, Part::Im] {
                    let p = lax_p(c.entries(), gen(m, part));
                    assert!((&p + p.adjoint()).camax() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn single_coefficient_is_frozen() {
        let v = VerblunskySet::new(vec![C64::from_polar(1.0, 0.3)]).unwrap();
        let c = build_cmv(&v);
        assert!(lax_velocity(c.entries(), gen(2, Part::Re)).camax() < 1e-15);
        assert!(al_vector_field(&v, gen(1, Part::Re)).unwrap().is_empty());
    }

    #[test]
    fn extraction_matches_closed_form_with_minus_one_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 2..10 {
            let v = random_verblunsky(n, 0.95, &mut rng);
            let lax = al_vector_field(&v, gen(1, Part::Re)).unwrap();
            let closed = al_field_closed_form(&v, C64::new(-1.0, 0.0));
            for (a, b) in lax.iter().zip(&closed) {
                assert!((a - b).norm() < 1e-12, "n = {n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn two_by_two_re_flow() {
        // C = [[0, 1], [1, 0]]: (C)_+ = [[0, 1], [0, 0]], P = i[[0, 1], [1, 0]],
        // so [C, P] = 0 and alpha_0' = i rho_0^2 (alpha_{-1} + alpha_1) = i(-1 + 1) = 0.
        let v = VerblunskySet::new(vec![C64::default(), C64::new(1.0, 0.0)]).unwrap();
        let p = lax_p(build_cmv(&v).entries(), gen(1, Part::Re));
        let expected = CMatrix::from_row_slice(2, 2, &[C64::default(), C64::i(), C64::i(), C64::default()]);
        assert!((p - expected).camax() < 1e-15);
        let field = al_vector_field(&v, gen(1, Part::Re)).unwrap();
        assert!(field[0].norm() < 1e-15);
    }

    #[test]
    fn im_flow_preserves_reality_and_is_schur() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        use rand::Rng;
        for n in 2..9 {
            let interior: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-0.9..0.9)).collect();
            let last = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let v = VerblunskySet::from_parts(
                &interior.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>(),
                C64::new(last, 0.0),
            )
            .unwrap();
            let field = al_vector_field(&v, gen(1, Part::Im)).unwrap();
            let schur = schur_vector_field(&interior, -1.0, last).unwrap();
            for (a, s) in field.iter().zip(&schur) {
                assert!(a.im.abs() < 1e-13);
                // the Schur flow is generated by -Im K_1
                assert!((a.re + s).abs() < 1e-12, "n = {n}: {a} vs {s}");
            }
        }
    }

    #[test]
    fn schur_examples() {
        assert!(matches!(schur_vector_field(&[0.2, 1.0], -1.0, 1.0), Err(Error::OutOfRange { index: 1, .. })));
        let f = schur_vector_field(&[0.0; 4], -1.0, 1.0).unwrap();
        assert_eq!(f, vec![1.0, 0.0, 0.0, 1.0]);
        let f = schur_vector_field(&[0.4; 3], 0.4, 0.4).unwrap();
        assert!(f.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn rho_guard() {
        let v = VerblunskySet::new(vec![C64::new(1.0 - 1e-12, 0.0), C64::default(), C64::new(1.0, 0.0)]).unwrap();
        // rho ~ 1.4e-6 is above the guard; the guard is hit only at 1e-10
        assert!(al_vector_field(&v, gen(1, Part::Re)).is_ok());
    }
}
