//! Hermitian eigendecomposition via cyclic complex Jacobi rotations.
//!
//! Dimensions in this crate are small, so the quadratically convergent Jacobi
//! iteration is accurate, dependency-free, and bit-deterministic given the
//! fixed sweep order, which the golden-file tests rely on.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, StateVector};
use crate::DEFAULT_TOL;

const MAX_SWEEPS: usize = 64;
const STOP_FACTOR: f64 = 1e-14;

/// Eigenvalues (ascending) with orthonormal eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigensystem {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<StateVector>,
}

impl HermitianEigensystem {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[StateVector] {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// Rebuilds the operator as the eigenvalue-weighted sum of projectors.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.eigenvectors[0].dim();
        let mut out = ComplexMatrix::zeros(dim);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..dim {
                for j in 0..dim {
                    let add = v.entries()[i] * v.entries()[j].conj() * lambda;
                    out.set(i, j, out.get(i, j) + add);
                }
            }
        }
        out
    }
}

/// Diagonalizes a Hermitian matrix.
///
/// The input must be Hermitian within the default tolerance; the iteration
/// then runs on the Hermitian part `(A + A*) / 2` so round-off asymmetry
/// cannot leak into the spectrum.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<HermitianEigensystem> {
    if !a.is_hermitian(DEFAULT_TOL) {
        return Err(Error::NotHermitian {
            deviation: a.hermitian_deviation(),
        });
    }
    let n = a.dim();
    let mut work = a.hermitian_part();
    let mut vectors = ComplexMatrix::identity(n);
    let scale = work.frobenius_norm();

    if scale > 0.0 && n > 1 {
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&work) <= STOP_FACTOR * scale {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut work, &mut vectors, p, q);
                }
            }
        }
        if !converged && off_diagonal_norm(&work) > STOP_FACTOR * scale {
            return Err(Error::EigenFailed {
                off_diagonal: off_diagonal_norm(&work),
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        work.get(i, i)
            .re
            .partial_cmp(&work.get(j, j).re)
            .expect("finite eigenvalues")
            .then(i.cmp(&j))
    });

    let eigenvalues = order.iter().map(|&k| work.get(k, k).re).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| {
            let column: Vec<Complex64> = (0..n).map(|i| vectors.get(i, k)).collect();
            StateVector::new(column).expect("unitary column is nonzero")
        })
        .collect();

    Ok(HermitianEigensystem {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                sum += a.get(p, q).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One complex Jacobi rotation annihilating the (p, q) entry.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{i phi}
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;

    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = a.dim();
    // A <- U* A U with U embedded at (p, q):
    //   U[p][p] = c, U[p][q] = s e^{i phi}, U[q][p] = -s e^{-i phi}, U[q][q] = c
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * c - akq * s * phase.conj());
        a.set(k, q, akp * s * phase + akq * c);
    }
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * c - aqk * s * phase);
        a.set(q, k, apk * s * phase.conj() + aqk * c);
    }
    // the rotated pivot is zero and the diagonal real, by construction
    a.set(p, q, Complex64::ZERO);
    a.set(q, p, Complex64::ZERO);
    a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
    a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c - vkq * s * phase.conj());
        v.set(k, q, vkp * s * phase + vkq * c);
    }
}

/// Positive-semidefiniteness test.
///
/// Fails with `NotHermitian` when the Hermitian pre-check at `tol` fails;
/// otherwise true iff the minimum eigenvalue is at least
/// `-tol * max(1, ||A||_F)`.
pub fn is_psd(a: &ComplexMatrix, tol: f64) -> Result<bool> {
    if !a.is_hermitian(tol) {
        return Err(Error::NotHermitian {
            deviation: a.hermitian_deviation(),
        });
    }
    let eigensystem = eig_hermitian(&a.hermitian_part())?;
    Ok(eigensystem.min_eigenvalue() >= -tol * a.frobenius_norm().max(1.0))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &ComplexMatrix) -> Result<f64> {
    Ok(eig_hermitian(a)?.min_eigenvalue())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{approx_eq, hs_inner};
    use crate::rng::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(rng: &mut Rng, dim: usize) -> ComplexMatrix {
        let g = ComplexMatrix::from_fn(dim, |_, _| rng.complex_gaussian());
        g.hermitian_part()
    }

    #[test]
    fn diagonal_spectrum_is_sorted() {
        let a = ComplexMatrix::diag(&[3.0, 1.0]);
        let sys = eig_hermitian(&a).unwrap();
        assert!((sys.eigenvalues()[0] - 1.0).abs() < 1e-14);
        assert!((sys.eigenvalues()[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_x_spectrum() {
        let pauli_x = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let sys = eig_hermitian(&pauli_x).unwrap();
        assert!((sys.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((sys.eigenvalues()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reconstruction_and_orthonormality_on_random_input() {
        let mut rng = Rng::seeded(21);
        for dim in 2..=6 {
            for _ in 0..20 {
                let a = random_hermitian(&mut rng, dim);
                let sys = eig_hermitian(&a).unwrap();

                let residual = sys.reconstruct().distance(&a).unwrap();
                assert!(
                    residual <= 1e-10 * a.frobenius_norm().max(1.0),
                    "residual {residual} at dim {dim}"
                );

                for (i, vi) in sys.eigenvectors().iter().enumerate() {
                    for (j, vj) in sys.eigenvectors().iter().enumerate() {
                        let g = vi.inner(vj).unwrap();
                        let expected = if i == j { 1.0 } else { 0.0 };
                        assert!(
                            (g - c(expected, 0.0)).norm() <= 1e-10,
                            "gram ({i},{j}) = {g}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(eig_hermitian(&a), Err(Error::NotHermitian { .. })));
        assert!(matches!(is_psd(&a, 1e-10), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&ComplexMatrix::diag(&[2.0, 1.0]), 1e-10).unwrap());
        assert!(!is_psd(&ComplexMatrix::diag(&[1.0, -0.5]), 1e-10).unwrap());
    }

    #[test]
    fn rank_one_projectors_are_psd() {
        let mut rng = Rng::seeded(33);
        for _ in 0..1000 {
            let dim = 2 + rng.below(3);
            let v: Vec<Complex64> = (0..dim).map(|_| rng.complex_gaussian()).collect();
            let vv = crate::matrix::outer_raw(&v, &v);
            if vv.frobenius_norm() == 0.0 {
                continue;
            }
            assert!(is_psd(&vv, 1e-10).unwrap());
        }
    }

    #[test]
    fn hs_norm_matches_spectrum() {
        let mut rng = Rng::seeded(5);
        let a = random_hermitian(&mut rng, 4);
        let sys = eig_hermitian(&a).unwrap();
        let spectral: f64 = sys.eigenvalues().iter().map(|l| l * l).sum();
        let hs = hs_inner(&a, &a).unwrap().re;
        assert!((spectral - hs).abs() <= 1e-10 * hs.max(1.0));
    }

    #[test]
    fn zero_matrix_decomposes() {
        let sys = eig_hermitian(&ComplexMatrix::zeros(3)).unwrap();
        assert_eq!(sys.eigenvalues(), &[0.0, 0.0, 0.0]);
        assert!(approx_eq(
            &sys.reconstruct(),
            &ComplexMatrix::zeros(3),
            1e-15
        ));
    }
}
