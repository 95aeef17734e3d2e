//! Linear solves: complex Gaussian elimination with partial pivoting, matrix
//! inversion, 2-norm condition numbers, and basis expansion of vectors in a
//! (possibly non-orthogonal) frame.

use num_complex::Complex64;

use crate::eig::eig_hermitian;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, StateVector};

/// Frames whose matrix condition number exceeds this are rejected as singular.
pub const FRAME_CONDITION_LIMIT: f64 = 1e8;

/// Solves `A x = b` for several right-hand sides at once.
///
/// Returns `None` when elimination hits a zero pivot.
#[allow(clippy::needless_range_loop)]
pub fn lu_solve(a: &ComplexMatrix, rhs: &[Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let n = a.dim();
    debug_assert!(rhs.iter().all(|b| b.len() == n));

    let mut lu: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j)).collect())
        .collect();
    let mut x: Vec<Vec<Complex64>> = rhs.to_vec();

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                lu[i][col]
                    .norm()
                    .partial_cmp(&lu[j][col].norm())
                    .expect("finite entries")
            })
            .expect("non-empty range");
        if lu[pivot_row][col].norm() == 0.0 {
            return None;
        }
        lu.swap(col, pivot_row);
        for b in x.iter_mut() {
            b.swap(col, pivot_row);
        }
        for row in col + 1..n {
            let factor = lu[row][col] / lu[col][col];
            if factor == Complex64::ZERO {
                continue;
            }
            for k in col..n {
                let sub = factor * lu[col][k];
                lu[row][k] -= sub;
            }
            for b in x.iter_mut() {
                let sub = factor * b[col];
                b[row] -= sub;
            }
        }
    }

    for b in x.iter_mut() {
        for row in (0..n).rev() {
            let mut value = b[row];
            for k in row + 1..n {
                value -= lu[row][k] * b[k];
            }
            b[row] = value / lu[row][row];
        }
    }
    Some(x)
}

/// Matrix inverse via `lu_solve` against the identity columns.
pub fn inverse(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = a.dim();
    let columns: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if i == j {
                        Complex64::ONE
                    } else {
                        Complex64::ZERO
                    }
                })
                .collect()
        })
        .collect();
    let solved = lu_solve(a, &columns)?;
    Some(ComplexMatrix::from_fn(n, |i, j| solved[j][i]))
}

/// 2-norm condition number, from the spectrum of `A* A`.
pub fn condition_number(a: &ComplexMatrix) -> f64 {
    let gram = a
        .adjoint()
        .mul(a)
        .expect("square inputs always multiply");
    let sys = match eig_hermitian(&gram) {
        Ok(sys) => sys,
        Err(_) => return f64::INFINITY,
    };
    let max = sys.max_eigenvalue().max(0.0);
    let min = sys.min_eigenvalue();
    if min <= 0.0 {
        return f64::INFINITY;
    }
    (max / min).sqrt()
}

/// Column matrix of a vector family; all dims must equal the family length.
pub fn frame_matrix(vectors: &[StateVector]) -> Result<ComplexMatrix> {
    let dim = vectors.len();
    for v in vectors {
        if v.dim() != dim {
            return Err(Error::DimMismatch {
                left: dim,
                right: v.dim(),
            });
        }
    }
    Ok(ComplexMatrix::from_fn(dim, |i, j| vectors[j].entries()[i]))
}

/// Expands `psi` over a linearly independent spanning family: returns `c`
/// with `sum_j c_j e_j = psi`.
///
/// For an orthonormal family this reduces to inner-product coefficients; for
/// an oblique one it is the biorthogonal (dual-frame) expansion. Frames with
/// condition number above [`FRAME_CONDITION_LIMIT`] are rejected.
pub fn expand_in_frame(vectors: &[StateVector], psi: &StateVector) -> Result<Vec<Complex64>> {
    let f = frame_matrix(vectors)?;
    if psi.dim() != f.dim() {
        return Err(Error::DimMismatch {
            left: f.dim(),
            right: psi.dim(),
        });
    }
    let condition = condition_number(&f);
    if !condition.is_finite() || condition > FRAME_CONDITION_LIMIT {
        return Err(Error::SingularFrame {
            condition,
            limit: FRAME_CONDITION_LIMIT,
        });
    }
    let solved = lu_solve(&f, &[psi.entries().to_vec()]).ok_or(Error::SingularFrame {
        condition,
        limit: FRAME_CONDITION_LIMIT,
    })?;
    Ok(solved.into_iter().next().expect("one right-hand side"))
}

/// Real Gaussian elimination with partial pivoting; `None` on singular input.
#[allow(clippy::needless_range_loop)]
pub fn solve_real(matrix: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = matrix.len();
    debug_assert!(matrix.iter().all(|row| row.len() == n) && rhs.len() == n);
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut b: Vec<f64> = rhs.to_vec();

    for col in 0..n {
        let pivot_row = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .expect("finite entries")
        })?;
        if a[pivot_row][col].abs() == 0.0 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    for row in (0..n).rev() {
        let mut value = b[row];
        for k in row + 1..n {
            value -= a[row][k] * b[k];
        }
        b[row] = value / a[row][row];
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use crate::DEFAULT_TOL;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus_state() -> StateVector {
        let r = 1.0 / 2.0_f64.sqrt();
        StateVector::from_re(&[r, r]).unwrap()
    }

    #[test]
    fn orthonormal_expansion_is_inner_product() {
        let basis = vec![StateVector::basis(3, 0), StateVector::basis(3, 1), StateVector::basis(3, 2)];
        let psi = StateVector::new(vec![c(0.3, 0.1), c(-0.2, 0.7), c(0.5, 0.0)]).unwrap();
        let coeffs = expand_in_frame(&basis, &psi).unwrap();
        for (j, e) in basis.iter().enumerate() {
            let ip = e.inner(&psi).unwrap();
            assert!((coeffs[j] - ip).norm() <= 1e-12);
        }
    }

    #[test]
    fn oblique_expansion_matches_hand_solve() {
        // frame {|0>, (|0>+|1>)/sqrt(2)}, psi = |1>.
        // Cramer oracle on [[1, 1/sqrt2], [0, 1/sqrt2]] c = (0, 1):
        //   det = 1/sqrt2, c1 = (0*1/sqrt2 - 1/sqrt2*1)/det = -1, c2 = (1*1)/det = sqrt2
        let frame = vec![StateVector::basis(2, 0), plus_state()];
        let psi = StateVector::basis(2, 1);
        let coeffs = expand_in_frame(&frame, &psi).unwrap();
        assert!((coeffs[0] - c(-1.0, 0.0)).norm() <= 1e-12);
        assert!((coeffs[1] - c(2.0_f64.sqrt(), 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn standard_basis_expansion_is_coordinates() {
        let basis = vec![StateVector::basis(2, 0), StateVector::basis(2, 1)];
        let coeffs = expand_in_frame(&basis, &StateVector::basis(2, 1)).unwrap();
        assert!((coeffs[0]).norm() <= 1e-15);
        assert!((coeffs[1] - c(1.0, 0.0)).norm() <= 1e-15);
    }

    #[test]
    fn expand_then_recombine_is_identity() {
        let mut rng = Rng::seeded(17);
        for _ in 0..50 {
            let dim = 2 + rng.below(3);
            let vectors: Vec<StateVector> = (0..dim)
                .map(|_| {
                    StateVector::new((0..dim).map(|_| rng.complex_gaussian()).collect())
                        .unwrap()
                        .normalized()
                })
                .collect();
            if condition_number(&frame_matrix(&vectors).unwrap()) > 1e6 {
                continue;
            }
            let psi =
                StateVector::new((0..dim).map(|_| rng.complex_gaussian()).collect()).unwrap();
            let coeffs = expand_in_frame(&vectors, &psi).unwrap();
            let mut recombined = vec![Complex64::ZERO; dim];
            for (cj, e) in coeffs.iter().zip(&vectors) {
                for (acc, ek) in recombined.iter_mut().zip(e.entries()) {
                    *acc += cj * ek;
                }
            }
            let err: f64 = recombined
                .iter()
                .zip(psi.entries())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err <= 1e-10 * psi.norm());
        }
    }

    #[test]
    fn duplicate_vectors_are_singular() {
        let frame = vec![StateVector::basis(2, 0), StateVector::basis(2, 0)];
        let err = expand_in_frame(&frame, &StateVector::basis(2, 1)).unwrap_err();
        assert!(matches!(err, Error::SingularFrame { .. }));
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = Rng::seeded(29);
        let a = ComplexMatrix::from_fn(4, |_, _| rng.complex_gaussian());
        let inv = inverse(&a).unwrap();
        let prod = a.mul(&inv).unwrap();
        assert!(prod.distance(&ComplexMatrix::identity(4)).unwrap() <= 1e-10);
    }

    #[test]
    fn condition_number_of_unitary_is_one() {
        let id = ComplexMatrix::identity(3);
        let cond = condition_number(&id);
        assert!((cond - 1.0).abs() <= DEFAULT_TOL);
    }

    #[test]
    fn solve_real_small_system() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = solve_real(&a, &[5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() <= 1e-12);
        assert!((x[1] - 3.0).abs() <= 1e-12);
    }
}
