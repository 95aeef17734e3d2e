//! Transition-probability matrices between observables.
//!
//! For two sharp observables with nondegenerate spectra the matrix
//! `p_ij = |<e_i, f_j>|^2` is doubly stochastic (rows and columns sum to 1);
//! replacing one side by an oblique frame generally breaks the column sums,
//! which is the operational fingerprint of the non-POVM effect families.

use num_complex::Complex64;

use crate::born::prob_coeff;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, StateVector};
use crate::observable::{ObliqueFrame, Pvm};
use crate::rng::Rng;
use crate::DEFAULT_TOL;

/// Row-stochastic matrix of transition probabilities. Rows index the
/// conditioning outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in &rows {
            if row.len() != size {
                return Err(Error::NotSquare {
                    rows: size,
                    cols: row.len(),
                });
            }
            let mut clamped = Vec::with_capacity(size);
            for &p in row {
                if !p.is_finite() || !(-DEFAULT_TOL..=1.0 + DEFAULT_TOL).contains(&p) {
                    return Err(Error::InvalidDistribution(format!(
                        "transition probability {p:.6e} is outside [0, 1]"
                    )));
                }
                clamped.push(p.clamp(0.0, 1.0));
            }
            let sum: f64 = clamped.iter().sum();
            if (sum - 1.0).abs() > DEFAULT_TOL {
                return Err(Error::InvalidDistribution(format!(
                    "transition row sums to {sum:.15}, not 1"
                )));
            }
            entries.extend(clamped.iter().map(|p| p / sum));
        }
        Ok(Self { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.size).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.size)
            .map(|j| (0..self.size).map(|i| self.get(i, j)).sum())
            .collect()
    }
}

/// Transition matrix between two sharp observables: row `i` is the outcome
/// distribution of `b` in the `i`-th eigenstate of `a`.
pub fn transition_matrix(a: &Pvm, b: &Pvm) -> Result<TransitionMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let rows = a
        .basis()
        .iter()
        .map(|ea| {
            b.basis()
                .iter()
                .map(|fb| ea.inner(fb).expect("equal dims").norm_sqr())
                .collect()
        })
        .collect();
    TransitionMatrix::new(rows)
}

/// Transition matrix from a sharp observable into an oblique-frame
/// observable: row `i` is the coefficient-rule distribution of the frame in
/// the `i`-th eigenstate of `b`. For an orthonormal frame this coincides with
/// [`transition_matrix`] conditioned on `b`.
pub fn frame_transition(a: &ObliqueFrame, b: &Pvm) -> Result<TransitionMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let rows = b
        .basis()
        .iter()
        .map(|eigenstate| prob_coeff(a, eigenstate).map(|d| d.probs().to_vec()))
        .collect::<Result<_>>()?;
    TransitionMatrix::new(rows)
}

/// True iff every column also sums to 1 within `tol`.
pub fn is_doubly_stochastic(matrix: &TransitionMatrix, tol: f64) -> bool {
    matrix.column_sums().iter().all(|s| (s - 1.0).abs() <= tol)
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix via modified
/// Gram-Schmidt, whose R has a positive real diagonal by construction.
pub fn haar_unitary(dim: usize, rng: &mut Rng) -> ComplexMatrix {
    loop {
        let g = ComplexMatrix::from_fn(dim, |_, _| rng.complex_gaussian());
        let mut columns: Vec<Vec<Complex64>> = (0..dim)
            .map(|j| (0..dim).map(|i| g.get(i, j)).collect())
            .collect();
        let mut ok = true;
        for j in 0..dim {
            for k in 0..j {
                let overlap: Complex64 = columns[k]
                    .iter()
                    .zip(&columns[j])
                    .map(|(q, v)| q.conj() * v)
                    .sum();
                let prior = columns[k].clone();
                for (v, q) in columns[j].iter_mut().zip(&prior) {
                    *v -= overlap * q;
                }
            }
            let norm = columns[j]
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for v in columns[j].iter_mut() {
                *v /= norm;
            }
        }
        if ok {
            return ComplexMatrix::from_fn(dim, |i, j| columns[j][i]);
        }
    }
}

/// Random orthonormal basis: the columns of a Haar unitary.
pub fn random_orthonormal_basis(dim: usize, rng: &mut Rng) -> Vec<StateVector> {
    let u = haar_unitary(dim, rng);
    (0..dim)
        .map(|j| {
            StateVector::new((0..dim).map(|i| u.get(i, j)).collect())
                .expect("unitary column is a unit vector")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observable::pvm_from_orthonormal;

    fn standard_pvm(dim: usize) -> Pvm {
        pvm_from_orthonormal(
            (0..dim).map(|k| StateVector::basis(dim, k)).collect(),
            (0..dim).map(|k| k as f64).collect(),
            None,
        )
        .unwrap()
    }

    fn hadamard_pvm() -> Pvm {
        let r = 1.0 / 2.0_f64.sqrt();
        pvm_from_orthonormal(
            vec![
                StateVector::from_re(&[r, r]).unwrap(),
                StateVector::from_re(&[r, -r]).unwrap(),
            ],
            vec![1.0, -1.0],
            None,
        )
        .unwrap()
    }

    fn worked_frame() -> ObliqueFrame {
        let r = 1.0 / 2.0_f64.sqrt();
        ObliqueFrame::new(
            vec![
                StateVector::basis(2, 0),
                StateVector::from_re(&[r, r]).unwrap(),
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn identical_observables_give_identity() {
        let pvm = standard_pvm(3);
        let t = transition_matrix(&pvm, &pvm).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((t.get(i, j) - expected).abs() <= 1e-14);
            }
        }
        assert!(is_doubly_stochastic(&t, 1e-10));
    }

    #[test]
    fn mutually_unbiased_bases_give_flat_matrix() {
        let t = transition_matrix(&standard_pvm(2), &hadamard_pvm()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((t.get(i, j) - 0.5).abs() <= 1e-14);
            }
        }
        assert!(is_doubly_stochastic(&t, 1e-10));
    }

    #[test]
    fn unitary_pairs_are_doubly_stochastic() {
        let mut rng = Rng::seeded(301);
        for _ in 0..50 {
            let dim = 2 + rng.below(3);
            let a = pvm_from_orthonormal(
                random_orthonormal_basis(dim, &mut rng),
                (0..dim).map(|k| k as f64).collect(),
                None,
            )
            .unwrap();
            let b = pvm_from_orthonormal(
                random_orthonormal_basis(dim, &mut rng),
                (0..dim).map(|k| k as f64).collect(),
                None,
            )
            .unwrap();
            let t = transition_matrix(&a, &b).unwrap();
            for s in t.row_sums() {
                assert!((s - 1.0).abs() <= 1e-10);
            }
            assert!(is_doubly_stochastic(&t, 1e-10));
        }
    }

    #[test]
    fn worked_frame_breaks_column_sums() {
        // rows: distribution of the frame observable in |0> and in |1>;
        // the |1> row is the (1/3, 2/3) example, so the columns sum to
        // (4/3, 2/3)
        let t = frame_transition(&worked_frame(), &standard_pvm(2)).unwrap();
        assert!((t.get(0, 0) - 1.0).abs() <= 1e-12);
        assert!(t.get(0, 1).abs() <= 1e-12);
        assert!((t.get(1, 0) - 1.0 / 3.0).abs() <= 1e-12);
        assert!((t.get(1, 1) - 2.0 / 3.0).abs() <= 1e-12);

        let cols = t.column_sums();
        assert!((cols[0] - 4.0 / 3.0).abs() <= 1e-12);
        assert!((cols[1] - 2.0 / 3.0).abs() <= 1e-12);
        assert!(!is_doubly_stochastic(&t, 1e-3));
        for s in t.row_sums() {
            assert!((s - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn orthonormal_frame_reduces_to_sharp_transition() {
        let mut rng = Rng::seeded(307);
        let dim = 3;
        let basis = random_orthonormal_basis(dim, &mut rng);
        let frame = ObliqueFrame::new(basis.clone(), None).unwrap();
        let frame_pvm = pvm_from_orthonormal(
            basis,
            (0..dim).map(|k| k as f64).collect(),
            None,
        )
        .unwrap();
        let sharp = pvm_from_orthonormal(
            random_orthonormal_basis(dim, &mut rng),
            (0..dim).map(|k| k as f64).collect(),
            None,
        )
        .unwrap();

        let via_frame = frame_transition(&frame, &sharp).unwrap();
        let via_pvm = transition_matrix(&sharp, &frame_pvm).unwrap();
        for i in 0..dim {
            for j in 0..dim {
                assert!((via_frame.get(i, j) - via_pvm.get(i, j)).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn doubly_stochastic_examples() {
        let id = TransitionMatrix::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(is_doubly_stochastic(&id, 1e-10));
        let flat = TransitionMatrix::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert!(is_doubly_stochastic(&flat, 1e-10));
    }

    #[test]
    fn dim_mismatch_is_rejected() {
        let err = transition_matrix(&standard_pvm(2), &standard_pvm(3)).unwrap_err();
        assert!(matches!(err, Error::DimMismatch { .. }));
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = Rng::seeded(311);
        for dim in 2..=4 {
            let u = haar_unitary(dim, &mut rng);
            let gram = u.adjoint().mul(&u).unwrap();
            assert!(gram.distance(&ComplexMatrix::identity(dim)).unwrap() <= 1e-12);
        }
    }
}
