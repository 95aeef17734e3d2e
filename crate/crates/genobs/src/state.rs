//! Generalized quantum states: nonnegative nonzero operators with finite
//! positive trace, plus the trace-one density operators obtained by
//! normalization. Probabilities never depend on the overall trace, which the
//! born-rule suite checks explicitly.

use num_complex::Complex64;

use crate::eig::eig_hermitian;
use crate::error::{Error, Result};
use crate::matrix::{outer, ComplexMatrix, StateVector};
use crate::rng::Rng;
use crate::DEFAULT_TOL;

/// Traces at or below this are treated as degenerate (the state is "zero").
pub const TRACE_FLOOR: f64 = 1e-12;

/// A nonnegative, nonzero operator with finite positive trace.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedState {
    op: ComplexMatrix,
    trace: f64,
}

impl GeneralizedState {
    /// Validates Hermiticity, positive semidefiniteness, and a real positive
    /// trace. The imaginary residue of the trace is discarded after the check.
    pub fn new(op: ComplexMatrix) -> Result<Self> {
        let scale = op.frobenius_norm().max(1.0);
        if !op.is_hermitian(DEFAULT_TOL) {
            return Err(Error::InvalidState(format!(
                "state operator is not Hermitian (deviation {:.3e})",
                op.hermitian_deviation()
            )));
        }
        let sys = eig_hermitian(&op)?;
        if sys.min_eigenvalue() < -DEFAULT_TOL * scale {
            return Err(Error::InvalidState(format!(
                "state operator is not positive semidefinite (min eigenvalue {:.3e})",
                sys.min_eigenvalue()
            )));
        }
        let trace = op.trace();
        if trace.im.abs() > DEFAULT_TOL * scale {
            return Err(Error::InvalidState(format!(
                "state trace has imaginary residue {:.3e}",
                trace.im
            )));
        }
        if !(trace.re.is_finite() && trace.re > TRACE_FLOOR) {
            return Err(Error::InvalidState(format!(
                "state trace {:.3e} is not strictly positive",
                trace.re
            )));
        }
        Ok(Self {
            op,
            trace: trace.re,
        })
    }

    /// Constructor for operators that are positive by construction
    /// (projectors, Ginibre products, convex mixtures); skips the spectral
    /// re-check but still guards the trace.
    pub(crate) fn from_positive_construction(op: ComplexMatrix) -> Result<Self> {
        let trace = op.trace().re;
        if !(trace.is_finite() && trace > TRACE_FLOOR) {
            return Err(Error::InvalidState(format!(
                "state trace {trace:.3e} is not strictly positive"
            )));
        }
        debug_assert!(op.is_hermitian(1e-9));
        Ok(Self { op, trace })
    }

    pub fn op(&self) -> &ComplexMatrix {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    /// Rescales to unit trace.
    pub fn normalize(&self) -> DensityOperator {
        DensityOperator {
            state: Self {
                op: self.op.scale_re(1.0 / self.trace),
                trace: 1.0,
            },
        }
    }
}

/// A generalized state with unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    state: GeneralizedState,
}

impl DensityOperator {
    pub fn new(op: ComplexMatrix) -> Result<Self> {
        let state = GeneralizedState::new(op)?;
        if (state.trace() - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::InvalidState(format!(
                "density operator trace {:.15} differs from 1",
                state.trace()
            )));
        }
        Ok(Self { state })
    }

    pub(crate) fn from_positive_construction(op: ComplexMatrix) -> Result<Self> {
        let state = GeneralizedState::from_positive_construction(op)?;
        debug_assert!((state.trace() - 1.0).abs() <= 1e-9);
        Ok(Self { state })
    }

    pub fn op(&self) -> &ComplexMatrix {
        self.state.op()
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    pub fn as_state(&self) -> &GeneralizedState {
        &self.state
    }

    pub fn into_state(self) -> GeneralizedState {
        self.state
    }

    /// Equal-weight mixture `(a + b) / 2`.
    pub fn midpoint(a: &DensityOperator, b: &DensityOperator) -> Result<Self> {
        let sum = a.op().add(b.op())?;
        Self::from_positive_construction(sum.scale_re(0.5))
    }
}

/// Rank-one state `|psi><psi|` from any nonzero vector; the trace equals the
/// squared norm, so non-normalized vectors stay non-normalized states.
pub fn pure_state(psi: &StateVector) -> Result<GeneralizedState> {
    let op = outer(psi, psi).expect("equal dims");
    let trace = psi.norm().powi(2);
    if trace <= TRACE_FLOOR {
        return Err(Error::ZeroVector { norm: psi.norm() });
    }
    GeneralizedState::from_positive_construction(op)
}

/// Seed-deterministic random density operator: `G G* / Tr(G G*)` for `G`
/// with independent complex Gaussian entries (drawn row-major).
pub fn random_density(dim: usize, seed: u64) -> DensityOperator {
    random_density_with(&mut Rng::seeded(seed), dim)
}

/// Draws the next density operator from an existing generator.
pub fn random_density_with(rng: &mut Rng, dim: usize) -> DensityOperator {
    loop {
        let g = ComplexMatrix::from_fn(dim, |_, _| rng.complex_gaussian());
        let product = g.mul(&g.adjoint()).expect("square");
        let trace = product.trace().re;
        if trace > TRACE_FLOOR {
            let op = product.scale_re(1.0 / trace);
            // strip the round-off asymmetry of G G*
            return DensityOperator::from_positive_construction(op.hermitian_part())
                .expect("unit trace by construction");
        }
    }
}

/// The standard pure-state tomography family: `dim*dim` density operators
/// whose real span is the whole Hermitian matrix space.
///
/// Order is pinned: `|k><k|` for each `k`, then for each pair `k < l` the
/// projectors onto `(|k> + |l>)/sqrt(2)` and `(|k> + i|l>)/sqrt(2)`.
pub fn tomographic_frame(dim: usize) -> Vec<DensityOperator> {
    let mut states = Vec::with_capacity(dim * dim);
    for k in 0..dim {
        let e = StateVector::basis(dim, k);
        states.push(
            DensityOperator::from_positive_construction(outer(&e, &e).expect("equal dims"))
                .expect("projector has unit trace"),
        );
    }
    let inv_sqrt2 = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    for k in 0..dim {
        for l in k + 1..dim {
            for phase in [Complex64::ONE, Complex64::I] {
                let mut data = vec![Complex64::ZERO; dim];
                data[k] = inv_sqrt2;
                data[l] = inv_sqrt2 * phase;
                let v = StateVector::new(data).expect("unit vector");
                states.push(
                    DensityOperator::from_positive_construction(
                        outer(&v, &v).expect("equal dims"),
                    )
                    .expect("projector has unit trace"),
                );
            }
        }
    }
    states
}

/// The maximally mixed state `I / dim`.
pub fn maximally_mixed(dim: usize) -> DensityOperator {
    DensityOperator::from_positive_construction(
        ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
    )
    .expect("unit trace")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::is_psd;
    use crate::matrix::{approx_eq, hs_inner};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pure_state_examples() {
        let zero = pure_state(&StateVector::basis(2, 0)).unwrap();
        assert!(approx_eq(zero.op(), &ComplexMatrix::diag(&[1.0, 0.0]), 1e-15));

        let r = 1.0 / 2.0_f64.sqrt();
        let plus = pure_state(&StateVector::from_re(&[r, r]).unwrap()).unwrap();
        for entry in plus.op().entries() {
            assert!((entry - c(0.5, 0.0)).norm() <= 1e-15);
        }

        let doubled = pure_state(&StateVector::from_re(&[2.0, 0.0]).unwrap()).unwrap();
        assert!(approx_eq(doubled.op(), &ComplexMatrix::diag(&[4.0, 0.0]), 1e-15));
        assert!((doubled.trace() - 4.0).abs() <= 1e-15);
    }

    #[test]
    fn pure_state_has_single_eigenvalue_norm_squared() {
        let mut rng = Rng::seeded(41);
        for _ in 0..20 {
            let dim = 2 + rng.below(3);
            let psi =
                StateVector::new((0..dim).map(|_| rng.complex_gaussian()).collect()).unwrap();
            let state = pure_state(&psi).unwrap();
            let sys = eig_hermitian(state.op()).unwrap();
            let top = sys.max_eigenvalue();
            assert!((top - psi.norm().powi(2)).abs() <= 1e-10 * top.max(1.0));
            for lambda in &sys.eigenvalues()[..dim - 1] {
                assert!(lambda.abs() <= 1e-10 * top.max(1.0));
            }
        }
    }

    #[test]
    fn normalize_examples() {
        let state = GeneralizedState::new(ComplexMatrix::diag(&[4.0, 0.0])).unwrap();
        assert!(approx_eq(
            state.normalize().op(),
            &ComplexMatrix::diag(&[1.0, 0.0]),
            1e-15
        ));

        let flat = GeneralizedState::new(ComplexMatrix::diag(&[1.0, 1.0])).unwrap();
        assert!(approx_eq(
            flat.normalize().op(),
            &ComplexMatrix::diag(&[0.5, 0.5]),
            1e-15
        ));

        let density = random_density(2, 99);
        let renormalized = density.as_state().normalize();
        assert!(approx_eq(renormalized.op(), density.op(), 1e-14));
    }

    #[test]
    fn normalize_is_scale_invariant() {
        let mut rng = Rng::seeded(55);
        let base = random_density_with(&mut rng, 3);
        for scale in [1e-6, 1.0, 1e6] {
            let scaled = GeneralizedState::new(base.op().scale_re(scale)).unwrap();
            assert!(
                approx_eq(scaled.normalize().op(), base.op(), 1e-12),
                "scale {scale}"
            );
        }
    }

    #[test]
    fn random_density_is_deterministic_and_valid() {
        let a = random_density(2, 7);
        let b = random_density(2, 7);
        assert_eq!(a.op(), b.op());

        assert!(is_psd(a.op(), DEFAULT_TOL).unwrap());
        assert!((a.op().trace().re - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn random_density_has_full_support() {
        for seed in 0..100 {
            let rho = random_density(3, seed);
            let sys = eig_hermitian(rho.op()).unwrap();
            assert!(sys.min_eigenvalue() > 0.0, "seed {seed}");
        }
    }

    #[test]
    fn tomographic_frame_spans_hermitian_space() {
        assert_eq!(tomographic_frame(1).len(), 1);
        assert!(approx_eq(
            tomographic_frame(1)[0].op(),
            &ComplexMatrix::identity(1),
            1e-15
        ));

        for dim in [2usize, 3] {
            let frame = tomographic_frame(dim);
            assert_eq!(frame.len(), dim * dim);
            // real Gram matrix under the Hilbert-Schmidt pairing
            let n = frame.len();
            let gram: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| hs_inner(frame[i].op(), frame[j].op()).unwrap().re)
                        .collect()
                })
                .collect();
            let gram_matrix = ComplexMatrix::from_fn(n, |i, j| c(gram[i][j], 0.0));
            let sys = eig_hermitian(&gram_matrix).unwrap();
            let condition = sys.max_eigenvalue() / sys.min_eigenvalue();
            assert!(
                sys.min_eigenvalue() > 1e-6 && condition.is_finite(),
                "dim {dim}: span deficient, min eig {} cond {condition}",
                sys.min_eigenvalue()
            );
        }
    }

    #[test]
    fn invalid_states_are_rejected() {
        assert!(GeneralizedState::new(ComplexMatrix::diag(&[1.0, -0.5])).is_err());
        assert!(GeneralizedState::new(ComplexMatrix::zeros(2)).is_err());
        let non_hermitian = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        assert!(GeneralizedState::new(non_hermitian).is_err());
        assert!(DensityOperator::new(ComplexMatrix::diag(&[0.9, 0.2])).is_err());
    }
}
