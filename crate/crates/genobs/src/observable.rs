//! Observable constructions.
//!
//! Three routes into the same probability machinery:
//!
//! * [`Pvm`]: orthonormal basis plus distinct real outcome values; the
//!   conventional sharp observable.
//! * [`ObliqueFrame`]: a basis of normalized but not necessarily orthogonal
//!   vectors. Its biorthogonal dual yields idempotent (generally
//!   non-self-adjoint) projectors, and squaring those against themselves
//!   yields the effect family whose total is positive definite but usually
//!   not the identity.
//! * [`EffectFamily`]: the general object, finitely many PSD operators with
//!   positive-definite total. [`Povm`] is the special case where the total is
//!   the identity.

use num_complex::Complex64;

use crate::eig::min_eigenvalue;
use crate::error::{Error, Result};
use crate::matrix::{outer_raw, ComplexMatrix, StateVector};
use crate::solve::{condition_number, frame_matrix, inverse, FRAME_CONDITION_LIMIT};
use crate::DEFAULT_TOL;

fn default_labels(count: usize) -> Vec<String> {
    (0..count).map(|j| j.to_string()).collect()
}

fn check_labels(labels: &[String], outcomes: usize) -> Result<()> {
    if labels.len() != outcomes {
        return Err(Error::LabelCountMismatch {
            labels: labels.len(),
            outcomes,
        });
    }
    for (i, label) in labels.iter().enumerate() {
        if labels[..i].contains(label) {
            return Err(Error::DuplicateLabels(label.clone()));
        }
    }
    Ok(())
}

/// A basis of normalized, linearly independent (not necessarily orthogonal)
/// vectors with distinct outcome labels.
#[derive(Debug, Clone)]
pub struct ObliqueFrame {
    vectors: Vec<StateVector>,
    labels: Vec<String>,
}

impl ObliqueFrame {
    pub fn new(vectors: Vec<StateVector>, labels: Option<Vec<String>>) -> Result<Self> {
        let f = frame_matrix(&vectors)?;
        for (index, v) in vectors.iter().enumerate() {
            let deviation = (v.norm().powi(2) - 1.0).abs();
            if deviation > DEFAULT_TOL {
                return Err(Error::NotNormalized { index, deviation });
            }
        }
        let condition = condition_number(&f);
        if !condition.is_finite() || condition > FRAME_CONDITION_LIMIT {
            return Err(Error::SingularFrame {
                condition,
                limit: FRAME_CONDITION_LIMIT,
            });
        }
        let labels = labels.unwrap_or_else(|| default_labels(vectors.len()));
        check_labels(&labels, vectors.len())?;
        Ok(Self { vectors, labels })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Gram matrix `<e_i, e_j>`.
    pub fn gram(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), |i, j| {
            self.vectors[i].inner(&self.vectors[j]).expect("equal dims")
        })
    }

    pub fn is_orthonormal(&self, tol: f64) -> bool {
        self.gram()
            .distance(&ComplexMatrix::identity(self.dim()))
            .expect("equal dims")
            <= tol
    }

    /// The biorthogonal dual family: `<f_j, e_k> = delta_jk`.
    ///
    /// Computed as the columns of the inverse adjoint of the frame matrix.
    pub fn dual_vectors(&self) -> Vec<Vec<Complex64>> {
        let f = frame_matrix(&self.vectors).expect("validated at construction");
        let dual = inverse(&f.adjoint()).expect("condition number already checked");
        (0..self.dim())
            .map(|j| (0..self.dim()).map(|i| dual.get(i, j)).collect())
            .collect()
    }
}

/// Idempotent projector onto one frame direction; in general not
/// self-adjoint.
#[derive(Debug, Clone)]
pub struct ObliqueProjector {
    op: ComplexMatrix,
}

impl ObliqueProjector {
    pub fn new(op: ComplexMatrix) -> Result<Self> {
        let scale = op.frobenius_norm().max(1.0);
        let idempotency = op.mul(&op)?.distance(&op)?;
        if idempotency > DEFAULT_TOL * scale {
            return Err(Error::InvalidState(format!(
                "projector is not idempotent (||P^2 - P||_F = {idempotency:.3e})"
            )));
        }
        Ok(Self { op })
    }

    pub fn op(&self) -> &ComplexMatrix {
        &self.op
    }
}

/// Projectors onto the frame directions: the j-th maps `psi` to
/// `c_j(psi) e_j`, built as `|e_j><f_j|` from the dual family.
pub fn frame_projectors(frame: &ObliqueFrame) -> Vec<ObliqueProjector> {
    let duals = frame.dual_vectors();
    frame
        .vectors()
        .iter()
        .zip(&duals)
        .map(|(e, f)| {
            ObliqueProjector::new(outer_raw(e.entries(), f)).expect("structurally idempotent")
        })
        .collect()
}

/// Finite family of PSD effects whose total is positive definite.
#[derive(Debug, Clone)]
pub struct EffectFamily {
    effects: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

impl EffectFamily {
    pub fn new(effects: Vec<ComplexMatrix>, labels: Option<Vec<String>>) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::InvalidState("effect family is empty".into()));
        }
        let dim = effects[0].dim();
        for e in &effects {
            if e.dim() != dim {
                return Err(Error::DimMismatch {
                    left: dim,
                    right: e.dim(),
                });
            }
        }
        for e in &effects {
            if !e.is_hermitian(DEFAULT_TOL) {
                return Err(Error::NotHermitian {
                    deviation: e.hermitian_deviation(),
                });
            }
            let min = min_eigenvalue(e)?;
            if min < -DEFAULT_TOL * e.frobenius_norm().max(1.0) {
                return Err(Error::NotPositiveSemidefinite {
                    min_eigenvalue: min,
                });
            }
        }
        let total = sum_effects(&effects);
        let min = min_eigenvalue(&total)?;
        if min <= DEFAULT_TOL * total.frobenius_norm() {
            return Err(Error::TotalNotPositiveDefinite {
                min_eigenvalue: min,
            });
        }
        let labels = labels.unwrap_or_else(|| default_labels(effects.len()));
        check_labels(&labels, effects.len())?;
        Ok(Self { effects, labels })
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Total effect `E(X)`, the sum over all outcomes.
    pub fn total(&self) -> ComplexMatrix {
        sum_effects(&self.effects)
    }

    /// Whether the total is the identity within `tol` (Frobenius).
    pub fn is_povm(&self, tol: f64) -> bool {
        self.total()
            .distance(&ComplexMatrix::identity(self.dim()))
            .expect("equal dims")
            <= tol
    }

    /// Scales every effect by the same positive factor. Probabilities are
    /// invariant under this.
    pub fn scale(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidState(format!(
                "scale factor {factor} must be positive"
            )));
        }
        Ok(Self {
            effects: self.effects.iter().map(|e| e.scale_re(factor)).collect(),
            labels: self.labels.clone(),
        })
    }

    /// Groups outcomes into blocks, summing member effects; the partition
    /// must cover every label exactly once. Block labels join member labels
    /// with `+`.
    pub fn coarse_grain(&self, partition: &[Vec<String>]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        let mut effects = Vec::with_capacity(partition.len());
        let mut labels = Vec::with_capacity(partition.len());
        for block in partition {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            let mut acc = ComplexMatrix::zeros(self.dim());
            for label in block {
                let idx = self.label_index(label)?;
                if seen[idx] {
                    return Err(Error::InvalidPartition(format!(
                        "label {label:?} appears in more than one block"
                    )));
                }
                seen[idx] = true;
                acc = acc.add(&self.effects[idx])?;
            }
            effects.push(acc);
            labels.push(block.join("+"));
        }
        if let Some(idx) = seen.iter().position(|covered| !covered) {
            return Err(Error::InvalidPartition(format!(
                "label {:?} is not covered by the partition",
                self.labels[idx]
            )));
        }
        Self::new(effects, Some(labels))
    }
}

fn sum_effects(effects: &[ComplexMatrix]) -> ComplexMatrix {
    let mut total = ComplexMatrix::zeros(effects[0].dim());
    for e in effects {
        total = total.add(e).expect("equal dims");
    }
    total
}

/// Effects `M_j` induced by an oblique frame: the adjoint-square of each
/// frame projector. Each is Hermitian PSD and the total is positive definite,
/// but the total equals the identity only for orthonormal frames.
///
/// Near the condition-number limit the total's smallest eigenvalue can fall
/// below the positive-definiteness threshold of [`EffectFamily`]; such frames
/// are reported as singular.
pub fn frame_effects(frame: &ObliqueFrame) -> Result<EffectFamily> {
    let projectors = frame_projectors(frame);
    let effects = projectors
        .iter()
        .map(|p| {
            let m = p.op().adjoint().mul(p.op()).expect("equal dims");
            // adjoint-square round-off hygiene
            m.hermitian_part()
        })
        .collect();
    EffectFamily::new(effects, Some(frame.labels().to_vec())).map_err(|err| match err {
        Error::TotalNotPositiveDefinite { .. } => {
            let f = frame_matrix(frame.vectors()).expect("validated at construction");
            Error::SingularFrame {
                condition: condition_number(&f),
                limit: FRAME_CONDITION_LIMIT,
            }
        }
        other => other,
    })
}

/// POVM: an effect family whose total is the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    family: EffectFamily,
}

impl Povm {
    pub fn new(effects: Vec<ComplexMatrix>, labels: Option<Vec<String>>) -> Result<Self> {
        Self::from_family(EffectFamily::new(effects, labels)?)
    }

    pub fn from_family(family: EffectFamily) -> Result<Self> {
        let deviation = family
            .total()
            .distance(&ComplexMatrix::identity(family.dim()))
            .expect("equal dims");
        if deviation > DEFAULT_TOL * (family.dim() as f64).sqrt().max(1.0) {
            return Err(Error::InvalidState(format!(
                "effect total differs from identity by {deviation:.3e}; not a POVM"
            )));
        }
        Ok(Self { family })
    }

    pub fn family(&self) -> &EffectFamily {
        &self.family
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        self.family.effects()
    }

    pub fn labels(&self) -> &[String] {
        self.family.labels()
    }

    pub fn dim(&self) -> usize {
        self.family.dim()
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }
}

/// Sharp observable: orthonormal eigenbasis with distinct real values.
#[derive(Debug, Clone)]
pub struct Pvm {
    basis: Vec<StateVector>,
    values: Vec<f64>,
    labels: Vec<String>,
    operator: ComplexMatrix,
}

impl Pvm {
    pub fn basis(&self) -> &[StateVector] {
        &self.basis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The self-adjoint operator with this eigensystem.
    pub fn operator(&self) -> &ComplexMatrix {
        &self.operator
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The projective effect family `{|e_j><e_j|}`.
    pub fn to_povm(&self) -> Povm {
        let effects = self
            .basis
            .iter()
            .map(|e| outer_raw(e.entries(), e.entries()))
            .collect();
        Povm::new(effects, Some(self.labels.clone())).expect("projectors resolve the identity")
    }

    /// An oblique frame view of the eigenbasis (trivially orthonormal).
    pub fn to_frame(&self) -> ObliqueFrame {
        ObliqueFrame::new(self.basis.clone(), Some(self.labels.clone()))
            .expect("orthonormal basis is a valid frame")
    }
}

/// Builds a sharp observable from an orthonormal basis and distinct outcome
/// values.
pub fn pvm_from_orthonormal(
    basis: Vec<StateVector>,
    values: Vec<f64>,
    labels: Option<Vec<String>>,
) -> Result<Pvm> {
    let dim = basis.len();
    if values.len() != dim {
        return Err(Error::DimMismatch {
            left: dim,
            right: values.len(),
        });
    }
    let f = frame_matrix(&basis)?;
    let gram = f.adjoint().mul(&f)?;
    let deviation = gram.distance(&ComplexMatrix::identity(dim))?;
    if deviation > DEFAULT_TOL * (dim as f64).sqrt().max(1.0) {
        return Err(Error::NotOrthonormal { deviation });
    }
    for i in 0..dim {
        for j in i + 1..dim {
            if values[i] == values[j] {
                return Err(Error::DuplicateValues { i, j });
            }
        }
    }
    let labels = labels.unwrap_or_else(|| default_labels(dim));
    check_labels(&labels, dim)?;

    let mut operator = ComplexMatrix::zeros(dim);
    for (y, e) in values.iter().zip(&basis) {
        let projector = outer_raw(e.entries(), e.entries());
        operator = operator.add(&projector.scale_re(*y))?;
    }
    Ok(Pvm {
        basis,
        values,
        labels,
        operator,
    })
}
