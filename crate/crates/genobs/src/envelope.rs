//! JSON document format for states, vectors, effect families, frames, and
//! sharp observables.
//!
//! Complex numbers are two-element arrays `[re, im]`, matrices are row-major
//! arrays of rows, and every document carries an explicit `kind` and `dim`.
//! Deserialization re-validates all domain invariants, so a parsed document
//! either yields a valid domain value or a structured error naming the
//! violated invariant.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, StateVector};
use crate::observable::{frame_effects, pvm_from_orthonormal, EffectFamily, ObliqueFrame, Povm, Pvm};
use crate::represent::{AffinityWitness, RepresentabilityVerdict};
use crate::state::{pure_state, DensityOperator, GeneralizedState};

/// `[re, im]`.
pub type ComplexData = [f64; 2];
/// Row-major rows of `[re, im]` pairs.
pub type MatrixData = Vec<Vec<ComplexData>>;
/// Entries as `[re, im]` pairs.
pub type VectorData = Vec<ComplexData>;

/// On-disk representation of every object the CLI reads or writes.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DocumentEnvelope {
    /// Generalized state: Hermitian PSD matrix with positive trace.
    State { dim: usize, matrix: MatrixData },
    /// Pure state as a nonzero vector.
    StateVector { dim: usize, vector: VectorData },
    /// Effect family; a POVM is the special case summing to the identity.
    EffectFamily {
        dim: usize,
        effects: Vec<MatrixData>,
        #[serde(skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    /// Oblique frame of normalized vectors.
    Frame {
        dim: usize,
        vectors: Vec<VectorData>,
        #[serde(skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    /// Sharp observable: orthonormal basis plus distinct outcome values.
    Pvm {
        dim: usize,
        basis: Vec<VectorData>,
        values: Vec<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

fn complex_from(data: ComplexData) -> Complex64 {
    Complex64::new(data[0], data[1])
}

fn complex_to(z: Complex64) -> ComplexData {
    [z.re, z.im]
}

fn matrix_from(dim: usize, data: &MatrixData) -> Result<ComplexMatrix> {
    if data.len() != dim {
        return Err(Error::InvalidDocument(format!(
            "matrix has {} rows but dim is {dim}; it must be square",
            data.len()
        )));
    }
    for row in data {
        if row.len() != dim {
            return Err(Error::InvalidDocument(format!(
                "matrix row has {} entries but dim is {dim}; it must be square",
                row.len()
            )));
        }
    }
    let rows: Vec<Vec<Complex64>> = data
        .iter()
        .map(|row| row.iter().map(|&z| complex_from(z)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

fn matrix_to(m: &ComplexMatrix) -> MatrixData {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| complex_to(m.get(i, j))).collect())
        .collect()
}

fn vector_from(dim: usize, data: &VectorData) -> Result<StateVector> {
    if data.len() != dim {
        return Err(Error::InvalidDocument(format!(
            "vector has {} entries but dim is {dim}",
            data.len()
        )));
    }
    StateVector::new(data.iter().map(|&z| complex_from(z)).collect())
}

fn vector_to(v: &StateVector) -> VectorData {
    v.entries().iter().map(|&z| complex_to(z)).collect()
}

impl DocumentEnvelope {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidDocument(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization cannot fail")
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::State { .. } => "state",
            Self::StateVector { .. } => "state_vector",
            Self::EffectFamily { .. } => "effect_family",
            Self::Frame { .. } => "frame",
            Self::Pvm { .. } => "pvm",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::State { dim, .. }
            | Self::StateVector { dim, .. }
            | Self::EffectFamily { dim, .. }
            | Self::Frame { dim, .. }
            | Self::Pvm { dim, .. } => *dim,
        }
    }

    /// Reads a state from `state` or `state_vector` documents.
    pub fn as_generalized_state(&self) -> Result<GeneralizedState> {
        match self {
            Self::State { dim, matrix } => GeneralizedState::new(matrix_from(*dim, matrix)?),
            Self::StateVector { dim, vector } => pure_state(&vector_from(*dim, vector)?),
            other => Err(Error::InvalidDocument(format!(
                "expected a state or state_vector document, found kind {:?}",
                other.kind_name()
            ))),
        }
    }

    /// Reads an observable from `effect_family`, `frame`, or `pvm`
    /// documents, lowering frames and sharp observables to their effect
    /// families.
    pub fn as_effect_family(&self) -> Result<EffectFamily> {
        match self {
            Self::EffectFamily {
                dim,
                effects,
                labels,
            } => {
                let matrices: Vec<ComplexMatrix> = effects
                    .iter()
                    .map(|m| matrix_from(*dim, m))
                    .collect::<Result<_>>()?;
                EffectFamily::new(matrices, labels.clone())
            }
            Self::Frame { .. } => frame_effects(&self.as_frame()?),
            Self::Pvm { .. } => Ok(self.as_pvm()?.to_povm().family().clone()),
            other => Err(Error::InvalidDocument(format!(
                "expected an observable document (effect_family, frame, or pvm), found kind {:?}",
                other.kind_name()
            ))),
        }
    }

    pub fn as_frame(&self) -> Result<ObliqueFrame> {
        match self {
            Self::Frame {
                dim,
                vectors,
                labels,
            } => {
                let vs: Vec<StateVector> = vectors
                    .iter()
                    .map(|v| vector_from(*dim, v))
                    .collect::<Result<_>>()?;
                ObliqueFrame::new(vs, labels.clone())
            }
            other => Err(Error::InvalidDocument(format!(
                "expected a frame document, found kind {:?}",
                other.kind_name()
            ))),
        }
    }

    pub fn as_pvm(&self) -> Result<Pvm> {
        match self {
            Self::Pvm {
                dim,
                basis,
                values,
                labels,
            } => {
                let vs: Vec<StateVector> = basis
                    .iter()
                    .map(|v| vector_from(*dim, v))
                    .collect::<Result<_>>()?;
                pvm_from_orthonormal(vs, values.clone(), labels.clone())
            }
            other => Err(Error::InvalidDocument(format!(
                "expected a pvm document, found kind {:?}",
                other.kind_name()
            ))),
        }
    }

    pub fn from_generalized_state(state: &GeneralizedState) -> Self {
        Self::State {
            dim: state.dim(),
            matrix: matrix_to(state.op()),
        }
    }

    pub fn from_density(rho: &DensityOperator) -> Self {
        Self::from_generalized_state(rho.as_state())
    }

    pub fn from_state_vector(psi: &StateVector) -> Self {
        Self::StateVector {
            dim: psi.dim(),
            vector: vector_to(psi),
        }
    }

    pub fn from_effect_family(family: &EffectFamily) -> Self {
        Self::EffectFamily {
            dim: family.dim(),
            effects: family.effects().iter().map(matrix_to).collect(),
            labels: Some(family.labels().to_vec()),
        }
    }

    pub fn from_frame(frame: &ObliqueFrame) -> Self {
        Self::Frame {
            dim: frame.dim(),
            vectors: frame.vectors().iter().map(vector_to).collect(),
            labels: Some(frame.labels().to_vec()),
        }
    }

    pub fn from_pvm(pvm: &Pvm) -> Self {
        Self::Pvm {
            dim: pvm.dim(),
            basis: pvm.basis().iter().map(vector_to).collect(),
            values: pvm.values().to_vec(),
            labels: Some(pvm.labels().to_vec()),
        }
    }
}

/// JSON form of an affinity-violation witness.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WitnessDocument {
    pub state_a: DocumentEnvelope,
    pub state_b: DocumentEnvelope,
    pub midpoint: DocumentEnvelope,
    pub outcome: String,
    pub prob_a: f64,
    pub prob_b: f64,
    pub prob_mid: f64,
    pub gap: f64,
}

/// JSON form of a representability verdict.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum VerdictDocument {
    Representable { povm: DocumentEnvelope },
    NotRepresentable { witness: Box<WitnessDocument> },
}

impl VerdictDocument {
    pub fn from_verdict(verdict: &RepresentabilityVerdict) -> Self {
        match verdict {
            RepresentabilityVerdict::Representable { povm } => Self::Representable {
                povm: DocumentEnvelope::from_effect_family(povm.family()),
            },
            RepresentabilityVerdict::NotRepresentable { witness } => Self::NotRepresentable {
                witness: Box::new(WitnessDocument {
                    state_a: DocumentEnvelope::from_density(&witness.state_a),
                    state_b: DocumentEnvelope::from_density(&witness.state_b),
                    midpoint: DocumentEnvelope::from_density(&witness.midpoint),
                    outcome: witness.outcome.clone(),
                    prob_a: witness.prob_a,
                    prob_b: witness.prob_b,
                    prob_mid: witness.prob_mid,
                    gap: witness.gap,
                }),
            },
        }
    }

    /// Parses back into the domain verdict, re-validating every invariant.
    pub fn to_verdict(&self) -> Result<RepresentabilityVerdict> {
        match self {
            Self::Representable { povm } => {
                let family = povm.as_effect_family()?;
                Ok(RepresentabilityVerdict::Representable {
                    povm: Povm::from_family(family)?,
                })
            }
            Self::NotRepresentable { witness } => {
                let density = |doc: &DocumentEnvelope| -> Result<DensityOperator> {
                    let state = doc.as_generalized_state()?;
                    if (state.trace() - 1.0).abs() > crate::DEFAULT_TOL {
                        return Err(Error::InvalidDocument(format!(
                            "witness state trace {:.15} differs from 1",
                            state.trace()
                        )));
                    }
                    Ok(state.normalize())
                };
                Ok(RepresentabilityVerdict::NotRepresentable {
                    witness: AffinityWitness {
                        state_a: density(&witness.state_a)?,
                        state_b: density(&witness.state_b)?,
                        midpoint: density(&witness.midpoint)?,
                        outcome: witness.outcome.clone(),
                        prob_a: witness.prob_a,
                        prob_b: witness.prob_b,
                        prob_mid: witness.prob_mid,
                        gap: witness.gap,
                    },
                })
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidDocument(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serialization cannot fail")
    }
}
