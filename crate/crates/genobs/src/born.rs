//! Probability maps.
//!
//! The central quantity is the ratio rule: for an effect family `{E_j}` with
//! total `T` and a generalized state `rho`,
//!
//! ```text
//! p_j = Tr(rho E_j) / Tr(rho T)
//! ```
//!
//! Both traces are taken from the raw state with no pre-normalization, so
//! scale invariance in `rho` (and in the family) is a checked property rather
//! than an implementation shortcut. For a POVM the denominator is `Tr rho`
//! and the rule collapses to the familiar affine map; for an oblique frame
//! and a pure state it reproduces the coefficient form
//! `|c_j|^2 / sum_k |c_k|^2`.

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::observable::{EffectFamily, ObliqueFrame, Povm};
use crate::rng::Rng;
use crate::solve::expand_in_frame;
use crate::state::{DensityOperator, GeneralizedState};
use crate::matrix::StateVector;
use crate::DEFAULT_TOL;

/// Probability vector over outcome labels.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    labels: Vec<String>,
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    /// Validates and cleans a raw probability vector: entries must lie in
    /// `[-tol, 1+tol]` and sum to 1 within 1e-10; round-off is then clamped
    /// away and the vector renormalized exactly.
    pub fn new(labels: Vec<String>, raw: Vec<f64>) -> Result<Self> {
        if labels.len() != raw.len() {
            return Err(Error::LabelCountMismatch {
                labels: labels.len(),
                outcomes: raw.len(),
            });
        }
        for (label, &p) in labels.iter().zip(&raw) {
            if !p.is_finite() || !(-DEFAULT_TOL..=1.0 + DEFAULT_TOL).contains(&p) {
                return Err(Error::InvalidDistribution(format!(
                    "probability {p:.6e} for outcome {label:?} is outside [0, 1]"
                )));
            }
        }
        let clamped: Vec<f64> = raw.iter().map(|p| p.clamp(0.0, 1.0)).collect();
        let sum: f64 = clamped.iter().sum();
        if (sum - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {sum:.15}, not 1"
            )));
        }
        let probs = clamped.iter().map(|p| p / sum).collect();
        Ok(Self { labels, probs })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, label: &str) -> Result<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|idx| self.probs[idx])
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Coefficient-form rule for an oblique frame and a pure state:
/// `p_j = |c_j|^2 / sum_k |c_k|^2` where `c` expands `psi` over the frame.
pub fn prob_coeff(frame: &ObliqueFrame, psi: &StateVector) -> Result<OutcomeDistribution> {
    let coeffs = expand_in_frame(frame.vectors(), psi)?;
    let weights: Vec<f64> = coeffs.iter().map(|z| z.norm_sqr()).collect();
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroVector { norm: psi.norm() });
    }
    OutcomeDistribution::new(
        frame.labels().to_vec(),
        weights.iter().map(|w| w / total).collect(),
    )
}

fn real_trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    // Tr(A B) for Hermitian pairs is real; sum a_ij b_ji directly
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let mut sum = 0.0;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let term = a.get(i, j) * b.get(j, i);
            sum += term.re;
        }
    }
    Ok(sum)
}

/// Ratio-form rule `p_j = Tr(rho E_j) / Tr(rho T)`.
pub fn prob_effects(family: &EffectFamily, rho: &GeneralizedState) -> Result<OutcomeDistribution> {
    if family.dim() != rho.dim() {
        return Err(Error::DimMismatch {
            left: family.dim(),
            right: rho.dim(),
        });
    }
    let denominator = real_trace_product(rho.op(), &family.total())?;
    // a valid family has min eigenvalue of the total above
    // DEFAULT_TOL * ||T||_F, so Tr(rho T) > trace(rho) times that bound
    let floor = DEFAULT_TOL * rho.trace() * family.total().frobenius_norm();
    if denominator <= floor {
        // unreachable for validated inputs; a positive-definite total and a
        // nonzero PSD state force a positive trace pairing
        return Err(Error::DegenerateDenominator { value: denominator });
    }
    let raw: Vec<f64> = family
        .effects()
        .iter()
        .map(|e| real_trace_product(rho.op(), e).map(|n| n / denominator))
        .collect::<Result<_>>()?;
    OutcomeDistribution::new(family.labels().to_vec(), raw)
}

/// Denominator `Tr(rho T)` of the ratio rule, exposed for reports.
pub fn effects_denominator(family: &EffectFamily, rho: &GeneralizedState) -> Result<f64> {
    real_trace_product(rho.op(), &family.total())
}

/// Affine POVM rule `p_j = Tr(rho W_j)` for a density operator.
pub fn prob_povm(povm: &Povm, rho: &DensityOperator) -> Result<OutcomeDistribution> {
    if povm.dim() != rho.dim() {
        return Err(Error::DimMismatch {
            left: povm.dim(),
            right: rho.dim(),
        });
    }
    let raw: Vec<f64> = povm
        .effects()
        .iter()
        .map(|w| real_trace_product(rho.op(), w))
        .collect::<Result<_>>()?;
    OutcomeDistribution::new(povm.labels().to_vec(), raw)
}

/// Probability of a set of outcomes: the sum of member probabilities.
pub fn event_probability(
    family: &EffectFamily,
    rho: &GeneralizedState,
    event: &[String],
) -> Result<f64> {
    let dist = prob_effects(family, rho)?;
    let mut indices: Vec<usize> = event
        .iter()
        .map(|label| family.label_index(label))
        .collect::<Result<_>>()?;
    indices.sort_unstable();
    indices.dedup();
    Ok(indices.iter().map(|&idx| dist.probs()[idx]).sum())
}

/// Outcome counts from `n` independent draws of the ratio rule.
///
/// Sampling is inverse-CDF over the labels in declared order with half-open
/// cells `[c_{j-1}, c_j)`, so a seed pins the exact counts.
pub fn sample_outcomes(
    family: &EffectFamily,
    rho: &GeneralizedState,
    n: u64,
    seed: u64,
) -> Result<Vec<u64>> {
    let dist = prob_effects(family, rho)?;
    let mut cumulative: Vec<f64> = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for &p in dist.probs() {
        acc += p;
        cumulative.push(acc);
    }
    if let Some(last) = cumulative.last_mut() {
        *last = 1.0;
    }
    let mut counts = vec![0u64; dist.len()];
    let mut rng = Rng::seeded(seed);
    for _ in 0..n {
        let u = rng.uniform();
        let idx = cumulative
            .iter()
            .position(|&edge| u < edge)
            .unwrap_or(dist.len() - 1);
        counts[idx] += 1;
    }
    Ok(counts)
}
