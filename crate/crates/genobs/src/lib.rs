//! Generalized quantum observables in finite dimension.
//!
//! A POVM is a family of positive operators summing to the identity. This
//! crate works with the wider class where the total `E(X) = sum_j E_j` is
//! merely positive definite, together with the ratio-form probability rule
//! `p_j = Tr(rho E_j) / Tr(rho E(X))` over nonnegative nonzero states of any
//! trace. Such families arise from bases of normalized but non-orthogonal
//! vectors ("oblique frames") via biorthogonal projectors, and their
//! probability maps are generally nonlinear in the state.
//!
//! The crate provides:
//!
//! * the linear-algebra substrate ([`matrix`], [`eig`], [`solve`]),
//! * states and observables ([`state`], [`observable`]),
//! * all probability maps plus a deterministic sampler ([`born`]),
//! * a decision procedure for whether a family's probability map is
//!   realizable by some POVM, with an explicit POVM or an affinity-violation
//!   witness ([`represent`]),
//! * transition-matrix construction and double-stochasticity tests
//!   ([`transition`]),
//! * a JSON document format shared by the CLI and the browser demo
//!   ([`envelope`]).

pub mod born;
pub mod eig;
pub mod envelope;
pub mod error;
pub mod matrix;
pub mod observable;
pub mod represent;
pub mod rng;
pub mod solve;
pub mod state;
pub mod transition;

/// Default relative tolerance for all numeric checks, applied against
/// `max(1, scale)` of the quantity under test.
pub const DEFAULT_TOL: f64 = 1e-10;

pub use born::{
    event_probability, prob_coeff, prob_effects, prob_povm, sample_outcomes, OutcomeDistribution,
};
pub use eig::{eig_hermitian, is_psd, HermitianEigensystem};
pub use error::{Error, Result};
pub use matrix::{hs_inner, ComplexMatrix, StateVector};
pub use observable::{
    frame_effects, frame_projectors, pvm_from_orthonormal, EffectFamily, ObliqueFrame,
    ObliqueProjector, Povm, Pvm,
};
pub use represent::{
    decide, find_affinity_witness, reconstruct_candidate, verify_candidate, AffinityWitness,
    RepresentabilityVerdict,
};
pub use solve::expand_in_frame;
pub use state::{
    pure_state, random_density, tomographic_frame, DensityOperator, GeneralizedState,
};
pub use transition::{frame_transition, is_doubly_stochastic, transition_matrix, TransitionMatrix};
