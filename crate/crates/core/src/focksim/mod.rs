//! Exact fixed-photon-number simulation of generalized bosons in linear
//! interferometers.
//!
//! A target unitary is decomposed into a rectangular mesh of two-mode
//! layers; deformed ("q-boson") sampling runs that same mesh with the
//! species' own ladder operators. This is one operational definition among
//! several: the unitary alone does not fix how it acts on deformed modes.
//! [`substitution_oracle`] implements the alternative obtained by
//! substituting the mode transformation into the creation operators, and the
//! two coincide for standard bosons. Outcomes follow the plain Born rule in the
//! orthonormal generalized Fock basis.

mod evolve;
mod haar;
mod mesh;
mod oracle;
pub mod rng;
mod sampling;
mod validate;

pub use evolve::{
    beamsplitter_generator, evolve, evolve_unitary, hermitian_exp, input_state, outcome_distribution, species_basis,
    StateVector,
};
pub use haar::{ginibre_matrix, haar_unitary};
pub use mesh::{clements_decompose, mesh_reconstruct, BeamsplitterLayer, MeshCircuit};
pub use oracle::{substitution_oracle, ORACLE_MAX_MODES, ORACLE_MAX_PHOTONS};
pub use sampling::{empirical_distribution, sample_outcomes, tv_distance};
pub use validate::{engine_equivalence, EquivalenceCase, EquivalenceReport, ENGINE_TV_TOLERANCE};
