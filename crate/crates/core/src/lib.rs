//! Numerical toolkit for q- and (p,q)-deformed Heisenberg algebras on a
//! truncated Fock space.
//!
//! Every routine is generic over a [`Real`] scalar (`f32` or `f64`); the
//! `*64` aliases at the crate root fix the double-precision instantiation
//! used by the command-line tool.

pub mod bogoliubov;
pub mod error;
pub mod fock;
pub mod hamiltonian;
pub mod heisenberg;
pub mod op;
pub mod pseudo;
pub mod scalar;
pub mod spectrum;
pub mod structure;
pub mod verify;

pub use bogoliubov::{
    build_c_ops, commutator_preservation, constraint_residuals, invert_gnbt,
    quasi_free_hamiltonian, recombined_energy, rstu, transformed_hamiltonian, ConstraintRow,
    ConstraintTable, GnbtSpec, Rstu, XPattern,
};
pub use error::{Error, Result};
pub use fock::{interior_residual, make_ladders, scaled_interior_residual, FockRep, Ladders};
pub use hamiltonian::{
    abcd, build_h_hermitian, build_h_number_form, build_h_pseudo, SwansonCoefficients,
    SwansonVariant,
};
pub use heisenberg::{
    build_xp, invert_to_ladders, solve_coefficients, verify_ha_residuals, CoefficientQuadruple,
    HaResiduals, XPPair,
};
pub use op::{DenseOp, DiagonalOp};
pub use pseudo::{
    eta_recurrence_check, hermiticity_residual, pseudo_adjoint_residual, tilde_hamiltonian,
    tilde_operators, EtaFactor, EtaKind, QuadraticExponent,
};
pub use scalar::Real;
pub use spectrum::{
    admissible_interval, bisect, branch_range, case_b_roots, energy, energy_with, epsilon_case_b,
    epsilon_for, epsilon_from_coefficients, ground_state_energy, r_and_epsilon_case_a,
    spectrum_table, spectrum_table_with, valid_branches, vw_coefficients, MonotonicitySummary,
    SpectrumBranch, SpectrumRow, SpectrumTable, TermFilter,
};
pub use structure::{
    arik_coon, hg_functions, hg_functions_pq, phi_factorial, phi_pq, phi_q, qp_number,
    DeformationParams, StructureFunction,
};
pub use verify::{
    run_verification, CheckEntry, CheckStatus, Provenance, VerificationReport, VerifyConfig,
};

pub type DenseOp64 = DenseOp<f64>;
pub type DiagonalOp64 = DiagonalOp<f64>;
pub type FockRep64 = FockRep<f64>;
pub type DeformationParams64 = DeformationParams<f64>;
pub type StructureFunction64 = StructureFunction<f64>;
