//! Exact common eigenvectors and common invariant subspaces of finite
//! families of linear operators over Q and GF(p), together with the
//! combinatorial machinery and brute-force oracles used to check Helly-type
//! statements about them.

pub mod budget;
pub mod error;
pub mod extremal;
pub mod field;
pub mod harness;
pub mod invariant;
pub mod matrix;
pub mod poly;
pub mod set_family;
pub mod spectra;
pub mod subspace;

pub use budget::Budget;
pub use error::{Error, Result};
pub use extremal::{
    build_even_family, build_family, build_odd_family, verify_sharpness, SharpnessReport,
};
pub use field::{FieldSpec, Scalar};
pub use harness::{
    generate_family, helly_check_eigenvectors, helly_check_invariant, HellyReport, Strategy,
};
pub use invariant::{
    brute_force_common_invariant, common_invariant_via_theorem4, operator_family_linear_basis,
    CommonInvariantCertificate,
};
pub use matrix::{Eigenpair, Matrix, Rref};
pub use poly::Polynomial;
pub use set_family::{
    exhaustive_verify_bound, extremal_family, find_redundant_union_witness, lemma_condition_holds,
    SetFamily,
};
pub use spectra::{
    brute_force_common_eigenvectors, common_eigen_refinement, construct_from_leave_one_out,
    has_common_eigenvector, CommonEigenLine, LeaveOneOutCertificate, LeaveOneOutConstruction,
    NamedOperator, OperatorFamily,
};
pub use subspace::Subspace;
