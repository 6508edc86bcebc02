//! Exact algebra for spinors on quaternionic Kähler model spaces.
//!
//! The crate builds an explicit Clifford module for `R^{4m}`, the Kähler and
//! Kraines operators of the standard hyperkähler triple, splits the spinor
//! space into the joint eigenspaces `S_r^k`, and computes the constants and
//! eigenvalue bounds that follow from this splitting. Everything is generic
//! over [`Scalar`], with an exact Gaussian-rational backend and a `Complex64`
//! backend.

pub mod bounds;
pub mod clifford;
pub mod decomposition;
pub mod error;
pub mod lagrange;
pub mod matrix;
pub mod projectors;
pub mod quaternionic;
pub mod report;
pub mod scalar;
pub mod so3;
pub mod verification;

pub use bounds::{
    bound_case_a, bound_case_b, bound_report, comparison_bounds, universal_bound, BoundReport,
};
pub use clifford::{
    build_clifford_model, CliffordModel, ComplexVector, ResourceCap, DEFAULT_MAX_M,
};
pub use decomposition::{decompose, lattice_allows, Block, JointDecomposition};
pub use error::{Error, Result};
pub use lagrange::{lagrange_eigenprojectors, SpectralFamily};
pub use matrix::DenseMatrix;
pub use projectors::{
    closed_form_a, compute_a, constants_table, j_operator, verify_lemma_identities, ConstantRow,
    SpinorGeometry, Variant,
};
pub use quaternionic::{
    build_standard_triple, AdaptedComplexBasis, HyperkahlerTriple, KaehlerOperators,
};
pub use report::{CheckStatus, ReportEntry, ResidualCheck, VerificationReport};
pub use scalar::{format_rational, parse_rational, ExactScalar, Scalar};
pub use so3::{
    build_irrep, find_rotation_with_top_component, highest_weight_component, Irrep, Rotation,
};
pub use verification::{
    verify_model, verify_range, verify_so3, ModelRun, So3Options, VerifyOptions,
};
