//! Exact stratification of quantum coordinate rings.
//!
//! Given an n×n multiplicatively antisymmetric matrix of commutation scalars,
//! this crate computes — in exact integer arithmetic — the stratified
//! description of the associated quantum affine space: for every subset of
//! coordinates, the radical sublattice of the induced bicharacter, the
//! dimensions of the corresponding stratum, the symbolic generators of the
//! ideals lying over it, and the cocycle data needed to split the pairing.
//! A small symbolic layer renders the results deterministically as text or
//! JSON.

pub mod bicharacter;
pub mod error;
pub(crate) mod exec;
pub mod feasibility;
pub mod input;
pub mod lattice;
pub mod matrix;
pub mod quotient;
pub mod render;
pub mod report;
pub mod scalars;
pub mod selftest;
pub(crate) mod serde_util;
pub mod strata;
pub mod twist;

pub use bicharacter::{Bicharacter, HypothesisReport, QMatrix, SqrtBicharacter};
pub use error::{Error, Result};
pub use feasibility::{bichar_feasibility, FeasibilityOutcome};
pub use input::{parse_lambda, parse_problem, parse_rational_point, Problem, ProblemSource, ProblemSpec};
pub use lattice::{Lattice, QuotientShape};
pub use matrix::{smith_normal_form, IntMatrix, SmithDecomposition};
pub use quotient::{
    closed_form_oracle, ordered_form, phi_relabel, plain_mul, psi_generators, twisted_mul,
    BasisKind, Binomial, ClosedForm, IdealPresentation, LambdaEntry, PhiDirection,
    PresentationForm, TwistedTerm,
};
pub use report::{analyze, AnalysisReport, StratumRecord, TwistSection};
pub use scalars::{GroupElement, HalfElement, ScalarGroup, SymbolicCoefficient};
pub use selftest::{run_selftest, SelfTestReport, SuiteOutcome};
pub use strata::{
    compatibility_check, fiber_equivalent, stratify, stratify_seq, stratum_for, FiberVerdict,
    PointInStratum, Stratum, TorusSubgroup,
};
pub use twist::{
    pullback_bicharacter, twist_hypothesis_check, GradedPresentation, PullbackResult,
};
