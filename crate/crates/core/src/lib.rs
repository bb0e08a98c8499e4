//! Exact classification and numerical checking of weighted Sobolev embeddings
//! `W^{1,(∞,p)}_{a,b}(R^N \ {0}) -> L^r(R^N; |x|^c dx)`.

pub mod decision;
pub mod params;
pub mod quad;
pub mod rational;
pub mod testfun;
pub mod verify;

pub use decision::{
    case_predicates, decide_b_zero_cor18, decide_c_zero_th17, decide_embedding, necessity_failure, Case, Equation,
    FailureReason, FailureTag, InequalityKind, InequalitySpec, OracleError, OracleVerdict, Verdict,
};
pub use params::{
    derive, kelvin_dual, side_config, sobolev_conjugate, validate, DerivedQuantities, EmbeddingParams, ParamError,
    Side, SideConfig, SideTag, StarQuantities,
};
pub use quad::{
    integrate_power_weighted, membership_norms, membership_norms_separable, scaling_exponents, sphere_area,
    weighted_lr_norm, weighted_lr_norm_on, weighted_sup_norm, DivergenceCertificate, LogRange, NormTriple, QuadResult,
    QuadStatus, RadialFn, ScalingExponents,
};
pub use rational::{format_rational, parse_rational, ExtendedReal, ParseRationalError, Q};
pub use testfun::{AngularFactor, End, Expansion, ProfileError, RadialProfile, SeparableFunction};
pub use verify::{
    auto_family, best_constant_estimate, hardy_check, lemma14_identity_check, lemma5_check, multiplicative_ratio,
    refute, scale_invariance_check, symmetrization_check, FamilyKind, Mechanism, NamedProfile, RatioReport,
    RefutationEvidence, VerifyError,
};
