//! Numerical evidence for and against embeddings.
//!
//! Everything here is one-sided: ratios over finite families give lower bounds
//! on constants, and refutations exhibit growth along explicit witness
//! sequences. Nothing in this module proves an inequality.

mod aux;
mod ratio;
mod refute;

pub use aux::{
    hardy_check, lemma14_identity_check, lemma5_check, symmetrization_check, HardySides, Lemma14Report, Primitive,
    SymmetrizationReport,
};
pub use ratio::{
    auto_family, best_constant_estimate, lambda_grid, multiplicative_ratio, ratio_from_norms, scale_invariance_check,
    scale_invariance_check_with_theta, sobolev_slice_family, BestConstant, ExcludedProfile, FamilyKind, NamedProfile,
    ProfileSpread, RatioEntry, RatioReport,
};
pub use refute::{refute, Mechanism, RefutationEvidence, Witness, DEFAULT_BUDGET, GROWTH_TARGET};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decision::FailureTag;
use crate::params::ParamError;
use crate::quad::integrate_panels;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormComponent {
    Sup,
    Grad,
    Target,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    InvalidParams(#[from] ParamError),
    #[error("{0:?} norm is infinite")]
    NormDivergent(NormComponent),
    #[error("{0:?} norm did not converge within the refinement budget")]
    NormNotConverged(NormComponent),
    #[error("gradient norm vanishes while theta > 0")]
    DegenerateProfile,
    #[error("profile family is empty")]
    EmptyFamily,
    #[error("embedding does not hold; use refute")]
    EmbeddingFails,
    #[error("embedding holds; nothing to refute")]
    EmbeddingHolds,
    #[error("no witness family for failure {0}")]
    NoWitness(FailureTag),
    #[error("growth target not reached within budget (growth {:.3e})", .0.growth_factor)]
    BudgetExhausted(Box<RefutationEvidence>),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// `∫_a^b f` on a smooth integrand, to relative tolerance `rel`.
pub(crate) fn gk_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel: f64) -> f64 {
    let h = (b - a) / 8.0;
    let panels: Vec<(f64, f64)> = (0..8)
        .map(|i| (a + h * f64::from(i), a + h * f64::from(i + 1)))
        .collect();
    integrate_panels(f, &panels, |v| rel * v.abs(), 40).value
}
