//! Witness sequences showing that an embedding fails.
//!
//! Dispatch on the failure tag:
//!
//! | tag | witness | mechanism |
//! |-----|---------|-----------|
//! | `AZero` | `u = 1` | infinite target norm |
//! | `COutsideClosedInterval` | `t^{-(c+N)/r}` times ζ or `1-ζ` | infinite target norm |
//! | `CEqualsC0` | as above, on the side of `c0` | infinite target norm |
//! | `T2ivBeyondMinusN` | ζ for `a > 0`, `1-ζ` for `a < 0` | infinite target norm |
//! | `ThetaExceedsPStarOverR` | bump translated to distance `R` | unbounded ratio under translation |
//! | `C1NotContinuousForRLessP`, `k != 0` | `t^{-m} g(λ ln t)` rescaled so the sup term is negligible | unbounded ratio under scaling |
//! | `C1NotContinuousForRLessP`, `k = 0` | `t^{-a} g(λ ln t)` | unbounded ratio under log dilation |
//!
//! Infinite-target witnesses report the target norm truncated to `(ε, 1/ε)`
//! with `ε = 2^{-k}`, `k = 1, 2, 4, ...`.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::gk_adaptive;
use super::VerifyError;
use crate::decision::{decide_embedding, FailureReason, FailureTag};
use crate::params::{derive, EmbeddingParams};
use crate::quad::{membership_norms, sphere_area, weighted_lr_norm_on, LogRange, NormTriple};
use crate::rational::{serde_opt_q, to_f64, Q};
use crate::testfun::{bump, bump_derivative, counterexample_near_infinity, counterexample_near_zero, RadialProfile};

pub const GROWTH_TARGET: f64 = 1e3;
pub const DEFAULT_BUDGET: usize = 400;
const TOL: f64 = 1e-10;
/// Share of the additive norm left to the sup term after rescaling.
const SUP_SHARE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mechanism {
    InfiniteTargetNorm,
    UnboundedRatioUnderScaling,
    UnboundedRatioLogDilation,
    UnboundedRatioUnderTranslation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Truncation exponent `k`, dilation `λ` or translation distance `R`.
    pub parameter: f64,
    pub value: f64,
    /// `ln μ` of the rescaling `u(μ·)` applied to this witness.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_scale: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefutationEvidence {
    pub params: EmbeddingParams,
    pub failure: FailureReason,
    pub mechanism: Mechanism,
    pub witness_family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<RadialProfile>,
    pub witness_sequence: Vec<Witness>,
    pub growth_factor: f64,
    pub target_met: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership: Option<NormTriple>,
    #[serde(with = "serde_opt_q", default, skip_serializing_if = "Option::is_none")]
    pub scaling_exponent_k: Option<Q>,
}

impl RefutationEvidence {
    /// Growth reached, and for infinite-target evidence the membership norms
    /// are finite while the target is certified infinite.
    pub fn is_conclusive(&self) -> bool {
        let membership_ok = match (&self.mechanism, &self.membership) {
            (Mechanism::InfiniteTargetNorm, Some(m)) => m.membership_converged() && m.target_norm.is_divergent(),
            (Mechanism::InfiniteTargetNorm, None) => false,
            _ => true,
        };
        self.target_met && membership_ok
    }
}

struct Sequence {
    witnesses: Vec<Witness>,
    growth: f64,
}

/// Evaluates `value(j)` for `j = 0, 1, ...` until the growth over the first
/// witness reaches the target or the budget runs out.
fn sweep<F>(budget: usize, mut witness: F) -> Sequence
where
    F: FnMut(usize) -> Option<Witness>,
{
    let mut witnesses: Vec<Witness> = Vec::new();
    let mut growth = 1.0;
    for j in 0..budget.max(2) {
        let Some(w) = witness(j) else { break };
        witnesses.push(w);
        let (first, last) = (witnesses[0].value, witnesses[witnesses.len() - 1].value);
        growth = if first > 0.0 { last / first } else { 0.0 };
        if growth >= GROWTH_TARGET {
            break;
        }
    }
    Sequence { witnesses, growth }
}

pub fn refute(params: &EmbeddingParams, budget: usize) -> Result<RefutationEvidence, VerifyError> {
    let verdict = decide_embedding(params)?;
    let Some(failure) = verdict.failure else {
        return Err(VerifyError::EmbeddingHolds);
    };
    let d = derive(params);
    let evidence = match failure.tag {
        FailureTag::AZero => infinite_target(params, failure, RadialProfile::constant(1.0), "constant", budget),
        FailureTag::COutsideClosedInterval => {
            let below = params.c < d.c0.clone().min(d.c1.clone());
            let (u, name) = power_window(params, below);
            infinite_target(params, failure, u, name, budget)
        }
        FailureTag::CEqualsC0 => {
            let (u, name) = power_window(params, d.c0 < d.c1);
            infinite_target(params, failure, u, name, budget)
        }
        FailureTag::T2ivBeyondMinusN => {
            let (u, name) = if params.a.is_positive() {
                (RadialProfile::Cutoff, "cutoff")
            } else {
                (RadialProfile::OneMinusCutoff, "one_minus_cutoff")
            };
            infinite_target(params, failure, u, name, budget)
        }
        FailureTag::ThetaExceedsPStarOverR => {
            let theta = d.theta_c.clone().ok_or(VerifyError::NoWitness(failure.tag))?;
            translated_bump(params, failure, &theta, budget)
        }
        FailureTag::C1NotContinuousForRLessP => log_coordinates(params, failure, budget),
        FailureTag::T1iiiRangeViolated => return Err(VerifyError::NoWitness(failure.tag)),
    };
    if evidence.target_met {
        Ok(evidence)
    } else {
        Err(VerifyError::BudgetExhausted(Box::new(evidence)))
    }
}

fn power_window(params: &EmbeddingParams, near_zero: bool) -> (RadialProfile, &'static str) {
    if near_zero {
        (counterexample_near_zero(params), "power_times_cutoff")
    } else {
        (counterexample_near_infinity(params), "power_times_one_minus_cutoff")
    }
}

fn infinite_target(
    params: &EmbeddingParams,
    failure: FailureReason,
    u: RadialProfile,
    family: &str,
    budget: usize,
) -> RefutationEvidence {
    let membership = membership_norms(&u, params, 1e-8);
    let area = sphere_area(params.dim);
    let seq = sweep(budget.min(1000), |j| {
        let k = 2f64.powi(i32::try_from(j).ok()?);
        let norm = weighted_lr_norm_on(
            &u,
            &params.c,
            &params.r,
            params.dim,
            area,
            LogRange::symmetric_dyadic(k),
            TOL,
        );
        (norm.is_converged() && norm.value.is_finite()).then_some(Witness {
            parameter: k,
            value: norm.value,
            log_scale: None,
        })
    });
    RefutationEvidence {
        params: params.clone(),
        failure,
        mechanism: Mechanism::InfiniteTargetNorm,
        witness_family: family.to_string(),
        profile: Some(u),
        witness_sequence: seq.witnesses,
        growth_factor: seq.growth,
        target_met: seq.growth >= GROWTH_TARGET,
        membership: Some(membership),
        scaling_exponent_k: None,
    }
}

/// `∫_{S^{N-1}} |e - ησ|^w dσ` for `0 <= η < 1`.
fn shifted_sphere_integral(eta: f64, w: f64, dim: u32) -> f64 {
    if dim == 1 {
        return (1.0 - eta).powf(w) + (1.0 + eta).powf(w);
    }
    let m = i32::try_from(dim - 2).unwrap_or(i32::MAX);
    let f = |phi: f64| (1.0 - 2.0 * eta * phi.cos() + eta * eta).powf(0.5 * w) * phi.sin().powi(m);
    sphere_area(dim - 1) * gk_adaptive(&f, 0.0, std::f64::consts::PI, 1e-13)
}

/// Logs of the three norms of `x -> g(|x + x0|)` with `|x0| = R >= 2`.
fn translated_bump_log_norms(params: &EmbeddingParams, log_r: f64) -> (f64, f64, f64) {
    let (a, b, c) = (to_f64(&params.a), to_f64(&params.b), to_f64(&params.c));
    let (p, r) = (to_f64(&params.p), to_f64(&params.r));
    let dim = params.dim;
    let n1 = f64::from(dim) - 1.0;
    let inv_r = (-log_r).exp();
    let target = gk_adaptive(
        &|s: f64| bump(s).powf(r) * s.powf(n1) * shifted_sphere_integral(s * inv_r, c, dim),
        0.0,
        1.0,
        1e-12,
    );
    let grad = gk_adaptive(
        &|s: f64| bump_derivative(s).abs().powf(p) * s.powf(n1) * shifted_sphere_integral(s * inv_r, b, dim),
        0.0,
        1.0,
        1e-12,
    );
    // sup over |y| < 1 of |y - x0|^a g(|y|), in units of R^a
    let weighted = |s: f64| {
        let eta = s * inv_r;
        let radial = (1.0 + eta).powf(a).max((1.0 - eta).powf(a));
        (bump(s) * radial).ln()
    };
    let log_sup = (0..=2000)
        .map(|i| weighted(f64::from(i) / 2001.0))
        .fold(f64::NEG_INFINITY, f64::max);
    (
        (c * log_r + target.ln()) / r,
        (b * log_r + grad.ln()) / p,
        a * log_r + log_sup,
    )
}

fn translated_bump(params: &EmbeddingParams, failure: FailureReason, theta: &Q, budget: usize) -> RefutationEvidence {
    let th = to_f64(theta);
    let seq = sweep(budget.min(1000), |j| {
        let log_r = (f64::from(u32::try_from(j).ok()?) + 1.0) * std::f64::consts::LN_2;
        let (lt, lg, ls) = translated_bump_log_norms(params, log_r);
        let value = (lt - th * lg - (1.0 - th) * ls).exp();
        value.is_finite().then_some(Witness {
            parameter: log_r.exp(),
            value,
            log_scale: None,
        })
    });
    RefutationEvidence {
        params: params.clone(),
        failure,
        mechanism: Mechanism::UnboundedRatioUnderTranslation,
        witness_family: "translated_bump".to_string(),
        profile: None,
        witness_sequence: seq.witnesses,
        growth_factor: seq.growth,
        target_met: seq.growth >= GROWTH_TARGET,
        membership: None,
        scaling_exponent_k: None,
    }
}

/// Logs of target, gradient and sup norms of `u(x) = |x|^{-m} g(λ ln|x|)`
/// where `m = (b-p+N)/p`, so that the target weight at `c = c1` and the
/// gradient weight both reduce to `ds` in `s = ln t`.
pub(crate) fn log_bump_log_norms(params: &EmbeddingParams, lambda: f64) -> (f64, f64, f64) {
    let m = to_f64(&((&params.b - &params.p + params.n()) / &params.p));
    let k = m - to_f64(&params.a);
    let (p, r) = (to_f64(&params.p), to_f64(&params.r));
    let log_area = sphere_area(params.dim).ln();
    let target = gk_adaptive(&|x: f64| bump(x).powf(r), -1.0, 1.0, 1e-13);
    let grad = gk_adaptive(
        &|x: f64| (lambda * bump_derivative(x) - m * bump(x)).abs().powf(p),
        -1.0,
        1.0,
        1e-13,
    );
    // sup_σ of -kσ/λ + ln g(σ); the function is concave on (-1, 1)
    let h = |x: f64| -k * x / lambda + crate::testfun::log_bump(x);
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    for _ in 0..300 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if h(m1) < h(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    (
        (log_area - lambda.ln() + target.ln()) / r,
        (log_area - lambda.ln() + grad.ln()) / p,
        h(0.5 * (lo + hi)),
    )
}

fn log_coordinates(params: &EmbeddingParams, failure: FailureReason, budget: usize) -> RefutationEvidence {
    let k = crate::params::scaling_gap(params);
    let degenerate = k.is_zero();
    let kf = to_f64(&k);
    let seq = sweep(budget.min(1000), |j| {
        let lambda = 2f64.powi(-i32::try_from(j).ok()?);
        let (lt, lg, ls) = log_bump_log_norms(params, lambda);
        if degenerate {
            // T / (S + G) with S = 1
            let value = (lt - (ls.exp() + lg.exp()).ln()).exp();
            return value.is_finite().then_some(Witness {
                parameter: lambda,
                value,
                log_scale: None,
            });
        }
        // u(μ·) scales sup by μ^{-a} and both other norms by μ^{-m}; pick μ
        // with sup = SUP_SHARE · grad, so T/(S+G) = (T/G)/(1+SUP_SHARE).
        let log_mu = (SUP_SHARE.ln() + lg - ls) / kf;
        let value = (lt - lg).exp() / (1.0 + SUP_SHARE);
        value.is_finite().then_some(Witness {
            parameter: lambda,
            value,
            log_scale: Some(log_mu),
        })
    });
    let (mechanism, family) = if degenerate {
        (Mechanism::UnboundedRatioLogDilation, "log_bump_dilation")
    } else {
        (Mechanism::UnboundedRatioUnderScaling, "rescaled_log_bump_dilation")
    };
    RefutationEvidence {
        params: params.clone(),
        failure,
        mechanism,
        witness_family: family.to_string(),
        profile: None,
        witness_sequence: seq.witnesses,
        growth_factor: seq.growth,
        target_met: seq.growth >= GROWTH_TARGET,
        membership: None,
        scaling_exponent_k: (!degenerate).then_some(k),
    }
}
