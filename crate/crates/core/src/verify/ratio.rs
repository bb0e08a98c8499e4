//! Multiplicative ratios, scale-invariance reports and best-constant estimates.

use std::str::FromStr;

use num::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{NormComponent, VerifyError};
use crate::decision::{decide_embedding, InequalitySpec};
use crate::params::EmbeddingParams;
use crate::quad::{membership_norms, NormTriple, QuadResult};
use crate::rational::{q, serde_q, to_f64, Q};
use crate::testfun::RadialProfile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedProfile {
    pub id: String,
    pub profile: RadialProfile,
}

impl NamedProfile {
    pub fn new(id: impl Into<String>, profile: RadialProfile) -> Self {
        Self { id: id.into(), profile }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Auto,
    LogBump,
    CutoffPower,
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(FamilyKind::Auto),
            "log-bump" | "log_bump" => Ok(FamilyKind::LogBump),
            "cutoff-power" | "cutoff_power" => Ok(FamilyKind::CutoffPower),
            other => Err(format!(
                "unknown family '{other}' (expected auto, log-bump or cutoff-power)"
            )),
        }
    }
}

fn checked(r: &QuadResult, which: NormComponent) -> Result<f64, VerifyError> {
    if r.is_divergent() {
        Err(VerifyError::NormDivergent(which))
    } else if !r.is_converged() {
        Err(VerifyError::NormNotConverged(which))
    } else {
        Ok(r.value)
    }
}

/// `target / (grad^θ · sup^{1-θ})` from precomputed norms.
pub fn ratio_from_norms(norms: &NormTriple, theta: f64) -> Result<f64, VerifyError> {
    let target = checked(&norms.target_norm, NormComponent::Target)?;
    let sup = checked(&norms.sup_norm, NormComponent::Sup)?;
    let grad = checked(&norms.grad_norm, NormComponent::Grad)?;
    if (theta > 0.0 && grad == 0.0) || (theta < 1.0 && sup == 0.0) {
        return Err(VerifyError::DegenerateProfile);
    }
    let mut log = target.ln();
    if theta != 0.0 {
        log -= theta * grad.ln();
    }
    if theta != 1.0 {
        log -= (1.0 - theta) * sup.ln();
    }
    Ok(log.exp())
}

/// `||u||_{c,r} / (||∇u||_{b,p}^θ · || |x|^a u ||_∞^{1-θ})`.
pub fn multiplicative_ratio(
    u: &RadialProfile,
    params: &EmbeddingParams,
    theta: &Q,
    tol: f64,
) -> Result<f64, VerifyError> {
    params.validate()?;
    ratio_from_norms(&membership_norms(u, params, tol), to_f64(theta))
}

/// `{10^-k, ..., 10^k}`.
pub fn lambda_grid(decades: u32) -> Vec<f64> {
    let k = i32::try_from(decades).unwrap_or(i32::MAX);
    (-k..=k).map(|e| 10f64.powi(e)).collect()
}

/// Test profiles adapted to the tuple: log-bumps, which always have finite
/// norms, and cutoff powers whose exponent clears every integrability
/// threshold at the singular end.
pub fn auto_family(params: &EmbeddingParams, kind: FamilyKind) -> Vec<NamedProfile> {
    let mut out = Vec::new();
    if matches!(kind, FamilyKind::Auto | FamilyKind::LogBump) {
        let m = (&params.b - &params.p + params.n()) / &params.p;
        out.push(NamedProfile::new(
            "log_bump_sup_weight",
            RadialProfile::product(vec![
                RadialProfile::power(-params.a.clone()),
                RadialProfile::log_bump(0.0, 1.0),
            ]),
        ));
        out.push(NamedProfile::new(
            "log_bump_grad_weight",
            RadialProfile::product(vec![RadialProfile::power(-m), RadialProfile::log_bump(0.7, 0.5)]),
        ));
        out.push(NamedProfile::new(
            "log_bump_wide",
            RadialProfile::product(vec![RadialProfile::power(q(1, 3)), RadialProfile::log_bump(-0.4, 2.5)]),
        ));
    }
    if matches!(kind, FamilyKind::Auto | FamilyKind::CutoffPower) && !params.a.is_zero() {
        let n = params.n();
        let thresholds = [
            -params.a.clone(),
            (&params.p - &params.b - &n) / &params.p,
            -(&params.c + &n) / &params.r,
        ];
        let positive = params.a.is_positive();
        let edge = if positive {
            thresholds.iter().max()
        } else {
            thresholds.iter().min()
        }
        .cloned()
        .expect("three thresholds");
        for (label, offset) in [("near", q(1, 4)), ("far", q(3, 4))] {
            let (alpha, window) = if positive {
                (&edge + &offset, RadialProfile::Cutoff)
            } else {
                (&edge - &offset, RadialProfile::OneMinusCutoff)
            };
            let side = if positive { "cutoff" } else { "one_minus_cutoff" };
            out.push(NamedProfile::new(
                format!("{side}_power_{label}"),
                RadialProfile::product(vec![RadialProfile::power(alpha), window]),
            ));
        }
    }
    out
}

/// `ζ t^α` for `α` on an evenly spaced grid of `n` points in `[-2/5, 2]`.
/// Grids with `n = 2^j + 1` are nested.
pub fn sobolev_slice_family(n: usize) -> Vec<NamedProfile> {
    let n = n.max(1);
    let lo = q(-2, 5);
    let span = q(12, 5);
    (0..n)
        .map(|i| {
            let alpha = if n == 1 {
                lo.clone()
            } else {
                &lo + &span
                    * Q::new(
                        i64::try_from(i).unwrap_or(0).into(),
                        i64::try_from(n - 1).unwrap_or(1).into(),
                    )
            };
            NamedProfile::new(
                format!("cutoff_power_{}", crate::rational::format_rational(&alpha)),
                RadialProfile::product(vec![RadialProfile::power(alpha), RadialProfile::Cutoff]),
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioEntry {
    pub profile_id: String,
    pub lambda: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpread {
    pub profile_id: String,
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedProfile {
    pub profile_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub params: EmbeddingParams,
    #[serde(with = "serde_q")]
    pub theta: Q,
    pub theta_used: f64,
    pub inequality: Option<InequalitySpec>,
    pub ratios: Vec<RatioEntry>,
    pub max_ratio: f64,
    /// Largest per-profile `max/min` ratio over the λ grid.
    pub scale_invariance_spread: f64,
    pub spreads: Vec<ProfileSpread>,
    pub excluded: Vec<ExcludedProfile>,
}

impl RatioReport {
    pub fn invariant_within(&self, tolerance: f64) -> bool {
        self.spreads.iter().all(|s| s.spread <= 1.0 + tolerance)
    }
}

fn holding_spec(params: &EmbeddingParams) -> Result<InequalitySpec, VerifyError> {
    let verdict = decide_embedding(params)?;
    match verdict.inequality {
        Some(spec) if verdict.holds => Ok(spec),
        _ => Err(VerifyError::EmbeddingFails),
    }
}

/// Ratios of `u(λ·)` at the θ of the holding inequality.
pub fn scale_invariance_check(
    params: &EmbeddingParams,
    profiles: &[NamedProfile],
    lambdas: &[f64],
    tol: f64,
) -> Result<RatioReport, VerifyError> {
    let spec = holding_spec(params)?;
    let mut report = scale_invariance_check_with_theta(params, &spec.theta, profiles, lambdas, tol)?;
    report.inequality = Some(spec);
    Ok(report)
}

/// Same as [`scale_invariance_check`] with an arbitrary θ and no requirement
/// that the embedding holds.
pub fn scale_invariance_check_with_theta(
    params: &EmbeddingParams,
    theta: &Q,
    profiles: &[NamedProfile],
    lambdas: &[f64],
    tol: f64,
) -> Result<RatioReport, VerifyError> {
    params.validate()?;
    if profiles.is_empty() {
        return Err(VerifyError::EmptyFamily);
    }
    let theta_f = to_f64(theta);
    let jobs: Vec<(usize, usize)> = (0..profiles.len())
        .flat_map(|i| (0..lambdas.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<f64, VerifyError>> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let scaled = RadialProfile::scale(lambdas[j], profiles[i].profile.clone());
            ratio_from_norms(&membership_norms(&scaled, params, tol), theta_f)
        })
        .collect();

    let mut ratios = Vec::new();
    let mut spreads = Vec::new();
    let mut excluded = Vec::new();
    for (i, named) in profiles.iter().enumerate() {
        let row = &results[i * lambdas.len()..(i + 1) * lambdas.len()];
        if let Some(Err(e)) = row.iter().find(|r| r.is_err()) {
            excluded.push(ExcludedProfile {
                profile_id: named.id.clone(),
                reason: e.to_string(),
            });
            continue;
        }
        let values: Vec<f64> = row.iter().map(|r| *r.as_ref().expect("checked")).collect();
        let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
        spreads.push(ProfileSpread {
            profile_id: named.id.clone(),
            spread: if values.is_empty() { 1.0 } else { hi / lo },
        });
        ratios.extend(values.iter().zip(lambdas).map(|(&ratio, &lambda)| RatioEntry {
            profile_id: named.id.clone(),
            lambda,
            ratio,
        }));
    }
    let max_ratio = ratios.iter().map(|e| e.ratio).fold(0.0, f64::max);
    let scale_invariance_spread = spreads.iter().map(|s| s.spread).fold(1.0, f64::max);
    Ok(RatioReport {
        params: params.clone(),
        theta: theta.clone(),
        theta_used: theta_f,
        inequality: None,
        ratios,
        max_ratio,
        scale_invariance_spread,
        spreads,
        excluded,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestConstant {
    /// Largest ratio found: a lower bound on the optimal constant.
    pub estimate: f64,
    pub argmax: String,
    pub evaluated: usize,
    pub excluded: Vec<ExcludedProfile>,
}

/// Maximum multiplicative ratio over a family.
pub fn best_constant_estimate(
    params: &EmbeddingParams,
    family: &[NamedProfile],
    tol: f64,
) -> Result<BestConstant, VerifyError> {
    let spec = holding_spec(params)?;
    if family.is_empty() {
        return Err(VerifyError::EmptyFamily);
    }
    let theta = to_f64(&spec.theta);
    let values: Vec<Result<f64, VerifyError>> = family
        .par_iter()
        .map(|named| ratio_from_norms(&membership_norms(&named.profile, params, tol), theta))
        .collect();
    let mut best: Option<(f64, &str)> = None;
    let mut excluded = Vec::new();
    let mut evaluated = 0;
    for (named, value) in family.iter().zip(values) {
        match value {
            Ok(v) => {
                evaluated += 1;
                if best.is_none_or(|(b, _)| v > b) {
                    best = Some((v, &named.id));
                }
            }
            Err(e) => excluded.push(ExcludedProfile {
                profile_id: named.id.clone(),
                reason: e.to_string(),
            }),
        }
    }
    let (estimate, argmax) = best.ok_or(VerifyError::EmptyFamily)?;
    Ok(BestConstant {
        estimate,
        argmax: argmax.to_string(),
        evaluated,
        excluded,
    })
}
