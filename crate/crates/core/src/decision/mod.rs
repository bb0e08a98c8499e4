//! Exact embedding verdicts.
//!
//! [`decide_embedding`] matches a tuple against the four sufficient cases and,
//! when none applies, reports the first necessity condition that rules the
//! embedding out. The two are written independently so that tests can check
//! that they partition the parameter space.

mod oracles;

pub use oracles::{decide_b_zero_cor18, decide_c_zero_th17, OracleError, OracleVerdict};

use std::fmt;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::params::{derive, scaling_gap, DerivedQuantities, EmbeddingParams, ParamError, Side};
use crate::rational::{in_closed, one, serde_opt_q, serde_q, strictly_between, ExtendedReal, Q};

/// Which sufficient case an embedding falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    #[serde(rename = "T1_i")]
    I,
    #[serde(rename = "T1_ii")]
    II,
    #[serde(rename = "T1_iii")]
    III,
    #[serde(rename = "T1_iv")]
    IV,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::I, Case::II, Case::III, Case::IV];

    pub fn roman(self) -> &'static str {
        match self {
            Case::I => "i",
            Case::II => "ii",
            Case::III => "iii",
            Case::IV => "iv",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.roman())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FailureTag {
    AZero,
    COutsideClosedInterval,
    CEqualsC0,
    T2ivBeyondMinusN,
    ThetaExceedsPStarOverR,
    C1NotContinuousForRLessP,
    T1iiiRangeViolated,
}

impl FailureTag {
    pub const ALL: [FailureTag; 7] = [
        FailureTag::AZero,
        FailureTag::COutsideClosedInterval,
        FailureTag::CEqualsC0,
        FailureTag::T2ivBeyondMinusN,
        FailureTag::ThetaExceedsPStarOverR,
        FailureTag::C1NotContinuousForRLessP,
        FailureTag::T1iiiRangeViolated,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FailureTag::AZero => "AZero",
            FailureTag::COutsideClosedInterval => "COutsideClosedInterval",
            FailureTag::CEqualsC0 => "CEqualsC0",
            FailureTag::T2ivBeyondMinusN => "T2ivBeyondMinusN",
            FailureTag::ThetaExceedsPStarOverR => "ThetaExceedsPStarOverR",
            FailureTag::C1NotContinuousForRLessP => "C1NotContinuousForRLessP",
            FailureTag::T1iiiRangeViolated => "T1iiiRangeViolated",
        }
    }
}

impl fmt::Display for FailureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureReason {
    pub tag: FailureTag,
    /// `(b-p+N)/p - a`, attached for the non-degenerate `c = c1, r < p` failure.
    #[serde(with = "serde_opt_q", default, skip_serializing_if = "Option::is_none")]
    pub scaling_exponent_k: Option<Q>,
}

impl FailureReason {
    fn plain(tag: FailureTag) -> Self {
        Self {
            tag,
            scaling_exponent_k: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InequalityKind {
    /// `||u||_{c,r} <= C ||∇u||_{b,p}^θ || |x|^a u ||_∞^{1-θ}`.
    Multiplicative,
    /// `||u||_{c,r} <= C ||∇u||_{b,p}`.
    GradientOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Equation {
    Eq8,
    Eq9,
    Eq10,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalitySpec {
    pub kind: InequalityKind,
    #[serde(with = "serde_q")]
    pub theta: Q,
    #[serde(with = "serde_q")]
    pub c_used: Q,
    pub equation: Equation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub case_label: Option<Case>,
    pub failure: Option<FailureReason>,
    pub inequality: Option<InequalitySpec>,
}

impl Verdict {
    fn holding(case: Case, inequality: InequalitySpec) -> Self {
        Self {
            holds: true,
            case_label: Some(case),
            failure: None,
            inequality: Some(inequality),
        }
    }

    fn failing(reason: FailureReason) -> Self {
        Self {
            holds: false,
            case_label: None,
            failure: Some(reason),
            inequality: None,
        }
    }

    pub fn failure_tag(&self) -> Option<FailureTag> {
        self.failure.as_ref().map(|f| f.tag)
    }
}

/// Each of the four sufficient cases evaluated on its own, in order `[i, ii, iii, iv]`.
/// None of them includes the `a != 0` requirement.
pub fn case_predicates(params: &EmbeddingParams, d: &DerivedQuantities) -> [bool; 4] {
    let EmbeddingParams { c, p, r, .. } = params;
    let minus_n = -params.n();
    let degenerate = d.side.degenerate_equal;
    let critical_ok = d.theta_within_critical(r);

    let case_i = d.side.same_side() && !degenerate && strictly_between(c, &d.c0, &d.c1) && critical_ok;
    let case_ii = d.side.side == Side::OppositeStrict && strictly_between(c, &d.c0, &minus_n) && critical_ok;
    let case_iii = p <= r && d.p_star.ge_q(r) && d.side.side == Side::SameSideStrict && c == &d.c1;
    let case_iv = matches!(&d.p_star, ExtendedReal::Finite(ps) if r > ps) && degenerate && c == &d.c1;
    [case_i, case_ii, case_iii, case_iv]
}

fn inequality_for(case: Case, params: &EmbeddingParams, d: &DerivedQuantities) -> InequalitySpec {
    match case {
        Case::IV => {
            let ps = d.p_star.finite().expect("p* is finite whenever r > p*");
            InequalitySpec {
                kind: InequalityKind::Multiplicative,
                theta: ps / &params.r,
                c_used: params.c.clone(),
                equation: Equation::Eq10,
            }
        }
        Case::III if d.side.degenerate_equal => InequalitySpec {
            kind: InequalityKind::GradientOnly,
            theta: one(),
            c_used: d.c1.clone(),
            equation: Equation::Eq9,
        },
        _ => InequalitySpec {
            kind: InequalityKind::Multiplicative,
            theta: d
                .theta_c
                .clone()
                .expect("theta_c is defined in the non-degenerate cases"),
            c_used: params.c.clone(),
            equation: Equation::Eq8,
        },
    }
}

/// The necessity conditions, checked in a fixed order; `None` means none applies.
pub fn necessity_failure(params: &EmbeddingParams) -> Option<FailureReason> {
    necessity_failure_with(params, &derive(params))
}

fn necessity_failure_with(params: &EmbeddingParams, d: &DerivedQuantities) -> Option<FailureReason> {
    let EmbeddingParams { a, b, c, p, r, .. } = params;
    let minus_n = -params.n();
    let degenerate = d.side.degenerate_equal;

    if a.is_zero() {
        return Some(FailureReason::plain(FailureTag::AZero));
    }
    if !in_closed(c, &d.c0, &d.c1) {
        return Some(FailureReason::plain(FailureTag::COutsideClosedInterval));
    }
    if !degenerate && c == &d.c0 {
        return Some(FailureReason::plain(FailureTag::CEqualsC0));
    }
    let b_minus_p = b - p;
    let beyond = (b_minus_p <= minus_n && a.is_positive()) || (b_minus_p >= minus_n && a.is_negative());
    if beyond && !strictly_between(c, &d.c0, &minus_n) {
        return Some(FailureReason::plain(FailureTag::T2ivBeyondMinusN));
    }
    if let (ExtendedReal::Finite(ps), Some(theta)) = (&d.p_star, &d.theta_c) {
        if r > ps && !degenerate && theta > &(ps / r) {
            return Some(FailureReason::plain(FailureTag::ThetaExceedsPStarOverR));
        }
    }
    if c == &d.c1 && r < p {
        return Some(FailureReason {
            tag: FailureTag::C1NotContinuousForRLessP,
            scaling_exponent_k: (!degenerate).then(|| scaling_gap(params)),
        });
    }
    let positive_side = d.side.side == Side::SameSideStrict;
    let case_iv_range = degenerate && !d.p_star.ge_q(r);
    if c == &d.c1 && positive_side && !case_iv_range && !(p <= r && d.p_star.ge_q(r)) {
        return Some(FailureReason::plain(FailureTag::T1iiiRangeViolated));
    }
    None
}

/// Classifies one tuple.
pub fn decide_embedding(params: &EmbeddingParams) -> Result<Verdict, ParamError> {
    params.validate()?;
    let d = derive(params);
    Ok(decide_with(params, &d))
}

pub(crate) fn decide_with(params: &EmbeddingParams, d: &DerivedQuantities) -> Verdict {
    if !params.a.is_zero() {
        let preds = case_predicates(params, d);
        if let Some(case) = Case::ALL.into_iter().find(|case| preds[case.index()]) {
            return Verdict::holding(case, inequality_for(case, params, d));
        }
    }
    let reason =
        necessity_failure_with(params, d).unwrap_or_else(|| FailureReason::plain(FailureTag::T1iiiRangeViolated));
    Verdict::failing(reason)
}
