use serde::{Deserialize, Serialize};
use sobolev_core::rational::{serde_opt_q, serde_q};
use sobolev_core::{
    decide_embedding, derive, Case, EmbeddingParams, Equation, ExtendedReal, FailureReason, InequalityKind, ParamError,
    Q,
};

/// Inequality attached to a holding verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityEcho {
    pub equation: Equation,
    pub kind: InequalityKind,
    #[serde(with = "serde_q")]
    pub theta: Q,
}

/// Verdict plus the derived quantities, with every rational as a string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub params: EmbeddingParams,
    pub holds: bool,
    pub case_label: Option<Case>,
    pub failure_reason: Option<FailureReason>,
    #[serde(with = "serde_q")]
    pub c0: Q,
    #[serde(with = "serde_q")]
    pub c1: Q,
    #[serde(with = "serde_opt_q", default, skip_serializing_if = "Option::is_none")]
    pub theta_c: Option<Q>,
    pub p_star: ExtendedReal,
    #[serde(with = "serde_opt_q", default, skip_serializing_if = "Option::is_none")]
    pub c_star1: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inequality: Option<InequalityEcho>,
}

impl VerdictRecord {
    pub fn decide(params: &EmbeddingParams) -> Result<Self, ParamError> {
        let verdict = decide_embedding(params)?;
        let d = derive(params);
        Ok(Self {
            params: params.clone(),
            holds: verdict.holds,
            case_label: verdict.case_label,
            failure_reason: verdict.failure,
            c0: d.c0,
            c1: d.c1,
            theta_c: d.theta_c,
            p_star: d.p_star,
            c_star1: d.star.map(|s| s.c_star1),
            inequality: verdict.inequality.map(|spec| InequalityEcho {
                equation: spec.equation,
                kind: spec.kind,
                theta: spec.theta,
            }),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Multi-line summary for terminals.
    pub fn human(&self) -> String {
        use sobolev_core::format_rational as f;
        let p = &self.params;
        let mut out = format!(
            "N={} a={} b={} c={} p={} r={}\n",
            p.dim,
            f(&p.a),
            f(&p.b),
            f(&p.c),
            f(&p.p),
            f(&p.r)
        );
        if self.holds {
            let case = self.case_label.map(|c| c.roman()).unwrap_or("?");
            out.push_str(&format!("embedding holds (case {case})\n"));
        } else {
            let tag = self.failure_reason.as_ref().map(|r| r.tag.as_str()).unwrap_or("?");
            out.push_str(&format!("embedding fails: {tag}\n"));
            if let Some(k) = self.failure_reason.as_ref().and_then(|r| r.scaling_exponent_k.as_ref()) {
                out.push_str(&format!("scaling exponent k = {}\n", f(k)));
            }
        }
        out.push_str(&format!(
            "c0 = {}, c1 = {}, p* = {}\n",
            f(&self.c0),
            f(&self.c1),
            self.p_star
        ));
        if let Some(t) = &self.theta_c {
            out.push_str(&format!("theta_c = {}\n", f(t)));
        }
        if let Some(c) = &self.c_star1 {
            out.push_str(&format!("c*1 = {}\n", f(c)));
        }
        if let Some(ineq) = &self.inequality {
            out.push_str(&format!(
                "inequality {:?} ({:?}), theta = {}\n",
                ineq.equation,
                ineq.kind,
                f(&ineq.theta)
            ));
        }
        out
    }
}
