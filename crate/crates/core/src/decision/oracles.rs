//! Closed-form characterizations on the slices `c = 0` and `b = c = 0`.
//!
//! These are written clause by clause from the published statements and share
//! nothing with the general classifier beyond the parameter type and `p*`, so
//! they serve as independent cross-checks.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{sobolev_conjugate, EmbeddingParams, ParamError};
use crate::rational::{one, ExtendedReal, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    InvalidParams(#[from] ParamError),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Outcome of a closed-form slice characterization, naming the clause that
/// fired (e.g. `"ii-2"`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub holds: bool,
    pub clause: Option<String>,
}

impl OracleVerdict {
    fn by(clause: &str) -> Self {
        Self {
            holds: true,
            clause: Some(clause.to_string()),
        }
    }

    fn no() -> Self {
        Self {
            holds: false,
            clause: None,
        }
    }
}

/// Embedding into unweighted `L^r` (`c = 0`), requires `r >= 1`.
pub fn decide_c_zero_th17(params: &EmbeddingParams) -> Result<OracleVerdict, OracleError> {
    params.validate()?;
    if !params.c.is_zero() {
        return Err(OracleError::PreconditionViolated("c must be 0".into()));
    }
    if params.r < one() {
        return Err(OracleError::PreconditionViolated("r must be >= 1".into()));
    }
    let EmbeddingParams { a, b, p, r, .. } = params;
    let n = params.n();
    if !a.is_positive() {
        return Ok(OracleVerdict::no());
    }
    let bracket = one() / &n + one() / r - one() / p;
    let big_b = &n * p * &bracket;
    let big_b3 = a * r * p * &bracket;
    let n_over_r = &n / r;
    let p_star = sobolev_conjugate(p, params.dim);

    if r < p {
        if a < &n_over_r && b > &big_b {
            return Ok(OracleVerdict::by("i-1"));
        }
        if a > &n_over_r && b < &big_b {
            return Ok(OracleVerdict::by("i-2"));
        }
        return Ok(OracleVerdict::no());
    }
    if p <= r && p_star.ge_q(r) {
        if a < &n_over_r && b >= &big_b {
            return Ok(OracleVerdict::by("ii-1"));
        }
        if a > &n_over_r && b <= &big_b {
            return Ok(OracleVerdict::by("ii-2"));
        }
        if a == &n_over_r && b == &big_b {
            return Ok(OracleVerdict::by("ii-3"));
        }
        return Ok(OracleVerdict::no());
    }
    if p < &n && p_star.finite().is_some_and(|ps| r > ps) {
        if a < &n_over_r && b >= &big_b3 {
            return Ok(OracleVerdict::by("iii-1"));
        }
        if a > &n_over_r && b <= &big_b3 {
            return Ok(OracleVerdict::by("iii-2"));
        }
        if a == &n_over_r && b == &big_b {
            return Ok(OracleVerdict::by("iii-3"));
        }
    }
    Ok(OracleVerdict::no())
}

/// Embedding into unweighted `L^r` with unweighted gradient (`b = c = 0`).
pub fn decide_b_zero_cor18(params: &EmbeddingParams) -> Result<OracleVerdict, OracleError> {
    params.validate()?;
    if !params.b.is_zero() || !params.c.is_zero() {
        return Err(OracleError::PreconditionViolated("b and c must be 0".into()));
    }
    if params.r < one() {
        return Err(OracleError::PreconditionViolated("r must be >= 1".into()));
    }
    let EmbeddingParams { a, p, r, .. } = params;
    let n = params.n();
    if !a.is_positive() {
        return Ok(OracleVerdict::no());
    }
    let n_over_r: Q = &n / r;
    let p_star = sobolev_conjugate(p, params.dim);
    if p_star.gt_q(r) && a > &n_over_r {
        return Ok(OracleVerdict::by("i"));
    }
    if let ExtendedReal::Finite(ps) = &p_star {
        if p < &n && r == ps {
            return Ok(OracleVerdict::by("ii"));
        }
        if p < &n && r > ps && a < &n_over_r {
            return Ok(OracleVerdict::by("iii"));
        }
    }
    Ok(OracleVerdict::no())
}
