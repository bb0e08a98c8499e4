//! Parameter tuples and their exactly derived quantities.
//!
//! An [`EmbeddingParams`] value `(N, a, b, c, p, r)` asks whether the space of
//! functions on `R^N \ {0}` with `|x|^a u` bounded and `|x|^{b/p} ∇u` in `L^p`
//! embeds continuously into `L^r(R^N; |x|^c dx)`. Everything in this module is
//! exact rational arithmetic.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{in_closed, one, qi, serde_q, strictly_between, ExtendedReal, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },
}

/// The tuple `(N, a, b, c, p, r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmbeddingParams {
    pub dim: u32,
    #[serde(with = "serde_q")]
    pub a: Q,
    #[serde(with = "serde_q")]
    pub b: Q,
    #[serde(with = "serde_q")]
    pub c: Q,
    #[serde(with = "serde_q")]
    pub p: Q,
    #[serde(with = "serde_q")]
    pub r: Q,
}

impl EmbeddingParams {
    pub fn new(dim: u32, a: Q, b: Q, c: Q, p: Q, r: Q) -> Self {
        Self { dim, a, b, c, p, r }
    }

    /// Integer-valued convenience constructor, mostly for tests.
    pub fn from_ints(dim: u32, a: i64, b: i64, c: i64, p: i64, r: i64) -> Self {
        Self::new(dim, qi(a), qi(b), qi(c), qi(p), qi(r))
    }

    pub fn n(&self) -> Q {
        qi(i64::from(self.dim))
    }

    pub fn with_c(&self, c: Q) -> Self {
        Self { c, ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        validate(self)
    }
}

pub fn validate(params: &EmbeddingParams) -> Result<(), ParamError> {
    let invalid = |field, reason: &str| {
        Err(ParamError::InvalidParams {
            field,
            reason: reason.to_string(),
        })
    };
    if params.dim == 0 {
        return invalid("dim", "dimension must be a positive integer");
    }
    if params.p < one() {
        return invalid("p", "p must satisfy 1 <= p < inf");
    }
    if !params.r.is_positive() {
        return invalid("r", "r must be positive");
    }
    if params.dim >= 2 && params.r < one() {
        return invalid(
            "r",
            "r must be >= 1 when dim >= 2 (0 < r < 1 is only allowed for dim = 1)",
        );
    }
    Ok(())
}

/// `p* = Np/(N-p)` for `p < N`, otherwise `+∞`.
pub fn sobolev_conjugate(p: &Q, dim: u32) -> ExtendedReal {
    let n = qi(i64::from(dim));
    if p < &n {
        ExtendedReal::Finite(&n * p / (&n - p))
    } else {
        ExtendedReal::PosInfinity
    }
}

/// Position of `ap - N` and `b - p` relative to `-N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// Both strictly on the same side of `-N`, i.e. `a(b-p+N) > 0`.
    SameSideStrict,
    /// Same side with at least one of them equal to `-N`.
    SameSideWithBoundary,
    /// Strictly on opposite sides, i.e. `a(b-p+N) < 0`.
    OppositeStrict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SideTag {
    SameSideStrict,
    SameSideWithBoundary,
    OppositeStrict,
    DegenerateEqual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideConfig {
    pub side: Side,
    /// `ap - N = b - p`.
    pub degenerate_equal: bool,
}

impl SideConfig {
    /// Single tag view; `DegenerateEqual` wins when it co-occurs.
    pub fn tag(&self) -> SideTag {
        if self.degenerate_equal {
            return SideTag::DegenerateEqual;
        }
        match self.side {
            Side::SameSideStrict => SideTag::SameSideStrict,
            Side::SameSideWithBoundary => SideTag::SameSideWithBoundary,
            Side::OppositeStrict => SideTag::OppositeStrict,
        }
    }

    /// Same side of `-N`, boundary allowed.
    pub fn same_side(&self) -> bool {
        self.side != Side::OppositeStrict
    }
}

pub fn side_config(params: &EmbeddingParams) -> SideConfig {
    let EmbeddingParams { a, b, p, .. } = params;
    let n = params.n();
    let sign = (a * (b - p + &n)).signum();
    let side = if sign.is_positive() {
        Side::SameSideStrict
    } else if sign.is_negative() {
        Side::OppositeStrict
    } else {
        Side::SameSideWithBoundary
    };
    SideConfig {
        side,
        degenerate_equal: a * p - &n == b - p,
    }
}

/// Quantities attached to the power substitution `u -> |u|^{r/p*}`, defined
/// only when `p < N` and `r > p*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarQuantities {
    #[serde(with = "serde_q")]
    pub a_star: Q,
    #[serde(with = "serde_q")]
    pub b_star: Q,
    #[serde(with = "serde_q")]
    pub c_star1: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedQuantities {
    pub p_star: ExtendedReal,
    pub c0: Q,
    pub c1: Q,
    /// `(c - c0)/(c1 - c0)`, present iff `c0 != c1` and `c` is in the closed
    /// interval between them.
    pub theta_c: Option<Q>,
    /// `θ` of the point `-N`, present iff `-N` lies strictly between `c0` and `c1`.
    pub theta_minus_n: Option<Q>,
    pub side: SideConfig,
    pub star: Option<StarQuantities>,
}

impl DerivedQuantities {
    /// `θ` of an arbitrary point, when `c0 != c1`.
    pub fn theta_of(&self, c: &Q) -> Option<Q> {
        (self.c0 != self.c1).then(|| (c - &self.c0) / (&self.c1 - &self.c0))
    }

    /// `θ_c <= p*/r`, vacuous when `p* = +∞` or `θ_c` is absent.
    pub fn theta_within_critical(&self, r: &Q) -> bool {
        match (&self.theta_c, &self.p_star) {
            (Some(theta), ExtendedReal::Finite(ps)) => theta <= &(ps / r),
            _ => true,
        }
    }
}

pub fn derive(params: &EmbeddingParams) -> DerivedQuantities {
    let EmbeddingParams { a, b, c, p, r, .. } = params;
    let n = params.n();
    let p_star = sobolev_conjugate(p, params.dim);
    let c0 = a * r - &n;
    let c1 = r * (b - p + &n) / p - &n;
    let distinct = c0 != c1;
    let theta_c = (distinct && in_closed(c, &c0, &c1)).then(|| (c - &c0) / (&c1 - &c0));
    let minus_n = -n.clone();
    let theta_minus_n = (distinct && strictly_between(&minus_n, &c0, &c1)).then(|| (&minus_n - &c0) / (&c1 - &c0));
    let star = match &p_star {
        ExtendedReal::Finite(ps) if r > ps => {
            let ratio = r / ps;
            let a_star = a * &ratio;
            let b_star = b + a * p * (&ratio - one());
            let weight = ps / r;
            let c_star1 = &weight * &c1 + (one() - &weight) * &c0;
            Some(StarQuantities {
                a_star,
                b_star,
                c_star1,
            })
        }
        _ => None,
    };
    DerivedQuantities {
        p_star,
        c0,
        c1,
        theta_c,
        theta_minus_n,
        side: side_config(params),
        star,
    }
}

/// Parameter image under the inversion `x -> x/|x|^2`:
/// `(a, b, c) -> (-a, 2p - 2N - b, -2N - c)`.
pub fn kelvin_dual(params: &EmbeddingParams) -> EmbeddingParams {
    let n = params.n();
    let two = qi(2);
    EmbeddingParams {
        dim: params.dim,
        a: -params.a.clone(),
        b: &two * &params.p - &two * &n - &params.b,
        c: -(&two * &n) - &params.c,
        p: params.p.clone(),
        r: params.r.clone(),
    }
}

/// `k = (b-p+N)/p - a`; nonzero iff `ap - N != b - p`.
pub fn scaling_gap(params: &EmbeddingParams) -> Q {
    (&params.b - &params.p + params.n()) / &params.p - &params.a
}

/// True when `a` is zero.
pub fn a_is_zero(params: &EmbeddingParams) -> bool {
    params.a.is_zero()
}
