//! Weighted norms of radial functions.
//!
//! Integrals `∫ t^w |f(t)|^q dt` over `(0, ∞)` are computed in the variable
//! `s = ln t`. Convergence at each end is decided exactly from the rational
//! leading exponents of the profile; beyond the extreme breakpoints the
//! integrand is a finite sum of powers and is integrated in closed form, and
//! only the middle range is handled numerically.

mod gk;
mod sup;

pub use gk::gk15;
pub(crate) use gk::integrate_panels;
pub use sup::weighted_sup_norm;

use num::Signed;
use serde::{Deserialize, Serialize};

use crate::params::EmbeddingParams;
use crate::rational::{one, qi, serde_q, to_f64, Q};
use crate::testfun::{End, Expansion, RadialProfile, SeparableFunction};

pub const DEFAULT_TOL: f64 = 1e-8;
/// Maximum bisection depth per panel.
pub const REFINEMENT_BUDGET: u32 = 30;

/// Anything that can be integrated radially: a value, its non-smooth points,
/// and its asymptotics at both ends.
pub trait RadialFn: Sync {
    fn value(&self, t: f64) -> f64;
    fn breakpoints(&self) -> Vec<f64>;
    fn expansion(&self, end: End) -> Option<Expansion>;
}

impl RadialFn for RadialProfile {
    fn value(&self, t: f64) -> f64 {
        RadialProfile::value(self, t)
    }

    fn breakpoints(&self) -> Vec<f64> {
        RadialProfile::breakpoints(self)
    }

    fn expansion(&self, end: End) -> Option<Expansion> {
        RadialProfile::expansion(self, end)
    }
}

/// The derivative `f'` of a profile, as a radial function.
pub struct Derivative<'a>(pub &'a RadialProfile);

impl RadialFn for Derivative<'_> {
    fn value(&self, t: f64) -> f64 {
        self.0.derivative(t)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.0.breakpoints()
    }

    fn expansion(&self, end: End) -> Option<Expansion> {
        self.0.derivative_expansion(end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadStatus {
    Converged,
    Divergent,
    MaxRefinementReached,
}

/// Why an integral (or supremum) is infinite: the end where it blows up, the
/// leading power of the function there, and the resulting integrand power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivergenceCertificate {
    pub direction: End,
    #[serde(with = "serde_q")]
    pub exponent: Q,
    #[serde(with = "serde_q")]
    pub integrand_exponent: Q,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub status: QuadStatus,
    pub certificate: Option<DivergenceCertificate>,
}

impl QuadResult {
    pub fn converged(value: f64, abs_error: f64) -> Self {
        Self {
            value,
            abs_error,
            status: QuadStatus::Converged,
            certificate: None,
        }
    }

    pub fn divergent(certificate: DivergenceCertificate) -> Self {
        Self {
            value: f64::INFINITY,
            abs_error: 0.0,
            status: QuadStatus::Divergent,
            certificate: Some(certificate),
        }
    }

    fn unfinished(value: f64, abs_error: f64) -> Self {
        Self {
            value,
            abs_error,
            status: QuadStatus::MaxRefinementReached,
            certificate: None,
        }
    }

    pub fn is_converged(&self) -> bool {
        self.status == QuadStatus::Converged
    }

    pub fn is_divergent(&self) -> bool {
        self.status == QuadStatus::Divergent
    }

    /// Value and error of `(k · self)^{1/r}`.
    fn root(&self, k: f64, r: f64) -> Self {
        if self.is_divergent() {
            return self.clone();
        }
        let value = (k * self.value).powf(1.0 / r);
        let rel = if self.value > 0.0 {
            self.abs_error / self.value
        } else {
            0.0
        };
        Self {
            value,
            abs_error: value * rel / r,
            status: self.status,
            certificate: None,
        }
    }
}

/// Integration range in the logarithmic variable `s = ln t`; infinite bounds
/// mean `0+` and `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRange {
    pub lo: f64,
    pub hi: f64,
}

impl LogRange {
    pub const FULL: LogRange = LogRange {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// `(ε, 1/ε)` with `ε = 2^{-k}`.
    pub fn symmetric_dyadic(k: f64) -> Self {
        let s = k * std::f64::consts::LN_2;
        Self { lo: -s, hi: s }
    }

    pub fn between(t_lo: f64, t_hi: f64) -> Self {
        Self {
            lo: t_lo.ln(),
            hi: t_hi.ln(),
        }
    }
}

/// Closed-form integrand beyond an edge (in `s`).
enum Tail {
    /// The integrand vanishes identically beyond `edge`.
    Zero {
        edge: f64,
    },
    /// `Σ c_i t^{κ_i}` beyond `edge`, with relative accuracy `rel_err`.
    Model {
        edge: f64,
        terms: Vec<(f64, Q)>,
        rel_err: f64,
    },
    Unknown {
        edge: f64,
    },
}

impl Tail {
    fn edge(&self) -> f64 {
        match self {
            Tail::Zero { edge } | Tail::Model { edge, .. } | Tail::Unknown { edge } => *edge,
        }
    }
}

fn integrand_expansion<F: RadialFn + ?Sized>(f: &F, w: &Q, q: &Q, end: End) -> Option<Expansion> {
    let e = f.expansion(end)?.abs()?.power(q)?;
    Some(e.mul(&Expansion::monomial(end, 1.0, w.clone())))
}

fn tail_model<F: RadialFn + ?Sized>(f: &F, w: &Q, q: &Q, end: End, base_edge: f64, tol: f64) -> Tail {
    let Some(exp) = integrand_expansion(f, w, q, end) else {
        return Tail::Unknown { edge: base_edge };
    };
    if exp.is_identically_zero() {
        return Tail::Zero { edge: base_edge };
    }
    let Some(lead) = exp.leading() else {
        return Tail::Unknown { edge: base_edge };
    };
    let terms: Vec<(f64, Q)> = exp.terms.iter().map(|t| (t.coeff, t.exponent.clone())).collect();
    // Move the edge outwards until corrections are small: the sign of the
    // leading term must settle, and an unknown remainder must be negligible.
    let mut edge = base_edge;
    let push = |edge: &mut f64, ratio: f64, gap: &Q| {
        let g = to_f64(gap);
        let bound = (ratio.ln()) / g;
        *edge = match end {
            End::Zero => edge.min(bound),
            End::Infinity => edge.max(bound),
        };
    };
    let mut rel_err = 0.0;
    let n = terms.len() as f64;
    if terms.len() > 1 || exp.remainder.is_some() {
        for t in &exp.terms[1..] {
            let ratio = (t.coeff / lead.coeff).abs();
            push(&mut edge, 0.1 / (n * ratio), &(&t.exponent - &lead.exponent));
        }
    }
    if let Some(rem) = &exp.remainder {
        let delta = (tol * 1e-2).max(1e-15);
        push(&mut edge, delta, &(rem - &lead.exponent));
        rel_err = delta;
    }
    Tail::Model { edge, terms, rel_err }
}

/// `∫_a^b e^{m s} ds`, with infinite ends allowed where the integral converges.
fn exp_integral(m: f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    if m == 0.0 {
        return b - a;
    }
    if a == f64::NEG_INFINITY {
        return if m > 0.0 { (m * b).exp() / m } else { f64::INFINITY };
    }
    if b == f64::INFINITY {
        return if m < 0.0 { (m * a).exp() / -m } else { f64::INFINITY };
    }
    if m > 0.0 {
        (m * b).exp() * -(-m * (b - a)).exp_m1() / m
    } else {
        (m * a).exp() * -(m * (b - a)).exp_m1() / -m
    }
}

fn model_integral(terms: &[(f64, Q)], a: f64, b: f64) -> f64 {
    terms
        .iter()
        .map(|(c, kappa)| c * exp_integral(to_f64(kappa) + 1.0, a, b))
        .sum()
}

/// `∫ t^w |f(t)|^q dt` over `range`, to relative tolerance `tol`.
pub fn integrate_power_weighted<F: RadialFn + ?Sized>(f: &F, w: &Q, q: &Q, range: LogRange, tol: f64) -> QuadResult {
    let bps: Vec<f64> = f.breakpoints().into_iter().map(f64::ln).collect();
    let base_lo = bps.first().copied().unwrap_or(0.0);
    let base_hi = bps.last().copied().unwrap_or(0.0);
    let lo_tail = tail_model(f, w, q, End::Zero, base_lo, tol);
    let hi_tail = tail_model(f, w, q, End::Infinity, base_hi, tol);

    for (tail, end, infinite) in [
        (&lo_tail, End::Zero, range.lo == f64::NEG_INFINITY),
        (&hi_tail, End::Infinity, range.hi == f64::INFINITY),
    ] {
        if let (Tail::Model { terms, .. }, true) = (tail, infinite) {
            let kappa = &terms[0].1;
            let diverges = match end {
                End::Zero => kappa <= &-one(),
                End::Infinity => kappa >= &-one(),
            };
            if diverges {
                let exponent = f
                    .expansion(end)
                    .and_then(|e| e.leading().map(|t| t.exponent.clone()))
                    .unwrap_or_else(|| (kappa - w) / q);
                return QuadResult::divergent(DivergenceCertificate {
                    direction: end,
                    exponent,
                    integrand_exponent: kappa.clone(),
                });
            }
        }
    }

    let wf = to_f64(w);
    let qf = to_f64(q);
    let integrand = |s: f64| {
        let v = f.value(s.exp()).abs();
        if v == 0.0 {
            0.0
        } else {
            ((wf + 1.0) * s + qf * v.ln()).exp()
        }
    };

    let mut value = 0.0;
    let mut error = 0.0;
    // Closed-form pieces.
    let mut numeric_lo = range.lo.max(lo_tail.edge());
    let mut numeric_hi = range.hi.min(hi_tail.edge());
    if numeric_lo > numeric_hi {
        // The whole range lies inside one tail.
        numeric_lo = numeric_hi.max(range.lo);
        numeric_hi = numeric_lo;
    }
    let mut unknown_ends = Vec::new();
    match &lo_tail {
        Tail::Model { terms, rel_err, .. } if range.lo < lo_tail.edge() => {
            let v = model_integral(terms, range.lo, lo_tail.edge().min(range.hi));
            value += v;
            error += v.abs() * rel_err + v.abs() * 1e-15;
        }
        Tail::Unknown { .. } if range.lo < lo_tail.edge() => {
            if range.lo.is_finite() {
                numeric_lo = range.lo;
            } else {
                unknown_ends.push(End::Zero);
            }
        }
        _ => {}
    }
    match &hi_tail {
        Tail::Model { terms, rel_err, .. } if range.hi > hi_tail.edge() => {
            let v = model_integral(terms, hi_tail.edge().max(range.lo), range.hi);
            value += v;
            error += v.abs() * rel_err + v.abs() * 1e-15;
        }
        Tail::Unknown { .. } if range.hi > hi_tail.edge() => {
            if range.hi.is_finite() {
                numeric_hi = range.hi;
            } else {
                unknown_ends.push(End::Infinity);
            }
        }
        _ => {}
    }

    let panels = panel_edges(numeric_lo, numeric_hi, &bps);
    let tails = value;
    let mid = gk::integrate_panels(
        &integrand,
        &panels,
        |v| 0.5 * tol * (v + tails).abs(),
        REFINEMENT_BUDGET,
    );
    value += mid.value;
    error += mid.error;
    let mut complete = mid.converged;

    for end in unknown_ends {
        let (v, e, ok) = extend_numerically(
            &integrand,
            end,
            if end == End::Zero { numeric_lo } else { numeric_hi },
            value,
            tol,
        );
        value += v;
        error += e;
        complete &= ok;
    }

    if complete && error <= tol * value.abs() || value == 0.0 && error == 0.0 {
        QuadResult::converged(value, error)
    } else {
        QuadResult::unfinished(value, error)
    }
}

/// Splits `[lo, hi]` at the breakpoints and into pieces of bounded length.
fn panel_edges(lo: f64, hi: f64, bps: &[f64]) -> Vec<(f64, f64)> {
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return Vec::new();
    }
    let mut cuts = vec![lo];
    cuts.extend(bps.iter().copied().filter(|&b| b > lo && b < hi));
    cuts.push(hi);
    let piece = ((hi - lo) / 400.0).max(1.0);
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let n = ((w[1] - w[0]) / piece).ceil().max(1.0) as usize;
        let step = (w[1] - w[0]) / n as f64;
        for i in 0..n {
            let a = w[0] + step * i as f64;
            let b = if i + 1 == n { w[1] } else { a + step };
            out.push((a, b));
        }
    }
    out
}

/// Integrates outwards from `start` in unit steps until contributions become
/// negligible, for ends without known asymptotics.
fn extend_numerically<G: Fn(f64) -> f64>(g: &G, end: End, start: f64, so_far: f64, tol: f64) -> (f64, f64, bool) {
    let dir = if end == End::Zero { -1.0 } else { 1.0 };
    let mut total = 0.0;
    let mut error = 0.0;
    let mut quiet = 0;
    for i in 0..200 {
        let a = start + dir * f64::from(i) * 2.0;
        let b = a + dir * 2.0;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let r = gk::integrate_panels(
            g,
            &[(lo, hi)],
            |v| 0.1 * tol * (v.abs() + so_far.abs()),
            REFINEMENT_BUDGET,
        );
        total += r.value;
        error += r.error;
        if r.value.abs() <= 1e-3 * tol * (total + so_far).abs() {
            quiet += 1;
            if quiet >= 3 {
                return (total, error, true);
            }
        } else {
            quiet = 0;
        }
    }
    (total, error, false)
}

/// Surface area `N ω_N = 2 π^{N/2} / Γ(N/2)` of the unit sphere in `R^N`.
pub fn sphere_area(dim: u32) -> f64 {
    let half = f64::from(dim) / 2.0;
    2.0 * std::f64::consts::PI.powf(half) / libm::tgamma(half)
}

/// `(angular_factor · ∫_0^∞ t^{c+N-1} |f|^r dt)^{1/r}`.
pub fn weighted_lr_norm<F: RadialFn + ?Sized>(
    f: &F,
    c: &Q,
    r: &Q,
    dim: u32,
    angular_factor: f64,
    tol: f64,
) -> QuadResult {
    weighted_lr_norm_on(f, c, r, dim, angular_factor, LogRange::FULL, tol)
}

/// [`weighted_lr_norm`] restricted to a range of radii.
pub fn weighted_lr_norm_on<F: RadialFn + ?Sized>(
    f: &F,
    c: &Q,
    r: &Q,
    dim: u32,
    angular_factor: f64,
    range: LogRange,
    tol: f64,
) -> QuadResult {
    let w = c + qi(i64::from(dim)) - one();
    let rf = to_f64(r);
    let inner = integrate_power_weighted(f, &w, r, range, tol * rf.min(1.0));
    inner.root(angular_factor, rf)
}

/// The three norms entering the embedding question for one test function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormTriple {
    /// `|| |x|^a u ||_∞`.
    pub sup_norm: QuadResult,
    /// `|| ∂_ρ u ||_{b,p}`.
    pub grad_norm: QuadResult,
    /// `|| u ||_{c,r}`.
    pub target_norm: QuadResult,
}

impl NormTriple {
    pub fn all_converged(&self) -> bool {
        self.sup_norm.is_converged() && self.grad_norm.is_converged() && self.target_norm.is_converged()
    }

    pub fn membership_converged(&self) -> bool {
        self.sup_norm.is_converged() && self.grad_norm.is_converged()
    }
}

pub fn membership_norms(f: &RadialProfile, params: &EmbeddingParams, tol: f64) -> NormTriple {
    let area = sphere_area(params.dim);
    NormTriple {
        sup_norm: weighted_sup_norm(f, &params.a),
        grad_norm: weighted_lr_norm(&Derivative(f), &params.b, &params.p, params.dim, area, tol),
        target_norm: weighted_lr_norm(f, &params.c, &params.r, params.dim, area, tol),
    }
}

/// Norms of `u(tσ) = f(t) h(σ)`; the gradient entry is the radial derivative.
pub fn membership_norms_separable(u: &SeparableFunction, params: &EmbeddingParams, tol: f64) -> NormTriple {
    let area = sphere_area(params.dim);
    let (pf, rf) = (to_f64(&params.p), to_f64(&params.r));
    let mut sup_norm = weighted_sup_norm(&u.radial, &params.a);
    if sup_norm.is_converged() {
        sup_norm.value *= u.angular.sup();
        sup_norm.abs_error *= u.angular.sup();
    }
    NormTriple {
        sup_norm,
        grad_norm: weighted_lr_norm(
            &Derivative(&u.radial),
            &params.b,
            &params.p,
            params.dim,
            area * u.angular.mean(pf, params.dim),
            tol,
        ),
        target_norm: weighted_lr_norm(
            &u.radial,
            &params.c,
            &params.r,
            params.dim,
            area * u.angular.mean(rf, params.dim),
            tol,
        ),
    }
}

/// Powers of `λ` by which the norms of `u(λ·)` scale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingExponents {
    #[serde(with = "serde_q")]
    pub target: Q,
    #[serde(with = "serde_q")]
    pub sup: Q,
    #[serde(with = "serde_q")]
    pub grad: Q,
}

pub fn scaling_exponents(params: &EmbeddingParams) -> ScalingExponents {
    let n = params.n();
    ScalingExponents {
        target: -(&params.c + &n) / &params.r,
        sup: -params.a.clone(),
        grad: -(&params.b - &params.p + &n) / &params.p,
    }
}

impl ScalingExponents {
    /// Exponent of `λ` in the multiplicative ratio at weight `θ`.
    pub fn ratio_exponent(&self, theta: &Q) -> Q {
        &self.target - theta * &self.grad - (one() - theta) * &self.sup
    }

    pub fn is_balanced(&self, theta: &Q) -> bool {
        !self.ratio_exponent(theta).is_positive() && !self.ratio_exponent(theta).is_negative()
    }
}
