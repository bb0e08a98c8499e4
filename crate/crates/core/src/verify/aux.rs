//! Checks of the one-dimensional inequalities behind the sufficiency proofs.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{NormComponent, VerifyError};
use crate::params::{derive, EmbeddingParams};
use crate::quad::{
    integrate_power_weighted, membership_norms, membership_norms_separable, sphere_area, weighted_lr_norm,
    weighted_sup_norm, Derivative, LogRange, QuadResult, RadialFn,
};
use crate::rational::{qi, to_f64, Q};
use crate::testfun::{
    is_nonnegative_on_grid, power_transform, spherical_mean_power, vanishes_weighted, End, Expansion, RadialProfile,
    SeparableFunction, Term,
};

/// `G(t) = ∫_0^t g` as a radial function.
///
/// Values are accumulated from the breakpoints of `g`; the expansions follow
/// from term-wise integration of those of `g`.
pub struct Primitive<'a> {
    g: &'a RadialProfile,
    knots: Vec<f64>,
    cumulative: Vec<f64>,
    total: Option<f64>,
    tol: f64,
}

fn integral_of(g: &RadialProfile, range: LogRange, tol: f64) -> f64 {
    let r = integrate_power_weighted(g, &Q::zero(), &Q::one(), range, tol);
    r.value
}

impl<'a> Primitive<'a> {
    /// Fails when `g` is not integrable at the origin.
    pub fn new(g: &'a RadialProfile, tol: f64) -> Result<Self, VerifyError> {
        let integrable = match g.expansion(End::Zero) {
            Some(e) if e.is_identically_zero() => true,
            Some(e) => e.leading().is_some_and(|t| t.exponent > qi(-1)),
            None => false,
        };
        if !integrable {
            return Err(VerifyError::PreconditionViolated(
                "integrand is not integrable at the origin".to_string(),
            ));
        }
        let knots = g.breakpoints();
        let mut cumulative = Vec::with_capacity(knots.len());
        let mut acc = 0.0;
        let mut prev = f64::NEG_INFINITY;
        for &k in &knots {
            acc += integral_of(g, LogRange { lo: prev, hi: k.ln() }, tol);
            cumulative.push(acc);
            prev = k.ln();
        }
        let tail = integrate_power_weighted(
            g,
            &Q::zero(),
            &Q::one(),
            LogRange {
                lo: prev,
                hi: f64::INFINITY,
            },
            tol,
        );
        let total = tail.is_converged().then_some(acc + tail.value);
        Ok(Self {
            g,
            knots,
            cumulative,
            total,
            tol,
        })
    }
}

impl RadialFn for Primitive<'_> {
    fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let i = self.knots.partition_point(|&k| k <= t);
        if i == 0 {
            integral_of(
                self.g,
                LogRange {
                    lo: f64::NEG_INFINITY,
                    hi: t.ln(),
                },
                self.tol,
            )
        } else {
            let k = self.knots[i - 1];
            self.cumulative[i - 1] + integral_of(self.g, LogRange::between(k, t), self.tol)
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.knots.clone()
    }

    fn expansion(&self, end: End) -> Option<Expansion> {
        let e = self.g.expansion(end)?;
        let mut terms = Vec::with_capacity(e.terms.len() + 1);
        for term in &e.terms {
            let shifted = &term.exponent + qi(1);
            if shifted.is_zero() {
                return None;
            }
            terms.push(Term {
                coeff: term.coeff / to_f64(&shifted),
                exponent: shifted,
            });
        }
        let remainder = e.remainder.as_ref().map(|r| r + qi(1));
        match end {
            End::Zero => Some(Expansion { end, terms, remainder }),
            End::Infinity => {
                let decaying = terms.iter().all(|t| t.exponent.is_negative())
                    && remainder.as_ref().is_none_or(Signed::is_negative);
                let constant = if decaying {
                    self.total?
                } else if e.is_exact() {
                    // G(t) = G(T) + Σ c/(e+1) (t^{e+1} - T^{e+1}) past the last knot
                    let last = *self.knots.last()?;
                    let at_last = *self.cumulative.last()?;
                    at_last
                        - terms
                            .iter()
                            .map(|t| t.coeff * last.powf(to_f64(&t.exponent)))
                            .sum::<f64>()
                } else {
                    return None;
                };
                let mut all = Vec::with_capacity(terms.len() + 1);
                if constant != 0.0 {
                    all.push(Term {
                        coeff: constant,
                        exponent: Q::zero(),
                    });
                }
                all.extend(terms);
                // growing powers dominate the constant
                all.sort_by(|x, y| y.exponent.cmp(&x.exponent));
                Some(Expansion {
                    end,
                    terms: all,
                    remainder,
                })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardySides {
    /// `(∫ t^α G^p)^{1/p}`.
    pub lhs: f64,
    /// `(∫ t^{α+p} g^p)^{1/p}`.
    pub rhs: f64,
}

fn finite(r: &QuadResult, which: NormComponent) -> Result<f64, VerifyError> {
    if r.is_divergent() {
        Err(VerifyError::NormDivergent(which))
    } else if !r.is_converged() {
        Err(VerifyError::NormNotConverged(which))
    } else {
        Ok(r.value)
    }
}

/// Both sides of the weighted Hardy inequality for the primitive of `g`.
pub fn hardy_check(alpha: &Q, p: &Q, g: &RadialProfile, tol: f64) -> Result<HardySides, VerifyError> {
    if alpha >= &qi(-1) || p < &Q::one() {
        return Err(VerifyError::PreconditionViolated(
            "requires alpha < -1 and p >= 1".to_string(),
        ));
    }
    if !is_nonnegative_on_grid(g) {
        return Err(VerifyError::PreconditionViolated("g must be nonnegative".to_string()));
    }
    let pf = to_f64(p);
    let rhs = integrate_power_weighted(g, &(alpha + p), p, LogRange::FULL, tol);
    let rhs = finite(&rhs, NormComponent::Grad)?.powf(1.0 / pf);
    if rhs == 0.0 {
        return Ok(HardySides { lhs: 0.0, rhs: 0.0 });
    }
    let primitive = Primitive::new(g, tol * 1e-2)?;
    let lhs = integrate_power_weighted(&primitive, alpha, p, LogRange::FULL, tol);
    let lhs = finite(&lhs, NormComponent::Target)?.powf(1.0 / pf);
    Ok(HardySides { lhs, rhs })
}

/// `f(t) <= ∫_0^t |f'|` (or `∫_t^∞ |f'|`) at every sample.
pub fn lemma5_check(f: &RadialProfile, end: End, samples: &[f64], tol: f64) -> Result<bool, VerifyError> {
    if vanishes_weighted(f, &Q::zero(), end) != Some(true) {
        return Err(VerifyError::PreconditionViolated(format!(
            "profile does not vanish at {end:?}"
        )));
    }
    let df = Derivative(f);
    for &t in samples {
        let range = match end {
            End::Zero => LogRange {
                lo: f64::NEG_INFINITY,
                hi: t.ln(),
            },
            End::Infinity => LogRange {
                lo: t.ln(),
                hi: f64::INFINITY,
            },
        };
        let variation = integrate_power_weighted(&df, &Q::zero(), &Q::one(), range, tol);
        if !variation.is_converged() {
            return Ok(false);
        }
        let v = f.value(t).abs();
        if v > variation.value * (1.0 + tol) + tol * 1e-4 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma14Report {
    /// `|| |x|^{a*} |u|^{r/p*} ||_∞`.
    pub sup_lhs: f64,
    /// `|| |x|^a u ||_∞^{r/p*}`.
    pub sup_rhs: f64,
    /// `|| ∇ |u|^{r/p*} ||_{b*,p}`.
    pub grad_lhs: f64,
    /// `(r/p*) ||∇u||_{b,p} || |x|^a u ||_∞^{r/p*-1}`.
    pub grad_rhs: f64,
}

impl Lemma14Report {
    pub fn sup_identity_holds(&self, rel: f64) -> bool {
        (self.sup_lhs - self.sup_rhs).abs() <= rel * self.sup_rhs.abs().max(self.sup_lhs.abs())
    }

    pub fn grad_bound_holds(&self, rel: f64) -> bool {
        self.grad_lhs <= self.grad_rhs * (1.0 + rel)
    }
}

/// Both sides of the norm relations for `v = u^{r/p*}`.
pub fn lemma14_identity_check(
    u: &RadialProfile,
    params: &EmbeddingParams,
    tol: f64,
) -> Result<Lemma14Report, VerifyError> {
    params.validate()?;
    let d = derive(params);
    let (Some(star), Some(ps)) = (d.star, d.p_star.finite()) else {
        return Err(VerifyError::PreconditionViolated(
            "requires p < N and r > p*".to_string(),
        ));
    };
    let s = &params.r / ps;
    let v = power_transform(u, &s).map_err(|e| VerifyError::PreconditionViolated(e.to_string()))?;
    let area = sphere_area(params.dim);
    let sf = to_f64(&s);
    let sup_u = finite(&weighted_sup_norm(u, &params.a), NormComponent::Sup)?;
    let grad_u = finite(
        &weighted_lr_norm(&Derivative(u), &params.b, &params.p, params.dim, area, tol),
        NormComponent::Grad,
    )?;
    let sup_v = finite(&weighted_sup_norm(&v, &star.a_star), NormComponent::Sup)?;
    let grad_v = finite(
        &weighted_lr_norm(&Derivative(&v), &star.b_star, &params.p, params.dim, area, tol),
        NormComponent::Grad,
    )?;
    Ok(Lemma14Report {
        sup_lhs: sup_v,
        sup_rhs: sup_u.powf(sf),
        grad_lhs: grad_v,
        grad_rhs: sf * grad_u * sup_u.powf(sf - 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetrizationReport {
    pub sup_v: f64,
    pub sup_u: f64,
    pub grad_v: f64,
    pub grad_u: f64,
    pub holds: bool,
}

/// Compares `v = spherical_mean_power(u, p)` with `u` in the sup and radial
/// derivative norms.
pub fn symmetrization_check(u: &SeparableFunction, params: &EmbeddingParams, tol: f64) -> SymmetrizationReport {
    let pf = to_f64(&params.p);
    let v = spherical_mean_power(u, pf, params.dim);
    let nu = membership_norms_separable(u, params, tol);
    let nv = membership_norms(&v, params, tol);
    let (sup_u, grad_u) = (nu.sup_norm.value, nu.grad_norm.value);
    let (sup_v, grad_v) = (nv.sup_norm.value, nv.grad_norm.value);
    let within = |lhs: f64, rhs: f64| lhs <= rhs * (1.0 + 1e-8) + 1e-300;
    let converged = nu.membership_converged() && nv.membership_converged();
    SymmetrizationReport {
        sup_v,
        sup_u,
        grad_v,
        grad_u,
        holds: converged && within(sup_v, sup_u) && within(grad_v, grad_u),
    }
}
