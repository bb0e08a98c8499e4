//! Radial test functions `u(x) = f(|x|)` as expression trees with exact
//! derivatives, breakpoints and end asymptotics.

mod angular;
mod expansion;

pub use angular::{spherical_mean_power, AngularFactor, SeparableFunction};
pub use expansion::{End, Expansion, Term};

use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::params::EmbeddingParams;
use crate::rational::{format_rational, parse_rational, to_f64, Q};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("domain error: {0}")]
    DomainError(String),
}

/// A rational exponent together with its floating-point value.
#[derive(Clone, PartialEq)]
pub struct Exponent {
    exact: Q,
    approx: f64,
}

impl Exponent {
    pub fn new(exact: Q) -> Self {
        let approx = to_f64(&exact);
        Self { exact, approx }
    }

    pub fn exact(&self) -> &Q {
        &self.exact
    }

    pub fn value(&self) -> f64 {
        self.approx
    }
}

impl From<Q> for Exponent {
    fn from(q: Q) -> Self {
        Self::new(q)
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.exact))
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.exact))
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(Exponent::new).map_err(serde::de::Error::custom)
    }
}

/// Radial profile `f: (0, ∞) -> R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum RadialProfile {
    /// `t^e`.
    Power {
        exponent: Exponent,
    },
    /// Smooth cutoff ζ: 1 on `(0, 1/2]`, 0 on `[1, ∞)`.
    Cutoff,
    /// `1 - ζ`.
    OneMinusCutoff,
    /// `g((ln t - center)/width)` with the standard bump `g` on `(-1, 1)`.
    LogBump {
        center: f64,
        width: f64,
    },
    Constant {
        value: f64,
    },
    Product {
        children: Vec<RadialProfile>,
    },
    Sum {
        children: Vec<RadialProfile>,
    },
    /// `t -> f(λt)`.
    Scale {
        lambda: f64,
        of: Box<RadialProfile>,
    },
    /// `t -> f(1/t)`.
    KelvinImage {
        of: Box<RadialProfile>,
    },
    /// `t -> f(t)^s` for nonnegative `f`.
    PowerTransform {
        exponent: Exponent,
        of: Box<RadialProfile>,
    },
    /// `below` on `(0, split)`, `above` on `[split, ∞)`.
    Piecewise {
        split: f64,
        below: Box<RadialProfile>,
        above: Box<RadialProfile>,
    },
    Abs {
        of: Box<RadialProfile>,
    },
}

fn phi(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

fn phi_prime(s: f64) -> f64 {
    let v = phi(s);
    if v == 0.0 {
        0.0
    } else {
        v / (s * s)
    }
}

pub(crate) fn cutoff_value(t: f64) -> f64 {
    if t <= 0.5 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        let a = phi(2.0 - 2.0 * t);
        let b = phi(2.0 * t - 1.0);
        a / (a + b)
    }
}

/// `1 - ζ(t)` without cancellation near `t = 1/2`.
pub(crate) fn one_minus_cutoff_value(t: f64) -> f64 {
    if t <= 0.5 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = phi(2.0 - 2.0 * t);
        let b = phi(2.0 * t - 1.0);
        b / (a + b)
    }
}

pub(crate) fn cutoff_derivative(t: f64) -> f64 {
    if t <= 0.5 || t >= 1.0 {
        return 0.0;
    }
    let a = phi(2.0 - 2.0 * t);
    let b = phi(2.0 * t - 1.0);
    let da = -2.0 * phi_prime(2.0 - 2.0 * t);
    let db = 2.0 * phi_prime(2.0 * t - 1.0);
    let sum = a + b;
    (da * b - a * db) / (sum * sum)
}

/// The bump `g(s) = exp(1 - 1/(1 - s^2))` on `(-1, 1)`, zero outside; `g(0) = 1`.
pub fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

pub fn bump_derivative(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        return 0.0;
    }
    let d = 1.0 - s * s;
    bump(s) * (-2.0 * s / (d * d))
}

/// `ln g(s)`, finite on `(-1, 1)`.
pub fn log_bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        f64::NEG_INFINITY
    } else {
        1.0 - 1.0 / (1.0 - s * s)
    }
}

impl RadialProfile {
    pub fn power(exponent: Q) -> Self {
        RadialProfile::Power {
            exponent: Exponent::new(exponent),
        }
    }

    pub fn constant(value: f64) -> Self {
        RadialProfile::Constant { value }
    }

    pub fn product(children: Vec<RadialProfile>) -> Self {
        RadialProfile::Product { children }
    }

    pub fn sum(children: Vec<RadialProfile>) -> Self {
        RadialProfile::Sum { children }
    }

    pub fn scale(lambda: f64, of: RadialProfile) -> Self {
        RadialProfile::Scale {
            lambda,
            of: Box::new(of),
        }
    }

    pub fn abs(of: RadialProfile) -> Self {
        RadialProfile::Abs { of: Box::new(of) }
    }

    pub fn piecewise(split: f64, below: RadialProfile, above: RadialProfile) -> Self {
        RadialProfile::Piecewise {
            split,
            below: Box::new(below),
            above: Box::new(above),
        }
    }

    pub fn log_bump(center: f64, width: f64) -> Self {
        RadialProfile::LogBump { center, width }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            RadialProfile::Power { exponent } => t.powf(exponent.value()),
            RadialProfile::Cutoff => cutoff_value(t),
            RadialProfile::OneMinusCutoff => one_minus_cutoff_value(t),
            RadialProfile::LogBump { center, width } => bump((t.ln() - center) / width),
            RadialProfile::Constant { value } => *value,
            RadialProfile::Product { children } => {
                let mut acc = 1.0;
                for c in children {
                    acc *= c.value(t);
                    if acc == 0.0 {
                        break;
                    }
                }
                acc
            }
            RadialProfile::Sum { children } => children.iter().map(|c| c.value(t)).sum(),
            RadialProfile::Scale { lambda, of } => of.value(lambda * t),
            RadialProfile::KelvinImage { of } => of.value(1.0 / t),
            RadialProfile::PowerTransform { exponent, of } => of.value(t).powf(exponent.value()),
            RadialProfile::Piecewise { split, below, above } => {
                if t < *split {
                    below.value(t)
                } else {
                    above.value(t)
                }
            }
            RadialProfile::Abs { of } => of.value(t).abs(),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            RadialProfile::Power { exponent } => {
                let e = exponent.value();
                if e == 0.0 {
                    0.0
                } else {
                    e * t.powf(e - 1.0)
                }
            }
            RadialProfile::Cutoff => cutoff_derivative(t),
            RadialProfile::OneMinusCutoff => -cutoff_derivative(t),
            RadialProfile::LogBump { center, width } => bump_derivative((t.ln() - center) / width) / (width * t),
            RadialProfile::Constant { .. } => 0.0,
            RadialProfile::Product { children } => {
                let values: Vec<f64> = children.iter().map(|c| c.value(t)).collect();
                let mut total = 0.0;
                for (i, c) in children.iter().enumerate() {
                    let others: f64 = values
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, v)| v)
                        .product();
                    if others != 0.0 {
                        total += others * c.derivative(t);
                    }
                }
                total
            }
            RadialProfile::Sum { children } => children.iter().map(|c| c.derivative(t)).sum(),
            RadialProfile::Scale { lambda, of } => lambda * of.derivative(lambda * t),
            RadialProfile::KelvinImage { of } => -of.derivative(1.0 / t) / (t * t),
            RadialProfile::PowerTransform { exponent, of } => {
                let s = exponent.value();
                let f = of.value(t);
                let df = of.derivative(t);
                if f == 0.0 {
                    if s == 1.0 {
                        df
                    } else {
                        0.0
                    }
                } else {
                    s * f.powf(s - 1.0) * df
                }
            }
            RadialProfile::Piecewise { split, below, above } => {
                if t < *split {
                    below.derivative(t)
                } else {
                    above.derivative(t)
                }
            }
            RadialProfile::Abs { of } => {
                let f = of.value(t);
                if f > 0.0 {
                    of.derivative(t)
                } else if f < 0.0 {
                    -of.derivative(t)
                } else {
                    0.0
                }
            }
        }
    }

    /// Sorted, deduplicated points in `(0, ∞)` where the profile may fail to
    /// be smooth or changes its closed form. Zero crossings under `Abs` are
    /// located on a log grid over `[1e-8, 1e8]`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_breakpoints(&mut out);
        out.retain(|t| t.is_finite() && *t > 0.0);
        out.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
        out.dedup();
        out
    }

    fn collect_breakpoints(&self, out: &mut Vec<f64>) {
        match self {
            RadialProfile::Power { .. } | RadialProfile::Constant { .. } => {}
            RadialProfile::Cutoff | RadialProfile::OneMinusCutoff => out.extend([0.5, 1.0]),
            RadialProfile::LogBump { center, width } => out.extend([(center - width).exp(), (center + width).exp()]),
            RadialProfile::Product { children } | RadialProfile::Sum { children } => {
                for c in children {
                    c.collect_breakpoints(out);
                }
            }
            RadialProfile::Scale { lambda, of } => {
                out.extend(of.breakpoints().into_iter().map(|t| t / lambda));
            }
            RadialProfile::KelvinImage { of } => {
                out.extend(of.breakpoints().into_iter().map(|t| 1.0 / t));
            }
            RadialProfile::PowerTransform { of, .. } => of.collect_breakpoints(out),
            RadialProfile::Abs { of } => {
                of.collect_breakpoints(out);
                out.extend(sign_changes(of));
            }
            RadialProfile::Piecewise { split, below, above } => {
                out.push(*split);
                out.extend(below.breakpoints().into_iter().filter(|t| t < split));
                out.extend(above.breakpoints().into_iter().filter(|t| t > split));
            }
        }
    }

    /// Asymptotic expansion of the profile at `end`; `None` when unknown.
    pub fn expansion(&self, end: End) -> Option<Expansion> {
        match self {
            RadialProfile::Power { exponent } => Some(Expansion::monomial(end, 1.0, exponent.exact().clone())),
            RadialProfile::Constant { value } => Some(Expansion::monomial(end, *value, Q::zero())),
            RadialProfile::Cutoff => Some(match end {
                End::Zero => Expansion::monomial(end, 1.0, Q::zero()),
                End::Infinity => Expansion::zero(end),
            }),
            RadialProfile::OneMinusCutoff => Some(match end {
                End::Zero => Expansion::zero(end),
                End::Infinity => Expansion::monomial(end, 1.0, Q::zero()),
            }),
            RadialProfile::LogBump { center, width } => {
                let finite = (center - width).exp() > 0.0 && (center + width).exp().is_finite();
                finite.then(|| Expansion::zero(end))
            }
            RadialProfile::Product { children } => {
                let mut acc = Expansion::monomial(end, 1.0, Q::zero());
                for c in children {
                    acc = acc.mul(&c.expansion(end)?);
                }
                Some(acc)
            }
            RadialProfile::Sum { children } => {
                let mut acc = Expansion::zero(end);
                for c in children {
                    acc = acc.add(&c.expansion(end)?);
                }
                Some(acc)
            }
            RadialProfile::Scale { lambda, of } => Some(of.expansion(end)?.dilate(*lambda)),
            RadialProfile::KelvinImage { of } => Some(of.expansion(end.opposite())?.invert()),
            RadialProfile::PowerTransform { exponent, of } => of.expansion(end)?.power(exponent.exact()),
            RadialProfile::Piecewise { below, above, .. } => match end {
                End::Zero => below.expansion(end),
                End::Infinity => above.expansion(end),
            },
            RadialProfile::Abs { of } => of.expansion(end)?.abs(),
        }
    }

    /// Expansion of the derivative at `end`.
    pub fn derivative_expansion(&self, end: End) -> Option<Expansion> {
        Some(self.expansion(end)?.derivative())
    }

    /// Leading power of the profile at `end`, when known.
    pub fn leading_exponent(&self, end: End) -> Option<Q> {
        self.expansion(end)?.leading().map(|t| t.exponent.clone())
    }
}

fn sign_changes(f: &RadialProfile) -> Vec<f64> {
    let mut grid = validation_grid(f);
    grid.sort_by(|x, y| x.partial_cmp(y).expect("finite grid"));
    let mut roots = Vec::new();
    for w in grid.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (f.value(lo), f.value(hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo.signum() == fhi.signum() || fhi == 0.0 {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f.value(mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(hi);
    }
    roots
}

/// The fixed cutoff ζ.
pub fn cutoff() -> RadialProfile {
    RadialProfile::Cutoff
}

/// `|x|^{-(c+N)/r} ζ(x)`, so that `|x|^c |u|^r = |x|^{-N}` near the origin.
pub fn counterexample_near_zero(params: &EmbeddingParams) -> RadialProfile {
    let e = -(&params.c + params.n()) / &params.r;
    RadialProfile::product(vec![RadialProfile::power(e), RadialProfile::Cutoff])
}

/// `|x|^{-(c+N)/r} (1 - ζ(x))`.
pub fn counterexample_near_infinity(params: &EmbeddingParams) -> RadialProfile {
    let e = -(&params.c + params.n()) / &params.r;
    RadialProfile::product(vec![RadialProfile::power(e), RadialProfile::OneMinusCutoff])
}

/// `t^{-a} g(λ ln t)`.
pub fn log_bump_family(a: &Q, lambda: f64) -> RadialProfile {
    RadialProfile::product(vec![
        RadialProfile::power(-a.clone()),
        RadialProfile::log_bump(0.0, 1.0 / lambda),
    ])
}

/// Points used to check that a profile is nonnegative before raising it to a power.
fn validation_grid(f: &RadialProfile) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=400)
        .map(|i| 10f64.powf(-8.0 + 16.0 * f64::from(i) / 400.0))
        .collect();
    for bp in f.breakpoints() {
        grid.extend([bp, bp * (1.0 - 1e-9), bp * (1.0 + 1e-9)]);
    }
    grid
}

/// `f^s`, with the derivative `s f^{s-1} f'`.
pub fn power_transform(f: &RadialProfile, s: &Q) -> Result<RadialProfile, ProfileError> {
    if s < &Q::one() {
        return Err(ProfileError::DomainError(format!(
            "power transform exponent must be >= 1, got {}",
            format_rational(s)
        )));
    }
    if let Some(t) = validation_grid(f).into_iter().find(|&t| f.value(t) < 0.0) {
        return Err(ProfileError::DomainError(format!("profile is negative at t = {t:e}")));
    }
    if s.is_one() {
        return Ok(f.clone());
    }
    Ok(match f {
        RadialProfile::Constant { value } => RadialProfile::constant(value.powf(to_f64(s))),
        RadialProfile::Power { exponent } => RadialProfile::power(exponent.exact() * s),
        RadialProfile::PowerTransform { exponent, of } => RadialProfile::PowerTransform {
            exponent: Exponent::new(exponent.exact() * s),
            of: of.clone(),
        },
        other => RadialProfile::PowerTransform {
            exponent: Exponent::new(s.clone()),
            of: Box::new(other.clone()),
        },
    })
}

/// `t -> f(1/t)`, simplified where the image has a direct form.
pub fn kelvin_image(f: &RadialProfile) -> RadialProfile {
    match f {
        RadialProfile::KelvinImage { of } => (**of).clone(),
        RadialProfile::Power { exponent } => RadialProfile::power(-exponent.exact().clone()),
        RadialProfile::Constant { .. } => f.clone(),
        RadialProfile::LogBump { center, width } => RadialProfile::log_bump(-center, *width),
        RadialProfile::Product { children } => RadialProfile::product(children.iter().map(kelvin_image).collect()),
        RadialProfile::Sum { children } => RadialProfile::sum(children.iter().map(kelvin_image).collect()),
        RadialProfile::Scale { lambda, of } => RadialProfile::scale(1.0 / lambda, kelvin_image(of)),
        RadialProfile::PowerTransform { exponent, of } => RadialProfile::PowerTransform {
            exponent: exponent.clone(),
            of: Box::new(kelvin_image(of)),
        },
        RadialProfile::Abs { of } => RadialProfile::abs(kelvin_image(of)),
        RadialProfile::Piecewise { split, below, above } => {
            RadialProfile::piecewise(1.0 / split, kelvin_image(above), kelvin_image(below))
        }
        RadialProfile::Cutoff | RadialProfile::OneMinusCutoff => RadialProfile::KelvinImage {
            of: Box::new(f.clone()),
        },
    }
}

/// Sign check used by callers that need `f >= 0`.
pub fn is_nonnegative_on_grid(f: &RadialProfile) -> bool {
    validation_grid(f).into_iter().all(|t| f.value(t) >= 0.0)
}

/// True if the exact leading exponent at `end` makes `t^a f` vanish there.
pub fn vanishes_weighted(f: &RadialProfile, a: &Q, end: End) -> Option<bool> {
    let exp = f.expansion(end)?;
    if exp.is_identically_zero() {
        return Some(true);
    }
    let lead = exp.leading()?;
    let total = a + &lead.exponent;
    Some(match end {
        End::Zero => total.is_positive(),
        End::Infinity => total.is_negative(),
    })
}
