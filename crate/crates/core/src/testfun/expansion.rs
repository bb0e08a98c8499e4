//! Power-series asymptotics of radial profiles at `0+` and `+∞`.

use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{to_f64, Q};

/// Which end of `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    Zero,
    Infinity,
}

impl End {
    pub fn opposite(self) -> End {
        match self {
            End::Zero => End::Infinity,
            End::Infinity => End::Zero,
        }
    }

    /// True when `t^x` dominates `t^y` at this end.
    pub fn dominates(self, x: &Q, y: &Q) -> bool {
        match self {
            End::Zero => x < y,
            End::Infinity => x > y,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub exponent: Q,
}

/// `Σ coeff_i t^{e_i} + O(t^{remainder})`, terms ordered from most to least
/// dominant at `end`.
///
/// With `remainder = None` the expansion is exact beyond the profile's extreme
/// breakpoint on that side; an exact expansion with no terms means the profile
/// vanishes identically there.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub end: End,
    pub terms: Vec<Term>,
    pub remainder: Option<Q>,
}

const MAX_TERMS: usize = 6;

impl Expansion {
    pub fn zero(end: End) -> Self {
        Self {
            end,
            terms: Vec::new(),
            remainder: None,
        }
    }

    pub fn monomial(end: End, coeff: f64, exponent: Q) -> Self {
        if coeff == 0.0 {
            return Self::zero(end);
        }
        Self {
            end,
            terms: vec![Term { coeff, exponent }],
            remainder: None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.remainder.is_none()
    }

    pub fn is_identically_zero(&self) -> bool {
        self.is_exact() && self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    fn more_dominant_remainder(end: End, x: Option<Q>, y: Option<Q>) -> Option<Q> {
        match (x, y) {
            (None, r) | (r, None) => r,
            (Some(x), Some(y)) => Some(if end.dominates(&x, &y) { x } else { y }),
        }
    }

    /// Sorts, merges equal exponents, drops cancelled and unreliable terms,
    /// and truncates.
    fn normalize(mut self) -> Self {
        let end = self.end;
        self.terms.sort_by(|x, y| {
            if end.dominates(&x.exponent, &y.exponent) {
                std::cmp::Ordering::Less
            } else if x.exponent == y.exponent {
                std::cmp::Ordering::Equal
            } else {
                std::cmp::Ordering::Greater
            }
        });
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for term in self.terms {
            match merged.last_mut() {
                Some(last) if last.exponent == term.exponent => last.coeff += term.coeff,
                _ => merged.push(term),
            }
        }
        let scale = merged.iter().map(|t| t.coeff.abs()).fold(0.0, f64::max);
        merged.retain(|t| t.coeff != 0.0 && t.coeff.abs() > scale * 1e-14);
        if let Some(rem) = &self.remainder {
            merged.retain(|t| end.dominates(&t.exponent, rem));
        }
        if merged.len() > MAX_TERMS {
            let dropped = merged[MAX_TERMS].exponent.clone();
            merged.truncate(MAX_TERMS);
            self.remainder = Self::more_dominant_remainder(end, self.remainder, Some(dropped));
        }
        self.terms = merged;
        self
    }

    pub fn add(&self, other: &Expansion) -> Expansion {
        debug_assert_eq!(self.end, other.end);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Expansion {
            end: self.end,
            terms,
            remainder: Self::more_dominant_remainder(self.end, self.remainder.clone(), other.remainder.clone()),
        }
        .normalize()
    }

    pub fn mul(&self, other: &Expansion) -> Expansion {
        debug_assert_eq!(self.end, other.end);
        let end = self.end;
        if self.is_identically_zero() || other.is_identically_zero() {
            return Expansion::zero(end);
        }
        let mut terms = Vec::new();
        for x in &self.terms {
            for y in &other.terms {
                terms.push(Term {
                    coeff: x.coeff * y.coeff,
                    exponent: &x.exponent + &y.exponent,
                });
            }
        }
        // (A + O(ra)) (B + O(rb)): the error is led by lead(A) rb, lead(B) ra and ra rb.
        let lead_or_rem = |e: &Expansion| -> Q {
            e.leading()
                .map(|t| t.exponent.clone())
                .or_else(|| e.remainder.clone())
                .expect("non-zero expansion has a term or a remainder")
        };
        let mut remainder = None;
        if let Some(rb) = &other.remainder {
            remainder = Self::more_dominant_remainder(end, remainder, Some(lead_or_rem(self) + rb));
        }
        if let Some(ra) = &self.remainder {
            remainder = Self::more_dominant_remainder(end, remainder, Some(lead_or_rem(other) + ra));
        }
        Expansion { end, terms, remainder }.normalize()
    }

    pub fn scale_coeffs(&self, k: f64) -> Expansion {
        if k == 0.0 {
            return Expansion::zero(self.end);
        }
        Expansion {
            end: self.end,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff * k,
                    exponent: t.exponent.clone(),
                })
                .collect(),
            remainder: self.remainder.clone(),
        }
    }

    /// Expansion of `t -> f(λt)`.
    pub fn dilate(&self, lambda: f64) -> Expansion {
        Expansion {
            end: self.end,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff * lambda.powf(to_f64(&t.exponent)),
                    exponent: t.exponent.clone(),
                })
                .collect(),
            remainder: self.remainder.clone(),
        }
    }

    /// Expansion of `t -> f(1/t)` at the opposite end.
    pub fn invert(&self) -> Expansion {
        Expansion {
            end: self.end.opposite(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff,
                    exponent: -t.exponent.clone(),
                })
                .collect(),
            remainder: self.remainder.as_ref().map(|r| -r.clone()),
        }
    }

    pub fn abs(&self) -> Option<Expansion> {
        if self.is_identically_zero() {
            return Some(self.clone());
        }
        let lead = self.leading()?;
        Some(self.scale_coeffs(lead.coeff.signum()))
    }

    /// Expansion of `f^s` for an eventually positive `f`.
    pub fn power(&self, s: &Q) -> Option<Expansion> {
        if self.is_identically_zero() {
            return Some(self.clone());
        }
        if s.is_one() {
            return Some(self.clone());
        }
        if s.is_integer() && s.is_positive() && *s <= Q::from_integer(8.into()) {
            let n = s.to_integer().to_u32()?;
            let mut acc = self.clone();
            for _ in 1..n {
                acc = acc.mul(self);
            }
            return Some(acc);
        }
        let lead = self.leading()?;
        if lead.coeff <= 0.0 {
            return None;
        }
        let sf = to_f64(s);
        let e0 = &lead.exponent;
        let mut terms = vec![Term {
            coeff: lead.coeff.powf(sf),
            exponent: e0 * s,
        }];
        let mut remainder = None;
        let end = self.end;
        if let Some(second) = self.terms.get(1) {
            let gap = &second.exponent - e0;
            terms.push(Term {
                coeff: sf * lead.coeff.powf(sf - 1.0) * second.coeff,
                exponent: e0 * s + &gap,
            });
            remainder = Some(e0 * s + &gap + &gap);
            if let Some(third) = self.terms.get(2) {
                remainder = Self::more_dominant_remainder(end, remainder, Some(e0 * s + &third.exponent - e0));
            }
        }
        if let Some(r) = &self.remainder {
            remainder = Self::more_dominant_remainder(end, remainder, Some(e0 * s + r - e0));
        }
        Some(Expansion { end, terms, remainder }.normalize())
    }

    /// Term-wise derivative.
    pub fn derivative(&self) -> Expansion {
        let one = Q::one();
        Expansion {
            end: self.end,
            terms: self
                .terms
                .iter()
                .filter(|t| !t.exponent.is_zero())
                .map(|t| Term {
                    coeff: t.coeff * to_f64(&t.exponent),
                    exponent: &t.exponent - &one,
                })
                .collect(),
            remainder: self.remainder.as_ref().map(|r| r - &one),
        }
        .normalize()
    }

    /// Sum of the terms at `t`.
    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|x| x.coeff * t.powf(to_f64(&x.exponent))).sum()
    }
}
