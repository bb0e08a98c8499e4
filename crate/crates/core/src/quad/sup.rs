//! `sup_t t^a |f(t)|` by log-grid scan, golden-section refinement and exact
//! end limits.

use num::{Signed, Zero};

use super::{DivergenceCertificate, QuadResult, RadialFn};
use crate::rational::{to_f64, Q};
use crate::testfun::End;

const GRID_POINTS: usize = 4000;

/// What `t^a |f(t)|` does beyond the extreme breakpoint at one end.
enum EndBehavior {
    /// Limit value; the scan must extend `extra` units of `s` past the edge.
    Limit {
        value: f64,
        extra: f64,
    },
    Divergent(DivergenceCertificate),
    Unknown,
}

fn end_behavior<F: RadialFn + ?Sized>(f: &F, a: &Q, end: End) -> EndBehavior {
    let Some(exp) = f.expansion(end) else {
        return EndBehavior::Unknown;
    };
    if exp.is_identically_zero() {
        return EndBehavior::Limit { value: 0.0, extra: 0.0 };
    }
    let Some(lead) = exp.leading() else {
        return EndBehavior::Unknown;
    };
    let total = a + &lead.exponent;
    let blows_up = match end {
        End::Zero => total.is_negative(),
        End::Infinity => total.is_positive(),
    };
    if blows_up {
        return EndBehavior::Divergent(DivergenceCertificate {
            direction: end,
            exponent: lead.exponent.clone(),
            integrand_exponent: total,
        });
    }
    let value = if total.is_zero() { lead.coeff.abs() } else { 0.0 };
    let extra = if exp.terms.len() == 1 && exp.is_exact() {
        0.0
    } else {
        30.0
    };
    EndBehavior::Limit { value, extra }
}

fn golden_max<G: Fn(f64) -> f64>(g: &G, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-14 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = g(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `sup_{t>0} t^a |f(t)|`.
pub fn weighted_sup_norm<F: RadialFn + ?Sized>(f: &F, a: &Q) -> QuadResult {
    let lo_end = end_behavior(f, a, End::Zero);
    let hi_end = end_behavior(f, a, End::Infinity);
    for b in [&lo_end, &hi_end] {
        if let EndBehavior::Divergent(cert) = b {
            return QuadResult::divergent(cert.clone());
        }
    }
    let bps: Vec<f64> = f.breakpoints().into_iter().map(f64::ln).collect();
    let extra = |b: &EndBehavior| match b {
        EndBehavior::Limit { extra, .. } => *extra,
        _ => 60.0,
    };
    let s_lo = bps.first().copied().unwrap_or(0.0) - 1.0 - extra(&lo_end);
    let s_hi = bps.last().copied().unwrap_or(0.0) + 1.0 + extra(&hi_end);

    let af = to_f64(a);
    // log of t^a |f(t)| at t = e^s
    let log_g = |s: f64| {
        let v = f.value(s.exp()).abs();
        if v == 0.0 {
            f64::NEG_INFINITY
        } else {
            af * s + v.ln()
        }
    };

    let mut grid: Vec<f64> = (0..GRID_POINTS)
        .map(|i| s_lo + (s_hi - s_lo) * i as f64 / (GRID_POINTS - 1) as f64)
        .collect();
    for &b in &bps {
        grid.extend([b, b - 1e-9, b + 1e-9]);
    }
    grid.sort_by(f64::total_cmp);
    let values: Vec<f64> = grid.iter().map(|&s| log_g(s)).collect();
    let mut best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    if best.is_finite() {
        for i in 0..grid.len() {
            let v = values[i];
            let left = if i > 0 { values[i - 1] } else { f64::NEG_INFINITY };
            let right = values.get(i + 1).copied().unwrap_or(f64::NEG_INFINITY);
            if v >= left && v >= right && v >= best - 1e-2 {
                let lo = grid[i.saturating_sub(1)];
                let hi = grid[(i + 1).min(grid.len() - 1)];
                if hi > lo {
                    let (_, refined) = golden_max(&log_g, lo, hi);
                    best = best.max(refined);
                }
            }
        }
    }

    let mut value = if best.is_finite() { best.exp() } else { 0.0 };
    let mut complete = true;
    for b in [&lo_end, &hi_end] {
        match b {
            EndBehavior::Limit { value: limit, .. } => value = value.max(*limit),
            EndBehavior::Unknown => complete = false,
            EndBehavior::Divergent(_) => unreachable!("handled above"),
        }
    }
    if !complete {
        // Without asymptotics, trust the scan only if the maximum is interior.
        let edge_max = values
            .first()
            .copied()
            .into_iter()
            .chain(values.last().copied())
            .fold(f64::NEG_INFINITY, f64::max);
        complete = edge_max < best - 1e-6;
    }
    let abs_error = value * 1e-12;
    if complete {
        QuadResult::converged(value, abs_error)
    } else {
        QuadResult {
            status: super::QuadStatus::MaxRefinementReached,
            ..QuadResult::converged(value, abs_error)
        }
    }
}
