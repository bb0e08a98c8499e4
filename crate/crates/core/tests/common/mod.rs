//! Tuple generators, an independent transcription of the characterization,
//! and closed-form quadrature fixtures shared by the integration tests.
#![allow(dead_code)]

use num::{Signed, Zero};
use rand::Rng;
use sobolev_core::rational::{q, qi, to_f64};
use sobolev_core::testfun::{kelvin_image, RadialProfile};
use sobolev_core::verify::{hardy_check, NamedProfile};
use sobolev_core::{
    integrate_power_weighted, weighted_lr_norm, weighted_lr_norm_on, weighted_sup_norm, Case, EmbeddingParams,
    Equation, LogRange, Q,
};

pub fn rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, dens: &[i64]) -> Q {
    let d = dens[rng.gen_range(0..dens.len())];
    Q::new(rng.gen_range(lo * d..=hi * d).into(), d.into())
}

/// A valid tuple with small denominators, so that boundaries are hit often.
pub fn random_tuple<R: Rng>(rng: &mut R) -> EmbeddingParams {
    let dens = [1, 2, 3, 4];
    let dim: u32 = rng.gen_range(1..=5);
    let p = qi(1) + rational(rng, 0, 5, &dens).abs();
    let r = if dim == 1 && rng.gen_bool(0.3) {
        Q::new(rng.gen_range(1..=4).into(), 4.into())
    } else {
        qi(1) + rational(rng, 0, 11, &dens).abs()
    };
    EmbeddingParams::new(
        dim,
        rational(rng, -6, 6, &dens),
        rational(rng, -8, 8, &dens),
        rational(rng, -12, 12, &dens),
        p,
        r,
    )
}

pub fn p_star(params: &EmbeddingParams) -> Option<Q> {
    let n = params.n();
    (params.p < n).then(|| &n * &params.p / (&n - &params.p))
}

pub fn c0(params: &EmbeddingParams) -> Q {
    &params.a * &params.r - params.n()
}

pub fn c1(params: &EmbeddingParams) -> Q {
    &params.r * (&params.b - &params.p + params.n()) / &params.p - params.n()
}

/// Tuples placed on each boundary of the characterization, derived from `base`.
pub fn boundary_variants(base: &EmbeddingParams) -> Vec<EmbeddingParams> {
    let n = base.n();
    let mut out = vec![base.with_c(c0(base)), base.with_c(c1(base))];
    // b - p = -N
    let on_minus_n = EmbeddingParams {
        b: &base.p - &n,
        ..base.clone()
    };
    out.push(on_minus_n.with_c(c0(&on_minus_n)));
    out.push(on_minus_n.clone());
    // ap - N = b - p
    let degenerate = EmbeddingParams {
        b: &base.a * &base.p - &n + &base.p,
        ..base.clone()
    };
    out.push(degenerate.with_c(c1(&degenerate)));
    out.push(degenerate.clone());
    // r = p and r = p*
    let r_eq_p = EmbeddingParams {
        r: base.p.clone(),
        ..base.clone()
    };
    out.push(r_eq_p.with_c(c1(&r_eq_p)));
    out.push(r_eq_p.clone());
    if let Some(ps) = p_star(base) {
        let r_eq_ps = EmbeddingParams {
            r: ps.clone(),
            ..base.clone()
        };
        out.push(r_eq_ps.with_c(c1(&r_eq_ps)));
        // θ_c = p*/r
        let (lo, hi) = (c0(base), c1(base));
        if lo != hi {
            let w = &ps / &base.r;
            out.push(base.with_c(&w * &hi + (qi(1) - &w) * &lo));
        }
    }
    out.retain(|p| p.validate().is_ok());
    out
}

/// Literal reading of the characterization: holding case, θ and inequality.
pub fn literal_characterization(params: &EmbeddingParams) -> Option<(Case, Q, Equation)> {
    let EmbeddingParams { a, b, c, p, r, .. } = params;
    if a.is_zero() {
        return None;
    }
    let n = params.n();
    let (c0, c1) = (c0(params), c1(params));
    let ps = p_star(params);
    let theta = (c0 != c1).then(|| (c - &c0) / (&c1 - &c0));
    let theta_ok = match (&ps, &theta) {
        (Some(ps), Some(t)) => t * r <= *ps,
        _ => true,
    };
    let open = |x: &Q, e1: &Q, e2: &Q| (e1 < x && x < e2) || (e2 < x && x < e1);
    let side = a * (b - p + &n);
    let degenerate = a * p - &n == b - p;
    let r_le_ps = ps.as_ref().is_none_or(|ps| r <= ps);

    if side >= Q::zero() && !degenerate && open(c, &c0, &c1) && theta_ok {
        return Some((Case::I, theta.expect("distinct"), Equation::Eq8));
    }
    if side.is_negative() && open(c, &c0, &(-n.clone())) && theta_ok {
        return Some((Case::II, theta.expect("distinct"), Equation::Eq8));
    }
    if p <= r && r_le_ps && side.is_positive() && *c == c1 {
        return Some(if degenerate {
            (Case::III, qi(1), Equation::Eq9)
        } else {
            (Case::III, qi(1), Equation::Eq8)
        });
    }
    if let Some(ps) = &ps {
        if r > ps && degenerate && *c == c1 {
            return Some((Case::IV, ps / r, Equation::Eq10));
        }
    }
    None
}

pub struct QuadFixture {
    pub name: String,
    pub expected: f64,
    pub compute: Box<dyn Fn() -> f64>,
}

fn fixture(name: impl Into<String>, expected: f64, compute: impl Fn() -> f64 + 'static) -> QuadFixture {
    QuadFixture {
        name: name.into(),
        expected,
        compute: Box::new(compute),
    }
}

fn two_powers(e: Q, f: Q) -> RadialProfile {
    RadialProfile::piecewise(1.0, RadialProfile::power(e), RadialProfile::power(f))
}

/// Closed-form norms of piecewise power profiles.
pub fn quadrature_fixtures() -> Vec<QuadFixture> {
    const TOL: f64 = 1e-12;
    let mut out = vec![
        fixture("value-4: 1 on (0,1), t^-2 after, N=1, r=1", 4.0, || {
            let f = RadialProfile::piecewise(1.0, RadialProfile::constant(1.0), RadialProfile::power(qi(-2)));
            weighted_lr_norm(&f, &qi(0), &qi(1), 1, 2.0, TOL).value
        }),
        fixture("hardy lhs, alpha=-3, p=2, g = t on (0,1)", 0.5, || {
            let g = RadialProfile::piecewise(1.0, RadialProfile::power(qi(1)), RadialProfile::constant(0.0));
            hardy_check(&qi(-3), &qi(2), &g, TOL).expect("finite").lhs
        }),
        fixture("hardy rhs, alpha=-3, p=2, g = t on (0,1)", 0.5f64.sqrt(), || {
            let g = RadialProfile::piecewise(1.0, RadialProfile::power(qi(1)), RadialProfile::constant(0.0));
            hardy_check(&qi(-3), &qi(2), &g, TOL).expect("finite").rhs
        }),
    ];
    // ∫ t^w |f|^q with f = t^e below 1 and t^g above: 1/(κ0+1) - 1/(κ1+1)
    let cases: [(Q, Q, Q, Q); 10] = [
        (qi(0), qi(-2), qi(0), qi(1)),
        (q(1, 2), q(-3, 2), qi(1), qi(2)),
        (qi(2), qi(-3), qi(2), q(3, 2)),
        (q(-1, 3), qi(-1), q(1, 2), qi(3)),
        (qi(1), qi(-4), q(-1, 2), q(5, 2)),
        (q(1, 4), q(-5, 4), q(1, 3), q(7, 3)),
        (qi(3), qi(-2), qi(-1), qi(1)),
        (q(-1, 5), q(-7, 5), qi(0), qi(4)),
        (q(2, 3), q(-2, 3), q(1, 2), qi(6)),
        (qi(5), qi(-8), qi(2), q(1, 2)),
    ];
    for (e, g, w, qq) in cases {
        let k0 = to_f64(&(&w + &e * &qq));
        let k1 = to_f64(&(&w + &g * &qq));
        let expected = 1.0 / (k0 + 1.0) - 1.0 / (k1 + 1.0);
        let name = format!("piecewise t^{e}|t^{g}, weight t^{w}, power {qq}");
        out.push(fixture(name, expected, move || {
            integrate_power_weighted(&two_powers(e.clone(), g.clone()), &w, &qq, LogRange::FULL, TOL).value
        }));
    }
    // Norms with the sphere factor: (|S| ∫ t^{c+N-1} |f|^r)^{1/r}
    for (dim, e, g, c, r) in [
        (3u32, qi(0), qi(-4), qi(0), qi(1)),
        (2, q(1, 2), qi(-2), qi(-1), qi(2)),
        (4, qi(1), qi(-5), qi(1), q(3, 2)),
    ] {
        let nn = qi(i64::from(dim));
        let k0 = to_f64(&(&c + &nn - qi(1) + &e * &r));
        let k1 = to_f64(&(&c + &nn - qi(1) + &g * &r));
        let area = sobolev_core::sphere_area(dim);
        let expected = (area * (1.0 / (k0 + 1.0) - 1.0 / (k1 + 1.0))).powf(1.0 / to_f64(&r));
        out.push(fixture(
            format!("norm in R^{dim} of t^{e}|t^{g}, c={c}, r={r}"),
            expected,
            move || weighted_lr_norm(&two_powers(e.clone(), g.clone()), &c, &r, dim, area, TOL).value,
        ));
    }
    // dilation: f(λt) for the value-4 profile gives 4/λ
    for lambda in [0.01, 7.5] {
        out.push(fixture(
            format!("value-4 profile dilated by {lambda}"),
            4.0 / lambda,
            move || {
                let f = RadialProfile::piecewise(1.0, RadialProfile::constant(1.0), RadialProfile::power(qi(-2)));
                weighted_lr_norm(&RadialProfile::scale(lambda, f), &qi(0), &qi(1), 1, 2.0, TOL).value
            },
        ));
    }
    // inversion: f(1/t) against the weight t^{-2-w} has the same integral
    out.push(fixture(
        "inverted t|t^-3 against weight t^-2",
        1.0 / 2.0 + 1.0 / 2.0,
        || {
            let f = kelvin_image(&two_powers(qi(1), qi(-3)));
            integrate_power_weighted(&f, &qi(-2), &qi(1), LogRange::FULL, TOL).value
        },
    ));
    // ∫_ε^{1/ε} dt/t = 2 k ln 2
    out.push(fixture(
        "truncated log divergence, k = 40",
        80.0 * std::f64::consts::LN_2,
        || {
            weighted_lr_norm_on(
                &RadialProfile::constant(1.0),
                &qi(-1),
                &qi(1),
                1,
                1.0,
                LogRange::symmetric_dyadic(40.0),
                TOL,
            )
            .value
        },
    ));
    // sums of powers on (0,1): ∫ t^w (t + t^2) = 1/(w+2) + 1/(w+3)
    out.push(fixture("t + t^2 on (0,1) against t^1/2", 1.0 / 2.5 + 1.0 / 3.5, || {
        let f = RadialProfile::piecewise(
            1.0,
            RadialProfile::sum(vec![RadialProfile::power(qi(1)), RadialProfile::power(qi(2))]),
            RadialProfile::constant(0.0),
        );
        integrate_power_weighted(&f, &q(1, 2), &qi(1), LogRange::FULL, TOL).value
    }));
    // derivative: ∫_0^1 t^w |e t^{e-1}|^q
    out.push(fixture(
        "gradient of t^3 on (0,1), weight t^0, power 2",
        9.0 / 5.0,
        || {
            let f = RadialProfile::piecewise(1.0, RadialProfile::power(qi(3)), RadialProfile::constant(1.0));
            integrate_power_weighted(&sobolev_core::quad::Derivative(&f), &qi(0), &qi(2), LogRange::FULL, TOL).value
        },
    ));
    // sup norms
    out.push(fixture("sup of t^1/2 * (t^-1/2 | t^-2)", 1.0, || {
        weighted_sup_norm(&two_powers(q(-1, 2), qi(-2)), &q(1, 2)).value
    }));
    out.push(fixture("sup of t * (3t^-1 | 3t^-1)", 3.0, || {
        let f = RadialProfile::product(vec![RadialProfile::constant(3.0), RadialProfile::power(qi(-1))]);
        weighted_sup_norm(&f, &qi(1)).value
    }));
    out
}

/// Fifty nonnegative profiles integrable at the origin with finite Hardy
/// right-hand side for `α < -1`, `p >= 1`.
pub fn hardy_family(alpha: &Q, p: &Q) -> Vec<NamedProfile> {
    let mut out = Vec::new();
    // g = t^β ζ needs α + p + βp > -1 at 0 and β > -1 for the primitive
    let lo = ((-(alpha + p) - qi(1)) / p).max(qi(-1));
    for i in 0..25 {
        let beta = &lo + q(i + 1, 8);
        out.push(NamedProfile::new(
            format!("cutoff_power_{i}"),
            RadialProfile::product(vec![RadialProfile::power(beta), RadialProfile::Cutoff]),
        ));
    }
    for i in 0..25 {
        let center = -2.0 + 0.16 * f64::from(i);
        let width = 0.3 + 0.1 * f64::from(i % 7);
        out.push(NamedProfile::new(
            format!("log_bump_{i}"),
            RadialProfile::log_bump(center, width),
        ));
    }
    out
}

fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

fn moderate(params: &EmbeddingParams) -> bool {
    let n = params.n();
    params.r >= qi(1)
        && params.p <= qi(4)
        && params.a.abs() >= q(1, 4)
        && (&params.b - &params.p + &n).abs() <= qi(6)
        && (&params.c + &n).abs() <= qi(12)
}

/// `per_case` holding tuples for each of the four cases, drawn from the
/// midpoint of `[c0, c1]`, the midpoint of `[c0, -N]` and the endpoint `c1`.
pub fn holding_sample(per_case: usize, seed: u64) -> Vec<(Case, EmbeddingParams)> {
    use sobolev_core::decide_embedding;
    let mut rng = seeded(seed);
    let mut counts = [0usize; 4];
    let mut out = Vec::new();
    let mut attempts = 0;
    while counts.iter().any(|&k| k < per_case) && attempts < 1_000_000 {
        attempts += 1;
        let mut base = random_tuple(&mut rng);
        if rng.gen_bool(0.3) {
            // degenerate: b - p = ap - N
            base.b = &base.a * &base.p - base.n() + &base.p;
        }
        let n = base.n();
        let candidates = [
            base.with_c((c0(&base) + c1(&base)) / qi(2)),
            base.with_c((c0(&base) - &n) / qi(2)),
            base.with_c(c1(&base)),
        ];
        for p in candidates {
            if !moderate(&p) {
                continue;
            }
            let v = decide_embedding(&p).unwrap();
            if let Some(case) = v.case_label {
                if counts[case.index()] < per_case {
                    counts[case.index()] += 1;
                    out.push((case, p));
                }
            }
        }
    }
    out
}

/// Failing tuples, up to `per_tag` for every failure tag (and for both signs
/// of the degeneracy in the `c = c1, r < p` failure).
pub fn failing_sample(per_tag: usize, seed: u64) -> Vec<EmbeddingParams> {
    use sobolev_core::{decide_embedding, FailureTag};
    let mut rng = seeded(seed);
    let slot = |tag: FailureTag, degenerate: bool| -> usize {
        match tag {
            FailureTag::AZero => 0,
            FailureTag::COutsideClosedInterval => 1,
            FailureTag::CEqualsC0 => 2,
            FailureTag::T2ivBeyondMinusN => 3,
            FailureTag::ThetaExceedsPStarOverR => 4,
            FailureTag::C1NotContinuousForRLessP if degenerate => 5,
            FailureTag::C1NotContinuousForRLessP => 6,
            FailureTag::T1iiiRangeViolated => 7,
        }
    };
    let mut counts = [0usize; 8];
    let mut out = Vec::new();
    for _ in 0..1_000_000 {
        if counts[..7].iter().all(|&k| k >= per_tag) {
            break;
        }
        let mut base = random_tuple(&mut rng);
        if rng.gen_bool(0.2) {
            base.b = &base.a * &base.p - base.n() + &base.p;
        }
        if rng.gen_bool(0.1) {
            base.a = Q::zero();
        }
        let mut candidates = boundary_variants(&base);
        candidates.push(base);
        for p in candidates {
            if !(moderate(&p) || p.a.is_zero()) || p.r < qi(1) {
                continue;
            }
            let v = decide_embedding(&p).unwrap();
            let Some(reason) = v.failure else { continue };
            let s = slot(reason.tag, reason.scaling_exponent_k.is_none());
            if counts[s] < per_tag {
                counts[s] += 1;
                out.push(p);
            }
        }
    }
    out
}

/// Profiles vanishing at the named end, with sample points.
pub fn lemma5_fixtures() -> Vec<(RadialProfile, sobolev_core::End, Vec<f64>)> {
    use sobolev_core::End;
    let samples: Vec<f64> = (1..60).map(|i| 0.05 * f64::from(i)).collect();
    let far: Vec<f64> = (1..60).map(|i| 0.5 * f64::from(i)).collect();
    let mut out = Vec::new();
    for e in [q(1, 2), qi(1), qi(2), q(7, 3)] {
        out.push((
            RadialProfile::product(vec![RadialProfile::power(e), RadialProfile::Cutoff]),
            End::Zero,
            samples.clone(),
        ));
    }
    for (c, w) in [(0.0, 1.0), (-1.0, 0.5), (1.5, 2.0)] {
        out.push((RadialProfile::log_bump(c, w), End::Zero, samples.clone()));
        out.push((RadialProfile::log_bump(c, w), End::Infinity, far.clone()));
    }
    for e in [q(-1, 2), qi(-2)] {
        out.push((
            RadialProfile::product(vec![RadialProfile::power(e), RadialProfile::OneMinusCutoff]),
            End::Infinity,
            far.clone(),
        ));
    }
    out
}

/// Pairs `(u, params)` with `p < N` and `r > p*`.
pub fn lemma14_pairs() -> Vec<(RadialProfile, EmbeddingParams)> {
    let tuples = [
        EmbeddingParams::from_ints(3, 1, 0, 4, 2, 12),
        EmbeddingParams::from_ints(3, 1, 1, 9, 2, 12),
        EmbeddingParams::new(3, q(1, 2), qi(0), qi(1), qi(2), qi(8)),
        EmbeddingParams::new(4, q(3, 4), q(1, 2), qi(2), qi(2), qi(6)),
        EmbeddingParams::new(5, qi(1), qi(0), qi(3), qi(3), q(17, 2)),
    ];
    let profiles = [
        RadialProfile::product(vec![RadialProfile::power(q(-1, 4)), RadialProfile::Cutoff]),
        RadialProfile::log_bump(0.2, 0.9),
        RadialProfile::product(vec![RadialProfile::power(q(1, 2)), RadialProfile::log_bump(-0.5, 1.5)]),
    ];
    let mut out = Vec::new();
    for t in &tuples {
        for f in &profiles {
            out.push((f.clone(), t.clone()));
        }
    }
    out
}

/// Separable functions for the spherical-mean comparison.
pub fn symmetrization_table() -> Vec<(sobolev_core::SeparableFunction, EmbeddingParams)> {
    use sobolev_core::{AngularFactor, SeparableFunction};
    let radials = [
        RadialProfile::product(vec![RadialProfile::power(q(1, 2)), RadialProfile::Cutoff]),
        RadialProfile::log_bump(0.0, 1.0),
    ];
    let angulars = [
        AngularFactor::Unit,
        AngularFactor::Constant { value: 2.5 },
        AngularFactor::AbsFirstCoordPower { k: 1.0 },
        AngularFactor::AbsFirstCoordPower { k: 0.5 },
        AngularFactor::AbsFirstCoordPower { k: 3.0 },
    ];
    let params = [
        EmbeddingParams::from_ints(3, 1, 0, 0, 2, 6),
        EmbeddingParams::new(2, q(1, 2), qi(0), qi(-1), q(3, 2), qi(3)),
    ];
    let mut out = Vec::new();
    for p in &params {
        for f in &radials {
            for h in &angulars {
                out.push((
                    SeparableFunction {
                        radial: f.clone(),
                        angular: h.clone(),
                    },
                    p.clone(),
                ));
            }
        }
    }
    out
}
