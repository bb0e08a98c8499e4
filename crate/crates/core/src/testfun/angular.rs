//! Separable functions `u(tσ) = f(t) h(σ)` with closed-form angular means.

use serde::{Deserialize, Serialize};

use super::RadialProfile;

/// Angular factors whose sphere means of `|h|^s` are known in closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AngularFactor {
    /// `h ≡ 1`.
    Unit,
    /// `h ≡ k`.
    Constant { value: f64 },
    /// `h(σ) = |σ_1|^k`, `k > 0`.
    AbsFirstCoordPower { k: f64 },
}

impl AngularFactor {
    /// Mean of `|h|^s` over `S^{N-1}` with respect to normalized surface measure.
    pub fn mean(&self, s: f64, dim: u32) -> f64 {
        match self {
            AngularFactor::Unit => 1.0,
            AngularFactor::Constant { value } => value.abs().powf(s),
            AngularFactor::AbsFirstCoordPower { k } => {
                let n = f64::from(dim);
                let m = k * s;
                // Γ(N/2) Γ((m+1)/2) / (√π Γ((N+m)/2))
                (libm::lgamma(n / 2.0) + libm::lgamma((m + 1.0) / 2.0)
                    - 0.5 * std::f64::consts::PI.ln()
                    - libm::lgamma((n + m) / 2.0))
                .exp()
            }
        }
    }

    pub fn sup(&self) -> f64 {
        match self {
            AngularFactor::Unit => 1.0,
            AngularFactor::Constant { value } => value.abs(),
            AngularFactor::AbsFirstCoordPower { .. } => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparableFunction {
    pub radial: RadialProfile,
    pub angular: AngularFactor,
}

impl SeparableFunction {
    pub fn radial_only(radial: RadialProfile) -> Self {
        Self {
            radial,
            angular: AngularFactor::Unit,
        }
    }
}

/// `v(t) = (mean over the sphere of |u(tσ)|^s)^{1/s} = M_s^{1/s} |f(t)|`.
pub fn spherical_mean_power(u: &SeparableFunction, s: f64, dim: u32) -> RadialProfile {
    let factor = u.angular.mean(s, dim).powf(1.0 / s);
    RadialProfile::product(vec![
        RadialProfile::constant(factor),
        RadialProfile::abs(u.radial.clone()),
    ])
}
