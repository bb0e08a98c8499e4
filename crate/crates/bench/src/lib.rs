//! Shared fixtures for the benchmarks.

use sobolev_core::rational::{q, qi};
use sobolev_core::{EmbeddingParams, RadialProfile};

/// One holding tuple per case of the characterization.
pub fn holding_tuples() -> Vec<EmbeddingParams> {
    vec![
        EmbeddingParams::from_ints(3, 2, 0, 0, 2, 2),
        EmbeddingParams::new(3, q(1, 2), qi(-3), q(-5, 2), qi(2), qi(3)),
        EmbeddingParams::from_ints(2, 1, 1, -1, 2, 2),
        EmbeddingParams::from_ints(3, 1, 1, 9, 2, 12),
    ]
}

pub fn profiles() -> Vec<(&'static str, RadialProfile)> {
    vec![
        (
            "cutoff_power",
            RadialProfile::product(vec![RadialProfile::power(q(-1, 4)), RadialProfile::Cutoff]),
        ),
        ("log_bump", RadialProfile::log_bump(0.3, 1.2)),
        (
            "two_sided",
            RadialProfile::product(vec![RadialProfile::power(q(1, 2)), RadialProfile::log_bump(-0.5, 2.0)]),
        ),
    ]
}
