//! Shared inputs for the benchmarks.

use wgreedy::{realize, CompactSet, CompactSetSpec, NormKind};

pub fn random_ball(dim: usize, count: usize, kind: NormKind) -> CompactSet {
    realize(&CompactSetSpec::RandomBall { dim, count, seed: 7 }, kind).expect("valid set")
}

/// `count` columns of length `rows` from a fixed random ball.
pub fn snapshot_columns(rows: usize, count: usize) -> Vec<Vec<f64>> {
    random_ball(rows, count, NormKind::Hilbert)
        .elements
        .into_iter()
        .map(|e| e.into_vec())
        .collect()
}
