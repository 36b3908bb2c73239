use thiserror::Error;

/// Validation failures when constructing a system or one of its parts.
#[derive(Debug, Error)]
pub enum SystemError {
    #[error("system must have at least one point")]
    NoPoints,
    #[error("metric must be a square {expected}x{expected} matrix, got row of length {got}")]
    MetricShape { expected: usize, got: usize },
    #[error("metric[{x}][{x}] = {value}, diagonal must be zero")]
    MetricDiagonal { x: usize, value: f64 },
    #[error("metric[{x}][{y}] = {xy} differs from metric[{y}][{x}] = {yx}")]
    MetricAsymmetric { x: usize, y: usize, xy: f64, yx: f64 },
    #[error("metric[{x}][{y}] = {value} is not a finite non-negative number")]
    MetricNegative { x: usize, y: usize, value: f64 },
    #[error("triangle inequality fails: d({x},{z}) = {dxz} > d({x},{y}) + d({y},{z}) = {via}")]
    MetricTriangle { x: usize, y: usize, z: usize, dxz: f64, via: f64 },
    #[error("map sequence needs at least one periodic map")]
    NoMaps,
    #[error("map table {index} has length {got}, expected {expected}")]
    MapShape { index: usize, got: usize, expected: usize },
    #[error("map table {index} sends {point} to {image}, outside 0..{points}")]
    MapRange { index: usize, point: usize, image: usize, points: usize },
    #[error("potential has length {got}, expected {expected}")]
    PotentialShape { got: usize, expected: usize },
    #[error("potential[{x}] = {value} is not finite")]
    PotentialNonFinite { x: usize, value: f64 },
    #[error("open cover set {index} is empty")]
    EmptyCoverSet { index: usize },
    #[error("open cover does not cover the space: point {point} missing")]
    CoverIncomplete { point: usize },
    #[error("measure weights must be non-negative, got {value} at point {point}")]
    MeasureNegative { point: usize, value: f64 },
    #[error("measure weights sum to {sum}, expected 1 within 1e-12")]
    MeasureNotNormalized { sum: f64 },
    #[error("point index {index} out of range 0..{points}")]
    PointOutOfRange { index: usize, points: usize },
}

/// Failures raised by the cover-pressure engine.
#[derive(Debug, Error)]
pub enum CoverError {
    #[error("candidate generation would produce {estimated} candidates, over the limit {limit}")]
    CandidateExplosion { estimated: u128, limit: usize },
    #[error("cover problem is infeasible: point {point} is not covered by any candidate")]
    Infeasible { point: usize },
    #[error("no sign change found for the critical exponent after {doublings} bracket doublings")]
    BracketFailure { doublings: usize },
    #[error("scale window is empty: n_lo {n_lo} > n_hi {n_hi}")]
    EmptyWindow { n_lo: usize, n_hi: usize },
    #[error("universe is empty; critical exponents are undefined on the empty set")]
    EmptyUniverse,
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Failures raised by the property-check harness.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("map pair does not leave the set invariant: f{which}(Z) escapes Z and Z escapes f{which}(Z)")]
    InvalidInvariance { which: usize },
    #[error("not a semiconjugacy: pi(f_{i}(x)) != g_{i}(pi(x)) at point {point}")]
    NotSemiconjugate { i: usize, point: usize },
    #[error("factor map is not surjective onto the target: point {point} has no preimage")]
    NotSurjective { point: usize },
    #[error("factor map table has length {got}, expected {expected}")]
    FactorShape { got: usize, expected: usize },
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    System(#[from] SystemError),
}
