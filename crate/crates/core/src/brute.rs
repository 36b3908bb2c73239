//! Naive reference implementations used as oracles by the test suites.
//!
//! Everything here is exhaustive enumeration, deliberately independent of
//! the solver and candidate machinery it is used to validate: direct
//! definitions, no bitsets, no branch-and-bound, no bisection shortcuts.

use crate::bitset::PointSet;
use crate::system::NdsSystem;

/// Members of the open Bowen ball by direct recomputation of `d_n`.
pub fn ball_members(sys: &NdsSystem, x: usize, n: usize, epsilon: f64) -> Vec<usize> {
    (0..sys.points())
        .filter(|&y| {
            let mut d: f64 = 0.0;
            let mut cx = x;
            let mut cy = y;
            for j in 0..n {
                if j > 0 {
                    let f = sys.map_at(j);
                    cx = f[cx];
                    cy = f[cy];
                }
                d = d.max(sys.distance(cx, cy));
            }
            d < epsilon
        })
        .collect()
}

/// Minimum total weight over all nonempty subcollections that cover the
/// universe; `None` when no subcollection covers. Exponential in the
/// candidate count; callers keep it at or below ~25 candidates.
pub fn min_cover_by_enumeration(
    universe: &[usize],
    sets: &[Vec<usize>],
    weights: &[f64],
) -> Option<f64> {
    assert!(sets.len() <= 25, "enumeration oracle is exponential; too many candidates");
    if universe.is_empty() {
        return Some(0.0);
    }
    let mut best: Option<f64> = None;
    for mask in 1u64..(1u64 << sets.len()) {
        let mut total = 0.0;
        for (i, w) in weights.iter().enumerate() {
            if mask >> i & 1 == 1 {
                total += w;
            }
        }
        if best.is_some_and(|b| total >= b) {
            continue;
        }
        let covered = universe.iter().all(|&p| {
            (0..sets.len()).any(|i| mask >> i & 1 == 1 && sets[i].contains(&p))
        });
        if covered {
            best = Some(total);
        }
    }
    best
}

/// Minimal-cardinality cover of `z` by single-length Bowen balls, by
/// enumeration over subsets of centers; the unweighted capacity count.
pub fn min_ball_cover_cardinality(
    sys: &NdsSystem,
    z: &PointSet,
    n: usize,
    epsilon: f64,
) -> Option<usize> {
    let p = sys.points();
    assert!(p <= 25);
    let balls: Vec<Vec<usize>> = (0..p).map(|x| ball_members(sys, x, n, epsilon)).collect();
    let need: Vec<usize> = z.to_indices();
    let mut best: Option<usize> = None;
    for mask in 1u64..(1u64 << p) {
        let size = mask.count_ones() as usize;
        if best.is_some_and(|b| size >= b) {
            continue;
        }
        let covered = need.iter().all(|&pt| {
            (0..p).any(|x| mask >> x & 1 == 1 && balls[x].contains(&pt))
        });
        if covered {
            best = Some(size);
        }
    }
    best
}

/// Minimum weighted spanning value by enumerating center subsets
/// (`d_n <= eps` convention).
pub fn min_spanning_by_enumeration(
    sys: &NdsSystem,
    z: &PointSet,
    n: usize,
    epsilon: f64,
    weighted: bool,
) -> f64 {
    let p = sys.points();
    assert!(p <= 20);
    let need: Vec<usize> = z.to_indices();
    let w: Vec<f64> = (0..p)
        .map(|x| if weighted { sys.birkhoff_sum(x, n).exp() } else { 1.0 })
        .collect();
    let mut best = f64::INFINITY;
    for mask in 1u64..(1u64 << p) {
        let total: f64 = (0..p).filter(|&x| mask >> x & 1 == 1).map(|x| w[x]).sum();
        if total >= best {
            continue;
        }
        let spans = need.iter().all(|&y| {
            (0..p).any(|x| mask >> x & 1 == 1 && sys.bowen_distance(x, y, n) <= epsilon)
        });
        if spans {
            best = total;
        }
    }
    best
}

/// Maximum weighted separated value by enumerating subsets of `z`
/// (`d_n > eps` convention).
pub fn max_separated_by_enumeration(
    sys: &NdsSystem,
    z: &PointSet,
    n: usize,
    epsilon: f64,
    weighted: bool,
) -> f64 {
    let pts: Vec<usize> = z.to_indices();
    assert!(pts.len() <= 20);
    let mut best = 0.0f64;
    for mask in 1u64..(1u64 << pts.len()) {
        let picked: Vec<usize> =
            (0..pts.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pts[i]).collect();
        let separated = picked.iter().enumerate().all(|(ai, &a)| {
            picked[ai + 1..].iter().all(|&b| sys.bowen_distance(a, b, n) > epsilon)
        });
        if separated {
            let total: f64 = picked
                .iter()
                .map(|&x| if weighted { sys.birkhoff_sum(x, n).exp() } else { 1.0 })
                .sum();
            best = best.max(total);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::generators::{circle_metric, doubling_map};

    #[test]
    fn enumeration_cover_example() {
        let best = min_cover_by_enumeration(
            &[0, 1, 2],
            &[vec![0, 1], vec![1, 2], vec![0, 1, 2]],
            &[1.0, 1.0, 1.9],
        )
        .unwrap();
        assert!((best - 1.9).abs() < 1e-12);
        assert_eq!(min_cover_by_enumeration(&[0, 3], &[vec![0]], &[1.0]), None);
        assert_eq!(min_cover_by_enumeration(&[], &[vec![0]], &[1.0]), Some(0.0));
    }

    #[test]
    fn ball_members_match_direct_definition() {
        let sys =
            NdsSystem::autonomous(circle_metric(8), doubling_map(8), vec![0.0; 8]).unwrap();
        assert_eq!(ball_members(&sys, 0, 2, 0.2), vec![0]);
        assert_eq!(ball_members(&sys, 0, 2, 0.26), vec![0, 1, 7]);
        let b = sys.bowen_ball(0, 2, 0.26);
        assert_eq!(b.members.to_indices(), ball_members(&sys, 0, 2, 0.26));
    }
}
