//! Minimum-weight set cover over bitset universes.
//!
//! The exact solver is a branch-and-bound: branch on the uncovered point
//! with the fewest covering candidates, seeded with the greedy incumbent
//! and pruned by an admissible fractional bound
//! `sum_p min_{c covering p} w_c / |c ∩ uncovered|`. The greedy solver is
//! the classic weight-per-newly-covered-point heuristic, which stays
//! within a `1 + ln|Z|` factor of the optimum and always upper-bounds it.

use crate::bitset::PointSet;
use crate::error::CoverError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Exact,
    Greedy,
    /// Exact for universes up to 24 points and at most 5000 candidates,
    /// greedy beyond.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverStatus {
    Exact,
    Greedy,
}

impl SolverStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverStatus::Exact => "exact",
            SolverStatus::Greedy => "greedy",
        }
    }
}

pub const AUTO_EXACT_MAX_UNIVERSE: usize = 24;
pub const AUTO_EXACT_MAX_CANDIDATES: usize = 5000;

pub fn resolve_solver(kind: SolverKind, universe_len: usize, candidates: usize) -> SolverStatus {
    match kind {
        SolverKind::Exact => SolverStatus::Exact,
        SolverKind::Greedy => SolverStatus::Greedy,
        SolverKind::Auto => {
            if universe_len <= AUTO_EXACT_MAX_UNIVERSE && candidates <= AUTO_EXACT_MAX_CANDIDATES {
                SolverStatus::Exact
            } else {
                SolverStatus::Greedy
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct CoverSolution {
    pub value: f64,
    /// Indices into the caller's candidate list, in selection order.
    pub chosen: Vec<usize>,
    pub status: SolverStatus,
}

/// Minimum-weight cover of `universe` by the given masks. The empty
/// universe is covered by the empty collection at cost zero.
pub fn solve_min_cover(
    universe: &PointSet,
    masks: &[PointSet],
    weights: &[f64],
    kind: SolverKind,
) -> Result<CoverSolution, CoverError> {
    debug_assert_eq!(masks.len(), weights.len());
    let status = resolve_solver(kind, universe.len(), masks.len());
    if universe.is_empty() {
        return Ok(CoverSolution { value: 0.0, chosen: Vec::new(), status });
    }
    let mut union = PointSet::empty(universe.capacity());
    for m in masks {
        union.union_with(m);
    }
    for p in universe.iter() {
        if !union.contains(p) {
            return Err(CoverError::Infeasible { point: p });
        }
    }
    let (value, chosen) = match status {
        SolverStatus::Greedy => greedy_cover(universe, masks, weights),
        SolverStatus::Exact => exact_cover(universe, masks, weights),
    };
    Ok(CoverSolution { value, chosen, status })
}

fn greedy_cover(universe: &PointSet, masks: &[PointSet], weights: &[f64]) -> (f64, Vec<usize>) {
    let mut uncovered = universe.clone();
    let mut total = 0.0;
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let mut best: Option<(f64, usize)> = None;
        for (i, mask) in masks.iter().enumerate() {
            let gain = mask.intersection_len(&uncovered);
            if gain == 0 {
                continue;
            }
            let ratio = weights[i] / gain as f64;
            // strict comparison keeps the lowest index on ties
            if best.map_or(true, |(r, _)| ratio < r) {
                best = Some((ratio, i));
            }
        }
        let (_, i) = best.expect("feasibility checked before greedy");
        total += weights[i];
        uncovered.subtract(&masks[i]);
        chosen.push(i);
    }
    (total, chosen)
}

struct ExactState<'a> {
    masks: &'a [PointSet],
    weights: &'a [f64],
    /// For each point, candidates covering it sorted by (weight, index).
    coverers: Vec<Vec<usize>>,
    best: f64,
    best_chosen: Vec<usize>,
}

fn exact_cover(universe: &PointSet, masks: &[PointSet], weights: &[f64]) -> (f64, Vec<usize>) {
    let (greedy_value, greedy_chosen) = greedy_cover(universe, masks, weights);
    let mut coverers: Vec<Vec<usize>> = vec![Vec::new(); universe.capacity()];
    for (i, mask) in masks.iter().enumerate() {
        for p in mask.iter() {
            if universe.contains(p) {
                coverers[p].push(i);
            }
        }
    }
    for list in coverers.iter_mut() {
        list.sort_by(|&a, &b| {
            weights[a].partial_cmp(&weights[b]).unwrap().then(a.cmp(&b))
        });
    }
    let mut state = ExactState {
        masks,
        weights,
        coverers,
        best: greedy_value,
        best_chosen: greedy_chosen,
    };
    let mut stack = Vec::new();
    branch(&mut state, universe.clone(), 0.0, &mut stack);
    (state.best, state.best_chosen)
}

fn fractional_bound(state: &ExactState<'_>, uncovered: &PointSet) -> f64 {
    let mut bound = 0.0;
    for p in uncovered.iter() {
        let mut cheapest = f64::INFINITY;
        for &c in &state.coverers[p] {
            let gain = state.masks[c].intersection_len(uncovered);
            let r = state.weights[c] / gain as f64;
            if r < cheapest {
                cheapest = r;
            }
        }
        bound += cheapest;
    }
    bound
}

fn branch(state: &mut ExactState<'_>, uncovered: PointSet, cost: f64, chosen: &mut Vec<usize>) {
    if uncovered.is_empty() {
        if cost < state.best {
            state.best = cost;
            state.best_chosen = chosen.clone();
        }
        return;
    }
    if cost + fractional_bound(state, &uncovered) >= state.best {
        return;
    }
    // branch on the most constrained uncovered point
    let mut pivot = usize::MAX;
    let mut fewest = usize::MAX;
    for p in uncovered.iter() {
        let n = state.coverers[p].len();
        if n < fewest {
            fewest = n;
            pivot = p;
        }
    }
    let options = state.coverers[pivot].clone();
    for c in options {
        let mut rest = uncovered.clone();
        rest.subtract(&state.masks[c]);
        chosen.push(c);
        branch(state, rest, cost + state.weights[c], chosen);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(cap: usize, pts: &[usize]) -> PointSet {
        PointSet::from_indices(cap, pts)
    }

    #[test]
    fn empty_universe_costs_nothing() {
        let u = PointSet::empty(4);
        let sol = solve_min_cover(&u, &[], &[], SolverKind::Exact).unwrap();
        assert_eq!(sol.value, 0.0);
        assert!(sol.chosen.is_empty());
    }

    #[test]
    fn single_candidate() {
        let u = mask(3, &[0, 1, 2]);
        let sol =
            solve_min_cover(&u, &[mask(3, &[0, 1, 2])], &[2.5], SolverKind::Exact).unwrap();
        assert_eq!(sol.value, 2.5);
        assert_eq!(sol.chosen, vec![0]);
    }

    #[test]
    fn exact_beats_greedy_pairing() {
        // {0,1} + {1,2} costs 2.0 but the big set costs 1.9
        let u = mask(3, &[0, 1, 2]);
        let masks = [mask(3, &[0, 1]), mask(3, &[1, 2]), mask(3, &[0, 1, 2])];
        let weights = [1.0, 1.0, 1.9];
        let sol = solve_min_cover(&u, &masks, &weights, SolverKind::Exact).unwrap();
        assert_eq!(sol.value, 1.9);
        assert_eq!(sol.chosen, vec![2]);
        let greedy = solve_min_cover(&u, &masks, &weights, SolverKind::Greedy).unwrap();
        assert!(greedy.value >= sol.value);
    }

    #[test]
    fn infeasible_reports_missing_point() {
        let u = mask(3, &[0, 1, 2]);
        let err = solve_min_cover(&u, &[mask(3, &[0, 1])], &[1.0], SolverKind::Exact);
        assert!(matches!(err, Err(CoverError::Infeasible { point: 2 })));
    }

    #[test]
    fn greedy_is_deterministic_on_ties() {
        let u = mask(2, &[0, 1]);
        let masks = [mask(2, &[0, 1]), mask(2, &[0, 1])];
        let sol = solve_min_cover(&u, &masks, &[1.0, 1.0], SolverKind::Greedy).unwrap();
        assert_eq!(sol.chosen, vec![0]);
    }
}
