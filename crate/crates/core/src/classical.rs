//! Classical pressures from spanning and separated sets, and the
//! sup-entropy built from the worst starting time.
//!
//! Conventions: spanning uses `d_n <= eps`, separation uses `d_n > eps`.
//! (Bowen-ball covers in [`crate::cover`] use the strict `d_n < eps`;
//! the two conventions are deliberate and fixed.)
//!
//! `Q_n` is a minimum-weight set cover (centers anywhere in the space,
//! each covering the part of `Z` within `d_n <= eps`), solved by the
//! shared branch-and-bound. `P_n` is a maximum-weight independent set in
//! the proximity graph on `Z` (conflict when `d_n <= eps`), solved by a
//! branch-and-bound with a greedy clique-partition bound; exact up to 24
//! points, greedy beyond with a tagged result.

use crate::bitset::PointSet;
use crate::cover::{solve_min_cover, SolverKind, SolverStatus};
use crate::error::CoverError;
use crate::system::NdsSystem;

pub const MWIS_EXACT_MAX_POINTS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// Minimum weighted spanning value `Q_n`.
    Spanning,
    /// Maximum weighted separated value `P_n`.
    Separated,
    /// Minimal spanning cardinality under the sup-metric `d_n^*`.
    SupSpanning,
}

impl Quantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::Spanning => "Q",
            Quantity::Separated => "P",
            Quantity::SupSpanning => "sup",
        }
    }
}

/// One spanning/separated computation at a fixed `(n, eps)`.
#[derive(Debug, Clone)]
pub struct SpanningResult {
    pub quantity: Quantity,
    pub n: usize,
    pub epsilon: f64,
    pub value: f64,
    /// Chosen centers (spanning) or separated points.
    pub witness: Vec<usize>,
    pub status: SolverStatus,
}

impl SpanningResult {
    pub fn log_over_n(&self) -> f64 {
        self.value.ln() / self.n as f64
    }
}

/// Minimum of `sum_{x in F} e^{S_n phi(x)}` over sets `F` that
/// `(n, eps)`-span `z` (with `d_n <= eps`); unweighted when
/// `weighted = false`, in which case the value is the minimal cardinality.
pub fn min_spanning(
    sys: &NdsSystem,
    z: &PointSet,
    n: usize,
    epsilon: f64,
    weighted: bool,
    solver: SolverKind,
) -> Result<SpanningResult, CoverError> {
    let p = sys.points();
    let masks: Vec<PointSet> = (0..p)
        .map(|x| {
            let mut m = PointSet::empty(p);
            for y in z.iter() {
                if sys.bowen_distance(x, y, n) <= epsilon {
                    m.insert(y);
                }
            }
            m
        })
        .collect();
    let weights: Vec<f64> = (0..p)
        .map(|x| if weighted { sys.birkhoff_sum(x, n).exp() } else { 1.0 })
        .collect();
    let sol = solve_min_cover(z, &masks, &weights, solver)?;
    Ok(SpanningResult {
        quantity: Quantity::Spanning,
        n,
        epsilon,
        value: sol.value,
        witness: sol.chosen,
        status: sol.status,
    })
}

/// Maximum of `sum_{x in E} e^{S_n phi(x)}` over `E` inside `z` with
/// pairwise `d_n > eps`.
pub fn max_separated(
    sys: &NdsSystem,
    z: &PointSet,
    n: usize,
    epsilon: f64,
    weighted: bool,
    solver: SolverKind,
) -> Result<SpanningResult, CoverError> {
    let vertices: Vec<usize> = z.to_indices();
    let k = vertices.len();
    let weights: Vec<f64> = vertices
        .iter()
        .map(|&x| if weighted { sys.birkhoff_sum(x, n).exp() } else { 1.0 })
        .collect();
    // conflict masks over vertex positions
    let conflicts: Vec<PointSet> = (0..k)
        .map(|i| {
            let mut m = PointSet::empty(k);
            for j in 0..k {
                if i != j && sys.bowen_distance(vertices[i], vertices[j], n) <= epsilon {
                    m.insert(j);
                }
            }
            m
        })
        .collect();
    let status = match solver {
        SolverKind::Exact => SolverStatus::Exact,
        SolverKind::Greedy => SolverStatus::Greedy,
        SolverKind::Auto => {
            if k <= MWIS_EXACT_MAX_POINTS {
                SolverStatus::Exact
            } else {
                SolverStatus::Greedy
            }
        }
    };
    let picked = match status {
        SolverStatus::Exact => mwis_exact(&conflicts, &weights),
        SolverStatus::Greedy => mwis_greedy(&conflicts, &weights),
    };
    let value = picked.iter().map(|&i| weights[i]).sum();
    let mut witness: Vec<usize> = picked.into_iter().map(|i| vertices[i]).collect();
    witness.sort_unstable();
    Ok(SpanningResult { quantity: Quantity::Separated, n, epsilon, value, witness, status })
}

fn mwis_greedy(conflicts: &[PointSet], weights: &[f64]) -> Vec<usize> {
    let k = conflicts.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| weights[b].partial_cmp(&weights[a]).unwrap().then(a.cmp(&b)));
    let mut available = PointSet::full(k);
    let mut picked = Vec::new();
    for v in order {
        if available.contains(v) {
            picked.push(v);
            available.remove(v);
            available.subtract(&conflicts[v]);
        }
    }
    picked
}

/// Upper bound by greedy clique partition: an independent set takes at
/// most one vertex from each clique, so summing each clique's best weight
/// is admissible.
fn clique_partition_bound(available: &PointSet, conflicts: &[PointSet], weights: &[f64]) -> f64 {
    let mut cliques: Vec<(PointSet, f64)> = Vec::new();
    for v in available.iter() {
        let mut placed = false;
        for (members, best) in cliques.iter_mut() {
            if members.is_subset_of(&conflicts[v]) {
                members.insert(v);
                if weights[v] > *best {
                    *best = weights[v];
                }
                placed = true;
                break;
            }
        }
        if !placed {
            let mut m = PointSet::empty(conflicts.len());
            m.insert(v);
            cliques.push((m, weights[v]));
        }
    }
    cliques.iter().map(|(_, b)| b).sum()
}

fn mwis_exact(conflicts: &[PointSet], weights: &[f64]) -> Vec<usize> {
    let k = conflicts.len();
    let mut best_set = mwis_greedy(conflicts, weights);
    let mut best: f64 = best_set.iter().map(|&i| weights[i]).sum();
    let mut current = Vec::new();
    fn recurse(
        available: PointSet,
        value: f64,
        conflicts: &[PointSet],
        weights: &[f64],
        current: &mut Vec<usize>,
        best: &mut f64,
        best_set: &mut Vec<usize>,
    ) {
        if value > *best {
            *best = value;
            *best_set = current.clone();
        }
        if available.is_empty() {
            return;
        }
        if value + clique_partition_bound(&available, conflicts, weights) <= *best {
            return;
        }
        // branch on the heaviest available vertex: include, then exclude
        let v = available
            .iter()
            .max_by(|&a, &b| weights[a].partial_cmp(&weights[b]).unwrap().then(b.cmp(&a)))
            .unwrap();
        let mut included = available.clone();
        included.remove(v);
        included.subtract(&conflicts[v]);
        current.push(v);
        recurse(included, value + weights[v], conflicts, weights, current, best, best_set);
        current.pop();
        let mut excluded = available;
        excluded.remove(v);
        recurse(excluded, value, conflicts, weights, current, best, best_set);
    }
    recurse(PointSet::full(k), 0.0, conflicts, weights, &mut current, &mut best, &mut best_set);
    best_set.sort_unstable();
    best_set
}

/// One table cell of a classical-pressure report.
#[derive(Debug, Clone)]
pub struct ClassicalCell {
    pub epsilon: f64,
    pub n: usize,
    pub spanning: SpanningResult,
    pub separated: SpanningResult,
}

/// Classical pressures over an epsilon ladder and a scale window, plus
/// the zero-potential entropy specialization.
#[derive(Debug, Clone)]
pub struct ClassicalReport {
    pub cells: Vec<ClassicalCell>,
    /// Per epsilon: `(eps, max (1/n) log Q_n, max (1/n) log P_n)`.
    pub surrogates: Vec<(f64, f64, f64)>,
    /// Zero-potential cells (spanning/separated cardinalities).
    pub entropy_cells: Vec<ClassicalCell>,
    /// Per epsilon: entropy surrogate `max (1/n) log r_n`.
    pub entropy_surrogates: Vec<(f64, f64)>,
}

pub fn classical_pressure(
    sys: &NdsSystem,
    z: &PointSet,
    epsilons: &[f64],
    n_lo: usize,
    n_hi: usize,
    solver: SolverKind,
) -> Result<ClassicalReport, CoverError> {
    assert!(n_lo >= 1 && n_lo <= n_hi);
    let zero_sys = sys.with_potential(vec![0.0; sys.points()]).expect("zero potential");
    let mut cells = Vec::new();
    let mut entropy_cells = Vec::new();
    let mut surrogates = Vec::new();
    let mut entropy_surrogates = Vec::new();
    for &eps in epsilons {
        let mut q_max = f64::NEG_INFINITY;
        let mut p_max = f64::NEG_INFINITY;
        let mut h_max = f64::NEG_INFINITY;
        for n in n_lo..=n_hi {
            let spanning = min_spanning(sys, z, n, eps, true, solver)?;
            let separated = max_separated(sys, z, n, eps, true, solver)?;
            q_max = q_max.max(spanning.log_over_n());
            p_max = p_max.max(separated.log_over_n());
            cells.push(ClassicalCell { epsilon: eps, n, spanning, separated });

            let h_span = min_spanning(&zero_sys, z, n, eps, false, solver)?;
            let h_sep = max_separated(&zero_sys, z, n, eps, false, solver)?;
            h_max = h_max.max(h_span.log_over_n());
            entropy_cells.push(ClassicalCell { epsilon: eps, n, spanning: h_span, separated: h_sep });
        }
        surrogates.push((eps, q_max, p_max));
        entropy_surrogates.push((eps, h_max));
    }
    Ok(ClassicalReport { cells, surrogates, entropy_cells, entropy_surrogates })
}

/// `d_n^*(x, y) = max over starting times i and j < n of d(f_i^j x, f_i^j y)`.
///
/// The maps are eventually periodic, so the sup over starting times is
/// attained within the prefix plus one full period.
pub fn sup_metric(sys: &NdsSystem, n: usize) -> Vec<Vec<f64>> {
    let p = sys.points();
    let starts = sys.prefix_len() + sys.period();
    let mut dstar = sys.metric().to_vec();
    for i in 1..=starts {
        let mut cx: Vec<usize> = (0..p).collect();
        for j in 1..n {
            let f = sys.map_at(i + j - 1);
            for slot in cx.iter_mut() {
                *slot = f[*slot];
            }
            for x in 0..p {
                for y in 0..p {
                    let d = sys.distance(cx[x], cx[y]);
                    if d > dstar[x][y] {
                        dstar[x][y] = d;
                    }
                }
            }
        }
    }
    dstar
}

/// Minimal `(n, eps)^*`-spanning cardinality of `z` (centers anywhere).
pub fn sup_spanning(
    sys: &NdsSystem,
    z: &PointSet,
    n: usize,
    epsilon: f64,
    solver: SolverKind,
) -> Result<SpanningResult, CoverError> {
    let p = sys.points();
    let dstar = sup_metric(sys, n);
    let masks: Vec<PointSet> = (0..p)
        .map(|x| {
            let mut m = PointSet::empty(p);
            for y in z.iter() {
                if dstar[x][y] <= epsilon {
                    m.insert(y);
                }
            }
            m
        })
        .collect();
    let weights = vec![1.0; p];
    let sol = solve_min_cover(z, &masks, &weights, solver)?;
    Ok(SpanningResult {
        quantity: Quantity::SupSpanning,
        n,
        epsilon,
        value: sol.value,
        witness: sol.chosen,
        status: sol.status,
    })
}

/// Finite-scale sup-entropy surrogate: `max over the window of
/// (1/n) log r_n^*`, evaluated at the smallest epsilon of the ladder
/// (spanning counts only grow as epsilon shrinks).
pub fn sup_entropy(
    sys: &NdsSystem,
    z: &PointSet,
    epsilons: &[f64],
    n_lo: usize,
    n_hi: usize,
    solver: SolverKind,
) -> Result<f64, CoverError> {
    assert!(!epsilons.is_empty() && n_lo >= 1 && n_lo <= n_hi);
    let mut best = f64::NEG_INFINITY;
    for &eps in epsilons {
        for n in n_lo..=n_hi {
            let r = sup_spanning(sys, z, n, eps, solver)?;
            best = best.max(r.log_over_n());
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::generators::{circle_metric, doubling_map, rotation_map};
    use crate::system::NdsSystem;

    fn all_pairs_metric(p: usize, d: f64) -> Vec<Vec<f64>> {
        (0..p)
            .map(|i| (0..p).map(|j| if i == j { 0.0 } else { d }).collect())
            .collect()
    }

    #[test]
    fn spanning_with_huge_radius_takes_cheapest_center() {
        let p = 4;
        let phi = vec![0.3, -0.2, 0.9, 0.0];
        let sys = NdsSystem::autonomous(circle_metric(p), doubling_map(p), phi.clone()).unwrap();
        let z = PointSet::full(p);
        let r = min_spanning(&sys, &z, 1, 2.0, true, SolverKind::Exact).unwrap();
        let expected = phi.iter().map(|v| v.exp()).fold(f64::INFINITY, f64::min);
        assert!((r.value - expected).abs() < 1e-12);
        assert_eq!(r.witness.len(), 1);
    }

    #[test]
    fn spanning_three_isolated_points() {
        let sys = NdsSystem::autonomous(all_pairs_metric(3, 1.0), vec![0, 1, 2], vec![0.0; 3])
            .unwrap();
        let z = PointSet::full(3);
        let r = min_spanning(&sys, &z, 1, 0.5, false, SolverKind::Exact).unwrap();
        assert_eq!(r.value, 3.0);
    }

    #[test]
    fn separated_extremes() {
        let p = 5;
        let sys =
            NdsSystem::autonomous(all_pairs_metric(p, 1.0), (0..p).collect(), vec![0.0; p]).unwrap();
        let z = PointSet::full(p);
        // huge radius: best single point
        let one = max_separated(&sys, &z, 1, 2.0, false, SolverKind::Exact).unwrap();
        assert_eq!(one.value, 1.0);
        // tiny radius: all points mutually separated
        let all = max_separated(&sys, &z, 1, 0.5, false, SolverKind::Exact).unwrap();
        assert_eq!(all.value, p as f64);
    }

    #[test]
    fn separated_path_graph() {
        let metric = vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ];
        let sys = NdsSystem::autonomous(metric, vec![0, 1, 2], vec![0.0; 3]).unwrap();
        let z = PointSet::full(3);
        let r = max_separated(&sys, &z, 1, 1.5, false, SolverKind::Exact).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.witness, vec![0, 2]);
    }

    #[test]
    fn spanning_never_exceeds_separated() {
        // a maximal separated set spans, so Q_n <= P_n cardinality-wise and
        // with weights
        let p = 8;
        let phi: Vec<f64> = (0..p).map(|i| ((i * 13) % 7) as f64 / 7.0 - 0.4).collect();
        let sys = NdsSystem::autonomous(circle_metric(p), doubling_map(p), phi).unwrap();
        let z = PointSet::full(p);
        for n in 1..=4 {
            for eps in [0.1, 0.2, 0.3, 0.6] {
                let q = min_spanning(&sys, &z, n, eps, true, SolverKind::Exact).unwrap();
                let sep = max_separated(&sys, &z, n, eps, true, SolverKind::Exact).unwrap();
                assert!(
                    q.value <= sep.value + 1e-9,
                    "Q {} > P {} at n={n} eps={eps}",
                    q.value,
                    sep.value
                );
            }
        }
    }

    #[test]
    fn fixed_point_pressure_is_potential() {
        let sys = NdsSystem::autonomous(vec![vec![0.0]], vec![0], vec![0.8]).unwrap();
        let z = PointSet::full(1);
        let report = classical_pressure(&sys, &z, &[0.5], 1, 4, SolverKind::Exact).unwrap();
        for cell in &report.cells {
            assert!((cell.spanning.log_over_n() - 0.8).abs() < 1e-12);
            assert!((cell.separated.log_over_n() - 0.8).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_potential_adds_to_entropy() {
        let p = 8;
        let c = 0.6;
        let base = NdsSystem::autonomous(circle_metric(p), doubling_map(p), vec![0.0; p]).unwrap();
        let shifted = base.with_potential(vec![c; p]).unwrap();
        let z = PointSet::full(p);
        for n in 1..=3 {
            let q0 = min_spanning(&base, &z, n, 0.2, true, SolverKind::Exact).unwrap();
            let qc = min_spanning(&shifted, &z, n, 0.2, true, SolverKind::Exact).unwrap();
            assert!((qc.log_over_n() - q0.log_over_n() - c).abs() < 1e-9);
        }
    }

    #[test]
    fn sup_metric_dominates_bowen() {
        let p = 6;
        let f = doubling_map(p);
        let g = rotation_map(p, 1);
        let sys = NdsSystem::periodic(circle_metric(p), vec![f, g], vec![0.0; p]).unwrap();
        for n in 1..=4 {
            let dstar = sup_metric(&sys, n);
            for x in 0..p {
                for y in 0..p {
                    assert!(dstar[x][y] >= sys.bowen_distance(x, y, n) - 1e-15);
                }
            }
        }
    }

    #[test]
    fn sup_entropy_identity_maps() {
        let p = 5;
        let id: Vec<usize> = (0..p).collect();
        let sys = NdsSystem::autonomous(all_pairs_metric(p, 1.0), id, vec![0.0; p]).unwrap();
        let z = PointSet::full(p);
        // eps below the minimal distance: r_n^* = |Z| for every n, so the
        // max over the window is attained at the smallest n
        let h = sup_entropy(&sys, &z, &[0.5], 2, 4, SolverKind::Exact).unwrap();
        assert!((h - (p as f64).ln() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn sup_entropy_singleton_is_zero() {
        let sys = NdsSystem::autonomous(vec![vec![0.0]], vec![0], vec![0.0]).unwrap();
        let z = PointSet::full(1);
        let h = sup_entropy(&sys, &z, &[0.5], 1, 3, SolverKind::Exact).unwrap();
        assert_eq!(h, 0.0);
    }

    #[test]
    fn sup_spanning_at_least_plain_spanning() {
        let p = 8;
        let sys = NdsSystem::periodic(
            circle_metric(p),
            vec![doubling_map(p), rotation_map(p, 3)],
            vec![0.0; p],
        )
        .unwrap();
        let z = PointSet::full(p);
        for n in 1..=4 {
            let r_star = sup_spanning(&sys, &z, n, 0.2, SolverKind::Exact).unwrap();
            let r = min_spanning(&sys, &z, n, 0.2, false, SolverKind::Exact).unwrap();
            assert!(r_star.value >= r.value);
        }
    }
}
