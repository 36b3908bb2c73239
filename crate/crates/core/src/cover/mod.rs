//! The Caratheodory–Pesin engine: length-windowed candidate generation,
//! minimum-weight cover values, critical exponents, and the assembled
//! pressure profiles.
//!
//! For a subset `Z`, a scale `N` and a window of admissible lengths, the
//! cover value is
//!
//! ```text
//! M(alpha) = min over covers G of Z of  sum_{c in G} exp(-alpha len(c) + sup_birkhoff(c))
//! ```
//!
//! and the per-scale critical exponent `alpha_N` is the unique root of
//! `M(alpha) = 1`. At `theta = 1` the window collapses to a single length
//! and `alpha_N = (1/N) log Lambda_N` algebraically, which
//! [`capacity_pressures`] computes along an independent path as a
//! cross-check. Lower/upper pressures over a finite scale window are the
//! min/max of `alpha_N`, standing in for the liminf/limsup.

mod root;
mod setcover;
mod theta;

pub use root::bisect_critical;
pub use setcover::{
    resolve_solver, solve_min_cover, CoverSolution, SolverKind, SolverStatus,
    AUTO_EXACT_MAX_CANDIDATES, AUTO_EXACT_MAX_UNIVERSE,
};
pub use theta::{ParseThetaError, Theta, ThetaWindow};

use crate::bitset::PointSet;
use crate::error::CoverError;
use crate::system::{CandidateKind, CoverCandidate, NdsSystem, OpenCover};

/// Default bound on generated candidates before deduplication.
pub const DEFAULT_CANDIDATE_LIMIT: usize = 1_000_000;

/// Default bisection tolerance on the critical exponent.
pub const DEFAULT_TOL: f64 = 1e-6;

/// How candidate weights read the potential: sup of the Birkhoff sum over
/// the member set, or its value at the ball center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    SupValue,
    CenterValue,
}

/// All Bowen balls `B_n(x, eps)` with centers anywhere in the space and
/// admissible lengths. Member sets are the full balls; intersection with
/// the universe happens when a [`CoverProblem`] is built.
pub fn candidates_bowen(
    sys: &NdsSystem,
    epsilon: f64,
    window: &ThetaWindow,
    mode: WeightMode,
    limit: usize,
) -> Result<Vec<CoverCandidate>, CoverError> {
    let p = sys.points();
    let lengths = window.lengths();
    let n_max = window.max_length();
    let estimated = p as u128 * (n_max - window.scale + 1) as u128;
    if estimated > limit as u128 {
        return Err(CoverError::CandidateExplosion { estimated, limit });
    }

    let orbits = sys.orbit_tables(n_max);
    // d_n and S_n phi, advanced one step at a time
    let mut dmat: Vec<Vec<f64>> = sys.metric().to_vec();
    let mut birkhoff: Vec<f64> = (0..p).map(|x| sys.potential_value(x)).collect();

    let mut out = Vec::new();
    for n in 1..=n_max {
        if n > 1 {
            let orbit = &orbits[n - 1];
            for x in 0..p {
                for y in 0..p {
                    let d = sys.distance(orbit[x], orbit[y]);
                    if d > dmat[x][y] {
                        dmat[x][y] = d;
                    }
                }
            }
            for x in 0..p {
                birkhoff[x] += sys.potential_value(orbit[x]);
            }
        }
        if !lengths.contains(&n) {
            continue;
        }
        for x in 0..p {
            let mut members = PointSet::empty(p);
            let mut sup = f64::NEG_INFINITY;
            for y in 0..p {
                if dmat[x][y] < epsilon {
                    members.insert(y);
                    if birkhoff[y] > sup {
                        sup = birkhoff[y];
                    }
                }
            }
            let sup_birkhoff = match mode {
                WeightMode::SupValue => sup,
                WeightMode::CenterValue => birkhoff[x],
            };
            out.push(CoverCandidate {
                kind: CandidateKind::BowenBall { center: x, radius: epsilon },
                length: n,
                members,
                sup_birkhoff,
            });
        }
    }
    Ok(out)
}

/// All cover strings with admissible lengths whose associated sets meet
/// `z`. Branches with empty sets are pruned early since extending a
/// string only shrinks its set.
pub fn candidates_string(
    sys: &NdsSystem,
    z: &PointSet,
    cover: &OpenCover,
    window: &ThetaWindow,
    limit: usize,
) -> Result<Vec<CoverCandidate>, CoverError> {
    let k = cover.len() as u128;
    let n_max = window.max_length();
    let estimated = k
        .checked_pow(n_max as u32)
        .unwrap_or(u128::MAX);
    if estimated > limit as u128 {
        return Err(CoverError::CandidateExplosion { estimated, limit });
    }

    let p = sys.points();
    let orbits = sys.orbit_tables(n_max);
    // premask[j][u] = {x : f_1^j(x) in U_u}
    let premask: Vec<Vec<PointSet>> = (0..n_max)
        .map(|j| {
            cover
                .sets()
                .iter()
                .map(|set| {
                    let mut m = PointSet::empty(p);
                    for x in 0..p {
                        if set.contains(orbits[j][x]) {
                            m.insert(x);
                        }
                    }
                    m
                })
                .collect()
        })
        .collect();

    let lengths = window.lengths();
    let mut out = Vec::new();
    let mut string = Vec::new();
    dfs_strings(sys, z, cover, &premask, &lengths, &mut string, PointSet::full(p), &mut out);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs_strings(
    sys: &NdsSystem,
    z: &PointSet,
    cover: &OpenCover,
    premask: &[Vec<PointSet>],
    lengths: &std::ops::RangeInclusive<usize>,
    string: &mut Vec<usize>,
    members: PointSet,
    out: &mut Vec<CoverCandidate>,
) {
    let n = string.len();
    if n > 0 && lengths.contains(&n) && members.intersects(z) {
        out.push(CoverCandidate {
            kind: CandidateKind::StringCover { string: string.clone() },
            length: n,
            members: members.clone(),
            sup_birkhoff: sys.sup_birkhoff_over(&members, n),
        });
    }
    if n == *lengths.end() {
        return;
    }
    for u in 0..cover.len() {
        let next = members.intersection(&premask[n][u]);
        if next.intersects(z) {
            string.push(u);
            dfs_strings(sys, z, cover, premask, lengths, string, next, out);
            string.pop();
        }
    }
}

/// One candidate of a built cover problem: the part of its member set
/// inside the universe plus its weight data.
#[derive(Debug, Clone)]
pub struct ProblemCandidate {
    pub cover_mask: PointSet,
    pub length: usize,
    pub sup_birkhoff: f64,
}

impl ProblemCandidate {
    pub fn weight(&self, alpha: f64) -> f64 {
        (-alpha * self.length as f64 + self.sup_birkhoff).exp()
    }
}

/// A weighted covering problem over a fixed universe.
///
/// Candidates are intersected with the universe, empty ones dropped, and
/// duplicates with the same `(member set, length)` deduplicated keeping
/// the smallest `sup_birkhoff`. Identical member sets of different
/// lengths are all kept: their weights diverge as `alpha` moves.
#[derive(Debug, Clone)]
pub struct CoverProblem {
    pub universe: PointSet,
    pub candidates: Vec<ProblemCandidate>,
    pub mode: WeightMode,
    infeasible_point: Option<usize>,
    /// Ranges of `candidates` sharing a member set (candidates are sorted
    /// by `(mask, length)`); used for per-alpha dominance grouping.
    groups: Vec<(usize, usize)>,
}

impl CoverProblem {
    pub fn new(
        universe: PointSet,
        raw: Vec<CoverCandidate>,
        mode: WeightMode,
    ) -> CoverProblem {
        let parts = raw
            .into_iter()
            .map(|c| ProblemCandidate {
                cover_mask: c.members.intersection(&universe),
                length: c.length,
                sup_birkhoff: c.sup_birkhoff,
            })
            .collect();
        Self::from_parts(universe, parts, mode)
    }

    pub fn from_parts(
        universe: PointSet,
        mut candidates: Vec<ProblemCandidate>,
        mode: WeightMode,
    ) -> CoverProblem {
        candidates.retain(|c| !c.cover_mask.is_empty());
        candidates.sort_by(|a, b| {
            a.cover_mask
                .cmp(&b.cover_mask)
                .then(a.length.cmp(&b.length))
                .then(a.sup_birkhoff.partial_cmp(&b.sup_birkhoff).unwrap())
        });
        candidates.dedup_by(|next, kept| {
            kept.cover_mask == next.cover_mask && kept.length == next.length
            // sorted ascending by sup, so the kept (earlier) entry is minimal
        });

        let mut union = PointSet::empty(universe.capacity());
        for c in &candidates {
            union.union_with(&c.cover_mask);
        }
        let infeasible_point = universe.iter().find(|&p| !union.contains(p));

        let mut groups = Vec::new();
        let mut start = 0;
        for i in 1..=candidates.len() {
            if i == candidates.len() || candidates[i].cover_mask != candidates[start].cover_mask {
                groups.push((start, i));
                start = i;
            }
        }
        CoverProblem { universe, candidates, mode, infeasible_point, groups }
    }

    pub fn is_feasible(&self) -> bool {
        self.infeasible_point.is_none()
    }

    pub fn candidate_count(&self) -> usize {
        self.candidates.len()
    }

    /// Per-alpha working set: one representative per member set (the one
    /// of minimum weight at this alpha). Value-preserving for min covers.
    fn grouped_at(&self, alpha: f64) -> (Vec<PointSet>, Vec<f64>, Vec<usize>) {
        let mut masks = Vec::with_capacity(self.groups.len());
        let mut weights = Vec::with_capacity(self.groups.len());
        let mut originals = Vec::with_capacity(self.groups.len());
        for &(start, end) in &self.groups {
            let mut best = start;
            let mut best_w = self.candidates[start].weight(alpha);
            for i in start + 1..end {
                let w = self.candidates[i].weight(alpha);
                if w < best_w {
                    best_w = w;
                    best = i;
                }
            }
            masks.push(self.candidates[best].cover_mask.clone());
            weights.push(best_w);
            originals.push(best);
        }
        (masks, weights, originals)
    }

    /// The minimum cover value `M(alpha)`.
    pub fn min_weight_cover(
        &self,
        alpha: f64,
        kind: SolverKind,
    ) -> Result<CoverSolution, CoverError> {
        if let Some(point) = self.infeasible_point {
            return Err(CoverError::Infeasible { point });
        }
        let (masks, weights, originals) = self.grouped_at(alpha);
        // solver selection must not depend on alpha
        let kind = match resolve_solver(kind, self.universe.len(), self.candidates.len()) {
            SolverStatus::Exact => SolverKind::Exact,
            SolverStatus::Greedy => SolverKind::Greedy,
        };
        let mut sol = solve_min_cover(&self.universe, &masks, &weights, kind)?;
        sol.chosen = sol.chosen.into_iter().map(|i| originals[i]).collect();
        Ok(sol)
    }
}

/// Critical exponent of one cover problem.
#[derive(Debug, Clone)]
pub struct CriticalAlpha {
    pub alpha: f64,
    pub status: SolverStatus,
    /// Cardinality of the minimizing cover re-solved at the root.
    pub cover_cardinality: usize,
}

/// Root of `M(alpha) = 1` by bracketing bisection. The initial bracket is
/// `[-(phi_norm + log P), +(phi_norm + log P)]`; it depends only on the
/// system, so problems over the same system share bisection sequences and
/// ordered value functions yield ordered roots exactly.
pub fn critical_alpha(
    problem: &CoverProblem,
    solver: SolverKind,
    bracket_halfwidth: f64,
    tol: f64,
) -> Result<CriticalAlpha, CoverError> {
    if problem.universe.is_empty() {
        return Err(CoverError::EmptyUniverse);
    }
    if let Some(point) = problem.infeasible_point {
        return Err(CoverError::Infeasible { point });
    }
    let status = resolve_solver(solver, problem.universe.len(), problem.candidates.len());
    let mut err = None;
    let alpha = bisect_critical(
        |a| match problem.min_weight_cover(a, solver) {
            Ok(sol) => sol.value,
            Err(e) => {
                err = Some(e);
                f64::NAN
            }
        },
        bracket_halfwidth,
        tol,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    let at_root = problem.min_weight_cover(alpha, solver)?;
    Ok(CriticalAlpha { alpha, status, cover_cardinality: at_root.chosen.len() })
}

/// Bracket halfwidth shared by every problem built over one system.
pub fn bracket_halfwidth(sys: &NdsSystem) -> f64 {
    sys.phi_norm() + (sys.points() as f64).ln()
}

/// Result of one scale inside a pressure profile.
#[derive(Debug, Clone)]
pub struct ScaleResult {
    pub scale: usize,
    pub alpha: f64,
    pub status: SolverStatus,
    /// Candidate count after deduplication.
    pub candidates: usize,
    pub cover_cardinality: usize,
    /// Largest admissible length at this scale.
    pub max_length: usize,
}

/// Per-`(theta, epsilon)` record of critical exponents over a scale
/// window, with min/max standing in for liminf/limsup.
#[derive(Debug, Clone)]
pub struct PressureProfile {
    pub theta: Theta,
    pub epsilon: f64,
    pub scales: Vec<ScaleResult>,
}

impl PressureProfile {
    pub fn lower(&self) -> f64 {
        self.scales.iter().map(|s| s.alpha).fold(f64::INFINITY, f64::min)
    }

    pub fn upper(&self) -> f64 {
        self.scales.iter().map(|s| s.alpha).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn alpha_at(&self, scale: usize) -> Option<f64> {
        self.scales.iter().find(|s| s.scale == scale).map(|s| s.alpha)
    }

    pub fn all_exact(&self) -> bool {
        self.scales.iter().all(|s| s.status == SolverStatus::Exact)
    }
}

/// Knobs shared by every profile computation.
#[derive(Debug, Clone)]
pub struct ProfileParams {
    pub theta: Theta,
    pub n_lo: usize,
    pub n_hi: usize,
    /// Cap on candidate lengths at `theta = 0`; defaults to `4 * n_hi`.
    /// Fixed across scales within a run so scale windows stay nested.
    pub theta_zero_cap: Option<usize>,
    pub solver: SolverKind,
    pub tol: f64,
    pub mode: WeightMode,
    pub candidate_limit: usize,
}

impl ProfileParams {
    pub fn new(theta: Theta, n_lo: usize, n_hi: usize) -> ProfileParams {
        ProfileParams {
            theta,
            n_lo,
            n_hi,
            theta_zero_cap: None,
            solver: SolverKind::Auto,
            tol: DEFAULT_TOL,
            mode: WeightMode::SupValue,
            candidate_limit: DEFAULT_CANDIDATE_LIMIT,
        }
    }

    pub fn with_theta(&self, theta: Theta) -> ProfileParams {
        ProfileParams { theta, ..self.clone() }
    }

    fn effective_cap(&self) -> usize {
        self.theta_zero_cap.unwrap_or(4 * self.n_hi)
    }

    fn check_window(&self) -> Result<(), CoverError> {
        if self.n_lo == 0 || self.n_lo > self.n_hi {
            return Err(CoverError::EmptyWindow { n_lo: self.n_lo, n_hi: self.n_hi });
        }
        Ok(())
    }
}

enum Basis<'a> {
    Balls { epsilon: f64 },
    Strings { cover: &'a OpenCover },
}

fn run_profile(
    sys: &NdsSystem,
    z: &PointSet,
    basis: &Basis<'_>,
    params: &ProfileParams,
) -> Result<PressureProfile, CoverError> {
    params.check_window()?;
    if z.is_empty() {
        return Err(CoverError::EmptyUniverse);
    }
    let halfwidth = bracket_halfwidth(sys);
    let mut scales = Vec::with_capacity(params.n_hi - params.n_lo + 1);
    for scale in params.n_lo..=params.n_hi {
        let window = ThetaWindow::new(scale, params.theta, params.effective_cap());
        let raw = match basis {
            Basis::Balls { epsilon } => {
                candidates_bowen(sys, *epsilon, &window, params.mode, params.candidate_limit)?
            }
            Basis::Strings { cover } => {
                candidates_string(sys, z, cover, &window, params.candidate_limit)?
            }
        };
        let problem = CoverProblem::new(z.clone(), raw, params.mode);
        let crit = critical_alpha(&problem, params.solver, halfwidth, params.tol)?;
        scales.push(ScaleResult {
            scale,
            alpha: crit.alpha,
            status: crit.status,
            candidates: problem.candidate_count(),
            cover_cardinality: crit.cover_cardinality,
            max_length: window.max_length(),
        });
    }
    let epsilon = match basis {
        Basis::Balls { epsilon } => *epsilon,
        Basis::Strings { cover } => cover.mesh(),
    };
    Ok(PressureProfile { theta: params.theta, epsilon, scales })
}

/// Pressure profile from Bowen-ball candidates.
pub fn pressure_profile(
    sys: &NdsSystem,
    z: &PointSet,
    epsilon: f64,
    params: &ProfileParams,
) -> Result<PressureProfile, CoverError> {
    run_profile(sys, z, &Basis::Balls { epsilon }, params)
}

/// Pressure profile from open-cover string candidates. The profile's
/// `epsilon` slot records the cover mesh.
pub fn pressure_profile_strings(
    sys: &NdsSystem,
    z: &PointSet,
    cover: &OpenCover,
    params: &ProfileParams,
) -> Result<PressureProfile, CoverError> {
    run_profile(sys, z, &Basis::Strings { cover }, params)
}

/// The `theta = 0` profile. The unbounded window is capped (the cap is
/// recorded in each scale's `max_length`), and since the per-scale
/// windows are nested the exponents must be non-decreasing in the scale;
/// this is asserted.
pub fn pesin_pitskel(
    sys: &NdsSystem,
    z: &PointSet,
    epsilon: f64,
    params: &ProfileParams,
) -> Result<PressureProfile, CoverError> {
    let params = params.with_theta(Theta::zero());
    let profile = pressure_profile(sys, z, epsilon, &params)?;
    if profile.all_exact() {
        for pair in profile.scales.windows(2) {
            assert!(
                pair[1].alpha >= pair[0].alpha - 2.0 * params.tol,
                "theta = 0 exponents must be non-decreasing across nested windows: \
                 alpha_{} = {} > alpha_{} = {}",
                pair[0].scale,
                pair[0].alpha,
                pair[1].scale,
                pair[1].alpha,
            );
        }
    }
    Ok(profile)
}

/// Per-scale minimum cover weight at a single length and the resulting
/// `(1/N) log Lambda_N` values.
#[derive(Debug, Clone)]
pub struct CapacityPressures {
    pub epsilon: f64,
    pub scales: Vec<CapacityScale>,
}

#[derive(Debug, Clone)]
pub struct CapacityScale {
    pub scale: usize,
    pub lambda: f64,
    pub log_over_n: f64,
    pub status: SolverStatus,
    pub cover_cardinality: usize,
}

impl CapacityPressures {
    pub fn lower(&self) -> f64 {
        self.scales.iter().map(|s| s.log_over_n).fold(f64::INFINITY, f64::min)
    }

    pub fn upper(&self) -> f64 {
        self.scales.iter().map(|s| s.log_over_n).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Lower/upper capacity pressures along the direct route: minimum-weight
/// covers by single-length candidates, no root finding.
pub fn capacity_pressures(
    sys: &NdsSystem,
    z: &PointSet,
    epsilon: f64,
    params: &ProfileParams,
) -> Result<CapacityPressures, CoverError> {
    params.check_window()?;
    if z.is_empty() {
        return Err(CoverError::EmptyUniverse);
    }
    let mut scales = Vec::new();
    for scale in params.n_lo..=params.n_hi {
        let window = ThetaWindow::new(scale, Theta::one(), 0);
        let raw = candidates_bowen(sys, epsilon, &window, params.mode, params.candidate_limit)?;
        let problem = CoverProblem::new(z.clone(), raw, params.mode);
        let sol = problem.min_weight_cover(0.0, params.solver)?;
        scales.push(CapacityScale {
            scale,
            lambda: sol.value,
            log_over_n: sol.value.ln() / scale as f64,
            status: sol.status,
            cover_cardinality: sol.chosen.len(),
        });
    }
    Ok(CapacityPressures { epsilon, scales })
}

/// The `theta = 0` length cap a sweep over `grid` must use so candidate
/// windows stay nested along the whole grid: the configured cap, raised
/// to the widest window any positive grid value reaches.
pub fn sweep_cap(grid: &[Theta], params: &ProfileParams) -> usize {
    let widest = grid
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| ThetaWindow::new(params.n_hi, *t, 0).max_length())
        .max()
        .unwrap_or(0);
    params.effective_cap().max(widest)
}

/// Profiles across a sorted theta grid.
///
/// The `theta = 0` cap is raised via [`sweep_cap`] so candidate windows
/// are nested along the whole grid and the per-scale exponents are
/// non-decreasing in theta, exactly.
pub fn theta_sweep(
    sys: &NdsSystem,
    z: &PointSet,
    epsilon: f64,
    grid: &[Theta],
    params: &ProfileParams,
) -> Result<Vec<PressureProfile>, CoverError> {
    assert!(grid.windows(2).all(|w| w[0] < w[1]), "theta grid must be strictly increasing");
    params.check_window()?;
    let cap = sweep_cap(grid, params);
    let mut out = Vec::with_capacity(grid.len());
    for &theta in grid {
        let sub = ProfileParams { theta, theta_zero_cap: Some(cap), ..params.clone() };
        out.push(pressure_profile(sys, z, epsilon, &sub)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::generators::{circle_metric, doubling_map};

    fn doubling(p: usize, phi: f64) -> NdsSystem {
        NdsSystem::autonomous(circle_metric(p), doubling_map(p), vec![phi; p]).unwrap()
    }

    fn fixed_point_system(phi0: f64) -> NdsSystem {
        // one point, one map
        NdsSystem::autonomous(vec![vec![0.0]], vec![0], vec![phi0]).unwrap()
    }

    #[test]
    fn window_examples() {
        let sys = doubling(4, 0.0);
        // theta = 1, N = 3: only length-3 balls
        let w = ThetaWindow::new(3, Theta::one(), 0);
        let c = candidates_bowen(&sys, 0.3, &w, WeightMode::SupValue, 1 << 20).unwrap();
        assert!(c.iter().all(|x| x.length == 3));
        assert_eq!(c.len(), 4);
        // theta = 0.5, N = 4: lengths 4..=8
        let w = ThetaWindow::new(4, Theta::new(1, 2), 0);
        let c = candidates_bowen(&sys, 0.3, &w, WeightMode::SupValue, 1 << 20).unwrap();
        let mut lens: Vec<usize> = c.iter().map(|x| x.length).collect();
        lens.dedup();
        assert_eq!(lens, (4..=8).collect::<Vec<_>>());
    }

    #[test]
    fn explosion_guard() {
        let sys = doubling(4, 0.0);
        let w = ThetaWindow::new(1, Theta::new(1, 1000), 0);
        let err = candidates_bowen(&sys, 0.3, &w, WeightMode::SupValue, 100);
        assert!(matches!(err, Err(CoverError::CandidateExplosion { .. })));
    }

    #[test]
    fn min_weight_cover_enumerated_example() {
        // universe {0,1,2}; A={0,1} w=1, B={1,2} w=1, C={0,1,2} w=1.9
        let universe = PointSet::from_indices(3, &[0, 1, 2]);
        let parts = vec![
            ProblemCandidate {
                cover_mask: PointSet::from_indices(3, &[0, 1]),
                length: 1,
                sup_birkhoff: 0.0,
            },
            ProblemCandidate {
                cover_mask: PointSet::from_indices(3, &[1, 2]),
                length: 1,
                sup_birkhoff: 0.0,
            },
            ProblemCandidate {
                cover_mask: PointSet::from_indices(3, &[0, 1, 2]),
                length: 1,
                sup_birkhoff: 1.9f64.ln(),
            },
        ];
        let problem = CoverProblem::from_parts(universe, parts, WeightMode::SupValue);
        let sol = problem.min_weight_cover(0.0, SolverKind::Exact).unwrap();
        assert!((sol.value - 1.9).abs() < 1e-12);
        assert_eq!(sol.chosen.len(), 1);
    }

    #[test]
    fn dedup_keeps_min_sup_per_mask_and_length() {
        let universe = PointSet::from_indices(2, &[0, 1]);
        let mk = |sup: f64, len: usize| ProblemCandidate {
            cover_mask: PointSet::from_indices(2, &[0, 1]),
            length: len,
            sup_birkhoff: sup,
        };
        let problem = CoverProblem::from_parts(
            universe,
            vec![mk(2.0, 3), mk(1.0, 3), mk(5.0, 4)],
            WeightMode::SupValue,
        );
        // the (mask, 3) pair collapses to sup 1.0; length 4 kept separately
        assert_eq!(problem.candidate_count(), 2);
        assert!(problem.candidates.iter().any(|c| c.length == 3 && c.sup_birkhoff == 1.0));
    }

    #[test]
    fn critical_alpha_single_point_zero_potential() {
        let sys = fixed_point_system(0.0);
        let z = PointSet::full(1);
        let params = ProfileParams::new(Theta::new(1, 2), 2, 4);
        let profile = pressure_profile(&sys, &z, 0.5, &params).unwrap();
        for s in &profile.scales {
            assert!(s.alpha.abs() <= 2.0 * params.tol, "alpha_{} = {}", s.scale, s.alpha);
        }
    }

    #[test]
    fn critical_alpha_fixed_point_matches_potential() {
        for phi in [-0.7, 0.0, 1.3] {
            let sys = fixed_point_system(phi);
            let z = PointSet::full(1);
            let params = ProfileParams::new(Theta::one(), 1, 5);
            let profile = pressure_profile(&sys, &z, 0.5, &params).unwrap();
            assert!((profile.lower() - phi).abs() <= 2e-6);
            assert!((profile.upper() - phi).abs() <= 2e-6);
        }
    }

    #[test]
    fn constant_potential_shifts_alpha() {
        let p = 4;
        let z = PointSet::full(p);
        let params = ProfileParams::new(Theta::new(1, 2), 2, 4);
        let base = pressure_profile(&doubling(p, 0.0), &z, 0.3, &params).unwrap();
        let shifted = pressure_profile(&doubling(p, 0.75), &z, 0.3, &params).unwrap();
        for (a, b) in base.scales.iter().zip(&shifted.scales) {
            assert!((b.alpha - a.alpha - 0.75).abs() <= 2e-6);
        }
    }

    #[test]
    fn capacity_matches_theta_one_profile() {
        let p = 8;
        let sys = doubling(p, 0.4);
        let z = PointSet::full(p);
        let params = ProfileParams::new(Theta::one(), 2, 5);
        let profile = pressure_profile(&sys, &z, 0.3, &params).unwrap();
        let cap = capacity_pressures(&sys, &z, 0.3, &params).unwrap();
        for (s, c) in profile.scales.iter().zip(&cap.scales) {
            assert!(
                (s.alpha - c.log_over_n).abs() <= 2.0 * params.tol,
                "scale {}: {} vs {}",
                s.scale,
                s.alpha,
                c.log_over_n
            );
        }
    }

    #[test]
    fn theta_monotone_on_sweep() {
        let p = 8;
        let sys = doubling(p, 0.2);
        let z = PointSet::full(p);
        let params = ProfileParams::new(Theta::one(), 2, 4);
        let grid = Theta::grid(6);
        let profiles = theta_sweep(&sys, &z, 0.3, &grid, &params).unwrap();
        for pair in profiles.windows(2) {
            for (a, b) in pair[0].scales.iter().zip(&pair[1].scales) {
                assert!(a.alpha <= b.alpha, "theta monotonicity violated");
            }
            assert!(pair[0].lower() <= pair[1].lower());
            assert!(pair[0].upper() <= pair[1].upper());
        }
        // endpoints agree with the dedicated entry points
        let pp = pesin_pitskel(
            &sys,
            &z,
            0.3,
            &ProfileParams {
                theta_zero_cap: profiles[0].scales.last().map(|s| s.max_length),
                ..params.clone()
            },
        )
        .unwrap();
        assert_eq!(pp.lower(), profiles[0].lower());
        let cap = capacity_pressures(&sys, &z, 0.3, &params).unwrap();
        let last = profiles.last().unwrap();
        for (s, c) in last.scales.iter().zip(&cap.scales) {
            assert!((s.alpha - c.log_over_n).abs() <= 2.0 * params.tol);
        }
    }

    #[test]
    fn greedy_alpha_dominates_exact() {
        let p = 8;
        let sys = doubling(p, 0.5);
        let z = PointSet::full(p);
        for theta in [Theta::new(1, 2), Theta::one()] {
            let params = ProfileParams::new(theta, 2, 4);
            let exact = pressure_profile(
                &sys,
                &z,
                0.3,
                &ProfileParams { solver: SolverKind::Exact, ..params.clone() },
            )
            .unwrap();
            let greedy = pressure_profile(
                &sys,
                &z,
                0.3,
                &ProfileParams { solver: SolverKind::Greedy, ..params.clone() },
            )
            .unwrap();
            for (e, g) in exact.scales.iter().zip(&greedy.scales) {
                assert!(g.alpha >= e.alpha, "greedy {} < exact {}", g.alpha, e.alpha);
            }
        }
    }

    #[test]
    fn string_candidates_trivial_cover() {
        let sys = doubling(4, 0.0);
        let z = PointSet::full(4);
        let cover = OpenCover::from_index_sets(&sys, &[vec![0, 1, 2, 3]]).unwrap();
        let w = ThetaWindow::new(2, Theta::new(1, 2), 0);
        let c = candidates_string(&sys, &z, &cover, &w, 1 << 20).unwrap();
        // one candidate per admissible length, members = everything
        assert_eq!(c.len(), (2..=4).count());
        assert!(c.iter().all(|x| x.members.len() == 4));
    }

    #[test]
    fn string_candidates_theta_one_counts() {
        let sys = doubling(4, 0.0);
        let z = PointSet::full(4);
        let cover = OpenCover::from_index_sets(&sys, &[vec![0, 1], vec![2, 3]]).unwrap();
        let w = ThetaWindow::new(3, Theta::one(), 0);
        let c = candidates_string(&sys, &z, &cover, &w, 1 << 20).unwrap();
        assert!(c.len() <= 8);
        assert!(c.iter().all(|x| x.length == 3 && x.members.intersects(&z)));
    }

    #[test]
    fn center_value_mode_brackets_sup_mode() {
        let p = 8;
        let mut phi = vec![0.0; p];
        for (i, v) in phi.iter_mut().enumerate() {
            *v = ((i * 37) % 11) as f64 / 11.0 - 0.4;
        }
        let sys = NdsSystem::autonomous(circle_metric(p), doubling_map(p), phi).unwrap();
        let z = PointSet::full(p);
        let eps = 0.3;
        let params = ProfileParams::new(Theta::new(1, 2), 2, 4);
        let sup = pressure_profile(&sys, &z, eps, &params).unwrap();
        let center = pressure_profile(
            &sys,
            &z,
            eps,
            &ProfileParams { mode: WeightMode::CenterValue, ..params.clone() },
        )
        .unwrap();
        let gamma = sys.potential_oscillation(2.0 * eps);
        for (s, c) in sup.scales.iter().zip(&center.scales) {
            assert!(c.alpha <= s.alpha + 2e-6);
            assert!((c.alpha - s.alpha).abs() <= gamma + 2e-6);
        }
    }
}
