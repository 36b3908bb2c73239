//! Finite nonautonomous systems: a finite metric space, an eventually
//! periodic sequence of self-maps, and a potential.
//!
//! The map sequence `f_1, f_2, ...` is stored as an explicit prefix of
//! length `r` followed by a periodic block of length `q >= 1`, so
//! `f_i = prefix[i-1]` for `i <= r` and `f_i = periodic[(i-r-1) mod q]`
//! beyond. Composition, Bowen metrics, Birkhoff sums and cover strings
//! are all pure functions of this data.

use crate::bitset::PointSet;
use crate::error::SystemError;

/// A total map `{0..P-1} -> {0..P-1}` as a lookup table.
pub type FunctionTable = Vec<usize>;

/// Triangle-inequality validation is `O(P^3)`; callers working with large
/// spaces can opt out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricValidation {
    Full,
    SkipTriangle,
}

/// Default threshold above which [`NdsSystem::new`] skips the cubic
/// triangle-inequality scan.
pub const TRIANGLE_CHECK_MAX_POINTS: usize = 256;

#[derive(Debug, Clone)]
pub struct NdsSystem {
    points: usize,
    metric: Vec<Vec<f64>>,
    prefix: Vec<FunctionTable>,
    periodic: Vec<FunctionTable>,
    potential: Vec<f64>,
}

impl NdsSystem {
    /// Validates the metric (zero diagonal, symmetry, non-negativity and,
    /// for spaces up to [`TRIANGLE_CHECK_MAX_POINTS`] points, the triangle
    /// inequality), the map tables and the potential.
    pub fn new(
        metric: Vec<Vec<f64>>,
        prefix: Vec<FunctionTable>,
        periodic: Vec<FunctionTable>,
        potential: Vec<f64>,
    ) -> Result<Self, SystemError> {
        let validation = if metric.len() > TRIANGLE_CHECK_MAX_POINTS {
            MetricValidation::SkipTriangle
        } else {
            MetricValidation::Full
        };
        Self::with_validation(metric, prefix, periodic, potential, validation)
    }

    pub fn with_validation(
        metric: Vec<Vec<f64>>,
        prefix: Vec<FunctionTable>,
        periodic: Vec<FunctionTable>,
        potential: Vec<f64>,
        validation: MetricValidation,
    ) -> Result<Self, SystemError> {
        let points = metric.len();
        if points == 0 {
            return Err(SystemError::NoPoints);
        }
        for row in &metric {
            if row.len() != points {
                return Err(SystemError::MetricShape { expected: points, got: row.len() });
            }
        }
        for x in 0..points {
            if metric[x][x] != 0.0 {
                return Err(SystemError::MetricDiagonal { x, value: metric[x][x] });
            }
            for y in 0..points {
                let d = metric[x][y];
                if !(d.is_finite() && d >= 0.0) {
                    return Err(SystemError::MetricNegative { x, y, value: d });
                }
                if metric[x][y] != metric[y][x] {
                    return Err(SystemError::MetricAsymmetric {
                        x,
                        y,
                        xy: metric[x][y],
                        yx: metric[y][x],
                    });
                }
            }
        }
        if validation == MetricValidation::Full {
            for x in 0..points {
                for y in 0..points {
                    for z in 0..points {
                        let via = metric[x][y] + metric[y][z];
                        if metric[x][z] > via {
                            return Err(SystemError::MetricTriangle {
                                x,
                                y,
                                z,
                                dxz: metric[x][z],
                                via,
                            });
                        }
                    }
                }
            }
        }
        if periodic.is_empty() {
            return Err(SystemError::NoMaps);
        }
        for (index, table) in prefix.iter().chain(periodic.iter()).enumerate() {
            if table.len() != points {
                return Err(SystemError::MapShape { index, got: table.len(), expected: points });
            }
            for (point, &image) in table.iter().enumerate() {
                if image >= points {
                    return Err(SystemError::MapRange { index, point, image, points });
                }
            }
        }
        if potential.len() != points {
            return Err(SystemError::PotentialShape { got: potential.len(), expected: points });
        }
        for (x, &v) in potential.iter().enumerate() {
            if !v.is_finite() {
                return Err(SystemError::PotentialNonFinite { x, value: v });
            }
        }
        Ok(NdsSystem { points, metric, prefix, periodic, potential })
    }

    /// Single periodic block, no prefix.
    pub fn periodic(
        metric: Vec<Vec<f64>>,
        maps: Vec<FunctionTable>,
        potential: Vec<f64>,
    ) -> Result<Self, SystemError> {
        Self::new(metric, Vec::new(), maps, potential)
    }

    /// Autonomous system: one map applied forever.
    pub fn autonomous(
        metric: Vec<Vec<f64>>,
        map: FunctionTable,
        potential: Vec<f64>,
    ) -> Result<Self, SystemError> {
        Self::periodic(metric, vec![map], potential)
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn distance(&self, x: usize, y: usize) -> f64 {
        self.metric[x][y]
    }

    pub fn metric(&self) -> &[Vec<f64>] {
        &self.metric
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn potential_value(&self, x: usize) -> f64 {
        self.potential[x]
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.periodic.len()
    }

    pub fn prefix_maps(&self) -> &[FunctionTable] {
        &self.prefix
    }

    pub fn periodic_maps(&self) -> &[FunctionTable] {
        &self.periodic
    }

    /// Sup norm of the potential.
    pub fn phi_norm(&self) -> f64 {
        self.potential.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for row in &self.metric {
            for &v in row {
                d = d.max(v);
            }
        }
        d
    }

    /// Smallest nonzero distance, or `None` when all points coincide.
    pub fn min_positive_distance(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for x in 0..self.points {
            for y in (x + 1)..self.points {
                let d = self.metric[x][y];
                if d > 0.0 {
                    best = Some(match best {
                        Some(b) => b.min(d),
                        None => d,
                    });
                }
            }
        }
        best
    }

    /// The map `f_i` (1-based time index).
    pub fn map_at(&self, i: usize) -> &FunctionTable {
        debug_assert!(i >= 1);
        if i <= self.prefix.len() {
            &self.prefix[i - 1]
        } else {
            &self.periodic[(i - 1 - self.prefix.len()) % self.periodic.len()]
        }
    }

    /// Replace the potential, keeping space and dynamics.
    pub fn with_potential(&self, potential: Vec<f64>) -> Result<Self, SystemError> {
        if potential.len() != self.points {
            return Err(SystemError::PotentialShape { got: potential.len(), expected: self.points });
        }
        for (x, &v) in potential.iter().enumerate() {
            if !v.is_finite() {
                return Err(SystemError::PotentialNonFinite { x, value: v });
            }
        }
        let mut sys = self.clone();
        sys.potential = potential;
        Ok(sys)
    }

    /// The shifted system whose first map is `f_k` (so `shift(1)` is a copy).
    pub fn shift(&self, k: usize) -> NdsSystem {
        debug_assert!(k >= 1);
        let drop = k - 1;
        let mut sys = self.clone();
        if drop < self.prefix.len() {
            sys.prefix = self.prefix[drop..].to_vec();
        } else {
            let offset = (drop - self.prefix.len()) % self.periodic.len();
            sys.prefix = Vec::new();
            let q = self.periodic.len();
            sys.periodic = (0..q).map(|j| self.periodic[(offset + j) % q].clone()).collect();
        }
        sys
    }

    /// Table of `f_i^n = f_{i+n-1} o ... o f_i`; `n = 0` is the identity.
    pub fn compose(&self, i: usize, n: usize) -> FunctionTable {
        debug_assert!(i >= 1);
        let mut table: FunctionTable = (0..self.points).collect();
        for step in 0..n {
            let f = self.map_at(i + step);
            for slot in table.iter_mut() {
                *slot = f[*slot];
            }
        }
        table
    }

    /// Orbit tables `orbits[j][x] = f_1^j(x)` for `j = 0..=n_max`.
    pub fn orbit_tables(&self, n_max: usize) -> Vec<FunctionTable> {
        let mut orbits = Vec::with_capacity(n_max + 1);
        orbits.push((0..self.points).collect::<Vec<_>>());
        for j in 0..n_max {
            let f = self.map_at(j + 1);
            let prev = &orbits[j];
            orbits.push(prev.iter().map(|&x| f[x]).collect());
        }
        orbits
    }

    /// `d_n(x, y) = max_{0<=j<n} d(f_1^j x, f_1^j y)`.
    pub fn bowen_distance(&self, x: usize, y: usize, n: usize) -> f64 {
        debug_assert!(n >= 1);
        let mut cx = x;
        let mut cy = y;
        let mut d = self.metric[cx][cy];
        for j in 1..n {
            let f = self.map_at(j);
            cx = f[cx];
            cy = f[cy];
            d = d.max(self.metric[cx][cy]);
        }
        d
    }

    /// `S_n phi(x) = sum_{0<=j<n} phi(f_1^j x)`.
    pub fn birkhoff_sum(&self, x: usize, n: usize) -> f64 {
        let mut s = 0.0;
        let mut cx = x;
        for j in 0..n {
            s += self.potential[cx];
            if j + 1 < n {
                cx = self.map_at(j + 1)[cx];
            }
        }
        s
    }

    /// Image of a point set under `f_k`.
    pub fn image(&self, k: usize, z: &PointSet) -> PointSet {
        let f = self.map_at(k);
        let mut out = PointSet::empty(self.points);
        for p in z.iter() {
            out.insert(f[p]);
        }
        out
    }

    /// The open `(n, eps)`-Bowen ball around `x` (strict inequality).
    pub fn bowen_ball(&self, x: usize, n: usize, epsilon: f64) -> CoverCandidate {
        debug_assert!(n >= 1 && epsilon > 0.0);
        let mut members = PointSet::empty(self.points);
        for y in 0..self.points {
            if self.bowen_distance(x, y, n) < epsilon {
                members.insert(y);
            }
        }
        let sup = self.sup_birkhoff_over(&members, n);
        CoverCandidate {
            kind: CandidateKind::BowenBall { center: x, radius: epsilon },
            length: n,
            members,
            sup_birkhoff: sup,
        }
    }

    /// `X(U) = {x : f_1^j(x) in U_{string[j]} for all j}` for a cover string.
    pub fn string_set(&self, cover: &OpenCover, string: &[usize]) -> CoverCandidate {
        debug_assert!(!string.is_empty());
        let n = string.len();
        let mut members = PointSet::full(self.points);
        let mut orbit: Vec<usize> = (0..self.points).collect();
        for (j, &set_index) in string.iter().enumerate() {
            let set = &cover.sets[set_index];
            let mut stage = PointSet::empty(self.points);
            for x in 0..self.points {
                if set.contains(orbit[x]) {
                    stage.insert(x);
                }
            }
            members.intersect_with(&stage);
            if j + 1 < n {
                let f = self.map_at(j + 1);
                for slot in orbit.iter_mut() {
                    *slot = f[*slot];
                }
            }
        }
        let sup = self.sup_birkhoff_over(&members, n);
        CoverCandidate {
            kind: CandidateKind::StringCover { string: string.to_vec() },
            length: n,
            members,
            sup_birkhoff: sup,
        }
    }

    /// Max of `S_n phi` over a set; `-inf` on the empty set.
    pub fn sup_birkhoff_over(&self, members: &PointSet, n: usize) -> f64 {
        let mut sup = f64::NEG_INFINITY;
        for y in members.iter() {
            sup = sup.max(self.birkhoff_sum(y, n));
        }
        sup
    }

    /// Measured oscillation `max { |phi(x) - phi(y)| : d(x, y) < radius }`.
    ///
    /// This is the finite-space surrogate for the modulus of continuity of
    /// the potential; tolerance checks that compare sup-value and
    /// center-value weights use it.
    pub fn potential_oscillation(&self, radius: f64) -> f64 {
        let mut m = 0.0f64;
        for x in 0..self.points {
            for y in 0..self.points {
                if self.metric[x][y] < radius {
                    m = m.max((self.potential[x] - self.potential[y]).abs());
                }
            }
        }
        m
    }
}

/// A finite open cover of the space.
#[derive(Debug, Clone)]
pub struct OpenCover {
    sets: Vec<PointSet>,
    mesh: f64,
}

impl OpenCover {
    pub fn new(sys: &NdsSystem, sets: Vec<PointSet>) -> Result<Self, SystemError> {
        let mut union = PointSet::empty(sys.points());
        for (index, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(SystemError::EmptyCoverSet { index });
            }
            union.union_with(s);
        }
        for p in 0..sys.points() {
            if !union.contains(p) {
                return Err(SystemError::CoverIncomplete { point: p });
            }
        }
        let mut mesh = 0.0f64;
        for s in &sets {
            let pts = s.to_indices();
            for (ai, &a) in pts.iter().enumerate() {
                for &b in &pts[ai + 1..] {
                    mesh = mesh.max(sys.distance(a, b));
                }
            }
        }
        Ok(OpenCover { sets, mesh })
    }

    pub fn from_index_sets(sys: &NdsSystem, sets: &[Vec<usize>]) -> Result<Self, SystemError> {
        let sets = sets
            .iter()
            .map(|s| PointSet::from_indices(sys.points(), s))
            .collect();
        Self::new(sys, sets)
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn sets(&self) -> &[PointSet] {
        &self.sets
    }
}

/// Either kind of weighted covering piece.
#[derive(Debug, Clone, PartialEq)]
pub enum CandidateKind {
    BowenBall { center: usize, radius: f64 },
    StringCover { string: Vec<usize> },
}

/// A Bowen ball or cover string together with its member set, time length
/// and Birkhoff weight data. `weight(alpha) = exp(-alpha*length + sup_birkhoff)`
/// is strictly decreasing and continuous in `alpha`.
#[derive(Debug, Clone)]
pub struct CoverCandidate {
    pub kind: CandidateKind,
    pub length: usize,
    pub members: PointSet,
    pub sup_birkhoff: f64,
}

impl CoverCandidate {
    pub fn weight(&self, alpha: f64) -> f64 {
        (-alpha * self.length as f64 + self.sup_birkhoff).exp()
    }
}

pub mod generators {
    //! Metric and potential generators shared by config loading and tests.

    /// Circle metric on `p` equally spaced points, circumference 1.
    pub fn circle_metric(p: usize) -> Vec<Vec<f64>> {
        (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| {
                        let k = i.abs_diff(j);
                        k.min(p - k) as f64 / p as f64
                    })
                    .collect()
            })
            .collect()
    }

    /// Normalized Hamming metric on `2^bits` bit strings.
    pub fn hamming_metric(bits: usize) -> Vec<Vec<f64>> {
        let p = 1usize << bits;
        (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| (i ^ j).count_ones() as f64 / bits as f64)
                    .collect()
            })
            .collect()
    }

    /// Ultrametric from a balanced `arity`-ary tree of the given depth:
    /// `d(i, j) = 2^-(length of common base-`arity` prefix)`.
    pub fn ultrametric_tree(arity: usize, depth: usize) -> Vec<Vec<f64>> {
        let p = arity.pow(depth as u32);
        let digits = |mut x: usize| -> Vec<usize> {
            let mut d = vec![0; depth];
            for slot in d.iter_mut().rev() {
                *slot = x % arity;
                x /= arity;
            }
            d
        };
        let coords: Vec<Vec<usize>> = (0..p).map(digits).collect();
        (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| {
                        if i == j {
                            return 0.0;
                        }
                        let common =
                            coords[i].iter().zip(&coords[j]).take_while(|(a, b)| a == b).count();
                        0.5f64.powi(common as i32)
                    })
                    .collect()
            })
            .collect()
    }

    /// The doubling table `x -> 2x mod p`.
    pub fn doubling_map(p: usize) -> Vec<usize> {
        (0..p).map(|x| (2 * x) % p).collect()
    }

    /// The rotation table `x -> x + shift mod p`.
    pub fn rotation_map(p: usize, shift: usize) -> Vec<usize> {
        (0..p).map(|x| (x + shift) % p).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::generators::*;
    use super::*;

    fn doubling_circle(p: usize) -> NdsSystem {
        NdsSystem::autonomous(circle_metric(p), doubling_map(p), vec![0.0; p]).unwrap()
    }

    #[test]
    fn compose_identity_and_doubling() {
        let sys = doubling_circle(4);
        assert_eq!(sys.compose(1, 0), vec![0, 1, 2, 3]);
        assert_eq!(sys.compose(7, 0), vec![0, 1, 2, 3]);
        // 4x mod 4 is constant zero
        assert_eq!(sys.compose(1, 2), vec![0, 0, 0, 0]);
    }

    #[test]
    fn compose_alternating_pair() {
        let p = 4;
        let f = rotation_map(p, 1);
        let g = doubling_map(p);
        let sys =
            NdsSystem::periodic(circle_metric(p), vec![f.clone(), g.clone()], vec![0.0; p]).unwrap();
        let g_after_f: Vec<usize> = (0..p).map(|x| g[f[x]]).collect();
        let f_after_g: Vec<usize> = (0..p).map(|x| f[g[x]]).collect();
        assert_eq!(sys.compose(1, 2), g_after_f);
        assert_eq!(sys.compose(2, 2), f_after_g);
    }

    #[test]
    fn bowen_distance_examples() {
        let sys = doubling_circle(8);
        for x in 0..8 {
            assert_eq!(sys.bowen_distance(x, x, 3), 0.0);
        }
        assert_eq!(sys.bowen_distance(0, 3, 1), sys.distance(0, 3));
        // orbit of 1 is (1, 2); distances to 0's orbit (0, 0): 1/8 then 2/8
        assert_eq!(sys.bowen_distance(0, 1, 2), 0.25);
    }

    #[test]
    fn bowen_ball_extremes() {
        let sys = doubling_circle(8);
        let all = sys.bowen_ball(3, 2, 1.0);
        assert_eq!(all.members.len(), 8);
        let tiny = sys.bowen_ball(3, 1, 0.1);
        assert_eq!(tiny.members.to_indices(), vec![3]);
    }

    #[test]
    fn bowen_ball_two_step_enumeration() {
        // All eight d_2 values to the fixed point 0 equal max(d(0,y), d(0,2y)),
        // which is at least 1/4 for every y != 0, so the 0.2-ball is a singleton.
        let sys = doubling_circle(8);
        let ball = sys.bowen_ball(0, 2, 0.2);
        assert_eq!(ball.members.to_indices(), vec![0]);
        // just above 1/4 the neighbours 1 and 7 appear (6 stays out:
        // its orbit reaches 4, half a circle away from 0's)
        let wider = sys.bowen_ball(0, 2, 0.26);
        assert_eq!(wider.members.to_indices(), vec![0, 1, 7]);
    }

    #[test]
    fn birkhoff_basics() {
        let p = 6;
        let sys =
            NdsSystem::autonomous(circle_metric(p), doubling_map(p), vec![1.5; p]).unwrap();
        assert_eq!(sys.birkhoff_sum(2, 4), 6.0);
        let zero = doubling_circle(p);
        assert_eq!(zero.birkhoff_sum(3, 5), 0.0);
        // fixed point: 0 maps to 0
        let mut phi = vec![0.0; p];
        phi[0] = -0.75;
        let fixed = zero.with_potential(phi).unwrap();
        assert_eq!(fixed.birkhoff_sum(0, 4), -3.0);
    }

    #[test]
    fn string_set_examples() {
        let sys = doubling_circle(4);
        let cover = OpenCover::from_index_sets(&sys, &[vec![0, 1], vec![2, 3]]).unwrap();
        let single = sys.string_set(&cover, &[0]);
        assert_eq!(single.members.to_indices(), vec![0, 1]);
        // x in {0,1} with 2x mod 4 in {2,3}: only x = 1
        let two = sys.string_set(&cover, &[0, 1]);
        assert_eq!(two.members.to_indices(), vec![1]);

        let trivial = OpenCover::from_index_sets(&sys, &[vec![0, 1, 2, 3]]).unwrap();
        let s = sys.string_set(&trivial, &[0, 0, 0]);
        assert_eq!(s.members.len(), 4);
    }

    #[test]
    fn shift_rotates_periodic_block() {
        let p = 4;
        let f = rotation_map(p, 1);
        let g = doubling_map(p);
        let sys =
            NdsSystem::periodic(circle_metric(p), vec![f.clone(), g.clone()], vec![0.0; p]).unwrap();
        let shifted = sys.shift(2);
        assert_eq!(shifted.map_at(1), &g);
        assert_eq!(shifted.map_at(2), &f);
        // shifting by the period is the identity on the sequence
        let back = sys.shift(3);
        assert_eq!(back.map_at(1), &f);
    }

    #[test]
    fn shift_consumes_prefix() {
        let p = 4;
        let a = rotation_map(p, 1);
        let b = rotation_map(p, 2);
        let c = doubling_map(p);
        let sys = NdsSystem::new(circle_metric(p), vec![a, b.clone()], vec![c.clone()], vec![0.0; p])
            .unwrap();
        let s2 = sys.shift(2);
        assert_eq!(s2.prefix_len(), 1);
        assert_eq!(s2.map_at(1), &b);
        let s3 = sys.shift(3);
        assert_eq!(s3.prefix_len(), 0);
        assert_eq!(s3.map_at(1), &c);
    }

    #[test]
    fn triangle_violation_rejected() {
        let metric = vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ];
        let err = NdsSystem::autonomous(metric, vec![0, 1, 2], vec![0.0; 3]);
        assert!(matches!(err, Err(SystemError::MetricTriangle { .. })));
    }

    #[test]
    fn map_range_rejected() {
        let metric = circle_metric(3);
        let err = NdsSystem::autonomous(metric, vec![0, 1, 7], vec![0.0; 3]);
        assert!(matches!(err, Err(SystemError::MapRange { .. })));
    }

    #[test]
    fn oscillation_measured() {
        let p = 4;
        let sys = NdsSystem::autonomous(
            circle_metric(p),
            doubling_map(p),
            vec![0.0, 1.0, 0.0, -1.0],
        )
        .unwrap();
        // radius just above one step: neighbours differ by at most 1
        assert_eq!(sys.potential_oscillation(0.26), 1.0);
        assert_eq!(sys.potential_oscillation(1.0), 2.0);
    }
}
