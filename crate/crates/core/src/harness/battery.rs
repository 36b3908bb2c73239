//! Instance construction: built-in systems, seeded random systems, and
//! the derived constructions (relabelings, products) the factor checks
//! exercise.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitset::PointSet;
use crate::error::SystemError;
use crate::harness::FactorMap;
use crate::system::generators::{circle_metric, doubling_map, rotation_map};
use crate::system::{FunctionTable, NdsSystem};

/// One test instance: a system, a subset and a working radius.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub system: NdsSystem,
    pub z: PointSet,
    pub epsilon: f64,
}

impl Instance {
    pub fn new(name: impl Into<String>, system: NdsSystem, z: PointSet, epsilon: f64) -> Self {
        Instance { name: name.into(), system, z, epsilon }
    }

    pub fn whole_space(name: impl Into<String>, system: NdsSystem, epsilon: f64) -> Self {
        let z = PointSet::full(system.points());
        Self::new(name, system, z, epsilon)
    }
}

fn all_pairs_metric(p: usize, d: f64) -> Vec<Vec<f64>> {
    (0..p)
        .map(|i| (0..p).map(|j| if i == j { 0.0 } else { d }).collect())
        .collect()
}

/// The default five-instance battery used by the verify command.
pub fn built_in_battery() -> Vec<Instance> {
    let mut out = Vec::new();

    // expanding circle map, zero potential
    let p = 8;
    let doubling =
        NdsSystem::autonomous(circle_metric(p), doubling_map(p), vec![0.0; p]).unwrap();
    out.push(Instance::whole_space("doubling8", doubling, 0.3));

    // genuinely nonautonomous: two alternating rotations, indicator potential
    let p = 6;
    let mut phi = vec![0.0; p];
    phi[0] = 0.5;
    let rotations = NdsSystem::periodic(
        circle_metric(p),
        vec![rotation_map(p, 1), rotation_map(p, 2)],
        phi,
    )
    .unwrap();
    out.push(Instance::whole_space("rotating-pair6", rotations, 0.3));

    // everything collapses onto a fixed point
    let contracting =
        NdsSystem::autonomous(all_pairs_metric(3, 1.0), vec![0, 0, 0], vec![0.7, -0.2, 0.1])
            .unwrap();
    out.push(Instance::whole_space("fixed-point3", contracting, 0.5));

    // seeded random system with a prefix map
    out.push(random_instance(0xb0771e, 10, 3));

    // product of a doubling base with a two-point flipping fiber
    let base = NdsSystem::autonomous(circle_metric(4), doubling_map(4), vec![0.0; 4]).unwrap();
    let (product, _) = product_with_fiber(&base, 2, 0.5).unwrap();
    let phi: Vec<f64> = (0..product.points()).map(|i| ((i % 3) as f64 - 1.0) * 0.4).collect();
    let product = product.with_potential(phi).unwrap();
    out.push(Instance::whole_space("product8", product, 0.3));

    out
}

/// A seeded random instance: points embedded in the unit square with the
/// Euclidean metric (triangle inequality for free), random map tables
/// with period up to `max_period` and an occasional prefix map, and a
/// random potential with sup norm at most one.
pub fn random_instance(seed: u64, max_points: usize, max_period: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = rng.gen_range(4..=max_points.max(4));
    let coords: Vec<(f64, f64)> =
        (0..p).map(|_| (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0))).collect();
    let metric: Vec<Vec<f64>> = (0..p)
        .map(|i| {
            (0..p)
                .map(|j| {
                    let dx = coords[i].0 - coords[j].0;
                    let dy = coords[i].1 - coords[j].1;
                    (dx * dx + dy * dy).sqrt()
                })
                .collect()
        })
        .collect();
    let q = rng.gen_range(1..=max_period.max(1));
    let random_table = |rng: &mut ChaCha8Rng| -> FunctionTable {
        (0..p).map(|_| rng.gen_range(0..p)).collect()
    };
    let periodic: Vec<FunctionTable> = (0..q).map(|_| random_table(&mut rng)).collect();
    let prefix: Vec<FunctionTable> =
        if rng.gen_bool(0.3) { vec![random_table(&mut rng)] } else { Vec::new() };
    let potential: Vec<f64> = (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let system = NdsSystem::new(metric, prefix, periodic, potential).unwrap();

    let mut distances: Vec<f64> = Vec::new();
    for i in 0..p {
        for j in (i + 1)..p {
            if system.distance(i, j) > 0.0 {
                distances.push(system.distance(i, j));
            }
        }
    }
    distances.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let epsilon = if distances.is_empty() { 0.5 } else { 0.6 * distances[distances.len() / 2] };

    Instance::whole_space(format!("random-{seed:x}"), system, epsilon)
}

/// Seeded battery of random instances.
pub fn random_battery(seed: u64, count: usize, max_points: usize, max_period: usize) -> Vec<Instance> {
    (0..count)
        .map(|i| random_instance(seed.wrapping_add(i as u64).wrapping_mul(0x9e3779b97f4a7c15), max_points, max_period))
        .collect()
}

/// Relabel a system along a permutation and return the conjugating
/// factor map. The relabeled system is isometric to the original and the
/// permutation commutes with the dynamics by construction.
pub fn relabel_system(sys: &NdsSystem, perm: &[usize]) -> Result<(NdsSystem, FactorMap), SystemError> {
    let p = sys.points();
    assert_eq!(perm.len(), p, "permutation length must match the point count");
    let mut inverse = vec![usize::MAX; p];
    for (x, &px) in perm.iter().enumerate() {
        inverse[px] = x;
    }
    assert!(inverse.iter().all(|&v| v != usize::MAX), "relabeling must be a permutation");

    let metric: Vec<Vec<f64>> = (0..p)
        .map(|i| (0..p).map(|j| sys.distance(inverse[i], inverse[j])).collect())
        .collect();
    let relabel_table =
        |t: &FunctionTable| -> FunctionTable { (0..p).map(|i| perm[t[inverse[i]]]).collect() };
    let prefix = sys.prefix_maps().iter().map(relabel_table).collect();
    let periodic = sys.periodic_maps().iter().map(relabel_table).collect();
    let potential: Vec<f64> = (0..p).map(|i| sys.potential_value(inverse[i])).collect();
    let target = NdsSystem::new(metric, prefix, periodic, potential)?;
    let fm = FactorMap::new(sys.clone(), target.clone(), perm.to_vec())
        .expect("a relabeling is always a semiconjugacy");
    Ok((target, fm))
}

/// Seeded random permutation.
pub fn random_permutation(p: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..p).collect();
    for i in (1..p).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Product of a base system with a `fiber_count`-point fiber carrying the
/// flip/rotation map, under the max metric; returns the source system and
/// the coordinate projection as a factor map. Fiber points sit at mutual
/// distance `fiber_separation`. The source potential is the pullback of
/// the base potential.
pub fn product_with_fiber(
    base: &NdsSystem,
    fiber_count: usize,
    fiber_separation: f64,
) -> Result<(NdsSystem, FactorMap), SystemError> {
    assert!(fiber_count >= 1);
    let pb = base.points();
    let p = pb * fiber_count;
    let idx = |y: usize, a: usize| y * fiber_count + a;
    let metric: Vec<Vec<f64>> = (0..p)
        .map(|i| {
            (0..p)
                .map(|j| {
                    let (y1, a1) = (i / fiber_count, i % fiber_count);
                    let (y2, a2) = (j / fiber_count, j % fiber_count);
                    let fd = if a1 == a2 { 0.0 } else { fiber_separation };
                    base.distance(y1, y2).max(fd)
                })
                .collect()
        })
        .collect();
    // fiber dynamics: cyclic rotation (the flip when fiber_count = 2)
    let lift = |t: &FunctionTable| -> FunctionTable {
        (0..p)
            .map(|i| {
                let (y, a) = (i / fiber_count, i % fiber_count);
                idx(t[y], (a + 1) % fiber_count)
            })
            .collect()
    };
    let prefix = base.prefix_maps().iter().map(lift).collect();
    let periodic = base.periodic_maps().iter().map(lift).collect();
    let potential: Vec<f64> = (0..p).map(|i| base.potential_value(i / fiber_count)).collect();
    let source = NdsSystem::new(metric, prefix, periodic, potential)?;
    let pi: Vec<usize> = (0..p).map(|i| i / fiber_count).collect();
    let fm = FactorMap::new(source.clone(), base.clone(), pi)
        .expect("the coordinate projection is a semiconjugacy");
    Ok((source, fm))
}

/// Collapse everything to a single-point target with potential `value`;
/// always a semiconjugacy.
pub fn collapse_all(sys: &NdsSystem, value: f64) -> (NdsSystem, FactorMap) {
    let target = NdsSystem::autonomous(vec![vec![0.0]], vec![0], vec![value]).unwrap();
    let pi = vec![0; sys.points()];
    let fm = FactorMap::new(sys.clone(), target.clone(), pi)
        .expect("collapsing to a point is a semiconjugacy");
    (target, fm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_has_five_instances() {
        let battery = built_in_battery();
        assert_eq!(battery.len(), 5);
        for inst in &battery {
            assert!(inst.epsilon > 0.0);
            assert!(!inst.z.is_empty());
        }
    }

    #[test]
    fn random_instances_are_reproducible() {
        let a = random_instance(42, 12, 3);
        let b = random_instance(42, 12, 3);
        assert_eq!(a.system.metric(), b.system.metric());
        assert_eq!(a.system.potential(), b.system.potential());
        assert_eq!(a.epsilon, b.epsilon);
        let c = random_instance(43, 12, 3);
        assert!(a.system.metric() != c.system.metric() || a.system.potential() != c.system.potential());
    }

    #[test]
    fn relabeling_preserves_distances() {
        let inst = random_instance(7, 8, 2);
        let perm = random_permutation(inst.system.points(), 99);
        let (target, fm) = relabel_system(&inst.system, &perm).unwrap();
        assert!(fm.bijective);
        assert!(fm.isometric);
        for x in 0..inst.system.points() {
            for y in 0..inst.system.points() {
                assert_eq!(inst.system.distance(x, y), target.distance(perm[x], perm[y]));
            }
        }
    }

    #[test]
    fn product_projection_is_semiconjugacy() {
        let base = NdsSystem::autonomous(circle_metric(4), doubling_map(4), vec![0.0; 4]).unwrap();
        let (source, fm) = product_with_fiber(&base, 2, 0.5).unwrap();
        assert_eq!(source.points(), 8);
        assert!(!fm.bijective);
        // fibers are the odd/even index pairs
        assert_eq!(fm.fiber(0).len(), 2);
    }
}
