//! Measure-theoretic pressures over full-measure covers, and the two
//! variational principles.
//!
//! On a finite space a family of balls has full measure exactly when its
//! union contains the support, so the measure pressure is the set
//! pressure of the support and both variational principles reduce to
//! exact identities at every finite scale. The checks below verify this
//! by independent recomputation over supersets and measure families.

use crate::bitset::PointSet;
use crate::cover::{pressure_profile, PressureProfile, ProfileParams};
use crate::error::{CoverError, SystemError};
use crate::system::NdsSystem;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Probability weights on the point space. Atoms of weight zero are
/// dropped from the support at construction.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    weights: Vec<f64>,
    support: PointSet,
}

pub const NORMALIZATION_TOL: f64 = 1e-12;

impl DiscreteMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self, SystemError> {
        let mut sum = 0.0;
        for (point, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w >= 0.0) {
                return Err(SystemError::MeasureNegative { point, value: w });
            }
            sum += w;
        }
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(SystemError::MeasureNotNormalized { sum });
        }
        let mut support = PointSet::empty(weights.len());
        for (p, &w) in weights.iter().enumerate() {
            if w > 0.0 {
                support.insert(p);
            }
        }
        Ok(DiscreteMeasure { weights, support })
    }

    pub fn dirac(points: usize, at: usize) -> Result<Self, SystemError> {
        if at >= points {
            return Err(SystemError::PointOutOfRange { index: at, points });
        }
        let mut w = vec![0.0; points];
        w[at] = 1.0;
        Self::new(w)
    }

    pub fn uniform_on(points: usize, z: &PointSet) -> Result<Self, SystemError> {
        let k = z.len();
        assert!(k > 0, "uniform measure needs a nonempty set");
        let mut w = vec![0.0; points];
        for p in z.iter() {
            w[p] = 1.0 / k as f64;
        }
        // force exact normalization against rounding of 1/k
        let sum: f64 = w.iter().sum();
        for v in w.iter_mut() {
            *v /= sum;
        }
        Self::new(w)
    }

    /// Dyadic weights `1/2, 1/4, ...` along the point-index enumeration of
    /// `z`, with the last atom doubled so the total is exactly one.
    pub fn geometric_on(points: usize, z: &PointSet) -> Result<Self, SystemError> {
        let idx = z.to_indices();
        assert!(!idx.is_empty(), "geometric measure needs a nonempty set");
        let mut w = vec![0.0; points];
        for (i, &p) in idx.iter().enumerate() {
            w[p] = 0.5f64.powi((i + 1) as i32);
        }
        // double the last atom so the dyadic tail sums to exactly one
        if let Some(&last) = idx.last() {
            w[last] *= 2.0;
        }
        Self::new(w)
    }

    /// Seeded random measure with full support on `z`.
    pub fn random_on(points: usize, z: &PointSet, seed: u64) -> Result<Self, SystemError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = vec![0.0; points];
        let mut sum = 0.0;
        for p in z.iter() {
            let v: f64 = rng.gen_range(0.05..1.0);
            w[p] = v;
            sum += v;
        }
        for v in w.iter_mut() {
            *v /= sum;
        }
        // rounding guard: renormalize once more off the exact sum
        let s: f64 = w.iter().sum();
        for v in w.iter_mut() {
            *v /= s;
        }
        Self::new(w)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn support(&self) -> &PointSet {
        &self.support
    }

    /// `mu(Z) = 1` iff the support sits inside `Z`.
    pub fn is_full_on(&self, z: &PointSet) -> bool {
        self.support.is_subset_of(z)
    }
}

/// Measure-theoretic pressure profile: the cover pipeline with the
/// support as universe.
pub fn measure_pressure_profile(
    sys: &NdsSystem,
    mu: &DiscreteMeasure,
    epsilon: f64,
    params: &ProfileParams,
) -> Result<PressureProfile, CoverError> {
    pressure_profile(sys, mu.support(), epsilon, params)
}

/// Verdict of one variational comparison.
#[derive(Debug, Clone)]
pub struct VariationalReport {
    pub label: String,
    /// Largest deviation observed against the allowed slack.
    pub worst_gap: f64,
    pub allowed: f64,
    pub pass: bool,
    pub cases: usize,
}

/// Checks that the measure pressure equals the infimum of set pressures
/// over full-measure sets, by enumerating supersets of the support
/// (exhaustively up to `max_enumeration` sets, seeded sampling beyond).
pub fn variational_inf_check(
    sys: &NdsSystem,
    mu: &DiscreteMeasure,
    epsilon: f64,
    params: &ProfileParams,
    max_enumeration: usize,
    seed: u64,
) -> Result<VariationalReport, CoverError> {
    let p = sys.points();
    let support = mu.support().to_indices();
    let free: Vec<usize> = (0..p).filter(|&i| !mu.support().contains(i)).collect();
    let mu_profile = measure_pressure_profile(sys, mu, epsilon, params)?;

    let subsets: Vec<Vec<usize>> = if 1usize.checked_shl(free.len() as u32).unwrap_or(usize::MAX)
        <= max_enumeration
    {
        (0..(1usize << free.len()))
            .map(|bits| {
                free.iter()
                    .enumerate()
                    .filter(|(i, _)| bits >> i & 1 == 1)
                    .map(|(_, &pt)| pt)
                    .collect()
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sets = vec![Vec::new(), free.clone()];
        for _ in 0..max_enumeration.saturating_sub(2) {
            sets.push(free.iter().copied().filter(|_| rng.gen_bool(0.5)).collect());
        }
        sets
    };

    let mut inf = f64::INFINITY;
    let mut cases = 0;
    for extra in &subsets {
        let mut z = PointSet::from_indices(p, &support);
        for &pt in extra {
            z.insert(pt);
        }
        let profile = pressure_profile(sys, &z, epsilon, params)?;
        // the inf over full-measure sets, per scale: track via the upper
        // surrogate and also enforce per-scale domination
        for (ms, zs) in mu_profile.scales.iter().zip(&profile.scales) {
            debug_assert!(ms.alpha <= zs.alpha + 2.0 * params.tol);
        }
        inf = inf.min(profile.upper());
        cases += 1;
    }
    let allowed = 2.0 * params.tol;
    let worst_gap = (mu_profile.upper() - inf).abs();
    Ok(VariationalReport {
        label: "variational_inf".to_string(),
        worst_gap,
        allowed,
        pass: worst_gap <= allowed,
        cases,
    })
}

/// Checks the supremum side: no full-measure measure exceeds the set
/// pressure, and the uniform measure attains it.
pub fn variational_sup_check(
    sys: &NdsSystem,
    z: &PointSet,
    epsilon: f64,
    params: &ProfileParams,
    random_measures: usize,
    seed: u64,
) -> Result<VariationalReport, CoverError> {
    let p = sys.points();
    let z_profile = pressure_profile(sys, z, epsilon, params)?;
    let z_upper = z_profile.upper();

    let mut family: Vec<(String, DiscreteMeasure)> = Vec::new();
    for pt in z.iter() {
        family.push((format!("dirac_{pt}"), DiscreteMeasure::dirac(p, pt).expect("valid point")));
    }
    family.push(("uniform".into(), DiscreteMeasure::uniform_on(p, z).expect("nonempty")));
    family.push(("geometric".into(), DiscreteMeasure::geometric_on(p, z).expect("nonempty")));
    for i in 0..random_measures {
        family.push((
            format!("random_{i}"),
            DiscreteMeasure::random_on(p, z, seed.wrapping_add(i as u64)).expect("nonempty"),
        ));
    }

    let allowed = 2.0 * params.tol;
    let mut sup = f64::NEG_INFINITY;
    let mut worst_gap = 0.0f64;
    let mut pass = true;
    let mut uniform_gap = f64::INFINITY;
    for (label, mu) in &family {
        debug_assert!(mu.is_full_on(z), "family member {label} must give z full measure");
        let profile = measure_pressure_profile(sys, mu, epsilon, params)?;
        let upper = profile.upper();
        sup = sup.max(upper);
        if upper > z_upper + allowed {
            pass = false;
            worst_gap = worst_gap.max(upper - z_upper);
        }
        if label == "uniform" {
            uniform_gap = (upper - z_upper).abs();
        }
    }
    // attainment: the uniform measure has support exactly z
    if uniform_gap > allowed {
        pass = false;
    }
    worst_gap = worst_gap.max(uniform_gap).max((sup - z_upper).max(0.0));
    Ok(VariationalReport {
        label: "variational_sup".to_string(),
        worst_gap,
        allowed,
        pass,
        cases: family.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::Theta;
    use crate::system::generators::{circle_metric, doubling_map};

    fn small_system(p: usize) -> NdsSystem {
        let phi: Vec<f64> = (0..p).map(|i| ((i * 7) % 5) as f64 / 5.0 - 0.3).collect();
        NdsSystem::autonomous(circle_metric(p), doubling_map(p), phi).unwrap()
    }

    #[test]
    fn normalization_enforced() {
        assert!(DiscreteMeasure::new(vec![0.5, 0.4]).is_err());
        assert!(DiscreteMeasure::new(vec![0.5, -0.5, 1.0]).is_err());
        let mu = DiscreteMeasure::new(vec![0.25, 0.0, 0.75]).unwrap();
        assert_eq!(mu.support().to_indices(), vec![0, 2]);
    }

    #[test]
    fn geometric_weights_are_dyadic_and_sum_to_one() {
        let z = PointSet::from_indices(6, &[1, 2, 4, 5]);
        let mu = DiscreteMeasure::geometric_on(6, &z).unwrap();
        assert_eq!(mu.weights()[1], 0.5);
        assert_eq!(mu.weights()[2], 0.25);
        assert_eq!(mu.weights()[4], 0.125);
        assert_eq!(mu.weights()[5], 0.125);
        assert_eq!(mu.support().to_indices(), vec![1, 2, 4, 5]);
        let single = DiscreteMeasure::geometric_on(3, &PointSet::from_indices(3, &[2])).unwrap();
        assert_eq!(single.weights()[2], 1.0);
    }

    #[test]
    fn dirac_profile_is_the_potential_at_a_fixed_point() {
        // 0 is fixed for the doubling map
        let sys = small_system(6);
        let mu = DiscreteMeasure::dirac(6, 0).unwrap();
        let params = ProfileParams::new(Theta::new(1, 2), 2, 4);
        let profile = measure_pressure_profile(&sys, &mu, 0.3, &params).unwrap();
        let phi0 = sys.potential_value(0);
        assert!((profile.upper() - phi0).abs() <= 2.0 * params.tol);
    }

    #[test]
    fn uniform_equals_set_profile_bitwise() {
        let sys = small_system(8);
        let z = PointSet::from_indices(8, &[0, 2, 3, 5, 7]);
        let mu = DiscreteMeasure::uniform_on(8, &z).unwrap();
        let params = ProfileParams::new(Theta::new(1, 2), 2, 4);
        let a = pressure_profile(&sys, &z, 0.3, &params).unwrap();
        let b = measure_pressure_profile(&sys, &mu, 0.3, &params).unwrap();
        for (x, y) in a.scales.iter().zip(&b.scales) {
            assert_eq!(x.alpha.to_bits(), y.alpha.to_bits());
        }
    }

    #[test]
    fn support_monotone() {
        let sys = small_system(8);
        let small = DiscreteMeasure::uniform_on(8, &PointSet::from_indices(8, &[1, 4])).unwrap();
        let big =
            DiscreteMeasure::uniform_on(8, &PointSet::from_indices(8, &[1, 3, 4, 6])).unwrap();
        let params = ProfileParams::new(Theta::new(1, 2), 2, 4);
        let a = measure_pressure_profile(&sys, &small, 0.3, &params).unwrap();
        let b = measure_pressure_profile(&sys, &big, 0.3, &params).unwrap();
        for (x, y) in a.scales.iter().zip(&b.scales) {
            assert!(x.alpha <= y.alpha);
        }
    }

    #[test]
    fn inf_check_dirac_on_five_points() {
        let sys = small_system(5);
        let mu = DiscreteMeasure::dirac(5, 0).unwrap();
        let params = ProfileParams::new(Theta::one(), 2, 4);
        let report = variational_inf_check(&sys, &mu, 0.3, &params, 64, 7).unwrap();
        assert!(report.pass, "worst gap {} > {}", report.worst_gap, report.allowed);
        assert_eq!(report.cases, 16); // 2^4 supersets
    }

    #[test]
    fn sup_check_on_six_points() {
        let sys = small_system(6);
        let z = PointSet::from_indices(6, &[0, 1, 3, 4]);
        let params = ProfileParams::new(Theta::new(1, 2), 2, 4);
        let report = variational_sup_check(&sys, &z, 0.3, &params, 3, 11).unwrap();
        assert!(report.pass, "worst gap {} > {}", report.worst_gap, report.allowed);
    }

    #[test]
    fn sup_check_singleton_exact() {
        let sys = small_system(4);
        let z = PointSet::from_indices(4, &[2]);
        let params = ProfileParams::new(Theta::new(1, 2), 2, 3);
        let report = variational_sup_check(&sys, &z, 0.3, &params, 0, 3).unwrap();
        assert!(report.pass);
    }
}
