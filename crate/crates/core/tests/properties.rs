//! Property tests over randomly generated small systems.

use proptest::prelude::*;

use thetapress_core::cover::ThetaWindow;
use thetapress_core::system::OpenCover;
use thetapress_core::{NdsSystem, PointSet, Theta};

#[derive(Debug, Clone)]
struct SmallSystem {
    sys: NdsSystem,
}

fn small_system() -> impl Strategy<Value = SmallSystem> {
    (2usize..=8)
        .prop_flat_map(|p| {
            let coords = proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), p);
            let period = 1usize..=3;
            (Just(p), coords, period)
        })
        .prop_flat_map(|(p, coords, q)| {
            let maps = proptest::collection::vec(proptest::collection::vec(0..p, p), q);
            let phi = proptest::collection::vec(-1.0f64..1.0, p);
            (Just(p), Just(coords), maps, phi)
        })
        .prop_map(|(p, coords, maps, phi)| {
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
            SmallSystem { sys: NdsSystem::periodic(metric, maps, phi).unwrap() }
        })
}

proptest! {
    #[test]
    fn bowen_distance_nondecreasing_in_n(s in small_system(), x in 0usize..8, y in 0usize..8) {
        let p = s.sys.points();
        let (x, y) = (x % p, y % p);
        let mut prev = 0.0;
        for n in 1..=6 {
            let d = s.sys.bowen_distance(x, y, n);
            prop_assert!(d >= prev);
            prev = d;
        }
    }

    #[test]
    fn balls_monotone_in_radius_and_length(
        s in small_system(),
        x in 0usize..8,
        eps in 0.05f64..0.8,
    ) {
        let p = s.sys.points();
        let x = x % p;
        for n in 1..=4 {
            let small = s.sys.bowen_ball(x, n, eps);
            let big = s.sys.bowen_ball(x, n, eps * 1.5);
            prop_assert!(small.members.is_subset_of(&big.members));
            prop_assert!(small.members.contains(x));
            let longer = s.sys.bowen_ball(x, n + 1, eps);
            prop_assert!(longer.members.is_subset_of(&small.members));
        }
    }

    #[test]
    fn composition_splits_at_any_time(
        s in small_system(),
        i in 1usize..5,
        n in 0usize..4,
        m in 0usize..4,
    ) {
        let whole = s.sys.compose(i, n + m);
        let first = s.sys.compose(i, n);
        let second = s.sys.compose(i + n, m);
        let p = s.sys.points();
        let glued: Vec<usize> = (0..p).map(|x| second[first[x]]).collect();
        prop_assert_eq!(whole, glued);
    }

    #[test]
    fn birkhoff_sums_are_additive_through_the_shift(
        s in small_system(),
        x in 0usize..8,
        n in 1usize..4,
        m in 1usize..4,
    ) {
        let p = s.sys.points();
        let x = x % p;
        let whole = s.sys.birkhoff_sum(x, n + m);
        let head = s.sys.birkhoff_sum(x, n);
        let mid = s.sys.compose(1, n)[x];
        let tail = s.sys.shift(n + 1).birkhoff_sum(mid, m);
        prop_assert!((whole - head - tail).abs() < 1e-9);
    }

    #[test]
    fn sup_birkhoff_is_the_member_max(
        s in small_system(),
        x in 0usize..8,
        n in 1usize..5,
        eps in 0.05f64..0.9,
    ) {
        let p = s.sys.points();
        let x = x % p;
        let ball = s.sys.bowen_ball(x, n, eps);
        let direct = ball
            .members
            .iter()
            .map(|y| s.sys.birkhoff_sum(y, n))
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(ball.sup_birkhoff, direct);
    }

    #[test]
    fn substrings_only_grow_the_member_set(
        s in small_system(),
        string in proptest::collection::vec(0usize..2, 1..5),
    ) {
        let p = s.sys.points();
        let half: Vec<usize> = (0..p / 2).collect();
        let rest: Vec<usize> = (p / 2..p).collect();
        if half.is_empty() || rest.is_empty() {
            return Ok(());
        }
        let cover = OpenCover::from_index_sets(&s.sys, &[half, rest]).unwrap();
        let full = s.sys.string_set(&cover, &string);
        for k in 1..string.len() {
            let prefix = s.sys.string_set(&cover, &string[..k]);
            prop_assert!(full.members.is_subset_of(&prefix.members));
        }
    }

    #[test]
    fn theta_windows_shrink_as_theta_grows(
        scale in 1usize..10,
        a in 1u64..10,
        b in 1u64..10,
    ) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let t_small = Theta::new(lo, 10);
        let t_big = Theta::new(hi, 10);
        let w_small = ThetaWindow::new(scale, t_small, 0);
        let w_big = ThetaWindow::new(scale, t_big, 0);
        prop_assert!(w_big.max_length() <= w_small.max_length());
        for n in w_big.lengths() {
            prop_assert!(w_small.contains(n));
        }
        // every admissible length satisfies the defining inequality exactly
        for n in w_small.lengths() {
            prop_assert!(t_small.numer() as u128 * (n as u128 - 1)
                < t_small.denom() as u128 * scale as u128);
        }
        prop_assert!(!w_small.contains(w_small.max_length() + 1));
    }

    #[test]
    fn images_respect_subsets(s in small_system(), bits in 0u16..256) {
        let p = s.sys.points();
        let mut z = PointSet::empty(p);
        for i in 0..p {
            if bits >> (i % 16) & 1 == 1 {
                z.insert(i);
            }
        }
        let full = PointSet::full(p);
        let img_z = s.sys.image(1, &z);
        let img_full = s.sys.image(1, &full);
        prop_assert!(img_z.is_subset_of(&img_full));
        prop_assert!(img_z.len() <= z.len().max(1));
    }
}
