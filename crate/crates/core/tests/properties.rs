mod common;

use common::{random_point, random_set, random_set_exact, space_kinds, Oracle};
use hyperpath::hyperspace::{hausdorff_distance, union_bound_check, FiniteSubset};
use hyperpath::metric::GroundSpace;
use hyperpath::paths::{
    canonical_interpolation, evaluate, extract_component_path, lipschitz_certificate, path_length_estimate,
    sample_path, synthesize_bundle, two_leg_quasiconvex_path, DEFAULT_DEPTH,
};
use hyperpath::relations::{
    brute_force_min_relation, build_proximal_complete, classify, reduce_relation, trim_to_bound, MinRelation,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kinds(seed: u64) -> (ChaCha8Rng, Vec<(&'static str, GroundSpace)>) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let k = space_kinds(&mut r);
    (r, k)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ground_metric_axioms(seed in any::<u64>()) {
        let (mut r, kinds) = kinds(seed);
        for (name, s) in &kinds {
            let (p, q, w) = (random_point(s, &mut r, 10.0), random_point(s, &mut r, 10.0), random_point(s, &mut r, 10.0));
            let (pq, qp, qw, pw) = (s.distance(&p, &q), s.distance(&q, &p), s.distance(&q, &w), s.distance(&p, &w));
            prop_assert!(pq >= 0.0, "{name}");
            prop_assert_eq!(s.distance(&p, &p), 0.0, "{}", name);
            prop_assert_eq!(pq, qp, "{}", name);
            prop_assert!(pw <= pq + qw + 1e-12 * (1.0 + pw), "{name}: {pw} > {pq} + {qw}");
        }
    }

    #[test]
    fn geodesics_have_constant_speed(seed in any::<u64>()) {
        let (mut r, kinds) = kinds(seed);
        for (name, s) in &kinds {
            let (p, q) = (random_point(s, &mut r, 10.0), random_point(s, &mut r, 10.0));
            let d = s.distance(&p, &q);
            let single = |x| FiniteSubset::singleton(s, x).unwrap();
            prop_assert_eq!(single(s.geodesic_point(&p, &q, 0.0).unwrap()), single(p.clone()), "{}", name);
            prop_assert_eq!(single(s.geodesic_point(&p, &q, 1.0).unwrap()), single(q.clone()), "{}", name);
            for _ in 0..8 {
                let (a, b) = (r.gen_range(0.0..=1.0), r.gen_range(0.0..=1.0));
                let (ga, gb) = (s.geodesic_point(&p, &q, a).unwrap(), s.geodesic_point(&p, &q, b).unwrap());
                prop_assert!(close(s.distance(&ga, &gb), (a - b).abs() * d, 1e-9), "{name} at {a}, {b}");
            }
        }
    }

    #[test]
    fn hausdorff_is_a_metric_matching_the_oracle(seed in any::<u64>()) {
        let (mut r, kinds) = kinds(seed);
        for (name, s) in &kinds {
            let oracle = Oracle::new(s);
            let sets: Vec<_> = (0..3).map(|_| {
                let n = r.gen_range(1..=6);
                random_set(s, &mut r, n, 10.0)
            }).collect();
            let d = |i: usize, j: usize| hausdorff_distance(s, &sets[i], &sets[j]);
            prop_assert_eq!(d(0, 1), oracle.hausdorff(&sets[0], &sets[1]), "{}", name);
            prop_assert_eq!(d(0, 1), d(1, 0), "{}", name);
            prop_assert_eq!(d(0, 0), 0.0, "{}", name);
            prop_assert_eq!(d(0, 1) == 0.0, sets[0] == sets[1], "{}", name);
            prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-12, "{name}");
        }
    }

    #[test]
    fn canonicalization_is_idempotent(seed in any::<u64>()) {
        let (mut r, kinds) = kinds(seed);
        for (name, s) in &kinds {
            let n = r.gen_range(1..=8);
            let a = random_set(s, &mut r, n, 3.0);
            let once = a.canonicalize(s);
            prop_assert_eq!(&once, &a, "{}", name);
            prop_assert_eq!(once.canonicalize(s), once, "{}", name);
        }
    }

    #[test]
    fn trimmed_and_reduced_relations(seed in any::<u64>()) {
        let (mut r, kinds) = kinds(seed);
        for (name, s) in &kinds {
            let (nx, ny) = (r.gen_range(1..=4), r.gen_range(1..=4));
            let x = random_set_exact(s, &mut r, nx, 10.0);
            let y = random_set_exact(s, &mut r, ny, 10.0);
            let built = build_proximal_complete(s, &x, &y);
            let c = classify(s, &built);
            prop_assert!(c.complete && c.proximality_factor <= 1.0 + 1e-9, "{name}: {c:?}");

            let reduced = reduce_relation(&built).unwrap();
            let c = classify(s, &reduced);
            prop_assert!(c.complete && c.reduced && c.reduced_complete, "{name}: {c:?}");
            prop_assert!(reduced.pairs().iter().all(|p| built.pairs().contains(p)), "{name}");

            if nx >= 2 && ny >= 2 {
                let trimmed = trim_to_bound(s, &built).unwrap();
                let c = classify(s, &trimmed);
                prop_assert!(c.complete && c.proximality_factor <= 1.0 + 1e-9, "{name}: {c:?}");
                prop_assert!(trimmed.len() <= nx + ny - 2, "{name}: {} pairs", trimmed.len());
                match brute_force_min_relation(s, &x, &y, 1.0).unwrap() {
                    MinRelation::Found { cardinality, .. } => prop_assert!(cardinality <= trimmed.len(), "{name}"),
                    MinRelation::Infeasible => prop_assert!(false, "{name}: oracle found nothing"),
                }
            }
        }
    }

    #[test]
    fn bundles_hit_endpoints_and_certify(seed in any::<u64>()) {
        let (mut r, kinds) = kinds(seed);
        for (name, s) in &kinds {
            let (nx, ny) = (r.gen_range(1..=4), r.gen_range(1..=4));
            let x = random_set(s, &mut r, nx, 10.0);
            let y = random_set(s, &mut r, ny, 10.0);
            let rel = build_proximal_complete(s, &x, &y);
            let bundle = synthesize_bundle(s, &rel, rel.len()).unwrap();
            prop_assert_eq!(&evaluate(s, &bundle, 0.0).unwrap(), &x, "{}", name);
            prop_assert_eq!(&evaluate(s, &bundle, 1.0).unwrap(), &y, "{}", name);

            let alpha = classify(s, &rel).proximality_factor;
            let declared = s.lambda() * alpha * hausdorff_distance(s, &x, &y);
            let cert = lipschitz_certificate(s, &bundle, declared, DEFAULT_DEPTH).unwrap();
            prop_assert!(cert.passed, "{name}: {} > {declared}", cert.lipschitz_estimate);
        }
    }

    #[test]
    fn length_estimates_refine_monotonically(seed in any::<u64>()) {
        let (mut r, kinds) = kinds(seed);
        for (name, s) in &kinds {
            let x = random_set(s, &mut r, 3, 10.0);
            let y = random_set(s, &mut r, 3, 10.0);
            let bundle = synthesize_bundle(s, &build_proximal_complete(s, &x, &y), 9).unwrap();
            let mut prev = 0.0;
            for depth in 0..=6 {
                let len = path_length_estimate(s, &bundle, depth).unwrap().length;
                prop_assert!(len + 1e-12 * (1.0 + len) >= prev, "{name}: depth {depth}");
                prev = len;
            }
        }
    }

    #[test]
    fn two_leg_paths_are_two_quasiconvex(seed in any::<u64>(), n in 3usize..=5) {
        let s = GroundSpace::euclidean(2).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (nx, ny) = (r.gen_range(1..=n), r.gen_range(1..=n));
        let x = random_set(&s, &mut r, nx, 10.0);
        let y = random_set(&s, &mut r, ny, 10.0);
        let path = two_leg_quasiconvex_path(&s, &x, &y, n).unwrap();
        prop_assert!(path.midpoint.len() <= n);
        let h = hausdorff_distance(&s, &x, &y);
        let total = path_length_estimate(&s, &path, DEFAULT_DEPTH).unwrap().length;
        prop_assert!(total <= 2.0 * h * (1.0 + 1e-6), "{total} > 2 * {h}");

        // The depth-d grid of the concatenation is the depth-(d-1) grid of each leg.
        let first = path_length_estimate(&s, &path.first, DEFAULT_DEPTH - 1).unwrap().length;
        let second = path_length_estimate(&s, &path.second, DEFAULT_DEPTH - 1).unwrap().length;
        prop_assert!((total - first - second).abs() <= 1e-9, "{total} vs {first} + {second}");
    }

    #[test]
    fn extracted_components_stay_inside(seed in any::<u64>()) {
        let (mut r, kinds) = kinds(seed);
        for (name, s) in &kinds {
            let x = random_set(s, &mut r, 3, 10.0);
            let y = random_set(s, &mut r, 2, 10.0);
            let bundle = synthesize_bundle(s, &build_proximal_complete(s, &x, &y), 5).unwrap();
            let sampled = sample_path(s, &bundle, 6).unwrap();
            for a in x.points() {
                let c = extract_component_path(s, &bundle, a, 6).unwrap();
                prop_assert!(c.lipschitz <= bundle.declared_lipschitz() + 1e-6, "{name}");
                for ((t, p), (u, set)) in c.selection.iter().zip(sampled.samples()) {
                    prop_assert_eq!(t, u);
                    prop_assert!(set.contains(s, p), "{name}");
                }
            }
        }
    }

    #[test]
    fn interpolation_endpoints(seed in any::<u64>(), dim in 1usize..=2) {
        let s = GroundSpace::euclidean(dim).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_set(&s, &mut r, 2, 1.0);
        let b = random_set(&s, &mut r, 3, 1.0);
        let eps = 0.05;
        let start = canonical_interpolation(&s, &a, &b, 1.5, 0.0, eps).unwrap();
        let end = canonical_interpolation(&s, &a, &b, 1.5, 1.0, eps).unwrap();
        prop_assert!(hausdorff_distance(&s, &start, &a) <= eps + 1e-12);
        prop_assert!(hausdorff_distance(&s, &end, &b) <= eps + 1e-12);
    }
}

#[test]
fn union_bound_on_every_space_kind() {
    let (mut r, kinds) = kinds(41);
    for (name, s) in &kinds {
        for i in 0..1000 {
            let sets: Vec<_> = (0..4)
                .map(|_| {
                    let n = r.gen_range(1..=4);
                    random_set(s, &mut r, n, 10.0)
                })
                .collect();
            assert!(
                union_bound_check(s, &sets[0], &sets[1], &sets[2], &sets[3]),
                "{name} quadruple {i}"
            );
        }
    }
}
