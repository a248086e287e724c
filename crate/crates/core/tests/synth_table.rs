mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{brute_force_count, merged, random_unit};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snapfix_core::cover::CoverTolerance;
use snapfix_core::generators;
use snapfix_core::synth::{self, Finger, Fixture};
use snapfix_core::Polyhedron;

const T: CoverTolerance = CoverTolerance { cover: 1e-9, anti: 1e-9 };

fn named(name: &str) -> Polyhedron {
    merged(generators::by_name(name).unwrap())
}

fn oracle_minimum(p: &Polyhedron) -> Option<(usize, u64)> {
    (1..=4).map(|k| (k, brute_force_count(p, k, 1e-9))).find(|&(_, n)| n > 0)
}

#[test]
fn canonical_counts_match_oracle() {
    for (name, k, n) in [("tetrahedron", 2, 36), ("cube", 3, 216), ("octahedron", 3, 16), ("square-pyramid", 2, 24)] {
        let p = named(name);
        assert_eq!(oracle_minimum(&p), Some((k, n)), "{name} oracle");
        assert_eq!(synth::minimal_fixture_count(&p, 4, T), Some((k, n)), "{name} enumeration");
        let r = synth::minimal_snapping_fixture(&p, T);
        assert_eq!(r.fixture.unwrap().finger_count(), k, "{name} synthesis");
    }
}

#[test]
fn icosahedron_has_no_fixture() {
    let p = named("icosahedron");
    assert_eq!(synth::minimal_fixture_count(&p, 4, T), None);
    assert!(synth::minimal_snapping_fixture(&p, T).fixture.is_none());
    for k in 1..=3 {
        assert_eq!(brute_force_count(&p, k, 1e-9), 0);
    }
}

#[test]
fn regular_prism_closed_form() {
    for n in [8usize, 12, 16, 20] {
        let p = merged(generators::prism(n, 20.0, 40.0));
        let m = (n / 2) as u64;
        let expect = n as u64 * (m - 1) * (m - 2);
        assert_eq!(brute_force_count(&p, 2, 1e-9), expect, "oracle n={n}");
        assert_eq!(synth::minimal_fixture_count(&p, 4, T), Some((2, expect)), "enumeration n={n}");
    }
}

#[test]
fn no_single_finger_fixture_anywhere() {
    for name in generators::CANONICAL {
        let p = named(name);
        assert_eq!(brute_force_count(&p, 1, 1e-9), 0, "{name}");
        assert_eq!(synth::enumerate_fixtures(&p, 1, T).count(), 0, "{name}");
    }
}

#[test]
fn stream_yields_each_fixture_once_in_order() {
    for name in ["tetrahedron", "cube", "square-pyramid"] {
        let p = named(name);
        let all: Vec<Fixture> = synth::enumerate_fixtures(&p, 3, T).collect();
        let keys: Vec<(usize, usize, Vec<Finger>)> =
            all.iter().map(|f| (f.palm, f.finger_count(), f.fingers.clone())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted, "{name}");
        let expect: u64 = (1..=3).map(|k| brute_force_count(&p, k, 1e-9)).sum();
        assert_eq!(all.len() as u64, expect, "{name}");
        assert!(all.iter().all(|f| synth::valid_fixture(&p, f, T).unwrap()));
    }
}

#[test]
fn candidate_pairs_bounded_by_adjacencies() {
    let mut shapes: Vec<Polyhedron> = generators::CANONICAL.iter().map(|n| named(n)).collect();
    shapes.push(generators::square_torus(40.0, 10.0, 10.0));
    shapes.push(generators::triangular_torus(8, 40.0, 10.0));
    for p in &shapes {
        let map = synth::build_candidate_map(p);
        let distinct: BTreeSet<Finger> = (0..p.facet_count()).flat_map(|i| map.get(i).iter().copied()).collect();
        let adjacencies: usize = (0..p.facet_count()).map(|i| p.neighbors(i).len()).sum::<usize>() / 2;
        assert!(distinct.len() <= 2 * adjacencies);
        for i in 0..p.facet_count() {
            for f in map.get(i) {
                assert!(p.are_neighbors(i, f.body) && p.are_neighbors(f.body, f.tip) && f.tip != i);
            }
        }
    }
}

/// For every triplet of fingers, the palms completing it to a valid fixture.
fn palms_per_triplet(p: &Polyhedron) -> BTreeMap<Vec<Finger>, BTreeSet<usize>> {
    let map = synth::build_candidate_map(p);
    let mut out: BTreeMap<Vec<Finger>, BTreeSet<usize>> = BTreeMap::new();
    for palm in 0..p.facet_count() {
        let c = map.get(palm);
        common::for_each_subset(c.len(), 3, &mut |idx| {
            let f = Fixture::new(palm, idx.iter().map(|&x| c[x]));
            if synth::valid_fixture(p, &f, T).unwrap_or(false) {
                out.entry(f.fingers.clone()).or_default().insert(palm);
            }
        });
    }
    out
}

#[test]
fn palms_sharing_a_triplet_bounded_by_genus() {
    let mut shapes: Vec<Polyhedron> = ["cube", "octahedron", "square-pyramid", "8-base-cylinder", "truncated-cuboctahedron"]
        .iter()
        .map(|n| named(n))
        .collect();
    shapes.push(generators::square_torus(40.0, 10.0, 10.0));
    shapes.push(generators::triangular_torus(8, 40.0, 10.0));
    let mut seen = 0;
    for p in &shapes {
        let bound = 4 * p.genus() + 2;
        for (fingers, palms) in palms_per_triplet(p) {
            seen += 1;
            assert!(palms.len() <= bound, "{fingers:?} served by {palms:?}, genus {}", p.genus());
        }
    }
    assert!(seen > 0);
}

fn random_hull(rng: &mut ChaCha8Rng, n: usize) -> Polyhedron {
    let pts: Vec<_> = (0..n).map(|_| random_unit(rng) * 20.0).collect();
    merged(generators::convex_hull(&pts).unwrap())
}

fn random_dual(rng: &mut ChaCha8Rng, n: usize) -> Option<Polyhedron> {
    let ns: Vec<_> = (0..n).map(|_| random_unit(rng)).collect();
    generators::from_normals(&ns).map(merged)
}

#[test]
fn synthesis_agrees_with_oracle_on_random_polytopes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..40 {
        let p = if trial % 2 == 0 {
            let n = rand::Rng::gen_range(&mut rng, 8..16);
            random_hull(&mut rng, n)
        } else {
            let n = rand::Rng::gen_range(&mut rng, 6..14);
            match random_dual(&mut rng, n) {
                Some(p) => p,
                None => continue,
            }
        };
        let oracle: Vec<u64> = (2..=3).map(|k| brute_force_count(&p, k, 1e-9)).collect();
        let r = synth::minimal_snapping_fixture(&p, T);
        match r.fixture {
            Some(f) => {
                assert!(synth::valid_fixture(&p, &f, T).unwrap());
                let k = f.finger_count();
                if k <= 3 {
                    assert!(oracle[k - 2] > 0, "trial {trial}");
                    assert!((2..k).all(|j| oracle[j - 2] == 0), "trial {trial}");
                } else {
                    assert_eq!(oracle, vec![0, 0], "trial {trial}");
                }
            }
            None => assert_eq!(oracle, vec![0, 0], "trial {trial}"),
        }
        if let Some((k, n)) = synth::minimal_fixture_count(&p, 3, T) {
            assert_eq!(n, oracle[k - 2], "trial {trial}");
        }
    }
}
