mod common;

use common::{merged, random_unit};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snapfix_core::cover::CoverTolerance;
use snapfix_core::solid::{self, PartKind};
use snapfix_core::synth::{self, Fixture};
use snapfix_core::{generators, geom, ExtrusionParams, Polyhedron, Vec3};

const T: CoverTolerance = CoverTolerance { cover: 1e-9, anti: 1e-9 };

fn check_solid(p: &Polyhedron, f: &Fixture, params: &ExtrusionParams) {
    let s = solid::build_fixture_solid(p, f, params).unwrap();
    assert!(s.mesh.is_watertight());
    assert!(s.mesh.volume() > 0.0);
    assert!(s.max_overlap < 1e-9, "overlap {}", s.max_overlap);
    assert_eq!(s.parts.len(), 1 + 2 * f.finger_count());
    assert_eq!(s.parts[0].kind, PartKind::Palm);
    for part in &s.parts {
        let facet = &p.facets()[part.facet];
        assert!(part.mesh.is_watertight());
        assert!(part.mesh.volume() > 0.0);
        for q in &part.base {
            assert!((facet.normal.dot(*q) - facet.offset).abs() < 1e-9);
        }
        // Height of each shell vertex above the workpiece facet plane.
        let heights: Vec<f64> = part.mesh.vertices.iter().map(|v| facet.normal.dot(*v) - facet.offset).collect();
        let low = heights.iter().cloned().fold(f64::INFINITY, f64::min);
        let high = heights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!((low - params.clearance).abs() <= 1e-3, "clearance {low}");
        assert!((high - params.clearance - part.thickness).abs() <= 1e-9);
    }
}

#[test]
fn canonical_minimal_fixtures_build_clean_solids() {
    let params = ExtrusionParams::default();
    for name in ["tetrahedron", "cube", "octahedron", "square-pyramid", "8-base-cylinder", "dodecahedron"] {
        let p = merged(generators::by_name(name).unwrap());
        let k = synth::minimal_fixture_count(&p, 4, T).unwrap().0;
        for f in synth::enumerate_fixtures(&p, k, T).filter(|f| f.finger_count() == k).step_by(7).take(30) {
            check_solid(&p, &f, &params);
        }
    }
}

#[test]
fn full_body_facets_also_disjoint() {
    let params = ExtrusionParams { body_shrink: 1.0, ..Default::default() };
    for name in ["tetrahedron", "cube", "octahedron", "square-pyramid"] {
        let p = merged(generators::by_name(name).unwrap());
        for f in synth::enumerate_fixtures(&p, 3, T).take(40) {
            check_solid(&p, &f, &params);
        }
    }
}

#[test]
fn random_polytope_fixtures_build_clean_solids() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let params = ExtrusionParams::default();
    let mut built = 0;
    for _ in 0..30 {
        let n = rand::Rng::gen_range(&mut rng, 8..20);
        let pts: Vec<Vec3> = (0..n).map(|_| random_unit(&mut rng) * 30.0).collect();
        let p = merged(generators::convex_hull(&pts).unwrap());
        if let Some(f) = synth::minimal_snapping_fixture(&p, T).fixture {
            check_solid(&p, &f, &params);
            built += 1;
        }
    }
    assert!(built > 5);
}

fn scaled(p: &Polyhedron, s: f64) -> Polyhedron {
    let verts = p.vertices().iter().map(|v| *v * s).collect();
    merged(Polyhedron::from_triangles(verts, p.triangles().to_vec()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weight_proxy_scales_quadratically(s in 0.25f64..4.0, pick in 0usize..36) {
        let base = merged(generators::tetrahedron(20.0));
        let f = synth::enumerate_fixtures(&base, 2, T).nth(pick).unwrap();
        let big = scaled(&base, s);
        prop_assert!(synth::valid_fixture(&big, &f, T).unwrap());
        // The fingertip width is a length on the surface and scales with it.
        let p0 = ExtrusionParams::default();
        let p1 = ExtrusionParams { tip_width: p0.tip_width * s, ..p0 };
        let q0 = synth::quality_of(&base, &f, &p0).unwrap();
        let q1 = synth::quality_of(&big, &f, &p1).unwrap();
        prop_assert!((q1.weight_proxy - s * s * q0.weight_proxy).abs() <= 1e-9 * q1.weight_proxy);
        prop_assert!((q1.obscuration_proxy - s * s * q0.obscuration_proxy).abs() <= 1e-9 * q1.obscuration_proxy);
        for g in &f.fingers {
            let a0 = geom::polygon_area(&solid::body_base(&base, f.palm, *g, p0.body_shrink).unwrap());
            let a1 = geom::polygon_area(&solid::body_base(&big, f.palm, *g, p1.body_shrink).unwrap());
            prop_assert!((a1 - s * s * a0).abs() <= 1e-9 * a1);
        }
    }

    #[test]
    fn extrusion_volume_is_area_times_thickness(
        k in 3usize..12,
        r in 1.0f64..50.0,
        alpha in 0.1f64..20.0,
        axis in (-1.0f64..1.0, -1.0f64..1.0, 0.2f64..1.0),
    ) {
        let w = Vec3::new(axis.0, axis.1, axis.2).normalized();
        let u = w.any_orthogonal();
        let v = w.cross(u);
        let poly: Vec<Vec3> = (0..k)
            .map(|i| {
                let t = core::f64::consts::TAU * i as f64 / k as f64;
                u * (r * t.cos()) + v * (r * t.sin())
            })
            .collect();
        let m = solid::extrude_polygon(&poly, alpha).unwrap();
        prop_assert!(m.is_watertight());
        prop_assert_eq!(m.euler_characteristic(), 2);
        let area = geom::polygon_area(&poly);
        prop_assert!((m.volume() - area * alpha).abs() <= 1e-9 * area * alpha);
    }
}
