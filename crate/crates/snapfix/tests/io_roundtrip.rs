use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snapfix::io::{parse_mesh, write_mesh};
use snapfix::MeshFormat;
use snapfix_core::{generators, MeshTolerance, Polyhedron, Vec3};

fn random_hull(rng: &mut ChaCha8Rng) -> Polyhedron {
    let n = rng.gen_range(6..40);
    let pts: Vec<Vec3> = (0..n)
        .map(|_| loop {
            let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if v.norm() > 0.1 && v.norm() <= 1.0 {
                break v.normalized() * rng.gen_range(5.0..50.0);
            }
        })
        .collect();
    generators::convex_hull(&pts).unwrap()
}

fn adjacency(p: &Polyhedron) -> Vec<Vec<usize>> {
    (0..p.facet_count()).map(|i| p.neighbors(i).to_vec()).collect()
}

#[test]
fn export_then_load_is_isomorphic() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tol = MeshTolerance::default();
    for _ in 0..50 {
        let p = random_hull(&mut rng);
        for f in [MeshFormat::Off, MeshFormat::Obj, MeshFormat::StlAscii, MeshFormat::Stl] {
            let mut buf = Vec::new();
            write_mesh(&mut buf, p.vertices(), p.triangles(), f).unwrap();
            let q = parse_mesh(&buf, f, tol).unwrap();
            assert_eq!((q.vertex_count(), q.edge_count(), q.triangle_count()), (p.vertex_count(), p.edge_count(), p.triangle_count()));
            let (pm, qm) = (p.merge_coplanar_facets(tol).unwrap(), q.merge_coplanar_facets(tol).unwrap());
            assert_eq!(pm.facet_count(), qm.facet_count());
            if f != MeshFormat::Stl {
                assert_eq!(adjacency(&p), adjacency(&q));
                assert!((q.volume() - p.volume()).abs() <= 1e-12 * p.volume());
            }
        }
    }
}

#[test]
fn second_off_round_trip_is_byte_identical() {
    let tol = MeshTolerance::default();
    let export = |p: &Polyhedron| {
        let mut b = Vec::new();
        write_mesh(&mut b, p.vertices(), p.triangles(), MeshFormat::Off).unwrap();
        b
    };
    let p = generators::truncated_cuboctahedron(7.3);
    let once = export(&parse_mesh(&export(&p), MeshFormat::Off, tol).unwrap());
    let twice = export(&parse_mesh(&once, MeshFormat::Off, tol).unwrap());
    assert_eq!(once, twice);
}
