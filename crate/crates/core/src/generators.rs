//! Canonical workpieces: Platonic solids, the square pyramid, regular prisms
//! ("n-base cylinders"), the truncated cuboctahedron and two tori.
//!
//! All constructors return the triangulated, unmerged mesh, the same state a
//! loader produces from a file.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::geom::Vec3;
use crate::hull;
use crate::mesh::{MeshTolerance, Polyhedron};

const GOLDEN: f64 = 1.618_033_988_749_895;

fn from_points(points: &[Vec3]) -> Polyhedron {
    convex_hull(points).expect("convex hull is a closed manifold")
}

/// Convex hull of points in convex position.
pub fn convex_hull(points: &[Vec3]) -> Option<Polyhedron> {
    let faces = hull::convex_hull_faces(points, 1e-9);
    Polyhedron::from_polygons(points, &faces, MeshTolerance::default()).ok()
}

/// The polytope `{x : x · nᵢ <= 1}` for unit normals that positively span space.
pub fn from_normals(normals: &[Vec3]) -> Option<Polyhedron> {
    let v = hull::polar_vertices(normals)?;
    convex_hull(&v)
}

fn scaled(points: &mut [Vec3], factor: f64) {
    for p in points {
        *p = *p * factor;
    }
}

/// Regular tetrahedron with the given edge length.
pub fn tetrahedron(edge: f64) -> Polyhedron {
    let mut p = [
        Vec3::new(1.0, 1.0, 1.0),
        Vec3::new(1.0, -1.0, -1.0),
        Vec3::new(-1.0, 1.0, -1.0),
        Vec3::new(-1.0, -1.0, 1.0),
    ];
    scaled(&mut p, edge / libm::sqrt(8.0));
    from_points(&p)
}

/// Axis-aligned cube `[0, edge]³`.
pub fn cube(edge: f64) -> Polyhedron {
    let mut p = Vec::with_capacity(8);
    for &z in &[0.0, edge] {
        for &y in &[0.0, edge] {
            for &x in &[0.0, edge] {
                p.push(Vec3::new(x, y, z));
            }
        }
    }
    from_points(&p)
}

/// Axis-aligned box `[0, a] × [0, b] × [0, c]`.
pub fn cuboid(a: f64, b: f64, c: f64) -> Polyhedron {
    let mut p = Vec::with_capacity(8);
    for &z in &[0.0, c] {
        for &y in &[0.0, b] {
            for &x in &[0.0, a] {
                p.push(Vec3::new(x, y, z));
            }
        }
    }
    from_points(&p)
}

pub fn octahedron(edge: f64) -> Polyhedron {
    let r = edge / libm::sqrt(2.0);
    let p = [
        Vec3::X * r,
        -Vec3::X * r,
        Vec3::Y * r,
        -Vec3::Y * r,
        Vec3::Z * r,
        -Vec3::Z * r,
    ];
    from_points(&p)
}

fn icosahedron_points(edge: f64) -> Vec<Vec3> {
    let mut p = Vec::with_capacity(12);
    for &a in &[-1.0, 1.0] {
        for &b in &[-GOLDEN, GOLDEN] {
            p.push(Vec3::new(0.0, a, b));
            p.push(Vec3::new(a, b, 0.0));
            p.push(Vec3::new(b, 0.0, a));
        }
    }
    scaled(&mut p, edge / 2.0);
    p
}

pub fn icosahedron(edge: f64) -> Polyhedron {
    from_points(&icosahedron_points(edge))
}

pub fn dodecahedron(edge: f64) -> Polyhedron {
    let inv = 1.0 / GOLDEN;
    let mut p = Vec::with_capacity(20);
    for &x in &[-1.0, 1.0] {
        for &y in &[-1.0, 1.0] {
            for &z in &[-1.0, 1.0] {
                p.push(Vec3::new(x, y, z));
            }
        }
    }
    for &a in &[-inv, inv] {
        for &b in &[-GOLDEN, GOLDEN] {
            p.push(Vec3::new(0.0, a, b));
            p.push(Vec3::new(a, b, 0.0));
            p.push(Vec3::new(b, 0.0, a));
        }
    }
    // Edge length of this coordinate set is 2/φ.
    scaled(&mut p, edge * GOLDEN / 2.0);
    from_points(&p)
}

/// Square pyramid with all edges of equal length.
pub fn square_pyramid(edge: f64) -> Polyhedron {
    let h = edge / libm::sqrt(2.0);
    let s = edge / 2.0;
    let p = [
        Vec3::new(-s, -s, 0.0),
        Vec3::new(s, -s, 0.0),
        Vec3::new(s, s, 0.0),
        Vec3::new(-s, s, 0.0),
        Vec3::new(0.0, 0.0, h),
    ];
    from_points(&p)
}

/// Right prism over a regular `n`-gon of circumradius `radius`.
pub fn prism(n: usize, radius: f64, height: f64) -> Polyhedron {
    assert!(n >= 3, "a prism needs at least a triangular base");
    let mut p = Vec::with_capacity(2 * n);
    for &z in &[0.0, height] {
        for k in 0..n {
            let t = 2.0 * PI * k as f64 / n as f64;
            p.push(Vec3::new(radius * libm::cos(t), radius * libm::sin(t), z));
        }
    }
    let bottom: Vec<usize> = (0..n).rev().collect();
    let top: Vec<usize> = (n..2 * n).collect();
    let mut faces = alloc::vec![bottom, top];
    for k in 0..n {
        let k1 = (k + 1) % n;
        faces.push(alloc::vec![k, k1, n + k1, n + k]);
    }
    Polyhedron::from_polygons(&p, &faces, MeshTolerance::default()).expect("prism is closed")
}

/// Truncated cuboctahedron: all permutations of `(±1, ±(1+√2), ±(1+2√2))`.
pub fn truncated_cuboctahedron(edge: f64) -> Polyhedron {
    let s2 = libm::sqrt(2.0);
    let vals = [1.0, 1.0 + s2, 1.0 + 2.0 * s2];
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut p = Vec::with_capacity(48);
    for perm in perms {
        for sx in [-1.0, 1.0] {
            for sy in [-1.0, 1.0] {
                for sz in [-1.0, 1.0] {
                    p.push(Vec3::new(sx * vals[perm[0]], sy * vals[perm[1]], sz * vals[perm[2]]));
                }
            }
        }
    }
    scaled(&mut p, edge / 2.0);
    from_points(&p)
}

fn ring(segments: usize, section: &[(f64, f64)]) -> Polyhedron {
    let k = section.len();
    let mut p = Vec::with_capacity(segments * k);
    for i in 0..segments {
        let t = 2.0 * PI * i as f64 / segments as f64;
        let (c, s) = (libm::cos(t), libm::sin(t));
        for &(rho, z) in section {
            p.push(Vec3::new(rho * c, rho * s, z));
        }
    }
    let mut faces = Vec::with_capacity(segments * k);
    for i in 0..segments {
        let i1 = (i + 1) % segments;
        for j in 0..k {
            let j1 = (j + 1) % k;
            faces.push(alloc::vec![i * k + j, i1 * k + j, i1 * k + j1, i * k + j1]);
        }
    }
    Polyhedron::from_polygons(&p, &faces, MeshTolerance::default()).expect("ring is closed")
}

/// Genus-one ring with a triangular cross-section; no two neighboring quads
/// are coplanar, so every merged facet stays a simple quadrilateral.
pub fn triangular_torus(segments: usize, major: f64, minor: f64) -> Polyhedron {
    let section: Vec<(f64, f64)> = (0..3)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / 3.0;
            (major + minor * libm::cos(phi), minor * libm::sin(phi))
        })
        .collect();
    ring(segments, &section)
}

/// Genus-one ring with a square cross-section; its flat top and bottom merge
/// into annuli.
pub fn square_torus(major: f64, minor: f64, height: f64) -> Polyhedron {
    let section = [(major - minor, 0.0), (major + minor, 0.0), (major + minor, height), (major - minor, height)];
    ring(8, &section)
}

/// Canonical solids by name. Prisms are `prism-<n>` or `<n>-base-cylinder`.
pub fn by_name(name: &str) -> Option<Polyhedron> {
    let size = 20.0;
    let lower = name.to_ascii_lowercase();
    let p = match lower.as_str() {
        "tetrahedron" => tetrahedron(size),
        "cube" => cube(size),
        "octahedron" => octahedron(size),
        "icosahedron" => icosahedron(size),
        "dodecahedron" => dodecahedron(size),
        "square-pyramid" | "square_pyramid" | "pyramid" => square_pyramid(size),
        "truncated-cuboctahedron" | "truncated_cuboctahedron" => truncated_cuboctahedron(size / 2.0),
        "torus" | "triangular-torus" => triangular_torus(8, 2.0 * size, size / 2.0),
        other => {
            let n = other
                .strip_prefix("prism-")
                .or_else(|| other.strip_suffix("-base-cylinder"))?
                .parse::<usize>()
                .ok()?;
            if n < 3 {
                return None;
            }
            prism(n, size, 2.0 * size)
        }
    };
    Some(p)
}

/// Names of the canonical solids that are regular reconstructions of the
/// reference benchmark rows.
pub const CANONICAL: &[&str] = &[
    "tetrahedron",
    "dodecahedron",
    "square-pyramid",
    "cube",
    "octahedron",
    "truncated-cuboctahedron",
    "icosahedron",
    "8-base-cylinder",
];
