//! Facets of the convex hull of a point set by supporting-plane enumeration.
//!
//! This is cubic in the number of points times a linear scan, which is fine for
//! the few dozen points of the canonical solids and random test polytopes, and
//! it handles coplanar points (square, pentagonal, octagonal faces) directly.

use alloc::vec::Vec;

use crate::geom::{self, PlaneFrame, Vec3};

/// Polygonal faces of the convex hull of `points`, each a counter-clockwise
/// loop (seen from outside) of indices into `points`. Points within
/// `eps · scale` of a supporting plane count as lying on it. Points strictly
/// inside the hull or inside a face's relative interior are still listed in
/// that face if they lie on its plane, so callers should pass points in convex
/// position.
pub fn convex_hull_faces(points: &[Vec3], eps: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let scale = points.iter().fold(0.0f64, |m, p| m.max(p.max_abs())).max(1e-300);
    let tol = eps * scale;
    let mut planes: Vec<(Vec3, f64)> = Vec::new();
    let mut faces = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let raw = (points[j] - points[i]).cross(points[k] - points[i]);
                let Some(normal) = raw.try_normalize(tol * tol) else { continue };
                let offset = normal.dot(points[i]);
                let mut above = false;
                let mut below = false;
                for p in points {
                    let d = normal.dot(*p) - offset;
                    if d > tol {
                        above = true;
                    } else if d < -tol {
                        below = true;
                    }
                    if above && below {
                        break;
                    }
                }
                if above && below {
                    continue;
                }
                let normal = if above { -normal } else { normal };
                let offset = if above { -offset } else { offset };
                if planes.iter().any(|&(m, o)| (m - normal).norm() < 1e-9 && libm::fabs(o - offset) <= tol) {
                    continue;
                }
                planes.push((normal, offset));
                let on: Vec<usize> = (0..n)
                    .filter(|&q| libm::fabs(normal.dot(points[q]) - offset) <= tol)
                    .collect();
                faces.push(order_ccw(points, &on, normal));
            }
        }
    }
    faces
}

fn order_ccw(points: &[Vec3], idx: &[usize], normal: Vec3) -> Vec<usize> {
    let pts: Vec<Vec3> = idx.iter().map(|&i| points[i]).collect();
    let c = geom::centroid(&pts);
    let frame = PlaneFrame::new(c, normal);
    let mut keyed: Vec<(f64, usize)> = idx
        .iter()
        .map(|&i| {
            let q = frame.project(points[i]);
            (libm::atan2(q[1], q[0]), i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal));
    keyed.into_iter().map(|(_, i)| i).collect()
}

/// Vertices of the polytope `{x : x · n_i <= 1}` for unit normals `n_i`, or
/// `None` when the normals do not positively span space (unbounded region).
pub fn polar_vertices(normals: &[Vec3]) -> Option<Vec<Vec3>> {
    let faces = convex_hull_faces(normals, 1e-12);
    let mut out = Vec::with_capacity(faces.len());
    for f in &faces {
        let pts: Vec<Vec3> = f.iter().map(|&i| normals[i]).collect();
        let n = geom::newell(&pts).normalized();
        let c = n.dot(pts[0]);
        if c <= 1e-9 {
            return None;
        }
        out.push(n / c);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_corners_give_six_quads() {
        let mut pts = Vec::new();
        for &x in &[-1.0, 1.0] {
            for &y in &[-1.0, 1.0] {
                for &z in &[-1.0, 1.0] {
                    pts.push(Vec3::new(x, y, z));
                }
            }
        }
        let faces = convex_hull_faces(&pts, 1e-9);
        assert_eq!(faces.len(), 6);
        for f in &faces {
            assert_eq!(f.len(), 4);
            let poly: Vec<Vec3> = f.iter().map(|&i| pts[i]).collect();
            let n = geom::newell(&poly);
            // Outward: normal points away from the origin.
            assert!(n.dot(geom::centroid(&poly)) > 0.0);
        }
    }

    #[test]
    fn polar_of_axis_normals_is_a_cube() {
        let normals = [Vec3::X, -Vec3::X, Vec3::Y, -Vec3::Y, Vec3::Z, -Vec3::Z];
        let v = polar_vertices(&normals).unwrap();
        assert_eq!(v.len(), 8);
        assert!(v.iter().all(|p| (p.x.abs() - 1.0).abs() < 1e-12 && (p.z.abs() - 1.0).abs() < 1e-12));
        assert!(polar_vertices(&normals[..5]).is_none());
    }
}
