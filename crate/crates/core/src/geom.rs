//! Small vector and planar-polygon toolkit.

use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        libm::sqrt(self.norm_squared())
    }

    /// Unit vector in the same direction, or `None` when the length is below `eps`.
    pub fn try_normalize(self, eps: f64) -> Option<Vec3> {
        let n = self.norm();
        if n <= eps || !n.is_finite() {
            None
        } else {
            Some(self / n)
        }
    }

    pub fn normalized(self) -> Vec3 {
        self / self.norm()
    }

    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Vec3, t: f64) -> Vec3 {
        self + (o - self) * t
    }

    /// Some unit vector orthogonal to `self` (which need not be normalized).
    pub fn any_orthogonal(self) -> Vec3 {
        let a = if libm::fabs(self.x) <= libm::fabs(self.y) && libm::fabs(self.x) <= libm::fabs(self.z) {
            Vec3::X
        } else if libm::fabs(self.y) <= libm::fabs(self.z) {
            Vec3::Y
        } else {
            Vec3::Z
        };
        self.cross(a).normalized()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn max_abs(self) -> f64 {
        libm::fmax(libm::fabs(self.x), libm::fmax(libm::fabs(self.y), libm::fabs(self.z)))
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    #[inline]
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Vec3 {
    #[inline]
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Newell normal of a closed polygon; its length is twice the polygon area.
pub fn newell(points: &[Vec3]) -> Vec3 {
    let mut n = Vec3::ZERO;
    for (i, &p) in points.iter().enumerate() {
        let q = points[(i + 1) % points.len()];
        n += p.cross(q);
    }
    n
}

pub fn polygon_area(points: &[Vec3]) -> f64 {
    0.5 * newell(points).norm()
}

pub fn centroid(points: &[Vec3]) -> Vec3 {
    let mut c = Vec3::ZERO;
    for &p in points {
        c += p;
    }
    c / points.len() as f64
}

/// Orthonormal in-plane basis `(u, v)` with `u × v = normal`.
#[derive(Debug, Clone, Copy)]
pub struct PlaneFrame {
    pub origin: Vec3,
    pub u: Vec3,
    pub v: Vec3,
    pub normal: Vec3,
}

impl PlaneFrame {
    pub fn new(origin: Vec3, normal: Vec3) -> Self {
        let normal = normal.normalized();
        let u = normal.any_orthogonal();
        let v = normal.cross(u);
        PlaneFrame { origin, u, v, normal }
    }

    #[inline]
    pub fn project(&self, p: Vec3) -> [f64; 2] {
        let d = p - self.origin;
        [d.dot(self.u), d.dot(self.v)]
    }

    #[inline]
    pub fn lift(&self, q: [f64; 2]) -> Vec3 {
        self.origin + self.u * q[0] + self.v * q[1]
    }
}

#[inline]
pub fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
fn sub2(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn signed_area2(poly: &[[f64; 2]]) -> f64 {
    let mut s = 0.0;
    for i in 0..poly.len() {
        s += cross2(poly[i], poly[(i + 1) % poly.len()]);
    }
    0.5 * s
}

/// Ear-clipping triangulation of a simple counter-clockwise polygon.
/// Returns index triples into `poly`; `None` if no ear can be found.
pub fn triangulate_2d(poly: &[[f64; 2]]) -> Option<Vec<[usize; 3]>> {
    let n = poly.len();
    if n < 3 {
        return None;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    if signed_area2(poly) < 0.0 {
        idx.reverse();
    }
    let mut tris = Vec::with_capacity(n - 2);
    let scale = poly.iter().fold(0.0f64, |m, p| m.max(libm::fabs(p[0])).max(libm::fabs(p[1]))).max(1.0);
    let eps = 1e-14 * scale * scale;
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let (ia, ib, ic) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            let (a, b, c) = (poly[ia], poly[ib], poly[ic]);
            let turn = cross2(sub2(b, a), sub2(c, b));
            if turn <= eps {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                if j == ia || j == ib || j == ic {
                    return false;
                }
                let p = poly[j];
                cross2(sub2(b, a), sub2(p, a)) >= -eps
                    && cross2(sub2(c, b), sub2(p, b)) >= -eps
                    && cross2(sub2(a, c), sub2(p, c)) >= -eps
            });
            if blocked {
                continue;
            }
            tris.push([ia, ib, ic]);
            idx.remove(k);
            clipped = true;
            break;
        }
        if !clipped {
            // Only collinear runs remain; drop a flat vertex if there is one.
            let flat = (0..m).find(|&k| {
                let (a, b, c) = (poly[idx[(k + m - 1) % m]], poly[idx[k]], poly[idx[(k + 1) % m]]);
                libm::fabs(cross2(sub2(b, a), sub2(c, b))) <= eps
            })?;
            idx.remove(flat);
        }
    }
    tris.push([idx[0], idx[1], idx[2]]);
    Some(tris)
}

/// Clips `subject` against the convex counter-clockwise polygon `clip`
/// (Sutherland–Hodgman).
pub fn clip_convex_2d(subject: &[[f64; 2]], clip: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut out: Vec<[f64; 2]> = subject.to_vec();
    for i in 0..clip.len() {
        if out.is_empty() {
            break;
        }
        let a = clip[i];
        let b = clip[(i + 1) % clip.len()];
        let edge = sub2(b, a);
        let side = |p: [f64; 2]| cross2(edge, sub2(p, a));
        let input = core::mem::take(&mut out);
        for j in 0..input.len() {
            let p = input[j];
            let q = input[(j + 1) % input.len()];
            let (sp, sq) = (side(p), side(q));
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                out.push([p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t]);
            }
        }
    }
    out
}

/// Area of the intersection of two convex polygons given counter-clockwise.
pub fn convex_overlap_area(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let inter = clip_convex_2d(a, b);
    if inter.len() < 3 {
        0.0
    } else {
        libm::fabs(signed_area2(&inter))
    }
}

pub fn is_convex_ccw(poly: &[[f64; 2]], eps: f64) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let (a, b, c) = (poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
        cross2(sub2(b, a), sub2(c, b)) >= -eps
    })
}

/// Signed volume enclosed by an oriented closed triangle mesh.
pub fn mesh_volume(vertices: &[Vec3], triangles: &[[usize; 3]]) -> f64 {
    let mut v = 0.0;
    for t in triangles {
        let (a, b, c) = (vertices[t[0]], vertices[t[1]], vertices[t[2]]);
        v += a.dot(b.cross(c));
    }
    v / 6.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newell_area_of_unit_square() {
        let sq = [Vec3::ZERO, Vec3::X, Vec3::new(1.0, 1.0, 0.0), Vec3::Y];
        assert!((polygon_area(&sq) - 1.0).abs() < 1e-15);
        assert!((newell(&sq).normalized() - Vec3::Z).norm() < 1e-15);
    }

    #[test]
    fn ear_clipping_concave_l_shape() {
        let l = [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]];
        let tris = triangulate_2d(&l).unwrap();
        assert_eq!(tris.len(), 4);
        let total: f64 = tris
            .iter()
            .map(|t| signed_area2(&[l[t[0]], l[t[1]], l[t[2]]]))
            .sum();
        assert!((total - 3.0).abs() < 1e-12);
        assert!(tris.iter().all(|t| signed_area2(&[l[t[0]], l[t[1]], l[t[2]]]) > 0.0));
    }

    #[test]
    fn overlap_of_offset_squares() {
        let a = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
        let b = [[1.0, 1.0], [3.0, 1.0], [3.0, 3.0], [1.0, 3.0]];
        assert!((convex_overlap_area(&a, &b) - 1.0).abs() < 1e-12);
        let c = [[2.0, 0.0], [3.0, 0.0], [3.0, 1.0], [2.0, 1.0]];
        assert!(convex_overlap_area(&a, &c) < 1e-12);
    }

    #[test]
    fn unit_cube_volume() {
        let v = [
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(1.0, 0.0, 1.0),
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(0.0, 1.0, 1.0),
        ];
        let t = [
            [0, 2, 1], [0, 3, 2], [4, 5, 6], [4, 6, 7], [0, 1, 5], [0, 5, 4],
            [1, 2, 6], [1, 6, 5], [2, 3, 7], [2, 7, 6], [3, 0, 4], [3, 4, 7],
        ];
        assert!((mesh_volume(&v, &t) - 1.0).abs() < 1e-15);
    }
}
