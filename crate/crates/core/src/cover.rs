//! Coverage of the unit sphere, closed hemispheres and great circles by open
//! hemispheres and open semicircles.
//!
//! A set of open hemispheres `{d : d · nᵢ > 0}` fails to cover the sphere
//! exactly when the closed cone `{d : d · nᵢ <= 0}` contains a nonzero vector.
//! Such a vector, when it exists, lies on an extreme ray of that cone (a pairwise
//! cross product of normals), or the cone is a halfspace, a wedge or a plane;
//! the candidate family below contains a representative for every case. A
//! candidate is accepted as a witness when `max nᵢ · d <= ε`, so directions on a
//! boundary count as uncovered.
//!
//! The `reduce_*` functions extract small covering subsets following the
//! Helly-type arguments: a closed hemisphere is centrally projected onto the
//! plane, where open hemispheres become open halfplanes and three of them (or a
//! parallel pair plus two patches at infinity) suffice.

use alloc::vec::Vec;

use crate::geom::{PlaneFrame, Vec3};

/// Tolerances on dot products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverTolerance {
    /// A direction `d` is covered by a hemisphere with normal `n` only when `d · n > cover`.
    pub cover: f64,
    /// Two normals are antipodal when `|a + b| <= anti`.
    pub anti: f64,
}

impl Default for CoverTolerance {
    fn default() -> Self {
        CoverTolerance { cover: 1e-9, anti: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoverError {
    #[error("input set does not cover the target region")]
    NotCovering,
    #[error("semicircles do not lie on a common great circle")]
    MixedCircles,
    #[error("zero-length direction")]
    Degenerate,
    #[error("no covering subset within the size bound was found")]
    ReductionFailed,
}

/// A point of the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction(Vec3);

impl Direction {
    /// Normalizes `v`; `None` for (near) zero vectors.
    pub fn new(v: Vec3) -> Option<Direction> {
        v.try_normalize(1e-300).map(Direction)
    }

    pub fn x(self) -> f64 {
        self.0.x
    }

    pub fn y(self) -> f64 {
        self.0.y
    }

    pub fn z(self) -> f64 {
        self.0.z
    }

    pub fn vec(self) -> Vec3 {
        self.0
    }

    pub fn to_array(self) -> [f64; 3] {
        self.0.to_array()
    }
}

impl core::ops::Neg for Direction {
    type Output = Direction;
    fn neg(self) -> Direction {
        Direction(-self.0)
    }
}

/// Open hemisphere `{d : d · normal > 0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hemisphere {
    pub normal: Direction,
}

impl Hemisphere {
    pub fn new(normal: Vec3) -> Option<Hemisphere> {
        Direction::new(normal).map(|normal| Hemisphere { normal })
    }

    pub fn contains(&self, d: Vec3, tol: CoverTolerance) -> bool {
        d.dot(self.normal.vec()) > tol.cover
    }

    /// The hemisphere whose closure is this one's complement.
    pub fn opposite(&self) -> Hemisphere {
        Hemisphere { normal: -self.normal }
    }

    /// Intersection with the great circle of plane normal `circle_normal`: an
    /// open semicircle, or `None` when the circle is this hemisphere's boundary.
    pub fn on_circle(&self, circle_normal: Direction) -> Option<Semicircle> {
        Semicircle::new(circle_normal.vec(), self.normal.vec())
    }
}

/// Open semicircle `{d on the circle ⟂ circle_normal : d · mid > 0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Semicircle {
    pub circle_normal: Direction,
    pub mid: Direction,
}

impl Semicircle {
    /// `mid` is projected into the circle's plane before normalizing.
    pub fn new(circle_normal: Vec3, mid: Vec3) -> Option<Semicircle> {
        let c = Direction::new(circle_normal)?;
        let m = mid - c.vec() * mid.dot(c.vec());
        if m.norm() <= 1e-12 * mid.norm().max(1e-300) {
            return None;
        }
        Some(Semicircle { circle_normal: c, mid: Direction::new(m)? })
    }

    /// Semicircle on the circle of `circle_normal` whose midpoint sits at
    /// `angle` radians in the frame returned by [`circle_frame`].
    pub fn at_angle(circle_normal: Vec3, angle: f64) -> Option<Semicircle> {
        let (u, v) = circle_frame(circle_normal)?;
        Semicircle::new(circle_normal, u * libm::cos(angle) + v * libm::sin(angle))
    }
}

/// Fixed orthonormal basis `(u, v)` of the plane orthogonal to `normal`.
pub fn circle_frame(normal: Vec3) -> Option<(Vec3, Vec3)> {
    let n = normal.try_normalize(1e-300)?;
    let f = PlaneFrame::new(Vec3::ZERO, n);
    Some((f.u, f.v))
}

/// Result of a coverage test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverWitness {
    pub covered: bool,
    /// An uncovered direction (`d · nᵢ <= ε` for every input) when `covered` is false.
    pub witness: Option<Direction>,
}

impl CoverWitness {
    fn from_option(w: Option<Vec3>) -> Self {
        match w {
            Some(d) => CoverWitness { covered: false, witness: Some(Direction(d)) },
            None => CoverWitness { covered: true, witness: None },
        }
    }
}

/// Symmetry test shared by hemispheres and semicircles.
pub trait Antipodal {
    fn is_antipodal(&self, other: &Self, tol: CoverTolerance) -> bool;
}

impl Antipodal for Hemisphere {
    fn is_antipodal(&self, other: &Self, tol: CoverTolerance) -> bool {
        (self.normal.vec() + other.normal.vec()).norm() <= tol.anti
    }
}

impl Antipodal for Semicircle {
    /// Semicircles on different great circles are never antipodal.
    fn is_antipodal(&self, other: &Self, tol: CoverTolerance) -> bool {
        same_circle(self.circle_normal.vec(), other.circle_normal.vec(), tol)
            && (self.mid.vec() + other.mid.vec()).norm() <= tol.anti
    }
}

pub fn antipodal<T: Antipodal>(a: &T, b: &T, tol: CoverTolerance) -> bool {
    a.is_antipodal(b, tol)
}

fn same_circle(a: Vec3, b: Vec3, tol: CoverTolerance) -> bool {
    a.cross(b).norm() <= tol.anti.max(1e-12)
}

#[inline]
fn max_dot(normals: &[Vec3], d: Vec3) -> f64 {
    normals.iter().fold(f64::NEG_INFINITY, |m, n| m.max(n.dot(d)))
}

/// A direction `d` with `nᵢ · d <= eps` for all normals, if one exists.
/// Normals need not be unit length but must be nonzero.
pub fn uncovered_direction(normals: &[Vec3], eps: f64) -> Option<Vec3> {
    if normals.is_empty() {
        return Some(Vec3::Z);
    }
    let accept = |d: Vec3| max_dot(normals, d) <= eps;
    for &n in normals {
        let d = -n.normalized();
        if accept(d) {
            return Some(d);
        }
    }
    let mut all_parallel = true;
    for (i, &a) in normals.iter().enumerate() {
        for &b in &normals[i + 1..] {
            if let Some(s) = (a + b).try_normalize(1e-12) {
                if accept(-s) {
                    return Some(-s);
                }
            }
            if let Some(c) = a.cross(b).try_normalize(1e-12) {
                all_parallel = false;
                if accept(c) {
                    return Some(c);
                }
                if accept(-c) {
                    return Some(-c);
                }
            }
        }
    }
    if all_parallel {
        // Only ±n₀: the cone is a halfspace (handled above) or the plane ⟂ n₀.
        let d = normals[0].any_orthogonal();
        if accept(d) {
            return Some(d);
        }
    }
    None
}

/// Whether the open hemispheres cover the whole sphere.
pub fn covers_sphere(hs: &[Hemisphere], tol: CoverTolerance) -> CoverWitness {
    let normals: Vec<Vec3> = hs.iter().map(|h| h.normal.vec()).collect();
    CoverWitness::from_option(uncovered_direction(&normals, tol.cover))
}

/// Same test on raw normals; used on hot paths.
pub fn covers_sphere_normals(normals: &[Vec3], tol: CoverTolerance) -> bool {
    normals.len() >= 4 && uncovered_direction(normals, tol.cover).is_none()
}

/// Whether the open semicircles cover their common great circle. The witness,
/// if any, lies on that circle.
pub fn covers_circle(ss: &[Semicircle], tol: CoverTolerance) -> Result<CoverWitness, CoverError> {
    let Some(first) = ss.first() else {
        return Ok(CoverWitness { covered: false, witness: Some(Direction(Vec3::X)) });
    };
    let c = first.circle_normal.vec();
    if ss.iter().any(|s| !same_circle(s.circle_normal.vec(), c, tol)) {
        return Err(CoverError::MixedCircles);
    }
    let (u, v) = circle_frame(c).ok_or(CoverError::Degenerate)?;
    let mids: Vec<[f64; 2]> = ss.iter().map(|s| [s.mid.vec().dot(u), s.mid.vec().dot(v)]).collect();
    Ok(CoverWitness::from_option(uncovered_on_circle(&mids, tol.cover).map(|p| u * p[0] + v * p[1])))
}

fn uncovered_on_circle(mids: &[[f64; 2]], eps: f64) -> Option<[f64; 2]> {
    let accept = |d: [f64; 2]| mids.iter().all(|m| m[0] * d[0] + m[1] * d[1] <= eps);
    for m in mids {
        let l = libm::hypot(m[0], m[1]);
        for d in [[-m[0] / l, -m[1] / l], [-m[1] / l, m[0] / l], [m[1] / l, -m[0] / l]] {
            if accept(d) {
                return Some(d);
            }
        }
    }
    None
}

/// Indices of a minimal covering subset of the circle of size 3 or 4; size 4
/// only for two antipodal pairs.
pub fn reduce_cover_circle(ss: &[Semicircle], tol: CoverTolerance) -> Result<Vec<usize>, CoverError> {
    if !covers_circle(ss, tol)?.covered {
        return Err(CoverError::NotCovering);
    }
    let c = ss[0].circle_normal.vec();
    let (u, v) = circle_frame(c).ok_or(CoverError::Degenerate)?;
    let mids: Vec<[f64; 2]> = ss
        .iter()
        .map(|s| {
            let m = s.mid.vec();
            [m.dot(u), m.dot(v)]
        })
        .collect();
    let covers = |idx: &[usize]| {
        let sub: Vec<[f64; 2]> = idx.iter().map(|&i| mids[i]).collect();
        uncovered_on_circle(&sub, tol.cover).is_none()
    };
    let mut best: Option<Vec<usize>> = None;
    for s in 0..ss.len() {
        let Some(rest) = cover_closed_semicircle(&mids, s, tol) else { continue };
        let mut r = alloc::vec![s];
        r.extend(rest);
        r.sort_unstable();
        r.dedup();
        if !covers(&r) {
            continue;
        }
        let r = prune(r, &covers);
        if best.as_ref().map_or(true, |b| r.len() < b.len()) {
            let done = r.len() == 3;
            best = Some(r);
            if done {
                break;
            }
        }
    }
    best.ok_or(CoverError::ReductionFailed)
}

/// Two or three semicircles (other than `s`) covering the closed complement of
/// semicircle `s`. Rays on the projected line are compared directly; falls back
/// to the antipode of `s` plus two endpoint patches.
fn cover_closed_semicircle(mids: &[[f64; 2]], s: usize, tol: CoverTolerance) -> Option<Vec<usize>> {
    let ms = mids[s];
    let l = libm::hypot(ms[0], ms[1]);
    let inward = [-ms[0] / l, -ms[1] / l];
    let side = [-inward[1], inward[0]];
    // On the closed complement, d(x) ∝ inward + x·side for x in the extended line.
    // Semicircle t covers d(x) iff a + b·x > 0 with a = m·inward, b = m·side.
    let mut up: Option<(f64, usize)> = None; // ray x > -a/b, b > 0
    let mut down: Option<(f64, usize)> = None; // ray x < -a/b, b < 0
    let mut interior = None;
    for (t, m) in mids.iter().enumerate() {
        if t == s {
            continue;
        }
        let a = m[0] * inward[0] + m[1] * inward[1];
        let b = m[0] * side[0] + m[1] * side[1];
        if libm::fabs(b) <= tol.anti {
            if a > 0.0 && interior.is_none() {
                interior = Some(t);
            }
            continue;
        }
        let threshold = -a / b;
        if b > 0.0 {
            if up.map_or(true, |(x, _)| threshold < x) {
                up = Some((threshold, t));
            }
        } else if down.map_or(true, |(x, _)| threshold > x) {
            down = Some((threshold, t));
        }
    }
    if let (Some((lo, i)), Some((hi, j))) = (up, down) {
        if lo < hi {
            return Some(alloc::vec![i, j]);
        }
    }
    let a = interior?;
    let hits = |d: [f64; 2]| {
        mids.iter()
            .enumerate()
            .find(|&(t, m)| t != s && t != a && m[0] * d[0] + m[1] * d[1] > tol.cover)
            .map(|(t, _)| t)
    };
    Some(alloc::vec![a, hits(side)?, hits([-side[0], -side[1]])?])
}

/// Drops members one at a time (in index order) while the rest still covers.
fn prune(mut r: Vec<usize>, covers: &dyn Fn(&[usize]) -> bool) -> Vec<usize> {
    let mut k = 0;
    while k < r.len() {
        let mut trial = r.clone();
        trial.remove(k);
        if covers(&trial) {
            r = trial;
        } else {
            k += 1;
        }
    }
    r
}

/// Indices of a subset of size 3, 4 or 5 that covers the closed hemisphere
/// complementary to `target`.
pub fn reduce_cover_closed_hemisphere(
    hs: &[Hemisphere],
    target: &Hemisphere,
    tol: CoverTolerance,
) -> Result<Vec<usize>, CoverError> {
    let t = target.normal.vec();
    let normals: Vec<Vec3> = hs.iter().map(|h| h.normal.vec()).collect();
    let covers = |idx: &[usize]| {
        let mut sub: Vec<Vec3> = idx.iter().map(|&i| normals[i]).collect();
        sub.push(t);
        uncovered_direction(&sub, tol.cover).is_none()
    };
    let all: Vec<usize> = (0..hs.len()).collect();
    if !covers(&all) {
        return Err(CoverError::NotCovering);
    }
    let inside = -t;
    let is_interior = |i: usize| (normals[i] - inside).norm() <= tol.anti;
    let useful: Vec<usize> = all
        .iter()
        .copied()
        .filter(|&i| (normals[i] - t).norm() > tol.anti)
        .collect();
    let without_interior: Vec<usize> = useful.iter().copied().filter(|&i| !is_interior(i)).collect();

    let result = if covers(&without_interior) {
        planar_helly(&normals, &without_interior, inside, tol, &covers)
    } else {
        // The interior hemisphere is indispensable; the rest must cover the boundary circle.
        let interior = useful.iter().copied().find(|&i| is_interior(i)).ok_or(CoverError::ReductionFailed)?;
        let circle = Direction::new(t).ok_or(CoverError::Degenerate)?;
        let on_boundary: Vec<(usize, Semicircle)> = useful
            .iter()
            .copied()
            .filter(|&i| !is_interior(i))
            .filter_map(|i| hs[i].on_circle(circle).map(|s| (i, s)))
            .collect();
        let arcs: Vec<Semicircle> = on_boundary.iter().map(|&(_, s)| s).collect();
        let sub = reduce_cover_circle(&arcs, tol)?;
        let mut r: Vec<usize> = sub.into_iter().map(|k| on_boundary[k].0).collect();
        r.push(interior);
        r.sort_unstable();
        Some(r)
    };
    let r = result.ok_or(CoverError::ReductionFailed)?;
    if !covers(&r) {
        return Err(CoverError::ReductionFailed);
    }
    let r = prune(r, &covers);
    if !(3..=5).contains(&r.len()) {
        return Err(CoverError::ReductionFailed);
    }
    Ok(r)
}

/// Central projection of the closed hemisphere around `inside` onto the plane
/// `w = 1`: hemisphere `n` becomes the open halfplane `a·x + b·y + c > 0`.
/// Searches triples first (non-parallel triples also cover the circle at
/// infinity), then parallel pairs patched at their two uncovered points at
/// infinity.
fn planar_helly(
    normals: &[Vec3],
    cand: &[usize],
    inside: Vec3,
    tol: CoverTolerance,
    covers: &dyn Fn(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    let frame = PlaneFrame::new(Vec3::ZERO, inside);
    let hp: Vec<[f64; 3]> = cand
        .iter()
        .map(|&i| {
            let n = normals[i];
            [n.dot(frame.u), n.dot(frame.v), n.dot(frame.normal)]
        })
        .collect();
    let k = hp.len();
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let set = [hp[i], hp[j], hp[l]];
                if halfplanes_cover_plane(&set, tol.cover) {
                    let r = alloc::vec![cand[i], cand[j], cand[l]];
                    if covers(&r) {
                        return Some(r);
                    }
                }
            }
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            if !halfplanes_cover_plane(&[hp[i], hp[j]], tol.cover) {
                continue;
            }
            let w = frame.u * (-hp[i][1]) + frame.v * hp[i][0];
            let Some(w) = w.try_normalize(1e-300) else { continue };
            let patch = |d: Vec3| {
                cand.iter()
                    .copied()
                    .find(|&h| h != cand[i] && h != cand[j] && normals[h].dot(d) > tol.cover)
            };
            if let (Some(p), Some(q)) = (patch(w), patch(-w)) {
                let mut r = alloc::vec![cand[i], cand[j], p, q];
                r.sort_unstable();
                r.dedup();
                if covers(&r) {
                    return Some(r);
                }
            }
        }
    }
    None
}

/// Whether open halfplanes `a·x + b·y + c > 0` cover the affine plane. The
/// uncovered set is a closed convex region; if nonempty it contains a pairwise
/// line intersection or (when all lines are parallel) the foot point of some
/// line. Values are measured on the lifted unit vector `(x, y, 1)/|…|` so the
/// tolerance matches the spherical one.
pub fn halfplanes_cover_plane(hp: &[[f64; 3]], eps: f64) -> bool {
    if hp.is_empty() {
        return false;
    }
    let uncovered = |x: f64, y: f64| {
        let r = libm::sqrt(x * x + y * y + 1.0);
        hp.iter().all(|h| (h[0] * x + h[1] * y + h[2]) / r <= eps)
    };
    for (i, h) in hp.iter().enumerate() {
        let g = h[0] * h[0] + h[1] * h[1];
        if g <= 1e-24 {
            if h[2] > eps {
                // Interior hemisphere: covers every finite point.
                return true;
            }
            continue;
        }
        if uncovered(-h[2] * h[0] / g, -h[2] * h[1] / g) {
            return false;
        }
        for k in &hp[i + 1..] {
            let det = h[0] * k[1] - h[1] * k[0];
            if libm::fabs(det) <= 1e-15 {
                continue;
            }
            let x = (-h[2] * k[1] + h[1] * k[2]) / det;
            let y = (-h[0] * k[2] + h[2] * k[0]) / det;
            if uncovered(x, y) {
                return false;
            }
        }
    }
    true
}

/// Indices of a covering subset of the sphere of size 4, 5 or 6.
pub fn reduce_cover_sphere(hs: &[Hemisphere], tol: CoverTolerance) -> Result<Vec<usize>, CoverError> {
    if !covers_sphere(hs, tol).covered {
        return Err(CoverError::NotCovering);
    }
    let normals: Vec<Vec3> = hs.iter().map(|h| h.normal.vec()).collect();
    let covers = |idx: &[usize]| {
        let sub: Vec<Vec3> = idx.iter().map(|&i| normals[i]).collect();
        uncovered_direction(&sub, tol.cover).is_none()
    };
    let mut best: Option<Vec<usize>> = None;
    for s in 0..hs.len() {
        let rest: Vec<usize> = (0..hs.len()).filter(|&i| i != s).collect();
        let rest_hs: Vec<Hemisphere> = rest.iter().map(|&i| hs[i]).collect();
        let Ok(sub) = reduce_cover_closed_hemisphere(&rest_hs, &hs[s], tol) else { continue };
        let mut r: Vec<usize> = sub.into_iter().map(|k| rest[k]).collect();
        r.push(s);
        r.sort_unstable();
        if !covers(&r) {
            continue;
        }
        let r = prune(r, &covers);
        if best.as_ref().map_or(true, |b| r.len() < b.len()) {
            let done = r.len() == 4;
            best = Some(r);
            if done {
                break;
            }
        }
    }
    let r = best.ok_or(CoverError::ReductionFailed)?;
    if !(4..=6).contains(&r.len()) {
        return Err(CoverError::ReductionFailed);
    }
    Ok(r)
}
