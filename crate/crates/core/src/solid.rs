//! Printable fixture solids: the palm, finger bodies and fingertips as
//! α-extrusions of planar base polygons on the workpiece surface.
//!
//! Parts are emitted as separate closed shells. Parts whose bases share a
//! workpiece facet are shrunk about their anchor points until their interiors
//! are disjoint, then every part is lifted off the surface by the clearance.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::geom::{self, PlaneFrame, Vec3};
use crate::mesh::{Polyhedron, Segment};
use crate::synth::{Finger, Fixture};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolidError {
    #[error("extrusion thickness must be positive, got {0}")]
    NonPositiveThickness(f64),
    #[error("degenerate base polygon")]
    DegeneratePolygon,
    #[error("degenerate fingertip edge or zero width")]
    DegenerateEdge,
    #[error("invalid parameter: {0}")]
    InvalidParams(&'static str),
    #[error("facets {0} and {1} do not share an edge")]
    NotAdjacent(usize, usize),
    #[error("facet {0} does not exist")]
    UnknownFacet(usize),
    #[error("overlap between parts on facet {0} could not be resolved by shrinking")]
    OverlapUnresolved(usize),
    #[error("generated solid is not watertight")]
    NotWatertight,
    #[error("joint angles out of range")]
    InvalidJoint,
}

/// Extrusion thicknesses, clearance and finger proportions (millimeters).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtrusionParams {
    pub alpha_p: f64,
    pub alpha_b: f64,
    pub alpha_t: f64,
    pub clearance: f64,
    /// Fraction of the palm and tip edges spanned by a body; `1` uses the whole body facet.
    pub body_shrink: f64,
    /// Fingertip width `b`.
    pub tip_width: f64,
    /// Optional upper bound on the fingertip width, e.g. from [`max_fingertip_width`].
    pub max_tip_width: Option<f64>,
}

impl Default for ExtrusionParams {
    fn default() -> Self {
        ExtrusionParams {
            alpha_p: 5.0,
            alpha_b: 5.0,
            alpha_t: 5.0,
            clearance: 0.2,
            body_shrink: 0.8,
            tip_width: 4.0,
            max_tip_width: None,
        }
    }
}

impl ExtrusionParams {
    pub fn validate(&self) -> Result<(), SolidError> {
        for a in [self.alpha_p, self.alpha_b, self.alpha_t] {
            if !(a > 0.0) || !a.is_finite() {
                return Err(SolidError::NonPositiveThickness(a));
            }
        }
        if !(self.clearance >= 0.0) || !self.clearance.is_finite() {
            return Err(SolidError::InvalidParams("clearance must be non-negative"));
        }
        if !(self.body_shrink > 0.0 && self.body_shrink <= 1.0) {
            return Err(SolidError::InvalidParams("body shrink must lie in (0, 1]"));
        }
        if !(self.tip_width >= 0.0) || !self.tip_width.is_finite() {
            return Err(SolidError::InvalidParams("tip width must be non-negative"));
        }
        if let Some(m) = self.max_tip_width {
            if !(m >= 0.0) {
                return Err(SolidError::InvalidParams("maximal tip width must be non-negative"));
            }
        }
        Ok(())
    }

    /// Fingertip width after applying the optional cap.
    pub fn effective_tip_width(&self) -> f64 {
        match self.max_tip_width {
            Some(m) => self.tip_width.min(m),
            None => self.tip_width,
        }
    }
}

/// Indexed triangle mesh, possibly with several shells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolidMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
}

impl SolidMesh {
    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn volume(&self) -> f64 {
        geom::mesh_volume(&self.vertices, &self.triangles)
    }

    pub fn append(&mut self, other: &SolidMesh) {
        let base = self.vertices.len();
        self.vertices.extend_from_slice(&other.vertices);
        self.triangles
            .extend(other.triangles.iter().map(|t| [t[0] + base, t[1] + base, t[2] + base]));
    }

    pub fn translated(&self, by: Vec3) -> SolidMesh {
        SolidMesh {
            vertices: self.vertices.iter().map(|&v| v + by).collect(),
            triangles: self.triangles.clone(),
        }
    }

    /// Every directed edge occurs exactly once and its reverse exactly once.
    pub fn is_watertight(&self) -> bool {
        if self.triangles.is_empty() {
            return false;
        }
        let mut edges: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for t in &self.triangles {
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return false;
            }
            for k in 0..3 {
                *edges.entry((t[k], t[(k + 1) % 3])).or_insert(0) += 1;
            }
        }
        edges.iter().all(|(&(u, v), &c)| c == 1 && edges.get(&(v, u)) == Some(&1))
    }

    /// `V − E + F` of the triangle mesh.
    pub fn euler_characteristic(&self) -> i64 {
        let mut edges = BTreeMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                edges.insert((a.min(b), a.max(b)), ());
            }
        }
        let used: alloc::collections::BTreeSet<usize> = self.triangles.iter().flatten().copied().collect();
        used.len() as i64 - edges.len() as i64 + self.triangles.len() as i64
    }
}

fn polygon_normal(poly: &[Vec3]) -> Option<Vec3> {
    geom::newell(poly).try_normalize(1e-300)
}

/// Removes repeated and collinear vertices so caps and side walls share edges.
fn simplify(poly: &[Vec3]) -> Vec<Vec3> {
    let scale = poly.iter().fold(0.0f64, |m, p| m.max(p.max_abs())).max(1.0);
    let tol = 1e-12 * scale;
    let mut pts: Vec<Vec3> = Vec::with_capacity(poly.len());
    for &p in poly {
        if pts.last().map_or(true, |q: &Vec3| q.distance(p) > tol) {
            pts.push(p);
        }
    }
    while pts.len() > 1 && pts[0].distance(pts[pts.len() - 1]) <= tol {
        pts.pop();
    }
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let flat = (0..n).find(|&i| {
            let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
            (b - a).cross(c - b).norm() <= tol * (c - a).norm().max(tol)
        });
        match flat {
            Some(i) => {
                pts.remove(i);
            }
            None => return pts,
        }
    }
}

fn triangulate_polygon(poly: &[Vec3], normal: Vec3) -> Option<Vec<[usize; 3]>> {
    let frame = PlaneFrame::new(poly[0], normal);
    let flat: Vec<[f64; 2]> = poly.iter().map(|&p| frame.project(p)).collect();
    if geom::signed_area2(&flat) <= 0.0 {
        return None;
    }
    geom::triangulate_2d(&flat)
}

/// Prism over the planar simple polygon `poly`, swept by `alpha` along the
/// polygon's normal (counter-clockwise orientation defines the normal).
pub fn extrude_polygon(poly: &[Vec3], alpha: f64) -> Result<SolidMesh, SolidError> {
    if !(alpha > 0.0) {
        return Err(SolidError::NonPositiveThickness(alpha));
    }
    let poly = simplify(poly);
    if poly.len() < 3 || geom::polygon_area(&poly) < 1e-12 {
        return Err(SolidError::DegeneratePolygon);
    }
    let n = polygon_normal(&poly).ok_or(SolidError::DegeneratePolygon)?;
    let tris = triangulate_polygon(&poly, n).ok_or(SolidError::DegeneratePolygon)?;
    let k = poly.len();
    let mut vertices = poly.clone();
    vertices.extend(poly.iter().map(|&p| p + n * alpha));
    let mut triangles = Vec::with_capacity(2 * tris.len() + 2 * k);
    for t in &tris {
        triangles.push([t[0], t[2], t[1]]);
        triangles.push([t[0] + k, t[1] + k, t[2] + k]);
    }
    for i in 0..k {
        let j = (i + 1) % k;
        triangles.push([i, j, j + k]);
        triangles.push([i, j + k, i + k]);
    }
    Ok(SolidMesh { vertices, triangles })
}

/// Quadrilateral `{p₁, p₂, p₂ + v, p₁ + v}` on the fingertip facet, where
/// `v ∥ dir(e_bt) × tip_normal` has length `width` and points toward `inside`.
pub fn build_fingertip_quad(e_bt: Segment, tip_normal: Vec3, inside: Vec3, width: f64) -> Result<[Vec3; 4], SolidError> {
    let raw = (e_bt.b - e_bt.a).cross(tip_normal);
    let dir = raw.try_normalize(1e-9).ok_or(SolidError::DegenerateEdge)?;
    if !(width > 1e-9) {
        return Err(SolidError::DegenerateEdge);
    }
    let mut v = dir * width;
    if v.dot(inside - e_bt.midpoint()) < 0.0 {
        v = -v;
    }
    let (p1, p2) = (e_bt.a, e_bt.b);
    let quad = [p1, p2, p2 + v, p1 + v];
    // Keep the loop counter-clockwise about the tip normal.
    if geom::newell(&quad).dot(tip_normal) < 0.0 {
        Ok([p2, p1, p1 + v, p2 + v])
    } else {
        Ok(quad)
    }
}

/// Largest fingertip width `a·sin θc / sin(θc + η)` that bends through the
/// threshold angle `θc` for a body edge of length `a` at angle `η`.
pub fn max_fingertip_width(a: f64, theta_c: f64, eta: f64) -> Result<f64, SolidError> {
    let s = libm::sin(theta_c + eta);
    if !(s > 1e-12) || a < 0.0 || theta_c < 0.0 || !(eta > 0.0) {
        return Err(SolidError::InvalidJoint);
    }
    Ok(a * libm::sin(theta_c) / s)
}

/// Inputs and result of the joint-flexibility bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointFeasibility {
    pub a: f64,
    pub eta: f64,
    pub theta_c: f64,
    pub max_tip_width: f64,
}

impl JointFeasibility {
    pub fn new(a: f64, theta_c: f64, eta: f64) -> Result<Self, SolidError> {
        if !(eta > 0.0 && eta < core::f64::consts::PI && theta_c > 0.0 && theta_c < core::f64::consts::PI - eta) {
            return Err(SolidError::InvalidJoint);
        }
        Ok(JointFeasibility { a, eta, theta_c, max_tip_width: max_fingertip_width(a, theta_c, eta)? })
    }
}

fn facet_polygon(p: &Polyhedron, f: usize) -> Result<Vec<Vec3>, SolidError> {
    if f >= p.facet_count() {
        return Err(SolidError::UnknownFacet(f));
    }
    Ok(p.facet_points(f))
}

fn edge(p: &Polyhedron, a: usize, b: usize) -> Result<Segment, SolidError> {
    p.shared_edge(a, b).ok_or(SolidError::NotAdjacent(a, b))
}

pub fn palm_base(p: &Polyhedron, palm: usize) -> Result<Vec<Vec3>, SolidError> {
    facet_polygon(p, palm)
}

/// Base polygon of a finger body: the whole body facet when `shrink == 1`,
/// otherwise the quadrilateral spanned by the middle `shrink` fractions of the
/// palm–body and body–tip edges.
pub fn body_base(p: &Polyhedron, palm: usize, finger: Finger, shrink: f64) -> Result<Vec<Vec3>, SolidError> {
    let full = facet_polygon(p, finger.body)?;
    let e_pb = edge(p, finger.body, palm)?;
    let e_bt = edge(p, finger.body, finger.tip)?;
    if shrink >= 1.0 {
        return Ok(full);
    }
    let (t0, t1) = ((1.0 - shrink) / 2.0, (1.0 + shrink) / 2.0);
    let quad = alloc::vec![
        e_pb.a.lerp(e_pb.b, t0),
        e_pb.a.lerp(e_pb.b, t1),
        e_bt.a.lerp(e_bt.b, t0),
        e_bt.a.lerp(e_bt.b, t1),
    ];
    if geom::polygon_area(&quad) < 1e-12 {
        return Err(SolidError::DegeneratePolygon);
    }
    Ok(quad)
}

/// Fingertip base on the tip facet, clipped to the facet when it is convex.
/// Empty when the effective width is zero.
pub fn tip_base(p: &Polyhedron, finger: Finger, params: &ExtrusionParams) -> Result<Vec<Vec3>, SolidError> {
    let width = params.effective_tip_width();
    let poly = facet_polygon(p, finger.tip)?;
    if width <= 1e-9 {
        return Ok(Vec::new());
    }
    let n = p.facets()[finger.tip].normal;
    let e = edge(p, finger.tip, finger.body)?;
    let inside = e.midpoint() + n.cross(e.b - e.a);
    let quad = build_fingertip_quad(e, n, inside, width)?;
    let frame = PlaneFrame::new(poly[0], n);
    let facet2: Vec<[f64; 2]> = poly.iter().map(|&q| frame.project(q)).collect();
    if !geom::is_convex_ccw(&facet2, 1e-12) {
        return Ok(quad.to_vec());
    }
    let quad2: Vec<[f64; 2]> = quad.iter().map(|&q| frame.project(q)).collect();
    let clipped = geom::clip_convex_2d(&quad2, &facet2);
    let lifted: Vec<Vec3> = clipped.into_iter().map(|q| frame.lift(q)).collect();
    Ok(simplify(&lifted))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartKind {
    Palm,
    /// Body of the finger with this index in the fixture.
    Body(usize),
    Tip(usize),
}

/// One extruded part of a fixture solid.
#[derive(Debug, Clone)]
pub struct Part {
    pub kind: PartKind,
    pub facet: usize,
    /// Base polygon on the workpiece surface, after overlap shrinking.
    pub base: Vec<Vec3>,
    /// Scale factor applied to resolve overlaps (`1` when untouched).
    pub scale: f64,
    pub thickness: f64,
    /// Clearance translation applied to the shell.
    pub offset: Vec3,
    /// Closed shell lifted off the surface by the clearance.
    pub mesh: SolidMesh,
}

#[derive(Debug, Clone)]
pub struct FixtureSolid {
    pub parts: Vec<Part>,
    pub mesh: SolidMesh,
    /// Largest pairwise intersection volume between parts.
    pub max_overlap: f64,
}

const OVERLAP_AREA_EPS: f64 = 1e-12;

fn scale_about(poly: &[Vec3], center: Vec3, s: f64) -> Vec<Vec3> {
    poly.iter().map(|&q| center + (q - center) * s).collect()
}

fn triangles_2d(poly: &[Vec3], frame: &PlaneFrame) -> Vec<[[f64; 2]; 3]> {
    let flat: Vec<[f64; 2]> = poly.iter().map(|&q| frame.project(q)).collect();
    let Some(tris) = geom::triangulate_2d(&flat) else { return Vec::new() };
    tris.iter()
        .map(|t| {
            let mut tri = [flat[t[0]], flat[t[1]], flat[t[2]]];
            if geom::signed_area2(&tri) < 0.0 {
                tri.swap(1, 2);
            }
            tri
        })
        .collect()
}

fn overlap_area(a: &[Vec3], b: &[Vec3], frame: &PlaneFrame) -> f64 {
    let ta = triangles_2d(a, frame);
    let tb = triangles_2d(b, frame);
    let mut s = 0.0;
    for x in &ta {
        for y in &tb {
            s += geom::convex_overlap_area(x, y);
        }
    }
    s
}

/// Builds palm, body and tip parts for `fixture`, shrinks parts sharing a facet
/// until disjoint and verifies the result.
pub fn build_fixture_solid(p: &Polyhedron, fixture: &Fixture, params: &ExtrusionParams) -> Result<FixtureSolid, SolidError> {
    params.validate()?;
    struct Draft {
        kind: PartKind,
        facet: usize,
        base: Vec<Vec3>,
        anchor: Vec3,
        scale: f64,
        thickness: f64,
    }
    let palm = fixture.palm;
    let mut drafts = Vec::new();
    let palm_poly = palm_base(p, palm)?;
    drafts.push(Draft {
        kind: PartKind::Palm,
        facet: palm,
        anchor: geom::centroid(&palm_poly),
        base: palm_poly,
        scale: 1.0,
        thickness: params.alpha_p,
    });
    for (k, &f) in fixture.fingers.iter().enumerate() {
        drafts.push(Draft {
            kind: PartKind::Body(k),
            facet: f.body,
            base: body_base(p, palm, f, params.body_shrink)?,
            anchor: edge(p, f.body, palm)?.midpoint(),
            scale: 1.0,
            thickness: params.alpha_b,
        });
    }
    for (k, &f) in fixture.fingers.iter().enumerate() {
        let base = tip_base(p, f, params)?;
        if base.len() < 3 {
            continue;
        }
        drafts.push(Draft {
            kind: PartKind::Tip(k),
            facet: f.tip,
            base,
            anchor: edge(p, f.tip, f.body)?.midpoint(),
            scale: 1.0,
            thickness: params.alpha_t,
        });
    }

    for i in 0..drafts.len() {
        for j in i + 1..drafts.len() {
            if drafts[i].facet != drafts[j].facet {
                continue;
            }
            let facet = drafts[i].facet;
            let frame = PlaneFrame::new(drafts[i].anchor, p.facets()[facet].normal);
            let at = |s: f64| {
                let a = scale_about(&drafts[i].base, drafts[i].anchor, s);
                let b = scale_about(&drafts[j].base, drafts[j].anchor, s);
                overlap_area(&a, &b, &frame)
            };
            if at(1.0) <= OVERLAP_AREA_EPS {
                continue;
            }
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..20 {
                let mid = 0.5 * (lo + hi);
                if at(mid) <= OVERLAP_AREA_EPS {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            if lo <= 0.0 {
                return Err(SolidError::OverlapUnresolved(facet));
            }
            for k in [i, j] {
                let d = &mut drafts[k];
                d.base = scale_about(&d.base, d.anchor, lo);
                d.scale *= lo;
            }
        }
    }

    let mut parts = Vec::with_capacity(drafts.len());
    let mut mesh = SolidMesh::default();
    for d in drafts {
        let offset = p.facets()[d.facet].normal * params.clearance;
        let shell = extrude_polygon(&d.base, d.thickness)?.translated(offset);
        mesh.append(&shell);
        parts.push(Part {
            kind: d.kind,
            facet: d.facet,
            base: d.base,
            scale: d.scale,
            thickness: d.thickness,
            offset,
            mesh: shell,
        });
    }
    if !mesh.is_watertight() || !(mesh.volume() > 0.0) {
        return Err(SolidError::NotWatertight);
    }
    let max_overlap = max_pairwise_overlap(&parts);
    Ok(FixtureSolid { parts, mesh, max_overlap })
}

/// Largest intersection volume over all pairs of parts.
pub fn max_pairwise_overlap(parts: &[Part]) -> f64 {
    let pieces: Vec<Vec<ConvexPolytope>> = parts.iter().map(|part| part_pieces(part)).collect();
    let mut worst = 0.0f64;
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let mut v = 0.0;
            for a in &pieces[i] {
                for b in &pieces[j] {
                    v += a.intersection_volume(b);
                }
            }
            worst = worst.max(v);
        }
    }
    worst
}

fn part_pieces(part: &Part) -> Vec<ConvexPolytope> {
    let base = simplify(&part.base);
    let Some(n) = polygon_normal(&base) else { return Vec::new() };
    let Some(tris) = triangulate_polygon(&base, n) else { return Vec::new() };
    let lift = part.offset;
    tris.iter()
        .map(|t| ConvexPolytope::prism([base[t[0]] + lift, base[t[1]] + lift, base[t[2]] + lift], n, part.thickness))
        .collect()
}

/// Convex polytope as a list of outward-oriented planar faces.
#[derive(Debug, Clone)]
pub struct ConvexPolytope {
    pub faces: Vec<Vec<Vec3>>,
}

impl ConvexPolytope {
    /// Triangular prism over the counter-clockwise triangle `tri` along unit normal `n`.
    pub fn prism(tri: [Vec3; 3], n: Vec3, alpha: f64) -> Self {
        let top: Vec<Vec3> = tri.iter().map(|&q| q + n * alpha).collect();
        let mut faces = alloc::vec![alloc::vec![tri[0], tri[2], tri[1]], top.clone()];
        for i in 0..3 {
            let j = (i + 1) % 3;
            faces.push(alloc::vec![tri[i], tri[j], top[j], top[i]]);
        }
        ConvexPolytope { faces }
    }

    pub fn volume(&self) -> f64 {
        let mut v = 0.0;
        for f in &self.faces {
            for k in 1..f.len().saturating_sub(1) {
                v += f[0].dot(f[k].cross(f[k + 1]));
            }
        }
        v / 6.0
    }

    fn planes(&self) -> Vec<(Vec3, f64)> {
        self.faces
            .iter()
            .filter_map(|f| {
                let n = polygon_normal(f)?;
                Some((n, n.dot(geom::centroid(f))))
            })
            .collect()
    }

    /// Keeps the part with `n · x <= d`.
    pub fn clip(&self, n: Vec3, d: f64) -> ConvexPolytope {
        let mut faces = Vec::with_capacity(self.faces.len() + 1);
        let mut cut: Vec<Vec3> = Vec::new();
        for f in &self.faces {
            let mut out = Vec::with_capacity(f.len() + 1);
            for i in 0..f.len() {
                let (a, b) = (f[i], f[(i + 1) % f.len()]);
                let (sa, sb) = (n.dot(a) - d, n.dot(b) - d);
                if sa <= 0.0 {
                    out.push(a);
                }
                if (sa <= 0.0) != (sb <= 0.0) {
                    let x = a + (b - a) * (sa / (sa - sb));
                    out.push(x);
                    cut.push(x);
                }
            }
            if out.len() >= 3 {
                faces.push(out);
            }
        }
        if cut.len() >= 3 {
            let c = geom::centroid(&cut);
            let frame = PlaneFrame::new(c, n);
            let mut keyed: Vec<(f64, Vec3)> = cut
                .into_iter()
                .map(|q| {
                    let r = frame.project(q);
                    (libm::atan2(r[1], r[0]), q)
                })
                .collect();
            keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal));
            faces.push(keyed.into_iter().map(|(_, q)| q).collect());
        }
        ConvexPolytope { faces }
    }

    pub fn intersection_volume(&self, other: &ConvexPolytope) -> f64 {
        let mut cur = self.clone();
        for (n, d) in other.planes() {
            cur = cur.clip(n, d);
            if cur.faces.len() < 4 {
                return 0.0;
            }
        }
        cur.volume().max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::mesh::MeshTolerance;
    use alloc::vec;

    fn square(s: f64) -> Vec<Vec3> {
        vec![Vec3::ZERO, Vec3::new(s, 0.0, 0.0), Vec3::new(s, s, 0.0), Vec3::new(0.0, s, 0.0)]
    }

    #[test]
    fn unit_square_extrudes_to_unit_cube() {
        let m = extrude_polygon(&square(1.0), 1.0).unwrap();
        assert!(m.is_watertight());
        assert!((m.volume() - 1.0).abs() < 1e-12);
        assert_eq!(m.euler_characteristic(), 2);
    }

    #[test]
    fn triangle_prism_volume() {
        let t = [Vec3::ZERO, Vec3::new(3.0, 0.0, 0.0), Vec3::new(0.0, 2.0, 0.0)];
        let m = extrude_polygon(&t, 2.5).unwrap();
        assert!((m.volume() - 3.0 * 2.5).abs() < 1e-12);
    }

    #[test]
    fn extrusion_rejects_bad_input() {
        assert_eq!(extrude_polygon(&square(1.0), 0.0), Err(SolidError::NonPositiveThickness(0.0)));
        let line = [Vec3::ZERO, Vec3::X, Vec3::X * 2.0];
        assert_eq!(extrude_polygon(&line, 1.0), Err(SolidError::DegeneratePolygon));
    }

    #[test]
    fn collinear_vertices_keep_shell_closed() {
        let p = vec![Vec3::ZERO, Vec3::new(1.0, 0.0, 0.0), Vec3::new(2.0, 0.0, 0.0), Vec3::new(2.0, 2.0, 0.0), Vec3::new(0.0, 2.0, 0.0)];
        let m = extrude_polygon(&p, 1.0).unwrap();
        assert!(m.is_watertight());
        assert!((m.volume() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn fingertip_quad_direction_and_area() {
        let e = Segment { a: Vec3::ZERO, b: Vec3::X };
        let q = build_fingertip_quad(e, Vec3::Z, Vec3::new(0.5, -1.0, 0.0), 2.0).unwrap();
        assert!((q[3] - Vec3::new(0.0, -2.0, 0.0)).norm() < 1e-15 || (q[2] - Vec3::new(0.0, -2.0, 0.0)).norm() < 1e-15);
        assert!((geom::polygon_area(&q) - 2.0).abs() < 1e-12);
        assert!(geom::newell(&q).dot(Vec3::Z) > 0.0);
        // Flipped when the facet lies on the other side.
        let q = build_fingertip_quad(e, Vec3::Z, Vec3::new(0.5, 1.0, 0.0), 2.0).unwrap();
        assert!(q.iter().all(|p| p.y >= 0.0));
        assert_eq!(build_fingertip_quad(e, Vec3::Z, Vec3::Y, 0.0), Err(SolidError::DegenerateEdge));
        let w = Segment { a: Vec3::ZERO, b: Vec3::X * 7.0 };
        let q = build_fingertip_quad(w, Vec3::Z, Vec3::Y, 3.0).unwrap();
        assert!((geom::polygon_area(&q) - 21.0).abs() < 1e-12);
    }

    #[test]
    fn fingertip_width_bound() {
        let d = core::f64::consts::PI / 180.0;
        assert!((max_fingertip_width(10.0, 30.0 * d, 60.0 * d).unwrap() - 5.0).abs() < 1e-12);
        assert!((max_fingertip_width(10.0, 45.0 * d, 45.0 * d).unwrap() - 10.0 * libm::sqrt(0.5)).abs() < 1e-12);
        assert!(max_fingertip_width(10.0, 1e-9, 60.0 * d).unwrap() < 1e-7);
        assert!(max_fingertip_width(10.0, 120.0 * d, 60.0 * d).is_err());
        assert!(JointFeasibility::new(10.0, 30.0 * d, 60.0 * d).is_ok());
        assert!(JointFeasibility::new(10.0, 130.0 * d, 60.0 * d).is_err());
    }

    #[test]
    fn prism_clip_volume() {
        let tri = [Vec3::ZERO, Vec3::X * 2.0, Vec3::Y * 2.0];
        let a = ConvexPolytope::prism(tri, Vec3::Z, 1.0);
        assert!((a.volume() - 2.0).abs() < 1e-12);
        let half = a.clip(Vec3::Z, 0.5);
        assert!((half.volume() - 1.0).abs() < 1e-12);
        let b = ConvexPolytope::prism(tri.map(|p| p + Vec3::Z * 0.25), Vec3::Z, 1.0);
        assert!((a.intersection_volume(&b) - 1.5).abs() < 1e-12);
        let far = ConvexPolytope::prism(tri.map(|p| p + Vec3::X * 5.0), Vec3::Z, 1.0);
        assert_eq!(a.intersection_volume(&far), 0.0);
    }

    #[test]
    fn cube_tip_quad_clipped_to_facet() {
        let cube = generators::cube(20.0).merge_coplanar_facets(MeshTolerance::default()).unwrap();
        let f0 = 0;
        let body = cube.neighbors(f0)[0];
        let tip = *cube.neighbors(body).iter().find(|&&t| t != f0).unwrap();
        let params = ExtrusionParams { tip_width: 30.0, ..Default::default() };
        let base = tip_base(&cube, Finger { body, tip }, &params).unwrap();
        // Width 30 exceeds the 20 mm facet, so the quad is clipped to the whole facet.
        assert!((geom::polygon_area(&base) - 400.0).abs() < 1e-9);
    }
}
