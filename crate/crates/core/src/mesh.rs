//! Closed polyhedral workpieces: validation, coplanar-facet merging and
//! adjacency queries.
//!
//! A [`Polyhedron`] always carries its triangulation (which is what the loaders
//! produce and what the Euler characteristic is computed on) together with a
//! partition of the triangles into planar facets. Freshly built meshes have one
//! facet per triangle; [`Polyhedron::merge_coplanar_facets`] coarsens that
//! partition.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::geom::{self, PlaneFrame, Vec3};

/// Coplanarity and welding tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshTolerance {
    /// Maximum angle between facet normals that still counts as coplanar (radians).
    pub angle: f64,
    /// Maximum point-to-plane distance for coplanarity, and vertex welding radius (mm).
    pub dist: f64,
}

impl Default for MeshTolerance {
    fn default() -> Self {
        MeshTolerance { angle: 1e-6, dist: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeshError {
    #[error("mesh has no faces")]
    Empty,
    #[error("face {face} references missing vertex {vertex}")]
    BadIndex { face: usize, vertex: usize },
    #[error("face {0} is degenerate")]
    DegenerateFace(usize),
    #[error("open boundary at edge ({0}, {1})")]
    OpenBoundary(usize, usize),
    #[error("non-manifold edge ({0}, {1}) shared by {2} faces")]
    NonManifoldEdge(usize, usize, usize),
    #[error("inconsistent orientation at edge ({0}, {1})")]
    InconsistentOrientation(usize, usize),
    #[error("merged facet {0} is not a simple polygon")]
    NonSimpleFacet(usize),
    #[error("no facet with id {0}")]
    UnknownFacet(usize),
}

/// A planar facet of a [`Polyhedron`].
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub id: usize,
    /// Outward unit normal.
    pub normal: Vec3,
    /// Plane offset: `normal · p = offset` for points `p` on the facet.
    pub offset: f64,
    pub area: f64,
    /// Boundary loop as vertex indices, counter-clockwise seen from outside.
    pub boundary: Vec<usize>,
    /// Ids of facets sharing at least one edge, ascending.
    pub neighbors: Vec<usize>,
    /// Triangles of the underlying triangulation that make up this facet.
    pub triangles: Vec<usize>,
}

/// Closed, consistently oriented 2-manifold mesh with planar facets.
#[derive(Debug, Clone)]
pub struct Polyhedron {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    /// `tri_adj[t][k]` is the triangle across edge `k` of `t` (edge `k` runs from corner `k` to `k + 1`).
    tri_adj: Vec<[usize; 3]>,
    facet_of: Vec<usize>,
    facets: Vec<Facet>,
    edge_count: usize,
    components: usize,
}

/// A straight segment, used for facet-to-facet shared edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Vec3,
    pub b: Vec3,
}

impl Segment {
    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn direction(&self) -> Vec3 {
        (self.b - self.a).normalized()
    }

    pub fn midpoint(&self) -> Vec3 {
        self.a.lerp(self.b, 0.5)
    }
}

impl Polyhedron {
    /// Builds a polyhedron from polygonal faces. Vertices closer than
    /// `tol.dist` are welded, faces are triangulated, and manifoldness and
    /// orientation are validated. An inward-oriented mesh is flipped.
    pub fn from_polygons(
        vertices: &[Vec3],
        faces: &[Vec<usize>],
        tol: MeshTolerance,
    ) -> Result<Polyhedron, MeshError> {
        if faces.is_empty() {
            return Err(MeshError::Empty);
        }
        for (fi, f) in faces.iter().enumerate() {
            if let Some(&v) = f.iter().find(|&&v| v >= vertices.len()) {
                return Err(MeshError::BadIndex { face: fi, vertex: v });
            }
        }
        let remap = weld(vertices, tol.dist);

        // Compact to the referenced representatives, in order of first use.
        let mut new_index = vec![usize::MAX; vertices.len()];
        let mut verts = Vec::new();
        let mut triangles = Vec::new();
        for (fi, face) in faces.iter().enumerate() {
            let mut loop_: Vec<usize> = Vec::with_capacity(face.len());
            for &v in face {
                let r = remap[v];
                if new_index[r] == usize::MAX {
                    new_index[r] = verts.len();
                    verts.push(vertices[r]);
                }
                let idx = new_index[r];
                if loop_.last() != Some(&idx) {
                    loop_.push(idx);
                }
            }
            while loop_.len() > 1 && loop_.first() == loop_.last() {
                loop_.pop();
            }
            if loop_.len() < 3 {
                return Err(MeshError::DegenerateFace(fi));
            }
            triangulate_face(&verts, &loop_, fi, &mut triangles)?;
        }
        Self::from_triangles(verts, triangles)
    }

    /// Builds a polyhedron from an indexed triangle list without welding.
    pub fn from_triangles(vertices: Vec<Vec3>, mut triangles: Vec<[usize; 3]>) -> Result<Polyhedron, MeshError> {
        if triangles.is_empty() {
            return Err(MeshError::Empty);
        }
        for (ti, t) in triangles.iter().enumerate() {
            if let Some(&v) = t.iter().find(|&&v| v >= vertices.len()) {
                return Err(MeshError::BadIndex { face: ti, vertex: v });
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(MeshError::DegenerateFace(ti));
            }
        }
        let (_, edge_count) = triangle_adjacency(&triangles)?;
        if geom::mesh_volume(&vertices, &triangles) < 0.0 {
            for t in &mut triangles {
                t.swap(1, 2);
            }
        }
        // Flipping permutes corner order, so edge slots must be rebuilt.
        let (tri_adj, _) = triangle_adjacency(&triangles)?;
        let components = count_components(&tri_adj);
        let used: BTreeSet<usize> = triangles.iter().flatten().copied().collect();
        let mut poly = Polyhedron {
            vertices,
            triangles,
            tri_adj,
            facet_of: Vec::new(),
            facets: Vec::new(),
            edge_count,
            components,
        };
        if used.len() != poly.vertices.len() {
            // Unreferenced vertices do not belong to the surface.
            let mut map = vec![usize::MAX; poly.vertices.len()];
            let mut verts = Vec::with_capacity(used.len());
            for &v in &used {
                map[v] = verts.len();
                verts.push(poly.vertices[v]);
            }
            for t in &mut poly.triangles {
                for v in t.iter_mut() {
                    *v = map[*v];
                }
            }
            poly.vertices = verts;
        }
        let groups: Vec<usize> = (0..poly.triangles.len()).collect();
        poly.assign_facets(&groups)?;
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet(&self, id: usize) -> Result<&Facet, MeshError> {
        self.facets.get(id).ok_or(MeshError::UnknownFacet(id))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Edge count of the underlying triangulation.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Number of connected surface components (shells).
    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Facet containing triangle `t`.
    pub fn facet_of_triangle(&self, t: usize) -> usize {
        self.facet_of[t]
    }

    /// Total genus, `1 - (V - E + F) / 2` for a connected surface. For several
    /// shells the genera of the components are summed.
    pub fn genus(&self) -> usize {
        let chi = self.vertices.len() as i64 - self.edge_count as i64 + self.triangles.len() as i64;
        let g = self.components as i64 - chi / 2;
        g.max(0) as usize
    }

    /// Facets sharing at least one full edge with `f`.
    pub fn neighbors(&self, f: usize) -> &[usize] {
        &self.facets[f].neighbors
    }

    pub fn are_neighbors(&self, a: usize, b: usize) -> bool {
        self.facets[a].neighbors.binary_search(&b).is_ok()
    }

    pub fn facet_points(&self, f: usize) -> Vec<Vec3> {
        self.facets[f].boundary.iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn surface_area(&self) -> f64 {
        self.facets.iter().map(|f| f.area).sum()
    }

    pub fn volume(&self) -> f64 {
        geom::mesh_volume(&self.vertices, &self.triangles)
    }

    /// `Σ normal · area` over facets; vanishes for a closed surface.
    pub fn area_weighted_normal_sum(&self) -> Vec3 {
        let mut s = Vec3::ZERO;
        for f in &self.facets {
            s += f.normal * f.area;
        }
        s
    }

    /// The longest straight piece of boundary shared by facets `a` and `b`,
    /// oriented as it appears on the boundary loop of `a`.
    pub fn shared_edge(&self, a: usize, b: usize) -> Option<Segment> {
        let loop_ = &self.facets[a].boundary;
        let n = loop_.len();
        let shared: Vec<bool> = (0..n)
            .map(|i| self.edge_facet_across(loop_[i], loop_[(i + 1) % n], a) == Some(b))
            .collect();
        if !shared.iter().any(|&s| s) {
            return None;
        }
        // Start scanning right after a non-shared edge so that runs do not wrap.
        let start = (0..n).find(|&i| !shared[i]).map(|i| (i + 1) % n).unwrap_or(0);
        let mut best: Option<Segment> = None;
        let mut run_start: Option<usize> = None;
        for k in 0..=n {
            let i = (start + k) % n;
            let on = k < n && shared[i];
            match (on, run_start) {
                (true, None) => run_start = Some(i),
                (false, Some(s)) => {
                    let seg = Segment { a: self.vertices[loop_[s]], b: self.vertices[loop_[i]] };
                    if best.map_or(true, |b| seg.length() > b.length()) {
                        best = Some(seg);
                    }
                    run_start = None;
                }
                _ => {}
            }
        }
        if best.is_none() {
            // Every boundary edge is shared with `b`.
            best = Some(Segment { a: self.vertices[loop_[0]], b: self.vertices[loop_[n - 1]] });
        }
        best
    }

    /// Facet on the other side of directed boundary edge `(u, v)` of facet `f`.
    fn edge_facet_across(&self, u: usize, v: usize, f: usize) -> Option<usize> {
        for &t in &self.facets[f].triangles {
            let tri = self.triangles[t];
            for k in 0..3 {
                if tri[k] == u && tri[(k + 1) % 3] == v {
                    return Some(self.facet_of[self.tri_adj[t][k]]);
                }
            }
        }
        None
    }

    /// Merges edge-adjacent facets whose planes agree within `tol`. Idempotent.
    pub fn merge_coplanar_facets(&self, tol: MeshTolerance) -> Result<Polyhedron, MeshError> {
        let mut uf = UnionFind::new(self.facets.len());
        let sin_tol = libm::sin(tol.angle);
        for f in &self.facets {
            for &g in &f.neighbors {
                if g <= f.id {
                    continue;
                }
                if self.coplanar(f.id, g, sin_tol, tol.dist) {
                    uf.union(f.id, g);
                }
            }
        }
        let groups: Vec<usize> = (0..self.triangles.len()).map(|t| uf.find(self.facet_of[t])).collect();
        let mut merged = self.clone();
        merged.assign_facets(&groups)?;
        Ok(merged)
    }

    fn coplanar(&self, a: usize, b: usize, sin_tol: f64, dist: f64) -> bool {
        let (fa, fb) = (&self.facets[a], &self.facets[b]);
        if fa.normal.dot(fb.normal) <= 0.0 || fa.normal.cross(fb.normal).norm() > sin_tol {
            return false;
        }
        let off = |f: &Facet, g: &Facet| {
            g.boundary
                .iter()
                .all(|&v| libm::fabs(f.normal.dot(self.vertices[v]) - f.offset) <= dist)
        };
        off(fa, fb) && off(fb, fa)
    }

    /// Rebuilds the facet table from a triangle → group labelling.
    fn assign_facets(&mut self, groups: &[usize]) -> Result<(), MeshError> {
        let mut relabel = BTreeMap::new();
        let mut facet_of = Vec::with_capacity(groups.len());
        for &g in groups {
            let next = relabel.len();
            facet_of.push(*relabel.entry(g).or_insert(next));
        }
        let count = relabel.len();
        let mut tris_of: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (t, &f) in facet_of.iter().enumerate() {
            tris_of[f].push(t);
        }
        let mut facets = Vec::with_capacity(count);
        for (id, tris) in tris_of.into_iter().enumerate() {
            let mut area_vec = Vec3::ZERO;
            let mut area = 0.0;
            let mut weighted = Vec3::ZERO;
            let mut neighbors = BTreeSet::new();
            let mut next_of: BTreeMap<usize, usize> = BTreeMap::new();
            let mut boundary_edges = 0usize;
            for &t in &tris {
                let [a, b, c] = self.triangles[t];
                let (pa, pb, pc) = (self.vertices[a], self.vertices[b], self.vertices[c]);
                let n = (pb - pa).cross(pc - pa);
                area_vec += n;
                let ta = 0.5 * n.norm();
                area += ta;
                weighted += (pa + pb + pc) * (ta / 3.0);
                let tri = self.triangles[t];
                for k in 0..3 {
                    let other = facet_of[self.tri_adj[t][k]];
                    if other != id {
                        neighbors.insert(other);
                        boundary_edges += 1;
                        if next_of.insert(tri[k], tri[(k + 1) % 3]).is_some() {
                            return Err(MeshError::NonSimpleFacet(id));
                        }
                    }
                }
            }
            let &first = next_of.keys().next().ok_or(MeshError::NonSimpleFacet(id))?;
            let mut boundary = vec![first];
            let mut cur = next_of[&first];
            while cur != first {
                boundary.push(cur);
                cur = *next_of.get(&cur).ok_or(MeshError::NonSimpleFacet(id))?;
                if boundary.len() > boundary_edges {
                    return Err(MeshError::NonSimpleFacet(id));
                }
            }
            if boundary.len() != boundary_edges {
                return Err(MeshError::NonSimpleFacet(id));
            }
            let normal = area_vec.try_normalize(0.0).ok_or(MeshError::DegenerateFace(tris[0]))?;
            let centroid = if area > 0.0 { weighted / area } else { self.vertices[boundary[0]] };
            facets.push(Facet {
                id,
                normal,
                offset: normal.dot(centroid),
                area,
                boundary,
                neighbors: neighbors.into_iter().collect(),
                triangles: tris,
            });
        }
        self.facet_of = facet_of;
        self.facets = facets;
        Ok(())
    }
}

/// Maps each vertex to a representative within `dist` (the first one seen).
fn weld(vertices: &[Vec3], dist: f64) -> Vec<usize> {
    if dist <= 0.0 {
        // Exact duplicates only.
        let mut seen: BTreeMap<[u64; 3], usize> = BTreeMap::new();
        return vertices
            .iter()
            .enumerate()
            .map(|(i, p)| *seen.entry([p.x.to_bits(), p.y.to_bits(), p.z.to_bits()]).or_insert(i))
            .collect();
    }
    let cell = |x: f64| libm::floor(x / dist) as i64;
    let mut grid: BTreeMap<(i64, i64, i64), Vec<usize>> = BTreeMap::new();
    let mut remap = Vec::with_capacity(vertices.len());
    for (i, &p) in vertices.iter().enumerate() {
        let (cx, cy, cz) = (cell(p.x), cell(p.y), cell(p.z));
        let mut found = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(list) = grid.get(&(cx + dx, cy + dy, cz + dz)) {
                        if let Some(&r) = list.iter().find(|&&r| vertices[r].distance(p) <= dist) {
                            found = Some(r);
                            break 'search;
                        }
                    }
                }
            }
        }
        match found {
            Some(r) => remap.push(r),
            None => {
                grid.entry((cx, cy, cz)).or_default().push(i);
                remap.push(i);
            }
        }
    }
    remap
}

fn triangulate_face(
    verts: &[Vec3],
    loop_: &[usize],
    face: usize,
    out: &mut Vec<[usize; 3]>,
) -> Result<(), MeshError> {
    if loop_.len() == 3 {
        out.push([loop_[0], loop_[1], loop_[2]]);
        return Ok(());
    }
    let pts: Vec<Vec3> = loop_.iter().map(|&v| verts[v]).collect();
    let normal = geom::newell(&pts).try_normalize(0.0).ok_or(MeshError::DegenerateFace(face))?;
    let frame = PlaneFrame::new(pts[0], normal);
    let flat: Vec<[f64; 2]> = pts.iter().map(|&p| frame.project(p)).collect();
    let tris = geom::triangulate_2d(&flat).ok_or(MeshError::DegenerateFace(face))?;
    out.extend(tris.into_iter().map(|t| [loop_[t[0]], loop_[t[1]], loop_[t[2]]]));
    Ok(())
}

/// Per-triangle edge neighbors plus the undirected edge count. Every edge must
/// be used exactly once in each direction.
fn triangle_adjacency(triangles: &[[usize; 3]]) -> Result<(Vec<[usize; 3]>, usize), MeshError> {
    let mut directed: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    let mut undirected: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (t, tri) in triangles.iter().enumerate() {
        for k in 0..3 {
            let (u, v) = (tri[k], tri[(k + 1) % 3]);
            *undirected.entry((u.min(v), u.max(v))).or_insert(0) += 1;
            if directed.insert((u, v), (t, k)).is_some() {
                let uses = undirected[&(u.min(v), u.max(v))];
                return Err(if uses > 2 {
                    MeshError::NonManifoldEdge(u.min(v), u.max(v), uses)
                } else {
                    MeshError::InconsistentOrientation(u.min(v), u.max(v))
                });
            }
        }
    }
    for (&(u, v), &uses) in &undirected {
        match uses {
            1 => return Err(MeshError::OpenBoundary(u, v)),
            2 => {}
            n => return Err(MeshError::NonManifoldEdge(u, v, n)),
        }
    }
    let mut adj = vec![[usize::MAX; 3]; triangles.len()];
    for (&(u, v), &(t, k)) in &directed {
        match directed.get(&(v, u)) {
            Some(&(t2, _)) => adj[t][k] = t2,
            None => return Err(MeshError::InconsistentOrientation(u.min(v), u.max(v))),
        }
    }
    Ok((adj, undirected.len()))
}

fn count_components(adj: &[[usize; 3]]) -> usize {
    let mut uf = UnionFind::new(adj.len());
    for (t, a) in adj.iter().enumerate() {
        for &o in a {
            uf.union(t, o);
        }
    }
    (0..adj.len()).filter(|&t| uf.find(t) == t).count()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Links the larger root under the smaller so roots are deterministic.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn cube_counts_and_merge() {
        let cube = generators::cube(1.0);
        assert_eq!((cube.vertex_count(), cube.edge_count(), cube.triangle_count()), (8, 18, 12));
        assert_eq!(cube.facet_count(), 12);
        let merged = cube.merge_coplanar_facets(MeshTolerance::default()).unwrap();
        assert_eq!(merged.facet_count(), 6);
        assert_eq!(merged.genus(), 0);
        for f in merged.facets() {
            assert_eq!(f.neighbors.len(), 4);
            assert_eq!(f.boundary.len(), 4);
            assert!((f.area - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tetrahedron_neighbors_are_the_other_three() {
        let t = generators::tetrahedron(1.0).merge_coplanar_facets(MeshTolerance::default()).unwrap();
        assert_eq!(t.facet_count(), 4);
        for f in 0..4 {
            let expect: Vec<usize> = (0..4).filter(|&g| g != f).collect();
            assert_eq!(t.neighbors(f), &expect[..]);
        }
    }

    #[test]
    fn open_mesh_is_rejected() {
        let v = [Vec3::ZERO, Vec3::X, Vec3::Y, Vec3::Z];
        let faces = vec![vec![0, 2, 1], vec![0, 1, 3], vec![1, 2, 3]];
        assert!(matches!(
            Polyhedron::from_polygons(&v, &faces, MeshTolerance::default()),
            Err(MeshError::OpenBoundary(..))
        ));
    }

    #[test]
    fn inconsistent_orientation_is_rejected() {
        let v = [Vec3::ZERO, Vec3::X, Vec3::Y, Vec3::Z];
        let faces = vec![vec![0, 2, 1], vec![0, 1, 3], vec![1, 2, 3], vec![0, 2, 3]];
        assert!(matches!(
            Polyhedron::from_polygons(&v, &faces, MeshTolerance::default()),
            Err(MeshError::InconsistentOrientation(..))
        ));
    }

    #[test]
    fn inward_mesh_is_flipped() {
        let v = [Vec3::ZERO, Vec3::X, Vec3::Y, Vec3::Z];
        let faces = vec![vec![0, 1, 2], vec![0, 3, 1], vec![1, 3, 2], vec![0, 2, 3]];
        let p = Polyhedron::from_polygons(&v, &faces, MeshTolerance::default()).unwrap();
        assert!(p.volume() > 0.0);
        let c = geom::centroid(p.vertices());
        for f in p.facets() {
            assert!(f.normal.dot(p.vertices()[f.boundary[0]] - c) > 0.0);
        }
    }

    #[test]
    fn duplicate_vertices_are_welded() {
        // Each triangle gets private vertex copies, as in an STL file.
        let base = generators::tetrahedron(1.0);
        let mut verts = Vec::new();
        let mut faces = Vec::new();
        for t in base.triangles() {
            let i = verts.len();
            for &v in t {
                verts.push(base.vertices()[v] + Vec3::new(1e-9, 0.0, 0.0) * (i as f64));
            }
            faces.push(vec![i, i + 1, i + 2]);
        }
        let p = Polyhedron::from_polygons(&verts, &faces, MeshTolerance::default()).unwrap();
        assert_eq!(p.vertex_count(), 4);
    }

    #[test]
    fn shared_edge_of_cube_faces() {
        let cube = generators::cube(2.0).merge_coplanar_facets(MeshTolerance::default()).unwrap();
        let f = &cube.facets()[0];
        for &g in &f.neighbors {
            let e = cube.shared_edge(f.id, g).unwrap();
            assert!((e.length() - 2.0).abs() < 1e-12);
            assert!(cube.shared_edge(f.id, g).is_some());
        }
        let opposite = (0..6).find(|&g| g != f.id && !cube.are_neighbors(f.id, g)).unwrap();
        assert!(cube.shared_edge(f.id, opposite).is_none());
    }

    #[test]
    fn annular_facet_is_reported() {
        let ring = generators::square_torus(4.0, 2.0, 1.0);
        assert_eq!(ring.genus(), 1);
        assert!(matches!(
            ring.merge_coplanar_facets(MeshTolerance::default()),
            Err(MeshError::NonSimpleFacet(_))
        ));
    }
}
