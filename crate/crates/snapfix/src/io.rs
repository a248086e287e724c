//! OFF, OBJ and STL readers and writers.
//!
//! Text formats are written with 17 significant digits so that coordinates
//! survive a round trip bit for bit.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use snapfix_core::{generators, MeshTolerance, Polyhedron, Vec3};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeshFormat {
    Off,
    Obj,
    /// Binary STL on output; binary or ASCII (detected) on input.
    Stl,
    StlAscii,
}

impl MeshFormat {
    pub fn from_path(path: &Path) -> Option<MeshFormat> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "off" => Some(MeshFormat::Off),
            "obj" => Some(MeshFormat::Obj),
            "stl" => Some(MeshFormat::Stl),
            _ => None,
        }
    }
}

impl FromStr for MeshFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(MeshFormat::Off),
            "obj" => Ok(MeshFormat::Obj),
            "stl" | "stl-binary" => Ok(MeshFormat::Stl),
            "stl-ascii" => Ok(MeshFormat::StlAscii),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

impl fmt::Display for MeshFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeshFormat::Off => "off",
            MeshFormat::Obj => "obj",
            MeshFormat::Stl => "stl",
            MeshFormat::StlAscii => "stl-ascii",
        })
    }
}

/// Vertices and polygonal faces as read, before welding and validation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawMesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<Vec<usize>>,
}

impl RawMesh {
    pub fn into_polyhedron(self, tol: MeshTolerance) -> Result<Polyhedron> {
        Ok(Polyhedron::from_polygons(&self.vertices, &self.faces, tol)?)
    }

    /// Signed volume of the faces, fanned from their first vertex.
    pub fn volume(&self) -> f64 {
        let mut tris = Vec::new();
        for f in &self.faces {
            for k in 1..f.len().saturating_sub(1) {
                tris.push([f[0], f[k], f[k + 1]]);
            }
        }
        snapfix_core::geom::mesh_volume(&self.vertices, &tris)
    }
}

pub fn parse_raw(bytes: &[u8], format: MeshFormat) -> Result<RawMesh> {
    match format {
        MeshFormat::Off => parse_off(text(bytes)?),
        MeshFormat::Obj => parse_obj(text(bytes)?),
        MeshFormat::Stl | MeshFormat::StlAscii => {
            if is_binary_stl(bytes) {
                parse_stl_binary(bytes)
            } else {
                parse_stl_ascii(text(bytes)?)
            }
        }
    }
}

pub fn parse_mesh(bytes: &[u8], format: MeshFormat, tol: MeshTolerance) -> Result<Polyhedron> {
    parse_raw(bytes, format)?.into_polyhedron(tol)
}

/// Reads a mesh file. `builtin:<name>` selects a generated canonical solid.
/// The format defaults to the file extension.
pub fn load_mesh(path: &Path, format: Option<MeshFormat>, tol: MeshTolerance) -> Result<Polyhedron> {
    if let Some(name) = path.to_str().and_then(|s| s.strip_prefix("builtin:")) {
        return generators::by_name(name).ok_or_else(|| Error::UnknownBuiltin(name.to_string()));
    }
    let format = format
        .or_else(|| MeshFormat::from_path(path))
        .ok_or_else(|| Error::UnknownFormat(path.display().to_string()))?;
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_mesh(&bytes, format, tol)
}

fn text(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| Error::parse(0, format!("not UTF-8 text: {e}")))
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn num<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| Error::parse(line, format!("bad {what} {tok:?}")))
}

fn parse_off(s: &str) -> Result<RawMesh> {
    let mut lines = content_lines(s);
    let (line, head) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    let mut toks: Vec<&str> = head.split_whitespace().collect();
    if toks.first().map(|t| t.ends_with("OFF")) != Some(true) {
        return Err(Error::parse(line, "missing OFF header"));
    }
    toks.remove(0);
    let mut line = line;
    if toks.is_empty() {
        let (l, counts) = lines.next().ok_or_else(|| Error::parse(line, "missing counts"))?;
        line = l;
        toks = counts.split_whitespace().collect();
    }
    let mut it = toks.into_iter();
    let nv: usize = num(it.next(), line, "vertex count")?;
    let nf: usize = num(it.next(), line, "face count")?;
    let mut m = RawMesh::default();
    for _ in 0..nv {
        let (l, v) = lines.next().ok_or_else(|| Error::parse(line, "unexpected end of vertices"))?;
        let mut t = v.split_whitespace();
        m.vertices.push(Vec3::new(num(t.next(), l, "x")?, num(t.next(), l, "y")?, num(t.next(), l, "z")?));
    }
    for _ in 0..nf {
        let (l, f) = lines.next().ok_or_else(|| Error::parse(line, "unexpected end of faces"))?;
        let mut t = f.split_whitespace();
        let n: usize = num(t.next(), l, "face size")?;
        let face = (0..n).map(|_| num(t.next(), l, "vertex index")).collect::<Result<Vec<usize>>>()?;
        if let Some(&bad) = face.iter().find(|&&v| v >= nv) {
            return Err(Error::parse(l, format!("vertex index {bad} out of range")));
        }
        m.faces.push(face);
    }
    Ok(m)
}

fn parse_obj(s: &str) -> Result<RawMesh> {
    let mut m = RawMesh::default();
    for (l, line) in content_lines(s) {
        let mut t = line.split_whitespace();
        match t.next() {
            Some("v") => {
                m.vertices.push(Vec3::new(num(t.next(), l, "x")?, num(t.next(), l, "y")?, num(t.next(), l, "z")?));
            }
            Some("f") => {
                let n = m.vertices.len() as i64;
                let face = t
                    .map(|tok| {
                        let i: i64 = num(tok.split('/').next(), l, "vertex index")?;
                        let idx = if i < 0 { n + i } else { i - 1 };
                        if idx < 0 || idx >= n {
                            return Err(Error::parse(l, format!("vertex index {i} out of range")));
                        }
                        Ok(idx as usize)
                    })
                    .collect::<Result<Vec<usize>>>()?;
                if face.len() < 3 {
                    return Err(Error::parse(l, "face with fewer than 3 vertices"));
                }
                m.faces.push(face);
            }
            _ => {}
        }
    }
    Ok(m)
}

fn is_binary_stl(bytes: &[u8]) -> bool {
    if bytes.len() < 84 {
        return false;
    }
    let n = u32::from_le_bytes([bytes[80], bytes[81], bytes[82], bytes[83]]) as usize;
    bytes.len() == 84 + 50 * n
}

fn parse_stl_binary(bytes: &[u8]) -> Result<RawMesh> {
    let n = u32::from_le_bytes([bytes[80], bytes[81], bytes[82], bytes[83]]) as usize;
    let f = |o: usize| f32::from_le_bytes([bytes[o], bytes[o + 1], bytes[o + 2], bytes[o + 3]]) as f64;
    let mut m = RawMesh::default();
    for t in 0..n {
        let base = 84 + 50 * t + 12;
        let mut face = Vec::with_capacity(3);
        for k in 0..3 {
            let o = base + 12 * k;
            face.push(m.vertices.len());
            m.vertices.push(Vec3::new(f(o), f(o + 4), f(o + 8)));
        }
        m.faces.push(face);
    }
    Ok(m)
}

fn parse_stl_ascii(s: &str) -> Result<RawMesh> {
    let mut m = RawMesh::default();
    let mut face = Vec::new();
    let mut saw_solid = false;
    for (l, line) in content_lines(s) {
        let mut t = line.split_whitespace();
        match t.next() {
            Some("solid") => saw_solid = true,
            Some("vertex") => {
                face.push(m.vertices.len());
                m.vertices.push(Vec3::new(num(t.next(), l, "x")?, num(t.next(), l, "y")?, num(t.next(), l, "z")?));
            }
            Some("endloop") => {
                if face.len() < 3 {
                    return Err(Error::parse(l, "loop with fewer than 3 vertices"));
                }
                m.faces.push(std::mem::take(&mut face));
            }
            Some("facet" | "outer" | "endfacet" | "endsolid") => {}
            Some(other) => return Err(Error::parse(l, format!("unexpected keyword {other:?}"))),
            None => {}
        }
    }
    if !saw_solid {
        return Err(Error::parse(1, "missing solid header"));
    }
    Ok(m)
}

/// Writes an indexed triangle mesh. Empty meshes are rejected.
pub fn write_mesh<W: Write>(w: &mut W, vertices: &[Vec3], triangles: &[[usize; 3]], format: MeshFormat) -> Result<()> {
    if triangles.is_empty() {
        return Err(Error::EmptyMesh);
    }
    match format {
        MeshFormat::Off => {
            writeln!(w, "OFF")?;
            writeln!(w, "{} {} 0", vertices.len(), triangles.len())?;
            for v in vertices {
                writeln!(w, "{:.16e} {:.16e} {:.16e}", v.x, v.y, v.z)?;
            }
            for t in triangles {
                writeln!(w, "3 {} {} {}", t[0], t[1], t[2])?;
            }
        }
        MeshFormat::Obj => {
            for v in vertices {
                writeln!(w, "v {:.16e} {:.16e} {:.16e}", v.x, v.y, v.z)?;
            }
            for t in triangles {
                writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
            }
        }
        MeshFormat::StlAscii => {
            writeln!(w, "solid snapfix")?;
            for t in triangles {
                let n = facet_normal(vertices, t);
                writeln!(w, "  facet normal {:.9e} {:.9e} {:.9e}", n.x, n.y, n.z)?;
                writeln!(w, "    outer loop")?;
                for &i in t {
                    let v = vertices[i];
                    writeln!(w, "      vertex {:.16e} {:.16e} {:.16e}", v.x, v.y, v.z)?;
                }
                writeln!(w, "    endloop")?;
                writeln!(w, "  endfacet")?;
            }
            writeln!(w, "endsolid snapfix")?;
        }
        MeshFormat::Stl => {
            let count = u32::try_from(triangles.len()).map_err(|_| Error::Config("too many triangles for STL".into()))?;
            let mut buf = Vec::with_capacity(84 + 50 * triangles.len());
            let mut header = [0u8; 80];
            header[..7].copy_from_slice(b"snapfix");
            buf.extend_from_slice(&header);
            buf.extend_from_slice(&count.to_le_bytes());
            for t in triangles {
                let n = facet_normal(vertices, t);
                for v in [n, vertices[t[0]], vertices[t[1]], vertices[t[2]]] {
                    for c in [v.x, v.y, v.z] {
                        buf.extend_from_slice(&(c as f32).to_le_bytes());
                    }
                }
                buf.extend_from_slice(&0u16.to_le_bytes());
            }
            w.write_all(&buf)?;
        }
    }
    Ok(())
}

fn facet_normal(vertices: &[Vec3], t: &[usize; 3]) -> Vec3 {
    let (a, b, c) = (vertices[t[0]], vertices[t[1]], vertices[t[2]]);
    (b - a).cross(c - a).try_normalize(0.0).unwrap_or_default()
}

pub fn save_mesh(path: &Path, vertices: &[Vec3], triangles: &[[usize; 3]], format: Option<MeshFormat>) -> Result<()> {
    let format = format
        .or_else(|| MeshFormat::from_path(path))
        .ok_or_else(|| Error::UnknownFormat(path.display().to_string()))?;
    let mut buf = Vec::new();
    write_mesh(&mut buf, vertices, triangles, format)?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube() -> Polyhedron {
        generators::cube(1.0)
    }

    fn bytes(p: &Polyhedron, f: MeshFormat) -> Vec<u8> {
        let mut b = Vec::new();
        write_mesh(&mut b, p.vertices(), p.triangles(), f).unwrap();
        b
    }

    #[test]
    fn off_cube_counts() {
        let src = "OFF\n8 6 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n0 0 1\n1 0 1\n1 1 1\n0 1 1\n\
                   4 0 3 2 1\n4 4 5 6 7\n4 0 1 5 4\n4 1 2 6 5\n4 2 3 7 6\n4 3 0 4 7\n";
        let p = parse_mesh(src.as_bytes(), MeshFormat::Off, MeshTolerance::default()).unwrap();
        assert_eq!((p.vertex_count(), p.edge_count(), p.triangle_count()), (8, 18, 12));
        assert!((p.volume() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tetra_counts() {
        let src = "OFF 4 4 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 1 2 3\n3 0 3 2\n";
        let p = parse_mesh(src.as_bytes(), MeshFormat::Off, MeshTolerance::default()).unwrap();
        assert_eq!((p.vertex_count(), p.edge_count(), p.triangle_count()), (4, 6, 4));
    }

    #[test]
    fn binary_stl_size() {
        let b = bytes(&cube(), MeshFormat::Stl);
        assert_eq!(b.len(), 684);
        assert_eq!(u32::from_le_bytes([b[80], b[81], b[82], b[83]]), 12);
        let p = parse_mesh(&b, MeshFormat::Stl, MeshTolerance::default()).unwrap();
        assert_eq!(p.vertex_count(), 8);
    }

    #[test]
    fn stl_with_hole_is_open() {
        let p = cube();
        let mut b = Vec::new();
        write_mesh(&mut b, p.vertices(), &p.triangles()[1..], MeshFormat::Stl).unwrap();
        let err = parse_mesh(&b, MeshFormat::Stl, MeshTolerance::default()).unwrap_err();
        assert!(matches!(err, Error::Mesh(snapfix_core::MeshError::OpenBoundary(..))), "{err}");
    }

    #[test]
    fn text_round_trips_are_exact() {
        let p = generators::dodecahedron(13.7);
        for f in [MeshFormat::Off, MeshFormat::Obj, MeshFormat::StlAscii] {
            let raw = parse_raw(&bytes(&p, f), f).unwrap();
            if f != MeshFormat::StlAscii {
                assert_eq!(raw.vertices, p.vertices());
            }
            let q = raw.into_polyhedron(MeshTolerance::default()).unwrap();
            assert_eq!(q.vertex_count(), p.vertex_count());
            assert_eq!(q.edge_count(), p.edge_count());
            assert!((q.volume() - p.volume()).abs() <= 1e-12 * p.volume());
        }
    }

    #[test]
    fn empty_mesh_rejected() {
        let mut b = Vec::new();
        assert!(matches!(write_mesh(&mut b, &[], &[], MeshFormat::Off), Err(Error::EmptyMesh)));
    }

    #[test]
    fn obj_negative_indices_and_slashes() {
        let src = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1/1 3/3 2/2\nf -4 -3 -1\nf 2 3 4\nf 1 4 3\n";
        let p = parse_mesh(src.as_bytes(), MeshFormat::Obj, MeshTolerance::default()).unwrap();
        assert_eq!(p.triangle_count(), 4);
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = parse_raw(b"OFF\n1 0 0\n0 0 zz\n", MeshFormat::Off).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn format_names() {
        assert_eq!("STL-ascii".parse::<MeshFormat>().unwrap(), MeshFormat::StlAscii);
        assert!("ply".parse::<MeshFormat>().is_err());
        assert_eq!(MeshFormat::from_path(Path::new("a/b.OFF")), Some(MeshFormat::Off));
    }
}
