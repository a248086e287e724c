//! JSON reports and the benchmark table.

use serde::{Deserialize, Serialize};
use snapfix_core::synth::{Fixture, SynthStats};
use snapfix_core::{Polyhedron, QualityMetrics, Vec3};

pub const SCHEMA: &str = "snapfix-report/1";

/// The mesh columns of the benchmark table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshStats {
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub merged: usize,
    pub genus: usize,
}

impl MeshStats {
    pub fn of(triangulated: &Polyhedron, merged: &Polyhedron) -> Self {
        MeshStats {
            vertices: triangulated.vertex_count(),
            edges: triangulated.edge_count(),
            triangles: triangulated.triangle_count(),
            merged: merged.facet_count(),
            genus: merged.genus(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingerRecord {
    pub body: usize,
    pub tip: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub finger_count: usize,
    pub weight_proxy: f64,
    pub obscuration_proxy: f64,
}

impl From<QualityMetrics> for Metrics {
    fn from(q: QualityMetrics) -> Self {
        Metrics { finger_count: q.finger_count, weight_proxy: q.weight_proxy, obscuration_proxy: q.obscuration_proxy }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub palm: usize,
    pub fingers: Vec<FingerRecord>,
    pub metrics: Metrics,
    pub serving_direction: [f64; 3],
}

impl FixtureRecord {
    pub fn new(f: &Fixture, metrics: QualityMetrics, serving: Vec3) -> Self {
        FixtureRecord {
            palm: f.palm,
            fingers: f.fingers.iter().map(|g| FingerRecord { body: g.body, tip: g.tip }).collect(),
            metrics: metrics.into(),
            serving_direction: serving.to_array().map(|c| c + 0.0),
        }
    }
}

/// Validity-check calls per subphase (2, 3 and 4 fingers).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Subphases {
    pub palms_scanned: u64,
    pub two_finger_calls: u64,
    pub three_finger_calls: u64,
    pub four_finger_calls: u64,
}

impl From<&SynthStats> for Subphases {
    fn from(s: &SynthStats) -> Self {
        Subphases {
            palms_scanned: s.palms_scanned as u64,
            two_finger_calls: s.valid_calls[0],
            three_finger_calls: s.valid_calls[1],
            four_finger_calls: s.valid_calls[2],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolidRecord {
    pub path: Option<String>,
    pub parts: usize,
    pub triangles: usize,
    pub volume: f64,
    pub watertight: bool,
    pub max_overlap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub input: String,
    pub mesh: MeshStats,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub subphases: Option<Subphases>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fixture: Option<FixtureRecord>,
    /// Smallest number of fingers of a valid fixture, `null` when none exists.
    pub min_fingers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fixtures_at_min: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub solid: Option<SolidRecord>,
    pub wall_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &str, input: &str, mesh: MeshStats) -> Self {
        Report {
            schema: SCHEMA.to_string(),
            command: command.to_string(),
            input: input.to_string(),
            mesh,
            subphases: None,
            fixture: None,
            min_fingers: None,
            fixtures_at_min: None,
            solid: None,
            wall_ms: None,
        }
    }

    /// The report with timing fields cleared; identical inputs give
    /// identical output.
    pub fn without_timing(&self) -> Report {
        Report { wall_ms: None, ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// One row of the benchmark table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub name: String,
    pub mesh: MeshStats,
    pub min_fingers: Option<usize>,
    pub time_ms: f64,
    pub fixtures_at_min: u64,
}

const HEADER: [&str; 9] = ["name", "verts", "edges", "tris", "merged", "genus", "min_fingers", "time_ms", "fixts_min_fingers"];

impl BenchRow {
    fn cells(&self) -> [String; 9] {
        [
            self.name.clone(),
            self.mesh.vertices.to_string(),
            self.mesh.edges.to_string(),
            self.mesh.triangles.to_string(),
            self.mesh.merged.to_string(),
            self.mesh.genus.to_string(),
            self.min_fingers.map_or_else(|| "inf".to_string(), |k| k.to_string()),
            format!("{:.3}", self.time_ms),
            self.fixtures_at_min.to_string(),
        ]
    }
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut s = HEADER.join(",");
    s.push('\n');
    for r in rows {
        let cells = r.cells();
        let quoted: Vec<String> = cells
            .iter()
            .map(|c| if c.contains([',', '"']) { format!("\"{}\"", c.replace('"', "\"\"")) } else { c.clone() })
            .collect();
        s.push_str(&quoted.join(","));
        s.push('\n');
    }
    s
}

pub fn bench_table(rows: &[BenchRow]) -> String {
    let cells: Vec<[String; 9]> = rows.iter().map(BenchRow::cells).collect();
    let mut width = HEADER.map(str::len);
    for c in &cells {
        for (w, x) in width.iter_mut().zip(c) {
            *w = (*w).max(x.len());
        }
    }
    let line = |c: &[String]| {
        let mut s = format!("{:<w$}", c[0], w = width[0]);
        for (x, w) in c.iter().zip(&width).skip(1) {
            s.push_str(&format!("  {x:>w$}"));
        }
        s.push('\n');
        s
    };
    let mut s = line(&HEADER.map(String::from));
    for c in &cells {
        s.push_str(&line(c));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(name: &str, min: Option<usize>) -> BenchRow {
        BenchRow {
            name: name.into(),
            mesh: MeshStats { vertices: 8, edges: 18, triangles: 12, merged: 6, genus: 0 },
            min_fingers: min,
            time_ms: 1.5,
            fixtures_at_min: 216,
        }
    }

    #[test]
    fn csv_shape() {
        let s = bench_csv(&[row("cube", Some(3)), row("a,b", None)]);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "name,verts,edges,tris,merged,genus,min_fingers,time_ms,fixts_min_fingers");
        assert_eq!(lines[1], "cube,8,18,12,6,0,3,1.500,216");
        assert_eq!(lines[2], "\"a,b\",8,18,12,6,0,inf,1.500,216");
    }

    #[test]
    fn empty_table_has_header_only() {
        assert_eq!(bench_table(&[]).lines().count(), 1);
        assert_eq!(bench_csv(&[]).lines().count(), 1);
    }

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("synth", "builtin:cube", row("cube", None).mesh);
        r.min_fingers = Some(3);
        r.wall_ms = Some(2.0);
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.without_timing().to_json().contains("\"wall_ms\": null"));
        assert!(r.to_json().contains(SCHEMA));
    }
}
