//! The operations behind the command-line subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use snapfix_core::synth;
use snapfix_core::{solid, Objective, Polyhedron};

use crate::config::RunConfig;
use crate::driver::Driver;
use crate::error::{Error, Result};
use crate::io::{self, MeshFormat};
use crate::report::{BenchRow, FixtureRecord, MeshStats, Report, SolidRecord, Subphases};

/// A workpiece as read and after coplanar merging.
pub struct Workpiece {
    pub name: String,
    pub triangulated: Polyhedron,
    pub merged: Polyhedron,
}

impl Workpiece {
    pub fn load(input: &Path, cfg: &RunConfig) -> Result<Self> {
        let tol = cfg.tolerances.mesh();
        let triangulated = io::load_mesh(input, cfg.format, tol)?;
        let merged = triangulated.merge_coplanar_facets(tol)?;
        Ok(Workpiece { name: input.display().to_string(), triangulated, merged })
    }

    pub fn stats(&self) -> MeshStats {
        MeshStats::of(&self.triangulated, &self.merged)
    }
}

fn input(cfg: &RunConfig) -> Result<&Path> {
    cfg.input.as_deref().ok_or_else(|| Error::Config("no input mesh given".into()))
}

fn write_json(cfg: &RunConfig, report: &Report) -> Result<()> {
    if let Some(path) = &cfg.json {
        std::fs::write(path, report.to_json()).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

pub fn check(cfg: &RunConfig) -> Result<Report> {
    let w = Workpiece::load(input(cfg)?, cfg)?;
    let report = Report::new("check", &w.name, w.stats());
    write_json(cfg, &report)?;
    Ok(report)
}

/// Finds a fixture with the fewest fingers (ranked by the configured
/// objective) and optionally writes its solid. `report.fixture` is `None`
/// when the workpiece admits no fixture.
pub fn synth(cfg: &RunConfig, driver: &Driver) -> Result<Report> {
    let w = Workpiece::load(input(cfg)?, cfg)?;
    let p = &w.merged;
    let tol = cfg.tolerances.cover();
    let params = cfg.params();
    let mut report = Report::new("synth", &w.name, w.stats());
    let start = Instant::now();
    let found = match Objective::from(cfg.objective) {
        Objective::Fingers => {
            let r = driver.synthesize(p, tol);
            report.subphases = Some(Subphases::from(&r.stats));
            r.fixture.zip(r.serving_direction.map(|d| d.vec()))
        }
        obj => match driver.best(p, obj, &params, tol)? {
            Some((f, _)) => {
                let d = synth::serving_direction(p, &f, tol)?.vec();
                Some((f, d))
            }
            None => None,
        },
    };
    report.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    if let Some((f, d)) = found {
        if f.finger_count() > cfg.max_fingers {
            write_json(cfg, &report)?;
            return Ok(report);
        }
        let q = synth::quality_of(p, &f, &params)?;
        report.min_fingers = Some(f.finger_count());
        report.fixture = Some(FixtureRecord::new(&f, q, d));
        if let Some(path) = &cfg.solid {
            report.solid = Some(write_solid(p, &f, cfg, path)?);
        }
    }
    write_json(cfg, &report)?;
    Ok(report)
}

fn write_solid(p: &Polyhedron, f: &synth::Fixture, cfg: &RunConfig, path: &Path) -> Result<SolidRecord> {
    let s = solid::build_fixture_solid(p, f, &cfg.params()).map_err(synth::SynthError::from)?;
    let format = MeshFormat::from_path(path).unwrap_or(MeshFormat::Stl);
    io::save_mesh(path, &s.mesh.vertices, &s.mesh.triangles, Some(format))?;
    Ok(SolidRecord {
        path: Some(path.display().to_string()),
        parts: s.parts.len(),
        triangles: s.mesh.triangles.len(),
        volume: s.mesh.volume(),
        watertight: s.mesh.is_watertight(),
        max_overlap: s.max_overlap,
    })
}

/// Counts fixtures at the minimal finger count. With `list`, every valid
/// fixture up to the configured finger limit is written as one line.
pub fn enumerate(cfg: &RunConfig, driver: &Driver, list: Option<&mut dyn Write>) -> Result<Report> {
    let w = Workpiece::load(input(cfg)?, cfg)?;
    let tol = cfg.tolerances.cover();
    let mut report = Report::new("enumerate", &w.name, w.stats());
    let start = Instant::now();
    let min = driver.minimal_count(&w.merged, cfg.max_fingers, tol);
    report.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    report.min_fingers = min.map(|m| m.0);
    report.fixtures_at_min = Some(min.map_or(0, |m| m.1));
    if let Some(out) = list {
        for f in synth::enumerate_fixtures(&w.merged, cfg.max_fingers, tol) {
            let fingers: Vec<String> = f.fingers.iter().map(|g| format!("{}:{}", g.body, g.tip)).collect();
            writeln!(out, "{} {}", f.palm, fingers.join(" "))?;
        }
    }
    write_json(cfg, &report)?;
    Ok(report)
}

/// One benchmark row: mesh columns, minimal finger count, synthesis time
/// and the fixture count at the minimum.
pub fn bench_one(input: &Path, cfg: &RunConfig, driver: &Driver) -> Result<BenchRow> {
    let w = Workpiece::load(input, cfg)?;
    let tol = cfg.tolerances.cover();
    let start = Instant::now();
    let r = driver.synthesize(&w.merged, tol);
    let time_ms = start.elapsed().as_secs_f64() * 1e3;
    let k = r.fixture.as_ref().map(|f| f.finger_count());
    let fixtures_at_min = k.and_then(|k| driver.minimal_count(&w.merged, k, tol)).map_or(0, |m| m.1);
    let name = input
        .to_str()
        .and_then(|s| s.strip_prefix("builtin:"))
        .map(str::to_string)
        .or_else(|| input.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_else(|| w.name.clone());
    Ok(BenchRow { name, mesh: w.stats(), min_fingers: k, time_ms, fixtures_at_min })
}

/// Mesh files in `dir` with a known extension, sorted by name.
pub fn corpus(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = e.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && MeshFormat::from_path(&path).is_some() {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

/// Benchmarks every input; failures are collected and the run continues.
pub fn bench(inputs: &[PathBuf], cfg: &RunConfig, driver: &Driver) -> (Vec<BenchRow>, Vec<(PathBuf, Error)>) {
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for path in inputs {
        match bench_one(path, cfg, driver) {
            Ok(r) => rows.push(r),
            Err(e) => errors.push((path.clone(), e)),
        }
    }
    (rows, errors)
}
