//! Synthesis of one-piece snapping fixtures for closed polyhedral workpieces.
//!
//! A snapping fixture is a palm (an extrusion of one workpiece facet) plus up to
//! four fingers; each finger stretches over two facets: a body facet adjacent to
//! the palm and a fingertip facet adjacent to the body. The fixture holds the
//! workpiece when the blocking hemispheres of all contacted facets cover the unit
//! sphere, while those of the palm and bodies alone leave a serving direction.
//!
//! The crate is `no_std` with `alloc`. File formats, the CLI and parallel drivers
//! live in the `snapfix` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cover;
pub mod generators;
pub mod geom;
pub mod hull;
pub mod mesh;
pub mod solid;
pub mod synth;

pub use cover::{CoverTolerance, CoverWitness, Direction, Hemisphere, Semicircle};
pub use geom::Vec3;
pub use mesh::{Facet, MeshError, MeshTolerance, Polyhedron};
pub use solid::{ExtrusionParams, SolidMesh};
pub use synth::{Finger, Fixture, Objective, QualityMetrics, SynthError, SynthesisResult};
