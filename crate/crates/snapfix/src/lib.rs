//! Mesh file formats, reports, run configuration, palm-parallel drivers and
//! the commands behind the `snapfix` tool.

pub mod commands;
pub mod config;
pub mod driver;
pub mod error;
pub mod io;
pub mod report;

pub use config::RunConfig;
pub use driver::Driver;
pub use error::{Error, Result};
pub use io::{load_mesh, save_mesh, MeshFormat, RawMesh};
pub use report::{BenchRow, MeshStats, Report};
