use std::path::PathBuf;

use snapfix_core::synth::SynthError;
use snapfix_core::MeshError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Stream(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid mesh: {0}")]
    Mesh(#[from] MeshError),
    #[error("cannot export an empty mesh")]
    EmptyMesh,
    #[error("unknown mesh format {0:?}")]
    UnknownFormat(String),
    #[error("unknown built-in solid {0:?}")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    /// Process exit code: 1 for I/O and usage problems, 2 for invalid meshes.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Mesh(_) | Error::UnknownBuiltin(_) | Error::Synth(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
