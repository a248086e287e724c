//! Run configuration, readable from and writable to TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use snapfix_core::cover::CoverTolerance;
use snapfix_core::{ExtrusionParams, MeshTolerance, Objective};

use crate::error::{Error, Result};
use crate::io::MeshFormat;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Extrusion {
    pub alpha_p: f64,
    pub alpha_b: f64,
    pub alpha_t: f64,
    pub clearance: f64,
    pub body_shrink: f64,
    pub tip_width: f64,
    pub max_tip_width: Option<f64>,
}

impl Default for Extrusion {
    fn default() -> Self {
        ExtrusionParams::default().into()
    }
}

impl From<ExtrusionParams> for Extrusion {
    fn from(p: ExtrusionParams) -> Self {
        Extrusion {
            alpha_p: p.alpha_p,
            alpha_b: p.alpha_b,
            alpha_t: p.alpha_t,
            clearance: p.clearance,
            body_shrink: p.body_shrink,
            tip_width: p.tip_width,
            max_tip_width: p.max_tip_width,
        }
    }
}

impl From<&Extrusion> for ExtrusionParams {
    fn from(e: &Extrusion) -> Self {
        ExtrusionParams {
            alpha_p: e.alpha_p,
            alpha_b: e.alpha_b,
            alpha_t: e.alpha_t,
            clearance: e.clearance,
            body_shrink: e.body_shrink,
            tip_width: e.tip_width,
            max_tip_width: e.max_tip_width,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub angle_tol: f64,
    pub dist_tol: f64,
    pub eps_cover: f64,
    pub eps_anti: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let m = MeshTolerance::default();
        let c = CoverTolerance::default();
        Tolerances { angle_tol: m.angle, dist_tol: m.dist, eps_cover: c.cover, eps_anti: c.anti }
    }
}

impl Tolerances {
    pub fn mesh(&self) -> MeshTolerance {
        MeshTolerance { angle: self.angle_tol, dist: self.dist_tol }
    }

    pub fn cover(&self) -> CoverTolerance {
        CoverTolerance { cover: self.eps_cover, anti: self.eps_anti }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveName {
    #[default]
    Fingers,
    Weight,
    Obscuration,
}

impl From<ObjectiveName> for Objective {
    fn from(o: ObjectiveName) -> Self {
        match o {
            ObjectiveName::Fingers => Objective::Fingers,
            ObjectiveName::Weight => Objective::Weight,
            ObjectiveName::Obscuration => Objective::Obscuration,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub command: Option<String>,
    pub format: Option<MeshFormat>,
    pub extrusion: Extrusion,
    pub tolerances: Tolerances,
    pub objective: ObjectiveName,
    pub max_fingers: usize,
    pub solid: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    /// Worker threads; `None` lets the thread pool decide.
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: None,
            command: None,
            format: None,
            extrusion: Extrusion::default(),
            tolerances: Tolerances::default(),
            objective: ObjectiveName::default(),
            max_fingers: 4,
            solid: None,
            json: None,
            csv: None,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml(s: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=4).contains(&self.max_fingers) {
            return Err(Error::Config(format!("max_fingers must be 2, 3 or 4, got {}", self.max_fingers)));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        ExtrusionParams::from(&self.extrusion)
            .validate()
            .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn params(&self) -> ExtrusionParams {
        (&self.extrusion).into()
    }
}
