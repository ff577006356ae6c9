//! Scenario configuration as read from JSON. SI units throughout: meters,
//! seconds, m²/s, watts.

use std::path::Path;

use serde::{Deserialize, Serialize};
use vortex_core::{CouplingRatio, FlatHoleSpec, GridSpec, LGModeSpec, MediumParams};

use crate::error::{CliError, Result};

/// Delay accumulated while the pulse is slowed and compressed into the cell.
pub const DEFAULT_SLOWING_DELAY: f64 = 50e-6;
pub const DEFAULT_NBINS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    pub pitch: f64,
    #[serde(default)]
    pub origin: [f64; 2],
}

impl GridConfig {
    pub fn square(n: usize, pitch: f64) -> Self {
        GridConfig {
            nx: n,
            ny: n,
            pitch,
            origin: [0.0, 0.0],
        }
    }

    pub fn spec(&self) -> Result<GridSpec> {
        Ok(GridSpec::with_origin(
            self.nx,
            self.ny,
            self.pitch,
            (self.origin[0], self.origin[1]),
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BeamConfig {
    Lg { m: u32, w0: f64, p: f64 },
    Flat { w0: f64, r0: f64, p: f64 },
}

/// A validated beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beam {
    Lg(LGModeSpec),
    Flat(FlatHoleSpec),
}

impl BeamConfig {
    pub fn spec(&self) -> Result<Beam> {
        Ok(match *self {
            BeamConfig::Lg { m, w0, p } => Beam::Lg(LGModeSpec::new(m, w0, p)?),
            BeamConfig::Flat { w0, r0, p } => Beam::Flat(FlatHoleSpec::new(w0, r0, p)?),
        })
    }

    pub fn w0(&self) -> f64 {
        match *self {
            BeamConfig::Lg { w0, .. } | BeamConfig::Flat { w0, .. } => w0,
        }
    }

    /// Short tag used in output file names, e.g. `lg_m1` or `flat_r335um`.
    pub fn tag(&self) -> String {
        match *self {
            BeamConfig::Lg { m, .. } => format!("lg_m{m}"),
            BeamConfig::Flat { r0, .. } => format!("flat_r{}um", (r0 * 1e6).round() as i64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumConfig {
    pub d: f64,
    #[serde(default)]
    pub gamma: f64,
}

impl MediumConfig {
    pub fn params(&self) -> Result<MediumParams> {
        Ok(MediumParams::new(self.d, self.gamma)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StorageSequence {
    #[serde(default = "default_slowing_delay")]
    pub slowing_delay: f64,
    pub storage_time: f64,
    #[serde(default)]
    pub decay_during_slowing: bool,
}

fn default_slowing_delay() -> f64 {
    DEFAULT_SLOWING_DELAY
}

impl StorageSequence {
    pub fn new(slowing_delay: f64, storage_time: f64) -> Self {
        StorageSequence {
            slowing_delay,
            storage_time,
            decay_during_slowing: false,
        }
    }

    /// Total time the coherence diffuses.
    pub fn diffusion_time(&self) -> f64 {
        self.slowing_delay + self.storage_time
    }

    /// Time over which the stored coherence decays.
    pub fn decay_time(&self) -> f64 {
        if self.decay_during_slowing {
            self.diffusion_time()
        } else {
            self.storage_time
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("slowing_delay", self.slowing_delay),
            ("storage_time", self.storage_time),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default = "yes")]
    pub field: bool,
    #[serde(default = "yes")]
    pub maps: bool,
    #[serde(default = "yes")]
    pub profiles: bool,
    #[serde(default = "yes")]
    pub winding: bool,
    #[serde(default = "yes")]
    pub fill_metric: bool,
}

fn yes() -> bool {
    true
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            field: true,
            maps: true,
            profiles: true,
            winding: true,
            fill_metric: true,
        }
    }
}

impl Outputs {
    fn any(&self) -> bool {
        self.field || self.maps || self.profiles || self.winding || self.fill_metric
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub grid: GridConfig,
    pub beam: BeamConfig,
    pub medium: MediumConfig,
    pub sequence: StorageSequence,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default = "default_nbins")]
    pub nbins: usize,
    /// The ratio g/Ω of the store and retrieve mapping.
    #[serde(default = "default_coupling")]
    pub coupling: f64,
}

fn default_nbins() -> usize {
    DEFAULT_NBINS
}

fn default_coupling() -> f64 {
    1.0
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|source| CliError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.spec()?;
        self.beam.spec()?;
        self.medium.params()?;
        self.sequence.validate()?;
        CouplingRatio::new(self.coupling)?;
        if self.nbins < vortex_core::analysis::profile::MIN_BINS {
            return Err(CliError::Config(format!(
                "nbins must be at least {}, got {}",
                vortex_core::analysis::profile::MIN_BINS,
                self.nbins
            )));
        }
        if !self.outputs.any() {
            return Err(CliError::Config("no outputs requested".into()));
        }
        Ok(())
    }

    /// Standard helical scenario: LG m = 1, w0 = 670 µm, D = 11 cm²/s,
    /// 256² grid at w0/20.
    pub fn standard_helical(storage_time: f64) -> Self {
        let w0 = 670e-6;
        ScenarioConfig {
            grid: GridConfig::square(256, w0 / 20.0),
            beam: BeamConfig::Lg { m: 1, w0, p: 1.0 },
            medium: MediumConfig {
                d: 1.1e-3,
                gamma: 2e4,
            },
            sequence: StorageSequence::new(DEFAULT_SLOWING_DELAY, storage_time),
            outputs: Outputs::default(),
            nbins: DEFAULT_NBINS,
            coupling: 1.0,
        }
    }

    /// Standard blocked Gaussian with `r0 = w0/2`.
    pub fn standard_flat(storage_time: f64) -> Self {
        let w0 = 670e-6;
        ScenarioConfig {
            beam: BeamConfig::Flat {
                w0,
                r0: w0 / 2.0,
                p: 1.0,
            },
            ..Self::standard_helical(storage_time)
        }
    }
}
