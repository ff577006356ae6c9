//! The slow → store → diffuse → retrieve pipeline and its artifacts.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use log::{info, warn};
use serde::Serialize;
use vortex_core::analysis::winding::winding_number;
use vortex_core::{
    apply_decay, diffuse_spectral, fill_metric, make_flat_hole_field, make_lg_field,
    normalize_profiles, radial_profile, retrieve, scaling_factor, store, ComplexField2D,
    CouplingRatio, RadialProfile,
};

use crate::config::{Beam, ScenarioConfig};
use crate::error::{CliError, Result};
use crate::pgm;

/// Phase samples on the winding loop.
pub const WINDING_LOOP_SAMPLES: usize = 256;

/// How the slowing and storage intervals are diffused. Both give the same
/// field up to round-off; `Split` exists to check that end to end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiffusionSchedule {
    #[default]
    Combined,
    Split,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub winding: Option<i32>,
    pub fill_metric: Option<f64>,
    pub total_power_in: f64,
    pub total_power_out: f64,
    pub s_factor: f64,
}

/// Everything a scenario computes, before anything is written.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub generated: ComplexField2D,
    pub retrieved: ComplexField2D,
    pub profile: RadialProfile,
    pub summary: Summary,
}

#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub files: Vec<PathBuf>,
    pub summary: Summary,
}

pub fn simulate(config: &ScenarioConfig) -> Result<Simulation> {
    simulate_with(config, DiffusionSchedule::Combined)
}

pub fn simulate_with(config: &ScenarioConfig, schedule: DiffusionSchedule) -> Result<Simulation> {
    config.validate()?;
    let grid = config.grid.spec()?;
    let medium = config.medium.params()?;
    let coupling = CouplingRatio::new(config.coupling)?;
    let seq = &config.sequence;
    let beam = config.beam.spec()?;

    let generated = match beam {
        Beam::Lg(spec) => make_lg_field(&spec, &grid)?,
        Beam::Flat(spec) => make_flat_hole_field(&spec, &grid)?,
    };
    let mut coherence = store(&generated, coupling);
    coherence = match schedule {
        DiffusionSchedule::Combined => diffuse_spectral(&coherence, &medium, seq.diffusion_time())?,
        DiffusionSchedule::Split => {
            let slowed = diffuse_spectral(&coherence, &medium, seq.slowing_delay)?;
            diffuse_spectral(&slowed, &medium, seq.storage_time)?
        }
    };
    if medium.gamma > 0.0 && seq.decay_time() > 0.0 {
        coherence = apply_decay(&coherence, &medium, seq.decay_time())?;
    }
    let retrieved = retrieve(&coherence, coupling);

    let center = grid.origin;
    let profile = radial_profile(&retrieved, center, config.nbins)?;
    let w0 = config.beam.w0();
    let s = scaling_factor(w0, medium.d, seq.diffusion_time());

    let winding = if config.outputs.winding {
        let radius = s.diffused_waist(w0) / 2f64.sqrt();
        match winding_number(&retrieved, center, radius, WINDING_LOOP_SAMPLES) {
            Ok(n) => Some(n),
            Err(e) => {
                warn!("winding number unavailable: {e}");
                None
            }
        }
    } else {
        None
    };
    let fill = if config.outputs.fill_metric {
        match fill_metric(&retrieved, center) {
            Ok(v) => Some(v),
            Err(e) => {
                warn!("fill metric unavailable: {e}");
                None
            }
        }
    } else {
        None
    };

    let summary = Summary {
        winding,
        fill_metric: fill,
        total_power_in: generated.total_power(),
        total_power_out: retrieved.total_power(),
        s_factor: s.value(),
    };
    Ok(Simulation {
        generated,
        retrieved,
        profile,
        summary,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).map_err(|e| CliError::io(path, e))?,
    ))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_field(path: &Path, field: &ComplexField2D) -> Result<()> {
    field.write_csv(create(path)?).map_err(|e| match e {
        vortex_core::Error::Io(io) => CliError::io(path, io),
        other => other.into(),
    })
}

pub fn write_profile(path: &Path, profile: &RadialProfile) -> Result<()> {
    profile.write_csv(create(path)?).map_err(|e| match e {
        vortex_core::Error::Io(io) => CliError::io(path, io),
        other => other.into(),
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Runs one scenario and writes its artifacts into `out_dir`: `field.csv`,
/// `intensity.pgm`, `phase.pgm`, `profile.csv` as requested, and always
/// `summary.json`.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<ScenarioReport> {
    let sim = simulate(config)?;
    ensure_dir(out_dir)?;
    let mut files = Vec::new();
    let outputs = config.outputs;
    if outputs.field {
        let path = out_dir.join("field.csv");
        write_field(&path, &sim.retrieved)?;
        files.push(path);
    }
    if outputs.maps {
        let path = out_dir.join("intensity.pgm");
        pgm::write_intensity_map(create(&path)?, &sim.retrieved)
            .map_err(|e| CliError::io(&path, e))?;
        files.push(path);
        let path = out_dir.join("phase.pgm");
        pgm::write_phase_map(create(&path)?, &sim.retrieved).map_err(|e| CliError::io(&path, e))?;
        files.push(path);
    }
    if outputs.profiles {
        let path = out_dir.join("profile.csv");
        write_profile(&path, &sim.profile)?;
        files.push(path);
    }
    let path = out_dir.join("summary.json");
    write_json(&path, &sim.summary)?;
    files.push(path);
    info!("scenario written to {}", out_dir.display());
    Ok(ScenarioReport {
        files,
        summary: sim.summary,
    })
}

/// Storage sequences of the helical figure: off resonance (no slowing, no
/// storage), slowed only, then 30, 70 and 110 µs of storage.
pub fn helical_figure_set(base: &ScenarioConfig) -> Vec<ScenarioConfig> {
    figure_set(base, &[30e-6, 70e-6, 110e-6])
}

/// Same for the blocked Gaussian, with 10 and 30 µs of storage.
pub fn flat_figure_set(base: &ScenarioConfig) -> Vec<ScenarioConfig> {
    figure_set(base, &[10e-6, 30e-6])
}

fn figure_set(base: &ScenarioConfig, storage: &[f64]) -> Vec<ScenarioConfig> {
    let with = |slowing: f64, store: f64| {
        let mut c = base.clone();
        c.sequence.slowing_delay = slowing;
        c.sequence.storage_time = store;
        c
    };
    let slowing = base.sequence.slowing_delay;
    let mut set = vec![with(0.0, 0.0), with(slowing, 0.0)];
    set.extend(storage.iter().map(|&t| with(slowing, t)));
    set
}

/// File name of one figure profile, e.g. `lg_m1_slow050us_store110us.csv`.
pub fn figure_file_name(config: &ScenarioConfig) -> String {
    let us = |t: f64| (t * 1e6).round() as i64;
    format!(
        "{}_slow{:03}us_store{:03}us.csv",
        config.beam.tag(),
        us(config.sequence.slowing_delay),
        us(config.sequence.storage_time)
    )
}

/// Writes one normalized radial profile per config. Configs must share the
/// grid and binning; profiles are normalized within each beam.
pub fn emit_figure_data(configs: &[ScenarioConfig], out_dir: &Path) -> Result<Vec<PathBuf>> {
    let first = configs
        .first()
        .ok_or_else(|| CliError::Config("empty figure set".into()))?;
    for c in configs {
        if c.grid != first.grid || c.nbins != first.nbins {
            return Err(CliError::Config(
                "figure configs must share grid and nbins".into(),
            ));
        }
    }
    let mut names: Vec<String> = configs.iter().map(figure_file_name).collect();
    names.sort();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(CliError::Config(
            "figure set has duplicate storage sequences".into(),
        ));
    }

    let mut profiles = Vec::with_capacity(configs.len());
    for c in configs {
        let mut light = c.clone();
        light.outputs.winding = false;
        light.outputs.fill_metric = false;
        profiles.push(simulate(&light)?.profile);
    }

    // groups in order of first appearance
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, c) in configs.iter().enumerate() {
        match groups.iter_mut().find(|g| configs[g[0]].beam == c.beam) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }

    ensure_dir(out_dir)?;
    let mut files = vec![PathBuf::new(); configs.len()];
    for group in groups {
        let members: Vec<RadialProfile> = group.iter().map(|&i| profiles[i].clone()).collect();
        let normalized = normalize_profiles(&members)?;
        for (&i, p) in group.iter().zip(&normalized) {
            let path = out_dir.join(figure_file_name(&configs[i]));
            write_profile(&path, p)?;
            files[i] = path;
        }
    }
    Ok(files)
}
