use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::error;
use serde::Serialize;
use vortex_cli::config::{BeamConfig, GridConfig, ScenarioConfig};
use vortex_cli::{
    emit_figure_data, flat_figure_set, helical_figure_set, run_scenario, CliError, Result,
};
use vortex_core::analysis::fill::fill_time;
use vortex_core::{
    apply_decay, diffuse_direct, diffuse_spectral, fit_diffusion, make_flat_hole_field,
    make_lg_field, radial_profile, winding_number, ComplexField2D, FlatHoleSpec, LGModeSpec,
    MediumParams, RadialProfile, DEFAULT_FILL_THRESHOLD,
};

#[derive(Parser)]
#[command(
    name = "vortex",
    version,
    about = "Diffusion of stored optical vortices"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario JSON; its grid, beam and medium supply defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Samples per side of a square grid.
    #[arg(long, global = true)]
    grid_n: Option<usize>,
    /// Grid pitch in meters [default: w0/20].
    #[arg(long, global = true)]
    pitch: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a beam on the grid and write `field.csv`.
    Generate(BeamArgs),
    /// Diffuse (and optionally decay) a field CSV.
    Propagate {
        #[arg(long)]
        input: PathBuf,
        /// Diffusion coefficient, m²/s.
        #[arg(long)]
        d: f64,
        /// Duration, s.
        #[arg(long)]
        time: f64,
        /// Intensity decay rate, 1/s.
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, value_enum, default_value_t = Method::Spectral)]
        method: Method,
    },
    /// Azimuthally averaged intensity of a field CSV, written to `profile.csv`.
    Profile {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 64)]
        nbins: usize,
        /// Center on the intensity centroid instead of the grid origin.
        #[arg(long)]
        centroid: bool,
    },
    /// Print the winding number of a field CSV around a circle.
    Winding {
        #[arg(long)]
        input: PathBuf,
        /// Loop radius in meters.
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long)]
        centroid: bool,
    },
    /// Print the time for a blocked Gaussian's hole to fill.
    FillTime {
        #[arg(long)]
        w0: f64,
        #[arg(long)]
        r0: f64,
        #[arg(long)]
        d: f64,
        #[arg(long, default_value_t = DEFAULT_FILL_THRESHOLD)]
        threshold: f64,
    },
    /// Fit D to profile CSVs given as `TIME=PATH`.
    Fit {
        #[arg(long = "profile", required = true, value_parser = parse_timed_path)]
        profiles: Vec<(f64, PathBuf)>,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        w0: f64,
        #[arg(long, default_value_t = 1e-4)]
        d_lo: f64,
        #[arg(long, default_value_t = 1e-2)]
        d_hi: f64,
    },
    /// Run the full pipeline for `--config`.
    Scenario,
    /// Write the normalized figure profiles for both beams.
    Figures {
        /// Stop radius of the blocked beam, m [default: w0/2].
        #[arg(long)]
        r0: Option<f64>,
    },
}

#[derive(Args)]
struct BeamArgs {
    #[arg(long, value_enum)]
    beam: Option<BeamKind>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    w0: Option<f64>,
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long)]
    power: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BeamKind {
    Lg,
    Flat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Spectral,
    Direct,
}

fn parse_timed_path(s: &str) -> std::result::Result<(f64, PathBuf), String> {
    let (t, p) = s.split_once('=').ok_or("expected TIME=PATH")?;
    let t: f64 = t.parse().map_err(|_| format!("bad time {t:?}"))?;
    Ok((t, PathBuf::from(p)))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Base config: the file given by `--config`, or the standard helical scenario,
/// with `--grid-n` and `--pitch` applied on top.
fn base_config(common: &Common) -> Result<ScenarioConfig> {
    let mut c = match &common.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::standard_helical(0.0),
    };
    apply_grid_flags(common, &mut c);
    Ok(c)
}

fn apply_grid_flags(common: &Common, c: &mut ScenarioConfig) {
    if common.grid_n.is_some() || common.pitch.is_some() {
        let n = common.grid_n.unwrap_or(c.grid.nx);
        let pitch = common.pitch.unwrap_or_else(|| {
            if common.grid_n.is_some() && common.config.is_none() {
                c.beam.w0() / 20.0
            } else {
                c.grid.pitch
            }
        });
        c.grid = GridConfig {
            origin: c.grid.origin,
            ..GridConfig::square(n, pitch)
        };
    }
}

fn read_field(path: &Path) -> Result<ComplexField2D> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(ComplexField2D::read_csv(std::io::BufReader::new(file))?)
}

fn read_profile(path: &Path) -> Result<RadialProfile> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(RadialProfile::read_csv(std::io::BufReader::new(file))?)
}

fn out_file(dir: &Path, name: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    Ok(dir.join(name))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn center_of(field: &ComplexField2D, centroid: bool) -> Result<(f64, f64)> {
    Ok(if centroid {
        field.intensity_centroid()?
    } else {
        field.grid().origin
    })
}

fn run(cli: Cli) -> Result<()> {
    let common = &cli.common;
    match cli.command {
        Command::Generate(args) => {
            let mut c = base_config(common)?;
            let (m, r0, p) = match c.beam {
                BeamConfig::Lg { m, p, .. } => (m, c.beam.w0() / 2.0, p),
                BeamConfig::Flat { r0, p, .. } => (0, r0, p),
            };
            let w0 = args.w0.unwrap_or(c.beam.w0());
            let p = args.power.unwrap_or(p);
            let kind = args.beam.unwrap_or(match c.beam {
                BeamConfig::Lg { .. } => BeamKind::Lg,
                BeamConfig::Flat { .. } => BeamKind::Flat,
            });
            c.beam = match kind {
                BeamKind::Lg => BeamConfig::Lg {
                    m: args.m.unwrap_or(m),
                    w0,
                    p,
                },
                BeamKind::Flat => BeamConfig::Flat {
                    w0,
                    r0: args.r0.unwrap_or(r0),
                    p,
                },
            };
            if common.config.is_none() && common.pitch.is_none() {
                c.grid.pitch = w0 / 20.0;
            }
            let grid = c.grid.spec()?;
            let field = match c.beam {
                BeamConfig::Lg { m, w0, p } => make_lg_field(&LGModeSpec::new(m, w0, p)?, &grid)?,
                BeamConfig::Flat { w0, r0, p } => {
                    make_flat_hole_field(&FlatHoleSpec::new(w0, r0, p)?, &grid)?
                }
            };
            vortex_cli::scenario::write_field(&out_file(&common.out, "field.csv")?, &field)
        }
        Command::Propagate {
            input,
            d,
            time,
            gamma,
            method,
        } => {
            let field = read_field(&input)?;
            let medium = MediumParams::new(d, gamma)?;
            let mut out = match method {
                Method::Spectral => diffuse_spectral(&field, &medium, time)?,
                Method::Direct => diffuse_direct(&field, &medium, time)?,
            };
            if gamma > 0.0 {
                out = apply_decay(&out, &medium, time)?;
            }
            vortex_cli::scenario::write_field(&out_file(&common.out, "field.csv")?, &out)
        }
        Command::Profile {
            input,
            nbins,
            centroid,
        } => {
            let field = read_field(&input)?;
            let p = radial_profile(&field, center_of(&field, centroid)?, nbins)?;
            vortex_cli::scenario::write_profile(&out_file(&common.out, "profile.csv")?, &p)
        }
        Command::Winding {
            input,
            radius,
            samples,
            centroid,
        } => {
            let field = read_field(&input)?;
            let n = winding_number(&field, center_of(&field, centroid)?, radius, samples)?;
            println!("{n}");
            Ok(())
        }
        Command::FillTime {
            w0,
            r0,
            d,
            threshold,
        } => {
            let t = fill_time(
                &FlatHoleSpec::new(w0, r0, 1.0)?,
                &MediumParams::diffusion_only(d)?,
                threshold,
            )?;
            println!("{t:e}");
            Ok(())
        }
        Command::Fit {
            profiles,
            m,
            w0,
            d_lo,
            d_hi,
        } => {
            let data = profiles
                .iter()
                .map(|(t, path)| Ok((*t, read_profile(path)?)))
                .collect::<Result<Vec<_>>>()?;
            let fit = fit_diffusion(&data, &LGModeSpec::new(m, w0, 1.0)?, (d_lo, d_hi))?;
            #[derive(Serialize)]
            struct Out {
                d_hat: f64,
                residual: f64,
                iterations: usize,
            }
            print_json(&Out {
                d_hat: fit.d_hat,
                residual: fit.residual,
                iterations: fit.iterations,
            })
        }
        Command::Scenario => {
            if common.config.is_none() {
                return Err(CliError::Config("scenario needs --config".into()));
            }
            let c = base_config(common)?;
            let report = run_scenario(&c, &common.out)?;
            print_json(&report.summary)
        }
        Command::Figures { r0 } => {
            let helical = base_config(common)?;
            let w0 = helical.beam.w0();
            let mut flat = helical.clone();
            let p = match helical.beam {
                BeamConfig::Lg { p, .. } | BeamConfig::Flat { p, .. } => p,
            };
            flat.beam = BeamConfig::Flat {
                w0,
                r0: r0.unwrap_or(w0 / 2.0),
                p,
            };
            let mut lg = helical;
            if let BeamConfig::Flat { w0, p, .. } = lg.beam {
                lg.beam = BeamConfig::Lg { m: 1, w0, p };
            }
            let mut set = helical_figure_set(&lg);
            set.extend(flat_figure_set(&flat));
            for path in emit_figure_data(&set, &common.out)? {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}
