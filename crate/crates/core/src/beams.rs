//! The two stored probe shapes: the helical Laguerre-Gauss mode `LG_0^m` and
//! a flat-phase Gaussian with a centered circular stop.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure, Error, Result};
use crate::field::{ComplexField2D, GridSpec};

/// Grids must span at least this many waists so truncated power is negligible.
pub const MIN_EXTENT_IN_WAISTS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LGModeSpec {
    /// Winding number.
    pub m: u32,
    /// Waist in meters.
    pub w0: f64,
    /// Total power, arbitrary unit.
    pub power: f64,
}

impl LGModeSpec {
    pub fn new(m: u32, w0: f64, power: f64) -> Result<Self> {
        let spec = LGModeSpec { m, w0, power };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.w0 > 0.0 && self.w0.is_finite(), || {
            format!("waist must be positive, got {}", self.w0)
        })?;
        ensure(self.power > 0.0 && self.power.is_finite(), || {
            format!("power must be positive, got {}", self.power)
        })
    }

    /// Ring radius of maximum intensity, `w0·sqrt(m/2)`.
    pub fn ring_radius(&self) -> f64 {
        self.w0 * (self.m as f64 / 2.0).sqrt()
    }

    /// Complex amplitude `A_m(r, w0)·e^{-imθ}` at a point relative to the
    /// beam axis.
    pub fn amplitude_at(&self, x: f64, y: f64) -> Complex64 {
        let r = x.hypot(y);
        let a = lg_radial_amplitude(self.m, self.w0, self.power, r);
        if a == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(a, -(self.m as f64) * y.atan2(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatHoleSpec {
    /// Waist of the underlying Gaussian, meters.
    pub w0: f64,
    /// Radius of the circular stop, meters.
    pub r0: f64,
    /// Power of the unblocked Gaussian, arbitrary unit.
    pub power: f64,
}

impl FlatHoleSpec {
    pub fn new(w0: f64, r0: f64, power: f64) -> Result<Self> {
        let spec = FlatHoleSpec { w0, r0, power };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.w0 > 0.0 && self.w0.is_finite(), || {
            format!("waist must be positive, got {}", self.w0)
        })?;
        ensure(self.power > 0.0 && self.power.is_finite(), || {
            format!("power must be positive, got {}", self.power)
        })?;
        ensure(self.r0 >= 0.0 && self.r0.is_finite(), || {
            format!("stop radius must be non-negative, got {}", self.r0)
        })
    }

    /// Whether a radius is behind the stop. The boundary ring `r == r0`
    /// counts as blocked; a zero-radius stop blocks nothing.
    pub fn is_blocked(&self, r: f64) -> bool {
        self.r0 > 0.0 && r <= self.r0
    }

    pub fn amplitude_at_radius(&self, r: f64) -> f64 {
        if self.is_blocked(r) {
            0.0
        } else {
            lg_radial_amplitude(0, self.w0, self.power, r)
        }
    }

    /// Power transmitted past the stop, `P·exp(-2 r0² / w0²)`.
    pub fn transmitted_power(&self) -> f64 {
        self.power * (-2.0 * self.r0 * self.r0 / (self.w0 * self.w0)).exp()
    }
}

/// `A_m(r, w) = (1/w)·sqrt(2P/(π m!))·(√2 r/w)^m·exp(-r²/w²)`.
pub fn lg_radial_amplitude(m: u32, w: f64, power: f64, r: f64) -> f64 {
    let factorial: f64 = (1..=m).map(f64::from).product();
    let rho = r / w;
    (2.0 * power / (PI * factorial)).sqrt() / w
        * (2f64.sqrt() * rho).powi(m as i32)
        * (-rho * rho).exp()
}

fn check_extent(grid: &GridSpec, w0: f64) -> Result<()> {
    if grid.min_extent() < MIN_EXTENT_IN_WAISTS * w0 {
        return Err(Error::Config(format!(
            "grid extent {:.3e} m is below {MIN_EXTENT_IN_WAISTS}·w0 = {:.3e} m",
            grid.min_extent(),
            MIN_EXTENT_IN_WAISTS * w0
        )));
    }
    Ok(())
}

/// Samples the helical mode at pixel centers, centered on the grid origin.
pub fn make_lg_field(spec: &LGModeSpec, grid: &GridSpec) -> Result<ComplexField2D> {
    spec.validate()?;
    grid.validate()?;
    check_extent(grid, spec.w0)?;
    sample_lg_field(spec, grid)
}

/// Like [`make_lg_field`] but without the extent guard, for small grids used
/// in periodic solver cross-checks where truncation does not matter.
pub fn sample_lg_field(spec: &LGModeSpec, grid: &GridSpec) -> Result<ComplexField2D> {
    spec.validate()?;
    let (ox, oy) = grid.origin;
    ComplexField2D::from_fn(*grid, |x, y| spec.amplitude_at(x - ox, y - oy))
}

/// Samples the blocked Gaussian: zero behind the stop, `A_0(r, w0)` outside,
/// real and non-negative everywhere.
pub fn make_flat_hole_field(spec: &FlatHoleSpec, grid: &GridSpec) -> Result<ComplexField2D> {
    spec.validate()?;
    grid.validate()?;
    check_extent(grid, spec.w0)?;
    ensure(spec.r0 < 3.0 * spec.w0, || {
        format!("stop radius {} must be below 3·w0", spec.r0)
    })?;
    ensure(spec.r0 < grid.min_extent() / 2.0, || {
        "stop radius exceeds the grid half-extent".into()
    })?;
    let (ox, oy) = grid.origin;
    ComplexField2D::from_fn(*grid, |x, y| {
        Complex64::new(spec.amplitude_at_radius((x - ox).hypot(y - oy)), 0.0)
    })
}
