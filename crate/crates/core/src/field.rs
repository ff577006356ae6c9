//! Sampled complex fields on a uniform transverse grid.
//!
//! Samples sit at `x_i = origin_x + (i - nx/2) * pitch` (integer division),
//! so a grid with even `nx` has one sample exactly on the origin and one extra
//! column on the negative side. This is the natural layout for the periodic
//! spectral propagator and guarantees a sample at the beam axis.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{ensure, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    /// Sample spacing in meters, identical along both axes.
    pub pitch: f64,
    /// Physical coordinate of the grid center in meters.
    pub origin: (f64, f64),
}

impl GridSpec {
    pub const MIN_SAMPLES: usize = 8;

    pub fn new(nx: usize, ny: usize, pitch: f64) -> Result<Self> {
        Self::with_origin(nx, ny, pitch, (0.0, 0.0))
    }

    pub fn square(n: usize, pitch: f64) -> Result<Self> {
        Self::new(n, n, pitch)
    }

    pub fn with_origin(nx: usize, ny: usize, pitch: f64, origin: (f64, f64)) -> Result<Self> {
        let grid = GridSpec {
            nx,
            ny,
            pitch,
            origin,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.nx >= Self::MIN_SAMPLES && self.ny >= Self::MIN_SAMPLES,
            || format!("grid must be at least 8x8, got {}x{}", self.nx, self.ny),
        )?;
        ensure(self.pitch > 0.0 && self.pitch.is_finite(), || {
            format!("pitch must be positive and finite, got {}", self.pitch)
        })?;
        ensure(
            self.origin.0.is_finite() && self.origin.1.is_finite(),
            || "grid origin must be finite".to_string(),
        )?;
        ensure(
            self.extent_x().is_finite() && self.extent_y().is_finite(),
            || "grid extent overflows".to_string(),
        )
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn extent_x(&self) -> f64 {
        self.nx as f64 * self.pitch
    }

    pub fn extent_y(&self) -> f64 {
        self.ny as f64 * self.pitch
    }

    /// Smaller of the two physical extents.
    pub fn min_extent(&self) -> f64 {
        self.extent_x().min(self.extent_y())
    }

    pub fn x(&self, ix: usize) -> f64 {
        self.origin.0 + (ix as f64 - (self.nx / 2) as f64) * self.pitch
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.origin.1 + (iy as f64 - (self.ny / 2) as f64) * self.pitch
    }

    /// Row-major index, rows run along y.
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    /// Continuous (fractional) sample indices of a physical point.
    pub fn fractional_index(&self, x: f64, y: f64) -> (f64, f64) {
        (
            (x - self.origin.0) / self.pitch + (self.nx / 2) as f64,
            (y - self.origin.1) / self.pitch + (self.ny / 2) as f64,
        )
    }

    /// Whether a point lies inside the sampled rectangle (between the first
    /// and last sample centers).
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (fx, fy) = self.fractional_index(x, y);
        fx >= 0.0 && fy >= 0.0 && fx <= (self.nx - 1) as f64 && fy <= (self.ny - 1) as f64
    }

    /// Iterator over `(index, x, y)` in storage order.
    pub fn points(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        (0..self.ny).flat_map(move |iy| {
            let y = self.y(iy);
            (0..self.nx).map(move |ix| (self.index(ix, iy), self.x(ix), y))
        })
    }
}

/// A complex amplitude per grid sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField2D {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl ComplexField2D {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        grid.validate()?;
        ensure(values.len() == grid.len(), || {
            format!(
                "field has {} values, grid {}x{} needs {}",
                values.len(),
                grid.nx,
                grid.ny,
                grid.len()
            )
        })?;
        if let Some(i) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::Validation(format!(
                "non-finite field value at index {i}"
            )));
        }
        Ok(ComplexField2D { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        ComplexField2D {
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            grid,
        }
    }

    pub fn constant(grid: GridSpec, value: Complex64) -> Self {
        ComplexField2D {
            values: vec![value; grid.len()],
            grid,
        }
    }

    /// Samples `f(x, y)` at every grid point.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let values = grid.points().map(|(_, x, y)| f(x, y)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.values[self.grid.index(ix, iy)]
    }

    /// `Σ |v|² · pitch²`.
    pub fn total_power(&self) -> f64 {
        let da = self.grid.pitch * self.grid.pitch;
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * da
    }

    /// `Σ v · pitch²`, the zero-frequency content conserved by diffusion.
    pub fn mass(&self) -> Complex64 {
        let da = self.grid.pitch * self.grid.pitch;
        self.values.iter().sum::<Complex64>() * da
    }

    pub fn max_amplitude(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_intensity(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        self.map(|v| v * factor)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        ComplexField2D {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise `a·self + b·other`; grids must match.
    pub fn linear_combination(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::Config("fields live on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&u, &v)| a * u + b * v)
            .collect();
        Ok(ComplexField2D {
            grid: self.grid,
            values,
        })
    }

    /// Bilinear interpolation of the complex field at a physical point.
    /// Returns `None` outside the sampled rectangle.
    pub fn interpolate(&self, x: f64, y: f64) -> Option<Complex64> {
        if !self.grid.contains(x, y) {
            return None;
        }
        let (fx, fy) = self.grid.fractional_index(x, y);
        let ix = (fx.floor() as usize).min(self.grid.nx - 2);
        let iy = (fy.floor() as usize).min(self.grid.ny - 2);
        let tx = fx - ix as f64;
        let ty = fy - iy as f64;
        let v00 = self.at(ix, iy);
        let v10 = self.at(ix + 1, iy);
        let v01 = self.at(ix, iy + 1);
        let v11 = self.at(ix + 1, iy + 1);
        Some(
            v00 * ((1.0 - tx) * (1.0 - ty))
                + v10 * (tx * (1.0 - ty))
                + v01 * ((1.0 - tx) * ty)
                + v11 * (tx * ty),
        )
    }

    /// Intensity-weighted centroid, for fields whose center is not known a
    /// priori.
    pub fn intensity_centroid(&self) -> Result<(f64, f64)> {
        let mut total = 0.0;
        let (mut cx, mut cy) = (0.0, 0.0);
        for (i, x, y) in self.grid.points() {
            let w = self.values[i].norm_sqr();
            total += w;
            cx += w * x;
            cy += w * y;
        }
        if total <= 0.0 {
            return Err(Error::Validation("centroid of an all-zero field".into()));
        }
        Ok((cx / total, cy / total))
    }

    /// Writes the `x_m,y_m,re,im` CSV, one row per sample in storage order.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["x_m", "y_m", "re", "im"])?;
        for (i, x, y) in self.grid.points() {
            let v = self.values[i];
            w.write_record(&[fmt_f64(x), fmt_f64(y), fmt_f64(v.re), fmt_f64(v.im)])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a field CSV and reconstructs its grid from the coordinates.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let headers = r.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["x_m", "y_m", "re", "im"] {
            return Err(Error::Validation(format!(
                "expected header x_m,y_m,re,im, got {}",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut values = Vec::new();
        for record in r.records() {
            let record = record?;
            let parse = |k: usize| -> Result<f64> {
                record
                    .get(k)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::Validation(format!("bad number in row {record:?}")))
            };
            xs.push(parse(0)?);
            ys.push(parse(1)?);
            values.push(Complex64::new(parse(2)?, parse(3)?));
        }
        ensure(values.len() >= 2, || {
            "field CSV has fewer than two rows".into()
        })?;
        let nx = ys.iter().take_while(|&&y| y == ys[0]).count();
        ensure(nx >= 2 && values.len() % nx == 0, || {
            "field CSV rows do not form a rectangular grid".into()
        })?;
        let ny = values.len() / nx;
        let pitch = xs[1] - xs[0];
        let origin = (
            xs[0] + (nx / 2) as f64 * pitch,
            ys[0] + (ny / 2) as f64 * pitch,
        );
        let grid = GridSpec::with_origin(nx, ny, pitch, origin)?;
        let tol = 1e-6 * pitch;
        for (i, x, y) in grid.points() {
            if (xs[i] - x).abs() > tol || (ys[i] - y).abs() > tol {
                return Err(Error::Validation(format!(
                    "row {i} at ({}, {}) is off the uniform grid",
                    xs[i], ys[i]
                )));
            }
        }
        Self::new(grid, values)
    }
}

/// Decimal float with 17 significant digits, enough to round-trip an f64.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}
