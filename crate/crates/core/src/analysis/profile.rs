use std::f64::consts::PI;
use std::io::{Read, Write};

use crate::error::{ensure, Error, Result};
use crate::field::{fmt_f64, ComplexField2D};

/// Azimuthally averaged intensity in equal-width radial bins. Empty bins are
/// left out, so `bin_centers` need not be contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub bin_centers: Vec<f64>,
    pub intensity: Vec<f64>,
    pub counts: Vec<usize>,
    pub bin_width: f64,
}

impl RadialProfile {
    pub fn len(&self) -> usize {
        self.bin_centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bin_centers.is_empty()
    }

    /// `Σ intensity · 2πr · Δr`.
    pub fn total_intensity(&self) -> f64 {
        self.bin_centers
            .iter()
            .zip(&self.intensity)
            .map(|(r, i)| i * 2.0 * PI * r * self.bin_width)
            .sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        RadialProfile {
            intensity: self.intensity.iter().map(|i| i * factor).collect(),
            ..self.clone()
        }
    }

    /// Center of the brightest bin.
    pub fn peak_radius(&self) -> Option<f64> {
        self.intensity
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, _)| self.bin_centers[k])
    }

    pub fn peak_intensity(&self) -> f64 {
        self.intensity.iter().copied().fold(0.0, f64::max)
    }

    /// Same bin width and bin centers, up to round-off from a CSV trip.
    pub fn same_binning(&self, other: &Self) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        close(self.bin_width, other.bin_width)
            && self.len() == other.len()
            && self
                .bin_centers
                .iter()
                .zip(&other.bin_centers)
                .all(|(a, b)| close(*a, *b))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["r_m", "intensity", "count"])?;
        for ((r, i), c) in self
            .bin_centers
            .iter()
            .zip(&self.intensity)
            .zip(&self.counts)
        {
            w.write_record(&[fmt_f64(*r), fmt_f64(*i), c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a profile CSV. The bin width is recovered from the bin centers,
    /// which sit at `(k + 1/2)·Δr`; at least two adjacent bins must be present.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let headers = r.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["r_m", "intensity", "count"] {
            return Err(Error::Validation(
                "expected header r_m,intensity,count".into(),
            ));
        }
        let mut p = RadialProfile {
            bin_centers: Vec::new(),
            intensity: Vec::new(),
            counts: Vec::new(),
            bin_width: 0.0,
        };
        for record in r.records() {
            let record = record?;
            let bad = || Error::Validation(format!("bad profile row {record:?}"));
            let field = |k: usize| record.get(k).map(str::trim).ok_or_else(bad);
            p.bin_centers.push(field(0)?.parse().map_err(|_| bad())?);
            p.intensity.push(field(1)?.parse().map_err(|_| bad())?);
            p.counts.push(field(2)?.parse().map_err(|_| bad())?);
        }
        ensure(p.len() >= 2, || {
            "profile CSV needs at least two bins".into()
        })?;
        let spacing = p
            .bin_centers
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let k0 = (p.bin_centers[0] / spacing - 0.5).round();
        p.bin_width = p.bin_centers[0] / (k0 + 0.5);
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.intensity.len() == self.len() && self.counts.len() == self.len(),
            || "profile columns differ in length".into(),
        )?;
        ensure(self.bin_width > 0.0 && self.bin_width.is_finite(), || {
            "profile bin width must be positive".into()
        })?;
        ensure(self.bin_centers.windows(2).all(|w| w[1] > w[0]), || {
            "bin centers must be strictly increasing".into()
        })?;
        ensure(
            self.intensity.iter().all(|i| *i >= 0.0 && i.is_finite()),
            || "profile intensity must be finite and non-negative".into(),
        )?;
        ensure(self.counts.iter().all(|c| *c >= 1), || {
            "every bin needs a sample".into()
        })
    }
}

/// Minimum number of radial bins.
pub const MIN_BINS: usize = 8;

/// Azimuthal average of `|field|²` about `center` in `nbins` bins spanning
/// half the smaller grid extent.
pub fn radial_profile(
    field: &ComplexField2D,
    center: (f64, f64),
    nbins: usize,
) -> Result<RadialProfile> {
    ensure(nbins >= MIN_BINS, || {
        format!("need at least {MIN_BINS} bins, got {nbins}")
    })?;
    let r_max = field.grid().min_extent() / 2.0;
    profile_with_width(field, center, r_max / nbins as f64, nbins)
}

pub(crate) fn profile_with_width(
    field: &ComplexField2D,
    center: (f64, f64),
    bin_width: f64,
    nbins: usize,
) -> Result<RadialProfile> {
    let grid = field.grid();
    ensure(grid.contains(center.0, center.1), || {
        format!(
            "profile center ({:e}, {:e}) is outside the grid",
            center.0, center.1
        )
    })?;
    let r_max = bin_width * nbins as f64;
    ensure(r_max >= 4.0 * grid.pitch, || {
        "grid too small for a radial profile".into()
    })?;
    let mut sums = vec![0.0; nbins];
    let mut counts = vec![0usize; nbins];
    for (i, x, y) in grid.points() {
        let r = (x - center.0).hypot(y - center.1);
        let k = (r / bin_width) as usize;
        if k < nbins {
            sums[k] += field.values()[i].norm_sqr();
            counts[k] += 1;
        }
    }
    let mut p = RadialProfile {
        bin_centers: Vec::new(),
        intensity: Vec::new(),
        counts: Vec::new(),
        bin_width,
    };
    for k in 0..nbins {
        if counts[k] > 0 {
            p.bin_centers.push((k as f64 + 0.5) * bin_width);
            p.intensity.push(sums[k] / counts[k] as f64);
            p.counts.push(counts[k]);
        }
    }
    Ok(p)
}

/// Rescales every profile so its total intensity matches the first one's.
pub fn normalize_profiles(profiles: &[RadialProfile]) -> Result<Vec<RadialProfile>> {
    let first = profiles
        .first()
        .ok_or_else(|| Error::Validation("no profiles to normalize".into()))?;
    let target = first.total_intensity();
    let mut out = Vec::with_capacity(profiles.len());
    for p in profiles {
        if !p.same_binning(first) {
            return Err(Error::Config(
                "profiles do not share the same binning".into(),
            ));
        }
        let total = p.total_intensity();
        ensure(total > 0.0, || {
            "cannot normalize a profile with zero total intensity".into()
        })?;
        out.push(p.scaled(target / total));
    }
    Ok(out)
}
