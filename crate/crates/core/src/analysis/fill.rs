//! How dark a dark-centered beam still is.
//!
//! The fill metric is the mean intensity inside a small probe disk at the
//! beam center divided by the brightest radial bin. On a grid the bins are
//! half a pitch wide, so the probe disk holds just the center sample; in the
//! continuum it becomes `I(0) / max_r I(r)`, which is what [`fill_time`]
//! tracks on the closed-form blocked-Gaussian solution.

use crate::analysis::profile::profile_with_width;
use crate::analytic::{center_value_flat, eval_flat_analytic, scaling_factor};
use crate::beams::FlatHoleSpec;
use crate::error::{ensure, Error, Result};
use crate::field::ComplexField2D;
use crate::transport::MediumParams;

/// Metric of the diffused `r0 = w0/2` blocked Gaussian at `t = 0.15·w0²/D`
/// (`s = 1.6`), where the hole is taken to be filled. Independent of `w0`,
/// `D` and power; computed once by high-accuracy quadrature.
pub const DEFAULT_FILL_THRESHOLD: f64 = 0.994_752_199_326_844_9;

/// Upper bound on the bisection bracket width returned by [`fill_time`].
pub const DEFAULT_FILL_TIME_TOLERANCE: f64 = 1e-10;

/// Radial bin width of the grid metric, in pitches.
const BIN_WIDTH_IN_PITCH: f64 = 0.5;

/// Grid fill metric about `center`.
pub fn fill_metric(field: &ComplexField2D, center: (f64, f64)) -> Result<f64> {
    ensure(field.max_intensity() > 0.0, || {
        "fill metric of an all-zero field".into()
    })?;
    let grid = field.grid();
    let width = BIN_WIDTH_IN_PITCH * grid.pitch;
    let nbins = ((grid.min_extent() / 2.0) / width).floor() as usize;
    let profile = profile_with_width(field, center, width, nbins)?;
    let peak = profile.peak_intensity();
    let core = if profile.bin_centers.first() == Some(&(0.5 * width)) {
        profile.intensity[0]
    } else {
        // center off-lattice by more than half a bin: interpolate instead
        field
            .interpolate(center.0, center.1)
            .map(|v| v.norm_sqr())
            .unwrap_or(0.0)
    };
    Ok(core / peak)
}

/// Continuum fill metric of the diffused blocked Gaussian, `I(0)/max_r I(r)`.
pub fn flat_fill_metric_analytic(
    spec: &FlatHoleSpec,
    medium: &MediumParams,
    t: f64,
) -> Result<f64> {
    let center = center_value_flat(spec, medium, t)?;
    if center == 0.0 {
        return Ok(0.0);
    }
    let amp = |r: f64| eval_flat_analytic(spec, medium, t, r);
    let s = scaling_factor(spec.w0, medium.d, t).value();
    let r_scan = spec.r0 + 2.0 * s.sqrt() * spec.w0;
    let n = 64;
    let radii: Vec<f64> = (0..=n).map(|k| r_scan * k as f64 / n as f64).collect();
    let mut values = Vec::with_capacity(radii.len());
    for &r in &radii {
        values.push(if r == 0.0 { center } else { amp(r)? });
    }
    let k = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .unwrap_or(0);
    let lo = radii[k.saturating_sub(1)];
    let hi = radii[(k + 1).min(n)];
    let (_, refined) = golden_max(amp, lo, hi, 1e-9 * r_scan)?;
    let peak = values[k].max(refined).max(center);
    Ok((center / peak).powi(2))
}

/// Golden-section maximization of a unimodal function on `[a, b]`.
fn golden_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc > fd { (c, fc) } else { (d, fd) })
}

/// Smallest diffusion time at which the continuum fill metric reaches
/// `threshold`, searched by bisection on `[0, w0²/D]`.
pub fn fill_time(spec: &FlatHoleSpec, medium: &MediumParams, threshold: f64) -> Result<f64> {
    fill_time_with_tolerance(spec, medium, threshold, DEFAULT_FILL_TIME_TOLERANCE)
}

pub fn fill_time_with_tolerance(
    spec: &FlatHoleSpec,
    medium: &MediumParams,
    threshold: f64,
    tol: f64,
) -> Result<f64> {
    spec.validate()?;
    medium.validate()?;
    ensure(threshold > 0.0 && threshold < 1.0, || {
        format!("fill threshold must lie in (0, 1), got {threshold}")
    })?;
    ensure(medium.d > 0.0, || "fill time needs D > 0".into())?;
    ensure(tol > 0.0, || "fill time tolerance must be positive".into())?;
    let t_max = spec.w0 * spec.w0 / medium.d;
    if flat_fill_metric_analytic(spec, medium, t_max)? < threshold {
        return Err(Error::NoCrossing { threshold, t_max });
    }
    let (mut lo, mut hi) = (0.0, t_max);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if flat_fill_metric_analytic(spec, medium, mid)? >= threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beams::{make_flat_hole_field, make_lg_field, LGModeSpec};
    use crate::field::GridSpec;

    const W0: f64 = 670e-6;
    const D: f64 = 1.1e-3;

    fn grid() -> GridSpec {
        GridSpec::square(256, W0 / 20.0).unwrap()
    }

    #[test]
    fn ideal_beams_are_dark() {
        let lg = make_lg_field(&LGModeSpec::new(1, W0, 1.0).unwrap(), &grid()).unwrap();
        assert!(fill_metric(&lg, (0.0, 0.0)).unwrap() <= 1e-3);
        let hole =
            make_flat_hole_field(&FlatHoleSpec::new(W0, 335e-6, 1.0).unwrap(), &grid()).unwrap();
        assert_eq!(fill_metric(&hole, (0.0, 0.0)).unwrap(), 0.0);
        assert!(fill_metric(&ComplexField2D::zeros(grid()), (0.0, 0.0)).is_err());
    }

    #[test]
    fn continuum_metric_limits() {
        let spec = FlatHoleSpec::new(W0, W0 / 2.0, 1.0).unwrap();
        let medium = MediumParams::diffusion_only(D).unwrap();
        assert_eq!(flat_fill_metric_analytic(&spec, &medium, 0.0).unwrap(), 0.0);
        let late = flat_fill_metric_analytic(&spec, &medium, W0 * W0 / D).unwrap();
        assert!(late > 1.0 - 1e-8 && late <= 1.0);
    }

    #[test]
    fn threshold_validation() {
        let spec = FlatHoleSpec::new(W0, W0 / 2.0, 1.0).unwrap();
        let medium = MediumParams::diffusion_only(D).unwrap();
        assert!(fill_time(&spec, &medium, 0.0).is_err());
        assert!(fill_time(&spec, &medium, 1.0).is_err());
        assert!(fill_time(&spec, &MediumParams::diffusion_only(0.0).unwrap(), 0.5).is_err());
    }

    #[test]
    fn unreachable_threshold() {
        // a stop far out in the wings fills slowly: by t = w0²/D the center
        // is still well below the ring
        let spec = FlatHoleSpec::new(W0, 2.5 * W0, 1.0).unwrap();
        let medium = MediumParams::diffusion_only(D).unwrap();
        assert!(matches!(
            fill_time(&spec, &medium, 0.999),
            Err(Error::NoCrossing { .. })
        ));
    }
}
