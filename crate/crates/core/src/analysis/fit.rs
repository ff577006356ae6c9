//! Least-squares estimate of the diffusion coefficient from radial profiles
//! of a diffused helical mode.

use crate::analysis::profile::RadialProfile;
use crate::analytic::eval_helical_analytic;
use crate::beams::LGModeSpec;
use crate::error::{ensure, Error, Result};
use crate::transport::MediumParams;

/// Relative tolerance on `D` of the golden-section search.
pub const FIT_REL_TOL: f64 = 1e-4;

/// Sub-intervals of the Simpson average over each annular bin.
const BIN_SUBDIVISIONS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub d_hat: f64,
    /// Sum of squared intensity residuals at `d_hat`.
    pub residual: f64,
    pub iterations: usize,
}

/// Fits `D` to `(t, profile)` pairs. Each model profile is rescaled to the
/// measured total intensity, so the absolute power does not matter.
pub fn fit_diffusion(
    profiles: &[(f64, RadialProfile)],
    spec: &LGModeSpec,
    bracket: (f64, f64),
) -> Result<FitResult> {
    spec.validate()?;
    ensure(profiles.len() >= 2, || {
        format!("need at least two profiles, got {}", profiles.len())
    })?;
    let (lo, hi) = bracket;
    ensure(lo > 0.0 && hi > lo && hi.is_finite(), || {
        format!("bad diffusion bracket [{lo:e}, {hi:e}]")
    })?;
    for (t, p) in profiles {
        ensure(*t >= 0.0 && t.is_finite(), || {
            format!("bad profile time {t:e}")
        })?;
        p.validate()?;
        ensure(p.total_intensity() > 0.0, || {
            "profile has zero total intensity".into()
        })?;
    }

    let cost = |ln_d: f64| residual(profiles, spec, ln_d.exp());
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo.ln(), hi.ln());
    // ln-space width equals the relative tolerance on D
    let tol = FIT_REL_TOL;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (cost(c)?, cost(d)?);
    let mut iterations = 0;
    while b - a > tol {
        iterations += 1;
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = cost(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = cost(d)?;
        }
    }
    let (ln_best, best) = if fc < fd { (c, fc) } else { (d, fd) };
    let d_hat = ln_best.exp();
    let edge = 2.0 * tol;
    if ln_best - lo.ln() < edge || hi.ln() - ln_best < edge {
        return Err(Error::BracketEdge { d_hat, lo, hi });
    }
    Ok(FitResult {
        d_hat,
        residual: best,
        iterations,
    })
}

fn residual(profiles: &[(f64, RadialProfile)], spec: &LGModeSpec, d: f64) -> Result<f64> {
    let medium = MediumParams::diffusion_only(d)?;
    let mut sum = 0.0;
    for (t, measured) in profiles {
        let model = model_profile(spec, &medium, *t, measured);
        let model_total: f64 = weighted_total(measured, &model);
        let scale = measured.total_intensity() / model_total;
        sum += measured
            .intensity
            .iter()
            .zip(&model)
            .map(|(m, i)| (m - scale * i).powi(2))
            .sum::<f64>();
    }
    Ok(sum)
}

fn weighted_total(binning: &RadialProfile, intensity: &[f64]) -> f64 {
    binning
        .bin_centers
        .iter()
        .zip(intensity)
        .map(|(r, i)| i * 2.0 * std::f64::consts::PI * r * binning.bin_width)
        .sum()
}

/// Model intensity averaged over each annulus with area weighting.
fn model_profile(
    spec: &LGModeSpec,
    medium: &MediumParams,
    t: f64,
    binning: &RadialProfile,
) -> Vec<f64> {
    let half = binning.bin_width / 2.0;
    binning
        .bin_centers
        .iter()
        .map(|&rc| {
            let (a, b) = ((rc - half).max(0.0), rc + half);
            let h = (b - a) / BIN_SUBDIVISIONS as f64;
            let (mut num, mut den) = (0.0, 0.0);
            for k in 0..=BIN_SUBDIVISIONS {
                let r = a + k as f64 * h;
                let w = if k == 0 || k == BIN_SUBDIVISIONS {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                num += w * r * eval_helical_analytic(spec, medium, t, r, 0.0).norm_sqr();
                den += w * r;
            }
            num / den
        })
        .collect()
}
