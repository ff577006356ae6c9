//! Closed-form diffusion of the two stored beam shapes.
//!
//! With the unit-mass heat kernel, a Gaussian-family amplitude of waist `w0`
//! keeps its shape and grows to waist `sqrt(s)·w0`, where
//! `s(t) = (w0² + 4Dt)/w0²`. The helical mode therefore stays a rescaled
//! `LG_0^m` with the same `e^{-imθ}` winding, while the blocked Gaussian needs
//! a single radial integral:
//!
//! ```text
//! ρ(r,t) = (1/2Dt)·sqrt(2P/πw0²) ∫_{r0}^∞ r' exp(-(r² + s r'²)/4Dt) I_0(r r'/2Dt) dr'
//! ```
//!
//! At `r = 0` the integral is elementary, `(1/s)·sqrt(2P/πw0²)·exp(-s r0²/4Dt)`.
//! For `r0 = w0/2` the exponent is `-s/(4(s-1)) = -1/4 + 1/(4(1-s))`, so the
//! center value is `e^{-1/4}·exp[1/(4(1-s))]/s` in units of `sqrt(2P/πw0²)`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::beams::{lg_radial_amplitude, FlatHoleSpec, LGModeSpec};
use crate::error::{ensure, Result};
use crate::field::{ComplexField2D, GridSpec};
use crate::quadrature::{integrate_panels, SimpsonConfig};
use crate::special::bessel_i0_scaled;
use crate::transport::MediumParams;

/// Waist-squared growth ratio `s = (w0² + 4Dt)/w0²`, always `>= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ScalingFactor(f64);

impl ScalingFactor {
    pub fn value(self) -> f64 {
        self.0
    }

    /// `sqrt(s)·w0`.
    pub fn diffused_waist(self, w0: f64) -> f64 {
        self.0.sqrt() * w0
    }

    /// Diffusion time that produces this factor, `(s - 1)·w0²/(4D)`.
    pub fn time_for(self, w0: f64, d: f64) -> f64 {
        (self.0 - 1.0) * w0 * w0 / (4.0 * d)
    }
}

/// `s(t) = (w0² + 4Dt)/w0²`. Expects `w0 > 0`, `d >= 0`, `t >= 0`.
pub fn scaling_factor(w0: f64, d: f64, t: f64) -> ScalingFactor {
    ScalingFactor((w0 * w0 + 4.0 * d * t) / (w0 * w0))
}

/// The diffused helical mode `s^{-(m+1)/2}·A_m(r, sqrt(s)·w0)·e^{-imθ}`
/// (probe-scaled, coupling ratio 1).
pub fn eval_helical_analytic(
    spec: &LGModeSpec,
    medium: &MediumParams,
    t: f64,
    r: f64,
    theta: f64,
) -> Complex64 {
    let s = scaling_factor(spec.w0, medium.d, t).value();
    let a = s.powf(-0.5 * (spec.m as f64 + 1.0))
        * lg_radial_amplitude(spec.m, s.sqrt() * spec.w0, spec.power, r);
    if a == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(a, -(spec.m as f64) * theta)
}

/// Samples [`eval_helical_analytic`] on a grid, centered on the grid origin.
pub fn helical_analytic_field(
    spec: &LGModeSpec,
    medium: &MediumParams,
    t: f64,
    grid: &GridSpec,
) -> Result<ComplexField2D> {
    spec.validate()?;
    medium.validate()?;
    let (ox, oy) = grid.origin;
    ComplexField2D::from_fn(*grid, |x, y| {
        let (dx, dy) = (x - ox, y - oy);
        eval_helical_analytic(spec, medium, t, dx.hypot(dy), dy.atan2(dx))
    })
}

/// Quadrature settings for the blocked-Gaussian integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatQuadrature {
    /// The upper limit is `r0 + truncation·max(w0/√2, sqrt(4Dt))`, extended
    /// if needed to cover `truncation` widths past the integrand peak.
    pub truncation: f64,
    pub simpson: SimpsonConfig,
}

impl Default for FlatQuadrature {
    fn default() -> Self {
        FlatQuadrature {
            truncation: 12.0,
            simpson: SimpsonConfig::default(),
        }
    }
}

/// Amplitude of the diffused blocked Gaussian at radius `r`.
pub fn eval_flat_analytic(
    spec: &FlatHoleSpec,
    medium: &MediumParams,
    t: f64,
    r: f64,
) -> Result<f64> {
    eval_flat_analytic_with(spec, medium, t, r, &FlatQuadrature::default())
}

pub fn eval_flat_analytic_with(
    spec: &FlatHoleSpec,
    medium: &MediumParams,
    t: f64,
    r: f64,
    quad: &FlatQuadrature,
) -> Result<f64> {
    spec.validate()?;
    medium.validate()?;
    ensure(t >= 0.0 && t.is_finite(), || {
        format!("duration must be >= 0, got {t}")
    })?;
    ensure(r >= 0.0 && r.is_finite(), || {
        format!("radius must be >= 0, got {r}")
    })?;
    let q = 4.0 * medium.d * t;
    if q == 0.0 {
        return Ok(spec.amplitude_at_radius(r));
    }
    let w0 = spec.w0;
    let s = scaling_factor(w0, medium.d, t).value();
    let prefactor = 2.0 / q * (2.0 * spec.power / (PI * w0 * w0)).sqrt();

    // In r' the integrand is a Gaussian centered at r/s with 1/e half-width
    // sqrt(q/s), times r' and the slowly varying e^{-x}I_0(x).
    let peak = r / s;
    let width = (q / s).sqrt();
    let reach = quad.truncation * width;
    let upper = (spec.r0 + quad.truncation * (w0 / SQRT_2).max(q.sqrt())).max(peak + reach);
    let lower = spec.r0.max(peak - reach);
    if lower >= upper {
        return Ok(0.0);
    }

    let integrand = |rp: f64| {
        let gauss = (-((r - rp).powi(2) + (s - 1.0) * rp * rp) / q).exp();
        if gauss == 0.0 {
            return 0.0;
        }
        rp * gauss * bessel_i0_scaled(2.0 * r * rp / q)
    };

    let core_lo = lower.max(peak - reach);
    let core_hi = upper.min(peak + reach);
    let mut breaks = vec![lower];
    if core_hi > core_lo {
        let n = (((core_hi - core_lo) / width).ceil() as usize).clamp(4, 64);
        breaks.extend((0..=n).map(|k| core_lo + (core_hi - core_lo) * k as f64 / n as f64));
    } else {
        breaks.extend((1..16).map(|k| lower + (upper - lower) * k as f64 / 16.0));
    }
    breaks.push(upper);
    breaks.dedup_by(|a, b| *a <= *b);

    let integral = integrate_panels(integrand, &breaks, quad.simpson)?;
    Ok(prefactor * integral)
}

/// Exact `r = 0` value of the diffused blocked Gaussian,
/// `(1/s)·sqrt(2P/πw0²)·exp(-s r0²/4Dt)`. Zero at `t = 0` for any stop.
pub fn center_value_flat(spec: &FlatHoleSpec, medium: &MediumParams, t: f64) -> Result<f64> {
    spec.validate()?;
    medium.validate()?;
    ensure(t >= 0.0 && t.is_finite(), || {
        format!("duration must be >= 0, got {t}")
    })?;
    let q = 4.0 * medium.d * t;
    if q == 0.0 {
        return Ok(spec.amplitude_at_radius(0.0));
    }
    let s = scaling_factor(spec.w0, medium.d, t).value();
    let peak = (2.0 * spec.power / (PI * spec.w0 * spec.w0)).sqrt();
    Ok(peak / s * (-s * spec.r0 * spec.r0 / q).exp())
}

/// Scaling factor at which the center value peaks: the root of
/// `d/ds ln(value) = a/(s-1)² - 1/s` with `a = r0²/w0²`, i.e. the larger root
/// of `(s-1)² = a·s`.
pub fn center_value_peak_scaling(spec: &FlatHoleSpec) -> ScalingFactor {
    let a = (spec.r0 / spec.w0).powi(2);
    let b = 2.0 + a;
    ScalingFactor(0.5 * (b + (b * b - 4.0).sqrt()))
}
