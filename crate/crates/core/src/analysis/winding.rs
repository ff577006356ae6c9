use std::f64::consts::PI;

use crate::error::{ensure, Error, Result};
use crate::field::ComplexField2D;

pub const MIN_LOOP_SAMPLES: usize = 64;
/// Default amplitude floor on the loop, relative to the field's peak.
pub const DEFAULT_AMP_FLOOR: f64 = 1e-6;
/// Largest distance from an integer the raw circulation may have.
pub const INTEGER_SLACK: f64 = 0.05;

/// Phase circulation around a circle, in turns, before rounding.
///
/// The sign follows the `e^{-imθ}` convention of the helical mode: a field
/// whose phase decreases counter-clockwise by `2πm` yields `+m`.
pub fn circulation(
    field: &ComplexField2D,
    center: (f64, f64),
    loop_radius: f64,
    nsamples: usize,
    amp_floor: f64,
) -> Result<f64> {
    ensure(nsamples >= MIN_LOOP_SAMPLES, || {
        format!("need at least {MIN_LOOP_SAMPLES} loop samples, got {nsamples}")
    })?;
    ensure(loop_radius > 0.0 && loop_radius.is_finite(), || {
        format!("loop radius must be positive, got {loop_radius}")
    })?;
    let floor = amp_floor * field.max_amplitude();
    let mut phases = Vec::with_capacity(nsamples);
    for k in 0..nsamples {
        let theta = 2.0 * PI * k as f64 / nsamples as f64;
        let (x, y) = (
            center.0 + loop_radius * theta.cos(),
            center.1 + loop_radius * theta.sin(),
        );
        let v = field.interpolate(x, y).ok_or_else(|| {
            Error::Validation(format!("loop point ({x:e}, {y:e}) lies outside the grid"))
        })?;
        let amplitude = v.norm();
        // also rejects NaN
        if amplitude.partial_cmp(&floor) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::IndeterminatePhase {
                amplitude,
                floor,
                x,
                y,
            });
        }
        phases.push(v.arg());
    }
    let total: f64 = (0..nsamples)
        .map(|k| wrap_phase(phases[(k + 1) % nsamples] - phases[k]))
        .sum();
    Ok(-total / (2.0 * PI))
}

/// Integer winding number of the field around a circle about `center`.
pub fn winding_number(
    field: &ComplexField2D,
    center: (f64, f64),
    loop_radius: f64,
    nsamples: usize,
) -> Result<i32> {
    winding_number_with_floor(field, center, loop_radius, nsamples, DEFAULT_AMP_FLOOR)
}

pub fn winding_number_with_floor(
    field: &ComplexField2D,
    center: (f64, f64),
    loop_radius: f64,
    nsamples: usize,
    amp_floor: f64,
) -> Result<i32> {
    let c = circulation(field, center, loop_radius, nsamples, amp_floor)?;
    let n = c.round();
    if (c - n).abs() > INTEGER_SLACK {
        return Err(Error::Sampling { circulation: c });
    }
    Ok(n as i32)
}

/// Wraps a phase difference into `(-π, π]`.
fn wrap_phase(d: f64) -> f64 {
    let w = d - 2.0 * PI * (d / (2.0 * PI)).round();
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beams::{make_flat_hole_field, make_lg_field, FlatHoleSpec, LGModeSpec};
    use crate::field::GridSpec;
    use num_complex::Complex64;

    const W0: f64 = 670e-6;

    fn grid() -> GridSpec {
        GridSpec::square(256, W0 / 20.0).unwrap()
    }

    #[test]
    fn wrap_into_half_open_interval() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_phase(0.1) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn vortex_charges() {
        for m in 1..4 {
            let spec = LGModeSpec::new(m, W0, 1.0).unwrap();
            let f = make_lg_field(&spec, &grid()).unwrap();
            let n = winding_number(&f, (0.0, 0.0), W0 / 2f64.sqrt(), 128).unwrap();
            assert_eq!(n, m as i32);
        }
        // conjugate field winds the other way
        let f = make_lg_field(&LGModeSpec::new(2, W0, 1.0).unwrap(), &grid()).unwrap();
        assert_eq!(
            winding_number(&f.map(|v| v.conj()), (0.0, 0.0), W0, 128).unwrap(),
            -2
        );
    }

    #[test]
    fn flat_phase_has_no_charge() {
        let spec = FlatHoleSpec::new(W0, 335e-6, 1.0).unwrap();
        let f = make_flat_hole_field(&spec, &grid()).unwrap();
        assert_eq!(winding_number(&f, (0.0, 0.0), 500e-6, 64).unwrap(), 0);
    }

    #[test]
    fn loop_around_empty_center_is_indeterminate() {
        let spec = FlatHoleSpec::new(W0, 335e-6, 1.0).unwrap();
        let f = make_flat_hole_field(&spec, &grid()).unwrap();
        assert!(matches!(
            winding_number(&f, (0.0, 0.0), 100e-6, 64),
            Err(Error::IndeterminatePhase { .. })
        ));
    }

    #[test]
    fn bad_loops() {
        let f = ComplexField2D::constant(grid(), Complex64::new(1.0, 0.0));
        assert!(winding_number(&f, (0.0, 0.0), 1e-4, 63).is_err());
        assert!(winding_number(&f, (0.0, 0.0), 1.0, 64).is_err());
    }
}
