//! Modified Bessel function of the first kind, order zero.
//!
//! Two branches: the ascending series `Σ (x²/4)^k / (k!)²` for `x <= 20`
//! (all terms positive, so no cancellation), and the Hankel asymptotic series
//! `e^x / sqrt(2πx) · Σ a_k / x^k` with `a_k = a_{k-1}·(2k-1)² / (8k)` above.
//! At the crossover the smallest asymptotic term is ~e^{-40}, so both
//! branches are accurate to a few ulp.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 20.0;

/// `I_0(x)` overflows f64 a little above this; callers must use
/// [`bessel_i0_scaled`] beyond it.
pub const I0_MAX_ARG: f64 = 700.0;

/// `I_0(x)` for `0 <= x <= 700`.
pub fn bessel_i0(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Range {
            x,
            reason: "I0 is evaluated for non-negative arguments only",
        });
    }
    if x > I0_MAX_ARG {
        return Err(Error::Range {
            x,
            reason: "I0 overflows; use bessel_i0_scaled",
        });
    }
    if x <= SERIES_LIMIT {
        Ok(ascending_series(x))
    } else {
        Ok(asymptotic_scaled(x) * x.exp())
    }
}

/// `e^{-x}·I_0(x)` for `x >= 0`; finite for every finite argument.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_LIMIT {
        ascending_series(x) * (-x).exp()
    } else {
        asymptotic_scaled(x)
    }
}

fn ascending_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > f64::EPSILON * 0.5 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

fn asymptotic_scaled(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        let next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        // stop at convergence or where the divergent tail starts growing
        if next < f64::EPSILON * 0.5 * sum || next >= term {
            break;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
    sum / (2.0 * PI * x).sqrt()
}
