//! Adaptive Simpson quadrature with interval bisection.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpsonConfig {
    /// Target error relative to the magnitude of the integral.
    pub rel_tol: f64,
    /// Maximum bisection depth below each initial panel.
    pub max_depth: u32,
}

impl Default for SimpsonConfig {
    fn default() -> Self {
        SimpsonConfig {
            rel_tol: 1e-8,
            max_depth: 40,
        }
    }
}

/// Integrates `f` over consecutive panels given by `breaks` (strictly
/// increasing, at least two points). Panels let callers put nodes near
/// features that a single five-point start could miss.
pub fn integrate_panels<F>(f: F, breaks: &[f64], config: SimpsonConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if breaks.len() < 2 {
        return Err(Error::Validation(
            "quadrature needs at least one panel".into(),
        ));
    }
    let panels: Vec<Panel> = breaks
        .windows(2)
        .map(|w| Panel::new(&f, w[0], w[1]))
        .collect();
    // the first-level estimate sets the absolute error budget
    let estimate: f64 = panels.iter().map(|p| p.whole.abs()).sum();
    let eps = config.rel_tol * estimate / panels.len() as f64;
    let mut total = 0.0;
    for p in &panels {
        total += adapt(&f, *p, eps, config.max_depth, config.max_depth)?;
    }
    Ok(total)
}

pub fn integrate<F>(f: F, a: f64, b: f64, config: SimpsonConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_panels(f, &[a, b], config)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Self {
        let (fa, fb) = (f(a), f(b));
        let fm = f(0.5 * (a + b));
        Panel {
            a,
            b,
            fa,
            fm,
            fb,
            whole: simpson(a, b, fa, fm, fb),
        }
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adapt<F: Fn(f64) -> f64>(f: &F, p: Panel, eps: f64, depth: u32, max_depth: u32) -> Result<f64> {
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(p.a, m, p.fa, flm, p.fm);
    let right = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    if delta.abs() <= 15.0 * eps {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 || !delta.is_finite() {
        return Err(Error::Quadrature {
            a: p.a,
            b: p.b,
            max_depth,
            error_estimate: delta.abs() / 15.0,
        });
    }
    let l = Panel {
        a: p.a,
        b: m,
        fa: p.fa,
        fm: flm,
        fb: p.fm,
        whole: left,
    };
    let r = Panel {
        a: m,
        b: p.b,
        fa: p.fm,
        fm: frm,
        fb: p.fb,
        whole: right,
    };
    Ok(adapt(f, l, 0.5 * eps, depth - 1, max_depth)?
        + adapt(f, r, 0.5 * eps, depth - 1, max_depth)?)
}
