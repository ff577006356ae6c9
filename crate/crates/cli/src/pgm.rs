//! 16-bit binary NetPBM (P5) maps of a field. The first row written is the
//! largest y, so the image is upright when viewed.

use std::f64::consts::PI;
use std::io::Write;

use vortex_core::ComplexField2D;

const MAXVAL: f64 = 65535.0;

fn write_p5<W: Write>(
    mut w: W,
    field: &ComplexField2D,
    sample: impl Fn(usize) -> u16,
) -> std::io::Result<()> {
    let grid = field.grid();
    write!(w, "P5\n{} {}\n65535\n", grid.nx, grid.ny)?;
    let mut row = Vec::with_capacity(2 * grid.nx);
    for iy in (0..grid.ny).rev() {
        row.clear();
        for ix in 0..grid.nx {
            row.extend_from_slice(&sample(grid.index(ix, iy)).to_be_bytes());
        }
        w.write_all(&row)?;
    }
    w.flush()
}

/// `|v|²` scaled so the brightest sample is 65535. An all-zero field gives
/// an all-zero map.
pub fn write_intensity_map<W: Write>(w: W, field: &ComplexField2D) -> std::io::Result<()> {
    let max = field.max_intensity();
    let values = field.values();
    write_p5(w, field, |i| {
        if max > 0.0 {
            (values[i].norm_sqr() / max * MAXVAL).round() as u16
        } else {
            0
        }
    })
}

/// Phase wrapped to `[0, 2π)` and mapped linearly onto `[0, 65535]`.
pub fn write_phase_map<W: Write>(w: W, field: &ComplexField2D) -> std::io::Result<()> {
    let values = field.values();
    write_p5(w, field, |i| phase_level(values[i].arg()))
}

fn phase_level(phase: f64) -> u16 {
    let wrapped = phase.rem_euclid(2.0 * PI);
    ((wrapped / (2.0 * PI) * (MAXVAL + 1.0)).floor()).min(MAXVAL) as u16
}

#[cfg(test)]
mod tests {
    use super::*;
    use vortex_core::{Complex64, GridSpec};

    #[test]
    fn header_and_orientation() {
        let grid = GridSpec::new(8, 9, 1.0).unwrap();
        let f = ComplexField2D::from_fn(grid, |_, y| {
            Complex64::new(if y > 3.0 { 1.0 } else { 0.0 }, 0.0)
        })
        .unwrap();
        let mut buf = Vec::new();
        write_intensity_map(&mut buf, &f).unwrap();
        let header = b"P5\n8 9\n65535\n";
        assert!(buf.starts_with(header));
        assert_eq!(buf.len(), header.len() + 8 * 9 * 2);
        // top row is y = 3·pitch... the largest y, which is lit
        assert_eq!(&buf[header.len()..header.len() + 2], &[0xff, 0xff]);
        assert_eq!(&buf[buf.len() - 2..], &[0, 0]);
    }

    #[test]
    fn phase_levels() {
        assert_eq!(phase_level(0.0), 0);
        assert_eq!(phase_level(PI), 32768);
        assert_eq!(phase_level(-PI), 32768);
        assert_eq!(phase_level(-1e-12), 65535);
        assert_eq!(phase_level(PI / 2.0), 16384);
    }

    #[test]
    fn zero_field_is_black() {
        let f = ComplexField2D::zeros(GridSpec::square(8, 1.0).unwrap());
        let mut buf = Vec::new();
        write_intensity_map(&mut buf, &f).unwrap();
        assert!(buf[13..].iter().all(|b| *b == 0));
    }
}
