//! Probe to coherence mapping. With the pump phase fixed relative to the
//! probe, the ground-state coherence is the probe amplitude times `-g/Ω`, and
//! retrieval multiplies by `-Ω/g`. Only the ratio is ever represented.

use num_complex::Complex64;

use crate::error::{ensure, Result};
use crate::field::ComplexField2D;

/// The dimensionless ratio `g/Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingRatio(f64);

impl CouplingRatio {
    pub fn new(ratio: f64) -> Result<Self> {
        ensure(ratio > 0.0 && ratio.is_finite(), || {
            format!("coupling ratio must be positive and finite, got {ratio}")
        })?;
        Ok(CouplingRatio(ratio))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for CouplingRatio {
    fn default() -> Self {
        CouplingRatio(1.0)
    }
}

/// `ρ12 = (-g/Ω)·E`.
pub fn store(probe: &ComplexField2D, coupling: CouplingRatio) -> ComplexField2D {
    probe.scale(Complex64::new(-coupling.0, 0.0))
}

/// `E_ret = (-Ω/g)·ρ12`.
pub fn retrieve(coherence: &ComplexField2D, coupling: CouplingRatio) -> ComplexField2D {
    coherence.map(|v| -v / coupling.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GridSpec;
    use proptest::prelude::*;

    fn field() -> ComplexField2D {
        let g = GridSpec::square(8, 1.0).unwrap();
        ComplexField2D::from_fn(g, |x, y| Complex64::new(x - 0.3 * y, x * y + 1.0)).unwrap()
    }

    #[test]
    fn unit_ratio_negates() {
        let f = field();
        let c = CouplingRatio::default();
        assert_eq!(store(&f, c), f.scale(Complex64::new(-1.0, 0.0)));
        assert_eq!(retrieve(&f, c), f.scale(Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn ratio_scales() {
        let f = field();
        let half = store(&f, CouplingRatio::new(0.5).unwrap());
        let back = retrieve(&f, CouplingRatio::new(2.0).unwrap());
        for ((a, b), v) in half.values().iter().zip(back.values()).zip(f.values()) {
            assert_eq!(*a, -0.5 * v);
            assert_eq!(*b, -0.5 * v);
        }
    }

    #[test]
    fn invalid_ratio() {
        assert!(CouplingRatio::new(0.0).is_err());
        assert!(CouplingRatio::new(-1.0).is_err());
        assert!(CouplingRatio::new(f64::INFINITY).is_err());
    }

    proptest! {
        #[test]
        fn store_and_retrieve_are_inverse(ratio in 1e-6f64..1e6) {
            let f = field();
            let c = CouplingRatio::new(ratio).unwrap();
            let peak = f.max_amplitude();
            for (a, b) in retrieve(&store(&f, c), c).values().iter().zip(f.values()) {
                prop_assert!((a - b).norm() <= 4.0 * f64::EPSILON * peak);
            }
            for (a, b) in store(&retrieve(&f, c), c).values().iter().zip(f.values()) {
                prop_assert!((a - b).norm() <= 4.0 * f64::EPSILON * peak);
            }
        }
    }
}
