//! Hyperbolic plane kernel: triangle trigonometry, pants seams and upper
//! half-plane isometries.

mod isometry;
mod trig;

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Real;

pub use isometry::{HolonomyTransform, IsometryKind};
pub use trig::{hyp_angle, pants_seam, triangle_area, HyperbolicTriangle};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HypError {
    #[error("degenerate hyperbolic triangle with sides ({0}, {1}, {2})", sides[0], sides[1], sides[2])]
    DegenerateTriangle { sides: [f64; 3] },
    #[error("invalid cuff length {0}")]
    InvalidCuff(f64),
    #[error("isometry with trace {0} is not hyperbolic")]
    NotHyperbolic(f64),
    #[error("geodesics are not ultraparallel")]
    NotUltraparallel,
}

impl HypError {
    pub(crate) fn degenerate<T: Real>(a: T, b: T, c: T) -> Self {
        Self::DegenerateTriangle { sides: [a.to_f64_lossy(), b.to_f64_lossy(), c.to_f64_lossy()] }
    }
}

/// Hyperbolic distance between two points of the upper half-plane.
pub fn distance<T: Real>(z: Complex<T>, w: Complex<T>) -> T {
    let num = (z - w).norm_sqr();
    (T::one() + num / (T::lit(2.0) * z.im * w.im)).acosh()
}

/// Common perpendicular between the imaginary axis and the geodesic with
/// real endpoints `p` and `q`: returns its length and the height of its foot
/// on the imaginary axis. The endpoints must lie strictly on one side of 0.
pub fn perpendicular_to_imaginary_axis<T: Real>(p: T, q: T) -> Result<(T, T), HypError> {
    if !(p * q > T::zero()) || !p.is_finite() || !q.is_finite() || p == q {
        return Err(HypError::NotUltraparallel);
    }
    let (p, q) = (p.abs(), q.abs());
    let len = ((p + q) / (q - p).abs()).acosh();
    Ok((len, (p * q).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_along_imaginary_axis() {
        let d = distance(Complex::new(0.0, 1.0), Complex::new(0.0, 2.0f64.exp()));
        assert!((d - 2.0).abs() < 1e-14);
    }

    #[test]
    fn perpendicular_to_semicircle() {
        // Semicircle over [1, 4]: foot at height 2, cosh d = 5/3.
        let (len, foot) = perpendicular_to_imaginary_axis(1.0f64, 4.0).unwrap();
        assert!((len.cosh() - 5.0 / 3.0).abs() < 1e-14);
        assert!((foot - 2.0).abs() < 1e-14);
        let (len2, foot2) = perpendicular_to_imaginary_axis(-4.0f64, -1.0).unwrap();
        assert_eq!((len, foot), (len2, foot2));
        // The foot is at the claimed distance from the semicircle's closest point.
        let closest = Complex::new(2.0 * 4.0 / 5.0, 2.0 * 3.0 / 5.0);
        assert!((distance(Complex::new(0.0, 2.0), closest) - len).abs() < 1e-12);
        assert!(perpendicular_to_imaginary_axis(-1.0f64, 2.0).is_err());
    }
}
