//! Orientation-preserving isometries of the upper half-plane as unit
//! determinant 2x2 matrices acting by fractional linear maps.

use num_complex::Complex;

use super::HypError;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsometryKind {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// `z -> (a z + b) / (c z + d)` with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolonomyTransform<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> HolonomyTransform<T> {
    /// Scales a matrix with positive determinant to determinant one.
    pub fn from_matrix(a: T, b: T, c: T, d: T) -> Option<Self> {
        let det = a * d - b * c;
        if !(det > T::zero()) || !det.is_finite() {
            return None;
        }
        let s = det.sqrt().recip();
        Some(Self { a: a * s, b: b * s, c: c * s, d: d * s })
    }

    pub fn identity() -> Self {
        Self { a: T::one(), b: T::zero(), c: T::zero(), d: T::one() }
    }

    /// Translation by hyperbolic distance `t` along the imaginary axis,
    /// upwards for `t > 0`.
    pub fn translation(t: T) -> Self {
        let h = (t * T::lit(0.5)).exp();
        Self { a: h, b: T::zero(), c: T::zero(), d: h.recip() }
    }

    /// Counter-clockwise rotation by `angle` about the point `i`.
    pub fn rotation(angle: T) -> Self {
        let (s, c) = (angle * T::lit(0.5)).sin_cos();
        Self { a: c, b: s, c: -s, d: c }
    }

    pub fn determinant(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> T {
        self.a + self.d
    }

    /// `self ∘ other`, renormalized to unit determinant.
    pub fn compose(&self, other: &Self) -> Self {
        let (a, b, c, d) = (
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        );
        Self::from_matrix(a, b, c, d).unwrap_or(Self { a, b, c, d })
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `g ∘ self ∘ g⁻¹`
    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.compose(self).compose(&g.inverse())
    }

    pub fn kind(&self) -> IsometryKind {
        let t = self.trace().abs();
        let two = T::lit(2.0);
        if t > two + T::trace_margin() {
            IsometryKind::Hyperbolic
        } else if t < two - T::trace_margin() {
            IsometryKind::Elliptic
        } else {
            IsometryKind::Parabolic
        }
    }

    pub fn apply(&self, z: Complex<T>) -> Complex<T> {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    /// `2 arccosh(|trace| / 2)`; fails unless the isometry is hyperbolic.
    pub fn translation_length(&self) -> Result<T, HypError> {
        if self.kind() != IsometryKind::Hyperbolic {
            return Err(HypError::NotHyperbolic(self.trace().to_f64_lossy()));
        }
        Ok(T::lit(2.0) * (self.trace().abs() * T::lit(0.5)).acosh())
    }

    /// Maximum entry-wise distance to `other` up to the sign ambiguity of
    /// PSL(2, R).
    pub fn distance_to(&self, other: &Self) -> T {
        let d = |s: T| {
            (self.a - s * other.a)
                .abs()
                .max((self.b - s * other.b).abs())
                .max((self.c - s * other.c).abs())
                .max((self.d - s * other.d).abs())
        };
        d(T::one()).min(d(-T::one()))
    }

    /// An isometry `N` with `N ∘ self ∘ N⁻¹` a translation along the
    /// imaginary axis pointing up: the repelling fixed point goes to 0 and
    /// the attracting one to infinity.
    pub fn axis_normalizer(&self) -> Result<Self, HypError> {
        let tr = self.trace();
        let disc = tr * tr - T::lit(4.0);
        if self.kind() != IsometryKind::Hyperbolic || !(disc > T::zero()) {
            return Err(HypError::NotHyperbolic(tr.to_f64_lossy()));
        }
        let root = disc.sqrt();
        let half = T::lit(0.5);
        // Eigenvalues with |lambda_att| > 1 > |lambda_rep|.
        let (l_att, l_rep) = if tr > T::zero() { ((tr + root) * half, (tr - root) * half) } else { ((tr - root) * half, (tr + root) * half) };
        let eigvec = |mu: T| -> (T, T) {
            // Either (b, mu - a) or (mu - d, c); take the better conditioned one.
            let v1 = (self.b, mu - self.a);
            let v2 = (mu - self.d, self.c);
            let n1 = v1.0.abs().max(v1.1.abs());
            let n2 = v2.0.abs().max(v2.1.abs());
            if n1 >= n2 {
                v1
            } else {
                v2
            }
        };
        let (xa, ya) = eigvec(l_att);
        let (mut xr, mut yr) = eigvec(l_rep);
        if xa * yr - xr * ya < T::zero() {
            xr = -xr;
            yr = -yr;
        }
        let p = Self::from_matrix(xa, xr, ya, yr).ok_or(HypError::NotHyperbolic(tr.to_f64_lossy()))?;
        Ok(p.inverse())
    }

    /// Endpoints of the axis in the closed real line; `None` stands for
    /// infinity. Returned as (repelling, attracting).
    pub fn fixed_points(&self) -> Result<(Option<T>, Option<T>), HypError> {
        let n = self.axis_normalizer()?;
        let p = n.inverse();
        let at = |x: T, y: T| if y == T::zero() { None } else { Some(x / y) };
        // P maps 0 -> b/d and infinity -> a/c.
        Ok((at(p.b, p.d), at(p.a, p.c)))
    }
}
