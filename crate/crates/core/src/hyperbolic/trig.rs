//! Hyperbolic trigonometry of triangles and right-angled hexagons.

use super::HypError;
use crate::scalar::Real;

/// Interior angle opposite `opposite` in the hyperbolic triangle with side
/// lengths `(opposite, adjacent1, adjacent2)`.
///
/// Evaluated through the half-angle form of the cosine law, which stays
/// accurate for tiny triangles where `cosh a cosh b - cosh c` cancels.
pub fn hyp_angle<T: Real>(opposite: T, adjacent1: T, adjacent2: T) -> Result<T, HypError> {
    let (c, a, b) = (opposite, adjacent1, adjacent2);
    let positive = |x: T| x.is_finite() && x > T::zero();
    if !(positive(a) && positive(b) && positive(c)) {
        return Err(HypError::degenerate(c, a, b));
    }
    let two = T::lit(2.0);
    let denom = a.sinh() * b.sinh();
    // sin^2(theta/2) and cos^2(theta/2)
    let sin2 = ((c - a + b) / two).sinh() * ((c + a - b) / two).sinh() / denom;
    let cos2 = ((a + b + c) / two).sinh() * ((a + b - c) / two).sinh() / denom;
    let slack = T::clamp_tolerance() / two;
    if !(sin2 >= -slack && cos2 >= -slack) {
        return Err(HypError::degenerate(c, a, b));
    }
    let (s, k) = (sin2.max(T::zero()).sqrt(), cos2.max(T::zero()).sqrt());
    Ok(two * s.atan2(k))
}

/// Triangle with three hyperbolic side lengths; side `k` is opposite vertex `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicTriangle<T> {
    pub edge_lengths: [T; 3],
}

impl<T: Real> HyperbolicTriangle<T> {
    pub fn new(edge_lengths: [T; 3]) -> Result<Self, HypError> {
        let t = Self { edge_lengths };
        t.angles()?;
        Ok(t)
    }

    /// Interior angles; angle `k` is opposite side `k`.
    pub fn angles(&self) -> Result<[T; 3], HypError> {
        let [l0, l1, l2] = self.edge_lengths;
        Ok([hyp_angle(l0, l1, l2)?, hyp_angle(l1, l2, l0)?, hyp_angle(l2, l0, l1)?])
    }

    /// Area by angle defect, `pi - sum of angles`.
    pub fn area(&self) -> Result<T, HypError> {
        let [a, b, c] = self.angles()?;
        Ok(T::PI() - a - b - c)
    }

    /// `d[i][j] = d angle_i / d length_j` for the triangle at its current
    /// lengths: `d angle_i / d l_i = sinh l_i / A` and, for `j != i`,
    /// `d angle_i / d l_j = -sinh l_i cos(angle_k) / A`, where `k` is the third
    /// index and `A = sinh l_j sinh l_k sin(angle_i)`.
    pub fn angle_derivatives(&self) -> Result<[[T; 3]; 3], HypError> {
        let l = self.edge_lengths;
        let th = self.angles()?;
        let mut d = [[T::zero(); 3]; 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let area_term = l[j].sinh() * l[k].sinh() * th[i].sin();
            if !(area_term > T::zero()) {
                return Err(HypError::degenerate(l[0], l[1], l[2]));
            }
            let base = l[i].sinh() / area_term;
            d[i][i] = base;
            d[i][j] = -base * th[k].cos();
            d[i][k] = -base * th[j].cos();
        }
        Ok(d)
    }
}

/// Convenience wrapper for [`HyperbolicTriangle::area`].
pub fn triangle_area<T: Real>(t: &HyperbolicTriangle<T>) -> Result<T, HypError> {
    t.area()
}

/// Length of the seam (common perpendicular) between cuffs `i` and `j` of the
/// hyperbolic pair of pants with cuff lengths `(l_i, l_j, l_k)`:
///
/// `cosh s_ij = (cosh(l_k/2) + cosh(l_i/2) cosh(l_j/2)) / (sinh(l_i/2) sinh(l_j/2))`
pub fn pants_seam<T: Real>(l_i: T, l_j: T, l_k: T) -> Result<T, HypError> {
    for l in [l_i, l_j, l_k] {
        if !(l.is_finite() && l > T::zero()) {
            return Err(HypError::InvalidCuff(l.to_f64_lossy()));
        }
    }
    let h = T::lit(0.5);
    let (a, b, c) = (l_i * h, l_j * h, l_k * h);
    let arg = (c.cosh() + a.cosh() * b.cosh()) / (a.sinh() * b.sinh());
    Ok(arg.max(T::one()).acosh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Reference values evaluated with mpmath at 50 digits.
    const EQUILATERAL_1_ANGLE: f64 = 0.918_797_872_178_027_369_036_733_054_549_0;
    const EQUILATERAL_1_AREA: f64 = 0.385_199_037_055_711_131_352_444_219_632_4;
    const SEAM_2_2_2: f64 = 1.704_912_832_358_013_691_204_161_848_912_9;
    const SEAM_2_2_LIMIT: f64 = 1.543_873_665_810_609_450_141_278_280_070_4;
    const SEAM_1_2_3: f64 = 2.587_022_785_382_335_759_497_402_055_747_0;
    const ANGLE_OPP_1_2_OF_0_7_0_9: f64 = 1.586_065_921_524_221_151_663_252_697_596_3;

    #[test]
    fn equilateral_unit_triangle() {
        let t = HyperbolicTriangle::new([1.0f64; 3]).unwrap();
        let a = t.angles().unwrap();
        assert!((a[0] - EQUILATERAL_1_ANGLE).abs() < 1e-15);
        assert_eq!(a[0], a[1]);
        assert_eq!(a[1], a[2]);
        assert!((t.area().unwrap() - EQUILATERAL_1_AREA).abs() < 1e-14);
    }

    #[test]
    fn scalene_angle() {
        let th = hyp_angle(1.2f64, 0.7, 0.9).unwrap();
        assert!((th - ANGLE_OPP_1_2_OF_0_7_0_9).abs() < 1e-14);
    }

    #[test]
    fn tiny_equilateral_approaches_sixty_degrees_from_below() {
        let mut prev = 0.0;
        for k in 1..8 {
            let eps = 10f64.powi(-k);
            let th = hyp_angle(eps, eps, eps).unwrap();
            assert!(th < std::f64::consts::FRAC_PI_3);
            assert!(th > prev);
            prev = th;
            let area = HyperbolicTriangle::new([eps; 3]).unwrap().area().unwrap();
            assert!(area > 0.0 && area < eps * eps);
        }
        assert!((prev - std::f64::consts::FRAC_PI_3).abs() < 1e-12);
    }

    #[test]
    fn violated_triangle_inequality_is_degenerate() {
        assert!(matches!(hyp_angle(10.0f64, 1.0, 1.0), Err(HypError::DegenerateTriangle { .. })));
        assert!(matches!(hyp_angle(1.0f64, 10.0, 1.0), Err(HypError::DegenerateTriangle { .. })));
        assert!(matches!(hyp_angle(0.0f64, 1.0, 1.0), Err(HypError::DegenerateTriangle { .. })));
        assert!(HyperbolicTriangle::new([10.0f64, 1.0, 1.0]).is_err());
    }

    #[test]
    fn flat_triangle_is_clamped_within_tolerance() {
        // a + b = c exactly: angle pi at the apex, 0 elsewhere.
        assert!((hyp_angle(2.0f64, 1.0, 1.0).unwrap() - std::f64::consts::PI).abs() < 1e-6);
        assert!(hyp_angle(1.0f64, 2.0, 1.0).unwrap().abs() < 1e-6);
    }

    #[test]
    fn single_precision_kernel() {
        let th = hyp_angle(1.0f32, 1.0, 1.0).unwrap();
        assert!((th as f64 - EQUILATERAL_1_ANGLE).abs() < 1e-6);
    }

    #[test]
    fn seam_reference_values() {
        assert!((pants_seam(2.0f64, 2.0, 2.0).unwrap() - SEAM_2_2_2).abs() < 1e-14);
        assert!((pants_seam(1.0f64, 2.0, 3.0).unwrap() - SEAM_1_2_3).abs() < 1e-14);
        let s = pants_seam(2.0f64, 2.0, 2.0).unwrap();
        assert_eq!(s, pants_seam(2.0, 2.0, 2.0).unwrap());
    }

    #[test]
    fn seam_is_continuous_at_the_puncture_limit() {
        let s = pants_seam(2.0f64, 2.0, 1e-9).unwrap();
        assert!((s - SEAM_2_2_LIMIT).abs() < 1e-12);
        assert!(matches!(pants_seam(2.0f64, 2.0, 0.0), Err(HypError::InvalidCuff(_))));
        assert!(matches!(pants_seam(-1.0f64, 2.0, 1.0), Err(HypError::InvalidCuff(_))));
    }

    #[test]
    fn angle_derivatives_match_finite_differences() {
        let l = [0.8f64, 1.1, 0.6];
        let t = HyperbolicTriangle::new(l).unwrap();
        let d = t.angle_derivatives().unwrap();
        let h = 1e-6;
        for j in 0..3 {
            let (mut lp, mut lm) = (l, l);
            lp[j] += h;
            lm[j] -= h;
            let ap = HyperbolicTriangle::new(lp).unwrap().angles().unwrap();
            let am = HyperbolicTriangle::new(lm).unwrap().angles().unwrap();
            for i in 0..3 {
                let fd = (ap[i] - am[i]) / (2.0 * h);
                assert!((fd - d[i][j]).abs() < 1e-8, "d{i}/d{j}: {fd} vs {}", d[i][j]);
            }
        }
    }

    proptest! {
        #[test]
        fn angles_sum_below_pi(a in 0.01f64..4.0, b in 0.01f64..4.0, t in 0.05f64..0.95) {
            // third side strictly inside (|a-b|, a+b)
            let lo = (a - b).abs();
            let c = lo + t * (a + b - lo);
            let tri = HyperbolicTriangle::new([a, b, c]).unwrap();
            let ang = tri.angles().unwrap();
            for x in ang {
                prop_assert!(x > 0.0 && x < std::f64::consts::PI);
            }
            let area = tri.area().unwrap();
            prop_assert!(area > 0.0 && area < std::f64::consts::PI);
        }

        #[test]
        fn euclidean_limit_of_the_cosine_law(a in 0.5f64..2.0, b in 0.5f64..2.0, t in 0.1f64..0.9) {
            let lo = (a - b).abs();
            let c = lo + t * (a + b - lo);
            let eps = 1e-3;
            let hyp = hyp_angle(c * eps, a * eps, b * eps).unwrap();
            let euc = ((a * a + b * b - c * c) / (2.0 * a * b)).acos();
            prop_assert!((hyp - euc).abs() < 10.0 * eps * eps);
        }

        #[test]
        fn seam_is_symmetric(li in 0.05f64..6.0, lj in 0.05f64..6.0, lk in 0.05f64..6.0) {
            let s1 = pants_seam(li, lj, lk).unwrap();
            let s2 = pants_seam(lj, li, lk).unwrap();
            prop_assert!(s1 > 0.0);
            prop_assert!((s1 - s2).abs() <= 1e-12 * s1.max(1.0));
        }
    }
}
