//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar the toolkit is generic over (`f32`, `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion of an `f64` literal into the scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `|self|^p`, exact for `p = 1` and `p = 2`.
    #[inline]
    fn abs_pow(self, p: Self) -> Self {
        let a = self.abs();
        if p == Self::one() {
            a
        } else if p == Self::lit(2.0) {
            a * a
        } else {
            a.powf(p)
        }
    }

    /// `self^(1/p)` for non-negative `self`, exact for `p = 1`.
    #[inline]
    fn root(self, p: Self) -> Self {
        if p == Self::one() {
            self
        } else if p == Self::lit(2.0) {
            self.sqrt()
        } else {
            self.powf(p.recip())
        }
    }

    /// Number of decades a half-line log grid may span past its start
    /// without overflowing intermediate powers.
    fn half_line_decades() -> usize {
        let max10 = Self::max_value().to_f64_lossy().log10();
        ((max10 / 6.0).floor() as usize).clamp(4, 40)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Euler Gamma function, evaluated in `f64`.
pub fn gamma<T: Real>(x: T) -> T {
    T::lit(statrs::function::gamma::gamma(x.to_f64_lossy()))
}

/// Volume of the unit ball in dimension 1 or 2.
pub fn unit_ball_volume<T: Real>(dim: usize) -> T {
    match dim {
        1 => T::lit(2.0),
        _ => T::PI(),
    }
}

/// Surface measure of the unit sphere S^{dim-1} (|S^0| = 2, |S^1| = 2π).
pub fn unit_sphere_measure<T: Real>(dim: usize) -> T {
    match dim {
        1 => T::lit(2.0),
        _ => T::TAU(),
    }
}

/// Volume of the ball of radius `r`.
pub fn ball_volume<T: Real>(dim: usize, r: T) -> T {
    unit_ball_volume::<T>(dim) * r.powi(dim as i32)
}

/// Least-squares slope of `ln y` against `ln x`. Non-positive entries are skipped.
pub fn log_log_slope<T: Real>(xs: &[T], ys: &[T]) -> Option<T> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > T::zero() && **y > T::zero() && y.is_finite())
        .map(|(x, y)| (x.to_f64_lossy().ln(), y.to_f64_lossy().ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(T::lit(sxy / sxx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_matches_known_values() {
        assert!((gamma(0.5f64) - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!((gamma(5.0f64) - 24.0).abs() < 1e-10);
        assert!((gamma(0.25f32) - 3.625_609_9).abs() < 1e-5);
    }

    #[test]
    fn abs_pow_is_exact_for_small_integers() {
        let x = 0.1f64;
        assert_eq!(x.abs_pow(2.0), x * x);
        assert_eq!((-x).abs_pow(1.0), x);
        assert_eq!(4.0f64.root(2.0), 2.0);
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0f64, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(0.7)).collect();
        assert!((log_log_slope(&xs, &ys).unwrap() - 0.7).abs() < 1e-12);
        assert!(log_log_slope(&[1.0f64], &[1.0]).is_none());
    }

    #[test]
    fn decades_budget_depends_on_range() {
        assert_eq!(f64::half_line_decades(), 40);
        assert_eq!(f32::half_line_decades(), 6);
    }
}
