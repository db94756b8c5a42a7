//! Rough kernels: degree-zero homogeneous functions given by their values on
//! the unit sphere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Point;
use crate::scalar::{unit_sphere_measure, Real};
use crate::sum::pairwise_sum;

/// Angular points used for sphere integrals of harmonic kernels.
pub const SPHERE_QUADRATURE_POINTS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HarmonicKind {
    Cos,
    Sin,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub enum KernelShape<T: Real> {
    Constant { value: T },
    /// Dimension one: `plus` on the positive half-line, `minus` on the negative.
    SignPair { plus: T, minus: T },
    /// Dimension two: `cos(kθ)` or `sin(kθ)`.
    Harmonic { kind: HarmonicKind, k: u32 },
    /// Dimension two: piecewise constant on `M` equal angular cells of
    /// `[0, 2π)`, the first cell starting at angle zero.
    AngularTable { values: Vec<T> },
}

/// A rough kernel Ω on `R^dim \ {0}`, optionally replaced by `|Ω|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoughKernel<T: Real> {
    dim: usize,
    shape: KernelShape<T>,
    absolute: bool,
}

impl<T: Real> RoughKernel<T> {
    pub fn new(dim: usize, shape: KernelShape<T>) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::BadKernel(format!("dim must be 1 or 2, got {dim}")));
        }
        match &shape {
            KernelShape::Constant { value } if !value.is_finite() => {
                return Err(Error::BadKernel("constant must be finite".into()))
            }
            KernelShape::SignPair { plus, minus } => {
                if dim != 1 {
                    return Err(Error::BadKernel("sign_pair kernels are one-dimensional".into()));
                }
                if !plus.is_finite() || !minus.is_finite() {
                    return Err(Error::BadKernel("sign_pair values must be finite".into()));
                }
            }
            KernelShape::Harmonic { k, .. } => {
                if dim != 2 {
                    return Err(Error::BadKernel("harmonic kernels are two-dimensional".into()));
                }
                if *k < 1 {
                    return Err(Error::BadKernel("harmonic order must be >= 1".into()));
                }
            }
            KernelShape::AngularTable { values } => {
                if dim != 2 {
                    return Err(Error::BadKernel("angular tables are two-dimensional".into()));
                }
                if values.len() < 4 {
                    return Err(Error::BadKernel(format!(
                        "angular table needs at least 4 cells, got {}",
                        values.len()
                    )));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::BadKernel("angular table values must be finite".into()));
                }
            }
            _ => {}
        }
        Ok(Self { dim, shape, absolute: false })
    }

    pub fn constant(dim: usize, value: T) -> Self {
        Self::new(dim, KernelShape::Constant { value }).expect("finite constant kernel")
    }

    pub fn harmonic(kind: HarmonicKind, k: u32) -> Result<Self> {
        Self::new(2, KernelShape::Harmonic { kind, k })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &KernelShape<T> {
        &self.shape
    }

    pub fn is_absolute(&self) -> bool {
        self.absolute
    }

    /// The kernel `|Ω|`.
    pub fn abs(&self) -> Self {
        Self { dim: self.dim, shape: self.shape.clone(), absolute: true }
    }

    /// Ω at the direction of a non-zero displacement `(dx, dy)`. Only the
    /// direction is used, so this is exactly degree-zero homogeneous.
    #[inline]
    pub fn eval_displacement(&self, dx: T, dy: T) -> T {
        let v = match &self.shape {
            KernelShape::Constant { value } => *value,
            KernelShape::SignPair { plus, minus } => {
                if dx > T::zero() {
                    *plus
                } else {
                    *minus
                }
            }
            KernelShape::Harmonic { kind, k } => {
                let theta = dy.atan2(dx) * T::from_usize_lossy(*k as usize);
                match kind {
                    HarmonicKind::Cos => theta.cos(),
                    HarmonicKind::Sin => theta.sin(),
                }
            }
            KernelShape::AngularTable { values } => values[angular_cell(dx, dy, values.len())],
        };
        if self.absolute {
            v.abs()
        } else {
            v
        }
    }

    /// Ω on the unit sphere.
    pub fn eval(&self, direction: &Point<T>) -> Result<T> {
        let len = direction.norm();
        if (len - T::one()).abs().to_f64_lossy() > 1e-9 {
            return Err(Error::NotADirection(format!("|direction| = {len}")));
        }
        Ok(self.eval_displacement(direction.x(), direction.y()))
    }

    /// Average of Ω over the sphere with respect to normalized surface measure.
    pub fn spherical_mean(&self) -> T {
        self.cancellation_defect() / unit_sphere_measure::<T>(self.dim)
    }

    /// `‖Ω‖_{L_s(S^{dim-1})}` with unnormalized surface measure; `s = ∞`
    /// gives the essential supremum.
    pub fn sphere_lnorm(&self, s: T) -> Result<T> {
        if !(s > T::one()) {
            return Err(Error::BadExponent(format!("sphere norm needs s > 1, got {s}")));
        }
        let (values, weight) = self.sphere_samples();
        if s.is_infinite() {
            let sup = match &self.shape {
                KernelShape::Harmonic { .. } => T::one(),
                _ => values.iter().fold(T::zero(), |m, v| m.max(v.abs())),
            };
            return Ok(sup);
        }
        let total = pairwise_sum(values.iter().map(|v| v.abs_pow(s))) * weight;
        Ok(total.root(s))
    }

    /// Normalized-measure norm `(⨍ |Ω|^s dσ)^{1/s}`.
    pub fn sphere_normalized_lnorm(&self, s: T) -> Result<T> {
        let raw = self.sphere_lnorm(s)?;
        if s.is_infinite() {
            return Ok(raw);
        }
        Ok(raw / unit_sphere_measure::<T>(self.dim).root(s))
    }

    /// `∫_{S^{dim-1}} Ω dσ`.
    pub fn cancellation_defect(&self) -> T {
        if let KernelShape::Constant { value } = &self.shape {
            let v = if self.absolute { value.abs() } else { *value };
            return v * unit_sphere_measure::<T>(self.dim);
        }
        let (values, weight) = self.sphere_samples();
        pairwise_sum(values.into_iter()) * weight
    }

    /// Sphere samples with their common quadrature weight.
    fn sphere_samples(&self) -> (Vec<T>, T) {
        match &self.shape {
            KernelShape::Constant { .. } if self.dim == 1 => {
                (vec![self.eval_displacement(T::one(), T::zero()); 2], T::one())
            }
            KernelShape::SignPair { .. } => (
                vec![
                    self.eval_displacement(T::one(), T::zero()),
                    self.eval_displacement(-T::one(), T::zero()),
                ],
                T::one(),
            ),
            KernelShape::AngularTable { values } => {
                let m = values.len();
                let vals = values.iter().map(|&v| if self.absolute { v.abs() } else { v }).collect();
                (vals, T::TAU() / T::from_usize_lossy(m))
            }
            _ => {
                let m = SPHERE_QUADRATURE_POINTS;
                let step = T::TAU() / T::from_usize_lossy(m);
                let vals = (0..m)
                    .map(|j| {
                        let th = (T::from_usize_lossy(j) + T::lit(0.5)) * step;
                        self.eval_displacement(th.cos(), th.sin())
                    })
                    .collect();
                (vals, step)
            }
        }
    }

    /// `a·k1 + b·k2` for two angular tables of equal length.
    pub fn table_combination(a: T, k1: &Self, b: T, k2: &Self) -> Result<Self> {
        match (&k1.shape, &k2.shape) {
            (KernelShape::AngularTable { values: u }, KernelShape::AngularTable { values: v })
                if u.len() == v.len() && !k1.absolute && !k2.absolute =>
            {
                let values = u.iter().zip(v).map(|(&x, &y)| a * x + b * y).collect();
                Self::new(2, KernelShape::AngularTable { values })
            }
            _ => Err(Error::BadKernel("combination needs two angular tables of equal length".into())),
        }
    }
}

/// Index of the angular cell of `[0, 2π)` containing the direction `(dx, dy)`.
fn angular_cell<T: Real>(dx: T, dy: T, m: usize) -> usize {
    let mut theta = dy.atan2(dx);
    if theta < T::zero() {
        theta += T::TAU();
    }
    let idx = (theta / T::TAU() * T::from_usize_lossy(m)).floor().to_usize().unwrap_or(0);
    idx.min(m - 1)
}
