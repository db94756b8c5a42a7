//! Closed-form test functions, symbol functions and weights, plus the radii
//! sets that discretize suprema over `r > 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, Point};
use crate::scalar::Real;

/// A closed-form function on `R^dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub enum FunctionSpec<T: Real> {
    /// `|x|^beta`.
    Power { beta: T },
    /// Indicator of `|x| <= radius`.
    BallIndicator { radius: T },
    /// Indicator of `inner < |x| <= outer`.
    AnnulusIndicator { inner: T, outer: T },
    /// `exp(-|x|^2 / (2 sigma^2))`.
    Gaussian { sigma: T },
    /// `ln |x|`.
    LogAbs,
    /// `x -> spec(x - shift)`.
    Shifted { spec: Box<FunctionSpec<T>>, shift: Point<T> },
    Sum { terms: Vec<FunctionSpec<T>> },
    Scale { factor: T, spec: Box<FunctionSpec<T>> },
    Zero,
}

impl<T: Real> FunctionSpec<T> {
    pub fn power(beta: T) -> Self {
        Self::Power { beta }
    }

    pub fn ball(radius: T) -> Self {
        Self::BallIndicator { radius }
    }

    pub fn gaussian(sigma: T) -> Self {
        Self::Gaussian { sigma }
    }

    pub fn shifted(self, shift: Point<T>) -> Self {
        Self::Shifted { spec: Box::new(self), shift }
    }

    pub fn scaled(self, factor: T) -> Self {
        Self::Scale { factor, spec: Box::new(self) }
    }

    /// Parameter checks for a given dimension.
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            Self::Power { beta } => {
                if !(*beta > -T::from_usize_lossy(dim)) {
                    return Err(Error::NotLocallyIntegrable(format!(
                        "|x|^{beta} is not locally integrable in dimension {dim}"
                    )));
                }
            }
            Self::BallIndicator { radius } if !(*radius > T::zero()) => {
                return Err(Error::BadValue(format!("ball radius must be positive, got {radius}")));
            }
            Self::AnnulusIndicator { inner, outer } if !(*inner >= T::zero() && *outer > *inner) => {
                return Err(Error::BadValue(format!("annulus needs 0 <= inner < outer, got ({inner}, {outer})")));
            }
            Self::Gaussian { sigma } if !(*sigma > T::zero()) => {
                return Err(Error::BadValue(format!("gaussian width must be positive, got {sigma}")));
            }
            Self::Shifted { spec, .. } | Self::Scale { spec, .. } => spec.validate(dim)?,
            Self::Sum { terms } => {
                for t in terms {
                    t.validate(dim)?;
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Pointwise value.
    pub fn eval(&self, x: &Point<T>) -> T {
        match self {
            Self::Power { beta } => x.norm().powf(*beta),
            Self::BallIndicator { radius } => indicator(x.norm() <= *radius),
            Self::AnnulusIndicator { inner, outer } => {
                let r = x.norm();
                indicator(r > *inner && r <= *outer)
            }
            Self::Gaussian { sigma } => {
                let r = x.norm() / *sigma;
                (-(r * r) / T::lit(2.0)).exp()
            }
            Self::LogAbs => x.norm().ln(),
            Self::Shifted { spec, shift } => spec.eval(&x.sub(shift)),
            Self::Sum { terms } => terms.iter().map(|t| t.eval(x)).fold(T::zero(), |a, b| a + b),
            Self::Scale { factor, spec } => *factor * spec.eval(x),
            Self::Zero => T::zero(),
        }
    }

    /// Samples the function at the cell centres of `grid`.
    pub fn sample(&self, grid: &Grid<T>) -> Result<GridFunction<T>> {
        self.validate(grid.dim())?;
        GridFunction::from_fn(*grid, |p| self.eval(p))
    }

    /// Radius of a centred ball containing the support, if the support is bounded.
    pub fn support_radius(&self) -> Option<T> {
        match self {
            Self::BallIndicator { radius } => Some(*radius),
            Self::AnnulusIndicator { outer, .. } => Some(*outer),
            Self::Zero => Some(T::zero()),
            Self::Shifted { spec, shift } => spec.support_radius().map(|r| r + shift.norm()),
            Self::Scale { factor, spec } => {
                if *factor == T::zero() {
                    Some(T::zero())
                } else {
                    spec.support_radius()
                }
            }
            Self::Sum { terms } => terms
                .iter()
                .map(|t| t.support_radius())
                .try_fold(T::zero(), |acc, r| r.map(|r| acc.max(r))),
            _ => None,
        }
    }

    /// True for the identically zero function.
    pub fn is_zero(&self) -> bool {
        match self {
            Self::Zero => true,
            Self::Scale { factor, spec } => *factor == T::zero() || spec.is_zero(),
            Self::Shifted { spec, .. } => spec.is_zero(),
            Self::Sum { terms } => terms.iter().all(|t| t.is_zero()),
            _ => false,
        }
    }

    /// Short human-readable identifier used in reports.
    pub fn label(&self) -> String {
        match self {
            Self::Power { beta } => format!("power({beta})"),
            Self::BallIndicator { radius } => format!("ball({radius})"),
            Self::AnnulusIndicator { inner, outer } => format!("annulus({inner},{outer})"),
            Self::Gaussian { sigma } => format!("gaussian({sigma})"),
            Self::LogAbs => "log_abs".into(),
            Self::Shifted { spec, shift } => format!("{}@({},{})", spec.label(), shift.x(), shift.y()),
            Self::Sum { terms } => terms.iter().map(|t| t.label()).collect::<Vec<_>>().join("+"),
            Self::Scale { factor, spec } => format!("{factor}*{}", spec.label()),
            Self::Zero => "zero".into(),
        }
    }
}

fn indicator<T: Real>(b: bool) -> T {
    if b {
        T::one()
    } else {
        T::zero()
    }
}

/// Behaviour of a tabulated weight beyond its last radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail<T> {
    /// `table_end · (r / r_end)^exponent`.
    Power(T),
    /// Identically zero (compact support).
    Vanishing,
}

/// A positive weight `φ(x0, r)`; every family here is independent of `x0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub enum WeightSpec<T: Real> {
    /// `r^kappa`.
    PowerLaw { kappa: T },
    /// `r^kappa (1 + |ln r|)^m`.
    PowerLog { kappa: T, m: T },
    /// `a · r^kappa (2 + sin ln r)`.
    OscPower { kappa: T, a: T },
    /// Log-log linear interpolation of `(radii, values)`, constant below the
    /// first radius and extended by `tail` past the last.
    Tabulated {
        radii: Vec<T>,
        values: Vec<T>,
        tail: Tail<T>,
        /// Declared bound for the doubling constant, if any.
        #[serde(default)]
        doubling: Option<T>,
    },
}

/// Leading behaviour `c(r) · r^exponent (1 + |ln r|)^log_power` at one end of
/// the half-line, where the coefficient `c(r)` ranges over `[osc_min, osc_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Asymptote<T> {
    pub exponent: T,
    pub log_power: T,
    pub osc_min: T,
    pub osc_max: T,
    /// The function is identically zero near this end.
    pub vanishing: bool,
}

impl<T: Real> Asymptote<T> {
    pub fn power(exponent: T) -> Self {
        Self { exponent, log_power: T::zero(), osc_min: T::one(), osc_max: T::one(), vanishing: false }
    }

    pub fn zero() -> Self {
        Self { vanishing: true, ..Self::power(T::zero()) }
    }

    /// Asymptote of `self^e`.
    pub fn pow(self, e: T) -> Self {
        let (lo, hi) = (self.osc_min.powf(e), self.osc_max.powf(e));
        Self {
            exponent: self.exponent * e,
            log_power: self.log_power * e,
            osc_min: lo.min(hi),
            osc_max: lo.max(hi),
            vanishing: self.vanishing,
        }
    }

    /// Asymptote of a product.
    pub fn mul(self, other: Self) -> Self {
        Self {
            exponent: self.exponent + other.exponent,
            log_power: self.log_power + other.log_power,
            osc_min: self.osc_min * other.osc_min,
            osc_max: self.osc_max * other.osc_max,
            vanishing: self.vanishing || other.vanishing,
        }
    }

    pub fn oscillates(&self) -> bool {
        self.osc_min != self.osc_max
    }
}

impl<T: Real> WeightSpec<T> {
    pub fn power_law(kappa: T) -> Self {
        Self::PowerLaw { kappa }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::PowerLaw { kappa } if !kappa.is_finite() => Err(Error::BadWeight("non-finite exponent".into())),
            Self::PowerLog { kappa, m } if !kappa.is_finite() || !m.is_finite() => {
                Err(Error::BadWeight("non-finite exponent".into()))
            }
            Self::OscPower { kappa, a } if !kappa.is_finite() || !(*a > T::zero()) || !a.is_finite() => {
                Err(Error::BadWeight(format!("osc_power needs finite kappa and a > 0, got ({kappa}, {a})")))
            }
            Self::Tabulated { radii, values, tail, doubling } => {
                if radii.len() < 2 || radii.len() != values.len() {
                    return Err(Error::BadWeight("table needs >= 2 matching radii and values".into()));
                }
                if !(radii[0] > T::zero()) || radii.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::BadWeight("table radii must be positive and increasing".into()));
                }
                if values.iter().any(|v| !(*v > T::zero()) || !v.is_finite()) {
                    return Err(Error::BadWeight("table values must be positive and finite".into()));
                }
                if let Tail::Power(e) = tail {
                    if !e.is_finite() {
                        return Err(Error::BadWeight("tail exponent must be finite".into()));
                    }
                }
                if let Some(c) = doubling {
                    if !(*c >= T::one()) {
                        return Err(Error::BadWeight("declared doubling constant must be >= 1".into()));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `φ(r)` for `r > 0`.
    pub fn eval(&self, r: T) -> Result<T> {
        if !(r > T::zero()) {
            return Err(Error::BadRadius(format!("weights are defined for r > 0, got {r}")));
        }
        Ok(self.value(r))
    }

    /// `φ(r)` without the domain check.
    #[inline]
    pub fn value(&self, r: T) -> T {
        match self {
            Self::PowerLaw { kappa } => r.powf(*kappa),
            Self::PowerLog { kappa, m } => r.powf(*kappa) * (T::one() + r.ln().abs()).powf(*m),
            Self::OscPower { kappa, a } => *a * r.powf(*kappa) * (T::lit(2.0) + r.ln().sin()),
            Self::Tabulated { radii, values, tail, .. } => {
                let last = radii.len() - 1;
                if r <= radii[0] {
                    return values[0];
                }
                if r > radii[last] {
                    return match tail {
                        Tail::Power(e) => values[last] * (r / radii[last]).powf(*e),
                        Tail::Vanishing => T::zero(),
                    };
                }
                let j = radii.partition_point(|&x| x < r).max(1);
                let (r0, r1) = (radii[j - 1], radii[j]);
                let (v0, v1) = (values[j - 1], values[j]);
                if v0 == v1 {
                    return v0;
                }
                let s = (r / r0).ln() / (r1 / r0).ln();
                (v0.ln() + s * (v1 / v0).ln()).exp()
            }
        }
    }

    /// Behaviour as `r → ∞`.
    pub fn tail_asymptote(&self) -> Asymptote<T> {
        match self {
            Self::PowerLaw { kappa } => Asymptote::power(*kappa),
            Self::PowerLog { kappa, m } => Asymptote { log_power: *m, ..Asymptote::power(*kappa) },
            Self::OscPower { kappa, a } => Asymptote {
                osc_min: *a,
                osc_max: T::lit(3.0) * *a,
                ..Asymptote::power(*kappa)
            },
            Self::Tabulated { radii, values, tail, .. } => match tail {
                Tail::Power(e) => {
                    let last = radii.len() - 1;
                    let c = values[last] * radii[last].powf(-*e);
                    Asymptote { osc_min: c, osc_max: c, ..Asymptote::power(*e) }
                }
                Tail::Vanishing => Asymptote::zero(),
            },
        }
    }

    /// Behaviour as `r → 0`.
    pub fn head_asymptote(&self) -> Asymptote<T> {
        match self {
            Self::Tabulated { values, .. } => Asymptote { osc_min: values[0], osc_max: values[0], ..Asymptote::power(T::zero()) },
            _ => self.tail_asymptote(),
        }
    }

    /// Radius past which [`Self::tail_asymptote`] describes the weight exactly
    /// (up to the slowly varying factors it records).
    pub fn tail_start(&self) -> T {
        match self {
            Self::Tabulated { radii, .. } => radii[radii.len() - 1],
            _ => T::one(),
        }
    }

    /// Radius below which [`Self::head_asymptote`] is exact.
    pub fn head_end(&self) -> T {
        match self {
            Self::Tabulated { radii, .. } => radii[0],
            _ => T::one(),
        }
    }

    pub fn declared_doubling(&self) -> Option<T> {
        match self {
            Self::Tabulated { doubling, .. } => *doubling,
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::PowerLaw { kappa } => format!("r^{kappa}"),
            Self::PowerLog { kappa, m } => format!("r^{kappa}(1+|ln r|)^{m}"),
            Self::OscPower { kappa, a } => format!("{a}r^{kappa}(2+sin ln r)"),
            Self::Tabulated { radii, .. } => format!("table[{}]", radii.len()),
        }
    }
}

/// Strictly increasing positive radii discretizing `sup_{r>0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RadiiConfig<T>", into = "RadiiConfig<T>")]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>", serialize = "T: Real + Serialize"))]
pub struct RadiiSet<T: Real> {
    values: Vec<T>,
}

/// Serialized form of a log-spaced [`RadiiSet`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiiConfig<T> {
    pub r_min: T,
    pub r_max: T,
    pub count: usize,
}

impl<T: Real> TryFrom<RadiiConfig<T>> for RadiiSet<T> {
    type Error = Error;

    fn try_from(c: RadiiConfig<T>) -> Result<Self> {
        RadiiSet::log_spaced(c.r_min, c.r_max, c.count)
    }
}

impl<T: Real> From<RadiiSet<T>> for RadiiConfig<T> {
    fn from(r: RadiiSet<T>) -> Self {
        RadiiConfig { r_min: r.min(), r_max: r.max(), count: r.len() }
    }
}

impl<T: Real> RadiiSet<T> {
    /// `count` log-spaced radii from `r_min` to `r_max`; dyadic when
    /// `r_max / r_min = 2^(count-1)`.
    pub fn log_spaced(r_min: T, r_max: T, count: usize) -> Result<Self> {
        if !(r_min > T::zero()) || !(r_max > r_min) || !r_max.is_finite() {
            return Err(Error::BadRadii(format!("need 0 < r_min < r_max, got [{r_min}, {r_max}]")));
        }
        if count < 2 {
            return Err(Error::BadRadii(format!("need at least 2 radii, got {count}")));
        }
        let ratio = r_max / r_min;
        let steps = count - 1;
        let dyadic = ratio == T::lit(2.0).powi(steps as i32);
        let values = (0..count)
            .map(|i| {
                if dyadic {
                    r_min * T::lit(2.0).powi(i as i32)
                } else if i == steps {
                    r_max
                } else {
                    r_min * ratio.powf(T::from_usize_lossy(i) / T::from_usize_lossy(steps))
                }
            })
            .collect();
        Ok(Self { values })
    }

    /// Radii `r_min · 2^k` for `k = 0..count`.
    pub fn dyadic(r_min: T, count: usize) -> Result<Self> {
        Self::log_spaced(r_min, r_min * T::lit(2.0).powi(count as i32 - 1), count)
    }

    /// Explicit radii, which must be positive and strictly increasing.
    pub fn from_values(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::BadRadii("empty radii set".into()));
        }
        if !(values[0] > T::zero()) || values.windows(2).any(|w| !(w[1] > w[0])) || !values[values.len() - 1].is_finite() {
            return Err(Error::BadRadii("radii must be positive, finite and strictly increasing".into()));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> T {
        self.values[0]
    }

    pub fn max(&self) -> T {
        self.values[self.values.len() - 1]
    }

    /// Log-step between consecutive radii (geometric mean ratio).
    pub fn log_step(&self) -> T {
        if self.values.len() < 2 {
            return T::zero();
        }
        (self.max() / self.min()).ln() / T::from_usize_lossy(self.values.len() - 1)
    }
}
