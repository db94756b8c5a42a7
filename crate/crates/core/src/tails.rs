//! Functions on the half-line `(0, ∞)` with declared asymptotics, and the
//! tail sup / inf / integral machinery shared by the Hardy operator and the
//! weight-condition checkers.
//!
//! Every tail quantity is a finite log-grid computation starting at the query
//! point plus a closed-form contribution beyond the last node, read off the
//! asymptote of the function there.

use serde::{Deserialize, Serialize};

use crate::catalog::{Asymptote, Tail, WeightSpec};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sum::{suffix_sums, PairwiseSum};

/// Log-grid resolution of every tail computation.
pub const NODES_PER_DECADE: usize = 200;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    #[default]
    None,
    NonDecreasing,
    NonIncreasing,
}

/// One multiplicative factor of a [`HalfLineFunction`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "factor", rename_all = "snake_case")]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub enum Factor<T: Real> {
    Weight { weight: WeightSpec<T> },
    /// `t / (1 + t)`.
    Saturating,
    /// `before` on `(0, at)`, `after` on `[at, ∞)`.
    Step { at: T, before: T, after: T },
}

impl<T: Real> Factor<T> {
    fn value(&self, t: T) -> T {
        match self {
            Self::Weight { weight } => weight.value(t),
            Self::Saturating => t / (T::one() + t),
            Self::Step { at, before, after } => {
                if t < *at {
                    *before
                } else {
                    *after
                }
            }
        }
    }

    fn tail(&self) -> Asymptote<T> {
        match self {
            Self::Weight { weight } => weight.tail_asymptote(),
            Self::Saturating => Asymptote::power(T::zero()),
            Self::Step { after, .. } => constant_asymptote(*after),
        }
    }

    fn head(&self) -> Asymptote<T> {
        match self {
            Self::Weight { weight } => weight.head_asymptote(),
            Self::Saturating => Asymptote::power(T::one()),
            Self::Step { before, .. } => constant_asymptote(*before),
        }
    }

    fn tail_start(&self) -> T {
        match self {
            Self::Weight { weight } => weight.tail_start(),
            Self::Saturating => T::one(),
            Self::Step { at, .. } => *at,
        }
    }

    fn head_end(&self) -> T {
        match self {
            Self::Weight { weight } => weight.head_end(),
            Self::Saturating => T::one(),
            Self::Step { at, .. } => *at,
        }
    }

    fn label(&self) -> String {
        match self {
            Self::Weight { weight } => weight.label(),
            Self::Saturating => "t/(1+t)".into(),
            Self::Step { at, before, after } => format!("step({before}|{at}|{after})"),
        }
    }
}

fn constant_asymptote<T: Real>(c: T) -> Asymptote<T> {
    if c == T::zero() {
        Asymptote::zero()
    } else {
        Asymptote { osc_min: c, osc_max: c, ..Asymptote::power(T::zero()) }
    }
}

/// `scale · t^power · Π factor_i(t)^{e_i}` on `(0, ∞)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct HalfLineFunction<T: Real> {
    #[serde(default = "T::one")]
    pub scale: T,
    #[serde(default = "T::zero")]
    pub power: T,
    #[serde(default)]
    pub factors: Vec<(Factor<T>, T)>,
    #[serde(default)]
    pub monotone: Monotonicity,
}

impl<T: Real> HalfLineFunction<T> {
    /// `c · t^a`.
    pub fn power(c: T, a: T) -> Self {
        Self { scale: c, power: a, factors: Vec::new(), monotone: Monotonicity::None }
    }

    pub fn constant(c: T) -> Self {
        Self::power(c, T::zero())
    }

    pub fn weight(w: WeightSpec<T>) -> Self {
        Self { factors: vec![(Factor::Weight { weight: w }, T::one())], ..Self::constant(T::one()) }
    }

    pub fn saturating() -> Self {
        Self { factors: vec![(Factor::Saturating, T::one())], ..Self::constant(T::one()) }
    }

    pub fn step(at: T, before: T, after: T) -> Self {
        Self { factors: vec![(Factor::Step { at, before, after }, T::one())], ..Self::constant(T::one()) }
    }

    /// Log-log interpolated table with `r^{tail_exponent}` continuation.
    pub fn tabulated(radii: Vec<T>, values: Vec<T>, tail_exponent: T) -> Result<Self> {
        let w = WeightSpec::Tabulated { radii, values, tail: Tail::Power(tail_exponent), doubling: None };
        w.validate()?;
        Ok(Self::weight(w))
    }

    pub fn with_monotone(mut self, m: Monotonicity) -> Self {
        self.monotone = m;
        self
    }

    pub fn times(mut self, other: Self) -> Self {
        self.scale *= other.scale;
        self.power += other.power;
        self.factors.extend(other.factors);
        self.monotone = Monotonicity::None;
        self
    }

    /// `self^e`.
    pub fn pow(mut self, e: T) -> Self {
        self.scale = self.scale.powf(e);
        self.power *= e;
        for f in &mut self.factors {
            f.1 *= e;
        }
        self.monotone = match (self.monotone, e > T::zero(), e < T::zero()) {
            (m, true, _) => m,
            (Monotonicity::NonDecreasing, _, true) => Monotonicity::NonIncreasing,
            (Monotonicity::NonIncreasing, _, true) => Monotonicity::NonDecreasing,
            _ => Monotonicity::None,
        };
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale >= T::zero()) || !self.scale.is_finite() || !self.power.is_finite() {
            return Err(Error::BadWeight(format!("bad scale {} or power {}", self.scale, self.power)));
        }
        for (f, e) in &self.factors {
            if !e.is_finite() {
                return Err(Error::BadWeight("non-finite factor exponent".into()));
            }
            match f {
                Factor::Weight { weight } => weight.validate()?,
                Factor::Step { at, before, after } => {
                    if !(*at > T::zero()) || !(*before >= T::zero()) || !(*after >= T::zero()) {
                        return Err(Error::BadWeight("step needs at > 0 and non-negative levels".into()));
                    }
                }
                Factor::Saturating => {}
            }
        }
        Ok(())
    }

    pub fn value(&self, t: T) -> T {
        if self.scale == T::zero() {
            return T::zero();
        }
        self.factors
            .iter()
            .fold(self.scale * t.powf(self.power), |acc, (f, e)| acc * f.value(t).powf(*e))
    }

    fn combine(&self, pick: impl Fn(&Factor<T>) -> Asymptote<T>) -> Asymptote<T> {
        if self.scale == T::zero() {
            return Asymptote::zero();
        }
        let start = Asymptote { osc_min: self.scale, osc_max: self.scale, ..Asymptote::power(self.power) };
        self.factors.iter().fold(start, |acc, (f, e)| acc.mul(pick(f).pow(*e)))
    }

    /// Behaviour as `t → ∞`.
    pub fn tail_asymptote(&self) -> Asymptote<T> {
        self.combine(Factor::tail)
    }

    /// Behaviour as `t → 0`.
    pub fn head_asymptote(&self) -> Asymptote<T> {
        self.combine(Factor::head)
    }

    /// Point past which [`Self::tail_asymptote`] applies.
    pub fn tail_start(&self) -> T {
        self.factors.iter().map(|(f, _)| f.tail_start()).fold(T::one(), T::max)
    }

    /// Point below which [`Self::head_asymptote`] applies.
    pub fn head_end(&self) -> T {
        self.factors.iter().map(|(f, _)| f.head_end()).fold(T::one(), T::min)
    }

    /// Checks the declared monotonicity on `samples` (increasing points).
    pub fn monotone_on(&self, samples: &[T]) -> bool {
        let v: Vec<T> = samples.iter().map(|&t| self.value(t)).collect();
        match self.monotone {
            Monotonicity::None => true,
            Monotonicity::NonDecreasing => v.windows(2).all(|w| w[1] >= w[0]),
            Monotonicity::NonIncreasing => v.windows(2).all(|w| w[1] <= w[0]),
        }
    }

    pub fn label(&self) -> String {
        let mut s = if self.power == T::zero() { format!("{}", self.scale) } else { format!("{}t^{}", self.scale, self.power) };
        for (f, e) in &self.factors {
            if *e == T::one() {
                s.push_str(&format!("·{}", f.label()));
            } else {
                s.push_str(&format!("·[{}]^{e}", f.label()));
            }
        }
        s
    }
}

/// Tolerance for deciding that an asymptotic exponent is exactly zero or `-1`.
pub(crate) fn exponent_tol<T: Real>() -> T {
    T::epsilon().sqrt()
}

fn sign<T: Real>(x: T) -> i32 {
    let tol = exponent_tol::<T>();
    if x > tol {
        1
    } else if x < -tol {
        -1
    } else {
        0
    }
}

/// Growth class of `t^e (1 + |ln t|)^m` as `t → ∞`: `1` unbounded, `0` tends to
/// a positive constant, `-1` tends to zero.
pub(crate) fn growth<T: Real>(a: &Asymptote<T>) -> i32 {
    match sign(a.exponent) {
        0 => sign(a.log_power),
        s => s,
    }
}

fn base<T: Real>(a: &Asymptote<T>, t: T) -> T {
    let mut b = t.powf(a.exponent);
    if a.log_power != T::zero() {
        b *= (T::one() + t.ln().abs()).powf(a.log_power);
    }
    b
}

/// Turning point of `t^e (1 + ln t)^m` on `t >= 1` when `e` and `m` have
/// opposite signs.
fn turning_point<T: Real>(a: &Asymptote<T>) -> Option<T> {
    if sign(a.exponent) * sign(a.log_power) < 0 {
        Some((-a.log_power / a.exponent - T::one()).exp())
    } else {
        None
    }
}

/// `sup_{τ > top}` of a function with asymptote `a` beyond `top`.
pub(crate) fn envelope_sup<T: Real>(a: &Asymptote<T>, top: T) -> T {
    if a.vanishing {
        return T::zero();
    }
    match growth(a) {
        1 => T::infinity(),
        0 if sign(a.exponent) == 0 && sign(a.log_power) == 0 => a.osc_max,
        _ => {
            let at = turning_point(a).map_or(top, |p| p.max(top));
            a.osc_max * base(a, at)
        }
    }
}

/// `inf_{τ > top}` of a function with asymptote `a` beyond `top`.
pub(crate) fn envelope_inf<T: Real>(a: &Asymptote<T>, top: T) -> T {
    if a.vanishing {
        return T::zero();
    }
    match growth(a) {
        -1 => T::zero(),
        0 if sign(a.exponent) == 0 && sign(a.log_power) == 0 => a.osc_min,
        _ => {
            let at = turning_point(a).map_or(top, |p| p.max(top));
            a.osc_min * base(a, at)
        }
    }
}

/// Asymptote of `s ↦ sup_{τ > s} f(τ)`, or `None` when that sup is infinite.
pub(crate) fn tail_sup_asymptote<T: Real>(a: &Asymptote<T>) -> Option<Asymptote<T>> {
    if a.vanishing {
        return Some(Asymptote::zero());
    }
    match growth(a) {
        1 => None,
        _ => Some(Asymptote { osc_min: a.osc_max, ..*a }),
    }
}

/// Asymptote of `s ↦ inf_{τ > s} f(τ)`.
pub(crate) fn tail_inf_asymptote<T: Real>(a: &Asymptote<T>) -> Asymptote<T> {
    if a.vanishing || growth(a) < 0 {
        return Asymptote::zero();
    }
    Asymptote { osc_max: a.osc_min, ..*a }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum TailKind {
    Vanishing,
    Convergent,
    /// Integrand behaves like `t^{-1}`: logarithmic divergence.
    Marginal,
    Divergent,
}

/// Whether `∫^∞` of a function with asymptote `a` converges.
pub(crate) fn classify<T: Real>(a: &Asymptote<T>) -> TailKind {
    if a.vanishing {
        return TailKind::Vanishing;
    }
    match sign(a.exponent + T::one()) {
        -1 => TailKind::Convergent,
        1 => TailKind::Divergent,
        _ if sign(a.log_power + T::one()) < 0 => TailKind::Convergent,
        _ => TailKind::Marginal,
    }
}

pub(crate) fn tail_error<T: Real>(kind: TailKind, what: &str) -> Option<Error> {
    match kind {
        TailKind::Divergent => Some(Error::DivergentTail(what.to_string())),
        TailKind::Marginal => Some(Error::MarginalDivergence(what.to_string())),
        _ => None,
    }
}

/// Log-spaced nodes `start · 10^{k/NODES_PER_DECADE}` over
/// [`Real::half_line_decades`] decades, with geometric cell midpoints.
pub(crate) struct LogGrid<T> {
    pub nodes: Vec<T>,
    pub mids: Vec<T>,
    pub width: T,
}

impl<T: Real> LogGrid<T> {
    pub fn from(start: T) -> Self {
        Self::with_cells(start, T::half_line_decades() * NODES_PER_DECADE)
    }

    /// Starts at `lo` and reaches [`Real::half_line_decades`] decades past `hi`.
    pub fn covering(lo: T, hi: T) -> Self {
        let width = T::LN_10() / T::from_usize_lossy(NODES_PER_DECADE);
        let extra = ((hi / lo).ln() / width).ceil().to_usize().unwrap_or(0);
        Self::with_cells(lo, T::half_line_decades() * NODES_PER_DECADE + extra)
    }

    fn with_cells(start: T, cells: usize) -> Self {
        let width = T::LN_10() / T::from_usize_lossy(NODES_PER_DECADE);
        let at = |k: T| start * (k * width).exp();
        let nodes = (0..=cells).map(|k| at(T::from_usize_lossy(k))).collect();
        let half = T::lit(0.5);
        let mids = (0..cells).map(|k| at(T::from_usize_lossy(k) + half)).collect();
        Self { nodes, mids, width }
    }

    pub fn top(&self) -> T {
        self.nodes[self.nodes.len() - 1]
    }

    /// Midpoint rule in `ln t` for `∫_{start}^{top} f`, given `f` at the
    /// midpoints, plus the closed-form tail from `value_at_top` and `a`.
    pub fn integrate(&self, at_mids: impl Iterator<Item = T>, value_at_top: T, a: &Asymptote<T>) -> T {
        let mut acc = PairwiseSum::new();
        for (v, m) in at_mids.zip(&self.mids) {
            acc.add(v * *m * self.width);
        }
        acc.total() + self.tail(value_at_top, a)
    }

    /// `∫_s^∞` for each `s` in `starts`, all within `[nodes[0], top]`: shared
    /// suffix sums of the midpoint rule from the first node at or above `s`,
    /// plus one midpoint cell below it with integrand `partial(mid, node)`.
    pub fn integrate_from<F: Fn(T, usize) -> T>(
        &self,
        starts: &[T],
        at_mids: &[T],
        partial: F,
        value_at_top: T,
        a: &Asymptote<T>,
    ) -> Vec<T> {
        let terms: Vec<T> = at_mids.iter().zip(&self.mids).map(|(&v, &m)| v * m * self.width).collect();
        let suffix = suffix_sums(&terms);
        let tail = self.tail(value_at_top, a);
        starts
            .iter()
            .map(|&s| {
                let k = self.first_node_from(s);
                let node = self.nodes[k];
                let head = if node > s {
                    let m = (s * node).sqrt();
                    partial(m, k) * m * (node / s).ln()
                } else {
                    T::zero()
                };
                head + suffix[k] + tail
            })
            .collect()
    }

    fn first_node_from(&self, s: T) -> usize {
        let last = self.nodes.len() - 1;
        let guess = ((s / self.nodes[0]).ln() / self.width).ceil().to_usize().unwrap_or(0).min(last);
        let mut k = guess;
        while k > 0 && self.nodes[k - 1] >= s {
            k -= 1;
        }
        while k < last && self.nodes[k] < s {
            k += 1;
        }
        k
    }

    /// `∫_{top}^∞` of `c(τ) τ^e (1 + ln(τ/start))^m` from its value at `top`,
    /// to first order in the log factor.
    fn tail(&self, value_at_top: T, a: &Asymptote<T>) -> T {
        if a.vanishing || value_at_top == T::zero() {
            return T::zero();
        }
        let top = self.top();
        let decay = -(a.exponent + T::one());
        let log_top = T::one() + (top / self.nodes[0]).ln();
        value_at_top * top / decay * (T::one() + a.log_power / (log_top * decay))
    }

    /// Running extremum `ext_{τ >= node_k}` at nodes and at midpoints
    /// (`ext_{τ >= mid_k}`), seeded by `beyond` past the top.
    pub fn running<F: Fn(T) -> T>(&self, f: F, beyond: T, pick: fn(T, T) -> T) -> (Vec<T>, Vec<T>) {
        let k = self.mids.len();
        let mut at_nodes = vec![T::zero(); k + 1];
        let mut at_mids = vec![T::zero(); k];
        at_nodes[k] = pick(f(self.nodes[k]), beyond);
        for j in (0..k).rev() {
            at_mids[j] = pick(f(self.mids[j]), at_nodes[j + 1]);
            at_nodes[j] = pick(f(self.nodes[j]), at_mids[j]);
        }
        (at_nodes, at_mids)
    }
}

fn check_point<T: Real>(s: T) -> Result<()> {
    if !(s > T::zero()) || !s.is_finite() {
        return Err(Error::BadRadius(format!("need a point in (0, inf), got {s}")));
    }
    Ok(())
}

/// `sup_{τ > s} f(τ)`; `+∞` when the tail grows.
pub fn tail_sup<T: Real>(f: &HalfLineFunction<T>, s: T) -> Result<T> {
    check_point(s)?;
    let grid = LogGrid::from(s);
    let beyond = envelope_sup(&f.tail_asymptote(), grid.top());
    Ok(grid.nodes.iter().map(|&t| f.value(t)).fold(beyond, T::max))
}

/// `inf_{τ > s} f(τ)`.
pub fn tail_inf<T: Real>(f: &HalfLineFunction<T>, s: T) -> Result<T> {
    check_point(s)?;
    let grid = LogGrid::from(s);
    let beyond = envelope_inf(&f.tail_asymptote(), grid.top());
    Ok(grid.nodes.iter().map(|&t| f.value(t)).fold(beyond, T::min))
}

/// `∫_s^∞ f(τ) dτ` at every `s` in `starts`, sharing one grid.
pub(crate) fn tail_integrals<T: Real>(f: &HalfLineFunction<T>, starts: &[T]) -> Result<Vec<T>> {
    let Some(lo) = starts.iter().copied().reduce(T::min) else {
        return Ok(Vec::new());
    };
    for &s in starts {
        check_point(s)?;
    }
    let a = f.tail_asymptote();
    if let Some(e) = tail_error::<T>(classify(&a), &format!("integral of {} over ({lo}, inf)", f.label())) {
        return Err(e);
    }
    let hi = starts.iter().copied().fold(lo, T::max);
    let grid = LogGrid::covering(lo, hi);
    let at_mids: Vec<T> = grid.mids.iter().map(|&t| f.value(t)).collect();
    Ok(grid.integrate_from(starts, &at_mids, |m, _| f.value(m), f.value(grid.top()), &a))
}

/// `∫_s^∞ f(τ) dτ`.
pub fn tail_integral<T: Real>(f: &HalfLineFunction<T>, s: T) -> Result<T> {
    check_point(s)?;
    let a = f.tail_asymptote();
    if let Some(e) = tail_error::<T>(classify(&a), &format!("integral of {} over ({s}, inf)", f.label())) {
        return Err(e);
    }
    let grid = LogGrid::from(s);
    Ok(grid.integrate(grid.mids.iter().map(|&t| f.value(t)), f.value(grid.top()), &a))
}
