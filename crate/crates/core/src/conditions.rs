//! Checkers for the weight-pair conditions behind the boundedness theorems.
//!
//! Each checker evaluates a left-hand side `LHS(r)` on a [`RadiiSet`], divides
//! by the right-hand weight, and reports the largest ratio together with a
//! verdict. Divergent improper integrals are detected from the declared tail
//! asymptotes before any quadrature.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{Asymptote, RadiiSet, WeightSpec};
use crate::error::{Error, Result};
use crate::grid::Point;
use crate::norms::INFINITY_SENTINEL;
use crate::operators::OperatorParams;
use crate::scalar::{log_log_slope, Real};
use crate::tails::{
    classify, envelope_inf, exponent_tol, tail_inf_asymptote, tail_integral, HalfLineFunction, LogGrid, TailKind,
};

/// Largest last-decade log-log slope of the running-max ratio still counted as bounded.
pub const TREND_SLOPE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionId {
    Doubling,
    Nakai,
    Spanne,
    Guliyev,
    Commutator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    FailsDivergent,
    FailsGrowing,
    Marginal,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::FailsDivergent => "fails-divergent",
            Verdict::FailsGrowing => "fails-growing",
            Verdict::Marginal => "marginal",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConditionRow<T: Real> {
    pub r: T,
    pub lhs: T,
    pub ratio: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport<T: Real> {
    pub condition: ConditionId,
    pub per_r: Vec<ConditionRow<T>>,
    pub empirical_c: T,
    pub verdict: Verdict,
    /// Last-decade log-log slope of the running maximum of the ratio.
    pub trend_slope: Option<T>,
    pub tail_note: String,
}

impl<T: Real> ConditionReport<T> {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    fn divergent(condition: ConditionId, radii: &RadiiSet<T>, kind: TailKind, note: String) -> Self {
        let inf = T::infinity();
        Self {
            condition,
            per_r: radii.values().iter().map(|&r| ConditionRow { r, lhs: inf, ratio: inf }).collect(),
            empirical_c: inf,
            verdict: if kind == TailKind::Marginal { Verdict::Marginal } else { Verdict::FailsDivergent },
            trend_slope: None,
            tail_note: note,
        }
    }

    fn from_rows(condition: ConditionId, per_r: Vec<ConditionRow<T>>, tail_note: String) -> Self {
        let empirical_c = per_r.iter().map(|row| row.ratio).fold(T::zero(), T::max);
        let trend_slope = trend(&per_r);
        let growing = empirical_c > T::lit(INFINITY_SENTINEL)
            || empirical_c.is_nan()
            || trend_slope.is_some_and(|s| s > T::lit(TREND_SLOPE));
        Self {
            condition,
            per_r,
            empirical_c: if empirical_c > T::lit(INFINITY_SENTINEL) { T::infinity() } else { empirical_c },
            verdict: if growing { Verdict::FailsGrowing } else { Verdict::Holds },
            trend_slope,
            tail_note,
        }
    }
}

/// Slope of the running maximum of the ratio over the last decade of radii.
fn trend<T: Real>(rows: &[ConditionRow<T>]) -> Option<T> {
    let r_max = rows.last()?.r;
    let mut running = T::zero();
    let maxima: Vec<T> = rows
        .iter()
        .map(|row| {
            running = running.max(row.ratio);
            running
        })
        .collect();
    let start = rows.iter().position(|row| row.r >= r_max / T::lit(10.0)).unwrap_or(0);
    let start = start.min(rows.len().saturating_sub(2));
    let xs: Vec<T> = rows[start..].iter().map(|row| row.r).collect();
    log_log_slope(&xs, &maxima[start..]).or(Some(T::zero()))
}

fn describe<T: Real>(a: &Asymptote<T>) -> String {
    if a.vanishing {
        "integrand vanishes past the table".into()
    } else if a.log_power == T::zero() {
        format!("integrand ~ t^{}", a.exponent)
    } else {
        format!("integrand ~ t^{} (log)^{}", a.exponent, a.log_power)
    }
}

fn rows<T: Real>(radii: &RadiiSet<T>, lhs: impl Fn(T) -> Result<T> + Sync, rhs: impl Fn(T) -> T + Sync) -> Result<Vec<ConditionRow<T>>> {
    radii
        .values()
        .par_iter()
        .map(|&r| {
            let l = lhs(r)?;
            let d = rhs(r);
            let ratio = if l == T::zero() { T::zero() } else { l / d };
            Ok(ConditionRow { r, lhs: l, ratio })
        })
        .collect()
}

fn check_alpha_p<T: Real>(params: &OperatorParams<T>) -> Result<T> {
    if !(params.alpha > T::zero()) {
        return Err(Error::BadAlpha(format!("need alpha > 0, got {}", params.alpha)));
    }
    let p = params.require_p()?;
    if !(p >= T::one()) {
        return Err(Error::BadExponent(format!("need p >= 1, got {p}")));
    }
    Ok(p)
}

/// `max_{r, t ∈ {r, 1.25r, 1.5r, 2r}} max(φ(t)/φ(r), φ(r)/φ(t))`. Fails when the
/// running maximum keeps growing or exceeds a doubling constant declared by
/// the weight.
pub fn check_doubling<T: Real>(phi: &WeightSpec<T>, radii: &RadiiSet<T>) -> Result<ConditionReport<T>> {
    phi.validate()?;
    let quotient = |a: T, b: T| {
        if a == b {
            T::one()
        } else if a == T::zero() || b == T::zero() {
            T::infinity()
        } else {
            (a / b).max(b / a)
        }
    };
    let per_r = rows(
        radii,
        |r| {
            let base = phi.value(r);
            Ok([1.0, 1.25, 1.5, 2.0].iter().map(|&c| quotient(phi.value(T::lit(c) * r), base)).fold(T::one(), T::max))
        },
        |_| T::one(),
    )?;
    let mut report = ConditionReport::from_rows(ConditionId::Doubling, per_r, "sampled on [r, 2r]".into());
    if let Some(declared) = phi.declared_doubling() {
        report.tail_note = format!("declared doubling constant {declared}");
        if report.empirical_c > declared * (T::one() + T::lit(1e-9)) {
            report.verdict = Verdict::FailsGrowing;
        }
    }
    Ok(report)
}

/// `∫_r^∞ t^{αp} φ(t)^p dt/t` against `r^{αp} φ(r)^p`.
pub fn check_nakai_integral<T: Real>(phi: &WeightSpec<T>, params: &OperatorParams<T>, radii: &RadiiSet<T>) -> Result<ConditionReport<T>> {
    phi.validate()?;
    let p = check_alpha_p(params)?;
    let ap = params.alpha * p;
    let integrand = HalfLineFunction::power(T::one(), ap - T::one()).times(HalfLineFunction::weight(phi.clone()).pow(p));
    integral_check(ConditionId::Nakai, &integrand, radii, |r| r.powf(ap) * phi.value(r).powf(p))
}

/// `∫_r^∞ t^{α-1} φ1(t) dt` against `φ2(r)`.
pub fn check_spanne<T: Real>(
    phi1: &WeightSpec<T>,
    phi2: &WeightSpec<T>,
    params: &OperatorParams<T>,
    radii: &RadiiSet<T>,
) -> Result<ConditionReport<T>> {
    phi1.validate()?;
    phi2.validate()?;
    if !(params.alpha > T::zero()) {
        return Err(Error::BadAlpha(format!("need alpha > 0, got {}", params.alpha)));
    }
    let integrand = HalfLineFunction::power(T::one(), params.alpha - T::one()).times(HalfLineFunction::weight(phi1.clone()));
    integral_check(ConditionId::Spanne, &integrand, radii, |r| phi2.value(r))
}

fn integral_check<T: Real>(
    id: ConditionId,
    integrand: &HalfLineFunction<T>,
    radii: &RadiiSet<T>,
    rhs: impl Fn(T) -> T + Sync,
) -> Result<ConditionReport<T>> {
    let a = integrand.tail_asymptote();
    let kind = classify(&a);
    if matches!(kind, TailKind::Divergent | TailKind::Marginal) {
        return Ok(ConditionReport::divergent(id, radii, kind, describe(&a)));
    }
    let per_r = rows(radii, |r| tail_integral(integrand, r), rhs)?;
    Ok(ConditionReport::from_rows(id, per_r, describe(&a)))
}

/// `∫_r^∞ (1 + ln(t/r))^m · inf_{τ>t} [φ1(τ) τ^{n/p}] · t^{-β-1} dt` for the
/// Guliyev-type (`m = 0`) and commutator (`m = 1`) conditions.
fn tail_inf_check<T: Real>(
    id: ConditionId,
    phi1: &WeightSpec<T>,
    phi2: &WeightSpec<T>,
    n_over_p: T,
    beta: T,
    log_power: T,
    radii: &RadiiSet<T>,
) -> Result<ConditionReport<T>> {
    let inner = HalfLineFunction::weight(phi1.clone()).times(HalfLineFunction::power(T::one(), n_over_p));
    let a_inner = inner.tail_asymptote();
    let a = tail_inf_asymptote(&a_inner).mul(Asymptote { log_power, ..Asymptote::power(-beta - T::one()) });
    if beta <= exponent_tol() {
        let note = format!("t^{{-beta-1}} with beta = {beta} is not integrable");
        return Ok(ConditionReport::divergent(id, radii, TailKind::Divergent, note));
    }
    let kind = classify(&a);
    if matches!(kind, TailKind::Divergent | TailKind::Marginal) {
        return Ok(ConditionReport::divergent(id, radii, kind, describe(&a)));
    }
    let lhs = |r: T| {
        let grid = LogGrid::from(r);
        let (inf_nodes, inf_mids) = grid.running(|t| inner.value(t), envelope_inf(&a_inner, grid.top()), T::min);
        let outer = |t: T, v: T| {
            if v == T::zero() {
                return T::zero();
            }
            let mut x = v * t.powf(-beta - T::one());
            if log_power != T::zero() {
                x *= (T::one() + (t / r).ln()).powf(log_power);
            }
            x
        };
        let top = grid.nodes.len() - 1;
        Ok(grid.integrate(
            grid.mids.iter().zip(&inf_mids).map(|(&t, &v)| outer(t, v)),
            outer(grid.top(), inf_nodes[top]),
            &a,
        ))
    };
    let per_r = rows(radii, lhs, |r| phi2.value(r))?;
    let note = if tail_inf_asymptote(&a_inner).vanishing {
        "tail inf of phi1(t) t^{n/p} is zero".into()
    } else {
        describe(&a)
    };
    Ok(ConditionReport::from_rows(id, per_r, note))
}

fn sobolev_pair<T: Real>(params: &OperatorParams<T>, dim: usize) -> Result<(T, T)> {
    params.validate_fractional(dim)?;
    let n = T::from_usize_lossy(dim);
    Ok((n / check_alpha_p(params)?, n / params.require_q()?))
}

/// `∫_r^∞ inf_{τ>t}[φ1(τ) τ^{n/p}] t^{-n/q-1} dt` against `φ2(r)`; weights do not
/// depend on `x0`, which only fixes the dimension.
pub fn check_guliyev<T: Real>(
    phi1: &WeightSpec<T>,
    phi2: &WeightSpec<T>,
    params: &OperatorParams<T>,
    x0: &Point<T>,
    radii: &RadiiSet<T>,
) -> Result<ConditionReport<T>> {
    phi1.validate()?;
    phi2.validate()?;
    let (n_over_p, n_over_q) = sobolev_pair(params, x0.dim)?;
    tail_inf_check(ConditionId::Guliyev, phi1, phi2, n_over_p, n_over_q, T::zero(), radii)
}

/// As [`check_guliyev`] with the factor `1 + ln(t/r)` and `t^{-(n/q - nλ) - 1}`.
pub fn check_commutator_condition<T: Real>(
    phi1: &WeightSpec<T>,
    phi2: &WeightSpec<T>,
    params: &OperatorParams<T>,
    x0: &Point<T>,
    radii: &RadiiSet<T>,
) -> Result<ConditionReport<T>> {
    phi1.validate()?;
    phi2.validate()?;
    let (n_over_p, n_over_q) = sobolev_pair(params, x0.dim)?;
    let n = T::from_usize_lossy(x0.dim);
    let beta = n_over_q - n * params.lambda_or_zero();
    tail_inf_check(ConditionId::Commutator, phi1, phi2, n_over_p, beta, T::one(), radii)
}
