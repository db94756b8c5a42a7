//! The weighted Hardy operator `H*_w g(t) = ∫_t^∞ g(s) w(s) ds` on
//! non-decreasing `g`, the sharp constant
//! `B = sup_t v2(t) ∫_t^∞ w(s) / (sup_{τ>s} v1(τ)) ds` of
//! `sup_t v2 H*_w g <= C sup_t v1 g`, and the extremal `g = 1 / sup_{τ>t} v1(τ)`.

use serde::Serialize;

use crate::catalog::{Asymptote, RadiiSet};
use crate::error::{Error, Result};
use crate::norms::INFINITY_SENTINEL;
use crate::scalar::Real;
use crate::tails::{
    classify, envelope_sup, exponent_tol, growth, tail_integral, tail_integrals, tail_sup_asymptote, HalfLineFunction, LogGrid,
    Monotonicity, TailKind, NODES_PER_DECADE,
};

pub use crate::tails::{tail_inf, tail_sup};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HardyRow<T: Real> {
    pub t: T,
    pub value: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardyReport<T: Real> {
    /// The constant, `+∞` when the weight triple makes it unbounded.
    pub b: T,
    pub per_t: Vec<HardyRow<T>>,
    pub arg_t: T,
    /// The maximizing `t` is an end of the grid.
    pub sup_truncated: bool,
    /// Best ratio `sup v2 H*_w g / sup v1 g` over the extremal and catalog `g`.
    pub empirical_cstar: Option<T>,
    /// The `g` achieving `empirical_cstar`.
    pub best_g: Option<String>,
    pub note: Option<String>,
}

/// `H*_w g(t)`.
pub fn hardy_apply<T: Real>(g: &HalfLineFunction<T>, w: &HalfLineFunction<T>, t: T) -> Result<T> {
    g.validate()?;
    w.validate()?;
    tail_integral(&g.clone().times(w.clone()), t)
}

/// `∫_t^∞ w(s) / sup_{τ>s} v1(τ) ds` at every `t` in `ts`, `+∞` when it diverges.
fn reciprocal_sup_integrals<T: Real>(v1: &HalfLineFunction<T>, w: &HalfLineFunction<T>, ts: &[T]) -> Vec<T> {
    let a_w = w.tail_asymptote();
    let a_v1 = v1.tail_asymptote();
    let Some(a_sup) = tail_sup_asymptote(&a_v1) else {
        return vec![T::zero(); ts.len()];
    };
    if a_sup.vanishing && !a_w.vanishing {
        return vec![T::infinity(); ts.len()];
    }
    let a_int = a_w.mul(a_sup.pow(-T::one()));
    if matches!(classify(&a_int), TailKind::Divergent | TailKind::Marginal) {
        return vec![T::infinity(); ts.len()];
    }
    let lo = ts.iter().copied().fold(T::infinity(), T::min);
    let hi = ts.iter().copied().fold(lo, T::max);
    let grid = LogGrid::covering(lo, hi);
    let (sup_nodes, sup_mids) = grid.running(|s| v1.value(s), envelope_sup(&a_v1, grid.top()), T::max);
    let ratio = |ws: T, vs: T| if ws == T::zero() { T::zero() } else { ws / vs };
    let at_mids: Vec<T> = grid.mids.iter().zip(&sup_mids).map(|(&m, &s)| ratio(w.value(m), s)).collect();
    let top = grid.nodes.len() - 1;
    grid.integrate_from(
        ts,
        &at_mids,
        |m, k| ratio(w.value(m), v1.value(m).max(sup_nodes[k])),
        ratio(w.value(grid.top()), sup_nodes[top]),
        &a_int,
    )
}

fn blows_up_at_zero<T: Real>(e: T, m: T) -> bool {
    let tol = exponent_tol::<T>();
    e < -tol || (e.abs() <= tol && m > tol)
}

/// Decides `B = ∞` from the asymptotes of the triple at both ends of the
/// half-line; the grid maximum alone cannot.
fn constant_is_infinite<T: Real>(v1: &HalfLineFunction<T>, v2: &HalfLineFunction<T>, w: &HalfLineFunction<T>) -> bool {
    let tol = exponent_tol::<T>();
    // t → ∞
    let Some(a_sup) = tail_sup_asymptote(&v1.tail_asymptote()) else {
        return false;
    };
    let a_w = w.tail_asymptote();
    let a_v2 = v2.tail_asymptote();
    if !a_w.vanishing && !a_v2.vanishing {
        if a_sup.vanishing {
            return true;
        }
        let a_int = a_w.mul(a_sup.pow(-T::one()));
        match classify(&a_int) {
            TailKind::Divergent | TailKind::Marginal => return true,
            TailKind::Convergent => {
                let integral = Asymptote { exponent: a_int.exponent + T::one(), ..a_int };
                if growth(&a_v2.mul(integral)) > 0 {
                    return true;
                }
            }
            TailKind::Vanishing => {}
        }
    }
    // t → 0
    let h_v1 = v1.head_asymptote();
    let h_v2 = v2.head_asymptote();
    let h_w = w.head_asymptote();
    if h_v2.vanishing {
        return false;
    }
    let (e_sup, m_sup) = if !h_v1.vanishing && blows_up_at_zero(h_v1.exponent, h_v1.log_power) {
        (h_v1.exponent, h_v1.log_power)
    } else {
        (T::zero(), T::zero())
    };
    let (mut e0, mut m0) = (h_v2.exponent, h_v2.log_power);
    if !h_w.vanishing {
        let g0 = h_w.exponent - e_sup;
        let mg = h_w.log_power - m_sup;
        if g0 < -T::one() - tol {
            e0 += g0 + T::one();
            m0 += mg;
        } else if (g0 + T::one()).abs() <= tol && mg >= -T::one() - tol {
            m0 += mg + T::one();
        }
    }
    blows_up_at_zero(e0, m0)
}

fn check_span<T: Real>(t_grid: &RadiiSet<T>) -> Result<()> {
    if t_grid.max() / t_grid.min() < T::lit(1e4) * (T::one() - T::lit(1e-9)) {
        return Err(Error::BadRadii(format!(
            "the t-grid must span at least 4 decades, got [{}, {}]",
            t_grid.min(),
            t_grid.max()
        )));
    }
    Ok(())
}

/// Non-decreasing test functions for the ratio checks: constants, powers
/// `t^a`, the saturating `t/(1+t)` and two steps.
pub fn hardy_catalog<T: Real>() -> Vec<HalfLineFunction<T>> {
    let mut out = vec![HalfLineFunction::constant(T::one())];
    for a in [0.25, 0.5, 1.0, 2.0] {
        out.push(HalfLineFunction::power(T::one(), T::lit(a)));
    }
    out.push(HalfLineFunction::saturating());
    out.push(HalfLineFunction::step(T::one(), T::zero(), T::one()));
    out.push(HalfLineFunction::step(T::lit(10.0), T::one(), T::lit(3.0)));
    out.into_iter().map(|g| g.with_monotone(Monotonicity::NonDecreasing)).collect()
}

/// `sup_t v2(t) H*_w g(t) / sup_t v1(t) g(t)` over `t_grid`, the denominator
/// including the analytic tail past the grid. `None` when the denominator is
/// zero or infinite (the inequality is then vacuous).
pub fn hardy_ratio<T: Real>(
    g: &HalfLineFunction<T>,
    v1: &HalfLineFunction<T>,
    v2: &HalfLineFunction<T>,
    w: &HalfLineFunction<T>,
    t_grid: &RadiiSet<T>,
) -> Result<Option<T>> {
    if !g.monotone_on(t_grid.values()) {
        return Err(Error::BadWeight(format!("{} violates its monotonicity flag", g.label())));
    }
    let product = v1.clone().times(g.clone());
    let ts = t_grid.values();
    let den = ts.iter().map(|&t| product.value(t)).fold(tail_sup(&product, t_grid.max())?, T::max);
    if !(den > T::zero()) || !den.is_finite() {
        return Ok(None);
    }
    let gw = g.clone().times(w.clone());
    match tail_integrals(&gw, ts) {
        Ok(v) => Ok(Some(ts.iter().zip(v).map(|(&t, i)| v2.value(t) * i).fold(T::zero(), T::max) / den)),
        Err(Error::DivergentTail(_) | Error::MarginalDivergence(_)) => Ok(Some(T::infinity())),
        Err(e) => Err(e),
    }
}

/// `g(t) = 1 / sup_{τ>t} v1(τ)`, tabulated two decades beyond each end of
/// `t_grid` and continued by its power tail.
pub fn hardy_extremal<T: Real>(v1: &HalfLineFunction<T>, t_grid: &RadiiSet<T>) -> Result<HalfLineFunction<T>> {
    v1.validate()?;
    let Some(a_sup) = tail_sup_asymptote(&v1.tail_asymptote()) else {
        return Err(Error::NoExtremal(format!("sup of {} over every tail is infinite", v1.label())));
    };
    if a_sup.vanishing {
        return Err(Error::NoExtremal(format!("{} vanishes at infinity", v1.label())));
    }
    let lo = t_grid.min() / T::lit(100.0);
    let hi = t_grid.max() * T::lit(100.0);
    let step = T::LN_10() / T::from_usize_lossy(NODES_PER_DECADE);
    let count = ((hi / lo).ln() / step).ceil().to_usize().unwrap_or(1) + 1;
    let radii: Vec<T> = (0..count).map(|k| lo * (T::from_usize_lossy(k) * step).exp()).collect();
    let mut sup = tail_sup(v1, radii[count - 1])?;
    let mut values = vec![T::zero(); count];
    for k in (0..count).rev() {
        sup = sup.max(v1.value(radii[k]));
        if !(sup > T::zero()) || !sup.is_finite() {
            return Err(Error::NoExtremal(format!("tail sup of {} is {sup} at {}", v1.label(), radii[k])));
        }
        values[k] = sup.recip();
    }
    Ok(HalfLineFunction::tabulated(radii, values, -a_sup.exponent)?.with_monotone(Monotonicity::NonDecreasing))
}

/// `B` over `t_grid` with `+∞` detection, plus the best ratio achieved by the
/// extremal function and the catalog when `B` is finite.
pub fn hardy_constant<T: Real>(
    v1: &HalfLineFunction<T>,
    v2: &HalfLineFunction<T>,
    w: &HalfLineFunction<T>,
    t_grid: &RadiiSet<T>,
) -> Result<HardyReport<T>> {
    for f in [v1, v2, w] {
        f.validate()?;
    }
    check_span(t_grid)?;
    let ts = t_grid.values();
    let values: Vec<T> = ts.iter().zip(reciprocal_sup_integrals(v1, w, ts)).map(|(&t, i)| v2.value(t) * i).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    let per_t: Vec<HardyRow<T>> = ts.iter().zip(&values).map(|(&t, &value)| HardyRow { t, value }).collect();
    let infinite = constant_is_infinite(v1, v2, w) || values[best] > T::lit(INFINITY_SENTINEL);
    let b = if infinite { T::infinity() } else { values[best] };
    let mut report = HardyReport {
        b,
        per_t,
        arg_t: ts[best],
        sup_truncated: best == 0 || best == ts.len() - 1,
        empirical_cstar: None,
        best_g: None,
        note: None,
    };
    if tail_sup_asymptote(&v1.tail_asymptote()).is_none() {
        report.note = Some("tail sup of v1 is infinite; the inequality is vacuous".into());
        return Ok(report);
    }
    if infinite || b == T::zero() {
        return Ok(report);
    }
    let mut candidates = Vec::new();
    match hardy_extremal(v1, t_grid) {
        Ok(g) => candidates.push(("extremal".to_string(), g)),
        Err(e) => report.note = Some(e.to_string()),
    }
    candidates.extend(hardy_catalog().into_iter().map(|g| (g.label(), g)));
    for (label, g) in candidates {
        if let Some(r) = hardy_ratio(&g, v1, v2, w, t_grid)? {
            if report.empirical_cstar.map_or(true, |c| r > c) {
                report.empirical_cstar = Some(r);
                report.best_g = Some(label);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{Tail, WeightSpec};
    use proptest::prelude::*;

    fn pw(a: f64) -> HalfLineFunction<f64> {
        HalfLineFunction::power(1.0, a)
    }

    fn grid() -> RadiiSet<f64> {
        RadiiSet::log_spaced(1e-2, 1e3, 41).unwrap()
    }

    #[test]
    fn apply_examples() {
        let radii: Vec<f64> = (0..=500).map(|k| 10f64.powf(-3.0 + k as f64 / 100.0)).collect();
        let values: Vec<f64> = radii.iter().map(|r| (-r).exp().max(1e-300)).collect();
        let w = HalfLineFunction::weight(WeightSpec::Tabulated { radii, values, tail: Tail::Vanishing, doubling: None });
        let v = hardy_apply(&HalfLineFunction::constant(1.0), &w, 1.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 0.01 * (-1.0f64).exp());
        let v = hardy_apply(&pw(1.0), &pw(-3.0), 2.0).unwrap();
        assert!((v - 0.5).abs() < 0.005);
        assert_eq!(hardy_apply(&pw(1.0), &HalfLineFunction::constant(0.0), 2.0).unwrap(), 0.0);
        assert_eq!(hardy_apply(&pw(2.0), &pw(-3.0), 1.0).unwrap_err().code(), "marginal-divergence");
    }

    #[test]
    fn sharp_constant_fixture() {
        let report = hardy_constant(&pw(-1.0), &pw(1.0), &pw(-3.0), &grid()).unwrap();
        assert!((report.b - 1.0).abs() < 0.02, "{}", report.b);
        let c = report.empirical_cstar.unwrap();
        assert!(c >= 0.97 && c <= 1.03, "{c}");
        let g = hardy_extremal(&pw(-1.0), &grid()).unwrap();
        let r = hardy_ratio(&g, &pw(-1.0), &pw(1.0), &pw(-3.0), &grid()).unwrap().unwrap();
        assert!(r >= 0.97, "{r}");
        let blown = hardy_constant(&pw(-1.0), &pw(2.0), &pw(-3.0), &grid()).unwrap();
        assert_eq!(blown.b, f64::INFINITY);
        assert!(blown.empirical_cstar.is_none());
    }

    #[test]
    fn scaling_v2_scales_b() {
        let a = hardy_constant(&pw(-1.0), &pw(1.0), &pw(-3.0), &grid()).unwrap();
        let b = hardy_constant(&pw(-1.0), &HalfLineFunction::power(4.0, 1.0), &pw(-3.0), &grid()).unwrap();
        assert_eq!(b.b, 4.0 * a.b);
    }

    #[test]
    fn extremal_examples() {
        let g = hardy_extremal(&pw(-1.0), &grid()).unwrap();
        for t in [0.01, 0.3, 7.0, 1e3, 1e6] {
            assert!((g.value(t) - t).abs() < 1e-9 * t);
        }
        let one = hardy_extremal(&HalfLineFunction::constant(1.0), &grid()).unwrap();
        assert_eq!(one.value(3.0), 1.0);
        let osc = HalfLineFunction::weight(WeightSpec::OscPower { kappa: 0.0, a: 1.0 });
        let third = hardy_extremal(&osc, &grid()).unwrap();
        assert_eq!(third.value(0.5), 1.0 / 3.0);
        assert_eq!(hardy_extremal(&pw(1.0), &grid()).unwrap_err().code(), "no-extremal");
    }

    #[test]
    fn rejects_short_grid_and_non_monotone_test_function() {
        let short = RadiiSet::log_spaced(1.0, 100.0, 10).unwrap();
        assert_eq!(hardy_constant(&pw(-1.0), &pw(1.0), &pw(-3.0), &short).unwrap_err().code(), "bad-radii");
        let bad = pw(-1.0).with_monotone(Monotonicity::NonDecreasing);
        assert_eq!(hardy_ratio(&bad, &pw(-1.0), &pw(1.0), &pw(-3.0), &grid()).unwrap_err().code(), "bad-weight");
    }

    #[test]
    fn vacuous_when_v1_grows() {
        let r = hardy_constant(&pw(1.0), &pw(1.0), &pw(-3.0), &grid()).unwrap();
        assert_eq!(r.b, 0.0);
        assert!(r.note.is_some());
    }

    #[test]
    fn head_divergence_detected() {
        // v2 = t^{-1/2} with w = s^{-3/2}, v1 = 1: ∫_t^∞ s^{-3/2} = 2t^{-1/2}, product 2t^{-1}
        let r = hardy_constant(&HalfLineFunction::constant(1.0), &pw(-0.5), &pw(-1.5), &grid()).unwrap();
        assert_eq!(r.b, f64::INFINITY);
    }

    #[test]
    fn apply_is_non_increasing_in_t() {
        let g = HalfLineFunction::saturating();
        let w = pw(-2.5);
        let mut prev = f64::INFINITY;
        for t in grid().values() {
            let v = hardy_apply(&g, &w, *t).unwrap();
            assert!(v <= prev * (1.0 + 1e-9));
            prev = v;
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn power_triples(a in 0.1f64..2.0, extra in 0.2f64..2.0) {
            // v1 = t^{-a}, w = s^{b} with a + b = -1 - extra, v2 = t^{extra}: B = 1/extra
            let b_exp = -1.0 - extra - a;
            let report = hardy_constant(&pw(-a), &pw(extra), &pw(b_exp), &grid()).unwrap();
            prop_assert!((report.b * extra - 1.0).abs() < 0.02);
            let c = report.empirical_cstar.unwrap();
            prop_assert!(c >= report.b * 0.97 && c <= report.b * 1.03);
            for g in hardy_catalog() {
                if let Some(r) = hardy_ratio(&g, &pw(-a), &pw(extra), &pw(b_exp), &grid()).unwrap() {
                    prop_assert!(r <= report.b * 1.03, "{} gives {r}", g.label());
                }
            }
        }

        #[test]
        fn apply_is_monotone_in_g(c in 1.0f64..4.0, t in 0.01f64..100.0) {
            let w = pw(-3.0);
            let small = hardy_apply(&HalfLineFunction::saturating(), &w, t).unwrap();
            let big = hardy_apply(&HalfLineFunction::saturating().times(HalfLineFunction::constant(c)), &w, t).unwrap();
            prop_assert!(small <= big);
        }
    }
}
