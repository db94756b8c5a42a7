//! Experiment harness: boundedness sweeps between local Morrey spaces, the
//! local estimate for the fractional integral, pointwise dominations between
//! operators, and the logarithmic oscillation estimate for central Campanato
//! norms.
//!
//! The harness asserts ratio stability and growth trends; it never claims a
//! proof of boundedness.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{FunctionSpec, RadiiSet, WeightSpec};
use crate::conditions::{check_commutator_condition, check_guliyev, ConditionId, ConditionReport, Verdict};
use crate::error::{Error, Result};
use crate::grid::{lp_norm_ball, weak_lp_norm_ball, BallProfile, BallSpec, Grid, GridFunction, Point};
use crate::kernel::{KernelShape, RoughKernel};
use crate::norms::{cbmo_norm, local_morrey_norm, oscillation_gap, weak_local_morrey_norm};
use crate::operators::{
    commutator_maximal, commutator_riesz, commutator_riesz_majorant, default_radii, default_times, marcinkiewicz,
    maximal_rough, riesz_rough, riesz_semigroup_constant, semigroup_potential, EvalPoints, OperatorParams, PointValues,
};
use crate::scalar::{log_log_slope, unit_ball_volume, Real};

/// Declared thresholds of every experiment verdict.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    /// Allowed relative change of `sup_ratio` under grid doubling.
    pub stability: f64,
    /// Last-decade slope separating bounded from growing condition ratios.
    pub verdict_slope: f64,
    /// Log-log slope of the ratio along the sweep flagged as unbounded.
    pub trend_slope: f64,
    /// Relative slack of pointwise dominations.
    pub pointwise: f64,
    /// Allowed max/min spread of the local-estimate constants.
    pub lemma_spread: f64,
}

pub const THRESHOLDS: Thresholds =
    Thresholds { stability: 0.10, verdict_slope: crate::conditions::TREND_SLOPE, trend_slope: 0.2, pointwise: 0.03, lemma_spread: 3.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorId {
    Riesz,
    Maximal,
    CommutatorRiesz,
    CommutatorMaximal,
    Marcinkiewicz,
    Semigroup,
}

impl OperatorId {
    fn is_commutator(self) -> bool {
        matches!(self, OperatorId::CommutatorRiesz | OperatorId::CommutatorMaximal)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    #[default]
    Strong,
    Weak,
}

/// How the norm radii are chosen for each swept function.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RadiiMode<T> {
    /// The declared radii for every function.
    #[default]
    Absolute,
    /// `count` log-spaced radii on `[lo·a, hi·a]`, `a` the function's scale.
    Relative { lo: T, hi: T },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct SweepItem<T: Real> {
    pub id: String,
    pub function: FunctionSpec<T>,
    /// Length scale of the function; defaults to its support radius, else 1.
    #[serde(default)]
    pub scale: Option<T>,
}

impl<T: Real> SweepItem<T> {
    pub fn new(id: impl Into<String>, function: FunctionSpec<T>) -> Self {
        Self { id: id.into(), function, scale: None }
    }

    pub fn scale(&self) -> T {
        self.scale.or_else(|| self.function.support_radius().filter(|&r| r > T::zero())).unwrap_or_else(T::one)
    }
}

fn unit_kernel<T: Real>() -> KernelShape<T> {
    KernelShape::Constant { value: T::one() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct ExperimentSpec<T: Real> {
    pub operator: OperatorId,
    pub params: OperatorParams<T>,
    #[serde(default = "unit_kernel")]
    pub kernel: KernelShape<T>,
    pub weight1: WeightSpec<T>,
    pub weight2: WeightSpec<T>,
    #[serde(default)]
    pub norm: NormKind,
    /// Centre `x0` of the local norms; the origin when absent.
    #[serde(default)]
    pub center: Option<Point<T>>,
    pub functions: Vec<SweepItem<T>>,
    /// The symbol `b` of a commutator.
    #[serde(default)]
    pub symbol: Option<FunctionSpec<T>>,
    pub grid: Grid<T>,
    pub radii: RadiiSet<T>,
    #[serde(default)]
    pub radii_mode: RadiiMode<T>,
    /// Radius or time grid of the maximal, Marcinkiewicz and semigroup operators.
    #[serde(default)]
    pub operator_radii: Option<RadiiSet<T>>,
    #[serde(default)]
    pub ratio_cap: Option<T>,
}

impl<T: Real> ExperimentSpec<T> {
    pub fn center(&self) -> Point<T> {
        self.center.unwrap_or_else(|| Point::origin(self.grid.dim()))
    }

    pub fn rough_kernel(&self) -> Result<RoughKernel<T>> {
        RoughKernel::new(self.grid.dim(), self.kernel.clone())
    }

    fn radii_for(&self, item: &SweepItem<T>) -> Result<RadiiSet<T>> {
        match self.radii_mode {
            RadiiMode::Absolute => Ok(self.radii.clone()),
            RadiiMode::Relative { lo, hi } => {
                let a = item.scale();
                RadiiSet::log_spaced(lo * a, hi * a, self.radii.len())
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.grid.dim();
        self.rough_kernel()?;
        match self.operator {
            OperatorId::Maximal | OperatorId::CommutatorMaximal => self.params.validate_maximal(dim)?,
            _ => self.params.validate_fractional(dim)?,
        }
        self.weight1.validate()?;
        self.weight2.validate()?;
        if self.functions.is_empty() {
            return Err(Error::BadValue("the function sweep is empty".into()));
        }
        for item in &self.functions {
            item.function.validate(dim)?;
        }
        if self.operator.is_commutator() {
            match &self.symbol {
                Some(b) => b.validate(dim)?,
                None => return Err(Error::BadValue("commutator experiments need a symbol".into())),
            }
        }
        if self.center().dim != dim {
            return Err(Error::BadValue("centre dimension differs from the grid".into()));
        }
        if let RadiiMode::Relative { lo, hi } = self.radii_mode {
            if !(lo > T::zero() && hi > lo) {
                return Err(Error::BadRadii(format!("relative window needs 0 < lo < hi, got [{lo}, {hi}]")));
            }
        }
        Ok(())
    }
}

/// One row of a report: a numerator, a denominator and their ratio.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow<T: Real> {
    pub id: String,
    /// Function scale, radius or point coordinate, depending on the experiment.
    pub param: T,
    pub numerator: T,
    pub denominator: T,
    pub ratio: T,
    pub error: Option<String>,
}

impl<T: Real> ExperimentRow<T> {
    fn new(id: String, param: T, numerator: T, denominator: T) -> Self {
        let ratio = if numerator == T::zero() {
            T::zero()
        } else if denominator == T::zero() {
            T::infinity()
        } else {
            numerator / denominator
        };
        Self { id, param, numerator, denominator, ratio, error: None }
    }

    fn failed(id: String, param: T, e: &Error) -> Self {
        Self { id, param, numerator: T::nan(), denominator: T::nan(), ratio: T::nan(), error: Some(e.to_string()) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionSummary<T: Real> {
    pub condition: ConditionId,
    pub verdict: Option<Verdict>,
    pub empirical_c: Option<T>,
    pub error: Option<String>,
}

impl<T: Real> ConditionSummary<T> {
    fn from_result(condition: ConditionId, r: Result<ConditionReport<T>>) -> Self {
        match r {
            Ok(rep) => Self { condition, verdict: Some(rep.verdict), empirical_c: Some(rep.empirical_c), error: None },
            Err(e) => Self { condition, verdict: None, empirical_c: None, error: Some(e.to_string()) },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport<T: Real> {
    pub experiment: String,
    pub rows: Vec<ExperimentRow<T>>,
    pub sup_ratio: T,
    /// Row achieving `sup_ratio`.
    pub worst: Option<String>,
    pub condition: Option<ConditionSummary<T>>,
    /// Log-log slope of the ratio along the sweep.
    pub trend_slope: Option<T>,
    /// Max/min of the positive ratios.
    pub spread: Option<T>,
    pub flags: Vec<String>,
    pub pass: bool,
}

impl<T: Real> ExperimentReport<T> {
    fn assemble(experiment: &str, rows: Vec<ExperimentRow<T>>) -> Self {
        let mut sup_ratio = T::zero();
        let mut worst = None;
        let mut flags = Vec::new();
        for row in &rows {
            if row.error.is_some() {
                if !flags.iter().any(|f| f == "row-error") {
                    flags.push("row-error".to_string());
                }
                continue;
            }
            if worst.is_none() || row.ratio > sup_ratio {
                sup_ratio = row.ratio;
                worst = Some(row.id.clone());
            }
        }
        if sup_ratio.is_infinite() {
            flags.push("infinite-ratio".to_string());
        }
        let positive: Vec<T> = rows.iter().filter(|r| r.error.is_none() && r.ratio > T::zero()).map(|r| r.ratio).collect();
        let spread = if positive.is_empty() {
            None
        } else {
            let lo = positive.iter().copied().fold(T::infinity(), T::min);
            let hi = positive.iter().copied().fold(T::zero(), T::max);
            Some(hi / lo)
        };
        Self {
            experiment: experiment.to_string(),
            rows,
            sup_ratio,
            worst,
            condition: None,
            trend_slope: None,
            spread,
            pass: flags.is_empty(),
            flags,
        }
    }

    fn flag(&mut self, f: &str) {
        self.flags.push(f.to_string());
        self.pass = false;
    }
}

struct Prepared<T: Real> {
    kernel: RoughKernel<T>,
    symbol: Option<GridFunction<T>>,
    center: Point<T>,
}

fn prepare<T: Real>(spec: &ExperimentSpec<T>) -> Result<Prepared<T>> {
    spec.validate()?;
    let symbol = spec.symbol.as_ref().map(|b| b.sample(&spec.grid)).transpose()?;
    Ok(Prepared { kernel: spec.rough_kernel()?, symbol, center: spec.center() })
}

fn apply<T: Real>(spec: &ExperimentSpec<T>, prep: &Prepared<T>, f: &GridFunction<T>, pts: &EvalPoints<T>) -> Result<Vec<T>> {
    let op = OperatorInputs { kernel: &prep.kernel, params: &spec.params, symbol: prep.symbol.as_ref(), radii: spec.operator_radii.as_ref() };
    Ok(evaluate_operator(spec.operator, f, &op, pts)?.values)
}

/// Everything besides `f` and the points that an operator may need.
#[derive(Clone, Copy, Debug)]
pub struct OperatorInputs<'a, T: Real> {
    pub kernel: &'a RoughKernel<T>,
    pub params: &'a OperatorParams<T>,
    /// The symbol `b` of a commutator.
    pub symbol: Option<&'a GridFunction<T>>,
    /// Radius grid of the maximal and Marcinkiewicz operators, time grid of
    /// the semigroup potential; grid-derived defaults when absent.
    pub radii: Option<&'a RadiiSet<T>>,
}

/// Evaluates `operator` on `f` at `pts`.
pub fn evaluate_operator<T: Real>(
    operator: OperatorId,
    f: &GridFunction<T>,
    op: &OperatorInputs<'_, T>,
    pts: &EvalPoints<T>,
) -> Result<PointValues<T>> {
    let grid = f.grid();
    let (k, params) = (op.kernel, op.params);
    let radii = || op.radii.cloned().unwrap_or_else(|| default_radii(grid));
    let b = || op.symbol.ok_or_else(|| Error::BadValue("commutators need a symbol".into()));
    match operator {
        OperatorId::Riesz => riesz_rough(f, k, params, pts),
        OperatorId::Maximal => maximal_rough(f, k, params, pts, &radii()),
        OperatorId::CommutatorRiesz => commutator_riesz(b()?, f, k, params, pts),
        OperatorId::CommutatorMaximal => commutator_maximal(b()?, f, k, params, pts, &radii()),
        OperatorId::Marcinkiewicz => marcinkiewicz(f, k, params, pts, &radii()),
        OperatorId::Semigroup => {
            let times = op.radii.cloned().unwrap_or_else(|| default_times(grid));
            semigroup_potential(f, params.alpha, pts, &times)
        }
    }
}

/// The operator output on every cell of `B(center, radius)`, zero elsewhere.
fn output_on_ball<T: Real>(spec: &ExperimentSpec<T>, prep: &Prepared<T>, f: &GridFunction<T>, radius: T) -> Result<GridFunction<T>> {
    let grid = &spec.grid;
    let mut indices = Vec::new();
    grid.for_each_in_ball(&prep.center, radius, |i, _| indices.push(i));
    if indices.is_empty() {
        return Ok(GridFunction::zeros(*grid));
    }
    let pts = EvalPoints::from_indices(grid, indices);
    let vals = apply(spec, prep, f, &pts)?;
    let mut full = vec![T::zero(); grid.len()];
    for (&i, v) in pts.indices().iter().zip(vals) {
        full[i] = v;
    }
    GridFunction::new(*grid, full)
}

fn boundedness_row<T: Real>(spec: &ExperimentSpec<T>, prep: &Prepared<T>, item: &SweepItem<T>) -> Result<(T, T)> {
    let p = spec.params.require_p()?;
    let q = spec.params.require_q()?;
    let radii = spec.radii_for(item)?;
    let f = item.function.sample(&spec.grid)?;
    let input = local_morrey_norm(&f, p, &spec.weight1, &prep.center, &radii)?.value;
    let tf = output_on_ball(spec, prep, &f, radii.max())?;
    let output = match spec.norm {
        NormKind::Strong => local_morrey_norm(&tf, q, &spec.weight2, &prep.center, &radii)?.value,
        NormKind::Weak => weak_local_morrey_norm(&tf, q, &spec.weight2, &prep.center, &radii)?.value,
    };
    Ok((output, input))
}

/// Ratios `‖Tf‖_{LM_{q,φ2}} / ‖f‖_{LM_{p,φ1}}` over the function sweep, with the
/// matching weight condition recorded first.
///
/// Fails on a row error, an infinite ratio, a ratio above `ratio_cap`, or a
/// log-log slope of the ratio against the function scale of at least
/// [`Thresholds::trend_slope`]. With `p = 1` the cap is not applied.
pub fn run_boundedness_experiment<T: Real>(spec: &ExperimentSpec<T>) -> Result<ExperimentReport<T>> {
    let prep = prepare(spec)?;
    let rows: Vec<ExperimentRow<T>> = spec
        .functions
        .par_iter()
        .map(|item| match boundedness_row(spec, &prep, item) {
            Ok((out, inp)) => ExperimentRow::new(item.id.clone(), item.scale(), out, inp),
            Err(e) => ExperimentRow::failed(item.id.clone(), item.scale(), &e),
        })
        .collect();
    let mut report = ExperimentReport::assemble("boundedness", rows);
    let condition = if spec.operator.is_commutator() {
        let r = check_commutator_condition(&spec.weight1, &spec.weight2, &spec.params, &prep.center, &spec.radii);
        ConditionSummary::from_result(ConditionId::Commutator, r)
    } else {
        let r = check_guliyev(&spec.weight1, &spec.weight2, &spec.params, &prep.center, &spec.radii);
        ConditionSummary::from_result(ConditionId::Guliyev, r)
    };
    report.condition = Some(condition);
    let ok: Vec<&ExperimentRow<T>> = report.rows.iter().filter(|r| r.error.is_none()).collect();
    let xs: Vec<T> = ok.iter().map(|r| r.param).collect();
    let ys: Vec<T> = ok.iter().map(|r| r.ratio).collect();
    report.trend_slope = log_log_slope(&xs, &ys);
    if report.trend_slope.is_some_and(|s| s >= T::lit(THRESHOLDS.trend_slope)) {
        report.flag("unbounded-trend");
    }
    let report_only = spec.params.p == Some(T::one());
    if let Some(cap) = spec.ratio_cap {
        if !report_only && report.sup_ratio > cap {
            report.flag("ratio-above-cap");
        }
    }
    Ok(report)
}

/// Per-radius constants `C(r) = ‖I f‖_{L_q(B(x0,r))} / (r^{n/q} ∫_{2r}^∞ t^{-n/q-1} ‖f‖_{L_p(B(x0,t))} dt)`,
/// with the weak `L_q` norm on the left when the spec asks for it or `p = 1`.
/// Passes when no row is a violation and the positive constants spread by at
/// most [`Thresholds::lemma_spread`].
pub fn run_lemma_local_estimate<T: Real>(spec: &ExperimentSpec<T>, r_list: &RadiiSet<T>) -> Result<ExperimentReport<T>> {
    if spec.operator != OperatorId::Riesz {
        return Err(Error::BadValue("the local estimate concerns the fractional integral (operator \"riesz\")".into()));
    }
    let prep = prepare(spec)?;
    let p = spec.params.require_p()?;
    let q = spec.params.require_q()?;
    let weak = spec.norm == NormKind::Weak || p == T::one();
    let n = T::from_usize_lossy(spec.grid.dim());
    let beta = n / q;
    let mut rows = Vec::new();
    let mut violation = false;
    for item in &spec.functions {
        let f = item.function.sample(&spec.grid)?;
        let tf = output_on_ball(spec, &prep, &f, r_list.max())?;
        let profile = BallProfile::new(&f, &prep.center, p)?;
        let item_rows: Vec<ExperimentRow<T>> = r_list
            .values()
            .par_iter()
            .map(|&r| {
                let id = format!("{}@r={r}", item.id);
                let lhs = BallSpec::new(prep.center, r).and_then(|ball| {
                    if weak {
                        weak_lp_norm_ball(&tf, q, &ball)
                    } else {
                        lp_norm_ball(&tf, q, &ball)
                    }
                });
                match lhs {
                    Ok(l) => ExperimentRow::new(id, r, l, r.powf(beta) * profile.weighted_tail_integral(T::lit(2.0) * r, beta)),
                    Err(e) => ExperimentRow::failed(id, r, &e),
                }
            })
            .collect();
        violation |= item_rows.iter().any(|row| row.ratio.is_infinite());
        rows.extend(item_rows);
    }
    let mut report = ExperimentReport::assemble(if weak { "local-estimate-weak" } else { "local-estimate" }, rows);
    if violation && !report.flags.iter().any(|f| f == "infinite-ratio") {
        report.flag("violation");
    }
    if report.spread.is_some_and(|s| s > T::lit(THRESHOLDS.lemma_spread)) {
        report.flag("spread-above-threshold");
    }
    Ok(report)
}

fn pointwise_pairs<T: Real>(
    spec: &ExperimentSpec<T>,
    prep: &Prepared<T>,
    f: &GridFunction<T>,
    pts: &EvalPoints<T>,
) -> Result<(Vec<T>, Vec<T>)> {
    let dim = spec.grid.dim();
    let (k, params) = (&prep.kernel, &spec.params);
    let riesz_params = OperatorParams::with_alpha(params.alpha);
    let dominating = |scale: T| -> Result<Vec<T>> {
        Ok(riesz_rough(&f.abs(), &k.abs(), &riesz_params, pts)?.values.into_iter().map(|v| scale * v).collect())
    };
    let ball_scale = || unit_ball_volume::<T>(dim).powf(params.alpha / T::from_usize_lossy(dim) - T::one());
    let dominated = apply(spec, prep, f, pts)?;
    let (dominated, dominating) = match spec.operator {
        OperatorId::Riesz => (dominated.into_iter().map(T::abs).collect(), dominating(T::one())?),
        OperatorId::Maximal => (dominated, dominating(ball_scale())?),
        OperatorId::Marcinkiewicz => (dominated, dominating(T::FRAC_1_SQRT_2())?),
        OperatorId::Semigroup => {
            let c = riesz_semigroup_constant(dim, params.alpha);
            let unit = RoughKernel::constant(dim, T::one());
            let i = riesz_rough(&f.abs(), &unit, &riesz_params, pts)?.values;
            (dominated.into_iter().map(T::abs).collect(), i.into_iter().map(|v| c * v).collect())
        }
        OperatorId::CommutatorRiesz | OperatorId::CommutatorMaximal => {
            let b = prep.symbol.as_ref().ok_or_else(|| Error::BadValue("missing symbol".into()))?;
            let major = commutator_riesz_majorant(b, f, k, &riesz_params, pts)?.values;
            let scale = if spec.operator == OperatorId::CommutatorMaximal { ball_scale() } else { T::one() };
            (dominated.into_iter().map(T::abs).collect(), major.into_iter().map(|v| scale * v).collect())
        }
    };
    Ok((dominated, dominating))
}

/// Pointwise dominations at the default evaluation points of the grid:
/// Marcinkiewicz by `2^{-1/2} I_{|Ω|,α}|f|`, maximal by `v_n^{α/n-1} I_{|Ω|,α}|f|`,
/// commutators by their majorants, and the semigroup potential against
/// `c_{n,α} I_α|f|`, which must also agree within tolerance for `f >= 0`.
pub fn run_pointwise_checks<T: Real>(spec: &ExperimentSpec<T>) -> Result<ExperimentReport<T>> {
    let prep = prepare(spec)?;
    let pts = EvalPoints::default_for(&spec.grid);
    let tol = T::lit(THRESHOLDS.pointwise);
    let mut rows = Vec::new();
    let mut equality_failed = false;
    for item in &spec.functions {
        let f = item.function.sample(&spec.grid)?;
        match pointwise_pairs(spec, &prep, &f, &pts) {
            Ok((a, b)) => {
                let nonneg = f.values().iter().all(|&v| v >= T::zero());
                for ((pt, x), y) in pts.points().iter().zip(a).zip(b) {
                    let id = if pt.dim == 1 { format!("{}@{}", item.id, pt.x()) } else { format!("{}@({},{})", item.id, pt.x(), pt.y()) };
                    let row = ExperimentRow::new(id, pt.x(), x, y);
                    if spec.operator == OperatorId::Semigroup && nonneg && y > T::zero() && (row.ratio - T::one()).abs() > tol {
                        equality_failed = true;
                    }
                    rows.push(row);
                }
            }
            Err(e) => rows.push(ExperimentRow::failed(item.id.clone(), T::zero(), &e)),
        }
    }
    let mut report = ExperimentReport::assemble("pointwise", rows);
    if report.sup_ratio > T::one() + tol {
        report.flag("domination-violated");
    }
    if equality_failed {
        report.flag("identity-violated");
    }
    Ok(report)
}

/// `C = gap(r1, r2) / ((1 + |ln(r1/r2)|) ‖b‖_{CBMO})` for each radius pair, the
/// norm taken over the union of the radii. Passes when no pair has a positive
/// gap against a zero norm and, if given, the largest `C` is at most `cap`.
pub fn run_cbmo_log_lemma<T: Real>(
    b_spec: &FunctionSpec<T>,
    grid: &Grid<T>,
    q: T,
    lambda_c: T,
    x0: &Point<T>,
    radius_pairs: &[(T, T)],
    cap: Option<T>,
) -> Result<ExperimentReport<T>> {
    if radius_pairs.is_empty() {
        return Err(Error::BadValue("no radius pairs".into()));
    }
    b_spec.validate(grid.dim())?;
    let b = b_spec.sample(grid)?;
    let mut all: Vec<T> = radius_pairs.iter().flat_map(|&(a, c)| [a, c]).collect();
    all.sort_by(|a, c| a.partial_cmp(c).unwrap_or(std::cmp::Ordering::Equal));
    all.dedup();
    let radii = if all.len() == 1 {
        RadiiSet::from_values(vec![all[0], all[0] * T::lit(2.0)])?
    } else {
        RadiiSet::from_values(all)?
    };
    let norm = cbmo_norm(&b, q, lambda_c, x0, &radii)?.value;
    let rows: Vec<ExperimentRow<T>> = radius_pairs
        .par_iter()
        .map(|&(r1, r2)| {
            let id = format!("({r1},{r2})");
            match oscillation_gap(&b, q, lambda_c, x0, r1, r2) {
                Ok(gap) => ExperimentRow::new(id, r1 / r2, gap, (T::one() + (r1 / r2).ln().abs()) * norm),
                Err(e) => ExperimentRow::failed(id, r1 / r2, &e),
            }
        })
        .collect();
    let mut report = ExperimentReport::assemble("cbmo-log", rows);
    if report.sup_ratio.is_infinite() {
        report.flag("violation");
    }
    if let Some(c) = cap {
        if report.sup_ratio > c {
            report.flag("ratio-above-cap");
        }
    }
    Ok(report)
}
