use serde_json::{Map, Value};

use roughmorrey::catalog::RadiiSet;
use roughmorrey::conditions::{
    check_commutator_condition, check_doubling, check_guliyev, check_nakai_integral, check_spanne, ConditionId, ConditionReport,
};
use roughmorrey::grid::{Grid, Point};
use roughmorrey::hardy::{hardy_constant, hardy_extremal, hardy_ratio};
use roughmorrey::kernel::{KernelShape, RoughKernel};
use roughmorrey::norms::{
    beurling_algebra_norm, beurling_norm, cbmo_norm, global_morrey_norm, local_morrey_norm, weak_local_morrey_norm, NormResult,
};
use roughmorrey::operators::EvalPoints;
use roughmorrey::verify::{
    evaluate_operator, run_boundedness_experiment, run_cbmo_log_lemma, run_lemma_local_estimate, run_pointwise_checks,
    ExperimentReport, ExperimentSpec, OperatorInputs,
};
use roughmorrey::Error;

use crate::config::{
    check_keys, parse, ApplyConfig, CbmoLogConfig, CheckConfig, ExperimentKind, HardyConfig, KernelInfoConfig, NormConfig,
    NormSelector, EXPERIMENT_KEYS,
};
use crate::report::{Cell, Report};

/// A finished command: its report and whether its verdict passed.
pub struct Outcome {
    pub report: Report,
    pub pass: bool,
}

impl Outcome {
    fn done(report: Report) -> Self {
        Self { report, pass: true }
    }
}

fn core(e: Error) -> String {
    format!("{}: {e}", e.code())
}

fn point_cells(p: &Point<f64>) -> [Cell; 2] {
    let y = if p.dim == 2 { Cell::Num(p.y()) } else { Cell::Empty };
    [Cell::Num(p.x()), y]
}

fn required<T>(v: Option<T>, what: &str) -> Result<T, String> {
    v.ok_or_else(|| format!("invalid config: missing field `{what}`"))
}

fn norm_report(kind: &str, res: &NormResult<f64>) -> Report {
    let mut r = Report::new("norm", &["center_x", "center_y", "radius", "term"]);
    r.field("kind", kind);
    r.field("value", res.value);
    r.field("argmax_radius", res.argmax_radius);
    let [x, y] = point_cells(&res.argmax_center);
    r.field("argmax_center_x", x);
    r.field("argmax_center_y", y);
    r.field("sup_truncated", res.sup_truncated);
    for t in &res.per_radius {
        let [x, y] = point_cells(&t.center);
        r.row(vec![x, y, t.radius.into(), t.term.into()]);
    }
    r
}

fn scalar_report(kind: &str, values: &[(&str, f64)]) -> Report {
    let mut r = Report::new("norm", &["quantity", "value"]);
    r.field("kind", kind);
    r.field("value", values[0].1);
    for (name, v) in values {
        r.row(vec![(*name).into(), (*v).into()]);
    }
    r
}

pub fn norm(map: Map<String, Value>) -> Result<Outcome, String> {
    let cfg: NormConfig = parse(map)?;
    cfg.function.validate(cfg.grid.dim()).map_err(core)?;
    let f = cfg.function.sample(&cfg.grid).map_err(core)?;
    let center = cfg.center.unwrap_or_else(|| Point::origin(cfg.grid.dim()));
    let radii = || required(cfg.radii.clone(), "radii");
    let report = match &cfg.norm {
        NormSelector::LocalMorrey { p, weak } => {
            let w = required(cfg.weight1.clone(), "weight1")?;
            let res = if *weak {
                weak_local_morrey_norm(&f, *p, &w, &center, &radii()?)
            } else {
                local_morrey_norm(&f, *p, &w, &center, &radii()?)
            };
            norm_report(if *weak { "weak_local_morrey" } else { "local_morrey" }, &res.map_err(core)?)
        }
        NormSelector::GlobalMorrey { p, centers } => {
            let w = required(cfg.weight1.clone(), "weight1")?;
            norm_report("global_morrey", &global_morrey_norm(&f, *p, &w, centers, &radii()?).map_err(core)?)
        }
        NormSelector::Beurling { q, homogeneous, k_min, k_max } => {
            let v = beurling_norm(&f, *q, *homogeneous, (*k_min, *k_max)).map_err(core)?;
            scalar_report(if *homogeneous { "beurling" } else { "beurling_inhomogeneous" }, &[("value", v)])
        }
        NormSelector::BeurlingAlgebra { q, k_max } => {
            let s = beurling_algebra_norm(&f, *q, *k_max).map_err(core)?;
            scalar_report("beurling_algebra", &[("value", s.value), ("remainder", s.remainder)])
        }
        NormSelector::Cbmo { q, lambda } => norm_report("cbmo", &cbmo_norm(&f, *q, *lambda, &center, &radii()?).map_err(core)?),
    };
    Ok(Outcome::done(report))
}

fn unit_kernel() -> KernelShape<f64> {
    KernelShape::Constant { value: 1.0 }
}

pub fn apply(map: Map<String, Value>) -> Result<Outcome, String> {
    let cfg: ApplyConfig = parse(map)?;
    let grid: Grid<f64> = cfg.grid;
    let kernel = RoughKernel::new(grid.dim(), cfg.kernel.clone().unwrap_or_else(unit_kernel)).map_err(core)?;
    cfg.function.validate(grid.dim()).map_err(core)?;
    let f = cfg.function.sample(&grid).map_err(core)?;
    let symbol = match &cfg.symbol {
        Some(b) => {
            b.validate(grid.dim()).map_err(core)?;
            Some(b.sample(&grid).map_err(core)?)
        }
        None => None,
    };
    let pts = match &cfg.points {
        Some(p) => EvalPoints::snap(&grid, p).map_err(core)?,
        None => EvalPoints::default_for(&grid),
    };
    let inputs = OperatorInputs { kernel: &kernel, params: &cfg.params, symbol: symbol.as_ref(), radii: cfg.operator_radii.as_ref() };
    let out = evaluate_operator(cfg.operator, &f, &inputs, &pts).map_err(core)?;
    let mut r = Report::new("apply", &["x", "y", "value", "tail_estimate"]);
    r.field("operator", serde_json::to_value(cfg.operator).map_or(Cell::Empty, |v| v.as_str().unwrap_or_default().into()));
    r.field("points", out.len());
    for ((p, v), t) in out.points.iter().zip(&out.values).zip(&out.tail_estimate) {
        let [x, y] = point_cells(p);
        r.row(vec![x, y, (*v).into(), (*t).into()]);
    }
    Ok(Outcome::done(r))
}

/// Passes when the extremal function reaches `0.97 B` and no test function
/// exceeds `1.03 B`; infinite and vacuous constants pass with their verdict.
pub fn hardy(map: Map<String, Value>) -> Result<Outcome, String> {
    let cfg: HardyConfig = parse(map)?;
    let t_grid = match cfg.radii {
        Some(r) => r,
        None => RadiiSet::log_spaced(1e-2, 1e3, 41).map_err(core)?,
    };
    let rep = hardy_constant(&cfg.v1, &cfg.v2, &cfg.w, &t_grid).map_err(core)?;
    let extremal = if rep.b.is_finite() && rep.b > 0.0 {
        match hardy_extremal(&cfg.v1, &t_grid) {
            Ok(g) => hardy_ratio(&g, &cfg.v1, &cfg.v2, &cfg.w, &t_grid).map_err(core)?,
            Err(_) => None,
        }
    } else {
        None
    };
    let (verdict, pass) = if rep.b.is_infinite() {
        ("infinite", true)
    } else if rep.b == 0.0 {
        ("vacuous", true)
    } else {
        let reached = extremal.is_none_or(|e| e >= 0.97 * rep.b);
        let capped = rep.empirical_cstar.is_none_or(|c| c <= 1.03 * rep.b);
        if reached && capped {
            ("sharp", true)
        } else {
            ("violated", false)
        }
    };
    let mut r = Report::new("hardy", &["t", "value"]);
    r.field("b", rep.b);
    r.field("arg_t", rep.arg_t);
    r.field("sup_truncated", rep.sup_truncated);
    r.field("empirical_cstar", rep.empirical_cstar);
    r.field("best_g", rep.best_g.clone());
    r.field("extremal_ratio", extremal);
    r.field("verdict", verdict);
    r.field("note", rep.note.clone());
    for row in &rep.per_t {
        r.row(vec![row.t.into(), row.value.into()]);
    }
    Ok(Outcome { report: r, pass })
}

fn condition_outcome(rep: &ConditionReport<f64>) -> Outcome {
    let mut r = Report::new("check", &["r", "lhs", "ratio"]);
    r.field("condition", serde_json::to_value(rep.condition).map_or(Cell::Empty, |v| v.as_str().unwrap_or_default().into()));
    r.field("verdict", rep.verdict.as_str());
    r.field("empirical_c", rep.empirical_c);
    r.field("trend_slope", rep.trend_slope);
    r.field("tail_note", rep.tail_note.clone());
    for row in &rep.per_r {
        r.row(vec![row.r.into(), row.lhs.into(), row.ratio.into()]);
    }
    Outcome { report: r, pass: rep.holds() }
}

pub fn check(map: Map<String, Value>) -> Result<Outcome, String> {
    let cfg: CheckConfig = parse(map)?;
    let phi1 = &cfg.weight1;
    let phi2 = || required(cfg.weight2.clone(), "weight2");
    let params = || required(cfg.params, "params");
    let x0 = cfg.center.unwrap_or_else(|| Point::origin(1));
    let rep = match cfg.condition {
        ConditionId::Doubling => check_doubling(phi1, &cfg.radii),
        ConditionId::Nakai => check_nakai_integral(phi1, &params()?, &cfg.radii),
        ConditionId::Spanne => check_spanne(phi1, &phi2()?, &params()?, &cfg.radii),
        ConditionId::Guliyev => check_guliyev(phi1, &phi2()?, &params()?, &x0, &cfg.radii),
        ConditionId::Commutator => check_commutator_condition(phi1, &phi2()?, &params()?, &x0, &cfg.radii),
    }
    .map_err(core)?;
    Ok(condition_outcome(&rep))
}

fn experiment_outcome(rep: &ExperimentReport<f64>) -> Outcome {
    let mut r = Report::new("verify", &["id", "param", "numerator", "denominator", "ratio", "error"]);
    r.field("experiment", rep.experiment.clone());
    r.field("sup_ratio", rep.sup_ratio);
    r.field("worst", rep.worst.clone());
    if let Some(c) = &rep.condition {
        r.field("condition", serde_json::to_value(c.condition).map_or(Cell::Empty, |v| v.as_str().unwrap_or_default().into()));
        r.field("condition_verdict", c.verdict.map(|v| v.as_str()));
        r.field("condition_c", c.empirical_c);
        r.field("condition_error", c.error.clone());
    }
    r.field("trend_slope", rep.trend_slope);
    r.field("spread", rep.spread);
    r.field("flags", rep.flags.join(";"));
    r.field("pass", rep.pass);
    for row in &rep.rows {
        r.row(vec![
            row.id.clone().into(),
            row.param.into(),
            row.numerator.into(),
            row.denominator.into(),
            row.ratio.into(),
            row.error.clone().into(),
        ]);
    }
    Outcome { report: r, pass: rep.pass }
}

pub fn verify(mut map: Map<String, Value>) -> Result<Outcome, String> {
    let kind: ExperimentKind = match map.remove("experiment") {
        Some(v) => serde_json::from_value(v).map_err(|e| format!("invalid config: experiment: {e}"))?,
        None => ExperimentKind::default(),
    };
    if kind == ExperimentKind::CbmoLog {
        let cfg: CbmoLogConfig = parse(map)?;
        let x0 = cfg.center.unwrap_or_else(|| Point::origin(cfg.grid.dim()));
        let rep = run_cbmo_log_lemma(&cfg.function, &cfg.grid, cfg.q, cfg.lambda, &x0, &cfg.pairs, cfg.ratio_cap).map_err(core)?;
        return Ok(experiment_outcome(&rep));
    }
    let r_list = map.remove("r_list");
    check_keys(&map, EXPERIMENT_KEYS)?;
    let spec: ExperimentSpec<f64> = parse(map)?;
    let rep = match kind {
        ExperimentKind::Boundedness => run_boundedness_experiment(&spec),
        ExperimentKind::LocalEstimate => {
            let r_list: RadiiSet<f64> = match r_list {
                Some(v) => serde_json::from_value(v).map_err(|e| format!("invalid config: r_list: {e}"))?,
                None => spec.radii.clone(),
            };
            run_lemma_local_estimate(&spec, &r_list)
        }
        ExperimentKind::Pointwise => run_pointwise_checks(&spec),
        ExperimentKind::CbmoLog => unreachable!("handled above"),
    }
    .map_err(core)?;
    Ok(experiment_outcome(&rep))
}

pub fn kernel_info(map: Map<String, Value>) -> Result<Outcome, String> {
    let cfg: KernelInfoConfig = parse(map)?;
    let k = RoughKernel::new(cfg.dim, cfg.kernel.clone()).map_err(core)?;
    let defect = k.cancellation_defect();
    let mut r = Report::new("kernel-info", &["s", "norm", "normalized_norm"]);
    r.field("dim", cfg.dim);
    r.field("shape", serde_json::to_value(&cfg.kernel).map_or(Cell::Empty, |v| v.to_string().into()));
    r.field("cancellation_defect", defect);
    r.field("cancelling", defect.abs() < roughmorrey::operators::CANCELLATION_TOL);
    let mut exponents = cfg.s.clone().unwrap_or_else(|| vec![2.0, 4.0]);
    exponents.push(f64::INFINITY);
    for s in exponents {
        let norm = k.sphere_lnorm(s).map_err(core)?;
        let normalized = k.sphere_normalized_lnorm(s).map_err(core)?;
        r.row(vec![s.into(), norm.into(), normalized.into()]);
    }
    Ok(Outcome::done(r))
}
