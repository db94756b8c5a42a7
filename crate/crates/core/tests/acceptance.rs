use std::f64::consts::{E, FRAC_1_SQRT_2};
use std::time::{Duration, Instant};

use roughmorrey::catalog::{FunctionSpec, RadiiSet, WeightSpec};
use roughmorrey::conditions::{
    check_commutator_condition, check_doubling, check_guliyev, check_nakai_integral, check_spanne, Verdict,
};
use roughmorrey::grid::{integrate_ball, BallSpec, Grid, GridFunction, Point};
use roughmorrey::hardy::{hardy_catalog, hardy_constant, hardy_extremal, hardy_ratio};
use roughmorrey::kernel::{HarmonicKind, KernelShape, RoughKernel};
use roughmorrey::norms::{cbmo_norm, local_morrey_norm, weak_local_morrey_norm};
use roughmorrey::operators::{
    commutator_maximal, commutator_riesz, default_radii, default_times, marcinkiewicz, riesz_rough, riesz_semigroup_constant,
    semigroup_potential, EvalPoints, OperatorParams,
};
use roughmorrey::tails::HalfLineFunction;
use roughmorrey::verify::{
    run_boundedness_experiment, run_lemma_local_estimate, ExperimentSpec, NormKind, OperatorId, RadiiMode, SweepItem,
};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// Accumulates sub-checks of one criterion.
#[derive(Default)]
struct Checks {
    failed: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.failed.push(what.clone());
        }
        self.notes.push(what);
    }

    fn within(&mut self, label: &str, value: f64, target: f64, rel: f64) {
        let ok = (value - target).abs() <= rel * target.abs();
        self.check(ok, format!("{label} = {value:.5} (target {target:.5} ± {:.0}%)", rel * 100.0));
    }

    fn timed(&mut self, label: &str, elapsed: Duration, limit: Duration) {
        self.check(elapsed < limit, format!("{label} {:.3}s (< {:.1}s)", elapsed.as_secs_f64(), limit.as_secs_f64()));
    }

    fn outcome(self) -> Outcome {
        if self.failed.is_empty() {
            Outcome::new(true, self.notes.join("; "))
        } else {
            Outcome::new(false, format!("failed: {}", self.failed.join("; ")))
        }
    }
}

fn riesz_quadrature() -> Outcome {
    let mut c = Checks::default();
    let start = Instant::now();
    let g = Grid::new(1, 8.0, 4096).unwrap();
    let f = FunctionSpec::ball(1.0).sample(&g).unwrap();
    let pts = EvalPoints::snap(&g, &[Point::new1(0.0), Point::new1(3.0)]).unwrap();
    let v = riesz_rough(&f, &RoughKernel::constant(1, 1.0), &OperatorParams::with_alpha(0.5), &pts).unwrap().values;
    let elapsed = start.elapsed();
    c.within("I f(0)", v[0], 4.0, 0.02);
    c.within("I f(3)", v[1], 4.0 - 2.0 * 2f64.sqrt(), 0.02);
    c.timed("runtime", elapsed, Duration::from_secs(1));
    c.outcome()
}

fn hardy_sharpness() -> Outcome {
    let mut c = Checks::default();
    let pw = |a: f64| HalfLineFunction::power(1.0, a);
    let t_grid = RadiiSet::log_spaced(1e-2, 1e3, 41).unwrap();
    let start = Instant::now();
    let report = hardy_constant(&pw(-1.0), &pw(1.0), &pw(-3.0), &t_grid).unwrap();
    let g = hardy_extremal(&pw(-1.0), &t_grid).unwrap();
    let extremal = hardy_ratio(&g, &pw(-1.0), &pw(1.0), &pw(-3.0), &t_grid).unwrap();
    let catalog_max = hardy_catalog()
        .iter()
        .filter_map(|g| hardy_ratio(g, &pw(-1.0), &pw(1.0), &pw(-3.0), &t_grid).unwrap())
        .fold(0.0f64, f64::max);
    let elapsed = start.elapsed();
    c.within("B", report.b, 1.0, 0.02);
    match extremal {
        Some(r) => c.check(r >= 0.97, format!("extremal ratio {r:.4} >= 0.97")),
        None => c.check(false, "extremal ratio undefined"),
    }
    c.check(catalog_max <= 1.03, format!("catalog max ratio {catalog_max:.4} <= 1.03"));
    c.timed("runtime", elapsed, Duration::from_millis(100));
    c.outcome()
}

fn semigroup_identity() -> Outcome {
    let mut c = Checks::default();
    let start = Instant::now();
    let g = Grid::new(1, 8.0, 2048).unwrap();
    let f = FunctionSpec::gaussian(1.0).sample(&g).unwrap();
    let pts = EvalPoints::default_for(&g);
    let alpha: f64 = 0.5;
    let s = semigroup_potential(&f, alpha, &pts, &default_times(&g)).unwrap().values;
    let i = riesz_rough(&f, &RoughKernel::constant(1, 1.0), &OperatorParams::with_alpha(alpha), &pts).unwrap().values;
    let elapsed = start.elapsed();
    let k = riesz_semigroup_constant(1, alpha);
    let worst = s.iter().zip(&i).map(|(a, b)| (a - k * b).abs() / (k * b)).fold(0.0f64, f64::max);
    c.check(pts.len() == 65, format!("{} points", pts.len()));
    c.check(worst <= 0.03, format!("max relative gap {worst:.4} <= 0.03"));
    c.timed("runtime", elapsed, Duration::from_secs(5));
    c.outcome()
}

fn marcinkiewicz_bound() -> Outcome {
    let mut c = Checks::default();
    let start = Instant::now();
    let g = Grid::new(2, 4.0, 256).unwrap();
    let k = RoughKernel::harmonic(HarmonicKind::Cos, 1).unwrap();
    let p = OperatorParams::with_alpha(0.5);
    let pts = EvalPoints::default_for(&g);
    let radii = default_radii(&g);
    let mut worst = 0.0f64;
    for spec in [FunctionSpec::gaussian(1.0), FunctionSpec::ball(1.0)] {
        let f = spec.sample(&g).unwrap();
        let mu = marcinkiewicz(&f, &k, &p, &pts, &radii).unwrap().values;
        let i = riesz_rough(&f.abs(), &k.abs(), &p, &pts).unwrap().values;
        for (m, r) in mu.iter().zip(&i) {
            worst = worst.max(m / (FRAC_1_SQRT_2 * r));
        }
    }
    let elapsed = start.elapsed();
    c.check(pts.len() == 64, format!("{} points", pts.len()));
    c.check(worst <= 1.03, format!("max mu / (2^-1/2 I) = {worst:.4} <= 1.03"));
    c.timed("runtime", elapsed, Duration::from_secs(30));
    c.outcome()
}

fn morrey_oracle() -> Outcome {
    let mut c = Checks::default();
    let g = Grid::new(1, 16.0, 1 << 14).unwrap();
    let f = FunctionSpec::ball(1.0).sample(&g).unwrap();
    let (p, lambda) = (2.0, 0.5);
    let w = WeightSpec::power_law((lambda - 1.0) / p);
    let radii = RadiiSet::log_spaced(0.125, 8.0, 25).unwrap();
    let res = local_morrey_norm(&f, p, &w, &Point::new1(0.0), &radii).unwrap();
    c.within("norm", res.value, 1.0, 0.02);
    let step = radii.log_step().exp();
    let r = res.argmax_radius;
    c.check(r >= 1.0 / step * (1.0 - 1e-12) && r <= step * (1.0 + 1e-12), format!("argmax r = {r:.4} (1 ± one step)"));
    c.outcome()
}

fn cbmo_oracle() -> Outcome {
    let mut c = Checks::default();
    let g = Grid::new(1, 32.0, 1 << 16).unwrap();
    let b = FunctionSpec::LogAbs.sample(&g).unwrap();
    let x0 = Point::new1(0.0);
    let radii = RadiiSet::log_spaced(0.1, 10.0, 13).unwrap();
    let q1 = cbmo_norm(&b, 1.0, 0.0, &x0, &radii).unwrap();
    let target = 2.0 / E;
    c.within("norm", q1.value, target, 0.02);
    let terms = q1.terms();
    let lo = terms.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = terms.iter().copied().fold(0.0, f64::max);
    c.check(hi <= lo * 1.02, format!("terms in [{lo:.5}, {hi:.5}] over r in [0.1, 10]"));
    let mut monotone = true;
    let mut prev = q1.terms();
    for q in [1.5, 2.0, 4.0] {
        let next = cbmo_norm(&b, q, 0.0, &x0, &radii).unwrap().terms();
        monotone &= prev.iter().zip(&next).all(|(a, b)| a <= b);
        prev = next;
    }
    c.check(monotone, "termwise monotone in q over q = 1, 1.5, 2, 4");
    c.outcome()
}

fn condition_checkers() -> Outcome {
    let mut c = Checks::default();
    let radii = RadiiSet::log_spaced(0.01, 100.0, 33).unwrap();
    let x0 = Point::new1(0.0);
    let sob = OperatorParams::sobolev(0.25, 2.0, 1);
    let pw = WeightSpec::power_law;
    for kappa in [-1.5, -0.25, 0.7] {
        let r = check_doubling(&pw(kappa), &radii).unwrap();
        c.within(&format!("doubling kappa={kappa}"), r.empirical_c, 2f64.powf(kappa.abs()), 0.03);
    }
    let r = check_nakai_integral(&pw(-0.5), &sob, &radii).unwrap();
    c.within("nakai", r.empirical_c, 2.0, 0.03);
    let r = check_spanne(&pw(-1.0), &pw(-0.5), &OperatorParams::sobolev(0.5, 2.0, 2), &radii).unwrap();
    c.within("spanne", r.empirical_c, 2.0, 0.03);
    let guliyev = check_guliyev(&pw(-0.5), &pw(-0.25), &sob, &x0, &radii).unwrap();
    c.within("guliyev", guliyev.empirical_c, 4.0, 0.03);
    let r = check_commutator_condition(&pw(-0.5), &pw(-0.25), &sob, &x0, &radii).unwrap();
    c.within("commutator", r.empirical_c, 20.0, 0.03);

    let v = check_nakai_integral(&pw(1.0), &sob, &radii).unwrap().verdict;
    c.check(v == Verdict::FailsDivergent, format!("nakai kappa=1 -> {}", v.as_str()));
    let v = check_guliyev(&pw(-0.5), &pw(-0.75), &sob, &x0, &radii).unwrap().verdict;
    c.check(v == Verdict::FailsGrowing, format!("guliyev mismatched -> {}", v.as_str()));
    let mut big_lambda = sob;
    big_lambda.lambda_c = Some(0.25);
    let v = check_commutator_condition(&pw(-0.5), &pw(-0.25), &big_lambda, &x0, &radii).unwrap().verdict;
    c.check(v == Verdict::FailsDivergent, format!("commutator lambda=1/4 -> {}", v.as_str()));

    let osc = WeightSpec::OscPower { kappa: -0.5, a: 1.0 };
    let g = check_guliyev(&osc, &pw(-0.25), &sob, &x0, &radii).unwrap();
    let s = check_spanne(&osc, &pw(-0.25), &sob, &radii).unwrap();
    c.check(
        g.holds() && s.empirical_c >= 2.0 * g.empirical_c,
        format!("oscillating weight: spanne {:.3} vs guliyev {:.3}", s.empirical_c, g.empirical_c),
    );
    c.outcome()
}

fn sobolev_experiment(cells: usize, phi2: f64, scales: &[f64]) -> ExperimentSpec<f64> {
    ExperimentSpec {
        operator: OperatorId::Riesz,
        params: OperatorParams::sobolev(0.25, 2.0, 1),
        kernel: KernelShape::Constant { value: 1.0 },
        weight1: WeightSpec::power_law(-0.5),
        weight2: WeightSpec::power_law(phi2),
        norm: NormKind::Strong,
        center: None,
        functions: scales.iter().map(|&a| SweepItem::new(format!("ball-{a}"), FunctionSpec::ball(a))).collect(),
        symbol: None,
        grid: Grid::new(1, 16.0, cells).unwrap(),
        radii: RadiiSet::log_spaced(0.25, 4.0, 17).unwrap(),
        radii_mode: RadiiMode::Relative { lo: 0.25, hi: 4.0 },
        operator_radii: None,
        ratio_cap: None,
    }
}

fn boundedness_stability() -> Outcome {
    let mut c = Checks::default();
    let scales = [0.25, 0.5, 1.0, 2.0];
    let coarse = run_boundedness_experiment(&sobolev_experiment(2048, -0.25, &scales)).unwrap();
    let fine = run_boundedness_experiment(&sobolev_experiment(4096, -0.25, &scales)).unwrap();
    let finite = coarse.rows.iter().chain(&fine.rows).all(|r| r.error.is_none() && r.ratio.is_finite());
    c.check(finite, "all ratios finite");
    let change = (fine.sup_ratio - coarse.sup_ratio).abs() / coarse.sup_ratio;
    c.check(change <= 0.10, format!("sup_ratio {:.4} -> {:.4} ({:.2}% change)", coarse.sup_ratio, fine.sup_ratio, change * 100.0));
    let bad = run_boundedness_experiment(&sobolev_experiment(2048, -0.75, &[0.25, 0.5, 1.0, 2.0, 4.0])).unwrap();
    let slope = bad.trend_slope.unwrap_or(f64::NAN);
    c.check(
        slope >= 0.2 && bad.flags.iter().any(|f| f == "unbounded-trend"),
        format!("mismatched weight slope {slope:.3} flagged {:?}", bad.flags),
    );
    c.outcome()
}

fn exact_invariants() -> Outcome {
    let mut c = Checks::default();
    let g = Grid::new(1, 8.0, 1024).unwrap();
    let x0 = Point::new1(0.0);
    let radii = RadiiSet::log_spaced(0.125, 4.0, 11).unwrap();
    let w = WeightSpec::power_law(-0.25);

    let mut weak_ok = true;
    for spec in [FunctionSpec::gaussian(1.0), FunctionSpec::ball(1.0), FunctionSpec::power(-0.5), FunctionSpec::LogAbs] {
        let f = spec.sample(&g).unwrap();
        for p in [1.0, 2.0, 3.5] {
            let weak = weak_local_morrey_norm(&f, p, &w, &x0, &radii).unwrap();
            let strong = local_morrey_norm(&f, p, &w, &x0, &radii).unwrap();
            weak_ok &= weak.terms().iter().zip(strong.terms()).all(|(a, b)| *a <= b);
        }
    }
    c.check(weak_ok, "weak <= strong termwise");

    let f = FunctionSpec::gaussian(1.0).sample(&g).unwrap();
    let pts = EvalPoints::default_for(&g);
    let k = RoughKernel::constant(1, 1.0);
    let params = OperatorParams::with_alpha(0.5);
    let b = GridFunction::constant(g, 3.7);
    let cr = commutator_riesz(&b, &f, &k, &params, &pts).unwrap().values;
    let cm = commutator_maximal(&b, &f, &k, &params, &pts, &default_radii(&g)).unwrap().values;
    c.check(cr.iter().chain(&cm).all(|&v| v == 0.0), "commutators vanish for constant b");

    let dyadic = |i: usize| ((i * 7) % 16) as f64 / 8.0;
    let u = GridFunction::new(g, (0..g.len()).map(dyadic).collect()).unwrap();
    let v = GridFunction::new(g, (0..g.len()).map(|i| dyadic(i + 3) / 4.0).collect()).unwrap();
    let sum = u.combine(1.0, &v, 1.0).unwrap();
    let ball = BallSpec::new(x0, 3.0).unwrap();
    let lhs = integrate_ball(&sum, &ball).unwrap();
    let rhs = integrate_ball(&u, &ball).unwrap() + integrate_ball(&v, &ball).unwrap();
    c.check(lhs == rhs, "ball integral additive on dyadic data");
    let shifted_b = GridFunction::new(g, (0..g.len()).map(|i| dyadic(i + 5) + 2.0).collect()).unwrap();
    let plain_b = GridFunction::new(g, (0..g.len()).map(|i| dyadic(i + 5)).collect()).unwrap();
    let a = commutator_riesz(&shifted_b, &f, &k, &params, &pts).unwrap().values;
    let b2 = commutator_riesz(&plain_b, &f, &k, &params, &pts).unwrap().values;
    c.check(a == b2, "commutator invariant under adding a constant to b");
    let scaled = riesz_rough(&f.scaled(8.0), &k, &params, &pts).unwrap().values;
    let base = riesz_rough(&f, &k, &params, &pts).unwrap().values;
    c.check(scaled.iter().zip(&base).all(|(s, b)| *s == 8.0 * b), "I(8f) = 8 I f");

    let mut homog = true;
    for lam in [0.25, 4.0] {
        let fs = f.scaled(lam);
        homog &= local_morrey_norm(&fs, 2.0, &w, &x0, &radii).unwrap().value == lam * local_morrey_norm(&f, 2.0, &w, &x0, &radii).unwrap().value;
        homog &= weak_local_morrey_norm(&fs, 2.0, &w, &x0, &radii).unwrap().value
            == lam * weak_local_morrey_norm(&f, 2.0, &w, &x0, &radii).unwrap().value;
        let bl = FunctionSpec::LogAbs.sample(&g).unwrap();
        homog &= cbmo_norm(&bl.scaled(lam), 2.0, 0.0, &x0, &radii).unwrap().value == lam * cbmo_norm(&bl, 2.0, 0.0, &x0, &radii).unwrap().value;
    }
    c.check(homog, "norms positively homogeneous under power-of-two scaling");

    let spec = sobolev_experiment(512, -0.25, &[0.25, 0.5, 1.0]);
    let run_with = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| serde_json::to_string(&run_boundedness_experiment(&spec).unwrap()).unwrap())
    };
    let one = run_with(1);
    c.check(one == run_with(3) && one == run_with(8), "reports byte-identical with 1, 3 and 8 threads");
    c.outcome()
}

fn local_estimate() -> Outcome {
    let mut c = Checks::default();
    let mut spec = sobolev_experiment(2048, -0.25, &[1.0]);
    spec.radii_mode = RadiiMode::Absolute;
    let r_list = RadiiSet::log_spaced(0.125, 1.0, 7).unwrap();
    let strong = run_lemma_local_estimate(&spec, &r_list).unwrap();
    let spread = strong.spread.unwrap_or(f64::INFINITY);
    c.check(strong.pass && spread <= 3.0, format!("C(r) spread {spread:.3} <= 3"));
    spec.params = OperatorParams::sobolev(0.25, 1.0, 1);
    let weak = run_lemma_local_estimate(&spec, &r_list).unwrap();
    let finite = weak.rows.iter().all(|r| r.error.is_none() && r.ratio.is_finite() && r.ratio > 0.0);
    c.check(
        finite && weak.experiment == "local-estimate-weak",
        format!("weak variant p=1, q=4/3: max C {:.4}, spread {:.3}", weak.sup_ratio, weak.spread.unwrap_or(f64::NAN)),
    );
    c.outcome()
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("riesz quadrature oracle", riesz_quadrature),
        ("hardy sharpness", hardy_sharpness),
        ("semigroup-riesz identity", semigroup_identity),
        ("marcinkiewicz pointwise bound", marcinkiewicz_bound),
        ("morrey norm oracle", morrey_oracle),
        ("cbmo oracle", cbmo_oracle),
        ("condition checkers", condition_checkers),
        ("boundedness stability", boundedness_stability),
        ("exact invariant suite", exact_invariants),
        ("local estimate", local_estimate),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let mark = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {mark} {name}: {}", i + 1, outcome.detail);
        if !outcome.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
    } else {
        eprintln!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
