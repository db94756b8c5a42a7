use rayon::prelude::*;

use super::marcinkiewicz::log_cell_edges;
use super::points::{EvalPoints, PointValues};
use crate::catalog::RadiiSet;
use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::scalar::{gamma, Real};
use crate::sum::PairwiseSum;

/// Heat-kernel factors below `e^{-CUTOFF}` are dropped.
const CUTOFF: f64 = 32.236_191_301_916_64; // ln 1e14

/// Default time grid `[h^2/2, (4R)^2]` with 96 log-spaced times.
pub fn default_times<T: Real>(grid: &Grid<T>) -> RadiiSet<T> {
    let h = grid.spacing();
    let top = T::lit(4.0) * grid.half_extent();
    RadiiSet::log_spaced(h * h / T::lit(2.0), top * top, 96).expect("h^2/2 < (4R)^2")
}

/// `c_{n,α} = Γ((n-α)/2) / (2^α π^{n/2} Γ(α/2))`: the factor with
/// `(-Δ)^{-α/2} = c_{n,α} I_α` for the unnormalized Riesz potential `I_α`.
pub fn riesz_semigroup_constant<T: Real>(dim: usize, alpha: T) -> T {
    let n = T::from_usize_lossy(dim);
    let two = T::lit(2.0);
    gamma((n - alpha) / two) / (two.powf(alpha) * T::PI().powf(n / two) * gamma(alpha / two))
}

/// One-dimensional heat-kernel factor `(4πt)^{-1/2} e^{-(kh)^2/(4t)} h` for
/// offsets `k = 0..=m`.
fn heat_factors<T: Real>(h: T, t: T) -> Vec<T> {
    let four_t = T::lit(4.0) * t;
    let m = ((four_t * T::lit(CUTOFF)).sqrt() / h).floor().to_usize().unwrap_or(0);
    let norm = h / (T::PI() * four_t).sqrt();
    (0..=m)
        .map(|k| {
            let x = T::from_usize_lossy(k) * h;
            norm * (-(x * x) / four_t).exp()
        })
        .collect()
}

/// Separable heat-kernel sum `Σ_j G_t(x_i - y_j) f_j h^n` at cell `i`.
fn heat_at<T: Real>(grid: &Grid<T>, g: &[T], f: &[T], i: usize) -> T {
    let n = grid.cells_per_axis();
    let m = g.len() - 1;
    let (ix, iy) = grid.axis_indices(i);
    let span = |c: usize| (c.saturating_sub(m), (c + m).min(n - 1));
    let (x0, x1) = span(ix);
    let row_sum = |jy: usize| {
        let mut acc = PairwiseSum::new();
        for jx in x0..=x1 {
            acc.add(g[ix.abs_diff(jx)] * f[jy * n + jx]);
        }
        acc.total()
    };
    if grid.dim() == 1 {
        return row_sum(0);
    }
    let (y0, y1) = span(iy);
    let mut acc = PairwiseSum::new();
    for jy in y0..=y1 {
        acc.add(g[iy.abs_diff(jy)] * row_sum(jy));
    }
    acc.total()
}

/// `(-Δ)^{-α/2} f(x) = Γ(α/2)^{-1} ∫_0^∞ e^{tΔ} f(x) t^{α/2-1} dt`.
///
/// The `t`-integral is the midpoint rule in `ln t` over `t_grid`, with each
/// heat-semigroup value computed by direct quadrature. Below the first cell
/// edge `e^{tΔ}f(x)` is frozen at its first value; above the last it decays
/// like `t^{-n/2}`. Both end pieces are integrated in closed form and their
/// sum is reported as `tail_estimate`.
pub fn semigroup_potential<T: Real>(
    f: &GridFunction<T>,
    alpha: T,
    points: &EvalPoints<T>,
    t_grid: &RadiiSet<T>,
) -> Result<PointValues<T>> {
    let grid = f.grid();
    let n = T::from_usize_lossy(grid.dim());
    if !(alpha > T::zero() && alpha < n) {
        return Err(Error::BadAlpha(format!("need 0 < alpha < {}, got {alpha}", grid.dim())));
    }
    let two = T::lit(2.0);
    let half_alpha = alpha / two;
    let ts = t_grid.values();
    let edges = log_cell_edges(ts);
    let factors: Vec<Vec<T>> = ts.par_iter().map(|&t| heat_factors(grid.spacing(), t)).collect();
    let weights: Vec<T> = ts
        .iter()
        .zip(edges.windows(2))
        .map(|(&t, w)| t.powf(half_alpha) * (w[1] / w[0]).ln())
        .collect();
    let beta = (alpha - n) / two;
    let (t_first, t_last) = (ts[0], ts[ts.len() - 1]);
    let lower_scale = (edges[0] / t_first).powf(half_alpha) * t_first.powf(half_alpha) / half_alpha;
    let upper_scale = (edges[edges.len() - 1] / t_last).powf(beta) * t_last.powf(half_alpha) / (-beta);
    let norm = gamma(half_alpha).recip();
    let fv = f.values();
    let out: Vec<(T, T)> = points
        .indices()
        .par_iter()
        .map(|&i| {
            let heat: Vec<T> = factors.iter().map(|g| heat_at(grid, g, fv, i)).collect();
            let mut acc = PairwiseSum::new();
            for (u, w) in heat.iter().zip(&weights) {
                acc.add(*u * *w);
            }
            let tails = heat[0] * lower_scale + heat[heat.len() - 1] * upper_scale;
            ((acc.total() + tails) * norm, tails.abs() * norm)
        })
        .collect();
    let mut result = PointValues::new(points, out.iter().map(|o| o.0).collect());
    result.tail_estimate = out.iter().map(|o| o.1).collect();
    Ok(result)
}
