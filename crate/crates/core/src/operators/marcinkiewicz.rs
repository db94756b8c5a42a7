use rayon::prelude::*;

use super::params::OperatorParams;
use super::points::{EvalPoints, PointValues};
use super::riesz::{check_kernel, radial_table};
use super::table::BinTable;
use crate::catalog::RadiiSet;
use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::kernel::RoughKernel;
use crate::scalar::Real;
use crate::sum::PairwiseSum;

/// Kernels with `|∫ Ω dσ|` below this count as cancelling.
pub const CANCELLATION_TOL: f64 = 1e-8;

/// Geometric cell edges around each node of a log grid.
pub(crate) fn log_cell_edges<T: Real>(ts: &[T]) -> Vec<T> {
    let k = ts.len();
    let mut edges = Vec::with_capacity(k + 1);
    if k == 1 {
        return vec![ts[0], ts[0]];
    }
    edges.push(ts[0] * (ts[0] / ts[1]).sqrt());
    for w in ts.windows(2) {
        edges.push((w[0] * w[1]).sqrt());
    }
    edges.push(ts[k - 1] * (ts[k - 1] / ts[k - 2]).sqrt());
    edges
}

/// Largest distance from cell `i` to any cell centre of the grid.
pub(crate) fn farthest_cell<T: Real>(grid: &Grid<T>, i: usize) -> T {
    let c = grid.center(i);
    let edge = grid.axis_coord(grid.cells_per_axis() - 1);
    let dx = c.x().abs() + edge;
    let dy = if grid.dim() == 1 { T::zero() } else { c.y().abs() + edge };
    dx.hypot(dy)
}

/// `μ_{Ω,α} f(x) = (∫_0^∞ |F_t(x)|^2 dt/t^3)^{1/2}` with
/// `F_t(x) = ∫_{|x-y| <= t} Ω(x-y)|x-y|^{α+1-n} f(y) dy`.
///
/// The outer integral is the midpoint rule in `ln t` over `t_grid`. Past the
/// last cell edge `T`, `F_t` is frozen at its last value and the tail
/// `F^2/(2T^2)` is added; it is exact once the grid box lies inside
/// `B(x, t_max)`. `tail_estimate` reports the added upper tail plus the
/// neglected part below the first edge.
pub fn marcinkiewicz<T: Real>(
    f: &GridFunction<T>,
    k: &RoughKernel<T>,
    params: &OperatorParams<T>,
    points: &EvalPoints<T>,
    t_grid: &RadiiSet<T>,
) -> Result<PointValues<T>> {
    let grid = f.grid();
    params.validate_fractional(grid.dim())?;
    check_kernel(k, grid)?;
    let defect = k.cancellation_defect();
    if defect.abs().to_f64_lossy() >= CANCELLATION_TOL {
        return Err(Error::KernelNotCancelling(defect.to_f64_lossy()));
    }
    let e = params.alpha + T::one() - T::from_usize_lossy(grid.dim());
    let table = radial_table(grid, k, e);
    let ts = t_grid.values();
    let bins = BinTable::build(grid, ts, true);
    let edges = log_cell_edges(ts);
    let widths: Vec<T> = edges.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
    let top = edges[edges.len() - 1];
    let bottom = edges[0];
    let two = T::lit(2.0);
    let cells = grid.cells_per_axis();
    let rows = if grid.dim() == 1 { 1 } else { cells };
    let fv = f.values();
    let out: Vec<(T, T)> = points
        .indices()
        .par_iter()
        .map(|&i| {
            let (ix, iy) = grid.axis_indices(i);
            let mut acc: Vec<PairwiseSum<T>> = (0..ts.len()).map(|_| PairwiseSum::new()).collect();
            for jy in 0..rows {
                for jx in 0..cells {
                    let kk = table.index(ix, iy, jx, jy);
                    let bin = bins.bins[kk];
                    if bin != BinTable::NONE {
                        acc[bin as usize].add(table.get(kk) * fv[jy * cells + jx]);
                    }
                }
            }
            let mut running = T::zero();
            let mut outer = PairwiseSum::new();
            let mut first = None;
            for ((a, &t), &w) in acc.iter().zip(ts).zip(&widths) {
                running += a.total();
                first.get_or_insert(running);
                outer.add(running * running / (t * t) * w);
            }
            let upper = running * running / (two * top * top);
            let f0 = first.unwrap_or_else(T::zero);
            let lower = f0 * f0 / (ts[0] * ts[0]) * (bottom / ts[0]).powf(two * params.alpha) / (two * params.alpha);
            let inside = farthest_cell(grid, i) <= ts[ts.len() - 1];
            let tail = if inside { lower } else { lower + upper };
            ((outer.total() + upper).sqrt(), tail.sqrt())
        })
        .collect();
    let mut result = PointValues::new(points, out.iter().map(|o| o.0).collect());
    result.tail_estimate = out.iter().map(|o| o.1).collect();
    Ok(result)
}
