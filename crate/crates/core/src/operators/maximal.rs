use rayon::prelude::*;

use super::params::OperatorParams;
use super::points::{EvalPoints, PointValues};
use super::riesz::check_kernel;
use super::table::{BinTable, OffsetTable};
use crate::catalog::RadiiSet;
use crate::error::Result;
use crate::grid::{Grid, GridFunction};
use crate::kernel::RoughKernel;
use crate::scalar::{ball_volume, Real};
use crate::sum::PairwiseSum;

/// Default radius grid `[h, 4R]` with 64 log-spaced radii.
pub fn default_radii<T: Real>(grid: &Grid<T>) -> RadiiSet<T> {
    RadiiSet::log_spaced(grid.spacing(), T::lit(4.0) * grid.half_extent(), 64).expect("h < 4R")
}

/// Shared sup-over-balls evaluation: `max_t (v_n t^n)^{α/n - 1} Σ_{|x-y|<t} table·weight`.
fn sup_over_balls<T: Real, W: Fn(usize, usize) -> T + Sync>(
    grid: &Grid<T>,
    table: &OffsetTable<T>,
    alpha: T,
    points: &EvalPoints<T>,
    radii: &RadiiSet<T>,
    weight: W,
) -> Vec<T> {
    let ts = radii.values();
    let bins = BinTable::build(grid, ts, false);
    let n = T::from_usize_lossy(grid.dim());
    let scales: Vec<T> = ts.iter().map(|&t| ball_volume(grid.dim(), t).powf(alpha / n - T::one())).collect();
    let cells = grid.cells_per_axis();
    let rows = if grid.dim() == 1 { 1 } else { cells };
    points
        .indices()
        .par_iter()
        .map(|&i| {
            let (ix, iy) = grid.axis_indices(i);
            let mut acc: Vec<PairwiseSum<T>> = (0..ts.len()).map(|_| PairwiseSum::new()).collect();
            for jy in 0..rows {
                for jx in 0..cells {
                    let k = table.index(ix, iy, jx, jy);
                    let bin = bins.bins[k];
                    if bin != BinTable::NONE {
                        acc[bin as usize].add(table.get(k) * weight(i, jy * cells + jx));
                    }
                }
            }
            let mut running = T::zero();
            let mut best = T::zero();
            for (a, s) in acc.iter().zip(&scales) {
                running += a.total();
                best = best.max(*s * running);
            }
            best
        })
        .collect()
}

fn abs_table<T: Real>(grid: &Grid<T>, k: &RoughKernel<T>) -> OffsetTable<T> {
    let a = k.abs();
    let cell = grid.cell_measure();
    OffsetTable::build(grid, a.spherical_mean() * cell, |dx, dy| a.eval_displacement(dx, dy) * cell)
}

/// `M_{Ω,α} f(x) = sup_t |B(x,t)|^{α/n - 1} ∫_{B(x,t)} |Ω(x-y)| |f(y)| dy`, the
/// sup taken over `radii`.
pub fn maximal_rough<T: Real>(
    f: &GridFunction<T>,
    k: &RoughKernel<T>,
    params: &OperatorParams<T>,
    points: &EvalPoints<T>,
    radii: &RadiiSet<T>,
) -> Result<PointValues<T>> {
    let grid = f.grid();
    params.validate_maximal(grid.dim())?;
    check_kernel(k, grid)?;
    let table = abs_table(grid, k);
    let fv = f.values();
    let values = sup_over_balls(grid, &table, params.alpha, points, radii, |_, j| fv[j].abs());
    Ok(PointValues::new(points, values))
}

/// `M_{Ω,b,α} f(x)`: the maximal commutator with `|b(x) - b(y)|` inside.
pub fn commutator_maximal<T: Real>(
    b: &GridFunction<T>,
    f: &GridFunction<T>,
    k: &RoughKernel<T>,
    params: &OperatorParams<T>,
    points: &EvalPoints<T>,
    radii: &RadiiSet<T>,
) -> Result<PointValues<T>> {
    b.ensure_same_grid(f)?;
    let grid = f.grid();
    params.validate_maximal(grid.dim())?;
    check_kernel(k, grid)?;
    let table = abs_table(grid, k);
    let (bv, fv) = (b.values(), f.values());
    let values = sup_over_balls(grid, &table, params.alpha, points, radii, |i, j| {
        (bv[i] - bv[j]).abs() * fv[j].abs()
    });
    Ok(PointValues::new(points, values))
}
