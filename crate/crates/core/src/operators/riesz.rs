use rayon::prelude::*;

use super::params::OperatorParams;
use super::points::{EvalPoints, PointValues};
use super::table::{self_cell_integral, OffsetTable};
use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::kernel::RoughKernel;
use crate::scalar::Real;

pub(crate) fn check_kernel<T: Real>(k: &RoughKernel<T>, grid: &Grid<T>) -> Result<()> {
    if k.dim() != grid.dim() {
        return Err(Error::BadKernel(format!(
            "kernel dimension {} does not match grid dimension {}",
            k.dim(),
            grid.dim()
        )));
    }
    Ok(())
}

/// Table of `Ω(d)|d|^{e}h^dim`, with the self cell integrated analytically
/// against the spherical mean of Ω.
pub(crate) fn radial_table<T: Real>(grid: &Grid<T>, k: &RoughKernel<T>, e: T) -> OffsetTable<T> {
    let cell = grid.cell_measure();
    let self_value = k.spherical_mean() * self_cell_integral(grid.dim(), grid.spacing(), e);
    OffsetTable::build(grid, self_value, |dx, dy| k.eval_displacement(dx, dy) * dx.hypot(dy).powf(e) * cell)
}

fn riesz_exponent<T: Real>(params: &OperatorParams<T>, dim: usize) -> T {
    params.alpha - T::from_usize_lossy(dim)
}

/// `I_{Ω,α} f(x) = ∫ Ω(x-y)|x-y|^{α-n} f(y) dy` at each evaluation point.
pub fn riesz_rough<T: Real>(
    f: &GridFunction<T>,
    k: &RoughKernel<T>,
    params: &OperatorParams<T>,
    points: &EvalPoints<T>,
) -> Result<PointValues<T>> {
    let grid = f.grid();
    params.validate_fractional(grid.dim())?;
    check_kernel(k, grid)?;
    let table = radial_table(grid, k, riesz_exponent(params, grid.dim()));
    let vals = f.values();
    let values = points
        .indices()
        .par_iter()
        .map(|&i| table.apply_at(grid, i, |j| vals[j]))
        .collect();
    Ok(PointValues::new(points, values))
}

/// `[b, I_{Ω,α}] f(x) = ∫ Ω(x-y)|x-y|^{α-n} (b(x) - b(y)) f(y) dy`.
pub fn commutator_riesz<T: Real>(
    b: &GridFunction<T>,
    f: &GridFunction<T>,
    k: &RoughKernel<T>,
    params: &OperatorParams<T>,
    points: &EvalPoints<T>,
) -> Result<PointValues<T>> {
    b.ensure_same_grid(f)?;
    let grid = f.grid();
    params.validate_fractional(grid.dim())?;
    check_kernel(k, grid)?;
    let table = radial_table(grid, k, riesz_exponent(params, grid.dim()));
    let (bv, fv) = (b.values(), f.values());
    let values = points
        .indices()
        .par_iter()
        .map(|&i| table.apply_at(grid, i, |j| (bv[i] - bv[j]) * fv[j]))
        .collect();
    Ok(PointValues::new(points, values))
}

/// `I_{|Ω|,α}(|b(x) - b(·)| |f|)(x)`, the pointwise majorant of the commutator.
pub fn commutator_riesz_majorant<T: Real>(
    b: &GridFunction<T>,
    f: &GridFunction<T>,
    k: &RoughKernel<T>,
    params: &OperatorParams<T>,
    points: &EvalPoints<T>,
) -> Result<PointValues<T>> {
    b.ensure_same_grid(f)?;
    let grid = f.grid();
    params.validate_fractional(grid.dim())?;
    check_kernel(k, grid)?;
    let table = radial_table(grid, &k.abs(), riesz_exponent(params, grid.dim()));
    let (bv, fv) = (b.values(), f.values());
    let values = points
        .indices()
        .par_iter()
        .map(|&i| table.apply_at(grid, i, |j| (bv[i] - bv[j]).abs() * fv[j].abs()))
        .collect();
    Ok(PointValues::new(points, values))
}
