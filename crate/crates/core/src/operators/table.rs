//! Offset-indexed kernel tables. On a uniform grid a convolution kernel
//! depends only on the index offset `i - j`, so it is tabulated once per
//! operator call over all `(2N-1)^dim` offsets.

use crate::grid::Grid;
use crate::scalar::{Real, unit_sphere_measure};
use crate::sum::PairwiseSum;

/// `∫_{cell} |u|^e du` for the cell containing the origin: the exact
/// interval integral in dimension one, the equal-area disk in dimension two.
pub fn self_cell_integral<T: Real>(dim: usize, h: T, e: T) -> T {
    let two = T::lit(2.0);
    if dim == 1 {
        two * (h / two).powf(e + T::one()) / (e + T::one())
    } else {
        let rho = h / T::PI().sqrt();
        unit_sphere_measure::<T>(2) * rho.powf(e + two) / (e + two)
    }
}

pub(crate) struct OffsetTable<T> {
    dim: usize,
    cells: usize,
    width: usize,
    values: Vec<T>,
}

impl<T: Real> OffsetTable<T> {
    /// Tabulates `kernel(dx, dy)` at every non-zero displacement `x - y`
    /// and stores `self_value` at offset zero.
    pub fn build<F: Fn(T, T) -> T>(grid: &Grid<T>, self_value: T, kernel: F) -> Self {
        let n = grid.cells_per_axis();
        let width = 2 * n - 1;
        let h = grid.spacing();
        let offset = |k: usize| T::lit(k as f64 - (n as f64 - 1.0)) * h;
        let values = if grid.dim() == 1 {
            (0..width)
                .map(|k| if k == n - 1 { self_value } else { kernel(offset(k), T::zero()) })
                .collect()
        } else {
            let mut v = Vec::with_capacity(width * width);
            for ky in 0..width {
                for kx in 0..width {
                    v.push(if kx == n - 1 && ky == n - 1 { self_value } else { kernel(offset(kx), offset(ky)) });
                }
            }
            v
        };
        Self { dim: grid.dim(), cells: n, width, values }
    }

    /// Flat table index of the offset between cells `i` (target) and `j` (source).
    #[inline]
    pub fn index(&self, ix: usize, iy: usize, jx: usize, jy: usize) -> usize {
        let c = self.cells - 1;
        let kx = ix + c - jx;
        if self.dim == 1 {
            kx
        } else {
            (iy + c - jy) * self.width + kx
        }
    }

    #[inline]
    pub fn get(&self, k: usize) -> T {
        self.values[k]
    }

    /// Pairwise sum of `table(i - j) · weight(j)` over all cells `j` in
    /// flat-index order.
    pub fn apply_at<W: Fn(usize) -> T>(&self, grid: &Grid<T>, i: usize, weight: W) -> T {
        let (ix, iy) = grid.axis_indices(i);
        let n = self.cells;
        let rows = if self.dim == 1 { 1 } else { n };
        let mut acc = PairwiseSum::new();
        for jy in 0..rows {
            let base = jy * n;
            for jx in 0..n {
                let k = self.index(ix, iy, jx, jy);
                acc.add(self.values[k] * weight(base + jx));
            }
        }
        acc.total()
    }
}

/// Per-offset bin index into a radius grid; `NONE` marks offsets outside
/// the largest radius.
pub(crate) struct BinTable {
    pub bins: Vec<u32>,
}

impl BinTable {
    pub const NONE: u32 = u32::MAX;

    /// With `closed = false` an offset at distance `d` joins the first radius
    /// `t > d` (open balls); with `closed = true` the first `t >= d`.
    pub fn build<T: Real>(grid: &Grid<T>, radii: &[T], closed: bool) -> Self {
        let table = OffsetTable::build(grid, T::zero(), |dx, dy| dx.hypot(dy));
        let bins = table
            .values
            .iter()
            .map(|&d| {
                let k = if closed {
                    radii.partition_point(|&t| t < d)
                } else {
                    radii.partition_point(|&t| t <= d)
                };
                if k < radii.len() {
                    k as u32
                } else {
                    Self::NONE
                }
            })
            .collect();
        Self { bins }
    }
}
