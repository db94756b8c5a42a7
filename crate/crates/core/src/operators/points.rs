use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Grid, Point};
use crate::scalar::Real;

/// Cell centres at which an operator is evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalPoints<T: Real> {
    indices: Vec<usize>,
    points: Vec<Point<T>>,
}

impl<T: Real> EvalPoints<T> {
    /// Snaps each requested point to its nearest cell centre.
    pub fn snap(grid: &Grid<T>, requested: &[Point<T>]) -> Result<Self> {
        if requested.is_empty() {
            return Err(Error::BadValue("no evaluation points".into()));
        }
        let mut indices = Vec::with_capacity(requested.len());
        for p in requested {
            if !grid.contains(p) {
                return Err(Error::BadValue(format!(
                    "evaluation point ({}, {}) lies outside the grid box",
                    p.x(),
                    p.y()
                )));
            }
            indices.push(grid.nearest_cell(p));
        }
        Ok(Self::from_indices(grid, indices))
    }

    pub fn from_indices(grid: &Grid<T>, indices: Vec<usize>) -> Self {
        let points = indices.iter().map(|&i| grid.center(i)).collect();
        Self { indices, points }
    }

    /// 65 points on `[-R/2, R/2]` in dimension one, an 8×8 subgrid of
    /// `[-R/2, R/2]^2` in dimension two.
    pub fn default_for(grid: &Grid<T>) -> Self {
        let half = grid.half_extent() / T::lit(2.0);
        let requested: Vec<Point<T>> = if grid.dim() == 1 {
            (0..65)
                .map(|i| Point::new1(-half + T::from_usize_lossy(i) * half / T::lit(32.0)))
                .collect()
        } else {
            let step = T::lit(2.0) * half / T::lit(8.0);
            let coord = |i: usize| -half + (T::from_usize_lossy(i) + T::lit(0.5)) * step;
            (0..64).map(|k| Point::new2(coord(k % 8), coord(k / 8))).collect()
        };
        Self::snap(grid, &requested).expect("default points lie inside the box")
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Operator values at a set of evaluation points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointValues<T: Real> {
    pub points: Vec<Point<T>>,
    pub values: Vec<T>,
    /// Per-point estimate of the contribution dropped by truncating an
    /// integral over `t` to a finite grid (zero where no truncation occurs).
    pub tail_estimate: Vec<T>,
}

impl<T: Real> PointValues<T> {
    pub fn new(points: &EvalPoints<T>, values: Vec<T>) -> Self {
        let tail_estimate = vec![T::zero(); values.len()];
        Self { points: points.points().to_vec(), values, tail_estimate }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_points_are_cell_centres() {
        let g = Grid::new(1, 8.0f64, 4096).unwrap();
        let pts = EvalPoints::default_for(&g);
        assert_eq!(pts.len(), 65);
        for (i, p) in pts.indices().iter().zip(pts.points()) {
            assert_eq!(g.center(*i), *p);
        }
        let g2 = Grid::new(2, 4.0f64, 64).unwrap();
        assert_eq!(EvalPoints::default_for(&g2).len(), 64);
    }

    #[test]
    fn origin_snaps_to_adjacent_centre() {
        let g = Grid::new(1, 1.0f64, 8).unwrap();
        let pts = EvalPoints::snap(&g, &[Point::new1(0.0)]).unwrap();
        assert_eq!(pts.points()[0].x().abs(), 0.125);
        assert!(EvalPoints::snap(&g, &[Point::new1(2.0)]).is_err());
    }
}
