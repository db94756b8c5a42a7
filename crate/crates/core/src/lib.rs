//! Numerical toolkit for fractional integrals with rough kernels on generalized
//! local Morrey spaces.
//!
//! Everything is generic over the scalar through [`scalar::Real`], implemented
//! for `f32` and `f64`; the aliases below fix the scalar for common use.

// Negated comparisons deliberately reject NaN alongside out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod conditions;
pub mod error;
pub mod grid;
pub mod hardy;
pub mod kernel;
pub mod norms;
pub mod operators;
pub mod scalar;
pub mod sum;
pub mod tails;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub type GridF64 = grid::Grid<f64>;
pub type GridFunctionF64 = grid::GridFunction<f64>;
pub type PointF64 = grid::Point<f64>;
pub type RoughKernelF64 = kernel::RoughKernel<f64>;
pub type FunctionSpecF64 = catalog::FunctionSpec<f64>;
pub type WeightSpecF64 = catalog::WeightSpec<f64>;
pub type RadiiSetF64 = catalog::RadiiSet<f64>;
pub type OperatorParamsF64 = operators::OperatorParams<f64>;
pub type HalfLineFunctionF64 = tails::HalfLineFunction<f64>;
pub type ExperimentSpecF64 = verify::ExperimentSpec<f64>;

pub type GridF32 = grid::Grid<f32>;
pub type GridFunctionF32 = grid::GridFunction<f32>;
pub type PointF32 = grid::Point<f32>;
pub type RoughKernelF32 = kernel::RoughKernel<f32>;
pub type FunctionSpecF32 = catalog::FunctionSpec<f32>;
pub type WeightSpecF32 = catalog::WeightSpec<f32>;
pub type RadiiSetF32 = catalog::RadiiSet<f32>;
pub type OperatorParamsF32 = operators::OperatorParams<f32>;
pub type HalfLineFunctionF32 = tails::HalfLineFunction<f32>;
pub type ExperimentSpecF32 = verify::ExperimentSpec<f32>;
