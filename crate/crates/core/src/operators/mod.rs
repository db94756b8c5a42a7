//! Discrete evaluation of the rough-kernel fractional operators, their
//! commutators, the Marcinkiewicz operator and the heat-semigroup potential.
//!
//! Every operator is evaluated at an explicit set of cell centres; each
//! point costs one pass over the grid. Work is parallel over points only,
//! and each per-point sum is a deterministic pairwise reduction, so results
//! do not depend on the thread count.

mod marcinkiewicz;
mod maximal;
mod params;
mod points;
mod riesz;
mod semigroup;
mod table;

pub use marcinkiewicz::{marcinkiewicz, CANCELLATION_TOL};
pub use maximal::{commutator_maximal, default_radii, maximal_rough};
pub use params::OperatorParams;
pub use points::{EvalPoints, PointValues};
pub use riesz::{commutator_riesz, commutator_riesz_majorant, riesz_rough};
pub use semigroup::{default_times, riesz_semigroup_constant, semigroup_potential};
pub use table::self_cell_integral;
