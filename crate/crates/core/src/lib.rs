//! Lipschitz paths and quasigeodesics in hyperspaces of finite subsets under
//! the Hausdorff metric.

// `!(x > 0.0)` style checks deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod counterexamples;
pub mod error;
pub mod hyperspace;
pub mod io;
pub mod metric;
mod nearest;
pub mod paths;
pub mod relations;

pub use error::{Error, Result};
pub use hyperspace::{hausdorff_distance, FiniteSubset};
pub use metric::{GroundPoint, GroundSpace, SpaceConfig, POINT_TOLERANCE};
pub use relations::Relation;
