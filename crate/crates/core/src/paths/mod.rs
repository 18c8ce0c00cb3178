//! Hausdorff paths: synthesis from relations, evaluation, the two-leg
//! construction, canonical interpolation, certification, reparametrization
//! and component extraction.

mod bundle;
mod certify;
mod extract;
mod interpolate;
mod sampled;
mod two_leg;

pub use bundle::{evaluate, synthesize_bundle, Leg, PathBundle};
pub use certify::{
    lipschitz_certificate, path_length_estimate, Certificate, LengthEstimate, CERTIFICATE_RELATIVE_TOLERANCE,
};
pub use extract::{extract_component_path, ComponentPath};
pub use interpolate::{canonical_interpolation, canonical_interpolation_path};
pub use sampled::{constant_speed_reparametrize, sample_path, SampledHausdorffPath};
pub use two_leg::{two_leg_quasiconvex_path, TwoLegPath, TwoLegSplit};

use crate::error::{Error, Result};
use crate::hyperspace::FiniteSubset;
use crate::metric::GroundSpace;

/// Deepest dyadic partition accepted (2^20 intervals).
pub const MAX_DEPTH: u32 = 20;

/// Default certification depth: 256 intervals, 257 samples.
pub const DEFAULT_DEPTH: u32 = 8;

/// A path `[0, 1] -> FS(X)` that can be evaluated pointwise.
pub trait HausdorffPath {
    fn at(&self, space: &GroundSpace, t: f64) -> Result<FiniteSubset>;

    /// Partition of `[0, 1]` used for length and Lipschitz estimates.
    /// Evaluable paths use the dyadic partition of the given depth.
    fn partition(&self, depth: u32) -> Result<Vec<f64>> {
        dyadic_partition(depth)
    }
}

/// `{l / 2^depth : 0 <= l <= 2^depth}`.
pub fn dyadic_partition(depth: u32) -> Result<Vec<f64>> {
    if depth > MAX_DEPTH {
        return Err(Error::Parameter(format!("partition depth {depth} exceeds {MAX_DEPTH}")));
    }
    let k = 1usize << depth;
    Ok((0..=k).map(|l| l as f64 / k as f64).collect())
}

fn check_parameter(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::Domain(format!("path parameter {t} outside [0, 1]")))
    }
}
