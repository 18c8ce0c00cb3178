use serde::Serialize;

use super::{sample_path, HausdorffPath};
use crate::error::Result;
use crate::hyperspace::hausdorff_distance;
use crate::metric::GroundSpace;

/// Relative slack allowed between a grid Lipschitz estimate and the
/// declared constant.
pub const CERTIFICATE_RELATIVE_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LengthEstimate {
    pub length: f64,
    pub depth: u32,
}

/// Grid evidence about a Hausdorff path. Lengths are lower bounds; a
/// failing Lipschitz check refutes the declared constant, a passing one
/// holds at the grid resolution only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub length_lower_bound: f64,
    pub lipschitz_estimate: f64,
    pub endpoint_distance: f64,
    /// `length_lower_bound / endpoint_distance`; 0 for a constant loop,
    /// infinite for a nonconstant loop.
    pub quasiconvexity_ratio: f64,
    pub grid_depth: u32,
    /// Number of partition intervals.
    pub grid_resolution: usize,
    pub declared_l: f64,
    pub passed: bool,
}

/// `ℓ_P(γ)` over the path's partition at `depth`.
pub fn path_length_estimate(space: &GroundSpace, path: &dyn HausdorffPath, depth: u32) -> Result<LengthEstimate> {
    let sampled = sample_path(space, path, depth)?;
    Ok(LengthEstimate {
        length: sampled.chords(space).iter().sum(),
        depth,
    })
}

/// Maximum of `d_H(γ(t), γ(t')) / |t - t'|` over all pairs of partition
/// points, checked against `declared_l`. Runs in linear time.
pub fn lipschitz_certificate(
    space: &GroundSpace,
    path: &dyn HausdorffPath,
    declared_l: f64,
    depth: u32,
) -> Result<Certificate> {
    let sampled = sample_path(space, path, depth)?;
    let samples = sampled.samples();
    // The ratio over any pair is a weighted mean of the chord slopes between
    // them (triangle inequality), so the maximum is attained on a chord.
    let chords = sampled.chords(space);
    let length_lower_bound: f64 = chords.iter().sum();
    let lipschitz_estimate = chords
        .iter()
        .zip(samples.windows(2))
        .map(|(c, w)| c / (w[1].0 - w[0].0))
        .fold(0.0, f64::max);

    let endpoint_distance = hausdorff_distance(space, sampled.source(), sampled.target());
    let quasiconvexity_ratio = if endpoint_distance > 0.0 {
        length_lower_bound / endpoint_distance
    } else if length_lower_bound > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };

    Ok(Certificate {
        length_lower_bound,
        lipschitz_estimate,
        endpoint_distance,
        quasiconvexity_ratio,
        grid_depth: depth,
        grid_resolution: samples.len() - 1,
        declared_l,
        passed: lipschitz_estimate <= declared_l * (1.0 + CERTIFICATE_RELATIVE_TOLERANCE),
    })
}
