//! Finite subsets of a ground space as points of `FS_n(X)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{GroundPoint, GroundSpace, POINT_TOLERANCE};
use crate::nearest::KdTree;

// Above this many point pairs, Euclidean Hausdorff distances go through a kd-tree.
const KD_THRESHOLD: usize = 4096;

/// A nonempty finite set of ground points in canonical form: sorted by
/// [`GroundPoint::key_cmp`], with no two points within [`POINT_TOLERANCE`].
///
/// The cardinality cap `n` of `FS_n(X)` is carried by callers; the same set
/// is a member of every `FS_n` with `n >= len()`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiniteSubset {
    points: Vec<GroundPoint>,
}

/// Wire form of a [`FiniteSubset`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSubset {
    pub points: Vec<Vec<f64>>,
}

impl FiniteSubset {
    /// Validates every point against `space` and canonicalizes.
    pub fn new(space: &GroundSpace, points: impl IntoIterator<Item = GroundPoint>) -> Result<Self> {
        let points = points
            .into_iter()
            .map(|p| space.validate_point(&p))
            .collect::<Result<Vec<_>>>()?;
        if points.is_empty() {
            return Err(Error::InvalidPoint("a finite subset must be nonempty".into()));
        }
        Ok(Self::from_valid(space, points))
    }

    pub fn from_raw(space: &GroundSpace, raw: &[Vec<f64>]) -> Result<Self> {
        let points = raw
            .iter()
            .map(|r| space.point_from_raw(r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, points)
    }

    pub fn singleton(space: &GroundSpace, p: GroundPoint) -> Result<Self> {
        Self::new(space, [p])
    }

    /// Canonicalizes points that are already valid members of `space`.
    pub(crate) fn from_valid(space: &GroundSpace, mut points: Vec<GroundPoint>) -> Self {
        debug_assert!(!points.is_empty());
        points.sort_by(|a, b| a.key_cmp(b));
        let mut kept: Vec<GroundPoint> = Vec::with_capacity(points.len());
        let by_first_coord = space.coordinate_dim().is_some();
        for p in points {
            let duplicate = if by_first_coord {
                // Distances dominate the first-coordinate gap, so only a
                // short tail of the sorted list can hold a duplicate.
                let x0 = p.as_coords().expect("coords")[0];
                kept.iter()
                    .rev()
                    .take_while(|k| k.as_coords().expect("coords")[0] >= x0 - POINT_TOLERANCE)
                    .any(|k| space.distance(k, &p) <= POINT_TOLERANCE)
            } else {
                kept.iter().any(|k| space.distance(k, &p) <= POINT_TOLERANCE)
            };
            if !duplicate {
                kept.push(p);
            }
        }
        FiniteSubset { points: kept }
    }

    /// Wraps points already in canonical order and pairwise farther apart
    /// than the tolerance.
    pub(crate) fn from_sorted_separated(points: Vec<GroundPoint>) -> Self {
        debug_assert!(!points.is_empty());
        debug_assert!(points.windows(2).all(|w| w[0].key_cmp(&w[1]).is_lt()));
        FiniteSubset { points }
    }

    /// Re-runs canonicalization. Idempotent on canonical sets.
    pub fn canonicalize(&self, space: &GroundSpace) -> Self {
        Self::from_valid(space, self.points.clone())
    }

    pub fn points(&self) -> &[GroundPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false: finite subsets are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&GroundPoint> {
        self.points.get(i)
    }

    /// Index of the first member within tolerance of `p`.
    pub fn index_of(&self, space: &GroundSpace, p: &GroundPoint) -> Option<usize> {
        self.points.iter().position(|q| space.distance(p, q) <= POINT_TOLERANCE)
    }

    pub fn contains(&self, space: &GroundSpace, p: &GroundPoint) -> bool {
        self.index_of(space, p).is_some()
    }

    pub fn union(&self, space: &GroundSpace, other: &FiniteSubset) -> FiniteSubset {
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().cloned());
        Self::from_valid(space, pts)
    }

    pub fn to_raw(&self) -> RawSubset {
        RawSubset {
            points: self.points.iter().map(GroundPoint::raw).collect(),
        }
    }
}

/// `dist(p, A)`: distance from a valid point to the nearest member of `a`.
pub fn dist_point_set(space: &GroundSpace, p: &GroundPoint, a: &FiniteSubset) -> f64 {
    a.points
        .iter()
        .map(|q| space.distance(p, q))
        .fold(f64::INFINITY, f64::min)
}

/// `sup_{a in A} dist(a, B)`.
pub fn directed_hausdorff(space: &GroundSpace, a: &FiniteSubset, b: &FiniteSubset) -> f64 {
    if space.is_euclidean() && a.len() * b.len() > KD_THRESHOLD {
        let tree = KdTree::new(&b.points);
        return a
            .points
            .iter()
            .map(|p| tree.nearest_distance(p.as_coords().expect("coords")))
            .fold(0.0, f64::max);
    }
    a.points.iter().map(|p| dist_point_set(space, p, b)).fold(0.0, f64::max)
}

/// Hausdorff distance between two finite subsets.
pub fn hausdorff_distance(space: &GroundSpace, a: &FiniteSubset, b: &FiniteSubset) -> f64 {
    directed_hausdorff(space, a, b).max(directed_hausdorff(space, b, a))
}

/// Largest pairwise distance; zero for singletons.
pub fn diameter(space: &GroundSpace, a: &FiniteSubset) -> f64 {
    let pts = &a.points;
    let mut best = 0.0_f64;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            best = best.max(space.distance(p, q));
        }
    }
    best
}

/// Membership of `p` in the closed `r`-neighbourhood of `a`, with the point
/// tolerance as boundary slack.
pub fn in_closed_neighborhood(space: &GroundSpace, p: &GroundPoint, a: &FiniteSubset, r: f64) -> Result<bool> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::Domain(format!("neighbourhood radius {r} is negative")));
    }
    Ok(dist_point_set(space, p, a) <= r + POINT_TOLERANCE)
}

/// Evaluates `d_H(A ∪ B, C ∪ D) <= max(d_H(A, C), d_H(B, D))`, which holds for
/// all inputs.
pub fn union_bound_check(
    space: &GroundSpace,
    a: &FiniteSubset,
    b: &FiniteSubset,
    c: &FiniteSubset,
    d: &FiniteSubset,
) -> bool {
    let lhs = hausdorff_distance(space, &a.union(space, b), &c.union(space, d));
    let rhs = hausdorff_distance(space, a, c).max(hausdorff_distance(space, b, d));
    lhs <= rhs
}
