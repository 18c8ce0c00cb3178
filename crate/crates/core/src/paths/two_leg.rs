//! A `2λ`-quasigeodesic between any two members of `FS_n(X)`, built as
//! two bundles that meet at an intermediate set `z` with `|z| <= n`.
//!
//! Starting from a reduced proximal complete relation `R`, every pair has an
//! endpoint of degree one. Points of `x` with degree one (`x'`) move in the
//! first leg to their unique partner; the remaining points of `x` (`x''`,
//! hubs of several `y` leaves) stay put. In the second leg the hubs spread
//! out to their `y` leaves (`y'`) while the rest of `y` (`y''`) is already
//! in place. The intermediate set is `z = x'' ∪ y''`.

use serde::Serialize;

use super::{check_parameter, synthesize_bundle, HausdorffPath, PathBundle};
use crate::error::{Error, Result};
use crate::hyperspace::FiniteSubset;
use crate::metric::{GroundPoint, GroundSpace};
use crate::relations::{build_proximal_complete, reduce_relation, Relation};

/// Indices into `x` and `y` of the four parts of the split.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoLegSplit {
    /// `x'`: degree-one points of `x`, moved in the first leg.
    pub x_movers: Vec<usize>,
    /// `x''`: the remaining points of `x`, fixed in the first leg.
    pub x_anchors: Vec<usize>,
    /// `y'`: degree-one points of `y` not in one-to-one pairs, reached in
    /// the second leg.
    pub y_movers: Vec<usize>,
    /// `y''`: partners of `x'`, fixed in the second leg.
    pub y_anchors: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoLegPath {
    pub first: PathBundle,
    pub second: PathBundle,
    pub midpoint: FiniteSubset,
    pub relation: Relation,
    pub split: TwoLegSplit,
}

impl TwoLegPath {
    /// Lipschitz constant of the concatenation on `[0, 1]`: each half runs
    /// at double speed.
    pub fn declared_lipschitz(&self) -> f64 {
        2.0 * self.first.declared_lipschitz().max(self.second.declared_lipschitz())
    }

    pub fn source(&self) -> &FiniteSubset {
        self.first.source()
    }

    pub fn target(&self) -> &FiniteSubset {
        self.second.target()
    }
}

impl HausdorffPath for TwoLegPath {
    fn at(&self, space: &GroundSpace, t: f64) -> Result<FiniteSubset> {
        check_parameter(t)?;
        if t <= 0.5 {
            self.first.at(space, 2.0 * t)
        } else {
            self.second.at(space, 2.0 * t - 1.0)
        }
    }
}

pub fn two_leg_quasiconvex_path(
    space: &GroundSpace,
    x: &FiniteSubset,
    y: &FiniteSubset,
    n: usize,
) -> Result<TwoLegPath> {
    if x.len() > n || y.len() > n {
        return Err(Error::Precondition(format!(
            "|x| = {} and |y| = {} must not exceed n = {n}",
            x.len(),
            y.len()
        )));
    }
    let relation = reduce_relation(&build_proximal_complete(space, x, y))?;
    let (left, right) = relation.degrees();

    // f on degree-one x points, g on degree-one y points.
    let mut f: Vec<Option<usize>> = vec![None; x.len()];
    let mut g: Vec<Option<usize>> = vec![None; y.len()];
    for &(i, j) in relation.pairs() {
        if left[i] == 1 {
            f[i] = Some(j);
        }
        if right[j] == 1 {
            g[j] = Some(i);
        }
    }

    let x_movers: Vec<usize> = (0..x.len()).filter(|&i| left[i] == 1).collect();
    // y^0: the y ends of one-to-one pairs.
    let y_movers: Vec<usize> = (0..y.len())
        .filter(|&j| right[j] == 1 && left[g[j].expect("degree one")] != 1)
        .collect();
    let mut x_anchors: Vec<usize> = y_movers.iter().map(|&j| g[j].expect("degree one")).collect();
    x_anchors.sort_unstable();
    x_anchors.dedup();
    let mut y_anchors: Vec<usize> = x_movers.iter().map(|&i| f[i].expect("degree one")).collect();
    y_anchors.sort_unstable();
    y_anchors.dedup();
    debug_assert_eq!(x_movers.len() + x_anchors.len(), x.len());
    debug_assert_eq!(y_movers.len() + y_anchors.len(), y.len());

    let xp = |i: usize| x.points()[i].clone();
    let yp = |j: usize| y.points()[j].clone();
    let z_points: Vec<GroundPoint> = x_anchors
        .iter()
        .map(|&i| xp(i))
        .chain(y_anchors.iter().map(|&j| yp(j)))
        .collect();
    let midpoint = FiniteSubset::from_valid(space, z_points);
    if midpoint.len() > n {
        return Err(Error::Precondition(format!(
            "intermediate set has {} points, above n = {n}",
            midpoint.len()
        )));
    }
    let z_index = |p: &GroundPoint| midpoint.index_of(space, p).expect("member of z");

    let first_pairs = x_movers
        .iter()
        .map(|&i| (i, z_index(&yp(f[i].expect("degree one")))))
        .chain(x_anchors.iter().map(|&i| (i, z_index(&xp(i)))));
    let first_relation = Relation::new(x.clone(), midpoint.clone(), first_pairs)?;

    let second_pairs = y_movers
        .iter()
        .map(|&j| (z_index(&xp(g[j].expect("degree one"))), j))
        .chain(y_anchors.iter().map(|&j| (z_index(&yp(j)), j)));
    let second_relation = Relation::new(midpoint.clone(), y.clone(), second_pairs)?;

    Ok(TwoLegPath {
        first: synthesize_bundle(space, &first_relation, n)?,
        second: synthesize_bundle(space, &second_relation, n)?,
        midpoint,
        relation,
        split: TwoLegSplit {
            x_movers,
            x_anchors,
            y_movers,
            y_anchors,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperspace::hausdorff_distance;
    use crate::paths::path_length_estimate;

    fn r1() -> GroundSpace {
        GroundSpace::euclidean(1).unwrap()
    }

    fn set1(v: &[f64]) -> FiniteSubset {
        FiniteSubset::new(&r1(), v.iter().map(|&x| GroundPoint::coords([x]))).unwrap()
    }

    #[test]
    fn equal_endpoints() {
        let s = r1();
        let x = set1(&[0.0, 5.0]);
        let p = two_leg_quasiconvex_path(&s, &x, &x, 2).unwrap();
        assert_eq!(p.midpoint, x);
        assert_eq!(path_length_estimate(&s, &p, 6).unwrap().length, 0.0);
    }

    #[test]
    fn matching_relation_reaches_target_in_first_leg() {
        let s = r1();
        let (x, y) = (set1(&[0.0, 10.0]), set1(&[1.0, 9.0]));
        let p = two_leg_quasiconvex_path(&s, &x, &y, 2).unwrap();
        assert_eq!(p.midpoint, y);
        assert!(p.split.y_movers.is_empty());
        assert!(p.split.x_anchors.is_empty());
        assert_eq!(p.second.declared_lipschitz(), 0.0);
        let len = path_length_estimate(&s, &p, 8).unwrap().length;
        assert!((len - 1.0).abs() < 1e-9);
    }

    #[test]
    fn spaced_pair_goes_through_hubs() {
        let s = r1();
        let (x, y) = (set1(&[0.0, 2.0, 11.0]), set1(&[1.0, 10.0, 12.0]));
        let p = two_leg_quasiconvex_path(&s, &x, &y, 3).unwrap();
        assert_eq!(p.split.x_movers, vec![0, 1]);
        assert_eq!(p.split.y_movers, vec![1, 2]);
        assert_eq!(p.split.x_anchors, vec![2]);
        assert_eq!(p.split.y_anchors, vec![0]);
        assert_eq!(p.midpoint, set1(&[1.0, 11.0]));
        assert_eq!(hausdorff_distance(&s, &x, &p.midpoint), 1.0);
        assert_eq!(hausdorff_distance(&s, &p.midpoint, &y), 1.0);
        let len = path_length_estimate(&s, &p, 8).unwrap().length;
        assert!((len - 2.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_oversized_inputs() {
        let s = r1();
        let x = set1(&[0.0, 1.0, 2.0]);
        assert!(matches!(
            two_leg_quasiconvex_path(&s, &x, &x, 2),
            Err(Error::Precondition(_))
        ));
    }
}
