//! Endpoint relations `R ⊂ x × y` between finite subsets: construction,
//! trimming, reduction, classification, and an exhaustive minimal-relation
//! oracle for small instances.
//!
//! Relations store index pairs into the canonical point lists of their
//! source and target sets, kept sorted and free of duplicates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperspace::{hausdorff_distance, FiniteSubset};
use crate::metric::{GroundSpace, POINT_TOLERANCE};

/// Upper limit on candidate pairs the exhaustive oracle will enumerate.
pub const BRUTE_FORCE_PAIR_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    source: FiniteSubset,
    target: FiniteSubset,
    pairs: Vec<(usize, usize)>,
}

/// Wire form of a relation: `{"pairs": [[i, j], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRelation {
    pub pairs: Vec<(usize, usize)>,
}

impl Relation {
    pub fn new(
        source: FiniteSubset,
        target: FiniteSubset,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i >= source.len() || j >= target.len()) {
            return Err(Error::Precondition(format!(
                "pair ({i}, {j}) indexes outside a {}x{} relation",
                source.len(),
                target.len()
            )));
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Relation { source, target, pairs })
    }

    /// `{(a, a) : a in set}`.
    pub fn identity(set: &FiniteSubset) -> Self {
        Relation {
            source: set.clone(),
            target: set.clone(),
            pairs: (0..set.len()).map(|i| (i, i)).collect(),
        }
    }

    pub fn source(&self) -> &FiniteSubset {
        &self.source
    }

    pub fn target(&self) -> &FiniteSubset {
        &self.target
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn to_raw(&self) -> RawRelation {
        RawRelation {
            pairs: self.pairs.clone(),
        }
    }

    pub(crate) fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        degrees(self.source.len(), self.target.len(), &self.pairs)
    }

    pub fn is_complete(&self) -> bool {
        let (left, right) = self.degrees();
        left.iter().all(|&d| d > 0) && right.iter().all(|&d| d > 0)
    }

    /// Longest ground distance spanned by a pair.
    pub fn max_pair_distance(&self, space: &GroundSpace) -> f64 {
        self.pairs
            .iter()
            .map(|&(i, j)| space.distance(&self.source.points()[i], &self.target.points()[j]))
            .fold(0.0, f64::max)
    }

    fn is_identity(&self, space: &GroundSpace) -> bool {
        self.source.len() == self.target.len()
            && self.pairs.len() == self.source.len()
            && self.pairs.iter().all(|&(i, j)| {
                i == j && space.distance(&self.source.points()[i], &self.target.points()[j]) <= POINT_TOLERANCE
            })
    }
}

fn degrees(n: usize, m: usize, pairs: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
    let mut left = vec![0; n];
    let mut right = vec![0; m];
    for &(i, j) in pairs {
        left[i] += 1;
        right[j] += 1;
    }
    (left, right)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationClassification {
    pub left_complete: bool,
    pub right_complete: bool,
    pub complete: bool,
    pub reduced: bool,
    pub reduced_complete: bool,
    /// `max d(a, b) / d_H(x, y)` over pairs. When `d_H = 0` this is 1 for the
    /// identity relation and infinite otherwise (serialized as `null`).
    pub proximality_factor: f64,
    pub proximality_unbounded: bool,
}

pub fn classify(space: &GroundSpace, r: &Relation) -> RelationClassification {
    let (left, right) = r.degrees();
    let left_complete = left.iter().all(|&d| d >= 1);
    let right_complete = right.iter().all(|&d| d >= 1);
    let complete = left_complete && right_complete;
    let reduced = r.pairs.iter().all(|&(i, j)| left[i] <= 1 || right[j] <= 1);

    let h = hausdorff_distance(space, &r.source, &r.target);
    let proximality_factor = if h <= POINT_TOLERANCE {
        if r.is_identity(space) {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        r.max_pair_distance(space) / h
    };

    RelationClassification {
        left_complete,
        right_complete,
        complete,
        reduced,
        reduced_complete: complete && reduced,
        proximality_factor,
        proximality_unbounded: proximality_factor.is_infinite(),
    }
}

/// Index of a nearest member of `to` for each member of `from`, smallest
/// index on exact ties.
fn nearest_indices(space: &GroundSpace, from: &FiniteSubset, to: &FiniteSubset) -> Vec<usize> {
    from.points()
        .iter()
        .map(|p| {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (j, q) in to.points().iter().enumerate() {
                let d = space.distance(p, q);
                if d < best_d {
                    best = j;
                    best_d = d;
                }
            }
            best
        })
        .collect()
}

/// Nearest-neighbour relation `{(i, α(i))} ∪ {(β(j), j)}`: complete,
/// 1-proximal, and of size at most `|x| + |y|`.
pub fn build_proximal_complete(space: &GroundSpace, x: &FiniteSubset, y: &FiniteSubset) -> Relation {
    if x == y {
        return Relation::identity(x);
    }
    let alpha = nearest_indices(space, x, y);
    let beta = nearest_indices(space, y, x);
    let pairs = alpha
        .iter()
        .enumerate()
        .map(|(i, &j)| (i, j))
        .chain(beta.iter().enumerate().map(|(j, &i)| (i, j)));
    Relation::new(x.clone(), y.clone(), pairs).expect("nearest indices are in range")
}

fn is_inessential(pairs: &[(usize, usize)], left: &[usize], right: &[usize], p: (usize, usize)) -> bool {
    pairs.contains(&p) && left[p.0] >= 2 && right[p.1] >= 2
}

/// Cuts a nearest-neighbour relation down to at most `|x| + |y| - 2` pairs
/// while keeping it complete.
///
/// First drops the two pairs that duplicate the matches realising the
/// Hausdorff distance, `(β(α(i0)), α(i0))` and `(β(j0), α(β(j0)))`, each one
/// only if it is still inessential when its turn comes. If the bound is still not met, further
/// inessential pairs go in lexicographic order. Relations already within the
/// bound are returned unchanged.
pub fn trim_to_bound(space: &GroundSpace, r: &Relation) -> Result<Relation> {
    let (n, m) = (r.source.len(), r.target.len());
    if n < 2 || m < 2 {
        return Err(Error::Precondition(format!(
            "trimming needs |x| >= 2 and |y| >= 2, got {n} and {m}"
        )));
    }
    if !r.is_complete() {
        return Err(Error::Precondition("relation is not complete".into()));
    }
    let bound = n + m - 2;
    if r.len() <= bound {
        return Ok(r.clone());
    }

    let x = &r.source;
    let y = &r.target;
    let alpha = nearest_indices(space, x, y);
    let beta = nearest_indices(space, y, x);
    let argmax = |vals: Vec<f64>| {
        let mut best = 0;
        for (k, v) in vals.iter().enumerate() {
            if *v > vals[best] {
                best = k;
            }
        }
        best
    };
    let i0 = argmax(
        (0..n)
            .map(|i| space.distance(&x.points()[i], &y.points()[alpha[i]]))
            .collect(),
    );
    let j0 = argmax(
        (0..m)
            .map(|j| space.distance(&x.points()[beta[j]], &y.points()[j]))
            .collect(),
    );
    let witnesses = [(beta[alpha[i0]], alpha[i0]), (beta[j0], alpha[beta[j0]])];

    let mut pairs = r.pairs.clone();
    for w in witnesses {
        let (left, right) = degrees(n, m, &pairs);
        if is_inessential(&pairs, &left, &right, w) {
            pairs.retain(|&p| p != w);
        }
    }
    while pairs.len() > bound {
        let (left, right) = degrees(n, m, &pairs);
        let next = pairs
            .iter()
            .copied()
            .find(|&p| left[p.0] >= 2 && right[p.1] >= 2)
            .expect("a complete relation above the bound has an inessential pair");
        pairs.retain(|&p| p != next);
    }
    Relation::new(x.clone(), y.clone(), pairs)
}

/// Removes inessential pairs (both endpoints of degree at least 2) in
/// lexicographic order, rescanning after each removal, until the relation
/// is reduced.
pub fn reduce_relation(r: &Relation) -> Result<Relation> {
    if !r.is_complete() {
        return Err(Error::Precondition("relation is not complete".into()));
    }
    let (n, m) = (r.source.len(), r.target.len());
    let mut pairs = r.pairs.clone();
    loop {
        let (left, right) = degrees(n, m, &pairs);
        match pairs.iter().position(|&(i, j)| left[i] >= 2 && right[j] >= 2) {
            Some(k) => {
                pairs.remove(k);
            }
            None => break,
        }
    }
    Relation::new(r.source.clone(), r.target.clone(), pairs)
}

/// The proximal complete relation used for geodesics in the enlarged space:
/// trimmed when both sets have at least two points.
pub fn bounded_proximal_complete(space: &GroundSpace, x: &FiniteSubset, y: &FiniteSubset) -> Relation {
    let r = build_proximal_complete(space, x, y);
    if x.len() >= 2 && y.len() >= 2 {
        trim_to_bound(space, &r).expect("nearest-neighbour relations are complete")
    } else {
        r
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MinRelation {
    Found {
        relation: Relation,
        cardinality: usize,
    },
    /// No complete relation uses only pairs within the proximality bound.
    Infeasible,
}

/// Smallest complete relation whose pairs all satisfy
/// `d(x_i, y_j) <= bound * d_H(x, y) + τ`, by exhaustive enumeration in
/// increasing cardinality. Among minimal relations the lexicographically
/// first (by candidate order) is returned.
pub fn brute_force_min_relation(
    space: &GroundSpace,
    x: &FiniteSubset,
    y: &FiniteSubset,
    proximality_bound: f64,
) -> Result<MinRelation> {
    if !(proximality_bound >= 0.0) {
        return Err(Error::Domain(format!(
            "proximality bound {proximality_bound} is negative"
        )));
    }
    let h = hausdorff_distance(space, x, y);
    let limit = proximality_bound * h + POINT_TOLERANCE;
    let mut candidates = Vec::new();
    for (i, p) in x.points().iter().enumerate() {
        for (j, q) in y.points().iter().enumerate() {
            if space.distance(p, q) <= limit {
                candidates.push((i, j));
            }
        }
    }
    if candidates.len() > BRUTE_FORCE_PAIR_LIMIT {
        return Err(Error::Capacity {
            what: "candidate pair count",
            actual: candidates.len(),
            limit: BRUTE_FORCE_PAIR_LIMIT,
        });
    }
    let (n, m) = (x.len(), y.len());
    if n > 64 || m > 64 {
        // More points than the candidate limit allows to cover.
        return Ok(MinRelation::Infeasible);
    }
    let full_left: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let full_right: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };

    let c = candidates.len();
    let lower = n.max(m);
    for k in lower..=c {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let (mut lm, mut rm) = (0u64, 0u64);
            for &t in &idx {
                let (i, j) = candidates[t];
                lm |= 1 << i;
                rm |= 1 << j;
            }
            if lm == full_left && rm == full_right {
                let relation = Relation::new(x.clone(), y.clone(), idx.iter().map(|&t| candidates[t]))?;
                return Ok(MinRelation::Found {
                    relation,
                    cardinality: k,
                });
            }
            if !next_combination(&mut idx, c) {
                break;
            }
        }
    }
    Ok(MinRelation::Infeasible)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut pos = k;
    while pos > 0 {
        pos -= 1;
        if idx[pos] < n - k + pos {
            idx[pos] += 1;
            for q in pos + 1..k {
                idx[q] = idx[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::GroundPoint;

    fn r1() -> GroundSpace {
        GroundSpace::euclidean(1).unwrap()
    }

    fn set1(v: &[f64]) -> FiniteSubset {
        FiniteSubset::new(&r1(), v.iter().map(|&x| GroundPoint::coords([x]))).unwrap()
    }

    // Indices into the canonical (sorted) point lists.
    fn pairs_by_value(x: &[f64], y: &[f64], vals: &[(f64, f64)]) -> Vec<(usize, usize)> {
        vals.iter()
            .map(|&(a, b)| {
                (
                    x.iter().position(|&v| v == a).unwrap(),
                    y.iter().position(|&v| v == b).unwrap(),
                )
            })
            .collect()
    }

    const X: [f64; 3] = [0.0, 2.0, 11.0];
    const Y: [f64; 3] = [1.0, 10.0, 12.0];

    fn spaced_relation() -> Relation {
        let pairs = pairs_by_value(&X, &Y, &[(0.0, 1.0), (2.0, 1.0), (11.0, 10.0), (11.0, 12.0)]);
        Relation::new(set1(&X), set1(&Y), pairs).unwrap()
    }

    #[test]
    fn identity_classification() {
        let p = set1(&[4.0]);
        let c = classify(&r1(), &Relation::identity(&p));
        assert!(c.complete && c.reduced && c.reduced_complete);
        assert_eq!(c.proximality_factor, 1.0);
    }

    #[test]
    fn spaced_pair_relation_classification() {
        let c = classify(&r1(), &spaced_relation());
        assert!(c.complete && c.reduced);
        assert_eq!(c.proximality_factor, 1.0);

        let partial = Relation::new(set1(&X), set1(&Y), [(0, 0)]).unwrap();
        let c = classify(&r1(), &partial);
        assert!(!c.left_complete && !c.complete);
    }

    #[test]
    fn non_identity_relation_on_equal_sets_is_unbounded() {
        let s = set1(&[0.0, 1.0]);
        let r = Relation::new(s.clone(), s, [(0, 0), (1, 1), (0, 1)]).unwrap();
        let c = classify(&r1(), &r);
        assert!(c.proximality_unbounded);
        assert!(c.proximality_factor.is_infinite());
    }

    #[test]
    fn out_of_range_pairs_rejected() {
        assert!(Relation::new(set1(&[0.0]), set1(&[1.0]), [(0, 1)]).is_err());
    }

    #[test]
    fn nearest_neighbour_relations() {
        let s = r1();
        let x = set1(&[0.0, 10.0]);
        assert_eq!(build_proximal_complete(&s, &x, &x).pairs(), &[(0, 0), (1, 1)]);

        let r = build_proximal_complete(&s, &x, &set1(&[1.0, 9.0]));
        assert_eq!(r.pairs(), &[(0, 0), (1, 1)]);

        let r = build_proximal_complete(&s, &set1(&X), &set1(&Y));
        assert_eq!(r, spaced_relation());
    }

    #[test]
    fn trim_leaves_relations_within_bound() {
        let s = r1();
        let r = build_proximal_complete(&s, &set1(&[0.0, 10.0]), &set1(&[1.0, 9.0]));
        assert_eq!(trim_to_bound(&s, &r).unwrap(), r);
        let id = Relation::identity(&set1(&[0.0, 1.0]));
        assert_eq!(trim_to_bound(&s, &id).unwrap(), id);
    }

    #[test]
    fn trim_removes_both_witness_pairs() {
        // Nearest neighbours: 7, 8, 14 -> 3 (14 ties 3 and 25) and 1, 3 -> 7,
        // 25 -> 14, giving five pairs; both witness pairs are redundant.
        let s = r1();
        let x = set1(&[7.0, 8.0, 14.0]);
        let y = set1(&[1.0, 3.0, 25.0]);
        let r = build_proximal_complete(&s, &x, &y);
        assert_eq!(r.len(), 5);
        let t = trim_to_bound(&s, &r).unwrap();
        assert_eq!(t.len(), r.len() - 2);
        assert_eq!(t.pairs(), &[(0, 0), (1, 1), (2, 2)]);
        assert!(t.is_complete());
        assert!(classify(&s, &t).proximality_factor <= 1.0);
        match brute_force_min_relation(&s, &x, &y, 1.0).unwrap() {
            MinRelation::Found { cardinality, .. } => assert!(cardinality <= 4),
            MinRelation::Infeasible => panic!("proximal complete relation exists"),
        }
    }

    #[test]
    fn trim_precondition() {
        let s = r1();
        let r = build_proximal_complete(&s, &set1(&[0.0]), &set1(&[1.0, 2.0]));
        assert!(matches!(trim_to_bound(&s, &r), Err(Error::Precondition(_))));
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce_relation(&spaced_relation()).unwrap(), spaced_relation());

        let star = Relation::new(set1(&[0.0]), set1(&[1.0, 2.0]), [(0, 0), (0, 1)]).unwrap();
        assert_eq!(reduce_relation(&star).unwrap(), star);

        let s2 = set1(&[0.0, 1.0]);
        let full = Relation::new(s2.clone(), s2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let reduced = reduce_relation(&full).unwrap();
        // (0,0) goes first, leaving (1,1) as the only pair with both degrees 2.
        assert_eq!(reduced.pairs(), &[(0, 1), (1, 0)]);
        let c = classify(&r1(), &reduced);
        assert!(c.reduced_complete);

        let partial = Relation::new(set1(&[0.0, 1.0]), set1(&[0.0]), [(0, 0)]).unwrap();
        assert!(matches!(reduce_relation(&partial), Err(Error::Precondition(_))));
    }

    #[test]
    fn brute_force_examples() {
        let s = r1();
        let x = set1(&[0.0, 5.0]);
        match brute_force_min_relation(&s, &x, &x, 1.0).unwrap() {
            MinRelation::Found { relation, cardinality } => {
                assert_eq!(cardinality, 2);
                assert_eq!(relation, Relation::identity(&x));
            }
            MinRelation::Infeasible => panic!(),
        }

        // Both 0 and 2 must reach 1, and only 11 reaches 10 and 12: four pairs
        // for every bound below 8, three once 2 -> 10 (distance 8) is allowed.
        let (x, y) = (set1(&X), set1(&Y));
        for (bound, expect) in [(1.0, 4), (2.0, 4), (7.9, 4), (8.0, 3)] {
            match brute_force_min_relation(&s, &x, &y, bound).unwrap() {
                MinRelation::Found { cardinality, .. } => assert_eq!(cardinality, expect, "bound {bound}"),
                MinRelation::Infeasible => panic!(),
            }
        }

        assert_eq!(
            brute_force_min_relation(&s, &x, &y, 0.5).unwrap(),
            MinRelation::Infeasible
        );
    }

    #[test]
    fn brute_force_capacity_guard() {
        let s = r1();
        let x = set1(&[0.0, 0.1, 0.2, 0.3, 0.4]);
        let y = set1(&[0.05, 0.15, 0.25, 0.35, 0.45]);
        assert!(matches!(
            brute_force_min_relation(&s, &x, &y, 100.0),
            Err(Error::Capacity { .. })
        ));
    }
}
