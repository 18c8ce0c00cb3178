use serde::Serialize;

use super::{sample_path, HausdorffPath};
use crate::error::{Error, Result};
use crate::hyperspace::dist_point_set;
use crate::metric::{GroundPoint, GroundSpace, POINT_TOLERANCE};

/// A ground path picked out of a Hausdorff path, one point per partition knot.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentPath {
    pub selection: Vec<(f64, GroundPoint)>,
    /// `max d(g(t_i), g(t_{i+1})) / (t_{i+1} - t_i)`.
    pub lipschitz: f64,
}

/// Greedy selection starting from `a ∈ γ(0)`: at each knot take the point of
/// `γ(t_{i+1})` nearest to the previous choice, lowest index on ties.
pub fn extract_component_path(
    space: &GroundSpace,
    path: &dyn HausdorffPath,
    a: &GroundPoint,
    depth: u32,
) -> Result<ComponentPath> {
    let a = space.validate_point(a)?;
    let sampled = sample_path(space, path, depth)?;
    let samples = sampled.samples();
    let start = &samples[0].1;
    if dist_point_set(space, &a, start) > POINT_TOLERANCE {
        return Err(Error::Precondition(format!("{a} is not a point of the path at t = 0")));
    }

    let mut selection = vec![(samples[0].0, a)];
    let mut lipschitz: f64 = 0.0;
    for (t, set) in &samples[1..] {
        let (t_prev, prev) = selection.last().expect("nonempty");
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (k, q) in set.points().iter().enumerate() {
            let d = space.distance(prev, q);
            if d < best_d {
                best = k;
                best_d = d;
            }
        }
        lipschitz = lipschitz.max(best_d / (t - t_prev));
        selection.push((*t, set.points()[best].clone()));
    }
    Ok(ComponentPath { selection, lipschitz })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperspace::FiniteSubset;
    use crate::paths::{synthesize_bundle, two_leg_quasiconvex_path, SampledHausdorffPath};
    use crate::relations::Relation;

    fn r1() -> GroundSpace {
        GroundSpace::euclidean(1).unwrap()
    }

    fn set1(v: &[f64]) -> FiniteSubset {
        FiniteSubset::new(&r1(), v.iter().map(|&x| GroundPoint::coords([x]))).unwrap()
    }

    #[test]
    fn constant_path_gives_constant_selection() {
        let s = r1();
        let b = synthesize_bundle(&s, &Relation::identity(&set1(&[3.0])), 1).unwrap();
        let c = extract_component_path(&s, &b, &GroundPoint::coords([3.0]), 4).unwrap();
        assert_eq!(c.lipschitz, 0.0);
        assert!(c.selection.iter().all(|(_, p)| *p == GroundPoint::coords([3.0])));
    }

    #[test]
    fn symmetric_branches_tie_to_lowest_index() {
        // γ(t) = {t, -t}: both branches are equally near, the canonical order
        // puts -t first.
        let s = r1();
        let samples = (0..=16)
            .map(|k| {
                let t = k as f64 / 16.0;
                (t, set1(&[t, -t]))
            })
            .collect();
        let p = SampledHausdorffPath::new(samples).unwrap();
        let c = extract_component_path(&s, &p, &GroundPoint::coords([0.0]), 0).unwrap();
        assert!((c.lipschitz - 1.0).abs() < 1e-12);
        for (t, q) in &c.selection {
            assert_eq!(q.raw()[0], -t + 0.0);
        }
    }

    #[test]
    fn two_leg_component_from_hub() {
        let s = r1();
        let (x, y) = (set1(&[0.0, 2.0, 11.0]), set1(&[1.0, 10.0, 12.0]));
        let p = two_leg_quasiconvex_path(&s, &x, &y, 3).unwrap();
        let c = extract_component_path(&s, &p, &GroundPoint::coords([11.0]), 8).unwrap();
        let end = c.selection.last().unwrap().1.raw()[0];
        assert!(end == 10.0 || end == 12.0);
        assert!(c.lipschitz <= 2.0 + 1e-9);
        for (t, q) in &c.selection {
            assert!(p.at(&s, *t).unwrap().contains(&s, q));
        }
    }

    #[test]
    fn start_must_lie_in_source() {
        let s = r1();
        let b = synthesize_bundle(&s, &Relation::identity(&set1(&[0.0])), 1).unwrap();
        assert!(matches!(
            extract_component_path(&s, &b, &GroundPoint::coords([0.5]), 2),
            Err(Error::Precondition(_))
        ));
    }
}
