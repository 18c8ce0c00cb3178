use serde::Serialize;

use super::{check_parameter, HausdorffPath};
use crate::error::{Error, Result};
use crate::hyperspace::{hausdorff_distance, FiniteSubset};
use crate::metric::{GroundPoint, GroundSpace, POINT_TOLERANCE};
use crate::relations::Relation;

/// A piecewise-geodesic ground path: consecutive breakpoints are joined by
/// the space's geodesic, traversed at constant speed between their knots.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Leg {
    breakpoints: Vec<GroundPoint>,
    knots: Vec<f64>,
}

impl Leg {
    pub fn geodesic(from: GroundPoint, to: GroundPoint) -> Self {
        Leg {
            breakpoints: vec![from, to],
            knots: vec![0.0, 1.0],
        }
    }

    pub fn new(space: &GroundSpace, breakpoints: Vec<GroundPoint>, knots: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || breakpoints.len() != knots.len() {
            return Err(Error::Parameter(
                "a leg needs at least two breakpoints, one knot each".into(),
            ));
        }
        if knots[0] != 0.0 || *knots.last().expect("nonempty") != 1.0 {
            return Err(Error::Parameter("leg knots must run from 0 to 1".into()));
        }
        if knots.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Parameter("leg knots must strictly increase".into()));
        }
        let breakpoints = breakpoints
            .iter()
            .map(|p| space.validate_point(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Leg { breakpoints, knots })
    }

    pub fn start(&self) -> &GroundPoint {
        &self.breakpoints[0]
    }

    pub fn end(&self) -> &GroundPoint {
        self.breakpoints.last().expect("nonempty")
    }

    pub fn breakpoints(&self) -> &[GroundPoint] {
        &self.breakpoints
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn eval(&self, space: &GroundSpace, t: f64) -> GroundPoint {
        if t <= 0.0 {
            return self.start().clone();
        }
        if t >= 1.0 {
            return self.end().clone();
        }
        // Last segment whose left knot is <= t.
        let k = self.knots.partition_point(|&u| u <= t) - 1;
        let (t0, t1) = (self.knots[k], self.knots[k + 1]);
        let u = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        space.geodesic_point_unchecked(&self.breakpoints[k], &self.breakpoints[k + 1], u)
    }
}

/// A family of ground paths indexed by a complete relation; at each `t` it
/// evaluates to the set of leg positions.
#[derive(Clone, Debug, PartialEq)]
pub struct PathBundle {
    relation: Relation,
    legs: Vec<Leg>,
    cap: usize,
    declared_lipschitz: f64,
}

impl PathBundle {
    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `λ_space · max d(x_i, y_j)` over the relation's pairs.
    pub fn declared_lipschitz(&self) -> f64 {
        self.declared_lipschitz
    }

    pub fn source(&self) -> &FiniteSubset {
        self.relation.source()
    }

    pub fn target(&self) -> &FiniteSubset {
        self.relation.target()
    }
}

impl HausdorffPath for PathBundle {
    fn at(&self, space: &GroundSpace, t: f64) -> Result<FiniteSubset> {
        evaluate(space, self, t)
    }
}

/// Builds one constant-speed geodesic leg per relation pair.
pub fn synthesize_bundle(space: &GroundSpace, relation: &Relation, cap: usize) -> Result<PathBundle> {
    if !relation.is_complete() {
        return Err(Error::Precondition("bundle relation is not complete".into()));
    }
    let (x, y) = (relation.source(), relation.target());
    if cap < x.len().max(y.len()) {
        return Err(Error::Precondition(format!(
            "cap {cap} is below the endpoint cardinalities {} and {}",
            x.len(),
            y.len()
        )));
    }
    // Coincident endpoints give the constant path.
    let relation = if hausdorff_distance(space, x, y) <= POINT_TOLERANCE && x.len() == y.len() {
        Relation::identity(x)
    } else {
        relation.clone()
    };
    let legs = relation
        .pairs()
        .iter()
        .map(|&(i, j)| {
            Leg::geodesic(
                relation.source().points()[i].clone(),
                relation.target().points()[j].clone(),
            )
        })
        .collect();
    let declared_lipschitz = space.lambda() * relation.max_pair_distance(space);
    Ok(PathBundle {
        relation,
        legs,
        cap,
        declared_lipschitz,
    })
}

/// The canonical set `{γ_r(t)}` of leg positions at `t`.
pub fn evaluate(space: &GroundSpace, bundle: &PathBundle, t: f64) -> Result<FiniteSubset> {
    check_parameter(t)?;
    if t == 0.0 {
        return Ok(bundle.source().clone());
    }
    if t == 1.0 {
        return Ok(bundle.target().clone());
    }
    let pts = bundle.legs.iter().map(|leg| leg.eval(space, t)).collect();
    let set = FiniteSubset::from_valid(space, pts);
    if set.len() > bundle.cap {
        return Err(Error::CapViolation {
            t,
            count: set.len(),
            cap: bundle.cap,
        });
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::build_proximal_complete;

    fn r1() -> GroundSpace {
        GroundSpace::euclidean(1).unwrap()
    }

    fn set1(v: &[f64]) -> FiniteSubset {
        FiniteSubset::new(&r1(), v.iter().map(|&x| GroundPoint::coords([x]))).unwrap()
    }

    #[test]
    fn identity_bundle_is_constant() {
        let s = r1();
        let x = set1(&[0.0, 3.0]);
        let b = synthesize_bundle(&s, &Relation::identity(&x), 2).unwrap();
        assert_eq!(b.declared_lipschitz(), 0.0);
        assert_eq!(evaluate(&s, &b, 0.3).unwrap(), x);
    }

    #[test]
    fn straight_legs_interpolate() {
        let s = r1();
        let r = build_proximal_complete(&s, &set1(&[0.0, 10.0]), &set1(&[1.0, 9.0]));
        let b = synthesize_bundle(&s, &r, 2).unwrap();
        assert_eq!(b.declared_lipschitz(), 1.0);
        assert_eq!(evaluate(&s, &b, 0.0).unwrap(), set1(&[0.0, 10.0]));
        assert_eq!(evaluate(&s, &b, 0.5).unwrap(), set1(&[0.5, 9.5]));
        assert_eq!(evaluate(&s, &b, 1.0).unwrap(), set1(&[1.0, 9.0]));
    }

    #[test]
    fn merging_legs_drop_cardinality() {
        let s = r1();
        let r = Relation::new(set1(&[0.0, 2.0]), set1(&[1.0]), [(0, 0), (1, 0)]).unwrap();
        let b = synthesize_bundle(&s, &r, 2).unwrap();
        assert_eq!(evaluate(&s, &b, 1.0).unwrap(), set1(&[1.0]));
        assert_eq!(evaluate(&s, &b, 0.5).unwrap().len(), 2);
    }

    #[test]
    fn cap_violation_is_reported() {
        let s = r1();
        let x = set1(&[0.0, 2.0, 11.0]);
        let y = set1(&[1.0, 10.0, 12.0]);
        let r = build_proximal_complete(&s, &x, &y);
        let b = synthesize_bundle(&s, &r, 3).unwrap();
        assert!(matches!(
            evaluate(&s, &b, 0.5),
            Err(Error::CapViolation { count: 4, cap: 3, .. })
        ));
        let b = synthesize_bundle(&s, &r, 4).unwrap();
        assert_eq!(evaluate(&s, &b, 0.5).unwrap().len(), 4);
    }

    #[test]
    fn incomplete_relation_rejected() {
        let s = r1();
        let r = Relation::new(set1(&[0.0, 2.0]), set1(&[1.0]), [(0, 0)]).unwrap();
        assert!(matches!(synthesize_bundle(&s, &r, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn parameter_domain() {
        let s = r1();
        let x = set1(&[0.0]);
        let b = synthesize_bundle(&s, &Relation::identity(&x), 1).unwrap();
        assert!(matches!(evaluate(&s, &b, -0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn piecewise_leg_evaluation() {
        let s = r1();
        let leg = Leg::new(
            &s,
            vec![
                GroundPoint::coords([0.0]),
                GroundPoint::coords([4.0]),
                GroundPoint::coords([2.0]),
            ],
            vec![0.0, 0.5, 1.0],
        )
        .unwrap();
        assert_eq!(leg.eval(&s, 0.25), GroundPoint::coords([2.0]));
        assert_eq!(leg.eval(&s, 0.75), GroundPoint::coords([3.0]));
        assert!(Leg::new(&s, vec![GroundPoint::coords([0.0]); 2], vec![0.0, 0.0]).is_err());
    }
}
