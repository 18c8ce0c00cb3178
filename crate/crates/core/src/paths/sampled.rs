use super::{check_parameter, HausdorffPath};
use crate::error::{Error, Result};
use crate::hyperspace::{hausdorff_distance, FiniteSubset};
use crate::metric::GroundSpace;

/// A Hausdorff path known only at finitely many parameters, including 0 and 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledHausdorffPath {
    samples: Vec<(f64, FiniteSubset)>,
}

impl SampledHausdorffPath {
    pub fn new(samples: Vec<(f64, FiniteSubset)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Parameter("a sampled path needs at least two samples".into()));
        }
        if samples[0].0 != 0.0 || samples.last().expect("nonempty").0 != 1.0 {
            return Err(Error::Parameter("sample knots must start at 0 and end at 1".into()));
        }
        if samples.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::Parameter("sample knots must strictly increase".into()));
        }
        Ok(SampledHausdorffPath { samples })
    }

    pub fn samples(&self) -> &[(f64, FiniteSubset)] {
        &self.samples
    }

    pub fn knots(&self) -> Vec<f64> {
        self.samples.iter().map(|(t, _)| *t).collect()
    }

    pub fn source(&self) -> &FiniteSubset {
        &self.samples[0].1
    }

    pub fn target(&self) -> &FiniteSubset {
        &self.samples.last().expect("nonempty").1
    }

    /// Hausdorff distances between consecutive samples.
    pub fn chords(&self, space: &GroundSpace) -> Vec<f64> {
        self.samples
            .windows(2)
            .map(|w| hausdorff_distance(space, &w[0].1, &w[1].1))
            .collect()
    }
}

/// Only the sample knots can be evaluated.
impl HausdorffPath for SampledHausdorffPath {
    fn at(&self, _space: &GroundSpace, t: f64) -> Result<FiniteSubset> {
        check_parameter(t)?;
        self.samples
            .binary_search_by(|(u, _)| u.total_cmp(&t))
            .map(|k| self.samples[k].1.clone())
            .map_err(|_| Error::Domain(format!("{t} is not a sample knot")))
    }

    fn partition(&self, _depth: u32) -> Result<Vec<f64>> {
        Ok(self.knots())
    }
}

/// Evaluates `path` on its partition of the given depth.
pub fn sample_path(space: &GroundSpace, path: &dyn HausdorffPath, depth: u32) -> Result<SampledHausdorffPath> {
    let samples = path
        .partition(depth)?
        .into_iter()
        .map(|t| path.at(space, t).map(|s| (t, s)))
        .collect::<Result<Vec<_>>>()?;
    SampledHausdorffPath::new(samples)
}

/// Reassigns each sample the fraction of cumulative chord length reached at
/// it, so chord length per unit parameter is the same on every interval.
/// Samples reached by a zero-length chord collapse onto their predecessor.
/// Zero-length paths come back unchanged.
pub fn constant_speed_reparametrize(space: &GroundSpace, path: &SampledHausdorffPath) -> SampledHausdorffPath {
    let chords = path.chords(space);
    let total: f64 = chords.iter().sum();
    if total <= 0.0 {
        return path.clone();
    }
    let mut out: Vec<(f64, FiniteSubset)> = vec![(0.0, path.samples[0].1.clone())];
    let mut travelled = 0.0;
    for (k, chord) in chords.iter().enumerate() {
        travelled += chord;
        let u = (travelled / total).min(1.0);
        if u > out.last().expect("nonempty").0 {
            out.push((u, path.samples[k + 1].1.clone()));
        }
    }
    let last = out.last_mut().expect("nonempty");
    last.0 = 1.0;
    last.1 = path.target().clone();
    SampledHausdorffPath { samples: out }
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

    fn speeds(space: &GroundSpace, p: &SampledHausdorffPath) -> Vec<f64> {
        let knots = p.knots();
        p.chords(space)
            .iter()
            .zip(knots.windows(2))
            .map(|(c, w)| c / (w[1] - w[0]))
            .collect()
    }

    #[test]
    fn knots_must_cover_unit_interval() {
        assert!(SampledHausdorffPath::new(vec![(0.0, set1(&[0.0]))]).is_err());
        assert!(SampledHausdorffPath::new(vec![(0.0, set1(&[0.0])), (0.5, set1(&[1.0]))]).is_err());
        assert!(SampledHausdorffPath::new(vec![
            (0.0, set1(&[0.0])),
            (0.5, set1(&[1.0])),
            (0.5, set1(&[1.0])),
            (1.0, set1(&[1.0]))
        ])
        .is_err());
    }

    #[test]
    fn only_knots_evaluate() {
        let s = r1();
        let p = SampledHausdorffPath::new(vec![(0.0, set1(&[0.0])), (1.0, set1(&[1.0]))]).unwrap();
        assert_eq!(p.at(&s, 1.0).unwrap(), set1(&[1.0]));
        assert!(matches!(p.at(&s, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn uniform_path_is_a_fixpoint() {
        let s = r1();
        let samples = (0..=8).map(|k| (k as f64 / 8.0, set1(&[k as f64 / 8.0]))).collect();
        let p = SampledHausdorffPath::new(samples).unwrap();
        let q = constant_speed_reparametrize(&s, &p);
        for ((t, a), (u, b)) in p.samples().iter().zip(q.samples()) {
            assert!((t - u).abs() < 1e-12);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn quadratic_spacing_becomes_uniform() {
        // γ(t) = {t²} on uniform knots: the arc-length fraction at t is t².
        let s = r1();
        let n = 32;
        let samples = (0..=n)
            .map(|k| {
                let t = k as f64 / n as f64;
                (t, set1(&[t * t]))
            })
            .collect();
        let p = SampledHausdorffPath::new(samples).unwrap();
        let q = constant_speed_reparametrize(&s, &p);
        for (k, (u, _)) in q.samples().iter().enumerate() {
            let t = k as f64 / n as f64;
            assert!((u - t * t).abs() < 1e-12);
        }
        let v = speeds(&s, &q);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        assert!(v.iter().all(|x| ((x - mean) / mean).abs() < 0.01));
        assert_eq!(q.source(), p.source());
        assert_eq!(q.target(), p.target());
    }

    #[test]
    fn zero_length_path_is_unchanged() {
        let s = r1();
        let p = SampledHausdorffPath::new(vec![(0.0, set1(&[2.0])), (1.0, set1(&[2.0]))]).unwrap();
        assert_eq!(constant_speed_reparametrize(&s, &p), p);
    }

    #[test]
    fn stalls_collapse() {
        let s = r1();
        let p = SampledHausdorffPath::new(vec![
            (0.0, set1(&[0.0])),
            (0.25, set1(&[1.0])),
            (0.5, set1(&[1.0])),
            (1.0, set1(&[2.0])),
        ])
        .unwrap();
        let q = constant_speed_reparametrize(&s, &p);
        assert_eq!(q.knots(), vec![0.0, 0.5, 1.0]);
    }
}
