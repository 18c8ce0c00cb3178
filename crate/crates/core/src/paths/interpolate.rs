//! Discretized canonical interpolation `γ(t) = A_{tL} ∩ B_{(1-t)L}` with
//! `L = λ d_H(A, B)`, where `S_r` is the closed `r`-neighbourhood of `S`.
//!
//! The intersection is represented by the points of a fixed lattice of
//! spacing `ε` (origin at zero) that satisfy both neighbourhood conditions
//! up to the lattice covering radius. In Euclidean spaces the lattice is
//! axis-aligned; on the taxicab cross it runs along both axes.

use super::SampledHausdorffPath;
use crate::error::{Error, Result};
use crate::hyperspace::{dist_point_set, hausdorff_distance, FiniteSubset};
use crate::metric::{GroundPoint, GroundSpace, POINT_TOLERANCE};

/// Largest lattice scan the interpolation will perform.
const LATTICE_LIMIT: usize = 50_000_000;

pub fn canonical_interpolation(
    space: &GroundSpace,
    a: &FiniteSubset,
    b: &FiniteSubset,
    lambda: f64,
    t: f64,
    net_resolution: f64,
) -> Result<FiniteSubset> {
    if !(lambda > 1.0) {
        return Err(Error::Domain(format!("interpolation needs λ > 1, got {lambda}")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("parameter {t} outside [0, 1]")));
    }
    if !(net_resolution > 0.0) || !net_resolution.is_finite() {
        return Err(Error::Parameter(format!(
            "net resolution {net_resolution} must be positive"
        )));
    }
    let big_l = lambda * hausdorff_distance(space, a, b);
    let ra = t * big_l;
    let rb = (1.0 - t) * big_l;
    match space.base() {
        GroundSpace::Euclidean { dim } => euclidean_net(space, a, b, ra, rb, net_resolution, *dim),
        GroundSpace::TaxicabCross => cross_net(space, a, b, ra, rb, net_resolution),
        _ => Err(Error::Unsupported(
            "canonical interpolation needs a Euclidean or taxicab-cross space".into(),
        )),
    }
}

/// Canonical interpolation sampled at `samples + 1` equally spaced parameters.
pub fn canonical_interpolation_path(
    space: &GroundSpace,
    a: &FiniteSubset,
    b: &FiniteSubset,
    lambda: f64,
    net_resolution: f64,
    samples: usize,
) -> Result<SampledHausdorffPath> {
    if samples == 0 {
        return Err(Error::Parameter("need at least one interval".into()));
    }
    let out = (0..=samples)
        .map(|k| {
            let t = k as f64 / samples as f64;
            canonical_interpolation(space, a, b, lambda, t, net_resolution).map(|s| (t, s))
        })
        .collect::<Result<Vec<_>>>()?;
    SampledHausdorffPath::new(out)
}

fn bounding_box(a: &FiniteSubset, dim: usize, pad: f64) -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in a.points() {
        let c = p.as_coords().expect("coords");
        for k in 0..dim {
            lo[k] = lo[k].min(c[k] - pad);
            hi[k] = hi[k].max(c[k] + pad);
        }
    }
    (lo, hi)
}

fn euclidean_net(
    space: &GroundSpace,
    a: &FiniteSubset,
    b: &FiniteSubset,
    ra: f64,
    rb: f64,
    eps: f64,
    dim: usize,
) -> Result<FiniteSubset> {
    // Covering radius of the cubic lattice is eps * sqrt(d) / 2.
    let slack = eps * (dim as f64).sqrt().max(2.0) / 2.0;
    let (alo, ahi) = bounding_box(a, dim, ra + slack);
    let (blo, bhi) = bounding_box(b, dim, rb + slack);
    let mut ranges = Vec::with_capacity(dim);
    let mut total: usize = 1;
    for k in 0..dim {
        let lo = (alo[k].max(blo[k]) / eps).ceil() as i64;
        let hi = (ahi[k].min(bhi[k]) / eps).floor() as i64;
        if hi < lo {
            return Err(Error::Domain("neighbourhood intersection is empty".into()));
        }
        let count = (hi - lo + 1) as usize;
        total = total.saturating_mul(count);
        ranges.push((lo, hi));
    }
    if total > LATTICE_LIMIT {
        return Err(Error::Capacity {
            what: "lattice points",
            actual: total,
            limit: LATTICE_LIMIT,
        });
    }

    // Odometer over all but the last axis, first axis outermost. Along the
    // last axis only the lattice points inside the analytic feasible
    // intervals (padded by one step) are tested, so output stays in
    // lexicographic order.
    let last = dim - 1;
    let mut idx: Vec<i64> = ranges[..last].iter().map(|r| r.0).collect();
    let mut kept = Vec::new();
    loop {
        let prefix: Vec<f64> = idx.iter().map(|&k| k as f64 * eps + 0.0).collect();
        let ia = last_axis_intervals(a, &prefix, ra + slack);
        let ib = last_axis_intervals(b, &prefix, rb + slack);
        let mut spans: Vec<(i64, i64)> = Vec::new();
        for &(l1, h1) in &ia {
            for &(l2, h2) in &ib {
                let (lo, hi) = (l1.max(l2), h1.min(h2));
                if lo <= hi {
                    let klo = ((lo / eps).floor() as i64 - 1).max(ranges[last].0);
                    let khi = ((hi / eps).ceil() as i64 + 1).min(ranges[last].1);
                    if klo <= khi {
                        spans.push((klo, khi));
                    }
                }
            }
        }
        spans.sort_unstable();
        let mut next_k = i64::MIN;
        for (klo, khi) in spans {
            for k in klo.max(next_k)..=khi {
                let mut c = prefix.clone();
                c.push(k as f64 * eps + 0.0);
                let p = GroundPoint::Coords(c);
                if dist_point_set(space, &p, a) <= ra + slack && dist_point_set(space, &p, b) <= rb + slack {
                    kept.push(p);
                }
            }
            next_k = next_k.max(khi + 1);
        }
        let mut axis = last;
        loop {
            if axis == 0 {
                return finish(space, kept, eps);
            }
            axis -= 1;
            if idx[axis] < ranges[axis].1 {
                idx[axis] += 1;
                break;
            }
            idx[axis] = ranges[axis].0;
        }
    }
}

/// For each point of `set`, the interval of last coordinates `v` such that
/// `(prefix, v)` lies within `r` of it, slightly widened against rounding.
fn last_axis_intervals(set: &FiniteSubset, prefix: &[f64], r: f64) -> Vec<(f64, f64)> {
    let r2 = r * r * (1.0 + 1e-9);
    set.points()
        .iter()
        .filter_map(|p| {
            let c = p.as_coords().expect("coords");
            let partial: f64 = prefix.iter().zip(c).map(|(u, v)| (u - v) * (u - v)).sum();
            (partial <= r2).then(|| {
                let h = (r2 - partial).sqrt();
                let v = c[prefix.len()];
                (v - h, v + h)
            })
        })
        .collect()
}

fn cross_net(
    space: &GroundSpace,
    a: &FiniteSubset,
    b: &FiniteSubset,
    ra: f64,
    rb: f64,
    eps: f64,
) -> Result<FiniteSubset> {
    let slack = eps / 2.0;
    let reach = a
        .points()
        .iter()
        .map(|p| {
            let c = p.as_coords().expect("coords");
            c[0].abs() + c[1].abs()
        })
        .fold(0.0, f64::max)
        + ra
        + slack;
    let k_max = (reach / eps).floor() as i64;
    if (2 * k_max + 1) as usize > LATTICE_LIMIT {
        return Err(Error::Capacity {
            what: "lattice points",
            actual: (2 * k_max + 1) as usize,
            limit: LATTICE_LIMIT,
        });
    }
    let mut pts = Vec::new();
    for k in -k_max..=k_max {
        let v = k as f64 * eps + 0.0;
        pts.push(GroundPoint::coords([v, 0.0]));
        if k != 0 {
            pts.push(GroundPoint::coords([0.0, v]));
        }
    }
    let kept: Vec<GroundPoint> = pts
        .into_iter()
        .filter(|p| dist_point_set(space, p, a) <= ra + slack && dist_point_set(space, p, b) <= rb + slack)
        .collect();
    finish(space, kept, eps)
}

fn finish(space: &GroundSpace, kept: Vec<GroundPoint>, eps: f64) -> Result<FiniteSubset> {
    if kept.is_empty() {
        return Err(Error::Domain(
            "no lattice point in the neighbourhood intersection".into(),
        ));
    }
    // Distinct lattice points are at least eps apart.
    if eps > 2.0 * POINT_TOLERANCE && kept.windows(2).all(|w| w[0].key_cmp(&w[1]).is_lt()) {
        return Ok(FiniteSubset::from_sorted_separated(kept));
    }
    Ok(FiniteSubset::from_valid(space, kept))
}
