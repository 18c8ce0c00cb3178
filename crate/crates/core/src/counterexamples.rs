//! Instances showing that 2 is the best quasiconvexity constant for
//! `FS_n(X)`, `n >= 3`, and that sets of exactly two points need not be
//! joined by geodesics.
//!
//! A spaced pair `(x, y)` splits `x ∪ y` into far-apart mixed groups. Any
//! `z` within `r < d_H(x, y)` of both `x` and `y` needs two points for each
//! group of three and one for each group of two, which is more than `n`.
//! So every `z ∈ FS_n` has `max(d_H(x, z), d_H(z, y)) >= d_H(x, y)`, and a
//! `λ`-quasigeodesic midpoint forces `λ >= 2`.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hyperspace::{diameter, hausdorff_distance, in_closed_neighborhood, FiniteSubset};
use crate::metric::{GroundPoint, GroundSpace, POINT_TOLERANCE};

/// Gap between consecutive groups on the line, in units of `ε`.
pub const GROUP_GAP: f64 = 8.0;

/// Distance between the two group centres of the two-group variant, in
/// units of `ε`.
pub const TWO_GROUP_SEPARATION: f64 = 12.0;

/// Lattice error allowance of [`verify_spaced_pair`], in units of `δ`.
pub const GRID_CONSTANT: f64 = 5.0;

/// Largest `|x ∪ y|` the set-cover search accepts.
pub const MAX_UNIVERSE: usize = 16;

/// Largest lattice scanned by [`verify_spaced_pair`].
const MAX_LATTICE: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpacedPairLayout {
    /// Groups of two and three along a line.
    Line,
    /// Two stars `{x_1..x_{n-1}, y_n}` and `{y_1..y_{n-1}, x_n}` in the plane.
    TwoGroup,
}

/// One group of a spaced pair, as indices into the canonical `x` and `y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpacedGroup {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

impl SpacedGroup {
    pub fn len(&self) -> usize {
        self.x.len() + self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpacedPairInstance {
    #[serde(serialize_with = "serialize_space")]
    pub space: GroundSpace,
    pub layout: SpacedPairLayout,
    pub x: FiniteSubset,
    pub y: FiniteSubset,
    pub epsilon: f64,
    pub groups: Vec<SpacedGroup>,
    /// Number of three-point groups.
    pub s: usize,
    /// Number of groups.
    pub k: usize,
    pub n: usize,
}

fn serialize_space<S: Serializer>(space: &GroundSpace, s: S) -> std::result::Result<S::Ok, S::Error> {
    space.to_config().serialize(s)
}

impl SpacedPairInstance {
    fn group_points(&self, g: &SpacedGroup) -> Vec<GroundPoint> {
        g.x.iter()
            .map(|&i| self.x.points()[i].clone())
            .chain(g.y.iter().map(|&j| self.y.points()[j].clone()))
            .collect()
    }

    fn group_set(&self, g: &SpacedGroup) -> FiniteSubset {
        FiniteSubset::from_valid(&self.space, self.group_points(g))
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Parameter(format!("ε = {epsilon} must be positive")));
    }
    Ok(())
}

/// Builds `s` three-point groups and `k - s` two-point groups on the real
/// line, where `2n = s + 2k`. Three-point groups alternate `x y x` and
/// `y x y`; two-point groups are `x y`.
pub fn generate_spaced_pair(n: usize, s: usize, epsilon: f64) -> Result<SpacedPairInstance> {
    check_epsilon(epsilon)?;
    if n < 3 {
        return Err(Error::Parameter(format!("n = {n} must be at least 3")));
    }
    if s < 2 || !s.is_multiple_of(2) {
        return Err(Error::Parameter(format!("s = {s} must be even and at least 2")));
    }
    if s > 2 * n || !(2 * n - s).is_multiple_of(2) || (2 * n - s) / 2 < s {
        return Err(Error::Parameter(format!(
            "no layout with s = {s} three-point groups for n = {n}"
        )));
    }
    let k = (2 * n - s) / 2;

    // Positions in units of ε, tagged x (true) or y (false), per group.
    let mut unit_groups: Vec<Vec<(i64, bool)>> = Vec::with_capacity(k);
    let mut cursor: i64 = 0;
    for g in 0..k {
        let members: Vec<bool> = if g < s {
            let lone_is_y = g % 2 == 0;
            vec![lone_is_y, !lone_is_y, lone_is_y]
        } else {
            vec![true, false]
        };
        let group: Vec<(i64, bool)> = members
            .into_iter()
            .enumerate()
            .map(|(o, is_x)| (cursor + o as i64, is_x))
            .collect();
        cursor = group.last().expect("nonempty").0 + GROUP_GAP as i64;
        unit_groups.push(group);
    }

    let space = GroundSpace::euclidean(1)?;
    let place = |u: i64| GroundPoint::coords([u as f64 * epsilon]);
    let pick = |want_x: bool| -> Vec<GroundPoint> {
        unit_groups
            .iter()
            .flatten()
            .filter(|(_, is_x)| *is_x == want_x)
            .map(|&(u, _)| place(u))
            .collect()
    };
    let x = FiniteSubset::new(&space, pick(true))?;
    let y = FiniteSubset::new(&space, pick(false))?;
    let groups = unit_groups
        .iter()
        .map(|g| index_group(&space, &x, &y, g.iter().map(|&(u, is_x)| (place(u), is_x))))
        .collect();
    Ok(SpacedPairInstance {
        space,
        layout: SpacedPairLayout::Line,
        x,
        y,
        epsilon,
        groups,
        s,
        k,
        n,
    })
}

/// Builds the two-star layout in the plane: `x_1..x_{n-1}` evenly spaced on
/// the circle of radius `ε` about `y_n`, and `y_1..y_{n-1}` likewise about
/// `x_n`. The only proximal complete relation has `2n - 2` pairs.
pub fn generate_two_group_pair(n: usize, epsilon: f64) -> Result<SpacedPairInstance> {
    check_epsilon(epsilon)?;
    if n < 3 {
        return Err(Error::Parameter(format!("n = {n} must be at least 3")));
    }
    let space = GroundSpace::euclidean(2)?;
    let leaves = n - 1;
    let ring = |cx: f64, flip: f64| -> Vec<GroundPoint> {
        (0..leaves)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / leaves as f64;
                GroundPoint::coords([cx + flip * epsilon * a.cos(), epsilon * a.sin()])
            })
            .collect()
    };
    let far = TWO_GROUP_SEPARATION * epsilon;
    let x_ring = ring(0.0, 1.0);
    let y_ring = ring(far, -1.0);
    let y_hub = GroundPoint::coords([0.0, 0.0]);
    let x_hub = GroundPoint::coords([far, 0.0]);

    let x = FiniteSubset::new(&space, x_ring.iter().cloned().chain([x_hub.clone()]))?;
    let y = FiniteSubset::new(&space, y_ring.iter().cloned().chain([y_hub.clone()]))?;
    let a = index_group(
        &space,
        &x,
        &y,
        x_ring.into_iter().map(|p| (p, true)).chain([(y_hub, false)]),
    );
    let b = index_group(
        &space,
        &x,
        &y,
        y_ring.into_iter().map(|p| (p, false)).chain([(x_hub, true)]),
    );
    Ok(SpacedPairInstance {
        space,
        layout: SpacedPairLayout::TwoGroup,
        x,
        y,
        epsilon,
        groups: vec![a, b],
        s: 0,
        k: 2,
        n,
    })
}

fn index_group(
    space: &GroundSpace,
    x: &FiniteSubset,
    y: &FiniteSubset,
    members: impl Iterator<Item = (GroundPoint, bool)>,
) -> SpacedGroup {
    let mut g = SpacedGroup { x: vec![], y: vec![] };
    for (p, is_x) in members {
        if is_x {
            g.x.push(x.index_of(space, &p).expect("generated point"));
        } else {
            g.y.push(y.index_of(space, &p).expect("generated point"));
        }
    }
    g.x.sort_unstable();
    g.y.sort_unstable();
    g
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= POINT_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// Checks the structural properties of a generated instance. Returns the
/// first violated property as a precondition error.
pub fn verify_invariants(inst: &SpacedPairInstance) -> Result<()> {
    let space = &inst.space;
    let eps = inst.epsilon;
    let fail = |msg: String| Err(Error::Precondition(msg));

    if inst.x.len() != inst.n || inst.y.len() != inst.n {
        return fail(format!(
            "|x| = {}, |y| = {}, expected {}",
            inst.x.len(),
            inst.y.len(),
            inst.n
        ));
    }
    let covered: usize = inst.groups.iter().map(SpacedGroup::len).sum();
    if covered != 2 * inst.n {
        return fail(format!("groups cover {covered} points of {}", 2 * inst.n));
    }
    if inst.layout == SpacedPairLayout::Line && 2 * inst.n != inst.s + 2 * inst.k {
        return fail(format!("2n = {} but s + 2k = {}", 2 * inst.n, inst.s + 2 * inst.k));
    }
    for (gi, g) in inst.groups.iter().enumerate() {
        if g.x.is_empty() || g.y.is_empty() {
            return fail(format!("group {gi} is not mixed"));
        }
        let set = inst.group_set(g);
        let diam = diameter(space, &set);
        match inst.layout {
            SpacedPairLayout::Line => {
                let want = if g.len() == 3 { 2.0 * eps } else { eps };
                if !close(diam, want) {
                    return fail(format!("group {gi} has diameter {diam}, expected {want}"));
                }
            }
            SpacedPairLayout::TwoGroup => {
                if diam > 2.0 * eps * (1.0 + POINT_TOLERANCE) {
                    return fail(format!("group {gi} has diameter {diam} above 2ε"));
                }
            }
        }
        // The minority point is at distance ε from every partner.
        let (lone, partners) = if g.x.len() == 1 {
            (
                inst.x.points()[g.x[0]].clone(),
                g.y.iter().map(|&j| inst.y.points()[j].clone()).collect::<Vec<_>>(),
            )
        } else if g.y.len() == 1 {
            (
                inst.y.points()[g.y[0]].clone(),
                g.x.iter().map(|&i| inst.x.points()[i].clone()).collect(),
            )
        } else {
            return fail(format!("group {gi} has no lone point"));
        };
        for q in &partners {
            let d = space.distance(&lone, q);
            if !close(d, eps) {
                return fail(format!("group {gi}: lone point at distance {d} from a partner"));
            }
        }
    }
    for i in 0..inst.groups.len() {
        for j in i + 1..inst.groups.len() {
            let (a, b) = (inst.group_points(&inst.groups[i]), inst.group_points(&inst.groups[j]));
            let gap = a
                .iter()
                .flat_map(|p| b.iter().map(move |q| (p, q)))
                .map(|(p, q)| space.distance(p, q))
                .fold(f64::INFINITY, f64::min);
            if !(gap > 2.0 * eps) {
                return fail(format!("groups {i} and {j} are only {gap} apart"));
            }
        }
    }
    let h = hausdorff_distance(space, &inst.x, &inst.y);
    if !close(h, eps) {
        return fail(format!("d_H(x, y) = {h}, expected ε = {eps}"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpacedPairReport {
    pub n: usize,
    pub epsilon: f64,
    pub hausdorff: f64,
    pub delta: f64,
    pub grid_constant: f64,
    pub lattice_points: usize,
    /// Least `max(d_H(x, z), d_H(z, y))` over lattice sets `z`, `|z| <= n`.
    pub min_max: f64,
    /// A lattice set attaining `min_max`.
    pub best_midpoint: FiniteSubset,
    pub threshold: f64,
    /// `2 · min_max / d_H(x, y)`: the least `λ` a `λ`-quasigeodesic from `x`
    /// to `y` in `FS_n` can have.
    pub implied_lambda_lower_bound: f64,
    pub witness_radius: f64,
    /// Fewest lattice points within `witness_radius` of both `x` and `y`
    /// covering `x ∪ y` at that radius; `None` when no such set exists.
    pub witness_min_cardinality: Option<usize>,
    /// Lower bound on that count from the groups alone (two per three-point
    /// group, one per two-point group).
    pub group_count_bound: usize,
    pub witness_passed: bool,
    pub passed: bool,
}

/// Exact min-max midpoint search over sets of lattice points (spacing
/// `delta`, origin at zero) near the groups, together with the counting
/// witness at radius `d_H - delta`.
pub fn verify_spaced_pair(inst: &SpacedPairInstance, delta: f64) -> Result<SpacedPairReport> {
    let eps = inst.epsilon;
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Parameter(format!("grid spacing {delta} must be positive")));
    }
    if delta > eps / 4.0 {
        return Err(Error::Parameter(format!(
            "grid spacing {delta} is coarser than ε/4 = {}",
            eps / 4.0
        )));
    }
    let space = &inst.space;
    let universe: Vec<GroundPoint> = inst.x.points().iter().chain(inst.y.points()).cloned().collect();
    if universe.len() > MAX_UNIVERSE {
        return Err(Error::Capacity {
            what: "points in x ∪ y",
            actual: universe.len(),
            limit: MAX_UNIVERSE,
        });
    }
    let lattice = group_lattice(inst, delta)?;
    let full: u32 = (1u32 << universe.len()) - 1;
    let x_bits: u32 = (1u32 << inst.x.len()) - 1;
    let y_bits = full & !x_bits;

    // Distance rows: lattice point -> every member of x ∪ y.
    let rows: Vec<Vec<f64>> = lattice
        .par_iter()
        .map(|p| universe.iter().map(|q| space.distance(p, q)).collect())
        .collect();
    let mut radii: Vec<f64> = rows.iter().flatten().copied().collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();

    let masks_at = |r: f64| -> Vec<(u32, usize)> {
        let mut masks: Vec<(u32, usize)> = rows
            .par_iter()
            .enumerate()
            .filter_map(|(k, row)| {
                let m = row
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d <= r)
                    .fold(0u32, |m, (b, _)| m | (1 << b));
                // A usable point lies within r of both x and y.
                (m & x_bits != 0 && m & y_bits != 0).then_some((m, k))
            })
            .collect();
        masks.sort_unstable();
        masks.dedup_by_key(|e| e.0);
        masks
    };

    // Least radius at which n lattice points suffice; feasible at the top
    // radius since a single point then covers everything.
    let (mut lo, mut hi) = (0usize, radii.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if min_cover(&masks_at(radii[mid]), full, inst.n).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let min_max = radii[lo];
    let masks = masks_at(min_max);
    let chosen = cover_witness(&masks, full, inst.n).expect("feasible radius");
    let best_midpoint = FiniteSubset::from_valid(space, chosen.iter().map(|&k| lattice[k].clone()).collect());

    let hausdorff = hausdorff_distance(space, &inst.x, &inst.y);
    let threshold = hausdorff - GRID_CONSTANT * delta;
    let witness_radius = hausdorff - delta;
    let witness_min_cardinality = min_cover(&masks_at(witness_radius), full, universe.len());
    let group_count_bound = inst.groups.iter().map(|g| if g.len() >= 3 { 2 } else { 1 }).sum();
    let witness_passed = witness_min_cardinality.is_none_or(|c| c > inst.n);
    Ok(SpacedPairReport {
        n: inst.n,
        epsilon: eps,
        hausdorff,
        delta,
        grid_constant: GRID_CONSTANT,
        lattice_points: lattice.len(),
        min_max,
        best_midpoint,
        threshold,
        implied_lambda_lower_bound: 2.0 * min_max / hausdorff,
        witness_radius,
        witness_min_cardinality,
        group_count_bound,
        witness_passed,
        passed: min_max >= threshold && witness_passed,
    })
}

/// Lattice points in the `ε`-padded bounding box of each group.
fn group_lattice(inst: &SpacedPairInstance, delta: f64) -> Result<Vec<GroundPoint>> {
    let dim = inst
        .space
        .coordinate_dim()
        .filter(|_| inst.space.is_euclidean())
        .ok_or_else(|| Error::Unsupported("spaced-pair verification needs a Euclidean space".into()))?;
    let mut out = Vec::new();
    for g in &inst.groups {
        let pts = inst.group_points(g);
        let mut ranges = Vec::with_capacity(dim);
        let mut count = 1usize;
        for c in 0..dim {
            let lo = pts.iter().map(|p| p.raw()[c]).fold(f64::INFINITY, f64::min) - inst.epsilon;
            let hi = pts.iter().map(|p| p.raw()[c]).fold(f64::NEG_INFINITY, f64::max) + inst.epsilon;
            let (a, b) = ((lo / delta).ceil() as i64, (hi / delta).floor() as i64);
            count = count.saturating_mul((b - a + 1).max(0) as usize);
            ranges.push((a, b));
        }
        if out.len().saturating_add(count) > MAX_LATTICE {
            return Err(Error::Capacity {
                what: "lattice points",
                actual: out.len().saturating_add(count),
                limit: MAX_LATTICE,
            });
        }
        let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        'scan: loop {
            out.push(GroundPoint::Coords(
                idx.iter().map(|&k| k as f64 * delta + 0.0).collect(),
            ));
            let mut axis = dim;
            loop {
                if axis == 0 {
                    break 'scan;
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
    Ok(out)
}

/// Breadth-first search over covered subsets: parent links of the first
/// level at which `full` is reached, or `None` within `limit` sets.
fn cover_search(masks: &[(u32, usize)], full: u32, limit: usize) -> Option<Vec<Option<(u32, usize)>>> {
    let mut parent: Vec<Option<(u32, usize)>> = vec![None; full as usize + 1];
    let mut seen = vec![false; full as usize + 1];
    seen[0] = true;
    if full == 0 {
        return Some(parent);
    }
    let mut frontier = vec![0u32];
    for _ in 0..limit {
        let mut next = Vec::new();
        for &state in &frontier {
            for &(m, k) in masks {
                let s = state | m;
                if !seen[s as usize] {
                    seen[s as usize] = true;
                    parent[s as usize] = Some((state, k));
                    if s == full {
                        return Some(parent);
                    }
                    next.push(s);
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}

fn min_cover(masks: &[(u32, usize)], full: u32, limit: usize) -> Option<usize> {
    cover_witness(masks, full, limit).map(|c| c.len())
}

fn cover_witness(masks: &[(u32, usize)], full: u32, limit: usize) -> Option<Vec<usize>> {
    let parent = cover_search(masks, full, limit)?;
    let mut chosen = Vec::new();
    let mut s = full;
    while s != 0 {
        let (prev, k) = parent[s as usize].expect("reached state");
        chosen.push(k);
        s = prev;
    }
    Some(chosen)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaxicabObstructionReport {
    pub a: FiniteSubset,
    pub b: FiniteSubset,
    pub hausdorff: f64,
    pub radius: f64,
    pub delta: f64,
    /// Lattice points of the cross within `radius` of both `a` and `b`.
    pub feasible: Vec<GroundPoint>,
    /// Largest distance from the origin among feasible points.
    pub feasible_extent: f64,
    /// Every feasible point lies within `delta` of the origin.
    pub region_is_origin: bool,
    /// A midpoint would have to be a single point, so no geodesic stays
    /// among two-point sets.
    pub obstruction_holds: bool,
}

pub const DEFAULT_OBSTRUCTION_DELTA: f64 = 0.01;

/// Scans both axes of the taxicab cross for points within `radius` of
/// `{(1,0), (0,1)}` and of `{(-1,0), (0,-1)}`. At `radius = 1 = d_H/2` only
/// the origin survives.
pub fn taxicab_fs2_obstruction(delta: f64, radius: f64) -> Result<TaxicabObstructionReport> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Parameter(format!("grid spacing {delta} must be positive")));
    }
    let space = GroundSpace::TaxicabCross;
    let a = FiniteSubset::from_raw(&space, &[vec![1.0, 0.0], vec![0.0, 1.0]])?;
    let b = FiniteSubset::from_raw(&space, &[vec![-1.0, 0.0], vec![0.0, -1.0]])?;
    let hausdorff = hausdorff_distance(&space, &a, &b);
    let reach = 1.0 + radius.max(0.0);
    let k_max = (reach / delta).floor() as i64;
    if (2 * k_max + 1) as usize > MAX_LATTICE {
        return Err(Error::Capacity {
            what: "lattice points",
            actual: (2 * k_max + 1) as usize,
            limit: MAX_LATTICE,
        });
    }
    let mut feasible = Vec::new();
    for k in -k_max..=k_max {
        let v = k as f64 * delta + 0.0;
        let on_axes = if k == 0 {
            vec![GroundPoint::coords([0.0, 0.0])]
        } else {
            vec![GroundPoint::coords([v, 0.0]), GroundPoint::coords([0.0, v])]
        };
        for p in on_axes {
            if in_closed_neighborhood(&space, &p, &a, radius)? && in_closed_neighborhood(&space, &p, &b, radius)? {
                feasible.push(p);
            }
        }
    }
    feasible.sort_by(|p, q| p.key_cmp(q));
    let origin = GroundPoint::coords([0.0, 0.0]);
    let feasible_extent = feasible.iter().map(|p| space.distance(p, &origin)).fold(0.0, f64::max);
    let region_is_origin = !feasible.is_empty() && feasible_extent <= delta;
    Ok(TaxicabObstructionReport {
        a,
        b,
        hausdorff,
        radius,
        delta,
        feasible,
        feasible_extent,
        region_is_origin,
        obstruction_holds: region_is_origin && close(radius, hausdorff / 2.0),
    })
}

/// The obstruction at the geodesic midpoint radius `d_H / 2 = 1`.
pub fn default_taxicab_fs2_obstruction() -> TaxicabObstructionReport {
    taxicab_fs2_obstruction(DEFAULT_OBSTRUCTION_DELTA, 1.0).expect("fixed parameters are valid")
}
