//! Exact nearest-neighbour distances for large Euclidean point sets.

use crate::metric::{euclidean, GroundPoint};

pub(crate) struct KdTree<'a> {
    coords: Vec<&'a [f64]>,
    dim: usize,
}

impl<'a> KdTree<'a> {
    pub(crate) fn new(points: &'a [GroundPoint]) -> Self {
        let mut coords: Vec<&[f64]> = points
            .iter()
            .map(|p| p.as_coords().expect("euclidean points carry coordinates"))
            .collect();
        let dim = coords.first().map_or(1, |c| c.len());
        build(&mut coords, 0, dim);
        KdTree { coords, dim }
    }

    /// Smallest distance from `q` to a tree point, bit-identical to the
    /// minimum of `euclidean(q, p)` over all points.
    pub(crate) fn nearest_distance(&self, q: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        self.search(q, 0, self.coords.len(), 0, &mut best);
        best
    }

    fn search(&self, q: &[f64], lo: usize, hi: usize, depth: usize, best: &mut f64) {
        if lo >= hi {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let p = self.coords[mid];
        let d = euclidean(q, p);
        if d < *best {
            *best = d;
        }
        let axis = depth % self.dim;
        let diff = q[axis] - p[axis];
        let (near, far) = if diff < 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.search(q, near.0, near.1, depth + 1, best);
        // Margin keeps the pruning conservative under rounding.
        if diff.abs() <= *best * (1.0 + 1e-12) {
            self.search(q, far.0, far.1, depth + 1, best);
        }
    }
}

fn build(coords: &mut [&[f64]], depth: usize, dim: usize) {
    if coords.len() <= 1 {
        return;
    }
    let axis = depth % dim;
    let mid = coords.len() / 2;
    coords.select_nth_unstable_by(mid, |a, b| a[axis].total_cmp(&b[axis]));
    let (left, right) = coords.split_at_mut(mid);
    build(left, depth + 1, dim);
    build(&mut right[1..], depth + 1, dim);
}
