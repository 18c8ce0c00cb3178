//! Independent oracles and seeded instance generators shared by the
//! integration tests.
#![allow(dead_code)]

use hyperpath::metric::{GroundPoint, GroundSpace};
use hyperpath::FiniteSubset;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Ground distance from first principles.
pub struct Oracle {
    kind: Kind,
}

enum Kind {
    Euclid,
    Taxicab,
    Graph {
        edges: Vec<(usize, usize, f64)>,
        dist: Vec<Vec<f64>>,
    },
}

impl Oracle {
    pub fn new(space: &GroundSpace) -> Oracle {
        let kind = match space.base() {
            GroundSpace::Euclidean { .. } => Kind::Euclid,
            GroundSpace::TaxicabCross => Kind::Taxicab,
            GroundSpace::Graph(g) => {
                let edges: Vec<_> = g.edges().iter().map(|e| (e.from, e.to, e.weight)).collect();
                let dist = (0..g.vertex_count())
                    .map(|s| dijkstra(g.vertex_count(), &edges, s))
                    .collect();
                Kind::Graph { edges, dist }
            }
            GroundSpace::Scaled { .. } => unreachable!("base is never scaled"),
        };
        Oracle { kind }
    }

    pub fn distance(&self, p: &GroundPoint, q: &GroundPoint) -> f64 {
        match (&self.kind, p, q) {
            (Kind::Euclid, GroundPoint::Coords(a), GroundPoint::Coords(b)) => {
                if a.len() == 1 {
                    (a[0] - b[0]).abs()
                } else {
                    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
                }
            }
            (Kind::Taxicab, GroundPoint::Coords(a), GroundPoint::Coords(b)) => {
                (a[0] - b[0]).abs() + (a[1] - b[1]).abs()
            }
            (
                Kind::Graph { edges, dist },
                GroundPoint::OnEdge { edge: e1, offset: o1 },
                GroundPoint::OnEdge { edge: e2, offset: o2 },
            ) => {
                let (u1, v1, w1) = edges[*e1];
                let (u2, v2, w2) = edges[*e2];
                let mut best = f64::INFINITY;
                if e1 == e2 {
                    best = (o1 - o2).abs();
                }
                for (a, ca) in [(u1, *o1), (v1, w1 - o1)] {
                    for (b, cb) in [(u2, *o2), (v2, w2 - o2)] {
                        best = best.min(ca + dist[a][b] + cb);
                    }
                }
                best
            }
            _ => panic!("point kind does not match oracle"),
        }
    }

    /// `max(max_a min_b d, max_b min_a d)` by scanning every pair.
    pub fn hausdorff(&self, a: &FiniteSubset, b: &FiniteSubset) -> f64 {
        let directed = |s: &FiniteSubset, t: &FiniteSubset| {
            let mut worst: f64 = 0.0;
            for p in s.points() {
                let mut near = f64::INFINITY;
                for q in t.points() {
                    near = near.min(self.distance(p, q));
                }
                worst = worst.max(near);
            }
            worst
        };
        directed(a, b).max(directed(b, a))
    }
}

fn dijkstra(n: usize, edges: &[(usize, usize, f64)], s: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[s] = 0.0;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !done[v])
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]))
            .expect("vertices remain");
        done[u] = true;
        for &(a, b, w) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == u && dist[u] + w < dist[y] {
                    dist[y] = dist[u] + w;
                }
            }
        }
    }
    dist
}

pub fn random_point(space: &GroundSpace, rng: &mut ChaCha8Rng, extent: f64) -> GroundPoint {
    match space.base() {
        GroundSpace::Euclidean { dim } => {
            GroundPoint::Coords((0..*dim).map(|_| rng.gen_range(-extent..extent)).collect())
        }
        GroundSpace::TaxicabCross => {
            let v = rng.gen_range(-extent..extent);
            if rng.gen_bool(0.5) {
                GroundPoint::coords([v, 0.0])
            } else {
                GroundPoint::coords([0.0, v])
            }
        }
        GroundSpace::Graph(g) => {
            // Offsets are multiples of weight / 8, so every path sum is exact.
            let e = rng.gen_range(0..g.edges().len());
            let w = g.edges()[e].weight;
            GroundPoint::on_edge(e, w * rng.gen_range(0..=8) as f64 / 8.0)
        }
        GroundSpace::Scaled { .. } => unreachable!("base is never scaled"),
    }
}

pub fn random_set(space: &GroundSpace, rng: &mut ChaCha8Rng, size: usize, extent: f64) -> FiniteSubset {
    FiniteSubset::new(space, (0..size).map(|_| random_point(space, rng, extent))).expect("valid points")
}

/// A set with exactly `size` distinct points.
pub fn random_set_exact(space: &GroundSpace, rng: &mut ChaCha8Rng, size: usize, extent: f64) -> FiniteSubset {
    loop {
        let s = random_set(space, rng, size, extent);
        if s.len() == size {
            return s;
        }
    }
}

/// A connected graph with dyadic weights: a random spanning tree plus extra
/// edges.
pub fn random_graph(rng: &mut ChaCha8Rng) -> GroundSpace {
    let n = rng.gen_range(3..=7);
    let weight = |rng: &mut ChaCha8Rng| rng.gen_range(1..=16) as f64 / 4.0;
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v, weight(rng)));
    }
    for _ in 0..rng.gen_range(0..=n) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            edges.push((a, b, weight(rng)));
        }
    }
    GroundSpace::graph(n, &edges).expect("connected by construction")
}

/// One space of each kind.
pub fn space_kinds(rng: &mut ChaCha8Rng) -> Vec<(&'static str, GroundSpace)> {
    vec![
        ("euclidean-1", GroundSpace::euclidean(1).unwrap()),
        ("euclidean-2", GroundSpace::euclidean(2).unwrap()),
        ("euclidean-3", GroundSpace::euclidean(3).unwrap()),
        ("taxicab-cross", GroundSpace::TaxicabCross),
        ("graph", random_graph(rng)),
        (
            "scaled",
            GroundSpace::scaled(GroundSpace::euclidean(2).unwrap(), 1.5).unwrap(),
        ),
    ]
}
