//! Ground metric spaces with exact distances and geodesic evaluation.
//!
//! Four kinds of ground space are supported:
//!
//! - Euclidean `R^d`;
//! - the taxicab cross `{(x, y) : xy = 0}` with the `l1` metric;
//! - finite weighted graphs with their path metric (points live on edges);
//! - a wrapper that reports a quasiconvexity constant `λ ≥ 1` for a
//!   geodesic base space without changing its metric.

use std::cmp::Ordering;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Two points at distance at most this are the same point.
pub const POINT_TOLERANCE: f64 = 1e-9;

/// Relative slack used when comparing route lengths for tie-breaking.
const ROUTE_TIE: f64 = 1e-12;

/// A point of a ground space.
#[derive(Clone, Debug, PartialEq)]
pub enum GroundPoint {
    /// Coordinates in `R^d` or on the taxicab cross.
    Coords(Vec<f64>),
    /// A point at `offset` along edge `edge` of a weighted graph, measured
    /// from the edge's `from` vertex.
    OnEdge { edge: usize, offset: f64 },
}

impl GroundPoint {
    pub fn coords(c: impl Into<Vec<f64>>) -> Self {
        GroundPoint::Coords(c.into())
    }

    pub fn on_edge(edge: usize, offset: f64) -> Self {
        GroundPoint::OnEdge { edge, offset }
    }

    pub fn as_coords(&self) -> Option<&[f64]> {
        match self {
            GroundPoint::Coords(c) => Some(c),
            GroundPoint::OnEdge { .. } => None,
        }
    }

    /// Flat numeric form used by the file formats: coordinates, or
    /// `[edge, offset]` for graph points.
    pub fn raw(&self) -> Vec<f64> {
        match self {
            GroundPoint::Coords(c) => c.clone(),
            GroundPoint::OnEdge { edge, offset } => vec![*edge as f64, *offset],
        }
    }

    /// Canonical total order: lexicographic on coordinates, or on
    /// `(edge, offset)` for graph points.
    pub fn key_cmp(&self, other: &GroundPoint) -> Ordering {
        match (self, other) {
            (GroundPoint::Coords(a), GroundPoint::Coords(b)) => {
                for (x, y) in a.iter().zip(b) {
                    match x.total_cmp(y) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                a.len().cmp(&b.len())
            }
            (GroundPoint::OnEdge { edge: e1, offset: o1 }, GroundPoint::OnEdge { edge: e2, offset: o2 }) => {
                e1.cmp(e2).then(o1.total_cmp(o2))
            }
            (GroundPoint::Coords(_), GroundPoint::OnEdge { .. }) => Ordering::Less,
            (GroundPoint::OnEdge { .. }, GroundPoint::Coords(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for GroundPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundPoint::Coords(c) => {
                write!(f, "(")?;
                for (k, v) in c.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ")")
            }
            GroundPoint::OnEdge { edge, offset } => write!(f, "e{edge}@{offset}"),
        }
    }
}

impl Serialize for GroundPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GroundPoint::Coords(c) => c.serialize(serializer),
            GroundPoint::OnEdge { edge, offset } => {
                let mut seq = serializer.serialize_seq(Some(2))?;
                seq.serialize_element(edge)?;
                seq.serialize_element(offset)?;
                seq.end()
            }
        }
    }
}

/// Configuration form of a ground space, as read from job files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceConfig {
    Euclidean {
        dim: usize,
    },
    TaxicabCross,
    Graph {
        vertices: usize,
        /// `[from, to, weight]` triples.
        edges: Vec<(usize, usize, f64)>,
    },
    Scaled {
        base: Box<SpaceConfig>,
        lambda: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: f64,
}

/// A connected graph with positive edge weights and its all-pairs shortest
/// path table.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    dist: Vec<f64>,
    // Lightest edge between two adjacent vertices, smallest id on ties.
    hop: Vec<Option<usize>>,
}

impl WeightedGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidSpace("graph has no vertices".into()));
        }
        if edges.is_empty() {
            return Err(Error::InvalidSpace("graph has no edges".into()));
        }
        for (id, e) in edges.iter().enumerate() {
            if e.from >= vertex_count || e.to >= vertex_count {
                return Err(Error::InvalidSpace(format!("edge {id} references a missing vertex")));
            }
            if e.from == e.to {
                return Err(Error::InvalidSpace(format!("edge {id} is a self-loop")));
            }
            if !e.weight.is_finite() || e.weight <= POINT_TOLERANCE {
                return Err(Error::InvalidSpace(format!(
                    "edge {id} has non-positive or non-finite weight {}",
                    e.weight
                )));
            }
        }

        let n = vertex_count;
        let mut hop: Vec<Option<usize>> = vec![None; n * n];
        for (id, e) in edges.iter().enumerate() {
            for (a, b) in [(e.from, e.to), (e.to, e.from)] {
                let slot = &mut hop[a * n + b];
                match *slot {
                    Some(old) if edges[old].weight <= e.weight => {}
                    _ => *slot = Some(id),
                }
            }
        }

        let mut dist = vec![f64::INFINITY; n * n];
        for v in 0..n {
            dist[v * n + v] = 0.0;
        }
        for a in 0..n {
            for b in 0..n {
                if let Some(id) = hop[a * n + b] {
                    dist[a * n + b] = edges[id].weight;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                let dik = dist[i * n + k];
                if dik.is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let via = dik + dist[k * n + j];
                    if via < dist[i * n + j] {
                        dist[i * n + j] = via;
                    }
                }
            }
        }
        if dist.iter().any(|d| d.is_infinite()) {
            return Err(Error::InvalidSpace("graph is not connected".into()));
        }

        Ok(WeightedGraph {
            vertex_count,
            edges,
            dist,
            hop,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Shortest-path distance between two vertices.
    pub fn vertex_distance(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.vertex_count + b]
    }

    /// The point representing vertex `v`, in canonical form.
    pub fn vertex_point(&self, v: usize) -> Result<GroundPoint> {
        let (id, e) = self
            .edges
            .iter()
            .enumerate()
            .find(|(_, e)| e.from == v || e.to == v)
            .ok_or_else(|| Error::InvalidPoint(format!("vertex {v} has no incident edge")))?;
        let offset = if e.from == v { 0.0 } else { e.weight };
        Ok(GroundPoint::on_edge(id, offset))
    }

    fn normalize(&self, edge: usize, offset: f64) -> Result<GroundPoint> {
        let e = self
            .edges
            .get(edge)
            .ok_or_else(|| Error::InvalidPoint(format!("edge {edge} does not exist")))?;
        if !offset.is_finite() || offset < -POINT_TOLERANCE || offset > e.weight + POINT_TOLERANCE {
            return Err(Error::InvalidPoint(format!(
                "offset {offset} outside edge {edge} of length {}",
                e.weight
            )));
        }
        if offset <= POINT_TOLERANCE {
            self.vertex_point(e.from)
        } else if offset >= e.weight - POINT_TOLERANCE {
            self.vertex_point(e.to)
        } else {
            Ok(GroundPoint::on_edge(edge, offset))
        }
    }

    fn route(&self, p: (usize, f64), q: (usize, f64)) -> GraphRoute {
        let (e1, o1) = p;
        let (e2, o2) = q;
        let mut best: Option<GraphRoute> = None;
        if e1 == e2 {
            best = Some(GraphRoute {
                length: (o1 - o2).abs(),
                vertices: Vec::new(),
                start: (e1, o1),
                end: (e2, o2),
            });
        }
        let ed1 = self.edges[e1];
        let ed2 = self.edges[e2];
        for (a, cost_a) in [(ed1.from, o1), (ed1.to, ed1.weight - o1)] {
            for (b, cost_b) in [(ed2.from, o2), (ed2.to, ed2.weight - o2)] {
                let length = cost_a + self.vertex_distance(a, b) + cost_b;
                let better = match &best {
                    None => true,
                    Some(cur) => {
                        let tol = ROUTE_TIE * (1.0 + cur.length.abs());
                        if length < cur.length - tol {
                            true
                        } else if length <= cur.length + tol {
                            self.vertex_path(a, b) < cur.vertices
                        } else {
                            false
                        }
                    }
                };
                if better {
                    best = Some(GraphRoute {
                        length,
                        vertices: self.vertex_path(a, b),
                        start: (e1, o1),
                        end: (e2, o2),
                    });
                }
            }
        }
        best.expect("at least one route candidate")
    }

    /// Lexicographically smallest shortest vertex sequence from `a` to `b`.
    fn vertex_path(&self, a: usize, b: usize) -> Vec<usize> {
        let n = self.vertex_count;
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            let remaining = self.vertex_distance(cur, b);
            let tol = ROUTE_TIE * (1.0 + remaining);
            let next = (0..n)
                .find(|&v| {
                    self.hop[cur * n + v]
                        .map(|id| self.edges[id].weight + self.vertex_distance(v, b) <= remaining + tol)
                        .unwrap_or(false)
                })
                .expect("connected graph has a next hop");
            path.push(next);
            cur = next;
        }
        path
    }
}

struct GraphRoute {
    length: f64,
    // Empty for a route that stays on a single edge.
    vertices: Vec<usize>,
    start: (usize, f64),
    end: (usize, f64),
}

/// A ground metric space with a geodesic oracle.
#[derive(Clone, Debug)]
pub enum GroundSpace {
    Euclidean { dim: usize },
    TaxicabCross,
    Graph(WeightedGraph),
    Scaled { base: Box<GroundSpace>, lambda: f64 },
}

impl GroundSpace {
    pub fn euclidean(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpace("dimension must be at least 1".into()));
        }
        Ok(GroundSpace::Euclidean { dim })
    }

    pub fn graph(vertex_count: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let edges = edges
            .iter()
            .map(|&(from, to, weight)| Edge { from, to, weight })
            .collect();
        Ok(GroundSpace::Graph(WeightedGraph::new(vertex_count, edges)?))
    }

    pub fn scaled(base: GroundSpace, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 1.0 {
            return Err(Error::InvalidSpace(format!("quasiconvexity constant {lambda} < 1")));
        }
        if matches!(base, GroundSpace::Scaled { .. }) {
            return Err(Error::InvalidSpace("scaled spaces cannot be nested".into()));
        }
        Ok(GroundSpace::Scaled {
            base: Box::new(base),
            lambda,
        })
    }

    pub fn from_config(config: &SpaceConfig) -> Result<Self> {
        match config {
            SpaceConfig::Euclidean { dim } => GroundSpace::euclidean(*dim),
            SpaceConfig::TaxicabCross => Ok(GroundSpace::TaxicabCross),
            SpaceConfig::Graph { vertices, edges } => GroundSpace::graph(*vertices, edges),
            SpaceConfig::Scaled { base, lambda } => GroundSpace::scaled(GroundSpace::from_config(base)?, *lambda),
        }
    }

    pub fn to_config(&self) -> SpaceConfig {
        match self {
            GroundSpace::Euclidean { dim } => SpaceConfig::Euclidean { dim: *dim },
            GroundSpace::TaxicabCross => SpaceConfig::TaxicabCross,
            GroundSpace::Graph(g) => SpaceConfig::Graph {
                vertices: g.vertex_count,
                edges: g.edges.iter().map(|e| (e.from, e.to, e.weight)).collect(),
            },
            GroundSpace::Scaled { base, lambda } => SpaceConfig::Scaled {
                base: Box::new(base.to_config()),
                lambda: *lambda,
            },
        }
    }

    /// Quasiconvexity constant of the space (1 for geodesic spaces).
    pub fn lambda(&self) -> f64 {
        match self {
            GroundSpace::Scaled { lambda, .. } => *lambda,
            _ => 1.0,
        }
    }

    /// The underlying geodesic space (itself unless scaled).
    pub fn base(&self) -> &GroundSpace {
        match self {
            GroundSpace::Scaled { base, .. } => base,
            other => other,
        }
    }

    /// Coordinate dimension of points, or `None` for graph spaces.
    pub fn coordinate_dim(&self) -> Option<usize> {
        match self.base() {
            GroundSpace::Euclidean { dim } => Some(*dim),
            GroundSpace::TaxicabCross => Some(2),
            _ => None,
        }
    }

    /// Number of numbers per point in the flat file formats.
    pub fn raw_width(&self) -> usize {
        self.coordinate_dim().unwrap_or(2)
    }

    pub(crate) fn is_euclidean(&self) -> bool {
        matches!(self.base(), GroundSpace::Euclidean { .. })
    }

    /// Checks that `p` belongs to the space and returns its canonical form.
    pub fn validate_point(&self, p: &GroundPoint) -> Result<GroundPoint> {
        match (self.base(), p) {
            (GroundSpace::Euclidean { dim }, GroundPoint::Coords(c)) => {
                if c.len() != *dim {
                    return Err(Error::InvalidPoint(format!(
                        "expected {dim} coordinates, got {}",
                        c.len()
                    )));
                }
                finite_coords(c)
            }
            (GroundSpace::TaxicabCross, GroundPoint::Coords(c)) => {
                if c.len() != 2 {
                    return Err(Error::InvalidPoint(format!(
                        "taxicab cross points have 2 coordinates, got {}",
                        c.len()
                    )));
                }
                let c = finite_coords(c)?;
                let c = c.as_coords().expect("coords");
                let (x, y) = (c[0], c[1]);
                if x.abs() <= POINT_TOLERANCE {
                    Ok(GroundPoint::coords([0.0, y]))
                } else if y.abs() <= POINT_TOLERANCE {
                    Ok(GroundPoint::coords([x, 0.0]))
                } else {
                    Err(Error::InvalidPoint(format!("({x}, {y}) is off both axes")))
                }
            }
            (GroundSpace::Graph(g), GroundPoint::OnEdge { edge, offset }) => g.normalize(*edge, *offset),
            (_, p) => Err(Error::InvalidPoint(format!("{p} is not a point of this space kind"))),
        }
    }

    /// Builds a point from its flat numeric form.
    pub fn point_from_raw(&self, raw: &[f64]) -> Result<GroundPoint> {
        match self.base() {
            GroundSpace::Graph(_) => {
                if raw.len() != 2 {
                    return Err(Error::InvalidPoint(format!(
                        "graph points are [edge, offset], got {} numbers",
                        raw.len()
                    )));
                }
                let e = raw[0];
                if !(e >= 0.0 && e.fract() == 0.0 && e < usize::MAX as f64) {
                    return Err(Error::InvalidPoint(format!("edge id {e} is not an index")));
                }
                self.validate_point(&GroundPoint::on_edge(e as usize, raw[1]))
            }
            _ => self.validate_point(&GroundPoint::coords(raw.to_vec())),
        }
    }

    /// Distance between two points already known to be valid.
    pub fn distance(&self, p: &GroundPoint, q: &GroundPoint) -> f64 {
        match (self.base(), p, q) {
            (GroundSpace::Euclidean { .. }, GroundPoint::Coords(a), GroundPoint::Coords(b)) => euclidean(a, b),
            (GroundSpace::TaxicabCross, GroundPoint::Coords(a), GroundPoint::Coords(b)) => {
                (a[0] - b[0]).abs() + (a[1] - b[1]).abs()
            }
            (
                GroundSpace::Graph(g),
                GroundPoint::OnEdge { edge: e1, offset: o1 },
                GroundPoint::OnEdge { edge: e2, offset: o2 },
            ) => g.route((*e1, *o1), (*e2, *o2)).length,
            _ => panic!("point kind does not match space kind"),
        }
    }

    /// Validated distance between two points.
    pub fn ground_distance(&self, p: &GroundPoint, q: &GroundPoint) -> Result<f64> {
        let p = self.validate_point(p)?;
        let q = self.validate_point(q)?;
        Ok(self.distance(&p, &q))
    }

    /// The point at parameter `t` on the space's chosen constant-speed
    /// geodesic from `p` to `q`.
    pub fn geodesic_point(&self, p: &GroundPoint, q: &GroundPoint, t: f64) -> Result<GroundPoint> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("geodesic parameter {t} outside [0, 1]")));
        }
        let p = self.validate_point(p)?;
        let q = self.validate_point(q)?;
        Ok(self.geodesic_point_unchecked(&p, &q, t))
    }

    pub(crate) fn geodesic_point_unchecked(&self, p: &GroundPoint, q: &GroundPoint, t: f64) -> GroundPoint {
        if t == 0.0 {
            return p.clone();
        }
        if t == 1.0 {
            return q.clone();
        }
        match (self.base(), p, q) {
            (GroundSpace::Euclidean { .. }, GroundPoint::Coords(a), GroundPoint::Coords(b)) => {
                GroundPoint::Coords(lerp(a, b, t))
            }
            (GroundSpace::TaxicabCross, GroundPoint::Coords(a), GroundPoint::Coords(b)) => taxicab_geodesic(a, b, t),
            (
                GroundSpace::Graph(g),
                GroundPoint::OnEdge { edge: e1, offset: o1 },
                GroundPoint::OnEdge { edge: e2, offset: o2 },
            ) => graph_geodesic(g, (*e1, *o1), (*e2, *o2), t),
            _ => panic!("point kind does not match space kind"),
        }
    }
}

fn finite_coords(c: &[f64]) -> Result<GroundPoint> {
    if let Some(bad) = c.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidPoint(format!("non-finite coordinate {bad}")));
    }
    // Adding 0.0 maps -0.0 to 0.0 so equal points share a bit pattern.
    Ok(GroundPoint::Coords(c.iter().map(|v| v + 0.0).collect()))
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    if a.len() == 1 {
        return (a[0] - b[0]).abs();
    }
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x) + 0.0).collect()
}

fn on_same_axis(a: &[f64], b: &[f64]) -> bool {
    let a_origin = a[0] == 0.0 && a[1] == 0.0;
    let b_origin = b[0] == 0.0 && b[1] == 0.0;
    a_origin || b_origin || (a[1] == 0.0 && b[1] == 0.0) || (a[0] == 0.0 && b[0] == 0.0)
}

fn taxicab_geodesic(a: &[f64], b: &[f64], t: f64) -> GroundPoint {
    if on_same_axis(a, b) {
        return GroundPoint::Coords(lerp(a, b, t));
    }
    // Different axes: through the origin.
    let ra = a[0].abs() + a[1].abs();
    let rb = b[0].abs() + b[1].abs();
    let s = t * (ra + rb);
    if s <= ra {
        let k = 1.0 - s / ra;
        GroundPoint::coords([a[0] * k + 0.0, a[1] * k + 0.0])
    } else {
        let k = (s - ra) / rb;
        GroundPoint::coords([b[0] * k + 0.0, b[1] * k + 0.0])
    }
}

fn graph_geodesic(g: &WeightedGraph, p: (usize, f64), q: (usize, f64), t: f64) -> GroundPoint {
    let route = g.route(p, q);
    let s = t * route.length;

    // Pieces are (edge, start offset, end offset).
    let mut pieces: Vec<(usize, f64, f64)> = Vec::new();
    if route.vertices.is_empty() {
        pieces.push((route.start.0, route.start.1, route.end.1));
    } else {
        let first = *route.vertices.first().expect("nonempty");
        let last = *route.vertices.last().expect("nonempty");
        let (e1, o1) = route.start;
        let start_edge = g.edges[e1];
        let first_offset = if start_edge.from == first {
            0.0
        } else {
            start_edge.weight
        };
        pieces.push((e1, o1, first_offset));
        for w in route.vertices.windows(2) {
            let id = g.hop[w[0] * g.vertex_count + w[1]].expect("adjacent vertices");
            let e = g.edges[id];
            if e.from == w[0] {
                pieces.push((id, 0.0, e.weight));
            } else {
                pieces.push((id, e.weight, 0.0));
            }
        }
        let (e2, o2) = route.end;
        let end_edge = g.edges[e2];
        let last_offset = if end_edge.from == last { 0.0 } else { end_edge.weight };
        pieces.push((e2, last_offset, o2));
    }

    let mut travelled = 0.0;
    for (k, &(edge, from, to)) in pieces.iter().enumerate() {
        let len = (to - from).abs();
        if s <= travelled + len || k + 1 == pieces.len() {
            let along = (s - travelled).clamp(0.0, len);
            let offset = if to >= from { from + along } else { from - along };
            return g
                .normalize(edge, offset.clamp(0.0, g.edges[edge].weight))
                .expect("offset clamped onto its edge");
        }
        travelled += len;
    }
    unreachable!("route has at least one piece")
}
