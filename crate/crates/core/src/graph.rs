//! Weighted undirected multigraphs with exact edge lengths, locations on
//! edges, and point-to-point shortest-path distances.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::rational::Rational;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge {edge} has non-positive weight {weight}")]
    NonPositiveWeight { edge: EdgeId, weight: Rational },
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: EdgeId, vertex: VertexId },
    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    VertexOutOfRange { vertex: VertexId, count: usize },
    #[error("edge {edge} out of range (graph has {count} edges)")]
    EdgeOutOfRange { edge: EdgeId, count: usize },
    #[error("offset {offset} outside edge {edge} of weight {weight}")]
    OffsetOutOfRange { edge: EdgeId, offset: Rational, weight: Rational },
    #[error("vertex {vertex} is not an endpoint of edge {edge}")]
    NotAnEndpoint { edge: EdgeId, vertex: VertexId },
    #[error("points are not connected")]
    Unreachable,
    #[error("distance {dist} outside walk of length {length}")]
    DistanceOutOfRange { dist: Rational, length: Rational },
}

/// An undirected edge. Endpoints are stored with `lo < hi`; offsets along
/// the edge are always measured from `lo`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub lo: VertexId,
    pub hi: VertexId,
    pub weight: Rational,
}

impl Edge {
    pub fn other(&self, v: VertexId) -> VertexId {
        if v == self.lo {
            self.hi
        } else {
            self.lo
        }
    }

    pub fn has_endpoint(&self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }
}

/// A location in the graph: a vertex, or a point strictly inside an edge at
/// `offset` from the edge's smaller endpoint.
///
/// Points are only constructed through [`Graph`] helpers, which normalize
/// endpoint offsets to vertices, so structural equality is location equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Vertex(VertexId),
    OnEdge { edge: EdgeId, offset: Rational },
}

impl Point {
    pub fn vertex(&self) -> Option<VertexId> {
        match self {
            Point::Vertex(v) => Some(*v),
            Point::OnEdge { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<Edge>,
    /// Per vertex, `(neighbor, edge)` sorted ascending.
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
}

impl Graph {
    /// Builds a graph on `vertex_count` vertices. Parallel edges are kept;
    /// self-loops and non-positive weights are rejected.
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId, Rational)>,
    ) -> Result<Self, GraphError> {
        let mut stored = Vec::new();
        for (id, (u, v, weight)) in edges.into_iter().enumerate() {
            for x in [u, v] {
                if x >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { vertex: x, count: vertex_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { edge: id, vertex: u });
            }
            if !weight.is_positive() {
                return Err(GraphError::NonPositiveWeight { edge: id, weight });
            }
            stored.push(Edge { lo: u.min(v), hi: u.max(v), weight });
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (id, e) in stored.iter().enumerate() {
            adjacency[e.lo].push((e.hi, id));
            adjacency[e.hi].push((e.lo, id));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph { vertex_count, edges: stored, adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v]
    }

    /// Point at `offset` from the smaller endpoint of `edge`; offsets `0`
    /// and `weight` normalize to the endpoints.
    pub fn point_on_edge(&self, edge: EdgeId, offset: Rational) -> Result<Point, GraphError> {
        let e = self
            .edges
            .get(edge)
            .ok_or(GraphError::EdgeOutOfRange { edge, count: self.edges.len() })?;
        if offset.is_negative() || offset > e.weight {
            return Err(GraphError::OffsetOutOfRange { edge, offset, weight: e.weight.clone() });
        }
        Ok(if offset.is_zero() {
            Point::Vertex(e.lo)
        } else if offset == e.weight {
            Point::Vertex(e.hi)
        } else {
            Point::OnEdge { edge, offset }
        })
    }

    /// Point at distance `dist` from endpoint `from` along `edge`.
    pub fn point_from_endpoint(
        &self,
        edge: EdgeId,
        from: VertexId,
        dist: Rational,
    ) -> Result<Point, GraphError> {
        let e = self
            .edges
            .get(edge)
            .ok_or(GraphError::EdgeOutOfRange { edge, count: self.edges.len() })?;
        if from == e.lo {
            self.point_on_edge(edge, dist)
        } else if from == e.hi {
            let offset = &e.weight - &dist;
            self.point_on_edge(edge, offset)
        } else {
            Err(GraphError::NotAnEndpoint { edge, vertex: from })
        }
    }

    /// Checks that `p` is a canonical point of this graph.
    pub fn check_point(&self, p: &Point) -> Result<(), GraphError> {
        match p {
            Point::Vertex(v) if *v < self.vertex_count => Ok(()),
            Point::Vertex(v) => {
                Err(GraphError::VertexOutOfRange { vertex: *v, count: self.vertex_count })
            }
            Point::OnEdge { edge, offset } => {
                let e = self
                    .edges
                    .get(*edge)
                    .ok_or(GraphError::EdgeOutOfRange { edge: *edge, count: self.edges.len() })?;
                if offset.is_positive() && *offset < e.weight {
                    Ok(())
                } else {
                    Err(GraphError::OffsetOutOfRange {
                        edge: *edge,
                        offset: offset.clone(),
                        weight: e.weight.clone(),
                    })
                }
            }
        }
    }

    /// Distances from `p` to its edge endpoints (a vertex is its own seed).
    pub(crate) fn seeds(&self, p: &Point) -> Vec<(VertexId, Rational)> {
        match p {
            Point::Vertex(v) => vec![(*v, Rational::ZERO)],
            Point::OnEdge { edge, offset } => {
                let e = &self.edges[*edge];
                vec![(e.lo, offset.clone()), (e.hi, &e.weight - offset)]
            }
        }
    }

    /// Single- or multi-source Dijkstra from the given points.
    pub fn distances_from_points(&self, sources: &[Point]) -> DistanceMap {
        let dist = self.dijkstra(sources.iter().flat_map(|p| self.seeds(p)));
        DistanceMap { sources: sources.to_vec(), dist }
    }

    /// Dijkstra where vertex `v` starts at potential `d` for every seed
    /// `(v, d)`: the result at `x` is the minimum of `d + dist(v, x)`.
    pub fn dijkstra(&self, seeds: impl IntoIterator<Item = (VertexId, Rational)>) -> Vec<Option<Rational>> {
        let mut dist: Vec<Option<Rational>> = vec![None; self.vertex_count];
        let mut heap = BinaryHeap::new();
        for (v, d) in seeds {
            if dist[v].as_ref().is_none_or(|cur| d < *cur) {
                dist[v] = Some(d.clone());
                heap.push(Reverse((d, v)));
            }
        }
        let mut done = vec![false; self.vertex_count];
        while let Some(Reverse((d, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &(v, e) in &self.adjacency[u] {
                if done[v] {
                    continue;
                }
                let nd = &d + &self.edges[e].weight;
                if dist[v].as_ref().is_none_or(|cur| nd < *cur) {
                    dist[v] = Some(nd.clone());
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        dist
    }

    pub fn distances_from(&self, p: &Point) -> DistanceMap {
        self.distances_from_points(core::slice::from_ref(p))
    }

    /// Shortest-walk distance between two points; `None` when disconnected.
    pub fn distance(&self, a: &Point, b: &Point) -> Option<Rational> {
        if a == b {
            return Some(Rational::ZERO);
        }
        self.distances_from(a).to_point(self, b)
    }

    /// True when every vertex is reachable from vertex 0.
    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count > 0 && self.edges.len() + 1 == self.vertex_count && self.is_connected()
    }
}

/// Distances from a set of source points to every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMap {
    sources: Vec<Point>,
    dist: Vec<Option<Rational>>,
}

impl DistanceMap {
    pub fn sources(&self) -> &[Point] {
        &self.sources
    }

    pub fn vertex(&self, v: VertexId) -> Option<&Rational> {
        self.dist[v].as_ref()
    }

    /// Distance from the nearest source to an arbitrary point.
    pub fn to_point(&self, g: &Graph, p: &Point) -> Option<Rational> {
        match p {
            Point::Vertex(v) => self.dist[*v].clone(),
            Point::OnEdge { edge, offset } => {
                let e = g.edge(*edge);
                let mut best = self.via_endpoints(e, offset);
                for s in &self.sources {
                    if let Point::OnEdge { edge: se, offset: so } = s {
                        if se == edge {
                            let direct = (offset - so).abs();
                            best = Some(match best {
                                Some(b) => b.min_of(direct),
                                None => direct,
                            });
                        }
                    }
                }
                best
            }
        }
    }

    fn via_endpoints(&self, e: &Edge, offset: &Rational) -> Option<Rational> {
        let lo = self.dist[e.lo].as_ref().map(|d| d + offset);
        let hi = self.dist[e.hi].as_ref().map(|d| d + &(&e.weight - offset));
        match (lo, hi) {
            (Some(a), Some(b)) => Some(a.min_of(b)),
            (a, b) => a.or(b),
        }
    }

    /// Source-to-lo and source-to-hi distances, plus the interior offsets of
    /// sources lying on `edge` itself.
    pub(crate) fn edge_view(&self, g: &Graph, edge: EdgeId) -> EdgeDistances {
        let e = g.edge(edge);
        let interior = self
            .sources
            .iter()
            .filter_map(|s| match s {
                Point::OnEdge { edge: se, offset } if *se == edge => Some(offset.clone()),
                _ => None,
            })
            .collect();
        EdgeDistances {
            at_lo: self.dist[e.lo].clone(),
            at_hi: self.dist[e.hi].clone(),
            interior,
        }
    }
}

/// Everything needed to evaluate a distance function along one edge.
#[derive(Debug, Clone)]
pub(crate) struct EdgeDistances {
    pub at_lo: Option<Rational>,
    pub at_hi: Option<Rational>,
    pub interior: Vec<Rational>,
}

/// All-pairs vertex distances, for repeated point-to-point queries on small
/// graphs.
#[derive(Debug, Clone)]
pub struct Metric<'g> {
    graph: &'g Graph,
    rows: Vec<DistanceMap>,
}

impl<'g> Metric<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        let rows = (0..graph.vertex_count())
            .map(|v| graph.distances_from(&Point::Vertex(v)))
            .collect();
        Metric { graph, rows }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Distance map from `p`, assembled from the rows of its endpoints.
    pub fn from_point(&self, p: &Point) -> DistanceMap {
        match p {
            Point::Vertex(v) => self.rows[*v].clone(),
            Point::OnEdge { edge, offset } => {
                let e = self.graph.edge(*edge);
                let to_hi = &e.weight - offset;
                let dist = (0..self.graph.vertex_count())
                    .map(|x| {
                        let a = self.rows[e.lo].dist[x].as_ref().map(|d| d + offset);
                        let b = self.rows[e.hi].dist[x].as_ref().map(|d| d + &to_hi);
                        match (a, b) {
                            (Some(a), Some(b)) => Some(a.min_of(b)),
                            (a, b) => a.or(b),
                        }
                    })
                    .collect();
                DistanceMap { sources: vec![p.clone()], dist }
            }
        }
    }

    pub fn distance(&self, a: &Point, b: &Point) -> Option<Rational> {
        if a == b {
            return Some(Rational::ZERO);
        }
        match a {
            Point::Vertex(v) => self.rows[*v].to_point(self.graph, b),
            Point::OnEdge { .. } => self.from_point(a).to_point(self.graph, b),
        }
    }
}
