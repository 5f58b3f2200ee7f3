//! Reachability sets of budgeted agents.
//!
//! The ellipsoid `E(u, v, B)` is the set of points `p` with
//! `d(u,v) + d(v,p) + d(p,u) <= B`: where a returning agent starting at `u`
//! that first visits `v` can still go. The ball of radius `r` around `c` is
//! `E(c, c, 2r)`.
//!
//! Sets are stored exactly: a flag per vertex and, per edge, the closed
//! sub-intervals of offsets (from the edge's smaller endpoint) that belong to
//! the set. On an edge that contains neither origin this is at most one
//! interval from each end, since the defining function is concave there.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{DistanceMap, EdgeDistances, EdgeId, Graph, GraphError, Point, VertexId};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReachError {
    #[error("reach set is empty: the round trip between its origins exceeds the budget")]
    EmptyReach,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Closed interval of edge offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn contains(&self, t: &Rational) -> bool {
        self.lo <= *t && *t <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachSet {
    origin: (Point, Point),
    budget: Rational,
    vertices: Vec<bool>,
    edges: Vec<Vec<Interval>>,
}

/// A linear function `c + slope * t` of the edge offset.
#[derive(Clone)]
struct Linear {
    c: Rational,
    slope: i64,
}

/// Distance function from a source set along one edge, restricted to the
/// piece `[a, b]`: the minimum of the returned linear functions.
fn routes_on_piece(view: &EdgeDistances, weight: &Rational, a: &Rational, b: &Rational) -> Vec<Linear> {
    let mut out = Vec::new();
    if let Some(d) = &view.at_lo {
        out.push(Linear { c: d.clone(), slope: 1 });
    }
    if let Some(d) = &view.at_hi {
        out.push(Linear { c: d + weight, slope: -1 });
    }
    for o in &view.interior {
        if b <= o {
            out.push(Linear { c: o.clone(), slope: -1 });
        } else if a >= o {
            out.push(Linear { c: -o, slope: 1 });
        }
    }
    out
}

fn merge(mut intervals: Vec<Interval>) -> Vec<Interval> {
    intervals.sort_by(|x, y| x.lo.cmp(&y.lo).then(x.hi.cmp(&y.hi)));
    let mut out: Vec<Interval> = Vec::with_capacity(intervals.len());
    for iv in intervals {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
            }
            _ => out.push(iv),
        }
    }
    out
}

/// Offsets on `[0, weight]` where `d_u(t) + d_v(t) <= residual`.
fn sublevel_on_edge(
    u: &EdgeDistances,
    v: &EdgeDistances,
    weight: &Rational,
    residual: &Rational,
) -> Vec<Interval> {
    let mut cuts = vec![Rational::ZERO, weight.clone()];
    cuts.extend(u.interior.iter().cloned());
    cuts.extend(v.interior.iter().cloned());
    cuts.sort();
    cuts.dedup();

    let mut found = Vec::new();
    for piece in cuts.windows(2) {
        let (a, b) = (&piece[0], &piece[1]);
        let fu = routes_on_piece(u, weight, a, b);
        let fv = routes_on_piece(v, weight, a, b);
        for x in &fu {
            for y in &fv {
                let c = &x.c + &y.c;
                let slope = x.slope + y.slope;
                // c + slope * t <= residual on [a, b]
                let span = match slope.signum() {
                    0 => (c <= *residual).then(|| (a.clone(), b.clone())),
                    1 => {
                        let limit = (residual - &c) / Rational::from_int(slope);
                        (limit >= *a).then(|| (a.clone(), limit.min_of(b.clone())))
                    }
                    _ => {
                        let limit = (residual - &c) / Rational::from_int(slope);
                        (limit <= *b).then(|| (limit.max_of(a.clone()), b.clone()))
                    }
                };
                if let Some((lo, hi)) = span {
                    found.push(Interval { lo, hi });
                }
            }
        }
    }
    merge(found)
}

impl ReachSet {
    /// `E(u, v, budget)`.
    pub fn ellipsoid(g: &Graph, u: &Point, v: &Point, budget: &Rational) -> Result<Self, ReachError> {
        g.check_point(u)?;
        g.check_point(v)?;
        let du = g.distances_from(u);
        if u == v {
            return Self::from_maps(g, &du, &du, budget);
        }
        let dv = g.distances_from(v);
        Self::from_maps(g, &du, &dv, budget)
    }

    /// Closed ball of `radius` around `center`, i.e. `E(center, center, 2 radius)`.
    pub fn ball(g: &Graph, center: &Point, radius: &Rational) -> Result<Self, ReachError> {
        Self::ellipsoid(g, center, center, &(radius + radius))
    }

    /// Builds `E(u, v, budget)` from precomputed single-source distance maps
    /// of `u` and `v`.
    pub fn from_maps(
        g: &Graph,
        du: &DistanceMap,
        dv: &DistanceMap,
        budget: &Rational,
    ) -> Result<Self, ReachError> {
        let u = du.sources().first().expect("distance map has a source").clone();
        let v = dv.sources().first().expect("distance map has a source").clone();
        let base = du.to_point(g, &v).ok_or(ReachError::EmptyReach)?;
        if &base + &base > *budget {
            return Err(ReachError::EmptyReach);
        }
        let residual = budget - &base;
        let vertices = (0..g.vertex_count())
            .map(|x| match (du.vertex(x), dv.vertex(x)) {
                (Some(a), Some(b)) => a + b <= residual,
                _ => false,
            })
            .collect();
        let edges = (0..g.edge_count())
            .map(|e| {
                let vu = du.edge_view(g, e);
                let vv = dv.edge_view(g, e);
                sublevel_on_edge(&vu, &vv, &g.edge(e).weight, &residual)
            })
            .collect();
        Ok(ReachSet { origin: (u, v), budget: budget.clone(), vertices, edges })
    }

    pub fn origin(&self) -> (&Point, &Point) {
        (&self.origin.0, &self.origin.1)
    }

    pub fn budget(&self) -> &Rational {
        &self.budget
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices[v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v)
    }

    /// Reachable offsets on `edge`, sorted and disjoint.
    pub fn edge_intervals(&self, edge: EdgeId) -> &[Interval] {
        &self.edges[edge]
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Vertex(v) => self.vertices[*v],
            Point::OnEdge { edge, offset } => self.edges[*edge].iter().any(|iv| iv.contains(offset)),
        }
    }

    /// Some point in both sets: the smallest shared vertex, otherwise the
    /// midpoint of the first overlap on the lowest-numbered edge.
    pub fn intersect_witness(&self, other: &ReachSet) -> Option<Point> {
        assert_eq!(self.edges.len(), other.edges.len(), "reach sets of different graphs");
        if let Some(v) = (0..self.vertices.len()).find(|&v| self.vertices[v] && other.vertices[v]) {
            return Some(Point::Vertex(v));
        }
        for (edge, (mine, theirs)) in self.edges.iter().zip(&other.edges).enumerate() {
            for a in mine {
                for b in theirs {
                    if let Some(common) = a.intersect(b) {
                        let mid = (&common.lo + &common.hi).half();
                        debug_assert!(mid.is_positive());
                        return Some(Point::OnEdge { edge, offset: mid });
                    }
                }
            }
        }
        None
    }

    /// Supremum over the set of the distance recorded in `from`.
    pub fn farthest_distance(&self, g: &Graph, from: &DistanceMap) -> Option<Rational> {
        self.farthest_distance_outside(g, from, |_| false)
    }

    /// Like [`ReachSet::farthest_distance`], but ignores the edges for which
    /// `inside` holds and the vertices all of whose edges are inside.
    pub fn farthest_distance_outside(
        &self,
        g: &Graph,
        from: &DistanceMap,
        inside: impl Fn(EdgeId) -> bool,
    ) -> Option<Rational> {
        let mut best: Option<Rational> = None;
        let mut consider = |d: Option<Rational>| {
            if let Some(d) = d {
                if best.as_ref().is_none_or(|b| d > *b) {
                    best = Some(d);
                }
            }
        };
        for v in self.vertices() {
            if g.neighbors(v).iter().all(|&(_, e)| inside(e)) && !g.neighbors(v).is_empty() {
                continue;
            }
            consider(from.vertex(v).cloned());
        }
        for (edge, intervals) in self.edges.iter().enumerate() {
            if intervals.is_empty() || inside(edge) {
                continue;
            }
            let e = g.edge(edge);
            let view = from.edge_view(g, edge);
            // Local maxima of a slope +-1 piecewise-linear function sit where
            // a rising route meets a falling one.
            let mut rising: Vec<Rational> = view.at_lo.iter().cloned().collect();
            let mut falling: Vec<Rational> = view.at_hi.iter().map(|d| d + &e.weight).collect();
            for o in &view.interior {
                rising.push(-o);
                falling.push(o.clone());
            }
            for iv in intervals {
                let mut candidates = vec![iv.lo.clone(), iv.hi.clone()];
                for r in &rising {
                    for f in &falling {
                        let t = (f - r).half();
                        if iv.contains(&t) {
                            candidates.push(t);
                        }
                    }
                }
                for t in candidates {
                    let p = g.point_on_edge(edge, t).expect("interval within edge");
                    consider(from.to_point(g, &p));
                }
            }
        }
        best
    }
}
