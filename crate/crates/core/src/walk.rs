//! Canonical shortest walks between points and positions along them.

use alloc::vec::Vec;

use crate::graph::{EdgeId, Graph, GraphError, Point, VertexId};
use crate::rational::Rational;

/// Traversal of part of one edge, from offset `from` to offset `to`, both
/// measured from `lo` and within `[0, weight]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub edge: EdgeId,
    pub lo: VertexId,
    pub hi: VertexId,
    pub weight: Rational,
    pub from: Rational,
    pub to: Rational,
}

impl Segment {
    pub fn length(&self) -> Rational {
        (&self.to - &self.from).abs()
    }

    fn point_at_offset(&self, offset: Rational) -> Point {
        if offset.is_zero() {
            Point::Vertex(self.lo)
        } else if offset == self.weight {
            Point::Vertex(self.hi)
        } else {
            Point::OnEdge { edge: self.edge, offset }
        }
    }

    pub fn start(&self) -> Point {
        self.point_at_offset(self.from.clone())
    }

    pub fn end(&self) -> Point {
        self.point_at_offset(self.to.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    start: Point,
    end: Point,
    segments: Vec<Segment>,
    length: Rational,
}

impl Walk {
    pub fn start(&self) -> &Point {
        &self.start
    }

    pub fn end(&self) -> &Point {
        &self.end
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn length(&self) -> &Rational {
        &self.length
    }

    /// Vertices passed through, in order.
    pub fn vertices(&self) -> Vec<VertexId> {
        let mut out = Vec::new();
        if let Point::Vertex(v) = self.start {
            out.push(v);
        }
        for s in &self.segments {
            if let Point::Vertex(v) = s.end() {
                out.push(v);
            }
        }
        out
    }

    /// The point at arc length `dist` from the start.
    pub fn point_at(&self, dist: &Rational) -> Result<Point, GraphError> {
        if dist.is_negative() || *dist > self.length {
            return Err(GraphError::DistanceOutOfRange {
                dist: dist.clone(),
                length: self.length.clone(),
            });
        }
        let mut left = dist.clone();
        for s in &self.segments {
            let len = s.length();
            if left <= len {
                let offset = if s.to >= s.from { &s.from + &left } else { &s.from - &left };
                return Ok(s.point_at_offset(offset));
            }
            left -= &len;
        }
        Ok(self.start.clone())
    }

    /// Segments chain end-to-start and their lengths add up to `length`.
    pub fn is_consistent(&self) -> bool {
        let mut at = self.start.clone();
        let mut total = Rational::ZERO;
        for s in &self.segments {
            if s.start() != at {
                return false;
            }
            total += s.length();
            at = s.end();
        }
        at == self.end && total == self.length
    }
}

impl Graph {
    /// A shortest walk from `a` to `b`. Among all shortest walks the one with
    /// the lexicographically smallest vertex sequence is returned (a walk that
    /// stays inside one edge has the empty sequence); parallel edges tie-break
    /// on the smaller edge id.
    pub fn shortest_walk(&self, a: &Point, b: &Point) -> Result<Walk, GraphError> {
        let to_b = self.distances_from(b);
        let total = to_b.to_point(self, a).ok_or(GraphError::Unreachable)?;
        let mut walk = Walk {
            start: a.clone(),
            end: b.clone(),
            segments: Vec::new(),
            length: total.clone(),
        };
        if a == b {
            return Ok(walk);
        }
        if let (
            Point::OnEdge { edge: ea, offset: oa },
            Point::OnEdge { edge: eb, offset: ob },
        ) = (a, b)
        {
            if ea == eb && (oa - ob).abs() == total {
                walk.segments.push(self.segment(*ea, oa.clone(), ob.clone()));
                return Ok(walk);
            }
        }

        let mut remaining = total;
        let mut current = match a {
            Point::Vertex(v) => *v,
            Point::OnEdge { edge, offset } => {
                let e = self.edge(*edge);
                let via_lo = offset.clone();
                let via_hi = &e.weight - offset;
                let lo_ok = to_b.vertex(e.lo).is_some_and(|d| &via_lo + d == remaining);
                let (v, cost, end) = if lo_ok {
                    (e.lo, via_lo, Rational::ZERO)
                } else {
                    (e.hi, via_hi, e.weight.clone())
                };
                walk.segments.push(self.segment(*edge, offset.clone(), end));
                remaining -= &cost;
                v
            }
        };

        loop {
            if remaining.is_zero() {
                debug_assert_eq!(Point::Vertex(current), *b);
                break;
            }
            if let Point::OnEdge { edge, offset } = b {
                let e = self.edge(*edge);
                if e.has_endpoint(current) {
                    let (cost, from) = if current == e.lo {
                        (offset.clone(), Rational::ZERO)
                    } else {
                        (&e.weight - offset, e.weight.clone())
                    };
                    if cost == remaining {
                        walk.segments.push(self.segment(*edge, from, offset.clone()));
                        break;
                    }
                }
            }
            let (next, edge) = self
                .neighbors(current)
                .iter()
                .copied()
                .find(|&(y, e)| {
                    to_b.vertex(y)
                        .is_some_and(|d| &self.edge(e).weight + d == remaining)
                })
                .expect("shortest-path predecessor exists");
            let e = self.edge(edge);
            let (from, to) = if current == e.lo {
                (Rational::ZERO, e.weight.clone())
            } else {
                (e.weight.clone(), Rational::ZERO)
            };
            walk.segments.push(self.segment(edge, from, to));
            remaining -= &e.weight;
            current = next;
        }
        debug_assert!(walk.is_consistent());
        Ok(walk)
    }

    fn segment(&self, edge: EdgeId, from: Rational, to: Rational) -> Segment {
        let e = self.edge(edge);
        Segment { edge, lo: e.lo, hi: e.hi, weight: e.weight.clone(), from, to }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use alloc::vec;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn empty_walk_for_identical_points() {
        let g = Graph::new(2, [(0, 1, r(1))]).unwrap();
        let w = g.shortest_walk(&Point::Vertex(1), &Point::Vertex(1)).unwrap();
        assert!(w.segments().is_empty());
        assert_eq!(*w.length(), r(0));
        assert_eq!(w.point_at(&r(0)).unwrap(), Point::Vertex(1));
    }

    #[test]
    fn path_walk_and_positions() {
        let g = Graph::new(3, [(0, 1, r(2)), (1, 2, r(3))]).unwrap();
        let w = g.shortest_walk(&Point::Vertex(0), &Point::Vertex(2)).unwrap();
        assert_eq!(*w.length(), r(5));
        assert_eq!(w.vertices(), vec![0, 1, 2]);
        assert_eq!(w.point_at(&r(0)).unwrap(), Point::Vertex(0));
        assert_eq!(w.point_at(&r(5)).unwrap(), Point::Vertex(2));
        assert_eq!(w.point_at(&r(2)).unwrap(), Point::Vertex(1));
        assert_eq!(
            w.point_at(&q(7, 2)).unwrap(),
            Point::OnEdge { edge: 1, offset: q(3, 2) }
        );
        assert!(matches!(w.point_at(&r(6)), Err(GraphError::DistanceOutOfRange { .. })));
        assert!(w.point_at(&r(-1)).is_err());
    }

    #[test]
    fn triangle_walk_goes_via_detour() {
        let g = Graph::new(3, [(0, 1, r(10)), (0, 2, r(1)), (2, 1, r(1))]).unwrap();
        let a = g.point_on_edge(0, r(1)).unwrap();
        let b = g.point_on_edge(0, r(9)).unwrap();
        let w = g.shortest_walk(&a, &b).unwrap();
        assert_eq!(*w.length(), r(4));
        assert_eq!(w.vertices(), vec![0, 2, 1]);
        assert!(w.is_consistent());
    }

    #[test]
    fn ties_prefer_smaller_vertex_sequence() {
        // square 0-1-3 and 0-2-3 with equal lengths
        let g = Graph::new(4, [(0, 2, r(1)), (2, 3, r(1)), (0, 1, r(1)), (1, 3, r(1))]).unwrap();
        let w = g.shortest_walk(&Point::Vertex(0), &Point::Vertex(3)).unwrap();
        assert_eq!(w.vertices(), vec![0, 1, 3]);
        let back = g.shortest_walk(&Point::Vertex(3), &Point::Vertex(0)).unwrap();
        assert_eq!(back.vertices(), vec![3, 1, 0]);
    }

    #[test]
    fn same_edge_direct_walk() {
        let g = Graph::new(2, [(0, 1, r(4))]).unwrap();
        let a = g.point_on_edge(0, r(3)).unwrap();
        let b = g.point_on_edge(0, r(1)).unwrap();
        let w = g.shortest_walk(&a, &b).unwrap();
        assert_eq!(w.segments().len(), 1);
        assert_eq!(w.point_at(&q(1, 2)).unwrap(), g.point_on_edge(0, q(5, 2)).unwrap());
    }

    #[test]
    fn unreachable_walk() {
        let g = Graph::new(3, [(0, 1, r(1))]).unwrap();
        assert_eq!(
            g.shortest_walk(&Point::Vertex(0), &Point::Vertex(2)),
            Err(GraphError::Unreachable)
        );
    }
}
