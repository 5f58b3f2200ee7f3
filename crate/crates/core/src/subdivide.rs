//! Turning interior points into vertices without changing any distance.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::graph::{EdgeId, Graph, Point, VertexId};
use crate::rational::Rational;

/// A graph in which a chosen set of interior points became vertices, with
/// the maps between locations of the original and the refined graph.
///
/// Original vertices keep their ids; new vertices are numbered after them.
#[derive(Debug, Clone)]
pub struct Subdivision {
    refined: Graph,
    original_vertices: usize,
    /// For each refined edge: original edge and the original offsets of the
    /// refined edge's `lo` and `hi` endpoints.
    pieces: Vec<(EdgeId, Rational, Rational)>,
    /// For each original edge: sorted cut offsets and the refined edge ids
    /// between consecutive cuts (`cuts.len() + 1` pieces).
    splits: Vec<(Vec<Rational>, Vec<EdgeId>)>,
    /// Original location of every new vertex.
    new_vertices: Vec<Point>,
}

impl Subdivision {
    pub fn new(g: &Graph, points: &[Point]) -> Self {
        let mut cuts: BTreeMap<EdgeId, Vec<Rational>> = BTreeMap::new();
        for p in points {
            if let Point::OnEdge { edge, offset } = p {
                cuts.entry(*edge).or_default().push(offset.clone());
            }
        }
        for list in cuts.values_mut() {
            list.sort();
            list.dedup();
        }

        let n = g.vertex_count();
        let mut new_vertices = Vec::new();
        let mut edges = Vec::new();
        let mut pieces = Vec::new();
        let mut splits = Vec::with_capacity(g.edge_count());
        for (id, e) in g.edges().iter().enumerate() {
            let offsets = cuts.remove(&id).unwrap_or_default();
            let mut chain: Vec<(VertexId, Rational)> = Vec::with_capacity(offsets.len() + 2);
            chain.push((e.lo, Rational::ZERO));
            for off in &offsets {
                chain.push((n + new_vertices.len(), off.clone()));
                new_vertices.push(Point::OnEdge { edge: id, offset: off.clone() });
            }
            chain.push((e.hi, e.weight.clone()));
            let mut ids = Vec::with_capacity(chain.len() - 1);
            for pair in chain.windows(2) {
                let ((u, ou), (v, ov)) = (&pair[0], &pair[1]);
                ids.push(edges.len());
                edges.push((*u, *v, ov - ou));
                let (lo_off, hi_off) = if u < v { (ou.clone(), ov.clone()) } else { (ov.clone(), ou.clone()) };
                pieces.push((id, lo_off, hi_off));
            }
            splits.push((offsets, ids));
        }
        let refined = Graph::new(n + new_vertices.len(), edges)
            .expect("subdividing a valid graph yields a valid graph");
        Subdivision { refined, original_vertices: n, pieces, splits, new_vertices }
    }

    pub fn graph(&self) -> &Graph {
        &self.refined
    }

    /// Location in the refined graph of an original point.
    pub fn refine(&self, p: &Point) -> Point {
        match p {
            Point::Vertex(v) => Point::Vertex(*v),
            Point::OnEdge { edge, offset } => {
                let (offsets, ids) = &self.splits[*edge];
                let idx = offsets.partition_point(|o| o < offset);
                if idx < offsets.len() && offsets[idx] == *offset {
                    let k = self.splits[..*edge].iter().map(|(o, _)| o.len()).sum::<usize>() + idx;
                    return Point::Vertex(self.original_vertices + k);
                }
                let piece = ids[idx];
                let (_, lo_off, hi_off) = &self.pieces[piece];
                let local = if lo_off < hi_off { offset - lo_off } else { lo_off - offset };
                Point::OnEdge { edge: piece, offset: local }
            }
        }
    }

    /// Location in the original graph of a refined point.
    pub fn coarsen(&self, p: &Point) -> Point {
        match p {
            Point::Vertex(v) if *v < self.original_vertices => Point::Vertex(*v),
            Point::Vertex(v) => self.new_vertices[*v - self.original_vertices].clone(),
            Point::OnEdge { edge, offset } => {
                let (orig, lo_off, hi_off) = &self.pieces[*edge];
                let off = if lo_off < hi_off { lo_off + offset } else { lo_off - offset };
                Point::OnEdge { edge: *orig, offset: off }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn refine_and_coarsen_round_trip() {
        let g = Graph::new(3, [(0, 1, r(4)), (1, 2, r(2))]).unwrap();
        let a = g.point_on_edge(0, r(1)).unwrap();
        let b = g.point_on_edge(0, r(3)).unwrap();
        let s = Subdivision::new(&g, &[b.clone(), a.clone()]);
        assert_eq!(s.graph().vertex_count(), 5);
        assert_eq!(s.graph().edge_count(), 4);
        assert_eq!(s.refine(&a), Point::Vertex(3));
        assert_eq!(s.refine(&b), Point::Vertex(4));
        let mid = g.point_on_edge(0, r(2)).unwrap();
        let refined = s.refine(&mid);
        assert!(matches!(refined, Point::OnEdge { .. }));
        assert_eq!(s.coarsen(&refined), mid);
        for p in [a, b, Point::Vertex(2), g.point_on_edge(1, q(1, 2)).unwrap()] {
            assert_eq!(s.coarsen(&s.refine(&p)), p);
        }
        // distances are preserved
        assert_eq!(
            s.graph().distance(&Point::Vertex(0), &Point::Vertex(2)),
            g.distance(&Point::Vertex(0), &Point::Vertex(2))
        );
    }
}
