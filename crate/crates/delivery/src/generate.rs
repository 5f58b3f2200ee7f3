//! Seeded random instances. The same seed and parameters always give the
//! same instance.

use delivery_core::{q, Agent, Graph, Instance, Point, Rational, Variant};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DENOMINATORS: [i64; 4] = [1, 2, 4, 8];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub vertices: usize,
    pub agents: usize,
    /// Edges added on top of a spanning tree (random graphs only).
    pub extra_edges: usize,
    pub max_weight: i64,
    pub max_budget: i64,
    pub variant: Variant,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { vertices: 8, agents: 3, extra_edges: 3, max_weight: 4, max_budget: 8, variant: Variant::Returning }
    }
}

fn fraction(rng: &mut impl Rng, max_num: i64) -> Rational {
    let den = *DENOMINATORS.choose(rng).expect("non-empty");
    q(rng.gen_range(1..=max_num.max(1) * den), den)
}

/// A vertex, or a point at a multiple of weight/8 inside a random edge.
fn random_point(rng: &mut impl Rng, g: &Graph) -> Point {
    if g.edge_count() == 0 || rng.gen_bool(0.5) {
        return Point::Vertex(rng.gen_range(0..g.vertex_count()));
    }
    let e = rng.gen_range(0..g.edge_count());
    let offset = &g.edge(e).weight * &q(rng.gen_range(1..8), 8);
    g.point_on_edge(e, offset).expect("offset inside the edge")
}

fn finish(rng: &mut ChaCha8Rng, g: Graph, p: &GenParams) -> Instance {
    let source = random_point(rng, &g);
    let target = random_point(rng, &g);
    let agents = (0..p.agents)
        .map(|_| Agent { start: random_point(rng, &g), budget: fraction(rng, p.max_budget) })
        .collect();
    Instance::new(g, source, target, agents, p.variant).expect("generated points are valid")
}

fn tree_edges(rng: &mut impl Rng, p: &GenParams) -> Vec<(usize, usize, Rational)> {
    (1..p.vertices).map(|v| (rng.gen_range(0..v), v, fraction(rng, p.max_weight))).collect()
}

pub fn random_tree(seed: u64, p: &GenParams) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.vertices.max(2);
    let edges = tree_edges(&mut rng, &GenParams { vertices: n, ..p.clone() });
    let g = Graph::new(n, edges).expect("tree edges are valid");
    finish(&mut rng, g, p)
}

/// A random spanning tree plus `extra_edges` more edges, possibly parallel.
pub fn random_graph(seed: u64, p: &GenParams) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.vertices.max(2);
    let mut edges = tree_edges(&mut rng, &GenParams { vertices: n, ..p.clone() });
    for _ in 0..p.extra_edges {
        let u = rng.gen_range(0..n);
        let v = (u + rng.gen_range(1..n)) % n;
        edges.push((u, v, fraction(&mut rng, p.max_weight)));
    }
    let g = Graph::new(n, edges).expect("edges are valid");
    finish(&mut rng, g, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let p = GenParams::default();
        assert_eq!(random_tree(7, &p), random_tree(7, &p));
        assert_eq!(random_graph(7, &p), random_graph(7, &p));
        assert_ne!(random_graph(7, &p), random_graph(8, &p));
    }

    #[test]
    fn shapes() {
        let p = GenParams { vertices: 12, agents: 5, extra_edges: 4, ..Default::default() };
        for seed in 0..50 {
            let t = random_tree(seed, &p);
            assert!(t.graph().is_tree());
            assert_eq!(t.agents().len(), 5);
            let g = random_graph(seed, &p);
            assert_eq!(g.graph().edge_count(), 11 + 4);
            assert!(g.graph().is_connected());
            for e in g.graph().edges() {
                assert!(DENOMINATORS.iter().any(|d| (&e.weight * &Rational::from_int(*d)).is_integer()));
            }
        }
    }
}
