#![allow(dead_code)]

use delivery_core::*;
use proptest::prelude::*;

/// Weights and budgets as small fractions.
pub fn frac(max_num: i64, dens: &'static [i64]) -> impl Strategy<Value = Rational> {
    (1..=max_num, prop::sample::select(dens)).prop_map(|(n, d)| q(n, d))
}

/// Location `(edge, numerator)`: a vertex when the numerator is 0, else
/// `numerator / 4` of the way along the edge.
pub fn place(g: &Graph, spot: (usize, i64)) -> Point {
    let e = spot.0 % g.edge_count();
    let w = &g.edge(e).weight;
    if spot.1 == 0 {
        Point::Vertex(g.edge(e).lo)
    } else {
        g.point_on_edge(e, w * &q(spot.1, 4)).unwrap()
    }
}

#[derive(Debug, Clone)]
pub struct Raw {
    pub n: usize,
    pub edges: Vec<(usize, usize, Rational)>,
    pub s: (usize, i64),
    pub t: (usize, i64),
    pub agents: Vec<((usize, i64), Rational)>,
}

impl Raw {
    pub fn build(&self, variant: Variant) -> Instance {
        let g = Graph::new(self.n, self.edges.clone()).unwrap();
        let s = place(&g, self.s);
        let t = place(&g, self.t);
        let agents = self.agents.iter().map(|(spot, b)| Agent { start: place(&g, *spot), budget: b.clone() }).collect();
        Instance::new(g, s, t, agents, variant).unwrap()
    }
}

pub fn spot() -> impl Strategy<Value = (usize, i64)> {
    (0usize..64, 0i64..4)
}

pub fn tree(max_n: usize, max_k: usize) -> impl Strategy<Value = Raw> {
    (2..=max_n).prop_flat_map(move |n| {
        let parents = (1..n).map(|i| 0..i).collect::<Vec<_>>();
        (
            parents,
            prop::collection::vec(frac(8, &[1, 2, 4, 8]), n - 1),
            spot(),
            spot(),
            prop::collection::vec((spot(), frac(24, &[1, 2, 4])), 0..=max_k),
        )
            .prop_map(move |(parents, weights, s, t, agents)| Raw {
                n,
                edges: parents.into_iter().enumerate().map(|(i, p)| (p, i + 1)).zip(weights).map(|((a, b), w)| (a, b, w)).collect(),
                s,
                t,
                agents,
            })
    })
}

pub fn graph(max_n: usize, max_k: usize) -> impl Strategy<Value = Raw> {
    (tree(max_n, max_k), prop::collection::vec((0usize..16, 0usize..16, frac(8, &[1, 2, 4])), 0..4)).prop_map(
        |(mut raw, extra)| {
            for (a, b, w) in extra {
                let (a, b) = (a % raw.n, b % raw.n);
                if a != b {
                    raw.edges.push((a, b, w));
                }
            }
            raw
        },
    )
}
