//! Separating segments: two-agent tubes and chains of tubes, each checked
//! on a standalone line with pendant edges hanging off both ends.

use alloc::vec;
use alloc::vec::Vec;

use super::GadgetError;
use crate::graph::{EdgeId, Graph, Point, VertexId};
use crate::instance::{Agent, Instance, Variant};
use crate::rational::{q, Rational};
use crate::reach::ReachSet;
use crate::schedule::{validate, Leg, Schedule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TubeAgent {
    /// Distance from the tube's left end.
    pub offset: Rational,
    pub budget: Rational,
}

/// A segment of `length` holding two agents that relay a message from its
/// left end over `handover` to its right end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tube {
    pub length: Rational,
    pub agents: [TubeAgent; 2],
    pub handover: Rational,
    pub variant: Variant,
}

pub fn make_delta_tube(delta: &Rational, variant: Variant) -> Tube {
    let at = |n, d| delta * &q(n, d);
    let (agents, handover) = match variant {
        Variant::Returning => (
            [TubeAgent { offset: at(1, 4), budget: delta.clone() }, TubeAgent { offset: at(3, 4), budget: delta.clone() }],
            at(1, 2),
        ),
        Variant::NonReturning => (
            [TubeAgent { offset: at(1, 3), budget: at(2, 3) }, TubeAgent { offset: at(1, 2), budget: at(5, 6) }],
            at(1, 3),
        ),
    };
    Tube { length: delta.clone(), agents, handover, variant }
}

/// Reach of an agent with `budget`: the radius it can walk and still
/// satisfy the variant's return rule.
pub(crate) fn radius(variant: Variant, budget: &Rational) -> Rational {
    match variant {
        Variant::Returning => budget.half(),
        Variant::NonReturning => budget.clone(),
    }
}

/// How far an agent at `start` with `budget` can get beyond the region
/// (edges where `inside` holds), measured from the region's `ends`.
pub(crate) fn excursion(
    g: &Graph,
    variant: Variant,
    start: &Point,
    budget: &Rational,
    ends: &[Point],
    inside: impl Fn(EdgeId) -> bool,
) -> Rational {
    let reach = ReachSet::ball(g, start, &radius(variant, budget)).expect("a ball is never empty");
    let from = g.distances_from_points(ends);
    reach.farthest_distance_outside(g, &from, inside).unwrap_or(Rational::ZERO)
}

/// Relay legs across a tube lying on `edge` from vertex `from` to `to`.
pub(crate) fn tube_legs(g: &Graph, edge: EdgeId, from: VertexId, to: VertexId, agents: [usize; 2], handover: &Rational) -> [Leg; 2] {
    let mid = g.point_from_endpoint(edge, from, handover.clone()).expect("handover inside the tube");
    [
        Leg { agent: agents[0], pickup: Point::Vertex(from), dropoff: mid.clone() },
        Leg { agent: agents[1], pickup: mid, dropoff: Point::Vertex(to) },
    ]
}

/// A line of consecutive tubes, vertices `0..=k`, tube `i` on edge `i`, plus
/// pendant edges `k` (at vertex 0) and `k + 1` (at vertex `k`).
struct Line {
    instance: Instance,
    tubes: usize,
}

impl Line {
    fn new(tubes: &[Tube], variant: Variant, gamma: &Rational) -> Line {
        let k = tubes.len();
        let total: Rational = tubes.iter().fold(Rational::ZERO, |acc, t| &acc + &t.length);
        let reach = tubes
            .iter()
            .flat_map(|t| t.agents.iter())
            .map(|a| &a.budget * gamma)
            .fold(Rational::ZERO, Rational::max_of);
        let pendant = &total + &reach;
        let mut edges: Vec<_> = tubes.iter().enumerate().map(|(i, t)| (i, i + 1, t.length.clone())).collect();
        edges.push((0, k + 1, pendant.clone()));
        edges.push((k, k + 2, pendant));
        let g = Graph::new(k + 3, edges).expect("tube lengths are positive");
        let agents = tubes
            .iter()
            .enumerate()
            .flat_map(|(i, t)| t.agents.iter().map(move |a| (i, a)))
            .map(|(i, a)| Agent { start: g.point_on_edge(i, a.offset.clone()).expect("agent inside its tube"), budget: a.budget.clone() })
            .collect();
        let instance = Instance::new(g, Point::Vertex(0), Point::Vertex(k), agents, variant).expect("valid line");
        Line { instance, tubes: k }
    }

    fn relay(&self, tubes: &[Tube]) -> bool {
        let g = self.instance.graph();
        let legs = tubes
            .iter()
            .enumerate()
            .flat_map(|(i, t)| tube_legs(g, i, i, i + 1, [2 * i, 2 * i + 1], &t.handover))
            .collect();
        validate(&self.instance, &Schedule::new(legs), &Rational::ONE).is_ok_and(|r| r.ok)
    }

    /// Largest excursion of any agent beyond the line's ends, with budgets
    /// scaled by `gamma`.
    fn max_excursion(&self, gamma: &Rational) -> Rational {
        let g = self.instance.graph();
        let ends = [Point::Vertex(0), Point::Vertex(self.tubes)];
        self.instance
            .agents()
            .iter()
            .map(|a| excursion(g, self.instance.variant(), &a.start, &(&a.budget * gamma), &ends, |e| e < self.tubes))
            .fold(Rational::ZERO, Rational::max_of)
    }
}

/// Outcome of checking the four tube properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TubeReport {
    pub length_ok: bool,
    pub budgets_ok: bool,
    pub excursion: Rational,
    pub excursion_ok: bool,
    pub relay_ok: bool,
}

impl TubeReport {
    pub fn holds(&self) -> bool {
        self.length_ok && self.budgets_ok && self.excursion_ok && self.relay_ok
    }
}

impl Tube {
    pub fn scaled(&self, c: &Rational) -> Tube {
        Tube {
            length: &self.length * c,
            agents: self.agents.clone().map(|a| TubeAgent { offset: &a.offset * c, budget: &a.budget * c }),
            handover: &self.handover * c,
            variant: self.variant,
        }
    }

    /// Checks the tube against its nominal width `delta`.
    pub fn certify(&self, delta: &Rational) -> TubeReport {
        let line = Line::new(core::slice::from_ref(self), self.variant, &Rational::ONE);
        let excursion = line.max_excursion(&Rational::ONE);
        TubeReport {
            length_ok: self.length == *delta,
            budgets_ok: self.agents.iter().all(|a| a.budget <= *delta),
            excursion_ok: excursion <= delta * &q(1, 3),
            excursion,
            relay_ok: line.relay(core::slice::from_ref(self)),
        }
    }
}

/// Tubes in blocks of six: widths `2^j delta` for `j = 0..=top`, then back
/// down for `j = top-1..=0`, with `top` the least `J` such that
/// `6 * 2^J * delta >= length_bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub length_bound: Rational,
    pub delta: Rational,
    pub top: u32,
    pub tubes: Vec<Tube>,
    pub variant: Variant,
}

pub fn make_chain(length_bound: &Rational, delta: &Rational, variant: Variant) -> Result<Chain, GadgetError> {
    if !delta.is_positive() || delta >= length_bound {
        return Err(GadgetError::ChainParameters { length: length_bound.clone(), delta: delta.clone() });
    }
    let base = make_delta_tube(delta, variant);
    let six = Rational::from_int(6);
    let mut top = 0u32;
    let mut width = delta.clone();
    while &six * &width < *length_bound {
        top += 1;
        width = &width + &width;
    }
    let mut scales = Vec::with_capacity(2 * top as usize + 1);
    let mut c = Rational::ONE;
    for _ in 0..=top {
        scales.push(c.clone());
        c = &c + &c;
    }
    for j in (0..top as usize).rev() {
        scales.push(scales[j].clone());
    }
    let tubes = scales.iter().flat_map(|c| vec![base.scaled(c); 6]).collect();
    Ok(Chain { length_bound: length_bound.clone(), delta: delta.clone(), top, tubes, variant })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub length: Rational,
    pub length_ok: bool,
    /// Largest excursion with every budget multiplied by the tested factor.
    pub excursion: Rational,
    pub excursion_ok: bool,
    pub relay_ok: bool,
}

impl ChainReport {
    pub fn holds(&self) -> bool {
        self.length_ok && self.excursion_ok && self.relay_ok
    }
}

impl Chain {
    pub fn block_count(&self) -> usize {
        2 * self.top as usize + 1
    }

    pub fn length(&self) -> Rational {
        self.tubes.iter().fold(Rational::ZERO, |acc, t| &acc + &t.length)
    }

    /// Checks the chain with budgets multiplied by `gamma`. The excursion
    /// is required to stay within `3 delta`; since it grows strictly with
    /// the budget once positive, passing at `gamma = 3` means every smaller
    /// factor stays strictly below.
    pub fn certify(&self, gamma: &Rational) -> ChainReport {
        let line = Line::new(&self.tubes, self.variant, gamma);
        let length = self.length();
        let excursion = line.max_excursion(gamma);
        ChainReport {
            length_ok: length >= self.length_bound,
            excursion_ok: excursion <= &self.delta * &Rational::from_int(3),
            excursion,
            length,
            relay_ok: line.relay(&self.tubes),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn returning_tube() {
        let d = q(1, 6);
        let t = make_delta_tube(&d, Variant::Returning);
        let r = t.certify(&d);
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.excursion, &d * &q(1, 4));
    }

    #[test]
    fn non_returning_tube_is_tight() {
        let d = q(1, 6);
        let r = make_delta_tube(&d, Variant::NonReturning).certify(&d);
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.excursion, &d * &q(1, 3));
    }

    #[test]
    fn scaled_tubes_stay_valid() {
        for v in [Variant::Returning, Variant::NonReturning] {
            let t = make_delta_tube(&q(1, 6), v).scaled(&q(7, 3));
            assert!(t.certify(&q(7, 18)).holds());
        }
    }

    #[test]
    fn oversized_budget_fails() {
        let d = q(1, 6);
        let mut t = make_delta_tube(&d, Variant::Returning);
        t.agents[0].budget = &d * &q(3, 2);
        let r = t.certify(&d);
        assert!(!r.budgets_ok && !r.excursion_ok);
    }

    #[test]
    fn chain_structure() {
        let c = make_chain(&Rational::from_int(9), &q(1, 45), Variant::Returning).unwrap();
        assert_eq!(c.top, 7);
        assert_eq!(c.block_count(), 15);
        assert_eq!(c.tubes.len(), 90);
        assert_eq!(c.tubes[6].length, q(2, 45));
        assert_eq!(c.tubes[47].length, q(128, 45));
        assert_eq!(c.tubes[89].length, q(1, 45));
    }

    #[test]
    fn chains_certify() {
        for v in [Variant::Returning, Variant::NonReturning] {
            let c = make_chain(&Rational::from_int(2), &q(1, 10), v).unwrap();
            let r = c.certify(&Rational::from_int(3));
            assert!(r.holds(), "{r:?}");
            assert!(r.excursion < q(3, 10));
        }
    }

    #[test]
    fn chain_rejects_bad_parameters() {
        assert!(make_chain(&q(1, 2), &q(1, 2), Variant::Returning).is_err());
        assert!(make_chain(&q(1, 2), &Rational::ZERO, Variant::Returning).is_err());
    }
}
