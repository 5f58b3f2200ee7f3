//! Schedules and their exact validation.
//!
//! A leg is costed by its shortest-walk realization: start, pickup, dropoff
//! and (for returning agents) back to start. Energy is the only constraint,
//! so no other itinerary can be cheaper.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::graph::{GraphError, Point};
use crate::instance::{AgentId, Instance, Variant};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leg {
    pub agent: AgentId,
    pub pickup: Point,
    pub dropoff: Point,
}

/// Legs in message order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schedule {
    pub legs: Vec<Leg>,
}

impl Schedule {
    pub fn new(legs: Vec<Leg>) -> Self {
        Schedule { legs }
    }

    pub fn is_empty(&self) -> bool {
        self.legs.is_empty()
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.legs.iter().map(|l| l.agent)
    }

    /// The schedule of [`Instance::scaled`] with the same `factor`.
    pub fn scaled(&self, factor: &Rational) -> Schedule {
        let scale = |p: &Point| match p {
            Point::Vertex(v) => Point::Vertex(*v),
            Point::OnEdge { edge, offset } => Point::OnEdge { edge: *edge, offset: offset * factor },
        };
        Schedule {
            legs: self
                .legs
                .iter()
                .map(|l| Leg { agent: l.agent, pickup: scale(&l.pickup), dropoff: scale(&l.dropoff) })
                .collect(),
        }
    }
}

/// Answer of an exact solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Feasible(Schedule),
    Infeasible,
}

impl Decision {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Decision::Feasible(_))
    }

    pub fn schedule(&self) -> Option<&Schedule> {
        match self {
            Decision::Feasible(s) => Some(s),
            Decision::Infeasible => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    BudgetExceeded,
    ChainBroken,
    SourceMismatch,
    TargetMismatch,
    DuplicateAgent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Offending leg; `None` for an empty schedule that should reach `t`.
    pub leg: Option<usize>,
    pub kind: ViolationKind,
    pub details: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    /// Energy used per leg; `None` when the leg's points are disconnected.
    pub leg_costs: Vec<Option<Rational>>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidateError {
    #[error("leg {leg} refers to unknown agent {agent}")]
    UnknownAgent { leg: usize, agent: AgentId },
    #[error("leg {leg} has an invalid location: {source}")]
    InvalidPoint { leg: usize, source: GraphError },
    #[error("augmentation factor {0} is negative")]
    NegativeGamma(Rational),
}

/// Energy agent `agent` spends on one leg, or `None` if disconnected.
pub fn leg_cost(inst: &Instance, agent: AgentId, pickup: &Point, dropoff: &Point) -> Option<Rational> {
    let g = inst.graph();
    let from_start = g.distances_from(&inst.agents()[agent].start);
    let to_pickup = from_start.to_point(g, pickup)?;
    let carry = g.distance(pickup, dropoff)?;
    let mut cost = to_pickup + carry;
    if inst.variant() == Variant::Returning {
        cost += from_start.to_point(g, dropoff)?;
    }
    Some(cost)
}

/// Checks message continuity from source to target and every agent's energy
/// against `gamma` times its budget. Spending exactly `gamma * budget` passes.
pub fn validate(inst: &Instance, sched: &Schedule, gamma: &Rational) -> Result<ValidationReport, ValidateError> {
    if gamma.is_negative() {
        return Err(ValidateError::NegativeGamma(gamma.clone()));
    }
    let g = inst.graph();
    for (i, leg) in sched.legs.iter().enumerate() {
        if inst.agent(leg.agent).is_none() {
            return Err(ValidateError::UnknownAgent { leg: i, agent: leg.agent });
        }
        for p in [&leg.pickup, &leg.dropoff] {
            g.check_point(p).map_err(|source| ValidateError::InvalidPoint { leg: i, source })?;
        }
    }

    let mut violations = Vec::new();
    if sched.legs.is_empty() && inst.source() != inst.target() {
        violations.push(Violation {
            leg: None,
            kind: ViolationKind::TargetMismatch,
            details: String::from("empty schedule but source differs from target"),
        });
    }
    if let Some(first) = sched.legs.first() {
        if first.pickup != *inst.source() {
            violations.push(Violation {
                leg: Some(0),
                kind: ViolationKind::SourceMismatch,
                details: format!("first pickup {:?} is not the source {:?}", first.pickup, inst.source()),
            });
        }
    }
    if let Some(last) = sched.legs.last() {
        if last.dropoff != *inst.target() {
            violations.push(Violation {
                leg: Some(sched.legs.len() - 1),
                kind: ViolationKind::TargetMismatch,
                details: format!("last dropoff {:?} is not the target {:?}", last.dropoff, inst.target()),
            });
        }
    }
    for (i, pair) in sched.legs.windows(2).enumerate() {
        if pair[0].dropoff != pair[1].pickup {
            violations.push(Violation {
                leg: Some(i + 1),
                kind: ViolationKind::ChainBroken,
                details: format!("pickup {:?} differs from previous dropoff {:?}", pair[1].pickup, pair[0].dropoff),
            });
        }
    }
    let mut seen = Vec::new();
    for (i, leg) in sched.legs.iter().enumerate() {
        if seen.contains(&leg.agent) {
            violations.push(Violation {
                leg: Some(i),
                kind: ViolationKind::DuplicateAgent,
                details: format!("agent {} already carried the message", leg.agent),
            });
        }
        seen.push(leg.agent);
    }

    let mut leg_costs = Vec::with_capacity(sched.legs.len());
    for (i, leg) in sched.legs.iter().enumerate() {
        let cost = leg_cost(inst, leg.agent, &leg.pickup, &leg.dropoff);
        let allowance = gamma * &inst.agents()[leg.agent].budget;
        match &cost {
            Some(c) if *c <= allowance => {}
            Some(c) => violations.push(Violation {
                leg: Some(i),
                kind: ViolationKind::BudgetExceeded,
                details: format!("agent {} needs {} but may spend {}", leg.agent, c, allowance),
            }),
            None => violations.push(Violation {
                leg: Some(i),
                kind: ViolationKind::BudgetExceeded,
                details: format!("agent {} cannot reach its leg", leg.agent),
            }),
        }
        leg_costs.push(cost);
    }

    Ok(ValidationReport { ok: violations.is_empty(), leg_costs, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instance::Agent;
    use alloc::vec;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    /// s=0 - x=1 - t=2 with weights 2, 2 and one agent at x with budget 4.
    fn sxt(variant: Variant) -> Instance {
        let g = Graph::new(3, [(0, 1, r(2)), (1, 2, r(2))]).unwrap();
        Instance::new(
            g,
            Point::Vertex(0),
            Point::Vertex(2),
            vec![Agent { start: Point::Vertex(1), budget: r(4) }],
            variant,
        )
        .unwrap()
    }

    fn relay() -> Schedule {
        Schedule::new(vec![Leg { agent: 0, pickup: Point::Vertex(0), dropoff: Point::Vertex(2) }])
    }

    #[test]
    fn empty_schedule_when_source_is_target() {
        let g = Graph::new(1, []).unwrap();
        let inst = Instance::new(g, Point::Vertex(0), Point::Vertex(0), vec![], Variant::Returning).unwrap();
        assert!(validate(&inst, &Schedule::default(), &r(1)).unwrap().ok);
    }

    #[test]
    fn relay_costs_twice_the_budget() {
        let inst = sxt(Variant::Returning);
        let report = validate(&inst, &relay(), &r(2)).unwrap();
        assert!(report.ok);
        assert_eq!(report.leg_costs, vec![Some(r(8))]);
        let report = validate(&inst, &relay(), &r(1)).unwrap();
        assert!(!report.ok);
        assert!(report.has(ViolationKind::BudgetExceeded));
    }

    #[test]
    fn non_returning_cost_skips_return() {
        let inst = sxt(Variant::NonReturning);
        let report = validate(&inst, &relay(), &r(1)).unwrap();
        assert_eq!(report.leg_costs, vec![Some(r(6))]);
        assert!(!report.ok);
        assert!(validate(&inst, &relay(), &Rational::new(3, 2).unwrap()).unwrap().ok);
    }

    #[test]
    fn structural_violations() {
        let inst = sxt(Variant::Returning);
        let bad = Schedule::new(vec![
            Leg { agent: 0, pickup: Point::Vertex(1), dropoff: Point::Vertex(1) },
            Leg { agent: 0, pickup: Point::Vertex(0), dropoff: Point::Vertex(1) },
        ]);
        let report = validate(&inst, &bad, &r(10)).unwrap();
        for kind in [
            ViolationKind::SourceMismatch,
            ViolationKind::TargetMismatch,
            ViolationKind::ChainBroken,
            ViolationKind::DuplicateAgent,
        ] {
            assert!(report.has(kind), "{kind:?} missing");
        }
        assert!(!report.has(ViolationKind::BudgetExceeded));
        assert!(!validate(&inst, &Schedule::default(), &r(1)).unwrap().ok);
    }

    #[test]
    fn unknown_agent_is_an_error() {
        let inst = sxt(Variant::Returning);
        let bad = Schedule::new(vec![Leg { agent: 3, pickup: Point::Vertex(0), dropoff: Point::Vertex(2) }]);
        assert_eq!(validate(&inst, &bad, &r(1)), Err(ValidateError::UnknownAgent { leg: 0, agent: 3 }));
    }
}
