//! Returning delivery on trees.
//!
//! Every agent first walks to the nearest point of the unique s–t path and
//! back, which costs twice that distance; what remains lets it serve an
//! interval of the path. The problem becomes covering `[0, T]` by intervals,
//! solved greedily by always taking the eligible agent whose reach ends
//! first.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::graph::GraphError;
use crate::instance::{AgentId, Instance, Variant};
use crate::rational::Rational;
use crate::schedule::{Decision, Leg, Schedule};
use crate::walk::Walk;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("the graph is not a tree")]
    NotATree,
    #[error("only the returning variant is solved on trees")]
    VariantUnsupported,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An agent projected onto the s–t axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineAgent {
    pub index: AgentId,
    pub position: Rational,
    pub reduced_budget: Rational,
}

impl LineAgent {
    pub fn new(index: AgentId, position: Rational, reduced_budget: Rational) -> Self {
        LineAgent { index, position, reduced_budget }
    }

    pub fn left(&self) -> Rational {
        &self.position - &self.reduced_budget.half()
    }

    pub fn right(&self) -> Rational {
        &self.position + &self.reduced_budget.half()
    }
}

/// Why an agent took no part in the line instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exclusion {
    /// Reaching the path and returning costs more than the budget.
    CannotReachPath { distance: Rational },
    /// The agent sits in a different component.
    Disconnected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineInstance {
    pub target: Rational,
    pub agents: Vec<LineAgent>,
    pub excluded: Vec<(AgentId, Exclusion)>,
    /// The s–t path used to map coordinates back to the tree.
    pub path: Option<Walk>,
}

impl LineInstance {
    /// A bare line instance without a tree behind it.
    pub fn new(target: Rational, agents: Vec<LineAgent>) -> Self {
        LineInstance { target, agents, excluded: Vec::new(), path: None }
    }
}

/// One chosen agent: it serves `interval` and carries the message from
/// `pickup` to `dropoff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverStep {
    pub agent: AgentId,
    pub interval: (Rational, Rational),
    pub pickup: Rational,
    pub dropoff: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSolution {
    pub steps: Vec<CoverStep>,
    /// Cursor positions `s_1 = 0, s_2, ...`.
    pub cursor: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverOutcome {
    Feasible(CoverSolution),
    /// No agent can extend the covered prefix `[0, reached]`.
    Infeasible { reached: Rational },
}

pub fn project_to_line(inst: &Instance) -> Result<LineInstance, TreeError> {
    if inst.variant() != Variant::Returning {
        return Err(TreeError::VariantUnsupported);
    }
    let g = inst.graph();
    if !g.is_tree() {
        return Err(TreeError::NotATree);
    }
    let path = g.shortest_walk(inst.source(), inst.target())?;
    let total = path.length().clone();
    let from_s = g.distances_from(inst.source());
    let from_t = g.distances_from(inst.target());

    let mut agents = Vec::new();
    let mut excluded = Vec::new();
    for (index, a) in inst.agents().iter().enumerate() {
        let (Some(ds), Some(dt)) = (from_s.to_point(g, &a.start), from_t.to_point(g, &a.start)) else {
            excluded.push((index, Exclusion::Disconnected));
            continue;
        };
        // Distances to the path and along it, from the three-point metric.
        let distance = (&(&ds + &dt) - &total).half();
        let position = (&(&ds + &total) - &dt).half();
        let reduced_budget = &a.budget - &(&distance + &distance);
        if reduced_budget.is_negative() {
            excluded.push((index, Exclusion::CannotReachPath { distance }));
        } else {
            agents.push(LineAgent { index, position, reduced_budget });
        }
    }
    Ok(LineInstance { target: total, agents, excluded, path: Some(path) })
}

/// Covers `[0, target]`, opening intervals left to right. Ties on the right
/// end go to the smaller agent index.
pub fn greedy_cover(line: &LineInstance) -> CoverOutcome {
    let target = &line.target;
    let mut cursor = Rational::ZERO;
    let mut trace = alloc::vec![cursor.clone()];
    let mut steps = Vec::new();
    if !target.is_positive() {
        return CoverOutcome::Feasible(CoverSolution { steps, cursor: trace });
    }

    let mut by_left: Vec<(Rational, usize)> = line.agents.iter().map(LineAgent::left).zip(0..).collect();
    by_left.sort_unstable();
    let mut next_to_open = 0;
    let mut heap: BinaryHeap<Reverse<(Rational, AgentId, usize)>> = BinaryHeap::new();

    while cursor < *target {
        while next_to_open < by_left.len() && by_left[next_to_open].0 <= cursor {
            let i = by_left[next_to_open].1;
            let a = &line.agents[i];
            heap.push(Reverse((a.right(), a.index, i)));
            next_to_open += 1;
        }
        // Agents whose reach ends at or before the cursor never become
        // eligible again.
        while heap.peek().is_some_and(|Reverse((r, _, _))| *r <= cursor) {
            heap.pop();
        }
        let Some(Reverse((right, _, i))) = heap.pop() else {
            return CoverOutcome::Infeasible { reached: cursor };
        };
        let a = &line.agents[i];
        let half = a.reduced_budget.half();
        let next = right.min_of(&cursor + &half);
        let dropoff = next.clone().min_of(target.clone());
        steps.push(CoverStep {
            agent: a.index,
            interval: (&next - &half, next.clone()),
            pickup: cursor,
            dropoff,
        });
        cursor = next;
        trace.push(cursor.clone());
    }
    CoverOutcome::Feasible(CoverSolution { steps, cursor: trace })
}

/// Exact decision for returning instances on trees; feasible schedules use
/// every agent within its original budget.
pub fn solve_tree(inst: &Instance) -> Result<Decision, TreeError> {
    let line = project_to_line(inst)?;
    if inst.source() == inst.target() {
        return Ok(Decision::Feasible(Schedule::default()));
    }
    let path = line.path.as_ref().expect("projection keeps the path");
    match greedy_cover(&line) {
        CoverOutcome::Infeasible { .. } => Ok(Decision::Infeasible),
        CoverOutcome::Feasible(cover) => {
            let mut legs = Vec::with_capacity(cover.steps.len());
            for step in &cover.steps {
                legs.push(Leg {
                    agent: step.agent,
                    pickup: path.point_at(&step.pickup)?,
                    dropoff: path.point_at(&step.dropoff)?,
                });
            }
            debug_assert_eq!(legs.last().map(|l| &l.dropoff), Some(inst.target()));
            Ok(Decision::Feasible(Schedule::new(legs)))
        }
    }
}
