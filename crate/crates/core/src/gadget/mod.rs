//! Delivery instances compiled from CNF formulas.
//!
//! Each variable `i` owns two parallel paths from `v_i` to `v_{i+1}`;
//! routing the message along the true path sets the variable to true. A
//! path alternates short gaps of width `zeta` with separating segments
//! (single tubes in the basic gadget, chains of tubes in the augmented
//! one). The gap at the start of a path is bridged by the variable agent
//! parked at `v_i`, every later gap by a clause agent that walks over from
//! its clause node. A literal node sits on the path that the literal
//! falsifies, so the route only meets gaps of false literals.

mod build;
mod cnf;
mod tube;
mod uniform;
mod witness;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::graph::{EdgeId, Point, VertexId};
use crate::instance::{AgentId, Instance, Variant};
use crate::rational::{q, Rational};

pub use build::{build_augmented_gadget, build_basic_gadget};
pub use cnf::{Cnf, CnfError, Literal};
pub use tube::{make_chain, make_delta_tube, Chain, ChainReport, Tube, TubeAgent, TubeReport};
pub use uniform::uniformize_budgets;
pub use witness::{assignment_from_schedule, schedule_from_assignment};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GadgetError {
    #[error("malformed CNF: {0}")]
    MalformedCnf(#[from] CnfError),
    #[error("epsilon {epsilon} is outside the open interval (0, {limit})")]
    EpsilonOutOfRange { epsilon: Rational, limit: Rational },
    #[error("a chain needs 0 < delta < length, got delta {delta} and length {length}")]
    ChainParameters { length: Rational, delta: Rational },
    #[error("assignment has {got} values, the formula has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("clause {0} has no true literal")]
    UnsatisfiedClause(usize),
    #[error("schedule touches both paths of variable {0}")]
    AmbiguousRoute(usize),
    #[error("schedule touches neither path of variable {0}")]
    UnroutedVariable(usize),
    #[error("common budget {budget} is below the largest agent budget {max}")]
    BudgetTooSmall { budget: Rational, max: Rational },
    #[error("build-time check failed: {0}")]
    CheckFailed(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetParams {
    pub zeta: Rational,
    pub delta: Rational,
    /// Minimum chain length; only the augmented gadget uses chains.
    pub chain_length: Option<Rational>,
    pub epsilon: Option<Rational>,
    pub variant: Variant,
}

impl GadgetParams {
    /// `zeta = 1/8`, `delta = 4 zeta / 3`.
    pub fn basic(variant: Variant) -> Self {
        let zeta = q(1, 8);
        let delta = &zeta * &q(4, 3);
        GadgetParams { zeta, delta, chain_length: None, epsilon: None, variant }
    }

    /// `zeta = eps / (6 - eps)`, `delta = zeta / 9`, chains of length 9.
    /// Returning needs `0 < eps < 1`, Non-Returning `0 < eps < 2`.
    pub fn augmented(epsilon: &Rational, variant: Variant) -> Result<Self, GadgetError> {
        let limit = match variant {
            Variant::Returning => Rational::ONE,
            Variant::NonReturning => Rational::from_int(2),
        };
        if !epsilon.is_positive() || *epsilon >= limit {
            return Err(GadgetError::EpsilonOutOfRange { epsilon: epsilon.clone(), limit });
        }
        let zeta = augmented_zeta(epsilon);
        let delta = &zeta * &q(1, 9);
        Ok(GadgetParams {
            zeta,
            delta,
            chain_length: Some(Rational::from_int(9)),
            epsilon: Some(epsilon.clone()),
            variant,
        })
    }

    /// `2 zeta` (Returning) or `zeta`.
    pub fn variable_budget(&self) -> Rational {
        match self.variant {
            Variant::Returning => &self.zeta + &self.zeta,
            Variant::NonReturning => self.zeta.clone(),
        }
    }

    /// `2 (1 + zeta)` (Returning) or `1 + zeta`.
    pub fn clause_budget(&self) -> Rational {
        let one = &Rational::ONE + &self.zeta;
        match self.variant {
            Variant::Returning => &one + &one,
            Variant::NonReturning => one,
        }
    }

    /// Augmentation factor the instance is designed to withstand:
    /// `2 - eps` (Returning) or `3 - eps`.
    pub fn gamma(&self) -> Option<Rational> {
        let eps = self.epsilon.as_ref()?;
        let base = match self.variant {
            Variant::Returning => Rational::from_int(2),
            Variant::NonReturning => Rational::from_int(3),
        };
        Some(&base - eps)
    }
}

pub fn augmented_zeta(epsilon: &Rational) -> Rational {
    epsilon / &(&Rational::from_int(6) - epsilon)
}

/// A claimed strict inequality `lhs < rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub name: &'static str,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl Inequality {
    pub fn holds(&self) -> bool {
        self.lhs < self.rhs
    }
}

/// Inequalities behind the basic gadget.
pub fn basic_inequalities(variant: Variant) -> Vec<Inequality> {
    let p = GadgetParams::basic(variant);
    let one = Rational::ONE;
    let crossing = match variant {
        // Both clause edges walked there and back, minus the zeta any other
        // agent can contribute on each.
        Variant::Returning => Inequality {
            name: "clause agent cannot carry the message over its clause node",
            lhs: p.clause_budget(),
            rhs: &Rational::from_int(4) * &(&one - &p.zeta),
        },
        Variant::NonReturning => Inequality {
            name: "clause agent cannot carry the message over its clause node",
            lhs: p.clause_budget(),
            rhs: &Rational::from_int(3) * &(&one - &p.zeta),
        },
    };
    vec![
        crossing,
        Inequality { name: "separating agents cannot reach the middle of a gap", lhs: &p.delta * &q(1, 3), rhs: p.zeta.half() },
        Inequality { name: "variable and clause agents cannot cross a tube", lhs: p.zeta.clone(), rhs: p.delta.clone() },
    ]
}

/// Inequalities behind the augmented gadget at `epsilon`, evaluated with
/// the augmentation factor `2 - eps` (Returning) or `3 - eps`. Only needs
/// `0 < eps < 6`, so it can be evaluated at the range boundaries too.
pub fn augmented_inequalities(epsilon: &Rational, variant: Variant) -> Vec<Inequality> {
    let zeta = augmented_zeta(epsilon);
    let one = Rational::ONE;
    let three = Rational::from_int(3);
    let margin = &one - &(&zeta / &three);
    let delta = &zeta * &q(1, 9);
    let (gamma, budget, need) = match variant {
        Variant::Returning => {
            let b = &Rational::from_int(2) * &(&one + &zeta);
            (&Rational::from_int(2) - epsilon, b, &Rational::from_int(4) * &margin)
        }
        Variant::NonReturning => (&three - epsilon, &one + &zeta, &three * &margin),
    };
    let augmented = &gamma * &budget;
    vec![
        Inequality { name: "augmented clause agent cannot carry the message over its clause node", lhs: augmented.clone(), rhs: need },
        Inequality { name: "chain agents cannot reach the middle of a gap", lhs: &three * &delta, rhs: zeta.half() },
        Inequality { name: "chains are over twice as long as any augmented reach", lhs: &Rational::from_int(2) * &augmented, rhs: Rational::from_int(9) },
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Variable(usize),
    Clause { clause: usize, node: VertexId },
    /// Index into [`GadgetInstance::tubes`].
    Separating(usize),
}

/// One tube as embedded in a gadget: on `edge`, entered at `from`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TubeSite {
    pub edge: EdgeId,
    pub from: VertexId,
    pub to: VertexId,
    pub agents: [AgentId; 2],
    pub handover: Rational,
    /// Index of the separator (single tube or whole chain) it belongs to.
    pub separator: usize,
}

/// Who carries the message over a gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Owner {
    Variable(usize),
    /// Any clause agent adjacent to this literal, chosen per assignment.
    Literal { clause: usize, slot: usize },
    Agent(AgentId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Piece {
    Gap { from: VertexId, to: VertexId, owner: Owner },
    Separator(usize),
    /// Two alternative routes; `clause` and `slot` name the literal whose
    /// assigned agent picks the arc.
    Arcs { clause: usize, slot: usize, arcs: [Vec<Piece>; 2] },
}

/// One of the two paths of a variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    /// Vertices from `v_i` to `v_{i+1}`; where the path forks into two arcs,
    /// the inner arc's vertices come first.
    pub points: Vec<Point>,
    pub edges: Vec<EdgeId>,
    pub(crate) pieces: Vec<Piece>,
}

impl Path {
    /// Whether `p` lies on the path strictly between its end vertices.
    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Vertex(_) => self.points[1..self.points.len() - 1].contains(p),
            Point::OnEdge { edge, .. } => self.edges.contains(edge),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub instance: Instance,
    pub cnf: Cnf,
    pub params: GadgetParams,
    pub roles: Vec<Role>,
    /// Per variable, `[false path, true path]`.
    pub paths: Vec<[Path; 2]>,
    /// `(variable, clause)` to the literal node where the clause attaches.
    pub literal_nodes: BTreeMap<(usize, usize), Point>,
    pub tubes: Vec<TubeSite>,
    /// Tube ranges of each separator.
    pub separators: Vec<Range<usize>>,
    /// Top block index of every chain, when chains are used.
    pub chain_top: Option<u32>,
    /// Per clause, the agents on its clause nodes in literal order.
    pub clause_agents: Vec<Vec<AgentId>>,
}

impl GadgetInstance {
    pub fn path(&self, var: usize, value: bool) -> &Path {
        &self.paths[var][value as usize]
    }

    /// For every separating agent, how far it can get beyond its own
    /// separator with budgets multiplied by `gamma`.
    pub fn separating_excursions(&self, gamma: &Rational) -> Vec<(AgentId, Rational)> {
        let g = self.instance.graph();
        let variant = self.instance.variant();
        let mut out = Vec::new();
        for range in &self.separators {
            let first = &self.tubes[range.start];
            let last = &self.tubes[range.end - 1];
            let ends = [Point::Vertex(first.from), Point::Vertex(last.to)];
            let own: Vec<EdgeId> = self.tubes[range.clone()].iter().map(|t| t.edge).collect();
            for site in &self.tubes[range.clone()] {
                for &a in &site.agents {
                    let agent = &self.instance.agents()[a];
                    let budget = &agent.budget * gamma;
                    let e = tube::excursion(g, variant, &agent.start, &budget, &ends, |e| own.contains(&e));
                    out.push((a, e));
                }
            }
        }
        out
    }
}
