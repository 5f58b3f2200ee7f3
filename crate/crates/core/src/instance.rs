//! Delivery instances: a graph, a message source and target, and agents.

use alloc::vec::Vec;

use crate::graph::{Graph, GraphError, Point};
use crate::rational::Rational;

pub type AgentId = usize;

/// Whether agents must end where they started.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Returning,
    NonReturning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agent {
    pub start: Point,
    pub budget: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("agent {agent} has negative budget {budget}")]
    NegativeBudget { agent: AgentId, budget: Rational },
    #[error("invalid location: {0}")]
    Point(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: Graph,
    source: Point,
    target: Point,
    agents: Vec<Agent>,
    variant: Variant,
}

impl Instance {
    pub fn new(
        graph: Graph,
        source: Point,
        target: Point,
        agents: Vec<Agent>,
        variant: Variant,
    ) -> Result<Self, InstanceError> {
        graph.check_point(&source)?;
        graph.check_point(&target)?;
        for (id, a) in agents.iter().enumerate() {
            graph.check_point(&a.start)?;
            if a.budget.is_negative() {
                return Err(InstanceError::NegativeBudget { agent: id, budget: a.budget.clone() });
            }
        }
        Ok(Instance { graph, source, target, agents, variant })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn source(&self) -> &Point {
        &self.source
    }

    pub fn target(&self) -> &Point {
        &self.target
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent(&self, id: AgentId) -> Option<&Agent> {
        self.agents.get(id)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// The same instance under the other cost model.
    pub fn with_variant(&self, variant: Variant) -> Instance {
        Instance { variant, ..self.clone() }
    }

    /// Every weight and budget multiplied by `factor > 0`.
    pub fn scaled(&self, factor: &Rational) -> Instance {
        assert!(factor.is_positive(), "scale factor must be positive");
        let graph = Graph::new(
            self.graph.vertex_count(),
            self.graph.edges().iter().map(|e| (e.lo, e.hi, &e.weight * factor)),
        )
        .expect("scaling keeps weights positive");
        let scale = |p: &Point| match p {
            Point::Vertex(v) => Point::Vertex(*v),
            Point::OnEdge { edge, offset } => Point::OnEdge { edge: *edge, offset: offset * factor },
        };
        Instance {
            source: scale(&self.source),
            target: scale(&self.target),
            agents: self
                .agents
                .iter()
                .map(|a| Agent { start: scale(&a.start), budget: &a.budget * factor })
                .collect(),
            graph,
            variant: self.variant,
        }
    }
}
