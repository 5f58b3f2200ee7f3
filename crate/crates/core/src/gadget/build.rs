use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use super::tube::{make_chain, make_delta_tube, Tube};
use super::{
    augmented_inequalities, basic_inequalities, Cnf, GadgetError, GadgetInstance, GadgetParams, Inequality, Owner, Path,
    Piece, Role, TubeSite,
};
use crate::graph::{EdgeId, Graph, Point, VertexId};
use crate::instance::{Agent, AgentId, Instance, Variant};
use crate::rational::{q, Rational};

/// `G(F)`: single tubes of width `4 zeta / 3` with `zeta = 1/8`.
pub fn build_basic_gadget(cnf: &Cnf, variant: Variant) -> Result<GadgetInstance, GadgetError> {
    let params = GadgetParams::basic(variant);
    require(&basic_inequalities(variant))?;
    let tube = make_delta_tube(&params.delta, variant);
    if !tube.certify(&params.delta).holds() {
        return Err(GadgetError::CheckFailed("tube properties"));
    }
    let gadget = Builder::new(params, vec![tube], false).finish(cnf, None);
    let limit = &gadget.params.delta * &q(1, 3);
    if gadget.separating_excursions(&Rational::ONE).iter().any(|(_, e)| *e > limit) {
        return Err(GadgetError::CheckFailed("separating agents stay within a third of a tube width"));
    }
    Ok(gadget)
}

/// `G'(F)`: every tube becomes a chain of length 9 built from tubes of
/// width `zeta / 9` with `zeta = eps / (6 - eps)`, and the gap after a
/// literal node shared by two clause nodes is split into two arcs so the
/// two clause agents cannot meet.
pub fn build_augmented_gadget(cnf: &Cnf, epsilon: &Rational, variant: Variant) -> Result<GadgetInstance, GadgetError> {
    let params = GadgetParams::augmented(epsilon, variant)?;
    require(&augmented_inequalities(epsilon, variant))?;
    let length = params.chain_length.clone().expect("augmented parameters carry a chain length");
    let chain = make_chain(&length, &params.delta, variant)?;
    if !chain.certify(&Rational::from_int(3)).holds() {
        return Err(GadgetError::CheckFailed("chain properties"));
    }
    let top = chain.top;
    Ok(Builder::new(params, chain.tubes, true).finish(cnf, Some(top)))
}

fn require(checks: &[Inequality]) -> Result<(), GadgetError> {
    match checks.iter().find(|c| !c.holds()) {
        Some(c) => Err(GadgetError::CheckFailed(c.name)),
        None => Ok(()),
    }
}

enum Spot {
    Vertex(VertexId),
    Along { edge: EdgeId, from: VertexId, dist: Rational },
}

#[derive(Default)]
struct Trace {
    points: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

struct Builder {
    params: GadgetParams,
    separator: Vec<Tube>,
    arcs: bool,
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId, Rational)>,
    agents: Vec<(Spot, Rational)>,
    roles: Vec<Role>,
    tubes: Vec<TubeSite>,
    separators: Vec<Range<usize>>,
}

impl Builder {
    fn new(params: GadgetParams, separator: Vec<Tube>, arcs: bool) -> Self {
        Builder {
            params,
            separator,
            arcs,
            vertex_count: 0,
            edges: Vec::new(),
            agents: Vec::new(),
            roles: Vec::new(),
            tubes: Vec::new(),
            separators: Vec::new(),
        }
    }

    fn vertex(&mut self) -> VertexId {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    fn edge(&mut self, u: VertexId, v: VertexId, w: Rational) -> EdgeId {
        self.edges.push((u, v, w));
        self.edges.len() - 1
    }

    fn agent(&mut self, spot: Spot, budget: Rational, role: Role) -> AgentId {
        self.agents.push((spot, budget));
        self.roles.push(role);
        self.agents.len() - 1
    }

    fn gap(&mut self, from: VertexId, to: VertexId, owner: Owner, trace: &mut Trace) -> Piece {
        let e = self.edge(from, to, self.params.zeta.clone());
        trace.edges.push(e);
        trace.points.push(to);
        Piece::Gap { from, to, owner }
    }

    fn separate(&mut self, from: VertexId, to: VertexId, trace: &mut Trace) -> Piece {
        let id = self.separators.len();
        let first = self.tubes.len();
        let template = core::mem::take(&mut self.separator);
        let mut u = from;
        for (k, tube) in template.iter().enumerate() {
            let w = if k + 1 == template.len() { to } else { self.vertex() };
            let edge = self.edge(u, w, tube.length.clone());
            let site = self.tubes.len();
            let agents = tube.agents.clone().map(|a| {
                self.agent(Spot::Along { edge, from: u, dist: a.offset }, a.budget, Role::Separating(site))
            });
            self.tubes.push(TubeSite { edge, from: u, to: w, agents, handover: tube.handover.clone(), separator: id });
            trace.edges.push(edge);
            trace.points.push(w);
            u = w;
        }
        self.separator = template;
        self.separators.push(first..self.tubes.len());
        Piece::Separator(id)
    }

    fn finish(mut self, cnf: &Cnf, chain_top: Option<u32>) -> GadgetInstance {
        let x = cnf.num_vars();
        self.vertex_count = x + 1;
        for i in 0..x {
            self.agent(Spot::Vertex(i), self.params.variable_budget(), Role::Variable(i));
        }
        let mut clause_nodes: Vec<Vec<VertexId>> = Vec::new();
        let mut clause_agents: Vec<Vec<AgentId>> = Vec::new();
        for (c, lits) in cnf.clauses().iter().enumerate() {
            let (mut nodes, mut agents) = (Vec::new(), Vec::new());
            for _ in 1..lits.len() {
                let v = self.vertex();
                nodes.push(v);
                agents.push(self.agent(Spot::Vertex(v), self.params.clause_budget(), Role::Clause { clause: c, node: v }));
            }
            clause_nodes.push(nodes);
            clause_agents.push(agents);
        }

        let mut literal_nodes = BTreeMap::new();
        let mut paths = Vec::with_capacity(x);
        for i in 0..x {
            let mut pair = Vec::with_capacity(2);
            for value in [false, true] {
                // A literal lives on the path that makes it false.
                let slots: Vec<(usize, usize, usize)> = cnf
                    .clauses()
                    .iter()
                    .enumerate()
                    .filter_map(|(c, lits)| {
                        let s = lits.iter().position(|l| l.var == i && l.positive != value)?;
                        Some((c, s, lits.len()))
                    })
                    .collect();
                let mut trace = Trace { points: vec![i], edges: Vec::new() };
                let mut pieces = Vec::new();
                let a = self.vertex();
                pieces.push(self.gap(i, a, Owner::Variable(i), &mut trace));
                let mut cur = a;
                for (c, s, len) in slots {
                    let l = self.vertex();
                    pieces.push(self.separate(cur, l, &mut trace));
                    literal_nodes.insert((i, c), Point::Vertex(l));
                    // Clause node `k` touches literals `k` and `k + 1`.
                    let adjacent: Vec<usize> = (0..len.saturating_sub(1)).filter(|&k| k == s || k + 1 == s).collect();
                    if self.arcs && adjacent.len() == 2 {
                        let one = Rational::ONE;
                        self.edge(clause_nodes[c][0], l, one.clone());
                        let y = self.vertex();
                        let m = self.vertex();
                        let inner = vec![
                            self.gap(l, m, Owner::Agent(clause_agents[c][0]), &mut trace),
                            self.separate(m, y, &mut trace),
                        ];
                        let k = self.vertex();
                        self.edge(clause_nodes[c][1], k, one);
                        let outer = vec![
                            self.separate(l, k, &mut trace),
                            self.gap(k, y, Owner::Agent(clause_agents[c][1]), &mut trace),
                        ];
                        pieces.push(Piece::Arcs { clause: c, slot: s, arcs: [inner, outer] });
                        cur = y;
                    } else {
                        for k in adjacent {
                            self.edge(clause_nodes[c][k], l, Rational::ONE);
                        }
                        let a = self.vertex();
                        pieces.push(self.gap(l, a, Owner::Literal { clause: c, slot: s }, &mut trace));
                        cur = a;
                    }
                }
                pieces.push(self.separate(cur, i + 1, &mut trace));
                let mut seen = BTreeMap::new();
                let points = trace
                    .points
                    .into_iter()
                    .filter(|v| seen.insert(*v, ()).is_none())
                    .map(Point::Vertex)
                    .collect();
                pair.push(Path { points, edges: trace.edges, pieces });
            }
            let t = pair.pop().expect("two paths");
            let f = pair.pop().expect("two paths");
            paths.push([f, t]);
        }

        let graph = Graph::new(self.vertex_count, self.edges).expect("gadget edges are valid");
        let agents = self
            .agents
            .into_iter()
            .map(|(spot, budget)| {
                let start = match spot {
                    Spot::Vertex(v) => Point::Vertex(v),
                    Spot::Along { edge, from, dist } => {
                        graph.point_from_endpoint(edge, from, dist).expect("agent inside its tube")
                    }
                };
                Agent { start, budget }
            })
            .collect();
        let instance = Instance::new(graph, Point::Vertex(0), Point::Vertex(x), agents, self.params.variant)
            .expect("gadget instance is valid");
        GadgetInstance {
            instance,
            cnf: cnf.clone(),
            params: self.params,
            roles: self.roles,
            paths,
            literal_nodes,
            tubes: self.tubes,
            separators: self.separators,
            chain_top,
            clause_agents,
        }
    }
}
