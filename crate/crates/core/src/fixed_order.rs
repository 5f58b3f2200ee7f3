//! Exact delivery for a fixed agent order, exact solving by trying orders,
//! and a discretized brute-force oracle.
//!
//! The dynamic program keeps a set of marks: every place where the message
//! can lie after the agents processed so far. A mark is a vertex, or on an
//! edge with exactly one marked endpoint, the reachable point farthest from
//! that endpoint. Any other drop-off place is dominated by one of these,
//! because agents start at vertices of the working graph and must enter an
//! edge through an endpoint.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{EdgeId, Graph, Metric, Point, VertexId};
use crate::instance::{AgentId, Instance, Variant};
use crate::rational::Rational;
use crate::reach::ReachSet;
use crate::schedule::{Decision, Leg, Schedule};
use crate::subdivide::Subdivision;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("agent {0} does not exist")]
    UnknownAgent(AgentId),
    #[error("agent {0} appears twice in the order")]
    DuplicateAgent(AgentId),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("{agents} agents exceed the enumeration limit of {limit}")]
    TooManyAgents { agents: usize, limit: usize },
}

/// Where a mark came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Via {
    Source,
    Step(usize),
}

/// One agent picking the message up at `pickup`.
#[derive(Debug, Clone)]
struct Step {
    agent: AgentId,
    pickup: Point,
    parent: Via,
}

/// Interior mark at `distance` from the marked endpoint `from`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMark {
    pub from: VertexId,
    pub distance: Rational,
}

/// Candidate message locations, on the working graph of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkSet {
    vertices: Vec<Option<Via>>,
    edges: Vec<Option<(EdgeMark, Via)>>,
}

impl MarkSet {
    fn new(g: &Graph, source: VertexId) -> Self {
        let mut vertices = vec![None; g.vertex_count()];
        vertices[source] = Some(Via::Source);
        MarkSet { vertices, edges: vec![None; g.edge_count()] }
    }

    pub fn is_marked(&self, v: VertexId) -> bool {
        self.vertices[v].is_some()
    }

    pub fn edge_mark(&self, e: EdgeId) -> Option<&EdgeMark> {
        self.edges[e].as_ref().map(|(m, _)| m)
    }

    pub fn len(&self) -> usize {
        self.vertices.iter().filter(|v| v.is_some()).count() + self.edges.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Marked locations, vertices first.
    pub fn points(&self, g: &Graph) -> Vec<Point> {
        self.entries(g).into_iter().map(|(p, _)| p).collect()
    }

    fn entries(&self, g: &Graph) -> Vec<(Point, Via)> {
        let mut out: Vec<(Point, Via)> = self
            .vertices
            .iter()
            .enumerate()
            .filter_map(|(v, via)| via.map(|via| (Point::Vertex(v), via)))
            .collect();
        for (e, mark) in self.edges.iter().enumerate() {
            if let Some((m, via)) = mark {
                let p = g.point_from_endpoint(e, m.from, m.distance.clone()).expect("mark lies on its edge");
                out.push((p, *via));
            }
        }
        out
    }

    /// Whether `p` lies in the region the marks dominate: a marked vertex, an
    /// edge with both endpoints marked, or the stretch between a marked
    /// endpoint and its interior mark.
    pub fn covers(&self, g: &Graph, p: &Point) -> bool {
        match p {
            Point::Vertex(v) => self.is_marked(*v),
            Point::OnEdge { edge, offset } => {
                let e = g.edge(*edge);
                if self.is_marked(e.lo) && self.is_marked(e.hi) {
                    return true;
                }
                match self.edge_mark(*edge) {
                    Some(m) if m.from == e.lo => *offset <= m.distance,
                    Some(m) => &e.weight - offset <= m.distance,
                    None => false,
                }
            }
        }
    }
}

/// Decision plus the mark sets after every processed agent, all on
/// `graph`, the instance graph subdivided at the source, target and agents.
#[derive(Debug, Clone)]
pub struct FixedOrderTrace {
    pub decision: Decision,
    pub graph: Graph,
    pub marks: Vec<MarkSet>,
}

impl FixedOrderTrace {
    /// `n + m` of the working graph, the most marks there can be.
    pub fn mark_bound(&self) -> usize {
        self.graph.vertex_count() + self.graph.edge_count()
    }
}

struct Engine<'a> {
    inst: &'a Instance,
    sub: &'a Subdivision,
    metric: Metric<'a>,
    starts: Vec<Point>,
    source: VertexId,
    target: VertexId,
}

fn key_points(inst: &Instance) -> Vec<Point> {
    let mut pts = vec![inst.source().clone(), inst.target().clone()];
    pts.extend(inst.agents().iter().map(|a| a.start.clone()));
    pts
}

impl<'a> Engine<'a> {
    fn new(inst: &'a Instance, sub: &'a Subdivision) -> Self {
        let vertex = |p: &Point| sub.refine(p).vertex().expect("key points are subdivision vertices");
        Engine {
            inst,
            sub,
            metric: Metric::new(sub.graph()),
            starts: inst.agents().iter().map(|a| Point::Vertex(vertex(&a.start))).collect(),
            source: vertex(inst.source()),
            target: vertex(inst.target()),
        }
    }

    fn graph(&self) -> &'a Graph {
        self.sub.graph()
    }

    fn initial(&self) -> MarkSet {
        MarkSet::new(self.graph(), self.source)
    }

    fn done(&self, marks: &MarkSet) -> bool {
        marks.is_marked(self.target)
    }

    /// Marks after `agent` takes its turn.
    fn advance(&self, marks: &MarkSet, steps: &mut Vec<Step>, agent: AgentId) -> MarkSet {
        let g = self.graph();
        let budget = &self.inst.agents()[agent].budget;
        let from_start = self.metric.from_point(&self.starts[agent]);
        let mut next = marks.clone();
        // Per edge, the farthest reach from the lo side (largest offset) and
        // from the hi side (smallest offset), with the step achieving it.
        let mut from_lo: Vec<Option<(Rational, usize)>> = vec![None; g.edge_count()];
        let mut from_hi: Vec<Option<(Rational, usize)>> = vec![None; g.edge_count()];

        for (pickup, via) in marks.entries(g) {
            let Some(approach) = from_start.to_point(g, &pickup) else { continue };
            let at_pickup = self.metric.from_point(&pickup);
            let region = match self.inst.variant() {
                Variant::Returning => ReachSet::from_maps(g, &from_start, &at_pickup, budget),
                Variant::NonReturning => {
                    let left = budget - &approach;
                    if left.is_negative() {
                        continue;
                    }
                    ReachSet::from_maps(g, &at_pickup, &at_pickup, &(&left + &left))
                }
            };
            let Ok(region) = region else { continue };
            let id = steps.len();
            steps.push(Step { agent, pickup, parent: via });
            for v in region.vertices() {
                if next.vertices[v].is_none() {
                    next.vertices[v] = Some(Via::Step(id));
                }
            }
            for e in 0..g.edge_count() {
                let intervals = region.edge_intervals(e);
                let (Some(first), Some(last)) = (intervals.first(), intervals.last()) else { continue };
                if from_lo[e].as_ref().is_none_or(|(d, _)| last.hi > *d) {
                    from_lo[e] = Some((last.hi.clone(), id));
                }
                if from_hi[e].as_ref().is_none_or(|(d, _)| first.lo < *d) {
                    from_hi[e] = Some((first.lo.clone(), id));
                }
            }
        }

        for (e, edge) in g.edges().iter().enumerate() {
            let lo = next.is_marked(edge.lo);
            let hi = next.is_marked(edge.hi);
            if lo == hi {
                debug_assert!(lo || next.edges[e].is_none());
                next.edges[e] = None;
                continue;
            }
            let (from, reach) = if lo {
                (edge.lo, from_lo[e].take())
            } else {
                (edge.hi, from_hi[e].take().map(|(off, id)| (&edge.weight - &off, id)))
            };
            let Some((distance, id)) = reach else { continue };
            if !distance.is_positive() || distance >= edge.weight {
                continue;
            }
            let better = match &next.edges[e] {
                Some((m, _)) if m.from == from => distance > m.distance,
                _ => true,
            };
            if better {
                next.edges[e] = Some((EdgeMark { from, distance }, Via::Step(id)));
            }
        }
        next
    }

    fn schedule(&self, marks: &MarkSet, steps: &[Step]) -> Schedule {
        let mut legs = Vec::new();
        let mut dropoff = Point::Vertex(self.target);
        let mut via = marks.vertices[self.target].expect("target is marked");
        while let Via::Step(id) = via {
            let step = &steps[id];
            legs.push(Leg {
                agent: step.agent,
                pickup: self.sub.coarsen(&step.pickup),
                dropoff: self.sub.coarsen(&dropoff),
            });
            dropoff = step.pickup.clone();
            via = step.parent;
        }
        legs.reverse();
        Schedule::new(legs)
    }
}

fn check_order(inst: &Instance, order: &[AgentId]) -> Result<(), OrderError> {
    let mut seen = vec![false; inst.agents().len()];
    for &a in order {
        match seen.get_mut(a) {
            None => return Err(OrderError::UnknownAgent(a)),
            Some(true) => return Err(OrderError::DuplicateAgent(a)),
            Some(flag) => *flag = true,
        }
    }
    Ok(())
}

/// Exact decision when agents act in `order` (each agent may also stay
/// idle). Feasible schedules respect every original budget.
pub fn solve_fixed_order(inst: &Instance, order: &[AgentId]) -> Result<Decision, OrderError> {
    Ok(solve_fixed_order_traced(inst, order)?.decision)
}

/// Like [`solve_fixed_order`], also returning the mark sets after each agent.
pub fn solve_fixed_order_traced(inst: &Instance, order: &[AgentId]) -> Result<FixedOrderTrace, OrderError> {
    check_order(inst, order)?;
    let sub = Subdivision::new(inst.graph(), &key_points(inst));
    let engine = Engine::new(inst, &sub);
    let mut steps = Vec::new();
    let mut marks = vec![engine.initial()];
    for &agent in order {
        let current = marks.last().expect("nonempty");
        if engine.done(current) {
            break;
        }
        let next = engine.advance(current, &mut steps, agent);
        marks.push(next);
    }
    let last = marks.last().expect("nonempty");
    let decision = if engine.done(last) {
        Decision::Feasible(engine.schedule(last, &steps))
    } else {
        Decision::Infeasible
    };
    Ok(FixedOrderTrace { decision, graph: sub.graph().clone(), marks })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactLimits {
    pub max_agents: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits { max_agents: 6 }
    }
}

/// Exact decision over all agent orders, searched in lexicographic order.
/// An agent that adds no marks at some position is not tried there, since
/// any schedule from that branch is also found with the agent placed later.
pub fn solve_exact(inst: &Instance, limits: ExactLimits) -> Result<Decision, ExactError> {
    let k = inst.agents().len();
    if k > limits.max_agents {
        return Err(ExactError::TooManyAgents { agents: k, limit: limits.max_agents });
    }
    let sub = Subdivision::new(inst.graph(), &key_points(inst));
    let engine = Engine::new(inst, &sub);
    let mut steps = Vec::new();
    let mut used = vec![false; k];
    let start = engine.initial();
    Ok(match search(&engine, &start, &mut steps, &mut used) {
        Some(s) => Decision::Feasible(s),
        None => Decision::Infeasible,
    })
}

fn search(engine: &Engine<'_>, marks: &MarkSet, steps: &mut Vec<Step>, used: &mut [bool]) -> Option<Schedule> {
    if engine.done(marks) {
        return Some(engine.schedule(marks, steps));
    }
    for agent in 0..used.len() {
        if used[agent] {
            continue;
        }
        let mark = steps.len();
        let next = engine.advance(marks, steps, agent);
        if next != *marks {
            used[agent] = true;
            let found = search(engine, &next, steps, used);
            used[agent] = false;
            if found.is_some() {
                return found;
            }
        }
        steps.truncate(mark);
    }
    None
}

/// Verdict of the grid oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridOutcome {
    /// A schedule with all handovers on grid points exists.
    Feasible,
    /// Not even budgets raised by `2 * step` admit a grid schedule, so no
    /// schedule exists at all.
    Infeasible,
    /// Undecided: only the raised budgets admit a grid schedule.
    Boundary,
}

/// Exhaustive search over handovers at vertices and at multiples of `step`
/// along every edge, for tiny instances.
///
/// Moving a handover to the nearest grid point changes an agent's cost by at
/// most `2 * step`, which is what separates `Infeasible` from `Boundary`.
pub fn brute_force_grid(inst: &Instance, order: &[AgentId], step: &Rational) -> Result<GridOutcome, OrderError> {
    check_order(inst, order)?;
    assert!(step.is_positive(), "grid step must be positive");
    let g = inst.graph();
    let mut points = key_points(inst);
    for (e, edge) in g.edges().iter().enumerate() {
        let mut off = step.clone();
        while off < edge.weight {
            points.push(Point::OnEdge { edge: e, offset: off.clone() });
            off += step;
        }
    }
    let sub = Subdivision::new(g, &points);
    let grid = sub.graph();
    let vertex = |p: &Point| sub.refine(p).vertex().expect("grid point");
    let source = vertex(inst.source());
    let target = vertex(inst.target());

    let slack = step + step;
    let run = |extra: &Rational| -> bool {
        let mut held = vec![false; grid.vertex_count()];
        held[source] = true;
        for &agent in order {
            if held[target] {
                break;
            }
            let a = &inst.agents()[agent];
            let budget = &a.budget + extra;
            let from_start = grid.dijkstra([(vertex(&a.start), Rational::ZERO)]);
            let seeds = (0..grid.vertex_count())
                .filter(|&v| held[v])
                .filter_map(|v| from_start[v].clone().map(|d| (v, d)));
            let carried = grid.dijkstra(seeds);
            let mut next = held.clone();
            for x in 0..grid.vertex_count() {
                let cost = match (inst.variant(), &carried[x], &from_start[x]) {
                    (Variant::Returning, Some(c), Some(back)) => c + back,
                    (Variant::NonReturning, Some(c), _) => c.clone(),
                    _ => continue,
                };
                if cost <= budget {
                    next[x] = true;
                }
            }
            held = next;
        }
        held[target]
    };

    Ok(if run(&Rational::ZERO) {
        GridOutcome::Feasible
    } else if run(&slack) {
        GridOutcome::Boundary
    } else {
        GridOutcome::Infeasible
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Agent;
    use crate::rational::q;
    use crate::schedule::validate;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn single_edge(b1: Rational, b2: Rational, variant: Variant) -> Instance {
        let g = Graph::new(2, [(0, 1, r(4))]).unwrap();
        let agents = vec![
            Agent { start: Point::Vertex(0), budget: b1 },
            Agent { start: Point::Vertex(1), budget: b2 },
        ];
        Instance::new(g, Point::Vertex(0), Point::Vertex(1), agents, variant).unwrap()
    }

    #[test]
    fn order_dependence_on_one_edge() {
        let inst = single_edge(r(4), r(4), Variant::Returning);
        let Decision::Feasible(s) = solve_fixed_order(&inst, &[0, 1]).unwrap() else { panic!() };
        assert_eq!(
            s.legs,
            vec![
                Leg { agent: 0, pickup: Point::Vertex(0), dropoff: Point::OnEdge { edge: 0, offset: r(2) } },
                Leg { agent: 1, pickup: Point::OnEdge { edge: 0, offset: r(2) }, dropoff: Point::Vertex(1) },
            ]
        );
        let report = validate(&inst, &s, &r(1)).unwrap();
        assert_eq!(report.leg_costs, vec![Some(r(4)), Some(r(4))]);
        assert_eq!(solve_fixed_order(&inst, &[1, 0]).unwrap(), Decision::Infeasible);
        assert!(solve_exact(&inst, ExactLimits::default()).unwrap().is_feasible());
    }

    #[test]
    fn marks_after_first_agent() {
        let inst = single_edge(r(4), r(4), Variant::Returning);
        let trace = solve_fixed_order_traced(&inst, &[0, 1]).unwrap();
        let after = &trace.marks[1];
        assert_eq!(after.edge_mark(0), Some(&EdgeMark { from: 0, distance: r(2) }));
        assert_eq!(after.len(), 2);
        for m in &trace.marks {
            assert!(m.len() <= trace.mark_bound());
        }
    }

    #[test]
    fn non_returning_agents_go_further() {
        let inst = single_edge(r(3), r(2), Variant::NonReturning);
        assert!(solve_fixed_order(&inst, &[0, 1]).unwrap().is_feasible());
        assert!(!solve_fixed_order(&inst.with_variant(Variant::Returning), &[0, 1]).unwrap().is_feasible());
        let inst = single_edge(r(3), q(19, 10), Variant::NonReturning);
        assert_eq!(solve_fixed_order(&inst, &[0, 1]).unwrap(), Decision::Infeasible);
    }

    #[test]
    fn bad_orders() {
        let inst = single_edge(r(4), r(4), Variant::Returning);
        assert_eq!(solve_fixed_order(&inst, &[0, 0]), Err(OrderError::DuplicateAgent(0)));
        assert_eq!(solve_fixed_order(&inst, &[2]), Err(OrderError::UnknownAgent(2)));
    }

    #[test]
    fn exact_without_agents() {
        let g = Graph::new(2, [(0, 1, r(1))]).unwrap();
        let inst = Instance::new(g, Point::Vertex(0), Point::Vertex(1), vec![], Variant::Returning).unwrap();
        assert_eq!(solve_exact(&inst, ExactLimits::default()).unwrap(), Decision::Infeasible);
        assert_eq!(
            solve_exact(&single_edge(r(4), r(4), Variant::Returning), ExactLimits { max_agents: 1 }),
            Err(ExactError::TooManyAgents { agents: 2, limit: 1 })
        );
    }

    #[test]
    fn grid_oracle_verdicts() {
        let inst = single_edge(r(4), r(4), Variant::Returning);
        assert_eq!(brute_force_grid(&inst, &[0, 1], &q(1, 2)).unwrap(), GridOutcome::Feasible);
        assert_eq!(brute_force_grid(&inst, &[1, 0], &q(1, 2)).unwrap(), GridOutcome::Infeasible);
        let off_grid = single_edge(r(4) - q(1, 1000), r(4) + q(1, 1000), Variant::Returning);
        assert!(solve_fixed_order(&off_grid, &[0, 1]).unwrap().is_feasible());
        assert_eq!(brute_force_grid(&off_grid, &[0, 1], &q(1, 2)).unwrap(), GridOutcome::Boundary);
    }

    #[test]
    fn interior_start_and_cycle() {
        // 4-cycle with an agent in the middle of an edge
        let g = Graph::new(4, [(0, 1, r(2)), (1, 2, r(2)), (2, 3, r(2)), (3, 0, r(2))]).unwrap();
        let agents = vec![
            Agent { start: Point::OnEdge { edge: 0, offset: r(1) }, budget: r(6) },
            Agent { start: Point::Vertex(2), budget: r(2) },
        ];
        let inst = Instance::new(g, Point::Vertex(0), Point::Vertex(2), agents, Variant::Returning).unwrap();
        let Decision::Feasible(s) = solve_exact(&inst, ExactLimits::default()).unwrap() else { panic!() };
        assert!(validate(&inst, &s, &r(1)).unwrap().ok);
    }
}
