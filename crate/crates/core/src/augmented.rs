//! Resource-augmented solvers for returning delivery on general graphs.
//!
//! Both solvers search the intersection graph of agent reach sets. If the
//! source cannot be connected to the target there, no schedule exists even
//! with the original budgets; otherwise they return a schedule that may use
//! up to `gamma` times each budget.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{GraphError, Point};
use crate::instance::{AgentId, Instance, Variant};
use crate::rational::Rational;
use crate::reach::ReachSet;
use crate::schedule::{Leg, Schedule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AugmentedError {
    #[error("only the returning variant is supported")]
    VariantUnsupported,
    #[error("at least two agents are required")]
    NeedTwoAgents,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Pairwise intersections of reach sets, with a common point per edge.
#[derive(Debug, Clone)]
pub struct IntersectionGraph {
    witnesses: Vec<Vec<Option<Point>>>,
}

impl IntersectionGraph {
    pub fn new(sets: &[ReachSet]) -> Self {
        let n = sets.len();
        let mut witnesses = vec![vec![None; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let w = sets[i].intersect_witness(&sets[j]);
                witnesses[j][i] = w.clone();
                witnesses[i][j] = w;
            }
        }
        IntersectionGraph { witnesses }
    }

    pub fn node_count(&self) -> usize {
        self.witnesses.len()
    }

    pub fn witness(&self, i: usize, j: usize) -> Option<&Point> {
        self.witnesses[i][j].as_ref()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.witnesses[i].iter().enumerate().filter(|(_, w)| w.is_some()).map(|(j, _)| j)
    }

    /// Path from `from` to `to` with the fewest nodes, all intermediate
    /// nodes satisfying `allowed`; ties go to the lexicographically smallest
    /// node sequence.
    pub fn fewest_hops(&self, from: usize, to: usize, allowed: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
        if from == to {
            return Some(vec![from]);
        }
        let n = self.node_count();
        let mut dist = vec![usize::MAX; n];
        dist[to] = 0;
        let mut queue = VecDeque::from([to]);
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if dist[v] == usize::MAX && (v == from || allowed(v)) {
                    dist[v] = dist[u] + 1;
                    if v != from {
                        queue.push_back(v);
                    }
                }
            }
        }
        if dist[from] == usize::MAX {
            return None;
        }
        let mut path = vec![from];
        let mut at = from;
        while at != to {
            at = self
                .neighbors(at)
                .find(|&v| dist[v] != usize::MAX && dist[v] + 1 == dist[at] && (v == to || allowed(v)))
                .expect("BFS layers are consistent");
            path.push(at);
        }
        Some(path)
    }
}

/// A relay along agents `agents[0..l]`: agent `i` carries the message from
/// `schedule.legs[i].pickup` to `schedule.legs[i].dropoff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedPlan {
    pub agents: Vec<AgentId>,
    /// `h_0 = s, h_1, ..., h_l = t`, with `h_{i-1}` and `h_i` in the reach
    /// set of the `i`-th relay agent.
    pub handovers: Vec<Point>,
    /// Points visited by each relay agent, from and back to its start.
    pub itineraries: Vec<Vec<Point>>,
    /// Guaranteed upper bound on each relay agent's energy.
    pub bounds: Vec<Rational>,
    /// Largest ratio of bound to budget, at least one.
    pub gamma: Rational,
    pub schedule: Schedule,
}

impl AugmentedPlan {
    pub fn relay_len(&self) -> usize {
        self.agents.len()
    }

    fn trivial() -> Self {
        AugmentedPlan {
            agents: Vec::new(),
            handovers: Vec::new(),
            itineraries: Vec::new(),
            bounds: Vec::new(),
            gamma: Rational::ONE,
            schedule: Schedule::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AugmentedOutcome {
    /// No schedule exists with the original budgets.
    CertifiedInfeasible,
    Augmented(AugmentedPlan),
}

impl AugmentedOutcome {
    pub fn plan(&self) -> Option<&AugmentedPlan> {
        match self {
            AugmentedOutcome::Augmented(p) => Some(p),
            AugmentedOutcome::CertifiedInfeasible => None,
        }
    }
}

/// A one-leg schedule for the first agent that can carry the message from
/// source to target alone.
pub fn check_single_agent(inst: &Instance) -> Option<Schedule> {
    let g = inst.graph();
    let (s, t) = (inst.source(), inst.target());
    let from_s = g.distances_from(s);
    let span = from_s.to_point(g, t)?;
    let from_t = g.distances_from(t);
    inst.agents().iter().position(|a| {
        let (Some(to_s), Some(to_t)) = (from_s.to_point(g, &a.start), from_t.to_point(g, &a.start)) else {
            return false;
        };
        let cost = match inst.variant() {
            Variant::Returning => &(&to_s + &span) + &to_t,
            Variant::NonReturning => &to_s + &span,
        };
        cost <= a.budget
    })
    .map(|agent| Schedule::new(vec![Leg { agent, pickup: s.clone(), dropoff: t.clone() }]))
}

fn single_agent_plan(inst: &Instance, sched: Schedule) -> AugmentedPlan {
    let leg = &sched.legs[0];
    let a = &inst.agents()[leg.agent];
    AugmentedPlan {
        agents: vec![leg.agent],
        handovers: vec![leg.pickup.clone(), leg.dropoff.clone()],
        itineraries: vec![vec![a.start.clone(), leg.pickup.clone(), leg.dropoff.clone(), a.start.clone()]],
        bounds: vec![a.budget.clone()],
        gamma: Rational::ONE,
        schedule: sched,
    }
}

/// Relay through balls of radius `B_i / 2`; every agent spends at most
/// twice its budget.
pub fn solve_2_augmented(inst: &Instance) -> Result<AugmentedOutcome, AugmentedError> {
    if inst.variant() != Variant::Returning {
        return Err(AugmentedError::VariantUnsupported);
    }
    if inst.source() == inst.target() {
        return Ok(AugmentedOutcome::Augmented(AugmentedPlan::trivial()));
    }
    if let Some(s) = check_single_agent(inst) {
        return Ok(AugmentedOutcome::Augmented(single_agent_plan(inst, s)));
    }
    let g = inst.graph();
    let k = inst.agents().len();
    let mut sets = Vec::with_capacity(k + 2);
    sets.push(ReachSet::ball(g, inst.source(), &Rational::ZERO).expect("zero ball"));
    for a in inst.agents() {
        sets.push(ReachSet::ball(g, &a.start, &a.budget.half()).expect("balls are never empty"));
    }
    sets.push(ReachSet::ball(g, inst.target(), &Rational::ZERO).expect("zero ball"));
    let ig = IntersectionGraph::new(&sets);
    let Some(path) = ig.fewest_hops(0, k + 1, |_| true) else {
        return Ok(AugmentedOutcome::CertifiedInfeasible);
    };

    let agents: Vec<AgentId> = path[1..path.len() - 1].iter().map(|&node| node - 1).collect();
    let handovers: Vec<Point> = path
        .windows(2)
        .map(|w| ig.witness(w[0], w[1]).expect("path edge").clone())
        .collect::<Vec<_>>();
    // Witnesses with the zero balls are s and t themselves.
    let mut points = vec![inst.source().clone()];
    points.extend(handovers[1..handovers.len() - 1].iter().cloned());
    points.push(inst.target().clone());

    let mut legs = Vec::new();
    let mut itineraries = Vec::new();
    let mut bounds = Vec::new();
    for (i, &agent) in agents.iter().enumerate() {
        let a = &inst.agents()[agent];
        legs.push(Leg { agent, pickup: points[i].clone(), dropoff: points[i + 1].clone() });
        itineraries.push(vec![a.start.clone(), points[i].clone(), points[i + 1].clone(), a.start.clone()]);
        bounds.push(&a.budget + &a.budget);
    }
    Ok(AugmentedOutcome::Augmented(AugmentedPlan {
        agents,
        handovers: points,
        itineraries,
        bounds,
        gamma: Rational::from_int(2),
        schedule: Schedule::new(legs),
    }))
}

/// Where the message changes hands between relay agents `i` and `i + 1`
/// (1-based `i`) in a relay of length `l`: on the canonical walk from `h_i`
/// toward the start of the agent that needs help, at fraction `|l - 2i| / l`.
fn exchange_point(
    inst: &Instance,
    l: usize,
    i: usize,
    h: &Point,
    before: &Point,
    after: &Point,
) -> Result<Point, GraphError> {
    let (num, toward) = if 2 * i < l { (l - 2 * i, after) } else { (2 * i - l, before) };
    if num == 0 {
        return Ok(h.clone());
    }
    let walk = inst.graph().shortest_walk(h, toward)?;
    let frac = Rational::from(num) / Rational::from(l);
    walk.point_at(&(walk.length() * &frac))
}

/// Certified energy bound for the `i`-th (1-based) of `l` relay agents with
/// budgets `b[0..l]`.
fn relay_bound(b: &[Rational], i: usize) -> Rational {
    let l = b.len();
    let frac = |num: usize| Rational::from(num) / Rational::from(l);
    let own = &b[i - 1];
    if l <= 2 {
        return own.clone();
    }
    if i == 1 {
        return own + &(frac(l - 2) * &b[1]);
    }
    if i == l {
        return own + &(frac(l - 2) * &b[l - 2]);
    }
    if 2 * i == l + 1 {
        return frac(2 * (l - 1)) * own;
    }
    if 2 * i <= l {
        // helped from behind, helps forward
        own + &(frac(2 * (i - 1)) * own) + frac(l - 2 * i) * &b[i]
    } else {
        let j = l + 1 - i;
        own + &(frac(2 * (j - 1)) * own) + frac(l - 2 * j) * &b[i - 2]
    }
}

struct Candidate {
    plan: AugmentedPlan,
    pair: (AgentId, AgentId),
}

/// Relay between a first agent `a` fetching from the source and a last agent
/// `b` delivering to the target, where neighbours overshoot the handover
/// points to share the work. Returns the plan with the fewest relay agents,
/// then the smallest `gamma`, then the smallest `(a, b)`.
pub fn solve_balanced_augmented(inst: &Instance) -> Result<AugmentedOutcome, AugmentedError> {
    if inst.variant() != Variant::Returning {
        return Err(AugmentedError::VariantUnsupported);
    }
    let k = inst.agents().len();
    if k < 2 {
        return Err(AugmentedError::NeedTwoAgents);
    }
    if inst.source() == inst.target() {
        return Ok(AugmentedOutcome::Augmented(AugmentedPlan::trivial()));
    }
    if let Some(s) = check_single_agent(inst) {
        return Ok(AugmentedOutcome::Augmented(single_agent_plan(inst, s)));
    }

    let g = inst.graph();
    // Agents without energy cannot carry anything.
    let active: Vec<AgentId> = (0..k).filter(|&i| inst.agents()[i].budget.is_positive()).collect();
    let n = active.len();
    // Nodes: [fetch ellipsoids | balls | deliver ellipsoids], one per active
    // agent each; an empty ellipsoid is replaced by an empty marker.
    let mut sets = Vec::with_capacity(3 * n);
    let mut usable = vec![true; 3 * n];
    let s_map = g.distances_from(inst.source());
    let t_map = g.distances_from(inst.target());
    let starts: Vec<_> = active.iter().map(|&i| g.distances_from(&inst.agents()[i].start)).collect();
    let placeholder = ReachSet::ball(g, inst.source(), &Rational::ZERO).expect("zero ball");
    for (slot, &i) in active.iter().enumerate() {
        match ReachSet::from_maps(g, &starts[slot], &s_map, &inst.agents()[i].budget) {
            Ok(r) => sets.push(r),
            Err(_) => {
                usable[slot] = false;
                sets.push(placeholder.clone());
            }
        }
    }
    for (slot, &i) in active.iter().enumerate() {
        let b = &inst.agents()[i].budget;
        sets.push(ReachSet::from_maps(g, &starts[slot], &starts[slot], b).expect("balls are never empty"));
    }
    for (slot, &i) in active.iter().enumerate() {
        match ReachSet::from_maps(g, &starts[slot], &t_map, &inst.agents()[i].budget) {
            Ok(r) => sets.push(r),
            Err(_) => {
                usable[2 * n + slot] = false;
                sets.push(placeholder.clone());
            }
        }
    }
    let ig = IntersectionGraph::new(&sets);

    let mut best: Option<Candidate> = None;
    for sa in 0..n {
        if !usable[sa] {
            continue;
        }
        for sb in 0..n {
            if sa == sb || !usable[2 * n + sb] {
                continue;
            }
            let allowed = |v: usize| (n..2 * n).contains(&v) && v != n + sa && v != n + sb;
            let Some(path) = ig.fewest_hops(sa, 2 * n + sb, allowed) else { continue };
            if let Some(b) = &best {
                if path.len() > b.plan.agents.len() {
                    continue;
                }
            }
            let relay: Vec<AgentId> = path
                .iter()
                .enumerate()
                .map(|(pos, &node)| {
                    let slot = if pos == 0 { node } else if pos + 1 == path.len() { node - 2 * n } else { node - n };
                    active[slot]
                })
                .collect();
            let mut handovers = vec![inst.source().clone()];
            for w in path.windows(2) {
                handovers.push(ig.witness(w[0], w[1]).expect("path edge").clone());
            }
            handovers.push(inst.target().clone());
            let plan = balanced_plan(inst, relay, handovers)?;
            let better = match &best {
                None => true,
                Some(b) => (plan.agents.len(), &plan.gamma) < (b.plan.agents.len(), &b.plan.gamma),
            };
            if better {
                best = Some(Candidate { plan, pair: (active[sa], active[sb]) });
            }
        }
    }
    Ok(match best {
        Some(c) => {
            debug_assert_eq!(c.pair, (c.plan.agents[0], *c.plan.agents.last().expect("nonempty")));
            AugmentedOutcome::Augmented(c.plan)
        }
        None => AugmentedOutcome::CertifiedInfeasible,
    })
}

fn balanced_plan(inst: &Instance, relay: Vec<AgentId>, handovers: Vec<Point>) -> Result<AugmentedPlan, GraphError> {
    let l = relay.len();
    let start = |i: usize| &inst.agents()[relay[i - 1]].start;
    // exchange[i] is where relay agents i and i + 1 meet; 0 and l are s, t.
    let mut exchange = Vec::with_capacity(l + 1);
    exchange.push(inst.source().clone());
    for i in 1..l {
        exchange.push(exchange_point(inst, l, i, &handovers[i], start(i), start(i + 1))?);
    }
    exchange.push(inst.target().clone());

    let budgets: Vec<Rational> = relay.iter().map(|&a| inst.agents()[a].budget.clone()).collect();
    let mut legs = Vec::with_capacity(l);
    let mut itineraries = Vec::with_capacity(l);
    let mut bounds = Vec::with_capacity(l);
    let mut gamma = Rational::ONE;
    for i in 1..=l {
        let p = start(i).clone();
        let (pickup, dropoff) = (exchange[i - 1].clone(), exchange[i].clone());
        let mut route = vec![p.clone(), pickup.clone()];
        if pickup != handovers[i - 1] && 2 * (i - 1) > l {
            route.push(handovers[i - 1].clone());
        }
        if dropoff != handovers[i] && 2 * i < l {
            route.push(handovers[i].clone());
        }
        route.push(dropoff.clone());
        route.push(p);
        let bound = relay_bound(&budgets, i);
        let ratio = &bound / &budgets[i - 1];
        if ratio > gamma {
            gamma = ratio;
        }
        legs.push(Leg { agent: relay[i - 1], pickup, dropoff });
        itineraries.push(route);
        bounds.push(bound);
    }
    Ok(AugmentedPlan { agents: relay, handovers, itineraries, bounds, gamma, schedule: Schedule::new(legs) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instance::Agent;
    use crate::rational::q;
    use crate::schedule::validate;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn sxt(budget: Rational) -> Instance {
        let g = Graph::new(3, [(0, 1, r(2)), (1, 2, r(2))]).unwrap();
        let agents = vec![Agent { start: Point::Vertex(1), budget }];
        Instance::new(g, Point::Vertex(0), Point::Vertex(2), agents, Variant::Returning).unwrap()
    }

    #[test]
    fn single_agent_prepass() {
        assert!(check_single_agent(&sxt(r(8))).is_some());
        assert!(check_single_agent(&sxt(r(7))).is_none());
        assert!(check_single_agent(&sxt(r(6)).with_variant(Variant::NonReturning)).is_some());
    }

    #[test]
    fn relay_spends_exactly_twice_the_budget() {
        let inst = sxt(r(4));
        let AugmentedOutcome::Augmented(plan) = solve_2_augmented(&inst).unwrap() else { panic!() };
        assert_eq!(plan.gamma, r(2));
        assert_eq!(plan.handovers, vec![Point::Vertex(0), Point::Vertex(2)]);
        let report = validate(&inst, &plan.schedule, &plan.gamma).unwrap();
        assert!(report.ok);
        assert_eq!(report.leg_costs, vec![Some(r(8))]);
        assert_eq!(solve_2_augmented(&sxt(r(3))).unwrap(), AugmentedOutcome::CertifiedInfeasible);
    }

    #[test]
    fn non_returning_is_rejected() {
        let inst = sxt(r(4)).with_variant(Variant::NonReturning);
        assert_eq!(solve_2_augmented(&inst), Err(AugmentedError::VariantUnsupported));
        assert_eq!(solve_balanced_augmented(&inst), Err(AugmentedError::VariantUnsupported));
        assert_eq!(solve_balanced_augmented(&sxt(r(4))), Err(AugmentedError::NeedTwoAgents));
    }

    #[test]
    fn bounds_match_the_closed_forms() {
        let b = vec![r(1); 5];
        for i in 1..=5 {
            assert_eq!(relay_bound(&b, i), q(8, 5));
        }
        let b = vec![r(1), r(2), r(3)];
        assert_eq!(relay_bound(&b, 1), q(5, 3));
        assert_eq!(relay_bound(&b, 2), q(8, 3));
        assert_eq!(relay_bound(&b, 3), q(11, 3));
        let b = vec![r(1), r(2), r(3), r(4)];
        assert_eq!(relay_bound(&b, 2), r(2) + r(1) + r(0));
        assert_eq!(relay_bound(&b, 3), r(3) + q(3, 2));
    }

    /// Four agents spaced along a path of length 12, each with budget 5.
    fn line_of_four() -> Instance {
        let g = Graph::new(5, [(0, 1, r(3)), (1, 2, r(3)), (2, 3, r(3)), (3, 4, r(3))]).unwrap();
        let agents = (0..4)
            .map(|i| Agent { start: g.point_on_edge(i, q(3, 2)).unwrap(), budget: r(5) })
            .collect();
        Instance::new(g, Point::Vertex(0), Point::Vertex(4), agents, Variant::Returning).unwrap()
    }

    #[test]
    fn balanced_relay_chains_and_respects_bounds() {
        let inst = line_of_four();
        let AugmentedOutcome::Augmented(plan) = solve_balanced_augmented(&inst).unwrap() else { panic!() };
        assert_eq!(plan.agents, vec![0, 1, 2, 3]);
        assert_eq!(plan.gamma, q(3, 2));
        let report = validate(&inst, &plan.schedule, &plan.gamma).unwrap();
        assert!(report.ok, "{report:?}");
        for (cost, bound) in report.leg_costs.iter().zip(&plan.bounds) {
            assert!(cost.as_ref().unwrap() <= bound);
        }
        for w in plan.schedule.legs.windows(2) {
            assert_eq!(w[0].dropoff, w[1].pickup);
        }
    }

    #[test]
    fn fewest_hops_prefers_small_labels() {
        let g = Graph::new(2, [(0, 1, r(1))]).unwrap();
        let ball = |v, rad| ReachSet::ball(&g, &Point::Vertex(v), &rad).unwrap();
        let sets = [ball(0, r(0)), ball(0, r(1)), ball(1, r(1)), ball(1, r(0))];
        let ig = IntersectionGraph::new(&sets);
        assert_eq!(ig.fewest_hops(0, 3, |_| true), Some(vec![0, 1, 3]));
        assert_eq!(ig.fewest_hops(0, 3, |v| v == 2), Some(vec![0, 2, 3]));
        assert_eq!(ig.fewest_hops(0, 3, |_| false), None);
    }
}
