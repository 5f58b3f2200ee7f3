use alloc::vec::Vec;

use super::GadgetError;
use crate::graph::{Graph, Point};
use crate::instance::{Agent, Instance, Variant};
use crate::rational::Rational;
use crate::subdivide::Subdivision;

/// Gives every agent the budget `budget` by moving it to the tip of a new
/// pendant edge that burns exactly the surplus: `(B - B_i) / 2` for
/// returning agents, `B - B_i` otherwise. Agents already at `budget` stay.
pub fn uniformize_budgets(inst: &Instance, budget: &Rational) -> Result<Instance, GadgetError> {
    let max = inst.agents().iter().map(|a| a.budget.clone()).fold(Rational::ZERO, Rational::max_of);
    if *budget < max {
        return Err(GadgetError::BudgetTooSmall { budget: budget.clone(), max });
    }
    let pendants: Vec<Rational> = inst
        .agents()
        .iter()
        .map(|a| {
            let surplus = budget - &a.budget;
            match inst.variant() {
                Variant::Returning => surplus.half(),
                Variant::NonReturning => surplus,
            }
        })
        .collect();
    let cuts: Vec<Point> = inst
        .agents()
        .iter()
        .zip(&pendants)
        .filter(|(_, p)| p.is_positive())
        .map(|(a, _)| a.start.clone())
        .collect();
    let sub = Subdivision::new(inst.graph(), &cuts);
    let base = sub.graph();
    let mut edges: Vec<_> = base.edges().iter().map(|e| (e.lo, e.hi, e.weight.clone())).collect();
    let mut count = base.vertex_count();
    let mut agents = Vec::with_capacity(pendants.len());
    for (a, len) in inst.agents().iter().zip(pendants) {
        let at = sub.refine(&a.start);
        let start = if len.is_positive() {
            let root = at.vertex().expect("cut points are vertices after subdividing");
            edges.push((root, count, len));
            count += 1;
            Point::Vertex(count - 1)
        } else {
            at
        };
        agents.push(Agent { start, budget: budget.clone() });
    }
    let graph = Graph::new(count, edges).expect("pendants have positive length");
    let source = sub.refine(inst.source());
    let target = sub.refine(inst.target());
    Ok(Instance::new(graph, source, target, agents, inst.variant()).expect("relocated agents are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed_order::{solve_exact, ExactLimits};
    use crate::rational::q;
    use alloc::vec;

    fn line(variant: Variant, budgets: &[i64]) -> Instance {
        let g = Graph::new(3, [(0, 1, q(2, 1)), (1, 2, q(2, 1))]).unwrap();
        let starts = [Point::Vertex(0), g.point_on_edge(1, q(1, 2)).unwrap()];
        let agents = starts
            .iter()
            .zip(budgets)
            .map(|(s, b)| Agent { start: s.clone(), budget: Rational::from_int(*b) })
            .collect();
        Instance::new(g, Point::Vertex(0), Point::Vertex(2), agents, variant).unwrap()
    }

    #[test]
    fn equal_budgets_leave_graph_alone() {
        let inst = line(Variant::Returning, &[4, 4]);
        assert_eq!(uniformize_budgets(&inst, &Rational::from_int(4)).unwrap(), inst);
    }

    #[test]
    fn pendant_lengths() {
        let inst = line(Variant::Returning, &[1, 2]);
        let u = uniformize_budgets(&inst, &Rational::from_int(2)).unwrap();
        assert_eq!(u.graph().edge_count(), 3);
        assert_eq!(u.graph().edges()[2].weight, q(1, 2));
        assert!(u.agents().iter().all(|a| a.budget == Rational::from_int(2)));

        let inst = line(Variant::NonReturning, &[1, 2]);
        let u = uniformize_budgets(&inst, &Rational::from_int(3)).unwrap();
        // Agent 1 sat inside an edge, which gets split first.
        assert_eq!(u.graph().edge_count(), 5);
        let tips: Vec<Rational> = u.graph().edges()[3..].iter().map(|e| e.weight.clone()).collect();
        assert_eq!(tips, vec![q(2, 1), q(1, 1)]);
    }

    #[test]
    fn too_small() {
        let inst = line(Variant::Returning, &[1, 3]);
        assert!(matches!(uniformize_budgets(&inst, &q(2, 1)), Err(GadgetError::BudgetTooSmall { .. })));
    }

    #[test]
    fn feasibility_is_preserved() {
        for variant in [Variant::Returning, Variant::NonReturning] {
            for budgets in [[2, 2], [4, 1], [1, 6], [3, 3]] {
                let inst = line(variant, &budgets);
                let u = uniformize_budgets(&inst, &Rational::from_int(7)).unwrap();
                let before = solve_exact(&inst, ExactLimits::default()).unwrap().is_feasible();
                let after = solve_exact(&u, ExactLimits::default()).unwrap().is_feasible();
                assert_eq!(before, after, "{variant:?} {budgets:?}");
            }
        }
    }
}
