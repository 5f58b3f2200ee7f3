use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::tube::tube_legs;
use super::{GadgetError, GadgetInstance, Owner, Piece};
use crate::graph::Point;
use crate::instance::AgentId;
use crate::schedule::{Leg, Schedule};

/// Routes the message along the path matching each variable's value and
/// sends a clause agent to every gap of a false literal on the route.
pub fn schedule_from_assignment(gadget: &GadgetInstance, assignment: &[bool]) -> Result<Schedule, GadgetError> {
    let x = gadget.cnf.num_vars();
    if assignment.len() != x {
        return Err(GadgetError::AssignmentLength { expected: x, got: assignment.len() });
    }
    let mut helper: BTreeMap<(usize, usize), AgentId> = BTreeMap::new();
    for (c, lits) in gadget.cnf.clauses().iter().enumerate() {
        let false_at: Vec<bool> = lits.iter().map(|l| !l.eval(assignment)).collect();
        if false_at.iter().all(|&f| f) {
            return Err(GadgetError::UnsatisfiedClause(c));
        }
        let agents = &gadget.clause_agents[c];
        for (s, _) in false_at.iter().enumerate().filter(|(_, &f)| f) {
            // Node `k` reaches literals `k` and `k + 1`; the middle literal
            // of a three-literal clause takes whichever node is free.
            let node = match (lits.len(), s) {
                (3, 1) if false_at[0] => 1,
                (3, 2) => 1,
                _ => 0,
            };
            helper.insert((c, s), agents[node]);
        }
    }
    let mut legs = Vec::new();
    for (i, &value) in assignment.iter().enumerate() {
        emit(gadget, &gadget.path(i, value).pieces, &helper, &mut legs);
    }
    Ok(Schedule::new(legs))
}

fn emit(gadget: &GadgetInstance, pieces: &[Piece], helper: &BTreeMap<(usize, usize), AgentId>, legs: &mut Vec<Leg>) {
    for piece in pieces {
        match piece {
            Piece::Gap { from, to, owner } => {
                let agent = match owner {
                    Owner::Variable(i) => *i,
                    Owner::Literal { clause, slot } => helper[&(*clause, *slot)],
                    Owner::Agent(a) => *a,
                };
                legs.push(Leg { agent, pickup: Point::Vertex(*from), dropoff: Point::Vertex(*to) });
            }
            Piece::Separator(k) => {
                let g = gadget.instance.graph();
                for site in &gadget.tubes[gadget.separators[*k].clone()] {
                    legs.extend(tube_legs(g, site.edge, site.from, site.to, site.agents, &site.handover));
                }
            }
            Piece::Arcs { clause, slot, arcs } => {
                let pick = usize::from(helper[&(*clause, *slot)] != gadget.clause_agents[*clause][0]);
                emit(gadget, &arcs[pick], helper, legs);
            }
        }
    }
}

/// Reads variable values off the paths a schedule's legs touch.
pub fn assignment_from_schedule(gadget: &GadgetInstance, sched: &Schedule) -> Result<Vec<bool>, GadgetError> {
    (0..gadget.cnf.num_vars())
        .map(|i| {
            let touches = |value: bool| {
                let path = gadget.path(i, value);
                sched.legs.iter().any(|l| path.contains(&l.pickup) || path.contains(&l.dropoff))
            };
            match (touches(false), touches(true)) {
                (true, true) => Err(GadgetError::AmbiguousRoute(i)),
                (false, false) => Err(GadgetError::UnroutedVariable(i)),
                (_, value) => Ok(value),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::{build_augmented_gadget, build_basic_gadget, Cnf};
    use crate::instance::Variant;
    use crate::rational::{q, Rational};
    use crate::schedule::validate;
    use alloc::vec;

    fn assignments(x: usize) -> impl Iterator<Item = Vec<bool>> {
        (0..1u32 << x).map(move |m| (0..x).map(|i| m >> i & 1 == 1).collect())
    }

    #[test]
    fn witnesses_match_satisfaction() {
        let formulas = [
            Cnf::from_signed(2, &[vec![1, -2]]).unwrap(),
            Cnf::from_signed(3, &[vec![1, 2, 3], vec![-1, -2], vec![-3]]).unwrap(),
            Cnf::from_signed(2, &[vec![1], vec![-1, 2], vec![-2]]).unwrap(),
        ];
        for f in &formulas {
            for v in [Variant::Returning, Variant::NonReturning] {
                let g = build_basic_gadget(f, v).unwrap();
                for a in assignments(f.num_vars()) {
                    match schedule_from_assignment(&g, &a) {
                        Ok(s) => {
                            assert!(f.is_satisfied_by(&a));
                            let r = validate(&g.instance, &s, &Rational::ONE).unwrap();
                            assert!(r.ok, "{a:?} {r:?}");
                            assert_eq!(assignment_from_schedule(&g, &s).unwrap(), a);
                        }
                        Err(GadgetError::UnsatisfiedClause(c)) => {
                            assert!(!f.clauses()[c].iter().any(|l| l.eval(&a)));
                        }
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn single_literal_false() {
        let f = Cnf::from_signed(1, &[vec![1]]).unwrap();
        let g = build_basic_gadget(&f, Variant::Returning).unwrap();
        assert_eq!(schedule_from_assignment(&g, &[false]), Err(GadgetError::UnsatisfiedClause(0)));
        assert!(schedule_from_assignment(&g, &[true]).is_ok());
        assert!(matches!(schedule_from_assignment(&g, &[]), Err(GadgetError::AssignmentLength { .. })));
    }

    #[test]
    fn ambiguous_and_unrouted() {
        let f = Cnf::from_signed(2, &[vec![1, -2]]).unwrap();
        let g = build_basic_gadget(&f, Variant::Returning).unwrap();
        let a = schedule_from_assignment(&g, &[true, true]).unwrap();
        let b = schedule_from_assignment(&g, &[false, false]).unwrap();
        let mut mixed = a.clone();
        mixed.legs.extend(b.legs.iter().cloned());
        assert_eq!(assignment_from_schedule(&g, &mixed), Err(GadgetError::AmbiguousRoute(0)));
        assert_eq!(assignment_from_schedule(&g, &Schedule::default()), Err(GadgetError::UnroutedVariable(0)));
    }

    #[test]
    fn augmented_witness_uses_both_arcs() {
        let f = Cnf::from_signed(3, &[vec![1, 2, 3]]).unwrap();
        let g = build_augmented_gadget(&f, &q(1, 2), Variant::NonReturning).unwrap();
        // Middle literal false with the first node free, then with it busy.
        for a in [[true, false, false], [false, false, true]] {
            let s = schedule_from_assignment(&g, &a).unwrap();
            let r = validate(&g.instance, &s, &Rational::ONE).unwrap();
            assert!(r.ok, "{r:?}");
            assert_eq!(assignment_from_schedule(&g, &s).unwrap(), a.to_vec());
        }
        assert_eq!(schedule_from_assignment(&g, &[false; 3]), Err(GadgetError::UnsatisfiedClause(0)));
    }
}
