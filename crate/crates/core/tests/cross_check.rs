mod common;

use common::{graph, tree};
use delivery_core::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn tree_greedy_matches_exhaustive_search(raw in tree(8, 4)) {
        let inst = raw.build(Variant::Returning);
        let greedy = solve_tree(&inst).unwrap();
        let exact = solve_exact(&inst, ExactLimits::default()).unwrap();
        prop_assert_eq!(greedy.is_feasible(), exact.is_feasible());
        for d in [&greedy, &exact] {
            if let Decision::Feasible(s) = d {
                let report = validate(&inst, s, &Rational::ONE).unwrap();
                prop_assert!(report.ok, "{:?}", report);
            }
        }
    }

    #[test]
    fn fixed_order_agrees_with_grid(raw in graph(5, 3), nonreturning in any::<bool>()) {
        let variant = if nonreturning { Variant::NonReturning } else { Variant::Returning };
        let inst = raw.build(variant);
        let order: Vec<usize> = (0..inst.agents().len()).collect();
        let dp = solve_fixed_order(&inst, &order).unwrap();
        if let Decision::Feasible(s) = &dp {
            let report = validate(&inst, s, &Rational::ONE).unwrap();
            prop_assert!(report.ok, "{:?}", report);
        }
        let o = brute_force_grid(&inst, &order, &q(1, 16)).unwrap();
        match o {
            GridOutcome::Feasible => prop_assert!(dp.is_feasible()),
            GridOutcome::Infeasible => prop_assert!(!dp.is_feasible()),
            GridOutcome::Boundary => {}
        }
    }

    #[test]
    fn augmented_certificates_are_sound(raw in graph(6, 4)) {
        let inst = raw.build(Variant::Returning);
        let exact = solve_exact(&inst, ExactLimits::default()).unwrap();
        let two = solve_2_augmented(&inst).unwrap();
        match &two {
            AugmentedOutcome::CertifiedInfeasible => prop_assert!(!exact.is_feasible()),
            AugmentedOutcome::Augmented(plan) => {
                let report = validate(&inst, &plan.schedule, &plan.gamma).unwrap();
                prop_assert!(report.ok, "{:?}", report);
            }
        }
        if inst.agents().len() >= 2 {
            match solve_balanced_augmented(&inst).unwrap() {
                AugmentedOutcome::CertifiedInfeasible => prop_assert!(!exact.is_feasible()),
                AugmentedOutcome::Augmented(plan) => {
                    let report = validate(&inst, &plan.schedule, &plan.gamma).unwrap();
                    prop_assert!(report.ok, "{:?} {:?}", report, plan);
                    for (c, b) in report.leg_costs.iter().zip(&plan.bounds) {
                        prop_assert!(c.as_ref().unwrap() <= b);
                    }
                    for w in plan.schedule.legs.windows(2) {
                        prop_assert_eq!(&w[0].dropoff, &w[1].pickup);
                    }
                }
            }
        }
    }
}
