use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use delivery_core::{
    solve_2_augmented, solve_balanced_augmented, solve_exact, solve_fixed_order, solve_tree, AgentId, AugmentedError,
    AugmentedOutcome, Decision, ExactError, ExactLimits, Instance, OrderError, Rational, TreeError,
};
use serde_json::Value;

use crate::doc::{point_value, DecisionKind, Diagnostics, ResultDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Tree,
    Aug2,
    Balanced,
    FixedOrder,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::Tree, Algorithm::Aug2, Algorithm::Balanced, Algorithm::FixedOrder, Algorithm::Exact];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Tree => "tree",
            Algorithm::Aug2 => "aug2",
            Algorithm::Balanced => "balanced",
            Algorithm::FixedOrder => "fixed-order",
            Algorithm::Exact => "exact",
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected tree, aug2, balanced, fixed-order or exact)"))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Augmented(#[from] AugmentedError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("fixed-order needs --order")]
    MissingOrder,
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub order: Option<Vec<AgentId>>,
    pub limits: ExactLimits,
    pub timings: bool,
}

fn exact_result(decision: Decision) -> (DecisionKind, Option<delivery_core::Schedule>) {
    match decision {
        Decision::Feasible(s) => (DecisionKind::Feasible, Some(s)),
        Decision::Infeasible => (DecisionKind::Infeasible, None),
    }
}

fn to_strings(v: &[Rational]) -> Value {
    Value::from(v.iter().map(Rational::to_string).collect::<Vec<_>>())
}

pub fn solve(inst: &Instance, algo: Algorithm, opts: &SolveOptions) -> Result<ResultDocument, SolveError> {
    let started = Instant::now();
    let mut extra = BTreeMap::new();
    let mut gamma = Rational::ONE;
    let (decision, schedule) = match algo {
        Algorithm::Tree => exact_result(solve_tree(inst)?),
        Algorithm::Exact => exact_result(solve_exact(inst, opts.limits)?),
        Algorithm::FixedOrder => {
            let order = opts.order.as_ref().ok_or(SolveError::MissingOrder)?;
            extra.insert("order".into(), Value::from(order.clone()));
            exact_result(solve_fixed_order(inst, order)?)
        }
        Algorithm::Aug2 | Algorithm::Balanced => {
            let outcome =
                if algo == Algorithm::Aug2 { solve_2_augmented(inst)? } else { solve_balanced_augmented(inst)? };
            match outcome {
                AugmentedOutcome::CertifiedInfeasible => (DecisionKind::CertifiedInfeasible, None),
                AugmentedOutcome::Augmented(plan) => {
                    gamma = plan.gamma.clone();
                    extra.insert("relay".into(), Value::from(plan.agents.clone()));
                    extra.insert("bounds".into(), to_strings(&plan.bounds));
                    extra.insert("handovers".into(), Value::from(plan.handovers.iter().map(point_value).collect::<Vec<_>>()));
                    (DecisionKind::AugmentedFeasible, Some(plan.schedule))
                }
            }
        }
    };
    let elapsed_micros = opts.timings.then(|| started.elapsed().as_micros());
    Ok(ResultDocument {
        decision,
        gamma,
        schedule,
        diagnostics: Diagnostics { solver: algo.name().into(), elapsed_micros, extra },
    })
}
