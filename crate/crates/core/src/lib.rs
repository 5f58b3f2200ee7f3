//! Exact algorithms for budgeted message delivery by mobile agents.
//!
//! Agents with energy budgets sit on a weighted graph and relay a message
//! from a source to a target. All arithmetic is exact over the rationals.

#![no_std]

extern crate alloc;

pub mod augmented;
pub mod fixed_order;
pub mod gadget;
pub mod graph;
pub mod instance;
pub mod rational;
pub mod reach;
pub mod schedule;
pub mod subdivide;
pub mod tree;
pub mod walk;

pub use graph::{DistanceMap, Edge, EdgeId, Graph, GraphError, Metric, Point, VertexId};
pub use instance::{Agent, AgentId, Instance, InstanceError, Variant};
pub use rational::{q, ParseRationalError, Rational};
pub use reach::{Interval, ReachError, ReachSet};
pub use schedule::{validate, Decision, Leg, Schedule, ValidateError, ValidationReport, Violation, ViolationKind};
pub use subdivide::Subdivision;
pub use walk::{Segment, Walk};
pub use fixed_order::{brute_force_grid, solve_exact, solve_fixed_order, ExactError, ExactLimits, GridOutcome, OrderError};
pub use tree::{greedy_cover, project_to_line, solve_tree, TreeError};
pub use augmented::{
    check_single_agent, solve_2_augmented, solve_balanced_augmented, AugmentedError, AugmentedOutcome, AugmentedPlan,
};
