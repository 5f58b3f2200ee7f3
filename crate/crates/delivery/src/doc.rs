//! JSON documents for instances, schedules, results and validation reports.
//!
//! Rationals travel as exact strings in lowest terms (`"3/4"`, or `"2"` for
//! integers). A point is a vertex index or `[edge, "offset"]`, the offset
//! measured from the edge's smaller endpoint. Output is pretty-printed with
//! sorted keys, so equal documents are byte-identical.

use std::collections::BTreeMap;

use delivery_core::gadget::{GadgetInstance, Role};
use delivery_core::{Agent, Graph, Instance, Leg, Point, Rational, Schedule, ValidationReport, Variant};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const INSTANCE_VERSION: &str = "delivery-instance/1";
pub const RESULT_VERSION: &str = "delivery-result/1";
pub const SCHEDULE_VERSION: &str = "delivery-schedule/1";
pub const ROLES_VERSION: &str = "delivery-roles/1";

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("unsupported document version `{found}`, expected `{expected}`")]
    Version { found: String, expected: &'static str },
    #[error("invalid instance: {0}")]
    Invariant(String),
}

impl From<serde_json::Error> for DocError {
    fn from(e: serde_json::Error) -> Self {
        DocError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

fn field_err(field: impl Into<String>, message: impl ToString) -> DocError {
    DocError::Field { field: field.into(), message: message.to_string() }
}

fn parse_q(field: impl Into<String>, s: &str) -> Result<Rational, DocError> {
    s.parse().map_err(|e| field_err(field, e))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum PointWire {
    Vertex(usize),
    OnEdge(usize, String),
}

impl PointWire {
    fn from_point(p: &Point) -> Self {
        match p {
            Point::Vertex(v) => PointWire::Vertex(*v),
            Point::OnEdge { edge, offset } => PointWire::OnEdge(*edge, offset.to_string()),
        }
    }

    fn to_point(&self, g: &Graph, field: &str) -> Result<Point, DocError> {
        let p = match self {
            PointWire::Vertex(v) => Point::Vertex(*v),
            PointWire::OnEdge(edge, off) => {
                let offset = parse_q(field, off)?;
                if *edge >= g.edge_count() {
                    return Err(field_err(field, format!("edge {edge} does not exist")));
                }
                // Endpoint offsets are accepted and normalized to vertices.
                g.point_on_edge(*edge, offset).map_err(|e| field_err(field, e))?
            }
        };
        g.check_point(&p).map_err(|e| field_err(field, e))?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum VariantWire {
    Returning,
    NonReturning,
}

impl From<Variant> for VariantWire {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Returning => VariantWire::Returning,
            Variant::NonReturning => VariantWire::NonReturning,
        }
    }
}

impl From<VariantWire> for Variant {
    fn from(v: VariantWire) -> Self {
        match v {
            VariantWire::Returning => Variant::Returning,
            VariantWire::NonReturning => Variant::NonReturning,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentWire {
    at: PointWire,
    budget: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceWire {
    version: String,
    vertices: usize,
    edges: Vec<(usize, usize, String)>,
    source: PointWire,
    target: PointWire,
    variant: VariantWire,
    agents: Vec<AgentWire>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LegWire {
    agent: usize,
    pickup: PointWire,
    dropoff: PointWire,
}

fn check_version(found: &str, expected: &'static str) -> Result<(), DocError> {
    if found == expected {
        Ok(())
    } else {
        Err(DocError::Version { found: found.into(), expected })
    }
}

/// Serializes through a `Value`, whose maps keep keys sorted.
fn canonical<T: Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("documents serialize");
    let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
    out.push('\n');
    out
}

pub fn parse_instance(text: &str) -> Result<Instance, DocError> {
    let wire: InstanceWire = serde_json::from_str(text)?;
    check_version(&wire.version, INSTANCE_VERSION)?;
    let mut edges = Vec::with_capacity(wire.edges.len());
    for (i, (u, v, w)) in wire.edges.iter().enumerate() {
        edges.push((*u, *v, parse_q(format!("edges[{i}]"), w)?));
    }
    let g = Graph::new(wire.vertices, edges).map_err(|e| DocError::Invariant(e.to_string()))?;
    let source = wire.source.to_point(&g, "source")?;
    let target = wire.target.to_point(&g, "target")?;
    let mut agents = Vec::with_capacity(wire.agents.len());
    for (i, a) in wire.agents.iter().enumerate() {
        agents.push(Agent {
            start: a.at.to_point(&g, &format!("agents[{i}].at"))?,
            budget: parse_q(format!("agents[{i}].budget"), &a.budget)?,
        });
    }
    Instance::new(g, source, target, agents, wire.variant.into()).map_err(|e| DocError::Invariant(e.to_string()))
}

pub fn emit_instance(inst: &Instance) -> String {
    let g = inst.graph();
    canonical(&InstanceWire {
        version: INSTANCE_VERSION.into(),
        vertices: g.vertex_count(),
        edges: g.edges().iter().map(|e| (e.lo, e.hi, e.weight.to_string())).collect(),
        source: PointWire::from_point(inst.source()),
        target: PointWire::from_point(inst.target()),
        variant: inst.variant().into(),
        agents: inst
            .agents()
            .iter()
            .map(|a| AgentWire { at: PointWire::from_point(&a.start), budget: a.budget.to_string() })
            .collect(),
    })
}

fn legs_to_wire(s: &Schedule) -> Vec<LegWire> {
    s.legs
        .iter()
        .map(|l| LegWire { agent: l.agent, pickup: PointWire::from_point(&l.pickup), dropoff: PointWire::from_point(&l.dropoff) })
        .collect()
}

fn legs_from_wire(legs: &[LegWire], g: &Graph) -> Result<Schedule, DocError> {
    let mut out = Vec::with_capacity(legs.len());
    for (i, l) in legs.iter().enumerate() {
        out.push(Leg {
            agent: l.agent,
            pickup: l.pickup.to_point(g, &format!("schedule[{i}].pickup"))?,
            dropoff: l.dropoff.to_point(g, &format!("schedule[{i}].dropoff"))?,
        });
    }
    Ok(Schedule::new(out))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleWire {
    version: String,
    schedule: Vec<LegWire>,
}

pub fn emit_schedule(s: &Schedule) -> String {
    canonical(&ScheduleWire { version: SCHEDULE_VERSION.into(), schedule: legs_to_wire(s) })
}

/// Reads the `schedule` of a schedule or result document; points are
/// checked against the instance graph.
pub fn parse_schedule(text: &str, g: &Graph) -> Result<Schedule, DocError> {
    let value: Value = serde_json::from_str(text)?;
    let version = value.get("version").and_then(Value::as_str).ok_or_else(|| field_err("version", "missing"))?;
    if version != SCHEDULE_VERSION && version != RESULT_VERSION {
        return Err(DocError::Version { found: version.into(), expected: SCHEDULE_VERSION });
    }
    let legs = value.get("schedule").ok_or_else(|| field_err("schedule", "missing"))?;
    let legs: Vec<LegWire> = serde_json::from_value(legs.clone()).map_err(|e| field_err("schedule", e))?;
    legs_from_wire(&legs, g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionKind {
    Feasible,
    Infeasible,
    CertifiedInfeasible,
    AugmentedFeasible,
}

impl DecisionKind {
    pub fn is_positive(self) -> bool {
        matches!(self, DecisionKind::Feasible | DecisionKind::AugmentedFeasible)
    }
}

/// Solver name plus optional extras; timings only when requested, so that
/// default output is reproducible.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub solver: String,
    pub elapsed_micros: Option<u128>,
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultDocument {
    pub decision: DecisionKind,
    pub gamma: Rational,
    pub schedule: Option<Schedule>,
    pub diagnostics: Diagnostics,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResultWire {
    version: String,
    decision: DecisionKind,
    gamma: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schedule: Option<Vec<LegWire>>,
    diagnostics: BTreeMap<String, Value>,
}

pub fn emit_result(r: &ResultDocument) -> String {
    let mut diagnostics = r.diagnostics.extra.clone();
    diagnostics.insert("solver".into(), Value::from(r.diagnostics.solver.clone()));
    if let Some(t) = r.diagnostics.elapsed_micros {
        diagnostics.insert("elapsed_micros".into(), Value::from(t as u64));
    }
    canonical(&ResultWire {
        version: RESULT_VERSION.into(),
        decision: r.decision,
        gamma: r.gamma.to_string(),
        schedule: r.schedule.as_ref().map(legs_to_wire),
        diagnostics,
    })
}

pub fn parse_result(text: &str, g: &Graph) -> Result<ResultDocument, DocError> {
    let wire: ResultWire = serde_json::from_str(text)?;
    check_version(&wire.version, RESULT_VERSION)?;
    let schedule = wire.schedule.as_deref().map(|l| legs_from_wire(l, g)).transpose()?;
    if schedule.is_some() != wire.decision.is_positive() {
        return Err(field_err("schedule", "present exactly when the decision is feasible"));
    }
    let mut extra = wire.diagnostics;
    let solver = match extra.remove("solver") {
        Some(Value::String(s)) => s,
        _ => return Err(field_err("diagnostics.solver", "missing or not a string")),
    };
    let elapsed_micros = match extra.remove("elapsed_micros") {
        None => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| field_err("diagnostics.elapsed_micros", "not an integer"))? as u128),
    };
    Ok(ResultDocument {
        decision: wire.decision,
        gamma: parse_q("gamma", &wire.gamma)?,
        schedule,
        diagnostics: Diagnostics { solver, elapsed_micros, extra },
    })
}

pub fn emit_report(r: &ValidationReport, gamma: &Rational) -> String {
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| {
            serde_json::json!({
                "leg": v.leg,
                "kind": format!("{:?}", v.kind),
                "details": v.details,
            })
        })
        .collect();
    canonical(&serde_json::json!({
        "ok": r.ok,
        "gamma": gamma.to_string(),
        "leg_costs": r.leg_costs.iter().map(|c| c.as_ref().map(|c| c.to_string())).collect::<Vec<_>>(),
        "violations": violations,
    }))
}

/// Sidecar for a gadget instance: the role of every agent and the two
/// paths of every variable.
pub fn emit_roles(g: &GadgetInstance) -> String {
    let roles: Vec<Value> = g
        .roles
        .iter()
        .enumerate()
        .map(|(agent, role)| match role {
            Role::Variable(i) => serde_json::json!({"agent": agent, "role": "variable", "variable": i}),
            Role::Clause { clause, node } => {
                serde_json::json!({"agent": agent, "role": "clause", "clause": clause, "node": node})
            }
            Role::Separating(tube) => {
                let site = &g.tubes[*tube];
                serde_json::json!({"agent": agent, "role": "separating", "edge": site.edge, "separator": site.separator})
            }
        })
        .collect();
    let paths: Vec<Value> = g
        .paths
        .iter()
        .enumerate()
        .map(|(i, [f, t])| {
            let pts = |p: &delivery_core::gadget::Path| p.points.iter().map(point_value).collect::<Vec<_>>();
            serde_json::json!({"variable": i, "false": pts(f), "true": pts(t)})
        })
        .collect();
    canonical(&serde_json::json!({
        "version": ROLES_VERSION,
        "variant": VariantWire::from(g.params.variant),
        "zeta": g.params.zeta.to_string(),
        "delta": g.params.delta.to_string(),
        "gamma": g.params.gamma().map(|x| x.to_string()),
        "roles": roles,
        "paths": paths,
    }))
}

pub(crate) fn point_value(p: &Point) -> Value {
    serde_json::to_value(PointWire::from_point(p)).expect("points serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use delivery_core::q;

    const MINIMAL: &str = r#"{"version":"delivery-instance/1","vertices":2,"edges":[[0,1,"3/2"]],
        "source":0,"target":1,"variant":"returning","agents":[{"at":[0,"1/2"],"budget":"4"}]}"#;

    #[test]
    fn minimal_document() {
        let inst = parse_instance(MINIMAL).unwrap();
        assert_eq!(inst.graph().edge_count(), 1);
        assert_eq!(inst.agents()[0].start, Point::OnEdge { edge: 0, offset: q(1, 2) });
        let text = emit_instance(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
        assert_eq!(emit_instance(&parse_instance(&text).unwrap()), text);
    }

    #[test]
    fn sorted_keys() {
        let text = emit_instance(&parse_instance(MINIMAL).unwrap());
        let keys: Vec<usize> = ["\"agents\"", "\"edges\"", "\"source\"", "\"target\"", "\"variant\"", "\"version\"", "\"vertices\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]), "{text}");
    }

    #[test]
    fn rejects_bad_input() {
        let zero = MINIMAL.replace("\"3/2\"", "\"1/0\"");
        assert!(matches!(parse_instance(&zero), Err(DocError::Field { .. })));
        let neg = MINIMAL.replace("\"3/2\"", "\"-1\"");
        assert!(matches!(parse_instance(&neg), Err(DocError::Invariant(_))));
        let far = MINIMAL.replace("[0,\"1/2\"]", "[0,\"2\"]");
        assert!(matches!(parse_instance(&far), Err(DocError::Field { .. })));
        let ver = MINIMAL.replace("delivery-instance/1", "delivery-instance/9");
        assert!(matches!(parse_instance(&ver), Err(DocError::Version { .. })));
        assert!(matches!(parse_instance("{\"version\": "), Err(DocError::Syntax { .. })));
    }

    #[test]
    fn endpoint_offsets_become_vertices() {
        let text = MINIMAL.replace("[0,\"1/2\"]", "[0,\"3/2\"]");
        assert_eq!(parse_instance(&text).unwrap().agents()[0].start, Point::Vertex(1));
    }

    #[test]
    fn results_round_trip() {
        let inst = parse_instance(MINIMAL).unwrap();
        let legs = vec![Leg { agent: 0, pickup: Point::Vertex(0), dropoff: Point::Vertex(1) }];
        let mut extra = BTreeMap::new();
        extra.insert("relay".into(), serde_json::json!([0]));
        let doc = ResultDocument {
            decision: DecisionKind::AugmentedFeasible,
            gamma: q(2, 1),
            schedule: Some(Schedule::new(legs)),
            diagnostics: Diagnostics { solver: "aug2".into(), elapsed_micros: Some(17), extra },
        };
        let text = emit_result(&doc);
        assert_eq!(parse_result(&text, inst.graph()).unwrap(), doc);
        assert_eq!(parse_schedule(&text, inst.graph()).unwrap(), doc.schedule.clone().unwrap());

        let none = ResultDocument { decision: DecisionKind::Infeasible, gamma: Rational::ONE, schedule: None, diagnostics: Diagnostics { solver: "tree".into(), ..Default::default() } };
        let text = emit_result(&none);
        assert!(!text.contains("schedule"));
        assert_eq!(parse_result(&text, inst.graph()).unwrap(), none);
    }

    #[test]
    fn schedule_documents() {
        let inst = parse_instance(MINIMAL).unwrap();
        let s = Schedule::new(vec![Leg { agent: 0, pickup: Point::Vertex(0), dropoff: Point::OnEdge { edge: 0, offset: q(1, 3) } }]);
        let text = emit_schedule(&s);
        assert!(text.contains("\"1/3\""));
        assert_eq!(parse_schedule(&text, inst.graph()).unwrap(), s);
    }
}
