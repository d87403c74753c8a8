use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::error::{Error, Result};
use crate::instances::GeneratorConfig;
use crate::model::NominalCosts;
use crate::problems::{Arc, CombinatorialProblem, GraphInstance, GraphKind, Instance, SelectionInstance};

pub const FORMAT_VERSION: u32 = 1;

/// An instance together with the provenance stored next to it.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceDocument {
    pub instance: Instance,
    pub seed: Option<u64>,
    pub generator: Option<GeneratorConfig>,
}

impl InstanceDocument {
    pub fn new(instance: impl Into<Instance>) -> Self {
        InstanceDocument {
            instance: instance.into(),
            seed: None,
            generator: None,
        }
    }

    pub fn generated(instance: impl Into<Instance>, config: GeneratorConfig) -> Self {
        InstanceDocument {
            instance: instance.into(),
            seed: Some(config.seed),
            generator: Some(config),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawArc {
    tail: usize,
    head: usize,
    cost: Number,
}

#[derive(Serialize, Deserialize)]
struct RawDocument {
    format: u32,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    directed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arcs: Option<Vec<RawArc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    costs: Option<Vec<Number>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<GeneratorConfig>,
}

/// Integral costs are written as JSON integers, others in shortest round-trip form.
fn cost_number(c: f64) -> Number {
    if c.fract() == 0.0 && c.abs() < 9.007_199_254_740_992e15 {
        Number::from(c as i64)
    } else {
        Number::from_f64(c).expect("costs are finite")
    }
}

pub fn to_json_string(doc: &InstanceDocument) -> String {
    let costs = doc.instance.nominal().values();
    let mut raw = RawDocument {
        format: FORMAT_VERSION,
        kind: doc.instance.kind_name().to_string(),
        nodes: None,
        directed: None,
        arcs: None,
        s: None,
        t: None,
        p: None,
        costs: None,
        seed: doc.seed,
        generator: doc.generator,
    };
    match &doc.instance {
        Instance::Selection(s) => {
            raw.p = Some(s.p());
            raw.costs = Some(costs.iter().map(|&c| cost_number(c)).collect());
        }
        Instance::Graph(g) => {
            raw.nodes = Some(g.node_count());
            raw.arcs = Some(
                g.arcs()
                    .iter()
                    .zip(costs)
                    .map(|(a, &c)| RawArc {
                        tail: a.tail,
                        head: a.head,
                        cost: cost_number(c),
                    })
                    .collect(),
            );
            if let GraphKind::ShortestPath { source, target, directed } = g.kind() {
                raw.s = Some(source);
                raw.t = Some(target);
                raw.directed = Some(directed);
            }
        }
    }
    let mut text = serde_json::to_string_pretty(&raw).expect("instance documents serialize");
    text.push('\n');
    text
}

fn missing(field: &str, kind: &str) -> Error {
    Error::Parse {
        context: format!("field \"{field}\""),
        message: format!("required for kind \"{kind}\""),
    }
}

fn number(n: &Number, context: impl FnOnce() -> String) -> Result<f64> {
    n.as_f64().ok_or_else(|| Error::Parse {
        context: context(),
        message: format!("{n} is not a number"),
    })
}

/// Parses an instance document; `source` names the input in error messages.
pub fn from_json_str(text: &str, source: &str) -> Result<InstanceDocument> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        context: format!("{source} line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    if raw.format != FORMAT_VERSION {
        return Err(Error::Parse {
            context: "field \"format\"".into(),
            message: format!("unsupported format {}, expected {FORMAT_VERSION}", raw.format),
        });
    }
    let kind = raw.kind.as_str();
    let instance: Instance = match kind {
        "selection" => {
            let p = raw.p.ok_or_else(|| missing("p", kind))?;
            let costs = raw.costs.as_ref().ok_or_else(|| missing("costs", kind))?;
            let costs = costs
                .iter()
                .enumerate()
                .map(|(i, c)| number(c, || format!("costs[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            SelectionInstance::new(p, NominalCosts::new(costs)?)?.into()
        }
        "shortest_path" | "spanning_tree" => {
            let nodes = raw.nodes.ok_or_else(|| missing("nodes", kind))?;
            let raw_arcs = raw.arcs.as_ref().ok_or_else(|| missing("arcs", kind))?;
            let arcs = raw_arcs.iter().map(|a| Arc::new(a.tail, a.head)).collect();
            let costs = raw_arcs
                .iter()
                .enumerate()
                .map(|(i, a)| number(&a.cost, || format!("arcs[{i}].cost")))
                .collect::<Result<Vec<_>>>()?;
            let graph_kind = if kind == "shortest_path" {
                GraphKind::ShortestPath {
                    source: raw.s.ok_or_else(|| missing("s", kind))?,
                    target: raw.t.ok_or_else(|| missing("t", kind))?,
                    directed: raw.directed.unwrap_or(true),
                }
            } else {
                GraphKind::SpanningTree
            };
            GraphInstance::new(nodes, arcs, NominalCosts::new(costs)?, graph_kind)?.into()
        }
        other => {
            return Err(Error::Parse {
                context: "field \"kind\"".into(),
                message: format!("unknown kind \"{other}\""),
            })
        }
    };
    Ok(InstanceDocument {
        instance,
        seed: raw.seed,
        generator: raw.generator,
    })
}

pub fn save_instance(path: impl AsRef<Path>, doc: &InstanceDocument) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_json_string(doc)).map_err(|e| Error::io(path, e))
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<InstanceDocument> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json_str(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_layered, gen_twopath, CostType, GeneratorKind};

    #[test]
    fn generated_round_trip() {
        let cfg = GeneratorConfig {
            kind: GeneratorKind::TwoPath { length: 50, density: 0.1 },
            seed: 3,
        };
        let doc = InstanceDocument::generated(cfg.generate().unwrap(), cfg);
        let text = to_json_string(&doc);
        assert_eq!(from_json_str(&text, "mem").unwrap(), doc);
        // Same seed, same bytes.
        let again = InstanceDocument::generated(gen_twopath(50, 0.1, 3).unwrap(), cfg);
        assert_eq!(to_json_string(&again), text);
    }

    #[test]
    fn fractional_costs_round_trip_bit_exact() {
        let s = SelectionInstance::new(2, NominalCosts::new(vec![0.1, 1.0 / 3.0, 7.0, 2e-17]).unwrap()).unwrap();
        let doc = InstanceDocument::new(s);
        let text = to_json_string(&doc);
        assert!(text.contains("\"kind\": \"selection\""));
        assert!(text.contains("7,") || text.contains("7\n"));
        assert_eq!(from_json_str(&text, "mem").unwrap(), doc);
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        let doc = InstanceDocument::new(gen_layered(2, 3, CostType::A, 1).unwrap());
        save_instance(&path, &doc).unwrap();
        assert_eq!(load_instance(&path).unwrap(), doc);
        assert!(matches!(load_instance(dir.path().join("nope.json")), Err(Error::Io { .. })));
    }

    #[test]
    fn hand_written_instance() {
        let text = r#"{"format": 1, "kind": "shortest_path", "nodes": 2, "s": 0, "t": 1,
            "arcs": [{"tail": 0, "head": 1, "cost": 4}, {"tail": 0, "head": 1, "cost": 5.0}]}"#;
        let doc = from_json_str(text, "mem").unwrap();
        assert_eq!(doc.instance, crate::regret::tests::parallel_edges());
        assert_eq!(doc.seed, None);
    }

    #[test]
    fn spanning_tree_round_trip() {
        let g = GraphInstance::spanning_tree(
            3,
            vec![Arc::new(0, 1), Arc::new(1, 2), Arc::new(0, 2)],
            NominalCosts::new(vec![1.0, 2.0, 3.5]).unwrap(),
        )
        .unwrap();
        let doc = InstanceDocument::new(g);
        assert_eq!(from_json_str(&to_json_string(&doc), "mem").unwrap(), doc);
    }

    #[test]
    fn parse_errors_carry_context() {
        let err = from_json_str(r#"{"format": 1, "kind": "shortest_path", "nodes": 2, "s": 0, "t": 1}"#, "mem")
            .unwrap_err();
        match err {
            Error::Parse { context, .. } => assert!(context.contains("arcs")),
            e => panic!("{e}"),
        }
        let err = from_json_str("{\n  \"format\": 1,\n  \"kind\": ]", "f.json").unwrap_err();
        match err {
            Error::Parse { context, .. } => assert!(context.contains("f.json line 3"), "{context}"),
            e => panic!("{e}"),
        }
        assert!(matches!(
            from_json_str(r#"{"format": 2, "kind": "selection"}"#, "mem"),
            Err(Error::Parse { .. })
        ));
    }
}
