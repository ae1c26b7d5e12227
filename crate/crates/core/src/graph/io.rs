//! JSON graph files.
//!
//! ```json
//! {"vertices": [1, 2, 3],
//!  "edges": [[1, 2, 1], [2, 3, "1/2"], [1, 3, "0.25"]],
//!  "sink": 3,
//!  "rotation": {"1": [0, 2], "2": [1, 0], "3": [2, 1]}}
//! ```
//!
//! Vertex ids may be JSON strings or numbers. Weights may be integers,
//! decimal strings or `"p/q"` strings. Rotation lists give edge indices
//! (positions in `edges`) in counter-clockwise order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::numerics::{parse_rational, rational_to_string, Rational};

use super::{Embedded, RotationSystem, WeightedGraph};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<Value>,
    pub edges: Vec<(Value, Value, Value)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sink: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<BTreeMap<String, Vec<usize>>>,
}

/// A graph read from a file, with its rotation system when one was given.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: WeightedGraph,
    pub rotation: Option<RotationSystem>,
}

impl LoadedGraph {
    pub fn embedded(&self) -> Result<Embedded> {
        let rot = self
            .rotation
            .clone()
            .ok_or_else(|| Error::IncompleteRotation("graph file has no rotation".into()))?;
        Embedded::new(self.graph.clone(), rot)
    }
}

pub(crate) fn id_string(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::Parse(format!("vertex id must be a string or number, got {other}"))),
    }
}

pub(crate) fn weight_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("weight must be a number or string, got {other}"))),
    }
}

impl GraphFile {
    pub fn into_graph(self) -> Result<LoadedGraph> {
        let vertices: Vec<String> = self.vertices.iter().map(id_string).collect::<Result<_>>()?;
        let edges: Vec<(String, String, Rational)> = self
            .edges
            .iter()
            .map(|(u, v, w)| Ok((id_string(u)?, id_string(v)?, weight_value(w)?)))
            .collect::<Result<_>>()?;
        let sink = self.sink.as_ref().map(id_string).transpose()?;
        let graph = WeightedGraph::new(&vertices, &edges, sink.as_deref())?;
        let rotation = match self.rotation {
            None => None,
            Some(map) => {
                let mut order = vec![None; graph.vertex_count()];
                for (label, es) in map {
                    let v = graph
                        .vertex(&label)
                        .ok_or_else(|| Error::IncompleteRotation(format!("unknown vertex {label:?}")))?;
                    order[v] = Some(es);
                }
                let order = order
                    .into_iter()
                    .enumerate()
                    .map(|(v, o)| {
                        o.ok_or_else(|| Error::IncompleteRotation(format!("no order for vertex {}", graph.label(v))))
                    })
                    .collect::<Result<_>>()?;
                Some(RotationSystem::new(order))
            }
        };
        Ok(LoadedGraph { graph, rotation })
    }

    pub fn from_graph(graph: &WeightedGraph, rotation: Option<&RotationSystem>) -> GraphFile {
        let label = |v: usize| Value::String(graph.label(v).to_string());
        GraphFile {
            vertices: (0..graph.vertex_count()).map(label).collect(),
            edges: graph
                .edges()
                .iter()
                .map(|e| (label(e.u), label(e.v), Value::String(rational_to_string(&e.weight))))
                .collect(),
            sink: graph.sink().map(label),
            rotation: rotation.map(|r| {
                (0..graph.vertex_count()).map(|v| (graph.label(v).to_string(), r.at(v).to_vec())).collect()
            }),
        }
    }
}

pub fn parse_graph(text: &str) -> Result<LoadedGraph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_graph()
}

pub fn graph_to_json(graph: &WeightedGraph, rotation: Option<&RotationSystem>) -> String {
    serde_json::to_string_pretty(&GraphFile::from_graph(graph, rotation)).expect("graph serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational;

    const K3: &str = r#"{"vertices":[1,2,3],"edges":[[1,2,1],[2,3,"1/2"],[1,3,"0.25"]],"sink":3,
        "rotation":{"1":[0,2],"2":[1,0],"3":[2,1]}}"#;

    #[test]
    fn parses_weights_and_rotation() {
        let g = parse_graph(K3).unwrap();
        assert_eq!(g.graph.edge(1).weight, rational(1, 2));
        assert_eq!(g.graph.edge(2).weight, rational(1, 4));
        assert_eq!(g.graph.sink(), Some(2));
        assert_eq!(g.embedded().unwrap().face_count(), 2);
    }

    #[test]
    fn round_trips() {
        let g = parse_graph(K3).unwrap();
        let text = graph_to_json(&g.graph, g.rotation.as_ref());
        let h = parse_graph(&text).unwrap();
        assert_eq!(g.graph, h.graph);
        assert_eq!(g.rotation, h.rotation);
    }

    #[test]
    fn rejects_bad_weight() {
        let err = parse_graph(r#"{"vertices":[1,2],"edges":[[1,2,"x"]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }
}
