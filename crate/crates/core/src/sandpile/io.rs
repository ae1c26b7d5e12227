//! Sandpile files: `{"graph": <graph file>, "heights": {vertex: int}}`.
//! Vertices missing from `heights` hold no sand.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::io::GraphFile;

use super::config::{Sandpile, SandpileConfig};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SandpileFile {
    pub graph: GraphFile,
    #[serde(default)]
    pub heights: BTreeMap<String, u64>,
}

/// Result of stabilizing a file's configuration, keyed by vertex label.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizeReport {
    pub heights: BTreeMap<String, u64>,
    pub topples: BTreeMap<String, u64>,
}

pub fn parse_sandpile(text: &str) -> Result<(Sandpile, SandpileConfig)> {
    let file: SandpileFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let loaded = file.graph.into_graph()?;
    let pile = Sandpile::new(&loaded.graph)?;
    let mut heights = vec![0u64; pile.vertex_count()];
    for (label, h) in file.heights {
        let v = loaded.graph.vertex(&label).ok_or_else(|| Error::Parse(format!("unknown vertex {label:?} in heights")))?;
        heights[v] = h;
    }
    let config = pile.config(heights)?;
    Ok((pile, config))
}

pub fn stabilize_report(pile: &Sandpile, config: &SandpileConfig) -> StabilizeReport {
    let (stable, fired) = pile.stabilize(config);
    let g = pile.graph();
    let keyed = |xs: &[u64]| pile.vertices().map(|v| (g.label(v).to_string(), xs[v])).collect();
    StabilizeReport { heights: keyed(&stable.heights), topples: keyed(&fired) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn house_file_round_trip() {
        let text = r#"{"graph": {"vertices": ["v1", "v2", "s"],
                                 "edges": [["v1", "v2", 1], ["v2", "s", 1], ["v1", "s", 1]],
                                 "sink": "s"},
                       "heights": {"v1": 2, "v2": 2}}"#;
        let (pile, config) = parse_sandpile(text).unwrap();
        let r = stabilize_report(&pile, &config);
        assert_eq!(r.heights, BTreeMap::from([("v1".into(), 1), ("v2".into(), 1)]));
        assert_eq!(r.topples, BTreeMap::from([("v1".into(), 1), ("v2".into(), 1)]));
    }

    #[test]
    fn unknown_vertex_is_rejected() {
        let text = r#"{"graph": {"vertices": [1, 2], "edges": [[1, 2, 1]], "sink": 2}, "heights": {"9": 1}}"#;
        assert!(matches!(parse_sandpile(text), Err(Error::Parse(_))));
    }
}
