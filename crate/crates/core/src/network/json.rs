use serde::{Deserialize, Serialize};

use super::{Comparator, Kind, Provenance, SortingNetwork, Stage};
use crate::construct::DepthCertificate;
use crate::error::{Error, Result};
use crate::graph::{graph_from_json, graph_to_json, GraphJson, VertexOrder};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageJson {
    pub cmp: Vec<(usize, usize, String)>,
}

/// Wire form of a network. Vertices and ranks are 1-based; `"dir"` puts the
/// smaller pebble on the first vertex, `"swap"` always exchanges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkJson {
    pub version: u32,
    pub graph: GraphJson,
    pub order: Vec<usize>,
    pub stages: Vec<StageJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<DepthCertificate>,
}

pub fn network_to_json(net: &SortingNetwork) -> NetworkJson {
    NetworkJson {
        version: FORMAT_VERSION,
        graph: graph_to_json(&net.graph, None),
        order: net.order.ranks().iter().map(|r| r + 1).collect(),
        stages: net
            .stages
            .iter()
            .map(|s| StageJson {
                cmp: s
                    .comparators
                    .iter()
                    .map(|c| {
                        let k = match c.kind {
                            Kind::Compare => "dir",
                            Kind::Swap => "swap",
                        };
                        (c.u + 1, c.v + 1, k.to_string())
                    })
                    .collect(),
            })
            .collect(),
        provenance: Some(net.provenance.clone()),
        certificate: net.certificate.clone(),
    }
}

pub fn network_from_json(j: &NetworkJson) -> Result<SortingNetwork> {
    if j.version != FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported network version {}", j.version)));
    }
    let (graph, _) = graph_from_json(&j.graph)?;
    if j.order.len() != graph.n() || j.order.iter().any(|&r| r == 0) {
        return Err(Error::Parse("order must list n 1-based ranks".into()));
    }
    let order = VertexOrder::from_ranks(j.order.iter().map(|r| r - 1).collect())?;
    let mut stages = Vec::with_capacity(j.stages.len());
    for (i, s) in j.stages.iter().enumerate() {
        let mut comparators = Vec::with_capacity(s.cmp.len());
        for (u, v, k) in &s.cmp {
            let kind = match k.as_str() {
                "dir" => Kind::Compare,
                "swap" => Kind::Swap,
                other => {
                    return Err(Error::Stage { stage: i, reason: format!("unknown comparator kind {other:?}") })
                }
            };
            if *u == 0 || *v == 0 {
                return Err(Error::Stage { stage: i, reason: "vertices are 1-based".into() });
            }
            comparators.push(Comparator { u: u - 1, v: v - 1, kind });
        }
        let stage = Stage::new(comparators);
        stage.validate(&graph).map_err(|reason| Error::Stage { stage: i, reason })?;
        stages.push(stage);
    }
    let mut net = SortingNetwork::new(graph, stages, order, j.provenance.clone().unwrap_or_default())?;
    net.certificate = j.certificate.clone();
    Ok(net)
}

impl SortingNetwork {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&network_to_json(self)).expect("network serializes")
    }

    pub fn from_json_str(s: &str) -> Result<SortingNetwork> {
        network_from_json(&serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlapping_stage_reports_index() {
        let text = r#"{"version":1,"graph":{"n":3,"edges":[[1,2],[2,3]],"family":null,"order":null},
            "order":[1,2,3],"stages":[{"cmp":[[1,2,"dir"]]},{"cmp":[[1,2,"dir"],[2,3,"dir"]]}]}"#;
        match SortingNetwork::from_json_str(text) {
            Err(Error::Stage { stage, .. }) => assert_eq!(stage, 1),
            other => panic!("expected stage error, got {other:?}"),
        }
        assert!(SortingNetwork::from_json_str("{not json").is_err());
    }

    #[test]
    fn handwritten_single_stage() {
        let text = r#"{"version":1,"graph":{"n":2,"edges":[[1,2]],"family":null,"order":null},
            "order":[2,1],"stages":[{"cmp":[[2,1,"dir"]]}]}"#;
        let net = SortingNetwork::from_json_str(text).unwrap();
        // min lands on vertex 2, which has rank 1
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let out = net.execute(&[a, b]).unwrap();
            assert_eq!(out, vec![a.max(b), a.min(b)]);
            assert!(net.is_sorted(&out));
        }
    }
}
