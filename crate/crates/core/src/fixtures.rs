//! Named example graphs with labelings, and the JSON graph-file format.
//!
//! In the two-colour figures red vertices carry label 1 and blue vertices
//! label 2.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, SimplicialGraph, VertexLabeling, VertexSet};

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub graph: SimplicialGraph,
    pub labeling: VertexLabeling,
    /// A covering collection of vertex subsets, for graphs that have one.
    pub collection: Option<Vec<VertexSet>>,
}

pub const BUILTIN_NAMES: &[&str] = &[
    "fig1-left",
    "fig1-middle",
    "fig1-right",
    "fig2-left",
    "fig2-middle",
    "fig2-right",
    "fig-a1",
    "fig-4",
    "p3",
    "p4",
    "zsq",
    "free2",
];

const RED3: [&str; 3] = ["x1", "x2", "x3"];
const BLUE3: [&str; 3] = ["x4", "x5", "x6"];

fn build(
    name: &'static str,
    description: &'static str,
    vertices: &[&str],
    edges: &[(&str, &str)],
    labels: &[u32],
) -> Fixture {
    let graph = SimplicialGraph::new(vertices.iter().copied(), edges.iter().copied()).expect("valid builtin graph");
    let map: BTreeMap<String, u32> = vertices.iter().map(|v| v.to_string()).zip(labels.iter().copied()).collect();
    let labeling = labeling_from_map(&graph, &map).expect("valid builtin labeling");
    Fixture { name, description, graph, labeling, collection: None }
}

fn two_colour(name: &'static str, description: &'static str, red: &[&str], blue: &[&str], edges: &[(&str, &str)]) -> Fixture {
    let vertices: Vec<&str> = red.iter().chain(blue).copied().collect();
    let labels: Vec<u32> = red.iter().map(|_| 1).chain(blue.iter().map(|_| 2)).collect();
    build(name, description, &vertices, edges, &labels)
}

fn uniform(name: &'static str, description: &'static str, vertices: &[&str], edges: &[(&str, &str)]) -> Fixture {
    build(name, description, vertices, edges, &vec![1; vertices.len()])
}

/// Path `x1-x2-x3` in red, path `x4-x5-x6` in blue, plus `rungs`.
fn six_vertex(name: &'static str, description: &'static str, rungs: &[(&'static str, &'static str)]) -> Fixture {
    let mut edges = vec![("x1", "x2"), ("x2", "x3"), ("x4", "x5"), ("x5", "x6")];
    edges.extend_from_slice(rungs);
    two_colour(name, description, &RED3, &BLUE3, &edges)
}

pub fn builtin(name: &str) -> Option<Fixture> {
    let fx = match name {
        "fig1-left" => six_vertex(
            "fig1-left",
            "strong two-colour kernel on a non-join graph",
            &[("x1", "x4"), ("x1", "x5"), ("x1", "x6"), ("x2", "x6"), ("x3", "x6")],
        ),
        "fig1-middle" | "fig-4" => {
            let mut fx = six_vertex(
                "fig1-middle",
                "finitely generated two-colour kernel that is not strong",
                &[("x1", "x4"), ("x1", "x5"), ("x2", "x5"), ("x2", "x6"), ("x3", "x6")],
            );
            if name == "fig-4" {
                fx.name = "fig-4";
                fx.description = "the not-strong graph with its four-triangle covering collection";
                let sets = [["x1", "x4", "x5"], ["x1", "x2", "x5"], ["x2", "x5", "x6"], ["x2", "x3", "x6"]];
                fx.collection = Some(sets.iter().map(|s| fx.graph.vertex_set(s).expect("known")).collect());
            }
            fx
        }
        "fig1-right" => six_vertex(
            "fig1-right",
            "two-colour kernel that is not finitely generated",
            &[("x1", "x4"), ("x3", "x6")],
        ),
        "fig2-left" => two_colour(
            "fig2-left",
            "strong kernel whose blue class is a non-join path",
            &["x1", "x2"],
            &["x3", "x4", "x5", "x6"],
            &[
                ("x1", "x2"),
                ("x3", "x4"),
                ("x4", "x5"),
                ("x5", "x6"),
                ("x1", "x3"),
                ("x1", "x4"),
                ("x1", "x5"),
                ("x1", "x6"),
                ("x2", "x6"),
            ],
        ),
        "fig2-middle" => two_colour(
            "fig2-middle",
            "strong kernel where neither sharper criterion applies",
            &["x1", "x2"],
            &["x3", "x4", "x5"],
            &[("x1", "x2"), ("x3", "x4"), ("x4", "x5"), ("x1", "x3"), ("x2", "x3"), ("x2", "x4"), ("x2", "x5")],
        ),
        "fig2-right" => two_colour(
            "fig2-right",
            "special two-colour kernel",
            &["x1", "x2"],
            &["x3", "x4", "x5"],
            &[("x1", "x2"), ("x3", "x4"), ("x4", "x5"), ("x1", "x3"), ("x1", "x4"), ("x1", "x5"), ("x2", "x4"), ("x2", "x5")],
        ),
        "fig-a1" => build(
            "fig-a1",
            "cone over the path a1-a2-a3-a4 with the cone point b sent to zero",
            &["a1", "a2", "a3", "a4", "b"],
            &[("a1", "a2"), ("a2", "a3"), ("a3", "a4"), ("a1", "b"), ("a2", "b"), ("a3", "b"), ("a4", "b")],
            &[1, 1, 1, 1, 0],
        ),
        "p3" => uniform("p3", "path on three vertices", &["a", "b", "c"], &[("a", "b"), ("b", "c")]),
        "p4" => uniform("p4", "path on four vertices", &["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")]),
        "zsq" => uniform("zsq", "single edge; the RAAG is Z^2", &["a", "b"], &[("a", "b")]),
        "free2" => uniform("free2", "two isolated vertices; the RAAG is free of rank 2", &["a", "b"], &[]),
        _ => return None,
    };
    Some(fx)
}

/// Like [`VertexLabeling::from_map`], keeping the dimension as the largest
/// label used.
pub fn labeling_from_map(graph: &SimplicialGraph, map: &BTreeMap<String, u32>) -> Result<VertexLabeling, GraphError> {
    VertexLabeling::from_map(graph, map)
}

/// On-disk graph description: `vertices`, `edges` as name pairs, and an
/// optional `labels` map (label `0` sends a vertex to zero).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, u32>>,
}

#[derive(Debug, Error)]
pub enum GraphFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed graph file at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self, GraphFileError> {
        serde_json::from_str(text).map_err(|e| GraphFileError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, GraphFileError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| GraphFileError::Io { path: path.display().to_string(), source })?;
        GraphFile::parse(&text)
    }

    pub fn build(&self) -> Result<(SimplicialGraph, Option<VertexLabeling>), GraphFileError> {
        let graph = SimplicialGraph::new(&self.vertices, self.edges.iter().map(|[a, b]| (a, b)))?;
        let labeling = match &self.labels {
            Some(map) => Some(labeling_from_map(&graph, map)?),
            None => None,
        };
        Ok((graph, labeling))
    }

    pub fn from_graph(graph: &SimplicialGraph, labeling: Option<&VertexLabeling>) -> Self {
        GraphFile {
            vertices: graph.names().to_vec(),
            edges: graph.edges().into_iter().map(|(a, b)| [a, b]).collect(),
            labels: labeling.map(|l| l.to_map(graph)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_builds() {
        for name in BUILTIN_NAMES {
            let fx = builtin(name).unwrap();
            assert_eq!(fx.name, *name);
            assert_eq!(fx.labeling.len(), fx.graph.len());
        }
        assert!(builtin("nope").is_none());
        let fig4 = builtin("fig-4").unwrap();
        assert_eq!(fig4.collection.unwrap().len(), 4);
        assert_eq!(builtin("fig-a1").unwrap().labeling.killed().len(), 1);
    }

    #[test]
    fn graph_file_round_trip() {
        let fx = builtin("fig2-right").unwrap();
        let file = GraphFile::from_graph(&fx.graph, Some(&fx.labeling));
        let text = serde_json::to_string(&file).unwrap();
        let back = GraphFile::parse(&text).unwrap();
        let (g, l) = back.build().unwrap();
        assert_eq!(g.edges(), fx.graph.edges());
        assert_eq!(l.unwrap(), fx.labeling);
    }

    #[test]
    fn graph_file_errors() {
        let unknown = r#"{"vertices":["a"],"edges":[],"colour":1}"#;
        assert!(matches!(GraphFile::parse(unknown), Err(GraphFileError::Parse { .. })));
        let bad_edge = r#"{"vertices":["a","b"],"edges":[["a"]]}"#;
        assert!(matches!(GraphFile::parse(bad_edge), Err(GraphFileError::Parse { .. })));
        let missing = r#"{"vertices":["a"],"edges":[["a","z"]]}"#;
        let err = GraphFile::parse(missing).unwrap().build().unwrap_err();
        assert!(err.to_string().contains('z'));
    }
}
