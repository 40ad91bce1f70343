//! Instance and colouring files. The instance document embeds the graph
//! schema (vertices, edges, optional rotation) and adds lists, the
//! precolouring, parameters, and optional surface/seed metadata. Edge ids
//! are indices into the edges array.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discharge::SurfaceSpec;
use crate::embedding::RotationSystem;
use crate::graph::Graph;
use crate::model::{
    Colour, FullColouring, ListAssignment, ModelError, Params, Precolouring, ProblemInstance,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Format(u32),
    #[error("field {field}: key {key:?} is not an id")]
    BadKey { field: &'static str, key: String },
    #[error("vertices must be exactly 0..{want}, got {got:?}")]
    BadVertexSet { want: usize, got: Vec<usize> },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error("colouring misses edge {0}")]
    MissingColour(usize),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ParamsFile {
    #[serde(rename = "Delta")]
    pub delta: usize,
    pub t: usize,
    pub d: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SurfaceFile {
    pub euler: i64,
}

/// On-disk instance document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceFile {
    pub format: u32,
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation: Option<BTreeMap<String, Vec<usize>>>,
    pub lists: BTreeMap<String, Vec<Colour>>,
    pub precoloured: BTreeMap<String, Colour>,
    pub params: ParamsFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn parse_key(field: &'static str, key: &str) -> Result<usize, FileError> {
    key.parse().map_err(|_| FileError::BadKey { field, key: key.to_string() })
}

impl InstanceFile {
    pub fn from_instance(instance: &ProblemInstance) -> Self {
        InstanceFile::from_instance_with(instance, None, None)
    }

    pub fn from_instance_with(
        instance: &ProblemInstance,
        surface: Option<SurfaceSpec>,
        seed: Option<u64>,
    ) -> Self {
        let graph = &instance.graph;
        InstanceFile {
            format: FORMAT_VERSION,
            vertices: graph.vertices().collect(),
            edges: graph.edges().to_vec(),
            rotation: instance.rot.as_ref().map(|r| {
                graph
                    .vertices()
                    .map(|v| (v.to_string(), r.order_at(v).to_vec()))
                    .collect()
            }),
            lists: instance
                .lists
                .iter()
                .map(|(e, set)| (e.to_string(), set.iter().copied().collect()))
                .collect(),
            precoloured: instance.precol.iter().map(|(e, c)| (e.to_string(), c)).collect(),
            params: ParamsFile {
                delta: instance.params.delta,
                t: instance.params.t,
                d: instance.params.d,
            },
            surface: surface.map(|s| SurfaceFile { euler: s.euler }),
            seed,
        }
    }

    pub fn to_instance(&self) -> Result<ProblemInstance, FileError> {
        if self.format != FORMAT_VERSION {
            return Err(FileError::Format(self.format));
        }
        let n = self.vertices.len();
        let mut sorted = self.vertices.clone();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            return Err(FileError::BadVertexSet { want: n, got: self.vertices.clone() });
        }
        let graph = Graph::new(n, &self.edges)?;
        let rot = match &self.rotation {
            None => None,
            Some(map) => {
                let mut order = vec![Vec::new(); n];
                for (key, cycle) in map {
                    let v = parse_key("rotation", key)?;
                    if v >= n {
                        return Err(FileError::BadKey { field: "rotation", key: key.clone() });
                    }
                    order[v] = cycle.clone();
                }
                Some(RotationSystem::new(&graph, order)?)
            }
        };
        let mut lists = BTreeMap::new();
        for (key, colours) in &self.lists {
            lists.insert(parse_key("lists", key)?, colours.iter().copied().collect());
        }
        let mut precol = BTreeMap::new();
        for (key, &colour) in &self.precoloured {
            precol.insert(parse_key("precoloured", key)?, colour);
        }
        let inst = ProblemInstance::new(
            graph,
            rot,
            ListAssignment::new(lists),
            Precolouring::new(precol),
            Params { delta: self.params.delta, t: self.params.t, d: self.params.d },
        )?;
        Ok(inst)
    }

    pub fn surface_spec(&self) -> SurfaceSpec {
        self.surface
            .as_ref()
            .map(|s| SurfaceSpec { euler: s.euler })
            .unwrap_or(SurfaceSpec::PLANE)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// On-disk colouring document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ColouringFile {
    pub format: u32,
    pub colouring: BTreeMap<String, Colour>,
}

impl ColouringFile {
    pub fn from_colouring(col: &FullColouring) -> Self {
        ColouringFile {
            format: FORMAT_VERSION,
            colouring: col.as_map().into_iter().map(|(e, c)| (e.to_string(), c)).collect(),
        }
    }

    pub fn to_colouring(&self, graph: &Graph) -> Result<FullColouring, FileError> {
        if self.format != FORMAT_VERSION {
            return Err(FileError::Format(self.format));
        }
        let mut map = BTreeMap::new();
        for (key, &c) in &self.colouring {
            map.insert(parse_key("colouring", key)?, c);
        }
        for e in graph.edge_ids() {
            if !map.contains_key(&e) {
                return Err(FileError::MissingColour(e));
            }
        }
        Ok(FullColouring::new(graph.edge_ids().map(|e| map[&e]).collect()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("colouring files serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(text)?)
    }
}
