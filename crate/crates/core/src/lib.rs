//! Extending a precoloured edge subgraph of a planar simple graph to a full
//! list-edge-colouring: graph and embedding primitives, the bipartite kernel
//! engine, the reduction-loop solver with an exact oracle, a discharging
//! auditor, and sharpness-example generators.

pub mod bipartite;
pub mod discharge;
pub mod embedding;
pub mod generate;
pub mod graph;
pub mod json;
pub mod model;
pub mod report;
pub mod search;
pub mod solver;
pub mod vizing;

pub use embedding::{face_class, faces, Face, FaceSet, RotationSystem};
pub use graph::{split_precoloured_edges, DegreeClassIndex, EdgeId, Graph, VertexId};
pub use model::{
    residual_lists, residual_lists_for_subgraph, verify_colouring, Colour, FullColouring,
    ListAssignment, Params, Precolouring, ProblemInstance, Verdict,
};
pub use solver::{oracle_solve, solve, solve_with, SolveOutcome, SolverConfig};
pub use vizing::{extend_fresh_palette, vizing_edge_colour};
