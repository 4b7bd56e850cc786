#![doc = include_str!("../README.md")]

pub mod bratteli;
pub mod dynamics;
pub mod error;
pub mod generalized;
pub mod graph;
pub mod language;
pub mod matrix;
pub mod par;
pub mod presentations;
pub mod verdict;
pub mod window;

pub use error::{Error, Result};
pub use generalized::Hierarchy;
pub use graph::{load_graph, DirectedGraph, LabelledGraph, Symbol, VertexId, VertexSet};
pub use language::Word;
pub use verdict::{Scope, Status, Verdict};
pub use window::Window;
