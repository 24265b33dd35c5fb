//! Combinatorics of free group automorphisms: train track maps, substitution
//! languages, laminary languages on marked graphs, and covering bounds for
//! endpoint sets in visual metrics.

pub mod graph_map;
pub mod hausdorff;
pub mod lamination;
pub mod marked_graph;
pub mod substitution;
pub mod words;

pub use graph_map::{GraphSelfMap, Orientability, TransitionMatrix, TrainTrackVerdict};
pub use marked_graph::{CollapseData, MarkedMetricGraph};
pub use substitution::{FactorLanguage, Substitution};
pub use words::{EdgeAlphabet, EdgePath, Letter};
