//! Perfect matchings, edge-connectivity and gadget constructions for highly
//! edge-connected regular multigraphs.

pub mod connectivity;
pub mod constructions;
pub mod cubic;
pub mod error;
pub mod matching;
pub mod multigraph;
pub mod petersen;
pub mod par;

pub use error::{Error, Result};
pub use multigraph::{EdgeId, Matching, Multigraph, VertexId};
pub use par::Workers;
