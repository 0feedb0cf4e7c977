//! External-memory construction of overlap and string graphs from a read collection.
//!
//! Reads are indexed once (BWT, generalized suffix array, LCP array). The
//! overlap graph is then built by scans over those lists and over
//! intermediate record lists, and transitively reduced into the string graph
//! under a fixed budget of resident arc records. All lists are accessed
//! strictly sequentially through [`seqlist`].

pub mod error;
pub mod graph;
pub mod index;
pub mod intervals;
pub mod labeling;
pub mod oracle;
pub mod pipeline;
pub mod reduce;
pub mod seedscan;
pub mod seqlist;

pub use error::{Error, Result};
pub use graph::{
    assemble_path, build_overlap_graph, export_graph, overlap_from_index, ArcRecord, OverlapGraph,
    OverlapOptions, OverlapStats,
};
pub use index::{build_index, ingest_reads, IndexBundle, ReadFormat, ReadSet};
pub use intervals::{LabeledInterval, StringInterval};
pub use labeling::Encoding;
pub use reduce::{reduce_overlap_graph, ReduceStats};
pub use seqlist::{IoSnapshot, Storage};
