//! Incremental cycle detection, topological ordering, and strong
//! component maintenance under on-line arc insertions.
//!
//! Two engines cover the density spectrum: [`SparseEngine`] runs a
//! budgeted two-way search per insertion, [`DenseEngine`] a one-way
//! search over priority-bucketed arcs. Both report an explicit witness
//! cycle on the first insertion that closes a cycle. Their SCC variants
//! keep going past cycles, merging strong components instead.

mod order_list;

pub mod dense;
pub mod oracle;
pub mod scc;
pub mod sparse;
pub mod stream;
pub mod workloads;

pub use dense::{BucketHeap, DenseEngine};
pub use scc::{DisjointSets, PairMatrix, SccDenseEngine, SccSparseEngine};
pub use sparse::{delta_for, SparseEngine};
pub use stream::{
    parse_arc_stream, Arc, ArcStream, EngineError, InsertionOutcome, ParseError,
    TraversalCounters, VertexId, WitnessCycle,
};
pub use workloads::{
    gen_dense_adversary, gen_random_dag_stream, gen_random_stream, gen_sparse_adversary,
    sparse_adversary_shape, SparseAdversaryShape, WorkloadError,
};
