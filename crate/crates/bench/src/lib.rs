//! Criterion benchmarks for `gensearch-core`; see `benches/`.
//!
//! Run with `cargo bench -p gensearch-bench`.

use gensearch_core::{SearchInstance, TargetSet};

/// A uniform single-target instance on `2^qubits` items, the usual workload.
pub fn uniform_instance(qubits: u32) -> SearchInstance {
    let n_items = 1usize << qubits;
    SearchInstance::uniform(n_items, TargetSet::first(1, n_items).expect("r = 1 fits"))
        .expect("uniform instance")
}
