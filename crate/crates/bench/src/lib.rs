//! Criterion benchmarks for `acb-core`; see `benches/`.
