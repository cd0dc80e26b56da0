//! Criterion benchmarks for `charclass-core`; see `benches/`.
