//! Criterion benchmarks for `maslov-core`; see `benches/`.
