//! Criterion benchmarks for `qtorus-core` live under `benches/`.
