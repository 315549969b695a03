//! Criterion benchmarks for `gravwitness-core`; see `benches/`.
