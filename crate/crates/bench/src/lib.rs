//! Criterion benchmarks for `paircorr-core`; see `benches/`.
