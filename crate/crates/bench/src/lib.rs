//! Criterion benchmarks for lascar-core live in benches/.
