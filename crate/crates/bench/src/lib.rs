//! Benchmark harness crate; see `benches/cipc.rs`.
