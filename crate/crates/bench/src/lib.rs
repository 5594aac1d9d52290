//! Benchmarks for `unramified-core`; see `benches/core.rs`.
