//! Criterion benchmarks for the kernel; see `benches/kernel.rs`.
