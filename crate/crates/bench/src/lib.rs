//! Benchmarks for the exact kernels live in `benches/`.
