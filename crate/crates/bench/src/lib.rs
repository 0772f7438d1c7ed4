//! Criterion benchmarks for the metrics, the special functions and the
//! sampling campaigns. Run with `cargo bench -p pointpair-bench`.
