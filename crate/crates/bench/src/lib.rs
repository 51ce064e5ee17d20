//! Criterion benchmarks for the hot paths of `fairtrade`: metric evaluation,
//! threshold sweeps, oracle frontiers, exhaustive search, classifier training
//! and massaging. Run with `cargo bench -p fairtrade-bench`.
