//! Criterion benchmarks for the exhaustive sweeps live in `benches/`.
//! This library only holds shared inputs.

use qeuler_core::DecoratedPermutation;

/// Every element of `S_n^•(1ⁿ)`, the input set for the bijection benches.
pub fn schedule_one_level(n: usize) -> Vec<DecoratedPermutation> {
    qeuler_core::schedule::enumerate_sched_1n(n, None).collect()
}
