//! Fixtures shared by the criterion benches.

use k3cert_core::arith::{rat, Rat};
use k3cert_core::condition::{construct_l, construct_l_even_h, Witness};

/// The degree-4 example `1 + T/7 + T^2 + T^3/7 + T^4` at p = 7.
pub fn worked_example() -> Vec<Rat> {
    vec![rat(1, 1), rat(1, 7), rat(1, 1), rat(1, 7), rat(1, 1)]
}

/// Witnesses of increasing degree, including the squared m = 10 case.
pub fn witnesses(p: u64) -> Vec<(usize, usize, Witness)> {
    [(2, 1), (5, 3), (8, 5), (10, 3), (10, 4)]
        .into_iter()
        .map(|(m, h)| {
            let w = if m == 10 && h % 2 == 0 { construct_l_even_h(p, h) } else { construct_l(p, m, h, None) };
            (m, h, w.expect("bench fixture constructs"))
        })
        .collect()
}

/// Deterministic pairs of small nonzero rationals.
pub fn hilbert_pairs(count: usize) -> Vec<(Rat, Rat)> {
    let mut state: i64 = 0x2545_f491;
    let mut next = move || {
        state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
        ((state >> 33) % 10_000).abs()
    };
    (0..count)
        .map(|_| {
            let a = rat(next() + 1, next() + 1);
            let b = rat(-(next() + 1), next() + 1);
            (a, b)
        })
        .collect()
}
