use proptest::prelude::*;
use wlab_core::repcount::{
    brute_force_count, build_biquadrate_table, build_two_square_table, sieve_representations, SieveStrategy,
};

#[test]
fn strategies_agree_at_1e5() {
    for s in [3, 4] {
        let direct = sieve_representations(s, 100_000, SieveStrategy::Direct).unwrap();
        let ntt = sieve_representations(s, 100_000, SieveStrategy::Ntt).unwrap();
        assert_eq!(direct.counts(), ntt.counts(), "s={s}");
    }
}

/// Lattice points `(x_1, x_2, y)` with `x_1^2 + x_2^2 + sum y_j^4 <= x`.
fn lattice_points(s: u32, x: u64) -> u128 {
    fn tuples(left: u32, budget: u64) -> u128 {
        if left == 0 {
            // pairs with x_1^2 + x_2^2 <= budget
            return (1..)
                .take_while(|x1: &u64| x1 * x1 < budget)
                .map(|x1| wlab_core::arith::modular::isqrt(budget - x1 * x1) as u128)
                .sum();
        }
        (1..).take_while(|y: &u64| y.pow(4) < budget).map(|y| tuples(left - 1, budget - y.pow(4))).sum()
    }
    tuples(s, x)
}

#[test]
fn mass_identity_at_1e4() {
    for s in [3u32, 4] {
        let table = sieve_representations(s, 10_000, SieveStrategy::Ntt).unwrap();
        assert_eq!(table.total(), lattice_points(s, 10_000), "s={s}");
    }
}

#[test]
fn support_starts_at_s_plus_two() {
    for s in [3u32, 4] {
        let t = sieve_representations(s, 200, SieveStrategy::Direct).unwrap();
        let first = (1..=200).find(|&n| t.get(n) > 0).unwrap();
        assert_eq!(first, s as u64 + 2);
    }
}

#[test]
fn counts_do_not_depend_on_x_max() {
    for s in [3, 4] {
        let small = sieve_representations(s, 3000, SieveStrategy::Ntt).unwrap();
        let large = sieve_representations(s, 40_000, SieveStrategy::Direct).unwrap();
        assert!((1..=3000).all(|n| small.get(n) == large.get(n)));
    }
}

#[test]
fn two_square_table_symmetry() {
    let t = build_two_square_table(5000).unwrap();
    assert_eq!(t.get(2), 1);
    for m in 1..=5000u64 {
        let mut distinct = 0;
        let mut diagonal = 0;
        let mut x = 1;
        while 2 * x * x <= m {
            let r = m - x * x;
            let y = (r as f64).sqrt().round() as u64;
            if y * y == r {
                if y == x { diagonal += 1 } else { distinct += 1 }
            }
            x += 1;
        }
        assert_eq!(t.get(m) as u64, 2 * distinct + diagonal, "m={m}");
    }
}

#[test]
fn biquadrate_table_low_end() {
    for s in [3u32, 4] {
        let t = build_biquadrate_table(s, 10_000).unwrap();
        assert_eq!(t.get(s as u64), 1);
        assert!((0..s as u64).all(|m| t.get(m) == 0));
        // 1 + ... + 1 + 16: the 16 can sit in any of s places
        assert_eq!(t.get(s as u64 + 15), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]
    #[test]
    fn sieve_matches_brute_force(s in 3u32..=4, n in 1u64..=60_000) {
        let t = sieve_representations(s, n, SieveStrategy::Ntt).unwrap();
        prop_assert_eq!(t.get(n), brute_force_count(s, n));
    }
}
