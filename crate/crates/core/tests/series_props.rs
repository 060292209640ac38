use num_bigint::BigInt;
use proptest::prelude::*;

use wallcross::series::{dt_series, dt_series_recursive, macmahon, series_pow, totient, verify_identity, IntSeries};

/// Rows that fit under `cap` entrywise, are weakly decreasing and sum to `n`.
fn rows_under(n: u32, cap: &[u32]) -> Vec<Vec<u32>> {
    fn go(n: u32, cap: &[u32], max: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(acc.clone());
            return;
        }
        let Some((&c, rest)) = cap.split_first() else { return };
        for x in (1..=c.min(max).min(n)).rev() {
            acc.push(x);
            go(n - x, rest, x, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, cap, u32::MAX, &mut Vec::new(), &mut out);
    out
}

/// Plane partitions of `n` counted by listing them row by row.
fn plane_partitions(n: u32) -> u64 {
    fn go(n: u32, cap: &[u32]) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=n).flat_map(|k| rows_under(k, cap)).map(|row| go(n - row.iter().sum::<u32>(), &row)).sum()
    }
    go(n, &vec![n; n as usize])
}

#[test]
fn macmahon_counts_plane_partitions() {
    let m = macmahon(9);
    let listed: Vec<BigInt> = (0..=9).map(|n| plane_partitions(n).into()).collect();
    assert_eq!(m.coeffs, listed);
}

#[test]
fn three_way_identity() {
    for r in 1..=3 {
        for order in 0..=10 {
            let rep = verify_identity(r, order).unwrap();
            assert!(rep.equal, "r={r} D={order}: {:?}", rep.first_discrepancy);
        }
    }
}

#[test]
fn totient_sums_to_n() {
    for n in 1..=100u64 {
        let s: u64 = (1..=n).filter(|b| n % b == 0).map(totient).sum();
        assert_eq!(s, n);
    }
}

#[test]
fn coefficients_grow_with_r() {
    let rows: Vec<IntSeries> = (0..=4).map(|r| dt_series(7, r).unwrap()).collect();
    for pair in rows.windows(2) {
        assert!(pair[0].coeffs.iter().zip(&pair[1].coeffs).all(|(a, b)| a <= b));
    }
    assert_eq!(rows[0], IntSeries::one(7));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enumeration_matches_recursion(r in 0u32..=3, order in 0usize..=6) {
        prop_assert_eq!(dt_series(order, r).unwrap(), dt_series_recursive(order, r));
    }

    #[test]
    fn powers_add(r in 0u32..=3, s in 0u32..=3, order in 0usize..=12) {
        let m = macmahon(order);
        prop_assert_eq!(series_pow(&m, r, order).mul(&series_pow(&m, s, order)), series_pow(&m, r + s, order));
    }
}
