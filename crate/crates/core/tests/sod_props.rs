use std::collections::BTreeSet;

use num_integer::Integer;
use proptest::prelude::*;

use wallcross::rational::{frac, int};
use wallcross::sod::{
    check_generic, compositions, descriptor_is_valid, enumerate_summands, v_from_w, w_from_v, BoundsMode, MuParam,
};
use wallcross::Rational;

fn mu_strategy() -> impl Strategy<Value = MuParam> {
    prop_oneof![
        (-4i64..=2).prop_map(|n| MuParam::plus_eps(int(n))),
        (-4i64..=2).prop_map(|n| format!("{n}-eps").parse().unwrap()),
        (-40i64..=20, 1i64..=15).prop_map(|(p, q)| MuParam::exact(frac(p, q))),
    ]
}

/// Slope bounds recomputed from scratch: `(lo, hi)` with `eps` parts.
fn interval(r: u32, a: u32, mu: &MuParam) -> ((Rational, Rational), (Rational, Rational)) {
    let e = mu.eps_coeff();
    let shift = &mu.base + frac(a.into(), 2);
    ((-int(r.into()) - &shift, -e.clone()), (-shift, -e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn w_and_v_roundtrip(
        (parts, d_prime, w) in prop::collection::vec(1u32..=4, 0..=4).prop_flat_map(|parts| {
            let k = parts.len();
            (Just(parts), 0u32..=4, prop::collection::vec(-20i64..=20, k))
        })
    ) {
        let v = v_from_w(&w, &parts, d_prime).unwrap();
        prop_assert_eq!(w_from_v(&v, &parts, d_prime).unwrap(), w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn summands_recheck(d in 0u32..=5, r in 0u32..=2, a in 0u32..=2, mu in mu_strategy()) {
        let d_for_check = d.max(1);
        for mode in [BoundsMode::Closed, BoundsMode::Open] {
            if mode == BoundsMode::Open && !check_generic(&mu, d_for_check) {
                prop_assert!(d == 0 || enumerate_summands(d, r, a, &mu, mode).is_err());
                continue;
            }
            let list = enumerate_summands(d, r, a, &mu, mode).unwrap();
            prop_assert!(list.windows(2).all(|w| w[0] < w[1]), "not strictly ordered");
            prop_assert_eq!(list.first().map(|s| (s.d_prime, s.parts.len())), Some((d, 0)));
            let ((lo0, lo1), (hi0, hi1)) = interval(r, a, &mu);
            for s in &list {
                prop_assert!(descriptor_is_valid(s, d, r, a, &mu, mode));
                let total: u32 = s.parts.iter().map(|p| p.d).sum::<u32>() + s.d_prime;
                prop_assert_eq!(total, d);
                let dp: Vec<u32> = s.parts.iter().map(|p| p.d).collect();
                let w: Vec<i64> = s.parts.iter().map(|p| p.w).collect();
                let v: Vec<i64> = s.parts.iter().map(|p| p.v).collect();
                prop_assert_eq!(v_from_w(&w, &dp, s.d_prime).unwrap(), v.clone());
                for (i, p) in s.parts.iter().enumerate() {
                    let slope = frac(p.v, p.d.into());
                    // Compare (slope, 0) against (lo0, lo1) and (hi0, hi1) lexicographically.
                    let above = (slope.clone(), int(0)) > (lo0.clone(), lo1.clone())
                        || (mode == BoundsMode::Closed && (slope.clone(), int(0)) == (lo0.clone(), lo1.clone()));
                    let below = (slope.clone(), int(0)) < (hi0.clone(), hi1.clone())
                        || (mode == BoundsMode::Closed && (slope.clone(), int(0)) == (hi0.clone(), hi1.clone()));
                    prop_assert!(above && below);
                    if i > 0 {
                        let prev = &s.parts[i - 1];
                        prop_assert!(i64::from(prev.d) * p.v > p.d as i64 * prev.v);
                    }
                }
            }
        }
    }

    #[test]
    fn open_is_inside_closed(d in 0u32..=5, r in 0u32..=2, a in 0u32..=2, mu in mu_strategy()) {
        prop_assume!(check_generic(&mu, d.max(1)));
        let open: BTreeSet<_> = enumerate_summands(d, r, a, &mu, BoundsMode::Open).unwrap().into_iter().collect();
        let closed: BTreeSet<_> = enumerate_summands(d, r, a, &mu, BoundsMode::Closed).unwrap().into_iter().collect();
        prop_assert!(open.is_subset(&closed));
    }

    /// Two values of `mu` with no `2 mu l` (`1 <= l <= d`) integer between
    /// them give the same open-mode summands.
    #[test]
    fn summands_are_constant_between_walls(d in 1u32..=4, r in 1u32..=2, a in 0u32..=2, k in -12i64..=6, s in 1i64..=9, t in 1i64..=9) {
        let lcm = (1..=i64::from(d)).fold(1i64, |acc, l| acc.lcm(&(2 * l)));
        // Walls are multiples of 1/(2l); all lie on the grid (1/lcm) Z, so the
        // open cell (k/lcm, (k+1)/lcm) meets none of them.
        let pick = |x: i64| MuParam::exact(frac(10 * k + x, 10 * lcm));
        let (m1, m2) = (pick(s), pick(t));
        prop_assert!(check_generic(&m1, d) && check_generic(&m2, d));
        prop_assert_eq!(
            enumerate_summands(d, r, a, &m1, BoundsMode::Open).unwrap(),
            enumerate_summands(d, r, a, &m2, BoundsMode::Open).unwrap()
        );
    }
}

#[test]
fn compositions_count() {
    for e in 0..=8u32 {
        let c = compositions(e);
        assert_eq!(c.len(), if e == 0 { 1 } else { 1 << (e - 1) });
        assert!(c.iter().all(|p| p.iter().sum::<u32>() == e));
    }
}
