use proptest::prelude::*;

use wallcross::fm::fm_contains;
use wallcross::rational::frac;
use wallcross::zonotope::{make_zonotope, MembershipCertificate, ZonotopeKind};
use wallcross::Rational;

fn point(d: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-30i64..=30).prop_map(|n| frac(n, 6)), d)
}

fn symmetric_kind(d: usize) -> impl Strategy<Value = ZonotopeKind> {
    prop_oneof![
        Just(ZonotopeKind::W { d }),
        (0u32..=2).prop_map(move |r| ZonotopeKind::V { d, r }),
        (0u32..=3).prop_map(move |a| ZonotopeKind::Wa { d, a }),
        (0u32..=3, 0u32..=2).prop_map(move |(a, r)| ZonotopeKind::Va { d, a, r }),
    ]
}

fn any_kind(d: usize) -> impl Strategy<Value = ZonotopeKind> {
    prop_oneof![symmetric_kind(d), (-3i64..=3).prop_map(move |w| ZonotopeKind::WSlice { d, w })]
}

/// Checks that every open end is met with a strictly interior coefficient.
fn strict_flags_respected(kind: ZonotopeKind, cert: &MembershipCertificate) -> bool {
    let z = make_zonotope(kind).unwrap();
    let MembershipCertificate::Feasible { coefficients, moving: None, .. } = cert else {
        return true;
    };
    z.generators
        .iter()
        .zip(coefficients)
        .all(|(g, c)| (!g.lo_open || c > &g.lo) && (!g.hi_open || c < &g.hi))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn membership_is_permutation_symmetric(
        (kind, p, perm) in (1usize..=3).prop_flat_map(|d| {
            (symmetric_kind(d), point(d), Just((0..d).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let z = make_zonotope(kind).unwrap();
        let q: Vec<Rational> = perm.iter().map(|&i| p[i].clone()).collect();
        prop_assert_eq!(z.contains(&p).unwrap().is_feasible(), z.contains(&q).unwrap().is_feasible());
    }

    #[test]
    fn certificates_verify(
        (kind, p, u) in (1usize..=3).prop_flat_map(|d| (any_kind(d), point(d), point(d)))
    ) {
        let z = make_zonotope(kind).unwrap();
        let cert = z.contains(&p).unwrap();
        if cert.is_feasible() {
            prop_assert!(z.verify(&p, None, &cert));
            prop_assert!(strict_flags_respected(kind, &cert));
        }
        let moving = z.contains_moving(&p, &u).unwrap();
        if moving.is_feasible() {
            prop_assert!(z.verify(&p, Some(&u), &moving));
        }
    }

    #[test]
    fn simplex_agrees_with_elimination(
        (kind, p, u, use_u) in (1usize..=2).prop_flat_map(|d| (any_kind(d), point(d), point(d), any::<bool>()))
    ) {
        let z = make_zonotope(kind).unwrap();
        if use_u {
            prop_assert_eq!(z.contains_moving(&p, &u).unwrap().is_feasible(), fm_contains(&z, &p, Some(&u)));
        } else {
            prop_assert_eq!(z.contains(&p).unwrap().is_feasible(), fm_contains(&z, &p, None));
        }
    }

    #[test]
    fn slices_lie_in_the_full_window(
        (d, w, p) in (1usize..=3).prop_flat_map(|d| (Just(d), -3i64..=3, point(d)))
    ) {
        let slice = make_zonotope(ZonotopeKind::WSlice { d, w }).unwrap();
        let full = make_zonotope(ZonotopeKind::W { d }).unwrap();
        if slice.contains(&p).unwrap().is_feasible() {
            prop_assert!(full.contains(&p).unwrap().is_feasible());
        }
    }
}

#[test]
fn v_without_r_is_the_root_sum() {
    for d in 1..=4 {
        let v = make_zonotope(ZonotopeKind::V { d, r: 0 }).unwrap();
        let roots = make_zonotope(ZonotopeKind::Va { d, a: 0, r: 0 }).unwrap();
        assert_eq!(v, roots);
        assert_eq!(v.generators.len(), d * (d - 1));
        assert!(v.lineality.is_empty());
    }
}
