use num_bigint::BigInt;
use proptest::prelude::*;

use scissors::abelian::{fp_group, smith_normal_form, AbHom, FinAbGroup, IntMatrix};
use scissors::blochk::{lambda_exterior, lambda_s2, predict_h2, prebloch_classical};
use scissors::complexes::{
    build_complex, complex_homology, ge2_classes, h1_via_pi1, projective_line, scissors_from_orbits, Variant,
};
use scissors::finhom::{abelian_group, abelianization, induced_map, pgl2, GroupHom};
use scissors::rings::{make_product, make_zmod, FiniteRing};

/// Rings of order at most 64 covering every constructor.
const POOL: &[&str] = &[
    "zmod:2",
    "zmod:3",
    "zmod:4",
    "zmod:5",
    "zmod:6",
    "zmod:8",
    "zmod:9",
    "zmod:10",
    "zmod:12",
    "zmod:16",
    "zmod:25",
    "zmod:27",
    "gf:2^2",
    "gf:2^3",
    "gf:3^2",
    "gf:5^1",
    "gf:7^1",
    "gf:11^1",
    "gf:2^4",
    "gf:2^5",
    "gf:3^3",
    "dual:zmod:2",
    "dual:zmod:3",
    "dual:gf:2^2",
    "dual:gf:5^1",
    "dual:gf:7^1",
    "prod:zmod:2+zmod:2",
    "prod:zmod:2+zmod:3",
    "prod:zmod:3+zmod:3",
    "prod:gf:2^2+zmod:3",
    "prod:zmod:5+zmod:5",
    "prod:zmod:2+zmod:2+zmod:2",
];

fn pool_ring() -> impl Strategy<Value = FiniteRing> {
    proptest::sample::select(POOL).prop_map(|s| FiniteRing::parse(s).unwrap())
}

fn small_ring() -> impl Strategy<Value = FiniteRing> {
    proptest::sample::select(&POOL[..]).prop_filter_map("small projective line", |s| {
        let r = FiniteRing::parse(s).unwrap();
        (r.order() <= 16).then_some(r)
    })
}

fn matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-100i64..=100, r * c).prop_map(move |v| {
            let mut m = IntMatrix::zeros(r, c);
            for (k, x) in v.into_iter().enumerate() {
                if x != 0 {
                    m.set(k / c, k % c, BigInt::from(x));
                }
            }
            m
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms_hold(r in pool_ring()) {
        prop_assert!(r.verify_axioms().is_ok());
    }

    #[test]
    fn wedge_set_avoids_zero_and_one(r in pool_ring()) {
        let w = r.wedge_set();
        prop_assert!(!w.contains(&r.zero()) && !w.contains(&r.one()));
        if r.is_field() {
            prop_assert_eq!(w.len(), r.order() - 2);
        }
    }

    #[test]
    fn local_coinvariants(r in pool_ring()) {
        if let Some(q) = r.residue_field_size() {
            let c = r.coinvariants_a().order_u64().unwrap();
            prop_assert!(c <= 2);
            prop_assert_eq!(c == 2, q == 2);
        }
    }

    #[test]
    fn chinese_remainder(a in 2u64..9, b in 2u64..9) {
        prop_assume!(num_integer::gcd(a, b) == 1);
        let p = make_product(&make_zmod(a).unwrap(), &make_zmod(b).unwrap()).unwrap();
        let z = make_zmod(a * b).unwrap();
        let map: Vec<usize> = (0..a * b).map(|k| ((k % a) * b + k % b) as usize).collect();
        prop_assert!(z.is_isomorphism(&p, &map));
    }

    #[test]
    fn smith_form_postconditions(m in matrix(40)) {
        let s = smith_normal_form(&m);
        prop_assert!(s.verify(&m).is_ok());
    }

    #[test]
    fn fp_group_ignores_row_order(m in matrix(8), seed in any::<u64>()) {
        let base = fp_group(m.cols(), &m).unwrap();
        let mut order: Vec<usize> = (0..m.rows()).collect();
        let len = order.len();
        for i in (1..len).rev() {
            order.swap(i, (seed.rotate_left(i as u32) % (i as u64 + 1)) as usize);
        }
        let mut shuffled = IntMatrix::zeros(m.rows(), m.cols());
        for (new, &old) in order.iter().enumerate() {
            for c in 0..m.cols() {
                shuffled.set(new, c, m.get(old, c).clone());
            }
        }
        prop_assert_eq!(fp_group(m.cols(), &shuffled).unwrap(), base);
    }

    #[test]
    fn complexes_are_complexes(r in small_ring(), variant in prop_oneof![Just(Variant::Ge2), Just(Variant::Gl2)]) {
        let c = build_complex(&r, 3, variant, true).unwrap();
        prop_assert!(c.verify().is_ok());
    }

    #[test]
    fn every_class_is_ge2(r in pool_ring()) {
        let line = projective_line(&r);
        prop_assert_eq!(ge2_classes(&r, &line).len(), line.len());
    }

    #[test]
    fn ge2_and_gl2_complexes_coincide(r in small_ring()) {
        let y = build_complex(&r, 2, Variant::Ge2, true).unwrap();
        let l = build_complex(&r, 2, Variant::Gl2, true).unwrap();
        for n in 0..=2 {
            prop_assert_eq!(y.basis_len(n), l.basis_len(n));
            for i in 0..y.basis_len(n) {
                prop_assert_eq!(y.tuple(n, i), l.tuple(n, i));
            }
        }
    }

    #[test]
    fn augmented_h0_vanishes(r in pool_ring()) {
        let c = build_complex(&r, 1, Variant::Ge2, true).unwrap();
        prop_assert!(complex_homology(&c, 0).unwrap().is_trivial());
    }

    #[test]
    fn two_routes_to_h1(r in small_ring()) {
        let c = build_complex(&r, 2, Variant::Ge2, true).unwrap();
        let h1 = complex_homology(&c, 1).unwrap();
        prop_assert_eq!(&h1, &h1_via_pi1(&r, &projective_line(&r)).unwrap());
        prop_assert_eq!(h1.is_trivial(), r.menal_witness().is_none());
    }

    #[test]
    fn five_term_relations_are_killed(r in pool_ring()) {
        let p = prebloch_classical(&r).unwrap();
        prop_assert!(lambda_s2(&p, &r).is_ok());
        prop_assert!(lambda_exterior(&p, &r).is_ok());
    }

    #[test]
    fn presentations_agree(r in pool_ring()) {
        match scissors_from_orbits(&r) {
            Ok(o) => prop_assert_eq!(o.group, prebloch_classical(&r).unwrap().group),
            Err(e) => prop_assert!(matches!(e, scissors::Error::Hypothesis(_)), "{e}"),
        }
    }

    #[test]
    fn h2_odd_part_matches_k2(r in pool_ring()) {
        if let Ok(p) = predict_h2(&r) {
            prop_assert!(p.odd_parts_agree(), "{:?}", p);
        }
    }

    #[test]
    fn h1_theorem(r in proptest::sample::select(&["zmod:4", "zmod:8", "zmod:9", "gf:2^2", "gf:5^1", "dual:zmod:2", "dual:zmod:3"][..])) {
        let r = FiniteRing::parse(r).unwrap();
        let ab = abelianization(&pgl2(&r).unwrap()).unwrap();
        prop_assert_eq!(ab, scissors::blochk::predict_h1(&r).unwrap());
    }
}

/// `g -> g^m` on a cyclic group acts on `H_3` by `m^2`.
#[test]
fn power_maps_on_h3_of_cyclic_groups() {
    for n in [4u64, 5] {
        let g = abelian_group(&[n]).unwrap();
        let gen = g.generators()[0];
        for m in [-1i64, 2, 3] {
            let e = m.rem_euclid(n as i64) as usize;
            let mut image = g.identity();
            for _ in 0..e {
                image = g.mul(image, gen);
            }
            let h = GroupHom::from_generators(&g, &g, &[image]).unwrap();
            let f = induced_map(&h, &g, &g, 3).unwrap();
            let h3 = FinAbGroup::cyclic(n);
            assert_eq!(f.source, h3);
            let expected = AbHom::new(h3.clone(), h3.clone(), {
                let mut s = IntMatrix::zeros(1, 1);
                s.set(0, 0, BigInt::from((m * m).rem_euclid(n as i64)));
                s
            })
            .unwrap();
            let x = vec![BigInt::from(1)];
            assert_eq!(h3.normalize(&f.apply(&x)), h3.normalize(&expected.apply(&x)), "Z/{n}, m = {m}");
        }
    }
}
