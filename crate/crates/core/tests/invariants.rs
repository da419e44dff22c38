use std::sync::OnceLock;

use proptest::prelude::*;

use finring::constructions::RingDescriptor;
use finring::dsl::{parse, pretty};
use finring::harness::CORPUS;
use finring::poly::{conv_mul, BoundedPoly};
use finring::{Idx, Ring};

fn corpus() -> &'static [Ring] {
    static RINGS: OnceLock<Vec<Ring>> = OnceLock::new();
    RINGS.get_or_init(|| {
        CORPUS
            .iter()
            .map(|t| t.parse::<RingDescriptor>().unwrap().build().unwrap())
            .collect()
    })
}

/// A corpus ring and `k` elements of it.
fn ring_and(k: usize) -> impl Strategy<Value = (usize, Vec<Idx>)> {
    (0..CORPUS.len()).prop_flat_map(move |i| {
        let n = corpus()[i].order() as Idx;
        (Just(i), proptest::collection::vec(0..n, k))
    })
}

fn descriptor() -> impl Strategy<Value = RingDescriptor> {
    let leaf = (1u64..40).prop_map(RingDescriptor::Zn);
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 2..4).prop_map(RingDescriptor::Prod),
            (inner.clone(), 1usize..4).prop_map(|(b, n)| RingDescriptor::Mat(Box::new(b), n)),
            (inner.clone(), 1usize..4).prop_map(|(b, n)| RingDescriptor::UT(Box::new(b), n)),
            (inner.clone(), 2usize..6)
                .prop_flat_map(|(b, n)| (Just(b), Just(n), 1..n))
                .prop_map(|(b, n, k)| RingDescriptor::Tnk(Box::new(b), n, k)),
            inner
                .clone()
                .prop_map(|b| RingDescriptor::Triv(Box::new(b))),
            (inner, 1usize..5).prop_map(|(b, n)| RingDescriptor::PolyMod(Box::new(b), n)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn codec_round_trip((i, xs) in ring_and(1)) {
        let r = &corpus()[i];
        prop_assert_eq!(r.encode(&r.decode(xs[0])), Some(xs[0]));
    }

    #[test]
    fn ring_axioms((i, xs) in ring_and(3)) {
        let r = &corpus()[i];
        let (a, b, c) = (xs[0], xs[1], xs[2]);
        prop_assert_eq!(r.mul_idx(r.mul_idx(a, b), c), r.mul_idx(a, r.mul_idx(b, c)));
        prop_assert_eq!(r.mul_idx(a, r.add_idx(b, c)), r.add_idx(r.mul_idx(a, b), r.mul_idx(a, c)));
        prop_assert_eq!(r.mul_idx(r.add_idx(a, b), c), r.add_idx(r.mul_idx(a, c), r.mul_idx(b, c)));
        prop_assert_eq!(r.add_idx(a, r.neg_idx(a)), 0);
        prop_assert_eq!(r.mul_idx(r.one_idx(), a), a);
    }

    #[test]
    fn dsl_round_trip(d in descriptor()) {
        let text = d.to_string();
        let e = parse(&text).unwrap();
        prop_assert_eq!(pretty(&e), text.clone());
        prop_assert_eq!(e.to_descriptor(), d);
        let spaced = text.replace(',', " ,\n ").replace('(', "( ");
        prop_assert!(parse(&spaced).unwrap().structurally_eq(&e));
    }

    #[test]
    fn annihilator_counts((i, xs) in ring_and(1)) {
        let r = &corpus()[i];
        let a = xs[0];
        let count = (0..r.order() as Idx).filter(|&b| r.mul_idx(a, b) == 0).count();
        prop_assert_eq!(r.right_annihilator_idx(a).len(), count);
        prop_assert!(r.right_annihilator_idx(a).windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn ideal_closure_is_idempotent((i, xs) in ring_and(2)) {
        let r = &corpus()[i];
        let ideal = r.ideal_closure(&xs);
        prop_assert!(ideal.is_ideal());
        prop_assert!(xs.iter().all(|&x| ideal.contains(x)));
        let again = r.ideal_closure(ideal.members());
        prop_assert_eq!(again.members(), ideal.members());
    }

    #[test]
    fn convolution_is_associative((i, xs) in ring_and(6)) {
        let r = &corpus()[i];
        let f = BoundedPoly::new(r, xs[0..2].to_vec()).unwrap();
        let g = BoundedPoly::new(r, xs[2..4].to_vec()).unwrap();
        let h = BoundedPoly::new(r, xs[4..6].to_vec()).unwrap();
        let left = conv_mul(&conv_mul(&f, &g).unwrap(), &h).unwrap();
        let right = conv_mul(&f, &conv_mul(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn centers_are_subrings() {
    for r in corpus() {
        let z = r.center();
        assert!(z.contains(r.one_idx()), "{}", r.label());
        assert!(
            z.is_closed_under_add() && z.is_closed_under_mul() && z.is_closed_under_neg(),
            "{}",
            r.label()
        );
        let naive: Vec<Idx> = (0..r.order() as Idx)
            .filter(|&x| (0..r.order() as Idx).all(|y| r.mul_idx(x, y) == r.mul_idx(y, x)))
            .collect();
        assert_eq!(z.members(), &naive[..], "{}", r.label());
    }
}
