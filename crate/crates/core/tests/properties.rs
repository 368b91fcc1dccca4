use antiflags::group::SemilinearMap;
use antiflags::hyperbolic::{self, QPoint};
use antiflags::{AntiFlags, Elem, Field, RelGraph, RelationKind};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ORDERS: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

fn field_and_three() -> impl Strategy<Value = (u32, u8, u8, u8)> {
    proptest::sample::select(ORDERS.to_vec())
        .prop_flat_map(|q| (Just(q), 0..q as u8, 0..q as u8, 0..q as u8))
}

proptest! {
    #[test]
    fn field_axioms((q, a, b, c) in field_and_three()) {
        let f = Field::new(q).unwrap();
        let (a, b, c) = (Elem(a), Elem(b), Elem(c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Elem(0));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a)), Elem(1));
            prop_assert_eq!(f.div(f.mul(b, a), a), b);
        }
        // Frobenius is a ring automorphism.
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.pow(a, q), a);
    }

    #[test]
    fn classification_is_symmetric_and_matches_graphs(a in 0usize..117, b in 0usize..117) {
        let flags = AntiFlags::enumerate(3, 3).unwrap();
        let k = flags.classify(a, b);
        prop_assert_eq!(k, flags.classify(b, a));
        prop_assert_eq!(k == RelationKind::Eq, a == b);
        for r in RelationKind::RELATIONS {
            let g = RelGraph::build(r, &flags).unwrap();
            prop_assert_eq!(g.is_adjacent(a, b), k == r);
        }
    }

    #[test]
    fn duality_is_an_involution_preserving_relations(a in 0usize..336, b in 0usize..336) {
        let flags = AntiFlags::enumerate(3, 4).unwrap();
        let (da, db) = (flags.duality_transform(a), flags.duality_transform(b));
        prop_assert_eq!(flags.duality_transform(da), a);
        prop_assert_eq!(flags.classify(da, db), flags.classify(a, b));
    }

    #[test]
    fn semilinear_maps_preserve_relations(seed in any::<u64>(), a in 0usize..336, b in 0usize..336) {
        let flags = AntiFlags::enumerate(3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = SemilinearMap::random(3, flags.space().field(), &mut rng);
        prop_assert_eq!(flags.classify(g.apply(&flags, a), g.apply(&flags, b)), flags.classify(a, b));
    }

    #[test]
    fn quadratic_form_polarizes(u in 0u32..1 << 10, v in 0u32..1 << 10) {
        let n = 5;
        let q = |x: u32| hyperbolic::q_value(x, n);
        prop_assert_eq!(q(u ^ v), q(u) ^ q(v) ^ hyperbolic::f_bilinear(u, v, n));
        prop_assert_eq!(hyperbolic::f_bilinear(u, v, n), hyperbolic::f_bilinear(v, u, n));
    }

    #[test]
    fn f_round_trips(id in 0usize..120) {
        let flags = AntiFlags::enumerate(4, 2).unwrap();
        let p = hyperbolic::f_inverse(&flags, id).unwrap();
        prop_assert!(!p.is_singular());
        prop_assert_eq!(hyperbolic::f_map(&flags, p).unwrap(), id);
        prop_assert_eq!(hyperbolic::f_map(&flags, QPoint::new(p.vec, 4)).unwrap(), id);
    }
}
