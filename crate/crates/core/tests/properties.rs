use coloured_neretin::abelian::{smith_normal_form, IntMatrix};
use coloured_neretin::io::{element_to_json, parse_element_str};
use coloured_neretin::lattice::{aut_ball_by_levels, aut_ball_closed_form};
use coloured_neretin::sampling::{random_element, random_group, random_word, seeded};
use coloured_neretin::sftbridge::PathTranslator;
use coloured_neretin::{ColourGroup, Permutation, PlaneOrder};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u8).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
}

fn orbit_sizes() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, 1..=3).prop_filter("at least three colours", |v| v.iter().sum::<usize>() >= 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutation_group_laws((a, b, c) in (4usize..=8).prop_flat_map(|n| (permutation(n), permutation(n), permutation(n)))) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert_eq!(a.compose(&b).is_even(), a.is_even() == b.is_even());
        let n = a.degree();
        let again = Permutation::parse_cycles(&a.to_cycle_string(), n).unwrap();
        prop_assert_eq!(again, a);
    }

    #[test]
    fn element_group_laws(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seeded(seed);
        let plane = PlaneOrder::new(random_group(d, &mut rng));
        let a = random_element(&plane, 4, 3, &mut rng);
        let b = random_element(&plane, 4, 3, &mut rng);
        let c = random_element(&plane, 4, 3, &mut rng);
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left.pairs(), right.pairs());
        prop_assert!(a.inverse().inverse().equivalent(&a));
        prop_assert_eq!(a.compose(&b).unwrap().inverse().pairs(), b.inverse().compose(&a.inverse()).unwrap().pairs());
    }

    #[test]
    fn transport_preserves_plane_order(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seeded(seed);
        let plane = PlaneOrder::new(random_group(d, &mut rng));
        let a = random_element(&plane, 4, 3, &mut rng);
        // order-preserving on sibling cylinders below each domain leaf
        for (u, _) in a.pairs() {
            let kids = plane.children(&u);
            let images: Vec<_> = kids.iter().map(|k| a.image_of_cylinder(k)).collect();
            for w in images.windows(2) {
                prop_assert_eq!(plane.lex_compare(&w[0][0], &w[1][0]), std::cmp::Ordering::Less);
            }
        }
        let w = random_word(d, 10, &mut rng);
        prop_assert!(a.apply_to_prefix(&w).is_ok());
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seeded(seed);
        let plane = PlaneOrder::new(random_group(d, &mut rng));
        let a = random_element(&plane, 5, 4, &mut rng);
        let back = parse_element_str(&element_to_json(&a)).unwrap();
        prop_assert_eq!(back.pairs(), a.reduce().pairs());
        prop_assert_eq!(back.group().order(), a.group().order());
    }

    #[test]
    fn bisection_round_trip(seed in any::<u64>(), sizes in orbit_sizes()) {
        let mut rng = seeded(seed);
        let plane = PlaneOrder::new(ColourGroup::product_of_symmetric(&sizes));
        let tr = PathTranslator::new(&plane).unwrap();
        let b = tr.random_bisection(4, 3, &mut rng);
        let e = tr.bisection_to_element(&b).unwrap();
        prop_assert_eq!(tr.element_to_bisection(&e), tr.canonicalize(&b));
    }

    #[test]
    fn smith_diagonal_divides(rows in prop::collection::vec(prop::collection::vec(-20i64..=20, 4), 1..=4)) {
        let m = IntMatrix::from_rows(rows);
        let s = smith_normal_form(&m);
        let f = &s.invariants.invariant_factors;
        for w in f.windows(2) {
            if !w[1].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
        prop_assert!(f.iter().all(|x| !x.is_negative()));
        prop_assert_eq!(s.left.mul(&m).mul(&s.right), s.diagonal);
    }

    #[test]
    fn ball_counts_agree(sizes in orbit_sizes(), n in 1usize..=5) {
        prop_assert_eq!(aut_ball_closed_form(&sizes, n).unwrap(), aut_ball_by_levels(&sizes, n).unwrap());
    }
}
