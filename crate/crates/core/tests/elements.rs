use std::sync::Arc;

use coloured_neretin::almostauto::{is_sign_well_defined, left_translation};
use coloured_neretin::sampling::{random_element, random_expansions, random_group, random_invariant_subset, random_word, seeded};
use coloured_neretin::tree::sphere;
use coloured_neretin::{ColourGroup, CompleteSubtree, PlaneOrder, SignMode, SignTarget, TreePairElement};
use rand::Rng;

const WORD_LEN: usize = 14;

fn planes() -> Vec<Arc<PlaneOrder>> {
    vec![
        PlaneOrder::new(ColourGroup::trivial(2)),
        PlaneOrder::new(ColourGroup::symmetric(2)),
        PlaneOrder::new(ColourGroup::product_of_symmetric(&[2, 2])),
        PlaneOrder::new(ColourGroup::from_cycles(4, &["(0 1 2)"]).unwrap()),
        PlaneOrder::new(ColourGroup::from_cycles(6, &["(1 2)(3 4)", "(5 6)"]).unwrap()),
    ]
}

#[test]
fn composition_matches_pointwise_action() {
    let mut rng = seeded(21);
    for plane in planes() {
        for _ in 0..40 {
            let a = random_element(&plane, 5, 4, &mut rng);
            let b = random_element(&plane, 5, 4, &mut rng);
            let ab = a.compose(&b).unwrap();
            for _ in 0..10 {
                let w = random_word(plane.d(), WORD_LEN, &mut rng);
                let via_b = b.apply_to_prefix(&w).unwrap();
                let lhs = ab.apply_to_prefix(&w).unwrap();
                let rhs = a.apply_to_prefix(&via_b).unwrap();
                // the two images agree on their common length
                let k = lhs.len().min(rhs.len());
                assert_eq!(lhs[..k], rhs[..k]);
            }
        }
    }
}

#[test]
fn inverse_undoes_action() {
    let mut rng = seeded(22);
    for plane in planes() {
        for _ in 0..40 {
            let a = random_element(&plane, 5, 4, &mut rng);
            let inv = a.inverse();
            assert!(a.compose(&inv).unwrap().is_identity());
            for _ in 0..10 {
                let w = random_word(plane.d(), WORD_LEN, &mut rng);
                let back = inv.apply_to_prefix(&a.apply_to_prefix(&w).unwrap()).unwrap();
                let k = back.len().min(w.len());
                assert_eq!(back[..k], w[..k]);
            }
        }
    }
}

#[test]
fn expansion_and_reduction_preserve_the_element() {
    let mut rng = seeded(23);
    for plane in planes() {
        for _ in 0..40 {
            let a = random_element(&plane, 4, 3, &mut rng);
            let big = random_expansions(&a, 6, &mut rng);
            assert!(big.equivalent(&a));
            assert_eq!(big.reduce().pairs(), a.reduce().pairs());
            assert!(a.reduce().is_reduced());
        }
    }
}

#[test]
fn class_sign_is_multiplicative() {
    let mut rng = seeded(24);
    let mut checked = 0;
    for _ in 0..200 {
        let d = rng.gen_range(2..=5);
        let plane = PlaneOrder::new(random_group(d, &mut rng));
        let subset = random_invariant_subset(plane.group(), &mut rng);
        let mode = SignMode::Class(SignTarget::Vf);
        if !is_sign_well_defined(plane.group(), &subset, SignTarget::Vf) {
            continue;
        }
        let a = random_element(&plane, 4, 3, &mut rng);
        let b = random_element(&plane, 4, 3, &mut rng);
        let sa = a.sign(&subset, &mode).unwrap().value;
        let sb = b.sign(&subset, &mode).unwrap().value;
        let sab = a.compose(&b).unwrap().sign(&subset, &mode).unwrap().value;
        assert_eq!(sab, sa * sb);
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn well_defined_sign_is_independent_of_representative() {
    let mut rng = seeded(25);
    for plane in planes() {
        for subset in subsets(plane.group()) {
            if !is_sign_well_defined(plane.group(), &subset, SignTarget::Vf) {
                continue;
            }
            for _ in 0..10 {
                let a = random_element(&plane, 3, 3, &mut rng);
                let reduced = a.representative_sign(&subset).unwrap().value;
                let expanded = random_expansions(&a, 5, &mut rng).representative_sign(&subset).unwrap().value;
                assert_eq!(reduced, expanded);
            }
        }
    }
}

fn subsets(g: &ColourGroup) -> Vec<Vec<u8>> {
    let orbits = g.orbits();
    (1u32..(1 << orbits.len()))
        .map(|mask| {
            let mut s: Vec<u8> =
                orbits.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).flat_map(|(_, o)| o.iter().copied()).collect();
            s.sort_unstable();
            s
        })
        .collect()
}

#[test]
fn not_well_defined_is_refused() {
    let plane = PlaneOrder::new(ColourGroup::from_cycles(6, &["(1 2)(3 4)", "(5 6)"]).unwrap());
    let e = TreePairElement::identity(&plane);
    assert!(e.sign(&[5, 6], &SignMode::Class(SignTarget::Nf)).is_err());
    assert!(e.sign(&[1, 2, 3, 4], &SignMode::Class(SignTarget::Nf)).is_ok());
    // odd subsets are never well defined
    assert!(e.sign(&[0], &SignMode::Class(SignTarget::Vf)).is_err());
}

#[test]
fn honest_sign_on_a_ball() {
    let plane = PlaneOrder::new(ColourGroup::symmetric(2));
    let e = TreePairElement::identity(&plane);
    let s = e.sign(&[0, 1, 2], &SignMode::Honest(CompleteSubtree::ball(2, 3))).unwrap();
    assert_eq!(s.value, 1);
}

#[test]
fn sphere_sizes() {
    for d in 2..=5 {
        for n in 1..=4 {
            assert_eq!(sphere(d, n).len(), (d + 1) * d.pow(n as u32 - 1));
        }
    }
}

#[test]
fn translations_compose_like_words() {
    let plane = PlaneOrder::new(ColourGroup::trivial(2));
    let (a, b) = (vec![0u8, 1], vec![2u8, 0, 1]);
    let ta = left_translation(&plane, &a);
    let tb = left_translation(&plane, &b);
    let mut rng = seeded(26);
    let w = random_word(2, 10, &mut rng);
    let lhs = ta.compose(&tb).unwrap().apply_to_prefix(&w).unwrap();
    let rhs = ta.apply_to_prefix(&tb.apply_to_prefix(&w).unwrap()).unwrap();
    let k = lhs.len().min(rhs.len());
    assert_eq!(lhs[..k], rhs[..k]);
}
