use std::sync::Arc;

use coloured_neretin::sampling::{random_element, seeded};
use coloured_neretin::sftbridge::{Bisection, PathTranslator};
use coloured_neretin::tree::sphere;
use coloured_neretin::{ColourGroup, PlaneOrder};
use num_rational::BigRational;
use num_traits::{One, Zero};

fn planes() -> Vec<Arc<PlaneOrder>> {
    [vec![3], vec![2, 1], vec![1, 1, 1], vec![2, 2], vec![2, 2, 1], vec![3, 1]]
        .iter()
        .map(|s| PlaneOrder::new(ColourGroup::product_of_symmetric(s)))
        .collect()
}

#[test]
fn element_round_trip() {
    let mut rng = seeded(41);
    for plane in planes() {
        let tr = PathTranslator::new(&plane).unwrap();
        for _ in 0..40 {
            let e = random_element(&plane, 5, 4, &mut rng);
            let b = tr.element_to_bisection(&e);
            tr.validate(&b).unwrap();
            assert_eq!(tr.bisection_to_element(&b).unwrap().pairs(), e.reduce().pairs());
        }
    }
}

#[test]
fn composition_agrees_with_tree_pairs() {
    let mut rng = seeded(42);
    for plane in planes() {
        let tr = PathTranslator::new(&plane).unwrap();
        for _ in 0..40 {
            let a = random_element(&plane, 4, 3, &mut rng);
            let b = random_element(&plane, 4, 3, &mut rng);
            let via_paths = tr.compose(&tr.element_to_bisection(&a), &tr.element_to_bisection(&b));
            let via_trees = tr.element_to_bisection(&a.compose(&b).unwrap());
            assert_eq!(tr.canonicalize(&via_paths), via_trees);
            let inv = tr.inverse(&tr.element_to_bisection(&a));
            assert_eq!(tr.canonicalize(&inv), tr.element_to_bisection(&a.inverse()));
        }
    }
}

#[test]
fn random_bisections_are_valid_and_balanced() {
    let mut rng = seeded(43);
    for plane in planes() {
        let tr = PathTranslator::new(&plane).unwrap();
        for _ in 0..40 {
            let b = tr.random_bisection(5, 4, &mut rng);
            tr.validate(&b).unwrap();
            let src: BigRational = b.pairs.iter().map(|p| tr.mass(p.source())).fold(BigRational::zero(), |a, x| a + x);
            let tgt: BigRational = b.pairs.iter().map(|p| tr.mass(p.target())).fold(BigRational::zero(), |a, x| a + x);
            assert!(src.is_one() && tgt.is_one());
            tr.bisection_to_element(&b).unwrap();
        }
    }
}

#[test]
fn vertex_paths_invert() {
    for plane in planes() {
        let tr = PathTranslator::new(&plane).unwrap();
        for n in 1..=4 {
            for v in sphere(plane.d(), n) {
                let p = tr.to_path(&v).unwrap();
                assert_eq!(tr.depth(&p), n);
                assert_eq!(tr.to_address(&p).unwrap(), v);
            }
        }
    }
}

#[test]
fn identity_is_canonical() {
    for plane in planes() {
        let tr = PathTranslator::new(&plane).unwrap();
        let id = tr.identity_bisection();
        assert_eq!(tr.canonicalize(&id), id);
        let mut broken: Bisection = id.clone();
        broken.pairs.pop();
        assert!(tr.validate(&broken).is_err());
    }
}

#[test]
fn json_shape() {
    let plane = PlaneOrder::new(ColourGroup::product_of_symmetric(&[2, 1]));
    let tr = PathTranslator::new(&plane).unwrap();
    let text = serde_json::to_string(&tr.identity_bisection()).unwrap();
    assert!(text.starts_with(r#"[[{"start":"#), "{text}");
    let back: Bisection = serde_json::from_str(&text).unwrap();
    assert_eq!(back, tr.identity_bisection());
}
