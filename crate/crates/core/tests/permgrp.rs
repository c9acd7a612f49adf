use std::collections::{BTreeSet, VecDeque};

use coloured_neretin::permgrp::{orbits_of, Colour, ColourGroup, Permutation};
use coloured_neretin::sampling::{random_group, seeded};

// Closure by breadth-first search over image vectors, no shared code with the crate.
fn closure(degree: usize, gens: &[Vec<Colour>]) -> BTreeSet<Vec<Colour>> {
    let id: Vec<Colour> = (0..degree as Colour).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q: Vec<Colour> = p.iter().map(|&x| g[x as usize]).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen
}

fn find(parent: &mut [usize], x: usize) -> usize {
    if parent[x] != x {
        let r = find(parent, parent[x]);
        parent[x] = r;
    }
    parent[x]
}

#[test]
fn group_order_and_membership_match_closure() {
    let mut rng = seeded(11);
    for d in 2..=6 {
        for _ in 0..20 {
            let g = random_group(d, &mut rng);
            let gens: Vec<Vec<Colour>> = g.generators().iter().map(|p| p.images().to_vec()).collect();
            let oracle = closure(d + 1, &gens);
            assert_eq!(g.order(), oracle.len(), "d={d} gens={gens:?}");
            for e in g.elements() {
                assert!(oracle.contains(e.images()));
            }
        }
    }
}

#[test]
fn orbits_match_union_find() {
    let mut rng = seeded(12);
    for d in 2..=7 {
        for _ in 0..20 {
            let g = random_group(d, &mut rng);
            let mut parent: Vec<usize> = (0..=d).collect();
            for p in g.generators() {
                for x in 0..=d {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, p.apply(x as Colour) as usize));
                    parent[a] = b;
                }
            }
            for x in 0..=d as Colour {
                for y in 0..=d as Colour {
                    let same = find(&mut parent, x as usize) == find(&mut parent, y as usize);
                    assert_eq!(g.same_orbit(x, y), same);
                }
            }
            let mut sizes = g.orbit_sizes();
            sizes.sort_unstable();
            let mut from_free = orbits_of(d + 1, g.generators()).iter().map(Vec::len).collect::<Vec<_>>();
            from_free.sort_unstable();
            assert_eq!(sizes, from_free);
        }
    }
}

#[test]
fn product_of_symmetric_order() {
    let g = ColourGroup::product_of_symmetric(&[2, 2, 3]);
    assert_eq!(g.order(), 2 * 2 * 6);
    assert_eq!(g.orbit_sizes().iter().sum::<usize>(), 7);
}

#[test]
fn cycle_notation_is_zero_based() {
    let p = Permutation::parse_cycles("(0 2)(1 3)", 5).unwrap();
    assert_eq!(p.images(), &[2, 3, 0, 1, 4]);
    assert!(p.is_even());
    assert!(Permutation::parse_cycles("(0 5)", 5).is_err());
    assert!(Permutation::parse_cycles("(0 1)(1 2)", 5).is_err());
}

#[test]
fn invariant_subsets_are_orbit_unions() {
    let g = ColourGroup::from_cycles(6, &["(1 2)(3 4)", "(5 6)"]).unwrap();
    assert!(g.is_invariant(&[1, 2, 3, 4]));
    assert!(g.is_invariant(&[0, 5, 6]));
    assert!(!g.is_invariant(&[1, 3]));
}
