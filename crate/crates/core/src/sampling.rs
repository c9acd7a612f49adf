//! Seeded random generators for groups, trees and elements, used by the randomized checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::almostauto::{FinitaryElement, TreePairElement};
use crate::permgrp::{Colour, ColourGroup, Permutation};
use crate::tree::{CompleteSubtree, PlaneOrder, VertexAddress};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform no-repeat word of the given length.
pub fn random_word<R: Rng>(d: usize, len: usize, rng: &mut R) -> Vec<Colour> {
    let mut w: Vec<Colour> = Vec::with_capacity(len);
    for _ in 0..len {
        let c = loop {
            let c = rng.gen_range(0..=d) as Colour;
            if w.last() != Some(&c) {
                break c;
            }
        };
        w.push(c);
    }
    w
}

/// `B_1` expanded `expansions` times at random leaves of depth below `max_depth`.
pub fn random_tree<R: Rng>(d: usize, expansions: usize, max_depth: usize, rng: &mut R) -> CompleteSubtree {
    let mut t = CompleteSubtree::ball(d, 1);
    for _ in 0..expansions {
        let shallow: Vec<VertexAddress> = t.leaves().iter().filter(|l| l.depth() < max_depth).cloned().collect();
        let Some(l) = shallow.choose(rng) else { break };
        t = t.simple_expansion(l).unwrap();
    }
    t
}

fn orbit_profile(group: &ColourGroup, t: &CompleteSubtree) -> Vec<usize> {
    let mut counts = vec![0; group.orbits().len()];
    for l in t.leaves() {
        counts[group.orbit_index(l.colour().unwrap())] += 1;
    }
    counts
}

/// A random reduced element whose trees have depth at most `max_depth`.
pub fn random_element<R: Rng>(plane: &Arc<PlaneOrder>, expansions: usize, max_depth: usize, rng: &mut R) -> TreePairElement {
    let group = plane.group();
    let d = plane.d();
    let t1 = random_tree(d, expansions, max_depth, rng);
    let profile = orbit_profile(group, &t1);
    let mut t2 = t1.clone();
    for _ in 0..30 {
        let cand = random_tree(d, expansions, max_depth, rng);
        if cand.len() == t1.len() && orbit_profile(group, &cand) == profile {
            t2 = cand;
            break;
        }
    }
    let mut by_orbit: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, l) in t2.leaves().iter().enumerate() {
        by_orbit.entry(group.orbit_index(l.colour().unwrap())).or_default().push(i);
    }
    for v in by_orbit.values_mut() {
        v.shuffle(rng);
    }
    let kappa: Vec<usize> = t1
        .leaves()
        .iter()
        .map(|l| by_orbit.get_mut(&group.orbit_index(l.colour().unwrap())).unwrap().pop().unwrap())
        .collect();
    TreePairElement::new(plane, t1.leaves().to_vec(), t2.leaves().to_vec(), kappa).expect("orbit profiles match")
}

/// A random permutation supported on a random subset: a cycle or two disjoint cycles.
pub fn random_sparse_permutation<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let mut pts: Vec<Colour> = (0..n as Colour).collect();
    pts.shuffle(rng);
    let mut images: Vec<Colour> = (0..n as Colour).collect();
    let first = rng.gen_range(2..=n);
    let second = if n - first >= 2 && rng.gen_bool(0.4) { rng.gen_range(2..=n - first) } else { 0 };
    for (start, len) in [(0, first), (first, second)] {
        for k in 0..len {
            images[pts[start + k] as usize] = pts[start + (k + 1) % len];
        }
    }
    Permutation::from_images(images).unwrap()
}

/// A random colour group on `{0..d}` with up to two generators.
pub fn random_group<R: Rng>(d: usize, rng: &mut R) -> ColourGroup {
    let gens = (0..rng.gen_range(0..=2)).map(|_| random_sparse_permutation(d + 1, rng)).collect();
    ColourGroup::generate(d + 1, gens).expect("subgroup of Sym(D)")
}

/// A random union of orbits.
pub fn random_invariant_subset<R: Rng>(group: &ColourGroup, rng: &mut R) -> Vec<Colour> {
    let mut s: Vec<Colour> = group.orbits().iter().filter(|_| rng.gen_bool(0.5)).flatten().copied().collect();
    s.sort_unstable();
    s
}

/// A random element with a few local twists below its domain leaves.
pub fn random_finitary<R: Rng>(plane: &Arc<PlaneOrder>, expansions: usize, max_depth: usize, rng: &mut R) -> FinitaryElement {
    let base = random_element(plane, expansions, max_depth, rng);
    let group = plane.group();
    let mut twists = BTreeMap::new();
    for _ in 0..rng.gen_range(0..=3) {
        let leaf = base.domain().leaves().choose(rng).unwrap().clone();
        let tail_len = rng.gen_range(0..=1);
        let mut w = leaf.word().to_vec();
        for _ in 0..tail_len {
            let c = *plane.child_colours(w.last().copied()).choose(rng).unwrap();
            w.push(c);
        }
        let x = VertexAddress::new(w, plane.d()).unwrap();
        let chi = x.colour().unwrap();
        let stab: Vec<&Permutation> = group.stabilizer(chi).collect();
        twists.insert(x, (*stab.choose(rng).unwrap()).clone());
    }
    FinitaryElement::new(base, twists).expect("twists fix the vertex colours")
}

/// A random nonempty proper union of leaf cylinders of a random complete subtree.
pub fn random_cylinder_set<R: Rng>(d: usize, rng: &mut R) -> Vec<VertexAddress> {
    let t = random_tree(d, rng.gen_range(0..=4), 3, rng);
    let n = t.len();
    let k = rng.gen_range(1..n);
    let mut leaves = t.leaves().to_vec();
    leaves.shuffle(rng);
    leaves.truncate(k);
    leaves.sort();
    leaves
}

/// Applies `steps` random simple expansions to the domain of `e`.
pub fn random_expansions<R: Rng>(e: &TreePairElement, steps: usize, rng: &mut R) -> TreePairElement {
    let mut cur = e.clone();
    for _ in 0..steps {
        let leaf = cur.domain().leaves().choose(rng).unwrap().clone();
        cur = cur.expand_at(&leaf).unwrap();
    }
    cur
}

/// Applies `steps` random simple expansions to a tree.
pub fn expand_tree<R: Rng>(t: &CompleteSubtree, steps: usize, rng: &mut R) -> CompleteSubtree {
    let mut cur = t.clone();
    for _ in 0..steps {
        let leaf = cur.leaves().choose(rng).unwrap().clone();
        cur = cur.simple_expansion(&leaf).unwrap();
    }
    cur
}
