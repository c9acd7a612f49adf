//! The coloured rooted `(d+1)`-regular tree: addresses, complete subtrees and plane orders.
//!
//! A vertex is addressed by the colours of the edges on the path from the root, so
//! an address is a word over `D` without two equal consecutive letters.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permgrp::{Colour, ColourGroup, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("invalid address {word:?}: {reason}")]
    InvalidAddress { word: Vec<Colour>, reason: &'static str },
    #[error("leaf set is not a complete subtree")]
    NotComplete,
    #[error("{0} is not a leaf of the tree")]
    NotALeaf(VertexAddress),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexAddress(Vec<Colour>);

impl VertexAddress {
    pub fn root() -> Self {
        VertexAddress(Vec::new())
    }

    pub fn new(word: Vec<Colour>, d: usize) -> Result<Self, TreeError> {
        check_word(&word, d)?;
        Ok(VertexAddress(word))
    }

    /// Trusted constructor for words already known to be valid.
    pub(crate) fn from_vec_unchecked(word: Vec<Colour>) -> Self {
        VertexAddress(word)
    }

    pub fn word(&self) -> &[Colour] {
        &self.0
    }

    pub fn into_word(self) -> Vec<Colour> {
        self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// Colour of the vertex, i.e. of the edge to its parent.
    pub fn colour(&self) -> Option<Colour> {
        self.0.last().copied()
    }

    pub fn parent(&self) -> Option<VertexAddress> {
        if self.0.is_empty() {
            None
        } else {
            Some(VertexAddress(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn child(&self, c: Colour) -> VertexAddress {
        debug_assert_ne!(self.colour(), Some(c));
        let mut w = self.0.clone();
        w.push(c);
        VertexAddress(w)
    }

    pub fn extend(&self, tail: &[Colour]) -> VertexAddress {
        let mut w = self.0.clone();
        w.extend_from_slice(tail);
        VertexAddress(w)
    }

    /// Whether `self` is an ancestor of `other` or equal to it.
    pub fn is_prefix_of(&self, other: &VertexAddress) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_prefix_of_word(&self, word: &[Colour]) -> bool {
        word.starts_with(&self.0)
    }
}

impl fmt::Debug for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub fn check_word(word: &[Colour], d: usize) -> Result<(), TreeError> {
    for (i, &c) in word.iter().enumerate() {
        if c as usize > d {
            return Err(TreeError::InvalidAddress { word: word.to_vec(), reason: "colour out of range" });
        }
        if i > 0 && word[i - 1] == c {
            return Err(TreeError::InvalidAddress { word: word.to_vec(), reason: "repeated consecutive colour" });
        }
    }
    Ok(())
}

/// All vertices at distance `n` from the root, in raw word order.
pub fn sphere(d: usize, n: usize) -> Vec<VertexAddress> {
    let mut level = vec![Vec::<Colour>::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(level.len() * (d + 1));
        for w in &level {
            for c in 0..=d as Colour {
                if w.last() != Some(&c) {
                    let mut x = w.clone();
                    x.push(c);
                    next.push(x);
                }
            }
        }
        level = next;
    }
    level.into_iter().map(VertexAddress).collect()
}

/// A finite complete subtree, stored through its leaves in raw word order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CompleteSubtree {
    d: usize,
    leaves: Vec<VertexAddress>,
}

impl CompleteSubtree {
    pub fn new(d: usize, mut leaves: Vec<VertexAddress>) -> Result<Self, TreeError> {
        for l in &leaves {
            check_word(l.word(), d)?;
        }
        leaves.sort();
        if !is_complete_sorted(d, &leaves) {
            return Err(TreeError::NotComplete);
        }
        Ok(CompleteSubtree { d, leaves })
    }

    /// The ball `B_n` around the root, `n ≥ 1`.
    pub fn ball(d: usize, n: usize) -> Self {
        assert!(n >= 1, "a complete subtree has at least the root children as leaves");
        CompleteSubtree { d, leaves: sphere(d, n) }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn leaves(&self) -> &[VertexAddress] {
        &self.leaves
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn contains_leaf(&self, v: &VertexAddress) -> bool {
        self.leaves.binary_search(v).is_ok()
    }

    pub fn leaf_index(&self, v: &VertexAddress) -> Option<usize> {
        self.leaves.binary_search(v).ok()
    }

    /// Leaf that is an ancestor of (or equal to) the vertex with this word.
    pub fn leaf_above(&self, word: &[Colour]) -> Option<&VertexAddress> {
        // A leaf prefix of `word` sorts at or before `word`; only the closest
        // such position can be a prefix because leaves are prefix-free.
        let probe = VertexAddress(word.to_vec());
        let idx = match self.leaves.binary_search(&probe) {
            Ok(i) => return Some(&self.leaves[i]),
            Err(i) => i,
        };
        if idx == 0 {
            return None;
        }
        let cand = &self.leaves[idx - 1];
        cand.is_prefix_of_word(word).then_some(cand)
    }

    /// Maximal leaf depth below the vertex `v` (`v` itself inside the tree).
    pub fn max_depth_below(&self, v: &VertexAddress) -> Option<usize> {
        self.leaves.iter().filter(|l| v.is_prefix_of(l)).map(|l| l.depth()).max()
    }

    pub fn max_depth(&self) -> usize {
        self.leaves.iter().map(|l| l.depth()).max().unwrap_or(0)
    }

    /// Whether `v` is an internal vertex (a strict ancestor of some leaf).
    pub fn is_internal(&self, v: &VertexAddress) -> bool {
        self.leaves.iter().any(|l| v.is_prefix_of(l) && l != v)
    }

    pub fn simple_expansion(&self, leaf: &VertexAddress) -> Result<CompleteSubtree, TreeError> {
        let i = self.leaf_index(leaf).ok_or_else(|| TreeError::NotALeaf(leaf.clone()))?;
        let mut leaves = self.leaves.clone();
        leaves.remove(i);
        let c = leaf.colour();
        for x in 0..=self.d as Colour {
            if Some(x) != c {
                leaves.push(leaf.child(x));
            }
        }
        leaves.sort();
        Ok(CompleteSubtree { d: self.d, leaves })
    }

    /// Inverse of [`simple_expansion`](Self::simple_expansion): replaces the children of `v` by `v`.
    pub fn contract(&self, v: &VertexAddress) -> Result<CompleteSubtree, TreeError> {
        if v.is_root() {
            return Err(TreeError::NotComplete);
        }
        let kids: Vec<VertexAddress> =
            (0..=self.d as Colour).filter(|&x| Some(x) != v.colour()).map(|x| v.child(x)).collect();
        if !kids.iter().all(|k| self.contains_leaf(k)) {
            return Err(TreeError::NotALeaf(kids[0].clone()));
        }
        let mut leaves: Vec<VertexAddress> = self.leaves.iter().filter(|l| !kids.contains(l)).cloned().collect();
        leaves.push(v.clone());
        leaves.sort();
        Ok(CompleteSubtree { d: self.d, leaves })
    }

    /// Smallest complete subtree containing both `self` and `other`.
    pub fn union(&self, other: &CompleteSubtree) -> CompleteSubtree {
        assert_eq!(self.d, other.d);
        let mut leaves: Vec<VertexAddress> = Vec::new();
        for (a, b) in [(self, other), (other, self)] {
            for l in &a.leaves {
                // keep `l` unless the other tree has a leaf strictly below it
                if !b.leaves.iter().any(|m| l.is_prefix_of(m) && m != l) {
                    leaves.push(l.clone());
                }
            }
        }
        leaves.sort();
        leaves.dedup();
        CompleteSubtree { d: self.d, leaves }
    }

    /// Whether `self` is obtained from `other` by simple expansions.
    pub fn refines(&self, other: &CompleteSubtree) -> bool {
        self.leaves.iter().all(|l| other.leaf_above(l.word()).is_some())
    }
}

/// Whether the given addresses form the leaf set of a complete subtree.
pub fn is_complete_leafset(d: usize, leaves: &[VertexAddress]) -> bool {
    if leaves.iter().any(|l| check_word(l.word(), d).is_err()) {
        return false;
    }
    let mut sorted = leaves.to_vec();
    sorted.sort();
    is_complete_sorted(d, &sorted)
}

fn is_complete_sorted(d: usize, sorted: &[VertexAddress]) -> bool {
    if sorted.is_empty() || sorted[0].is_root() || d == 0 {
        return false;
    }
    for w in sorted.windows(2) {
        if w[0].is_prefix_of(&w[1]) {
            return false;
        }
    }
    // A root child carries mass 1/(d+1) and every further step divides by d.
    // Scale by (d+1)·d^(depth-1) of the deepest leaf so all masses are integers.
    let max_depth = sorted.iter().map(|l| l.depth()).max().unwrap();
    let db = BigUint::from(d);
    let total = BigUint::from(d + 1) * num_traits::pow(db.clone(), max_depth - 1);
    let mut sum = BigUint::zero();
    for l in sorted {
        sum += num_traits::pow(db.clone(), max_depth - l.depth());
    }
    sum == total
}

/// The plane order on children determined by the colour group `F`.
///
/// For an orbit with least colour `r`, a vertex of colour `c` in that orbit orders its
/// children by their image under `f_c`, the least element of `F` (by image tuple)
/// with `f_c(c) = r`. Root children are ordered by colour.
#[derive(Debug)]
pub struct PlaneOrder {
    group: ColourGroup,
    orbit_reps: Vec<Colour>,
    canonical: Vec<Permutation>,
    // index `d+1` stands for the root
    child_order: Vec<Vec<Colour>>,
    child_rank: Vec<Vec<u8>>,
}

impl PartialEq for PlaneOrder {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group
    }
}

impl PlaneOrder {
    pub fn new(group: ColourGroup) -> Arc<Self> {
        let n = group.degree();
        let orbit_reps: Vec<Colour> = group.orbits().iter().map(|o| o[0]).collect();
        let canonical: Vec<Permutation> = (0..n as Colour)
            .map(|c| {
                let rep = orbit_reps[group.orbit_index(c)];
                group.elements().iter().find(|f| f.apply(c) == rep).expect("orbit representative reachable").clone()
            })
            .collect();
        let mut child_order = Vec::with_capacity(n + 1);
        for c in 0..n as Colour {
            let f = &canonical[c as usize];
            let mut kids: Vec<Colour> = (0..n as Colour).filter(|&x| x != c).collect();
            kids.sort_by_key(|&x| f.apply(x));
            child_order.push(kids);
        }
        child_order.push((0..n as Colour).collect());
        let child_rank = child_order
            .iter()
            .map(|kids| {
                let mut r = vec![u8::MAX; n];
                for (i, &k) in kids.iter().enumerate() {
                    r[k as usize] = i as u8;
                }
                r
            })
            .collect();
        Arc::new(PlaneOrder { group, orbit_reps, canonical, child_order, child_rank })
    }

    pub fn group(&self) -> &ColourGroup {
        &self.group
    }

    pub fn d(&self) -> usize {
        self.group.d()
    }

    pub fn orbit_reps(&self) -> &[Colour] {
        &self.orbit_reps
    }

    /// The element `f_c` used to order the children of a `c`-coloured vertex.
    pub fn canonical_map(&self, c: Colour) -> &Permutation {
        &self.canonical[c as usize]
    }

    fn slot(&self, parent_colour: Option<Colour>) -> usize {
        parent_colour.map_or(self.d() + 1, |c| c as usize)
    }

    /// Child colours of a vertex with the given colour (`None` for the root), in plane order.
    pub fn child_colours(&self, parent_colour: Option<Colour>) -> &[Colour] {
        &self.child_order[self.slot(parent_colour)]
    }

    pub fn child_rank(&self, parent_colour: Option<Colour>, c: Colour) -> usize {
        self.child_rank[self.slot(parent_colour)][c as usize] as usize
    }

    pub fn children(&self, v: &VertexAddress) -> Vec<VertexAddress> {
        self.child_colours(v.colour()).iter().map(|&c| v.child(c)).collect()
    }

    /// The order-preserving transport of `tail` from below a `from`-coloured vertex
    /// to below a `to`-coloured vertex: each step keeps the rank among siblings.
    pub fn transport(&self, from: Option<Colour>, to: Option<Colour>, tail: &[Colour]) -> Vec<Colour> {
        let mut out = Vec::with_capacity(tail.len());
        let (mut cf, mut ct) = (from, to);
        for &c in tail {
            let r = self.child_rank(cf, c);
            let img = self.child_colours(ct)[r];
            out.push(img);
            cf = Some(c);
            ct = Some(img);
        }
        out
    }

    /// Lexicographic order: a strict descendant precedes its ancestor; otherwise
    /// compare the plane order of the children where the two paths branch.
    pub fn lex_compare(&self, v: &VertexAddress, w: &VertexAddress) -> Ordering {
        let (a, b) = (v.word(), w.word());
        let k = a.iter().zip(b).take_while(|(x, y)| x == y).count();
        match (k == a.len(), k == b.len()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                let parent = if k == 0 { None } else { Some(a[k - 1]) };
                self.child_rank(parent, a[k]).cmp(&self.child_rank(parent, b[k]))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr(w: &[Colour]) -> VertexAddress {
        VertexAddress(w.to_vec())
    }

    #[test]
    fn address_validation() {
        assert!(VertexAddress::new(vec![0, 1, 0], 2).is_ok());
        assert!(VertexAddress::new(vec![0, 0], 2).is_err());
        assert!(VertexAddress::new(vec![3], 2).is_err());
    }

    #[test]
    fn children_examples() {
        let po = PlaneOrder::new(ColourGroup::from_cycles(3, &["(1 2 3)"]).unwrap());
        assert_eq!(po.child_colours(None), &[0, 1, 2, 3]);
        assert_eq!(po.child_colours(Some(1)), &[0, 2, 3]);
        assert_eq!(po.canonical_map(2).images(), &[0, 3, 1, 2]);
        assert_eq!(po.child_colours(Some(2)), &[0, 3, 1]);
        assert_eq!(po.children(&addr(&[2])), vec![addr(&[2, 0]), addr(&[2, 3]), addr(&[2, 1])]);
    }

    #[test]
    fn lex_examples() {
        let po = PlaneOrder::new(ColourGroup::trivial(3));
        assert_eq!(po.lex_compare(&addr(&[0, 1]), &addr(&[0])), Ordering::Less);
        assert_eq!(po.lex_compare(&addr(&[2, 3]), &addr(&[2, 3])), Ordering::Equal);
        assert_eq!(po.lex_compare(&addr(&[1]), &addr(&[2])), Ordering::Less);
        assert_eq!(po.lex_compare(&addr(&[0]), &addr(&[0, 1])), Ordering::Greater);
    }

    #[test]
    fn expansion_examples() {
        let d = 3;
        let b1 = CompleteSubtree::ball(d, 1);
        let t = b1.simple_expansion(&addr(&[0])).unwrap();
        assert_eq!(t.len(), b1.len() + d - 1);
        assert!(t.contains_leaf(&addr(&[0, 2])) && !t.contains_leaf(&addr(&[0])));
        assert_eq!(t.contract(&addr(&[0])).unwrap(), b1);
        let mut s = b1.clone();
        for l in b1.leaves() {
            s = s.simple_expansion(l).unwrap();
        }
        assert_eq!(s, CompleteSubtree::ball(d, 2));
        assert_eq!(s.len(), (d + 1) * d);
        assert!(b1.simple_expansion(&addr(&[0, 1])).is_err());
    }

    #[test]
    fn completeness_examples() {
        let d = 2;
        assert!(is_complete_leafset(d, &[addr(&[0]), addr(&[1]), addr(&[2])]));
        assert!(!is_complete_leafset(d, &[addr(&[0]), addr(&[1])]));
        assert!(is_complete_leafset(d, &[addr(&[0, 1]), addr(&[0, 2]), addr(&[1]), addr(&[2])]));
        assert!(!is_complete_leafset(d, &[addr(&[])]));
        assert!(!is_complete_leafset(d, &[addr(&[0]), addr(&[0, 1]), addr(&[1]), addr(&[2])]));
        assert!(!is_complete_leafset(d, &[addr(&[0]), addr(&[0]), addr(&[1]), addr(&[2])]));
    }

    #[test]
    fn sphere_sizes() {
        for d in 2..5 {
            for n in 1..5 {
                assert_eq!(sphere(d, n).len(), (d + 1) * d.pow(n as u32 - 1));
            }
        }
    }

    #[test]
    fn leaf_above_and_union() {
        let b1 = CompleteSubtree::ball(2, 1);
        let t = b1.simple_expansion(&addr(&[1])).unwrap();
        assert_eq!(t.leaf_above(&[1, 2, 0]), Some(&addr(&[1, 2])));
        assert_eq!(t.leaf_above(&[1]), None);
        let u = b1.simple_expansion(&addr(&[2])).unwrap();
        let m = t.union(&u);
        assert_eq!(m.len(), 5);
        assert!(m.refines(&t) && m.refines(&u) && !t.refines(&u));
    }
}
