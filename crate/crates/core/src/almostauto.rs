//! Tree-pair elements of `V_F`: reduction, composition, boundary action, signs and
//! purely infinite witnesses.
//!
//! An element is a bijection between the leaves of two complete subtrees. Below the
//! leaves it acts by the order-preserving transport of [`PlaneOrder`], which is what
//! makes the data finite.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::permgrp::{Colour, ColourGroup, Permutation};
use crate::tree::{check_word, CompleteSubtree, PlaneOrder, TreeError, VertexAddress};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ElementError {
    #[error("domain has {domain} leaves but range has {range}")]
    SizeMismatch { domain: usize, range: usize },
    #[error("{0} leaves do not form a complete subtree")]
    IncompleteTree(&'static str),
    #[error("leaf {leaf} has colour orbit different from its image {image}")]
    OrbitViolation { leaf: VertexAddress, image: VertexAddress },
    #[error("kappa is not a bijection: range index {duplicate} is used twice")]
    NotBijective { duplicate: usize },
    #[error("kappa has {found} entries, expected {expected}")]
    KappaLength { expected: usize, found: usize },
    #[error("kappa entry {value} at position {position} is out of range")]
    KappaOutOfRange { position: usize, value: usize },
    #[error("elements live over different colour groups")]
    ParameterMismatch,
    #[error("{0} is not a domain leaf")]
    NotALeaf(VertexAddress),
    #[error("prefix too short: a word of length {needed} is required")]
    PrefixTooShort { needed: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("colour set {0:?} is not invariant under F")]
    NotInvariant(Vec<Colour>),
    #[error("sign on {0:?} is not well defined for this target")]
    NotWellDefined(Vec<Colour>),
    #[error("the tree does not refine the element's domain")]
    NotARefinement,
    #[error("local twist at {0} is not an element of F fixing the vertex colour")]
    BadTwist(VertexAddress),
    #[error("cylinder set is empty")]
    EmptySet,
    #[error("cylinder set is the whole boundary")]
    WholeBoundary,
    #[error("cylinder addresses overlap")]
    OverlappingCylinders,
}

/// An element of `V_F` given by a leaf bijection between complete subtrees.
///
/// Leaves of both trees are kept in raw word order and `kappa[i]` is the index of the
/// image of the `i`-th domain leaf.
#[derive(Clone, Debug)]
pub struct TreePairElement {
    plane: Arc<PlaneOrder>,
    domain: CompleteSubtree,
    range: CompleteSubtree,
    kappa: Vec<usize>,
}

impl PartialEq for TreePairElement {
    fn eq(&self, other: &Self) -> bool {
        same_plane(&self.plane, &other.plane)
            && self.domain == other.domain
            && self.range == other.range
            && self.kappa == other.kappa
    }
}
impl Eq for TreePairElement {}

fn same_plane(a: &Arc<PlaneOrder>, b: &Arc<PlaneOrder>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl TreePairElement {
    /// Validates the data and returns the reduced element.
    pub fn new(
        plane: &Arc<PlaneOrder>,
        domain_leaves: Vec<VertexAddress>,
        range_leaves: Vec<VertexAddress>,
        kappa: Vec<usize>,
    ) -> Result<Self, ElementError> {
        Ok(Self::new_unreduced(plane, domain_leaves, range_leaves, kappa)?.reduce())
    }

    /// Validates the data but keeps the given representative.
    pub fn new_unreduced(
        plane: &Arc<PlaneOrder>,
        domain_leaves: Vec<VertexAddress>,
        range_leaves: Vec<VertexAddress>,
        kappa: Vec<usize>,
    ) -> Result<Self, ElementError> {
        let d = plane.d();
        if domain_leaves.len() != range_leaves.len() {
            return Err(ElementError::SizeMismatch { domain: domain_leaves.len(), range: range_leaves.len() });
        }
        if kappa.len() != domain_leaves.len() {
            return Err(ElementError::KappaLength { expected: domain_leaves.len(), found: kappa.len() });
        }
        let mut used = vec![false; range_leaves.len()];
        for (position, &k) in kappa.iter().enumerate() {
            if k >= range_leaves.len() {
                return Err(ElementError::KappaOutOfRange { position, value: k });
            }
            if used[k] {
                return Err(ElementError::NotBijective { duplicate: k });
            }
            used[k] = true;
        }
        for l in domain_leaves.iter().chain(&range_leaves) {
            check_word(l.word(), d)?;
        }
        let pairs: Vec<(VertexAddress, VertexAddress)> =
            domain_leaves.iter().cloned().zip(kappa.iter().map(|&k| range_leaves[k].clone())).collect();
        CompleteSubtree::new(d, domain_leaves).map_err(|_| ElementError::IncompleteTree("domain"))?;
        CompleteSubtree::new(d, range_leaves).map_err(|_| ElementError::IncompleteTree("range"))?;
        let group = plane.group();
        for (u, r) in &pairs {
            if !group.same_orbit(u.colour().unwrap(), r.colour().unwrap()) {
                return Err(ElementError::OrbitViolation { leaf: u.clone(), image: r.clone() });
            }
        }
        Ok(Self::from_pairs(plane, pairs))
    }

    /// Builds an element from already validated leaf pairs.
    pub(crate) fn from_pairs(plane: &Arc<PlaneOrder>, mut pairs: Vec<(VertexAddress, VertexAddress)>) -> Self {
        let d = plane.d();
        pairs.sort();
        let mut range: Vec<VertexAddress> = pairs.iter().map(|p| p.1.clone()).collect();
        range.sort();
        let kappa = pairs.iter().map(|p| range.binary_search(&p.1).unwrap()).collect();
        let domain = pairs.into_iter().map(|p| p.0).collect();
        TreePairElement {
            plane: plane.clone(),
            domain: CompleteSubtree::new(d, domain).expect("domain leaves complete"),
            range: CompleteSubtree::new(d, range).expect("range leaves complete"),
            kappa,
        }
    }

    pub fn identity(plane: &Arc<PlaneOrder>) -> Self {
        let b1 = CompleteSubtree::ball(plane.d(), 1);
        let n = b1.len();
        TreePairElement { plane: plane.clone(), domain: b1.clone(), range: b1, kappa: (0..n).collect() }
    }

    pub fn plane(&self) -> &Arc<PlaneOrder> {
        &self.plane
    }

    pub fn group(&self) -> &ColourGroup {
        self.plane.group()
    }

    pub fn d(&self) -> usize {
        self.plane.d()
    }

    pub fn domain(&self) -> &CompleteSubtree {
        &self.domain
    }

    pub fn range(&self) -> &CompleteSubtree {
        &self.range
    }

    pub fn kappa(&self) -> &[usize] {
        &self.kappa
    }

    /// Leaf pairs `(u, κ(u))` in raw order of `u`.
    pub fn pairs(&self) -> Vec<(VertexAddress, VertexAddress)> {
        self.domain
            .leaves()
            .iter()
            .zip(&self.kappa)
            .map(|(u, &k)| (u.clone(), self.range.leaves()[k].clone()))
            .collect()
    }

    pub fn image_of_leaf(&self, leaf: &VertexAddress) -> Option<&VertexAddress> {
        self.domain.leaf_index(leaf).map(|i| &self.range.leaves()[self.kappa[i]])
    }

    pub fn is_identity(&self) -> bool {
        let r = self.reduce();
        r.domain == CompleteSubtree::ball(self.d(), 1) && r.is_trivial_map()
    }

    fn is_trivial_map(&self) -> bool {
        self.pairs().iter().all(|(a, b)| a == b)
    }

    /// Image of a boundary prefix: the range leaf followed by the transported tail.
    pub fn apply_to_prefix(&self, word: &[Colour]) -> Result<Vec<Colour>, ElementError> {
        check_word(word, self.d())?;
        let Some(u) = self.domain.leaf_above(word) else {
            let v = VertexAddress::from_vec_unchecked(word.to_vec());
            let needed = self.domain.max_depth_below(&v).unwrap_or(self.domain.max_depth());
            return Err(ElementError::PrefixTooShort { needed });
        };
        let r = self.image_of_leaf(u).unwrap();
        let mut out = r.word().to_vec();
        out.extend(self.plane.transport(u.colour(), r.colour(), &word[u.depth()..]));
        Ok(out)
    }

    /// Preimage of a boundary prefix that extends a range leaf.
    pub fn apply_inverse_to_prefix(&self, word: &[Colour]) -> Result<Vec<Colour>, ElementError> {
        self.inverse_unreduced().apply_to_prefix(word)
    }

    /// The same element on a domain expanded at `leaf`.
    pub fn expand_at(&self, leaf: &VertexAddress) -> Result<Self, ElementError> {
        let r = self.image_of_leaf(leaf).ok_or_else(|| ElementError::NotALeaf(leaf.clone()))?.clone();
        let mut pairs: Vec<(VertexAddress, VertexAddress)> = self.pairs().into_iter().filter(|p| &p.0 != leaf).collect();
        let src = self.plane.child_colours(leaf.colour());
        let dst = self.plane.child_colours(r.colour());
        for (a, b) in src.iter().zip(dst) {
            pairs.push((leaf.child(*a), r.child(*b)));
        }
        Ok(Self::from_pairs(&self.plane, pairs))
    }

    /// The representative whose domain is `tree`, which must refine the domain.
    pub fn expanded_to(&self, tree: &CompleteSubtree) -> Result<Self, ElementError> {
        if !tree.refines(&self.domain) {
            return Err(ElementError::NotARefinement);
        }
        let pairs = tree
            .leaves()
            .iter()
            .map(|x| {
                let img = self.apply_to_prefix(x.word()).expect("refinement");
                (x.clone(), VertexAddress::from_vec_unchecked(img))
            })
            .collect();
        Ok(Self::from_pairs(&self.plane, pairs))
    }

    /// The representative whose range is `tree`, which must refine the range.
    pub fn expanded_to_range(&self, tree: &CompleteSubtree) -> Result<Self, ElementError> {
        Ok(self.inverse_unreduced().expanded_to(tree)?.inverse_unreduced())
    }

    pub fn is_reduced(&self) -> bool {
        self.find_cherry(&self.pairs().into_iter().collect()).is_none()
    }

    /// Exhaustive cherry contraction, lex-least eligible vertex first.
    pub fn reduce(&self) -> Self {
        let mut map: HashMap<VertexAddress, VertexAddress> = self.pairs().into_iter().collect();
        while let Some((w, w2)) = self.find_cherry(&map) {
            for c in self.plane.child_colours(w.colour()) {
                map.remove(&w.child(*c));
            }
            map.insert(w, w2);
        }
        Self::from_pairs(&self.plane, map.into_iter().collect())
    }

    fn find_cherry(&self, map: &HashMap<VertexAddress, VertexAddress>) -> Option<(VertexAddress, VertexAddress)> {
        let mut candidates: Vec<VertexAddress> =
            map.keys().filter(|u| u.depth() >= 2).map(|u| u.parent().unwrap()).collect();
        candidates.sort();
        candidates.dedup();
        candidates.sort_by(|a, b| self.plane.lex_compare(a, b));
        candidates.into_iter().find_map(|w| {
            let kids = self.plane.child_colours(w.colour());
            let mut images = Vec::with_capacity(kids.len());
            for &c in kids {
                images.push(map.get(&w.child(c))?);
            }
            let target = images[0].parent()?;
            if target.is_root() {
                return None;
            }
            let expected = self.plane.child_colours(target.colour());
            let ok = images.iter().zip(expected).all(|(img, &c)| img.parent().as_ref() == Some(&target) && img.colour() == Some(c));
            ok.then_some((w, target))
        })
    }

    fn check_same(&self, other: &Self) -> Result<(), ElementError> {
        if same_plane(&self.plane, &other.plane) {
            Ok(())
        } else {
            Err(ElementError::ParameterMismatch)
        }
    }

    /// `self ∘ other` (apply `other` first), reduced.
    pub fn compose(&self, other: &Self) -> Result<Self, ElementError> {
        Ok(self.compose_unreduced(other)?.reduce())
    }

    /// `self ∘ other` over the least common refinement of `other.range` and `self.domain`.
    pub fn compose_unreduced(&self, other: &Self) -> Result<Self, ElementError> {
        self.check_same(other)?;
        let middle = other.range.union(&self.domain);
        let b = other.expanded_to_range(&middle)?;
        let a = self.expanded_to(&middle)?;
        let pairs = b
            .pairs()
            .into_iter()
            .map(|(x, m)| {
                let img = a.image_of_leaf(&m).expect("common middle tree").clone();
                (x, img)
            })
            .collect();
        Ok(Self::from_pairs(&self.plane, pairs))
    }

    pub fn inverse(&self) -> Self {
        self.inverse_unreduced().reduce()
    }

    pub fn inverse_unreduced(&self) -> Self {
        Self::from_pairs(&self.plane, self.pairs().into_iter().map(|(a, b)| (b, a)).collect())
    }

    /// Whether the two elements agree as almost automorphisms.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.reduce() == other.reduce()
    }

    /// Image of the cylinder below `v` as a union of cylinders.
    pub fn image_of_cylinder(&self, v: &VertexAddress) -> Vec<VertexAddress> {
        if self.domain.leaf_above(v.word()).is_some() {
            let img = self.apply_to_prefix(v.word()).expect("extends a leaf");
            return vec![VertexAddress::from_vec_unchecked(img)];
        }
        self.pairs().into_iter().filter(|(u, _)| v.is_prefix_of(u)).map(|(_, r)| r).collect()
    }

    /// Honest sign on the `subset`-coloured leaves of this representative.
    pub fn representative_sign(&self, subset: &[Colour]) -> Result<SignValue, ElementError> {
        honest_sign(&self.plane, &self.pairs(), subset)
    }

    pub fn sign(&self, subset: &[Colour], mode: &SignMode) -> Result<SignValue, ElementError> {
        match mode {
            SignMode::Honest(tree) => self.expanded_to(tree)?.representative_sign(subset),
            SignMode::Class(target) => {
                check_invariant(self.group(), subset)?;
                if !is_sign_well_defined(self.group(), subset, *target) {
                    return Err(ElementError::NotWellDefined(sorted(subset)));
                }
                self.reduce().representative_sign(subset)
            }
        }
    }

    /// Signs over every orbit union, in order of the bitmask over orbits.
    pub fn sign_vector(&self) -> Vec<(Vec<Colour>, i8)> {
        let orbits = self.group().orbits();
        let mut out = Vec::new();
        for mask in 1u32..(1 << orbits.len()) {
            let subset: Vec<Colour> = orbits
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .flat_map(|(_, o)| o.iter().copied())
                .collect();
            if subset.len() % 2 == 0 {
                let s = self.reduce().representative_sign(&subset).unwrap();
                out.push((subset, s.value));
            }
        }
        out
    }
}

fn sorted(s: &[Colour]) -> Vec<Colour> {
    let mut v = s.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn check_invariant(group: &ColourGroup, subset: &[Colour]) -> Result<(), ElementError> {
    if subset.iter().any(|&c| c as usize >= group.degree()) || !group.is_invariant(subset) {
        return Err(ElementError::NotInvariant(sorted(subset)));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignTarget {
    /// The dense subgroup `V_F`.
    Vf,
    /// The full coloured Neretin group.
    Nf,
}

#[derive(Clone, Debug)]
pub enum SignMode {
    /// Sign of the representative with the given domain tree.
    Honest(CompleteSubtree),
    /// The homomorphism value; refused when it is not well defined.
    Class(SignTarget),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignValue {
    pub value: i8,
    pub subset: Vec<Colour>,
}

/// Sign of the permutation `ι∘κ` on the `subset`-coloured leaves, where `ι` is the
/// order-preserving identification of range leaves with domain leaves.
pub fn honest_sign(
    plane: &PlaneOrder,
    pairs: &[(VertexAddress, VertexAddress)],
    subset: &[Colour],
) -> Result<SignValue, ElementError> {
    check_invariant(plane.group(), subset)?;
    let in_subset = |v: &VertexAddress| subset.contains(&v.colour().unwrap());
    let mut dom: Vec<&(VertexAddress, VertexAddress)> = pairs.iter().filter(|p| in_subset(&p.0)).collect();
    dom.sort_by(|a, b| plane.lex_compare(&a.0, &b.0));
    let mut ranked: Vec<&VertexAddress> = dom.iter().map(|p| &p.1).collect();
    ranked.sort_by(|a, b| plane.lex_compare(a, b));
    let rank: HashMap<&VertexAddress, usize> = ranked.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let seq: Vec<usize> = dom.iter().map(|p| rank[&p.1]).collect();
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    Ok(SignValue { value: if inversions % 2 == 0 { 1 } else { -1 }, subset: sorted(subset) })
}

/// Whether the sign on `subset` is independent of the chosen representative.
pub fn is_sign_well_defined(group: &ColourGroup, subset: &[Colour], target: SignTarget) -> bool {
    let s = sorted(subset);
    if s.is_empty() {
        return true;
    }
    if s.iter().any(|&c| c as usize >= group.degree()) || !group.is_invariant(&s) || s.len() % 2 != 0 {
        return false;
    }
    match target {
        SignTarget::Vf => true,
        SignTarget::Nf => (0..group.degree() as Colour).all(|chi| group.stabilizer_restriction_in_alt(chi, &s) == Ok(true)),
    }
}

/// An element of the coloured Neretin group given by a `V_F` element and finitely many
/// local twists. A twist `h` at a domain vertex `x` (at or below a leaf) precomposes the
/// order-preserving transport of the children of `x` with `h`, an element of `F`
/// fixing the colour of `x`. Away from the twists the action is order-preserving.
#[derive(Clone, Debug)]
pub struct FinitaryElement {
    base: TreePairElement,
    twists: BTreeMap<VertexAddress, Permutation>,
}

impl FinitaryElement {
    pub fn new(base: TreePairElement, twists: BTreeMap<VertexAddress, Permutation>) -> Result<Self, ElementError> {
        for (x, h) in &twists {
            let ok = base.domain.leaf_above(x.word()).is_some()
                && base.group().contains(h)
                && h.apply(x.colour().unwrap()) == x.colour().unwrap();
            if !ok {
                return Err(ElementError::BadTwist(x.clone()));
            }
        }
        Ok(FinitaryElement { base, twists })
    }

    /// An element of `U(F)` fixing the root children, given by local twists.
    pub fn from_local_action(plane: &Arc<PlaneOrder>, twists: BTreeMap<VertexAddress, Permutation>) -> Result<Self, ElementError> {
        Self::new(TreePairElement::identity(plane), twists)
    }

    pub fn base(&self) -> &TreePairElement {
        &self.base
    }

    pub fn twists(&self) -> &BTreeMap<VertexAddress, Permutation> {
        &self.twists
    }

    pub fn apply_to_prefix(&self, word: &[Colour]) -> Result<Vec<Colour>, ElementError> {
        check_word(word, self.base.d())?;
        let plane = &self.base.plane;
        let Some(u) = self.base.domain.leaf_above(word) else {
            return self.base.apply_to_prefix(word);
        };
        let mut x = u.clone();
        let mut y = self.base.image_of_leaf(u).unwrap().clone();
        for &c in &word[u.depth()..] {
            let c1 = self.twists.get(&x).map_or(c, |h| h.apply(c));
            let img = plane.transport(x.colour(), y.colour(), &[c1])[0];
            x = x.child(c);
            y = y.child(img);
        }
        Ok(y.into_word())
    }

    /// Leaf pairs of the honest representative with domain `tree`.
    pub fn representative_at(&self, tree: &CompleteSubtree) -> Result<Vec<(VertexAddress, VertexAddress)>, ElementError> {
        if !tree.refines(&self.base.domain) {
            return Err(ElementError::NotARefinement);
        }
        tree.leaves()
            .iter()
            .map(|x| Ok((x.clone(), VertexAddress::from_vec_unchecked(self.apply_to_prefix(x.word())?))))
            .collect()
    }

    pub fn honest_sign(&self, tree: &CompleteSubtree, subset: &[Colour]) -> Result<SignValue, ElementError> {
        honest_sign(&self.base.plane, &self.representative_at(tree)?, subset)
    }

    /// The same almost automorphism as an element of `V_F`: expand until every twist
    /// vertex is internal, after which the action below the leaves is order-preserving.
    pub fn to_vf(&self) -> TreePairElement {
        let mut tree = self.base.domain.clone();
        for x in self.twists.keys() {
            while let Some(l) = tree.leaf_above(x.word()).cloned() {
                tree = tree.simple_expansion(&l).unwrap();
            }
        }
        let pairs = self.representative_at(&tree).expect("refines base");
        TreePairElement::from_pairs(&self.base.plane, pairs).reduce()
    }
}

/// A pair of representatives of the same element on which the honest sign differs.
#[derive(Clone, Debug)]
pub struct SignViolation {
    pub element: FinitaryElement,
    pub small: CompleteSubtree,
    pub large: CompleteSubtree,
    pub sign_small: i8,
    pub sign_large: i8,
}

/// Directed search for representatives with different honest signs.
///
/// For odd `|D'|` a transposition of two same-coloured vertices on `B_2` is compared
/// with its expansion to `B_3`. For a stabiliser element acting oddly on `D'`, a single
/// local twist at a root child is compared between `B_1` and `B_2`. Returns `None`
/// when neither construction applies.
pub fn find_sign_violation(plane: &Arc<PlaneOrder>, subset: &[Colour], target: SignTarget) -> Option<SignViolation> {
    let group = plane.group();
    let s = sorted(subset);
    if s.is_empty() || check_invariant(group, &s).is_err() {
        return None;
    }
    let d = plane.d();
    if s.len() % 2 == 1 {
        let chi = s[0];
        let b2 = CompleteSubtree::ball(d, 2);
        let same: Vec<&VertexAddress> = b2.leaves().iter().filter(|v| v.colour() == Some(chi)).take(2).collect();
        let (v, w) = (same[0].clone(), same[1].clone());
        let pairs = b2
            .leaves()
            .iter()
            .map(|x| {
                let img = if *x == v { w.clone() } else if *x == w { v.clone() } else { x.clone() };
                (x.clone(), img)
            })
            .collect();
        let element = FinitaryElement::new(TreePairElement::from_pairs(plane, pairs).reduce(), BTreeMap::new()).ok()?;
        let large = CompleteSubtree::ball(d, 3);
        return finish_violation(element, b2, large, &s);
    }
    if target == SignTarget::Nf {
        for chi in 0..=d as Colour {
            if let Some(f) = group.stabilizer(chi).find(|f| !f.is_even_on(&s)) {
                let twists = BTreeMap::from([(VertexAddress::from_vec_unchecked(vec![chi]), f.clone())]);
                let element = FinitaryElement::from_local_action(plane, twists).ok()?;
                return finish_violation(element, CompleteSubtree::ball(d, 1), CompleteSubtree::ball(d, 2), &s);
            }
        }
    }
    None
}

fn finish_violation(element: FinitaryElement, small: CompleteSubtree, large: CompleteSubtree, s: &[Colour]) -> Option<SignViolation> {
    let sign_small = element.honest_sign(&small, s).ok()?.value;
    let sign_large = element.honest_sign(&large, s).ok()?.value;
    Some(SignViolation { element, small, large, sign_small, sign_large })
}

/// Reduced free-product word `a·b` in `(Z/2)^{*(d+1)}`: the colour-preserving tree
/// automorphism with root image `a` sends the vertex `b` to `a·b`.
fn free_product(a: &[Colour], b: &[Colour]) -> Vec<Colour> {
    let mut out = a.to_vec();
    for &c in b {
        if out.last() == Some(&c) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

fn free_inverse(a: &[Colour]) -> Vec<Colour> {
    a.iter().rev().copied().collect()
}

/// The colour-preserving automorphism `x ↦ a·x` as an element of `V_F`.
pub fn left_translation(plane: &Arc<PlaneOrder>, a: &[Colour]) -> TreePairElement {
    // domain: the tree whose internal vertices are the prefixes of a⁻¹
    let inv = free_inverse(a);
    let mut pairs = Vec::new();
    for j in 0..=inv.len() {
        let prefix = &inv[..j];
        for c in 0..=plane.d() as Colour {
            if inv.get(j) == Some(&c) || prefix.last() == Some(&c) {
                continue;
            }
            let mut x = prefix.to_vec();
            x.push(c);
            let y = free_product(a, &x);
            pairs.push((VertexAddress::from_vec_unchecked(x), VertexAddress::from_vec_unchecked(y)));
        }
    }
    TreePairElement::from_pairs(plane, pairs).reduce()
}

/// Mass of the cylinder below `v` under the uniform measure on the boundary.
pub fn cylinder_mass(d: usize, v: &VertexAddress) -> BigRational {
    if v.is_root() {
        return BigRational::one();
    }
    let den = BigUint::from(d + 1) * num_traits::pow(BigUint::from(d), v.depth() - 1);
    BigRational::new(1.into(), den.into())
}

/// Whether the cylinder `c` lies in the union of the disjoint cylinders `set`.
pub fn cylinder_within(d: usize, c: &VertexAddress, set: &[VertexAddress]) -> bool {
    if set.iter().any(|u| u.is_prefix_of(c)) {
        return true;
    }
    let below: BigRational = set.iter().filter(|u| c.is_prefix_of(u)).map(|u| cylinder_mass(d, u)).sum();
    below == cylinder_mass(d, c)
}

fn cylinders_disjoint(a: &[VertexAddress], b: &[VertexAddress]) -> bool {
    a.iter().all(|x| b.iter().all(|y| !x.is_prefix_of(y) && !y.is_prefix_of(x)))
}

fn validate_cylinder_set(d: usize, set: &[VertexAddress]) -> Result<(), ElementError> {
    if set.is_empty() {
        return Err(ElementError::EmptySet);
    }
    for (i, a) in set.iter().enumerate() {
        check_word(a.word(), d)?;
        for b in &set[i + 1..] {
            if a.is_prefix_of(b) || b.is_prefix_of(a) {
                return Err(ElementError::OverlappingCylinders);
            }
        }
    }
    let total: BigRational = set.iter().map(|u| cylinder_mass(d, u)).sum();
    if total == BigRational::one() {
        return Err(ElementError::WholeBoundary);
    }
    if total.is_zero() {
        return Err(ElementError::EmptySet);
    }
    Ok(())
}

/// Image of a union of cylinders.
pub fn image_of_cylinders(e: &TreePairElement, set: &[VertexAddress]) -> Vec<VertexAddress> {
    set.iter().flat_map(|u| e.image_of_cylinder(u)).collect()
}

/// Checks `g(U) ⊔ h(U) ⊆ U` at cylinder level.
pub fn verify_witness(d: usize, set: &[VertexAddress], g: &TreePairElement, h: &TreePairElement) -> bool {
    let gu = image_of_cylinders(g, set);
    let hu = image_of_cylinders(h, set);
    gu.iter().chain(&hu).all(|c| cylinder_within(d, c, set)) && cylinders_disjoint(&gu, &hu)
}

/// Two elements `g, h` with `g(U) ⊔ h(U) ⊆ U` for a proper nonempty clopen `U`.
///
/// Picks a vertex `v` outside `U` and vertices `w1, w2` inside with colours different
/// from that of `v`. The geodesic from `v` to `w_i` is then cyclically reduced, so the
/// conjugate of its colour word by `v` is a hyperbolic translation with attracting
/// end below `w_i` and repelling end below `v`. A large enough power pushes `U`
/// into the cylinder of `w_i`.
pub fn purely_infinite_witness(
    plane: &Arc<PlaneOrder>,
    set: &[VertexAddress],
) -> Result<(TreePairElement, TreePairElement), ElementError> {
    let d = plane.d();
    validate_cylinder_set(d, set)?;
    let depth = set.iter().map(|u| u.depth()).max().unwrap() + 2;
    let level = crate::tree::sphere(d, depth);
    let inside = |x: &VertexAddress| set.iter().any(|u| u.is_prefix_of(x));
    let (ins, outs): (Vec<_>, Vec<_>) = level.into_iter().partition(|x| inside(x));
    let (v, w1, w2) = outs
        .iter()
        .find_map(|v| {
            let mut ws = ins.iter().filter(|w| w.colour() != v.colour());
            Some((v.clone(), ws.next()?.clone(), ws.next()?.clone()))
        })
        .expect("a sphere two levels below the set has enough vertices");
    let g = power_into(plane, set, &v, &w1);
    let h = power_into(plane, set, &v, &w2);
    Ok((g, h))
}

fn power_into(plane: &Arc<PlaneOrder>, set: &[VertexAddress], v: &VertexAddress, w: &VertexAddress) -> TreePairElement {
    let d = plane.d();
    let p = free_product(&free_inverse(v.word()), w.word());
    let target = [w.clone()];
    let mut power = Vec::new();
    for _ in 0..256 {
        power = free_product(&power, &p);
        let a = free_product(&free_product(v.word(), &power), &free_inverse(v.word()));
        let e = left_translation(plane, &a);
        if image_of_cylinders(&e, set).iter().all(|c| cylinder_within(d, c, &target)) {
            return e;
        }
    }
    unreachable!("translation powers contract the set into the attracting cylinder")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translation_multiplies_words() {
        let p = plane(3, &["(0 1)"]);
        let mut rng = crate::sampling::seeded(3);
        for len in 0..6 {
            let a = crate::sampling::random_word(3, len, &mut rng);
            let e = left_translation(&p, &a);
            for _ in 0..20 {
                let w = crate::sampling::random_word(3, len + 3, &mut rng);
                assert_eq!(e.apply_to_prefix(&w).unwrap(), free_product(&a, &w), "{a:?} {w:?}");
            }
        }
    }

    fn addr(w: &[Colour]) -> VertexAddress {
        VertexAddress::from_vec_unchecked(w.to_vec())
    }

    fn plane(d: usize, gens: &[&str]) -> Arc<PlaneOrder> {
        PlaneOrder::new(ColourGroup::from_cycles(d, gens).unwrap())
    }

    #[test]
    fn identity_and_orbit_violation() {
        let p = plane(2, &[]);
        let b1: Vec<VertexAddress> = CompleteSubtree::ball(2, 1).leaves().to_vec();
        let id = TreePairElement::new(&p, b1.clone(), b1.clone(), vec![0, 1, 2]).unwrap();
        assert_eq!(id, TreePairElement::identity(&p));
        assert!(matches!(
            TreePairElement::new(&p, b1.clone(), b1.clone(), vec![1, 0, 2]),
            Err(ElementError::OrbitViolation { .. })
        ));
        assert_eq!(
            TreePairElement::new(&p, b1.clone(), b1.clone(), vec![1, 1, 2]),
            Err(ElementError::NotBijective { duplicate: 1 })
        );
        let s = PlaneOrder::new(ColourGroup::symmetric(2));
        assert!(TreePairElement::new(&s, b1.clone(), b1, vec![2, 0, 1]).is_ok());
    }

    #[test]
    fn size_and_completeness_errors() {
        let p = plane(2, &[]);
        let b1 = CompleteSubtree::ball(2, 1).leaves().to_vec();
        let b2 = CompleteSubtree::ball(2, 2).leaves().to_vec();
        assert!(matches!(
            TreePairElement::new(&p, b1.clone(), b2, vec![0, 1, 2]),
            Err(ElementError::SizeMismatch { .. })
        ));
        let bad = vec![addr(&[0]), addr(&[1]), addr(&[2, 0])];
        assert_eq!(TreePairElement::new(&p, b1, bad, vec![0, 1, 2]), Err(ElementError::IncompleteTree("range")));
    }

    #[test]
    fn expansion_reduces_back() {
        let p = plane(3, &["(1 2 3)"]);
        let id = TreePairElement::identity(&p);
        let e = id.expand_at(&addr(&[2])).unwrap();
        assert_eq!(e.domain().len(), id.domain().len() + 2);
        assert!(!e.is_reduced());
        assert_eq!(e.reduce(), id);
    }

    #[test]
    fn prefix_action() {
        let p = plane(2, &[]);
        let id = TreePairElement::identity(&p);
        assert_eq!(id.apply_to_prefix(&[0, 1, 2]).unwrap(), vec![0, 1, 2]);
        assert!(matches!(id.apply_to_prefix(&[]), Err(ElementError::PrefixTooShort { needed: 1 })));
        assert!(id.apply_to_prefix(&[0, 0]).is_err());
        let e = id.expand_at(&addr(&[0])).unwrap().expand_at(&addr(&[0, 1])).unwrap();
        assert!(matches!(e.apply_to_prefix(&[0]), Err(ElementError::PrefixTooShort { needed: 3 })));
    }

    #[test]
    fn transposition_signs() {
        let p = plane(3, &[]);
        let v = find_sign_violation(&p, &[1], SignTarget::Vf).unwrap();
        assert_eq!((v.sign_small, v.sign_large), (-1, 1));
        assert!(find_sign_violation(&p, &[1, 2], SignTarget::Nf).is_none());
    }

    #[test]
    fn two_transposition_example_well_definedness() {
        let f = ColourGroup::from_cycles(6, &["(1 2)(3 4)", "(5 6)"]).unwrap();
        assert!(is_sign_well_defined(&f, &[1, 2, 3, 4], SignTarget::Nf));
        assert!(!is_sign_well_defined(&f, &[1, 2, 3, 4, 5, 6], SignTarget::Nf));
        assert!(is_sign_well_defined(&f, &[1, 2, 3, 4, 5, 6], SignTarget::Vf));
        assert!(is_sign_well_defined(&f, &[], SignTarget::Nf));
        assert!(!is_sign_well_defined(&f, &[0, 1, 2], SignTarget::Vf));
        assert!(!is_sign_well_defined(&f, &[1, 3], SignTarget::Vf));
    }

    #[test]
    fn class_sign_refusals() {
        let p = plane(6, &["(1 2)(3 4)", "(5 6)"]);
        let id = TreePairElement::identity(&p);
        assert_eq!(id.sign(&[1, 3], &SignMode::Class(SignTarget::Vf)), Err(ElementError::NotInvariant(vec![1, 3])));
        assert_eq!(id.sign(&[5, 6], &SignMode::Class(SignTarget::Nf)), Err(ElementError::NotWellDefined(vec![5, 6])));
        assert_eq!(id.sign(&[5, 6], &SignMode::Class(SignTarget::Vf)).unwrap().value, 1);
    }

    #[test]
    fn witness_examples() {
        let p = plane(2, &[]);
        let u = vec![addr(&[0]), addr(&[1])];
        let (g, h) = purely_infinite_witness(&p, &u).unwrap();
        assert!(verify_witness(2, &u, &g, &h));
        let comp = vec![addr(&[0, 1]), addr(&[1]), addr(&[2])];
        let (g, h) = purely_infinite_witness(&p, &comp).unwrap();
        assert!(verify_witness(2, &comp, &g, &h));
        let all = vec![addr(&[0]), addr(&[1]), addr(&[2])];
        assert_eq!(purely_infinite_witness(&p, &all).unwrap_err(), ElementError::WholeBoundary);
        assert_eq!(purely_infinite_witness(&p, &[]).unwrap_err(), ElementError::EmptySet);
    }

    #[test]
    fn local_action_embeds() {
        let p = plane(3, &["(1 2 3)"]);
        let f = Permutation::parse_cycles("(1 2 3)", 4).unwrap();
        let twists = BTreeMap::from([(addr(&[0]), f.clone()), (addr(&[2, 0]), f)]);
        let fe = FinitaryElement::from_local_action(&p, twists).unwrap();
        let e = fe.to_vf();
        for w in crate::tree::sphere(3, 5) {
            assert_eq!(fe.apply_to_prefix(w.word()).unwrap(), e.apply_to_prefix(w.word()).unwrap());
        }
        let bad = BTreeMap::from([(addr(&[1]), Permutation::parse_cycles("(1 2 3)", 4).unwrap())]);
        assert!(FinitaryElement::from_local_action(&p, bad).is_err());
    }
}
