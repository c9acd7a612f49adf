//! Paths in the orbit graph, bisections of its path space, and the translation between
//! paths and tree vertices that identifies bisections with tree-pair elements.
//!
//! A path ending at an orbit vertex is canonical. A path ending at a loop vertex has a
//! unique continuation (the loop vertex has one outgoing edge), so canonicalizing it
//! appends that edge without changing the cylinder.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{AbelianError, GraphVertex, SftGraph};
use crate::almostauto::{ElementError, TreePairElement};
use crate::permgrp::Colour;
use crate::tree::{PlaneOrder, VertexAddress};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BridgeError {
    #[error(transparent)]
    Graph(#[from] AbelianError),
    #[error("invalid bisection: {0}")]
    InvalidBisection(BisectionDefect),
    #[error("path is not valid in the graph: {0}")]
    BadPath(String),
    #[error(transparent)]
    Element(#[from] ElementError),
}

/// A finite path: a start vertex and a sequence of edge ids. With no edges it stands
/// for the set of infinite paths starting at `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgePath {
    pub start: usize,
    pub edges: Vec<usize>,
}

impl EdgePath {
    pub fn at(start: usize) -> Self {
        EdgePath { start, edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn end(&self, g: &SftGraph) -> usize {
        self.edges.last().map_or(self.start, |&e| g.edges()[e].to)
    }

    pub fn is_valid(&self, g: &SftGraph) -> bool {
        let mut at = self.start;
        if at >= g.vertices().len() {
            return false;
        }
        for &e in &self.edges {
            match g.edges().get(e) {
                Some(edge) if edge.from == at => at = edge.to,
                _ => return false,
            }
        }
        true
    }

    pub fn is_prefix_of(&self, other: &EdgePath) -> bool {
        self.start == other.start && other.edges.starts_with(&self.edges)
    }

    pub fn concat(&self, tail: &[usize]) -> EdgePath {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(tail);
        EdgePath { start: self.start, edges }
    }

    /// Appends the forced edge out of a loop vertex, if the path ends at one.
    pub fn canonical(&self, g: &SftGraph) -> EdgePath {
        let end = self.end(g);
        if g.is_orbit_vertex(end) {
            self.clone()
        } else {
            let e = g.out_edges(end).next().expect("loop vertex has an outgoing edge");
            self.concat(&[e])
        }
    }
}

/// `(source, offset, target)`; the groupoid element sends `source·x` to `target·x`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BisectionPair(pub EdgePath, pub i64, pub EdgePath);

impl BisectionPair {
    pub fn new(source: EdgePath, target: EdgePath) -> Self {
        let offset = source.len() as i64 - target.len() as i64;
        BisectionPair(source, offset, target)
    }

    pub fn source(&self) -> &EdgePath {
        &self.0
    }

    pub fn offset(&self) -> i64 {
        self.1
    }

    pub fn target(&self) -> &EdgePath {
        &self.2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bisection {
    pub pairs: Vec<BisectionPair>,
}

/// The first problem found by [`validate_bisection`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BisectionDefect {
    #[error("pair {0}: source path is not a path in the graph")]
    BadSource(usize),
    #[error("pair {0}: target path is not a path in the graph")]
    BadTarget(usize),
    #[error("pair {pair}: source ends at vertex {source_end} but target ends at vertex {target_end}")]
    Endpoint { pair: usize, source_end: usize, target_end: usize },
    #[error("pair {pair}: offset {found} but path lengths differ by {expected}")]
    Offset { pair: usize, expected: i64, found: i64 },
    #[error("pairs {0} and {1}: source cylinders overlap")]
    SourceOverlap(usize, usize),
    #[error("pairs {0} and {1}: target cylinders overlap")]
    TargetOverlap(usize, usize),
    #[error("source cylinders have total mass {0}, not 1")]
    SourceMass(String),
    #[error("target cylinders have total mass {0}, not 1")]
    TargetMass(String),
    #[error("empty bisection")]
    Empty,
}

/// Translation between canonical paths and tree vertices.
///
/// Children of the root: the empty path at orbit vertex `i` gets the least colour of
/// orbit `i`; the one-edge path from the `k`-th loop vertex of orbit `i` gets the `k`-th
/// other colour of that orbit. Below a path ending at orbit vertex `i`, a step is
/// labelled by a colour outside the least colour of orbit `i`: an edge to orbit vertex
/// `j` with multiplicity index `k` by the `k`-th colour of orbit `j`, the detour through
/// the `m`-th loop vertex by the `m`-th non-least colour of orbit `i`. Below a vertex of
/// colour `c`, the child coloured `f_c^{-1}(label)` corresponds to the step with that label.
pub struct PathTranslator {
    plane: Arc<PlaneOrder>,
    graph: SftGraph,
    orbits: Vec<Vec<Colour>>,
    /// (orbit, position in orbit) per colour.
    place: Vec<(usize, usize)>,
}

impl PathTranslator {
    pub fn new(plane: &Arc<PlaneOrder>) -> Result<Self, BridgeError> {
        let group = plane.group();
        let orbits: Vec<Vec<Colour>> = group.orbits().to_vec();
        let graph = SftGraph::new(&group.orbit_sizes())?;
        let mut place = vec![(0, 0); group.degree()];
        for (i, o) in orbits.iter().enumerate() {
            for (k, &c) in o.iter().enumerate() {
                place[c as usize] = (i, k);
            }
        }
        Ok(PathTranslator { plane: plane.clone(), graph, orbits, place })
    }

    pub fn graph(&self) -> &SftGraph {
        &self.graph
    }

    pub fn plane(&self) -> &Arc<PlaneOrder> {
        &self.plane
    }

    fn orbit_vertex(&self, i: usize) -> usize {
        self.graph.vertex_index(GraphVertex::Orbit(i)).unwrap()
    }

    fn loop_vertex(&self, orbit: usize, index: usize) -> usize {
        self.graph.vertex_index(GraphVertex::Loop { orbit, index }).unwrap()
    }

    fn edge(&self, from: usize, to: usize, k: usize) -> usize {
        self.graph
            .edge_index(crate::abelian::GraphEdge { from, to, multiplicity_index: k })
            .expect("edge present")
    }

    /// Edge ids of the step with the given label out of orbit vertex `i`.
    fn step_for_label(&self, i: usize, label: Colour) -> Vec<usize> {
        let (j, k) = self.place[label as usize];
        let here = self.orbit_vertex(i);
        if j != i {
            vec![self.edge(here, self.orbit_vertex(j), k)]
        } else {
            debug_assert!(k >= 1);
            let lv = self.loop_vertex(i, k);
            vec![self.edge(here, lv, 0), self.edge(lv, here, 0)]
        }
    }

    /// The path of a vertex; the root has none.
    pub fn to_path(&self, v: &VertexAddress) -> Option<EdgePath> {
        let w = v.word();
        let first = *w.first()?;
        let (i, k) = self.place[first as usize];
        let mut path = if k == 0 {
            EdgePath::at(self.orbit_vertex(i))
        } else {
            let lv = self.loop_vertex(i, k);
            EdgePath { start: lv, edges: vec![self.edge(lv, self.orbit_vertex(i), 0)] }
        };
        let mut prev = first;
        for &c in &w[1..] {
            let label = self.plane.canonical_map(prev).apply(c);
            let i = self.place[prev as usize].0;
            path.edges.extend(self.step_for_label(i, label));
            prev = c;
        }
        Some(path)
    }

    /// The vertex of a path; non-canonical paths are canonicalized first.
    pub fn to_address(&self, p: &EdgePath) -> Result<VertexAddress, BridgeError> {
        let g = &self.graph;
        if !p.is_valid(g) {
            return Err(BridgeError::BadPath(format!("{p:?}")));
        }
        let p = p.canonical(g);
        let mut word: Vec<Colour> = Vec::new();
        let mut rest = &p.edges[..];
        let first = match g.vertices()[p.start] {
            GraphVertex::Orbit(i) => self.orbits[i][0],
            GraphVertex::Loop { orbit, index } => {
                rest = &rest[1..];
                self.orbits[orbit][index]
            }
        };
        word.push(first);
        while let Some((&e, tail)) = rest.split_first() {
            let prev = *word.last().unwrap();
            let edge = g.edges()[e];
            let label = match g.vertices()[edge.to] {
                GraphVertex::Orbit(j) => {
                    rest = tail;
                    self.orbits[j][edge.multiplicity_index]
                }
                GraphVertex::Loop { orbit, index } => {
                    rest = &tail[1..];
                    self.orbits[orbit][index]
                }
            };
            word.push(self.plane.canonical_map(prev).inverse().apply(label));
        }
        Ok(VertexAddress::from_vec_unchecked(word))
    }

    /// Children of the root in path form, in plane order.
    pub fn root_children(&self) -> Vec<EdgePath> {
        let mut kids: Vec<(Colour, EdgePath)> = Vec::new();
        for (i, o) in self.orbits.iter().enumerate() {
            kids.push((o[0], EdgePath::at(self.orbit_vertex(i))));
            for (k, &c) in o.iter().enumerate().skip(1) {
                let lv = self.loop_vertex(i, k);
                kids.push((c, EdgePath { start: lv, edges: vec![self.edge(lv, self.orbit_vertex(i), 0)] }));
            }
        }
        kids.sort();
        kids.into_iter().map(|(_, p)| p).collect()
    }

    /// One-step extensions of a canonical path, sorted by label.
    pub fn children(&self, p: &EdgePath) -> Vec<EdgePath> {
        let end = p.end(&self.graph);
        let GraphVertex::Orbit(i) = self.graph.vertices()[end] else {
            return self.children(&p.canonical(&self.graph));
        };
        let least = self.orbits[i][0];
        (0..self.plane.group().degree() as Colour)
            .filter(|&c| c != least)
            .map(|label| p.concat(&self.step_for_label(i, label)))
            .collect()
    }

    /// Number of label steps in a canonical path: its depth in the path tree.
    pub fn depth(&self, p: &EdgePath) -> usize {
        let g = &self.graph;
        let p = p.canonical(g);
        let loops = p.edges.iter().filter(|&&e| !g.is_orbit_vertex(g.edges()[e].to)).count();
        let skip = usize::from(!g.is_orbit_vertex(p.start));
        1 + p.edges.len() - loops - skip
    }

    /// Mass of the cylinder of a path under the measure giving each vertex at depth `n`
    /// of the tree mass `1/((d+1) d^{n-1})`.
    pub fn mass(&self, p: &EdgePath) -> BigRational {
        let d = self.graph.d();
        let n = self.depth(p);
        let den = BigInt::from(d + 1) * num_traits::pow(BigInt::from(d), n - 1);
        BigRational::new(BigInt::one(), den)
    }

    pub fn identity_bisection(&self) -> Bisection {
        let mut pairs: Vec<BisectionPair> = self.root_children().into_iter().map(|p| BisectionPair::new(p.clone(), p)).collect();
        pairs.sort_by(|a, b| a.source().cmp(b.source()));
        Bisection { pairs }
    }

    pub fn validate(&self, b: &Bisection) -> Result<(), BisectionDefect> {
        validate_bisection(self, b)
    }

    /// Refines to canonical paths, merges every complete family of sibling pairs that
    /// move by the same steps, and sorts by source.
    pub fn canonicalize(&self, b: &Bisection) -> Bisection {
        let g = &self.graph;
        let mut pairs: BTreeMap<EdgePath, EdgePath> =
            b.pairs.iter().map(|p| (p.source().canonical(g), p.target().canonical(g))).collect();
        loop {
            let mut merged = None;
            for (s, t) in &pairs {
                let Some((ps, step)) = self.split_last_step(s) else { continue };
                let Some((pt, step_t)) = self.split_last_step(t) else { continue };
                if step != step_t {
                    continue;
                }
                let family = self.children(&ps);
                let all = family.iter().all(|c| {
                    let tail = &c.edges[ps.edges.len()..];
                    pairs.get(c) == Some(&pt.concat(tail))
                });
                if all {
                    merged = Some((ps, pt, family));
                    break;
                }
            }
            match merged {
                Some((ps, pt, family)) => {
                    for c in family {
                        pairs.remove(&c);
                    }
                    pairs.insert(ps, pt);
                }
                None => break,
            }
        }
        Bisection { pairs: pairs.into_iter().map(|(s, t)| BisectionPair::new(s, t)).collect() }
    }

    /// Splits a canonical path below the root into its parent path and its last step.
    fn split_last_step(&self, p: &EdgePath) -> Option<(EdgePath, Vec<usize>)> {
        if self.depth(p) < 2 {
            return None;
        }
        let g = &self.graph;
        let n = p.edges.len();
        let last = g.edges()[p.edges[n - 1]];
        let cut = if g.is_orbit_vertex(last.from) { n - 1 } else { n - 2 };
        Some((EdgePath { start: p.start, edges: p.edges[..cut].to_vec() }, p.edges[cut..].to_vec()))
    }

    pub fn bisection_to_element(&self, b: &Bisection) -> Result<TreePairElement, BridgeError> {
        self.validate(b).map_err(BridgeError::InvalidBisection)?;
        let mut pairs: Vec<(VertexAddress, VertexAddress)> = Vec::with_capacity(b.pairs.len());
        for p in &b.pairs {
            pairs.push((self.to_address(p.source())?, self.to_address(p.target())?));
        }
        pairs.sort();
        let mut range: Vec<VertexAddress> = pairs.iter().map(|p| p.1.clone()).collect();
        range.sort();
        let kappa = pairs.iter().map(|p| range.binary_search(&p.1).unwrap()).collect();
        let domain = pairs.into_iter().map(|p| p.0).collect();
        Ok(TreePairElement::new(&self.plane, domain, range, kappa)?)
    }

    pub fn element_to_bisection(&self, e: &TreePairElement) -> Bisection {
        let pairs = e
            .pairs()
            .into_iter()
            .map(|(u, v)| BisectionPair::new(self.to_path(&u).unwrap(), self.to_path(&v).unwrap()))
            .collect();
        self.canonicalize(&Bisection { pairs })
    }

    /// `a ∘ b` computed on paths: apply `b`, then `a`.
    pub fn compose(&self, a: &Bisection, b: &Bisection) -> Bisection {
        let g = &self.graph;
        let mut out = Vec::new();
        for pb in &b.pairs {
            let (s2, t2) = (pb.source().canonical(g), pb.target().canonical(g));
            for pa in &a.pairs {
                let (s1, t1) = (pa.source().canonical(g), pa.target().canonical(g));
                if t2.is_prefix_of(&s1) {
                    out.push(BisectionPair::new(s2.concat(&s1.edges[t2.len()..]), t1));
                } else if s1.is_prefix_of(&t2) {
                    out.push(BisectionPair::new(s2.clone(), t1.concat(&t2.edges[s1.len()..])));
                }
            }
        }
        self.canonicalize(&Bisection { pairs: out })
    }

    pub fn inverse(&self, b: &Bisection) -> Bisection {
        let pairs = b.pairs.iter().map(|p| BisectionPair::new(p.target().clone(), p.source().clone())).collect();
        self.canonicalize(&Bisection { pairs })
    }

    /// A random partition of the path space into cylinders, by random refinement.
    pub fn random_partition<R: Rng>(&self, expansions: usize, max_depth: usize, rng: &mut R) -> Vec<EdgePath> {
        let mut parts = self.root_children();
        for _ in 0..expansions {
            let shallow: Vec<usize> = (0..parts.len()).filter(|&i| self.depth(&parts[i]) < max_depth).collect();
            let Some(&i) = shallow.choose(rng) else { break };
            let p = parts.swap_remove(i);
            parts.extend(self.children(&p));
        }
        parts.sort();
        parts
    }

    /// A random bisection: two random partitions matched by a random bijection that
    /// respects end vertices.
    pub fn random_bisection<R: Rng>(&self, expansions: usize, max_depth: usize, rng: &mut R) -> Bisection {
        let g = &self.graph;
        let src = self.random_partition(expansions, max_depth, rng);
        let profile = |ps: &[EdgePath]| {
            let mut m: BTreeMap<usize, usize> = BTreeMap::new();
            for p in ps {
                *m.entry(p.end(g)).or_default() += 1;
            }
            m
        };
        let want = profile(&src);
        let mut tgt = src.clone();
        for _ in 0..30 {
            let cand = self.random_partition(expansions, max_depth, rng);
            if profile(&cand) == want {
                tgt = cand;
                break;
            }
        }
        let mut by_end: BTreeMap<usize, Vec<EdgePath>> = BTreeMap::new();
        for t in tgt {
            by_end.entry(t.end(g)).or_default().push(t);
        }
        for v in by_end.values_mut() {
            v.shuffle(rng);
        }
        let pairs = src
            .into_iter()
            .map(|s| {
                let t = by_end.get_mut(&s.end(g)).unwrap().pop().unwrap();
                BisectionPair::new(s, t)
            })
            .collect();
        Bisection { pairs }
    }
}

/// Checks paths, end vertices, offsets, and that sources and targets each partition
/// the path space: pairwise disjoint cylinders of total mass one.
pub fn validate_bisection(tr: &PathTranslator, b: &Bisection) -> Result<(), BisectionDefect> {
    let g = tr.graph();
    if b.pairs.is_empty() {
        return Err(BisectionDefect::Empty);
    }
    for (i, p) in b.pairs.iter().enumerate() {
        if !p.source().is_valid(g) {
            return Err(BisectionDefect::BadSource(i));
        }
        if !p.target().is_valid(g) {
            return Err(BisectionDefect::BadTarget(i));
        }
        let (se, te) = (p.source().end(g), p.target().end(g));
        if se != te {
            return Err(BisectionDefect::Endpoint { pair: i, source_end: se, target_end: te });
        }
        let expected = p.source().len() as i64 - p.target().len() as i64;
        if p.offset() != expected {
            return Err(BisectionDefect::Offset { pair: i, expected, found: p.offset() });
        }
    }
    let side = |get: fn(&BisectionPair) -> &EdgePath| -> Result<(), (usize, usize, BigRational)> {
        let paths: Vec<EdgePath> = b.pairs.iter().map(|p| get(p).canonical(g)).collect();
        for i in 0..paths.len() {
            for j in i + 1..paths.len() {
                if paths[i].is_prefix_of(&paths[j]) || paths[j].is_prefix_of(&paths[i]) {
                    return Err((i, j, BigRational::zero()));
                }
            }
        }
        let total: BigRational = paths.iter().map(|p| tr.mass(p)).sum();
        if !total.is_one() {
            return Err((usize::MAX, usize::MAX, total));
        }
        Ok(())
    };
    side(BisectionPair::source).map_err(|(i, j, m)| {
        if i == usize::MAX {
            BisectionDefect::SourceMass(m.to_string())
        } else {
            BisectionDefect::SourceOverlap(i, j)
        }
    })?;
    side(BisectionPair::target).map_err(|(i, j, m)| {
        if i == usize::MAX {
            BisectionDefect::TargetMass(m.to_string())
        } else {
            BisectionDefect::TargetOverlap(i, j)
        }
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgrp::ColourGroup;
    use crate::tree::sphere;

    fn translator(sizes: &[usize]) -> PathTranslator {
        PathTranslator::new(&PlaneOrder::new(ColourGroup::product_of_symmetric(sizes))).unwrap()
    }

    #[test]
    fn root_children_count() {
        let tr = translator(&[1, 3, 2]);
        let kids = tr.root_children();
        assert_eq!(kids.len(), 6);
        for (i, &s) in [1, 3, 2].iter().enumerate() {
            let v = tr.graph().vertex_index(GraphVertex::Orbit(i)).unwrap();
            assert_eq!(kids.iter().filter(|p| p.end(tr.graph()) == v).count(), s);
        }
    }

    #[test]
    fn translation_round_trips() {
        for sizes in [vec![1, 3, 2], vec![2, 2], vec![4]] {
            let tr = translator(&sizes);
            let d = tr.graph().d();
            for n in 1..=3 {
                for v in sphere(d, n) {
                    let p = tr.to_path(&v).unwrap();
                    assert!(p.is_valid(tr.graph()));
                    assert_eq!(tr.to_address(&p).unwrap(), v);
                    assert_eq!(tr.depth(&p), n);
                }
            }
        }
    }

    #[test]
    fn identity_and_defects() {
        let tr = translator(&[2, 2]);
        let id = tr.identity_bisection();
        assert!(tr.validate(&id).is_ok());
        assert!(tr.bisection_to_element(&id).unwrap().is_identity());
        let mut bad = id.clone();
        bad.pairs[0] = BisectionPair::new(bad.pairs[0].0.clone(), bad.pairs[2].2.clone());
        let r = tr.validate(&bad);
        assert!(matches!(r, Err(BisectionDefect::Endpoint { .. }) | Err(BisectionDefect::TargetOverlap(..))), "{r:?}");
        let mut stale = id.clone();
        stale.pairs[0].1 += 1;
        assert!(matches!(tr.validate(&stale), Err(BisectionDefect::Offset { .. })));
    }
}
