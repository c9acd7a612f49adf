//! Finite permutation groups acting on the colour set `D = {0, ..., d}`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// A colour, i.e. a point of `D`.
pub type Colour = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch { index: usize, expected: usize, found: usize },
    #[error("image array is not a bijection of {{0..{}}}", .0 - 1)]
    NotBijective(usize),
    #[error("group enumeration exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("cannot parse cycle notation {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("colour set {0:?} is not invariant under the group")]
    NotInvariant(Vec<Colour>),
    #[error("colour {colour} is outside 0..={max}")]
    ColourOutOfRange { colour: usize, max: usize },
}

/// A permutation of `{0, ..., n-1}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<Colour>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as Colour).collect() }
    }

    pub fn from_images(images: Vec<Colour>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &c in &images {
            let c = c as usize;
            if c >= n || seen[c] {
                return Err(PermError::NotBijective(n));
            }
            seen[c] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `"(1 2)(3 4)"` or `"(0,1,2)"`.
    /// The empty string and `"()"` give the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, PermError> {
        let err = |reason: &str| PermError::Parse { text: text.to_string(), reason: reason.to_string() };
        let mut images: Vec<Colour> = (0..degree as Colour).collect();
        let mut touched = vec![false; degree];
        let mut rest = text.trim();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(err("expected '('"));
            }
            let close = rest.find(')').ok_or_else(|| err("unbalanced parenthesis"))?;
            let body = &rest[1..close];
            let mut cycle = Vec::new();
            for tok in body.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
                let v: usize = tok.parse().map_err(|_| err("non-numeric point"))?;
                if v >= degree {
                    return Err(err(&format!("point {v} outside 0..{degree}")));
                }
                if touched[v] {
                    return Err(err(&format!("point {v} appears twice")));
                }
                touched[v] = true;
                cycle.push(v);
            }
            for k in 0..cycle.len() {
                images[cycle[k]] = cycle[(k + 1) % cycle.len()] as Colour;
            }
            rest = rest[close + 1..].trim_start();
        }
        Ok(Permutation { images })
    }

    /// Transposition of `a` and `b`.
    pub fn transposition(n: usize, a: Colour, b: Colour) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a as usize, b as usize);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Colour] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, c: Colour) -> Colour {
        self.images[c as usize]
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&c| self.images[c as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &c) in self.images.iter().enumerate() {
            inv[c as usize] = i as Colour;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &c)| i == c as usize)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &c)| *i == c as usize).count()
    }

    pub fn moved_points(&self) -> usize {
        self.degree() - self.fixed_points()
    }

    pub fn maps_set_to_itself(&self, set: &[Colour]) -> bool {
        set.iter().all(|&c| set.contains(&self.apply(c)))
    }

    /// Parity of the restriction to an invariant set: `true` when even.
    pub fn is_even_on(&self, set: &[Colour]) -> bool {
        let mut seen = HashSet::new();
        let mut transpositions = 0usize;
        for &start in set {
            if !seen.insert(start) {
                continue;
            }
            let mut len = 1;
            let mut c = self.apply(start);
            while c != start {
                seen.insert(c);
                c = self.apply(c);
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions % 2 == 0
    }

    pub fn is_even(&self) -> bool {
        let all: Vec<Colour> = (0..self.degree() as Colour).collect();
        self.is_even_on(&all)
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<Colour>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for s in 0..self.degree() {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s as Colour];
            seen[s] = true;
            let mut c = self.images[s];
            while c as usize != s {
                seen[c as usize] = true;
                cyc.push(c);
                c = self.images[c as usize];
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
            .collect()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

/// A finite group `F ≤ Sym(D)`, fully enumerated.
#[derive(Clone, Debug)]
pub struct ColourGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    orbits: Vec<Vec<Colour>>,
    orbit_of: Vec<usize>,
}

impl PartialEq for ColourGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}
impl Eq for ColourGroup {}

fn factorial_cap(n: usize) -> usize {
    (1..=n).fold(1usize, |acc, k| acc.saturating_mul(k))
}

impl ColourGroup {
    /// Group generated by `generators` on `{0..degree}`; the cap defaults to `degree!`.
    pub fn generate(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        Self::generate_with_cap(degree, generators, factorial_cap(degree))
    }

    pub fn generate_with_cap(degree: usize, generators: Vec<Permutation>, cap: usize) -> Result<Self, PermError> {
        for (index, g) in generators.iter().enumerate() {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch { index, expected: degree, found: g.degree() });
            }
        }
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = g.compose(&x);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(PermError::CapExceeded(cap));
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        let orbits = orbits_of(degree, &generators);
        let mut orbit_of = vec![0; degree];
        for (i, o) in orbits.iter().enumerate() {
            for &c in o {
                orbit_of[c as usize] = i;
            }
        }
        Ok(ColourGroup { degree, generators, elements, orbits, orbit_of })
    }

    /// Convenience: `d` and generators in cycle notation.
    pub fn from_cycles(d: usize, gens: &[&str]) -> Result<Self, PermError> {
        let perms = gens.iter().map(|g| Permutation::parse_cycles(g, d + 1)).collect::<Result<Vec<_>, _>>()?;
        Self::generate(d + 1, perms)
    }

    pub fn trivial(d: usize) -> Self {
        Self::generate(d + 1, vec![]).expect("trivial group")
    }

    /// `Sym(D)`.
    pub fn symmetric(d: usize) -> Self {
        let n = d + 1;
        if n == 1 {
            return Self::trivial(d);
        }
        let mut gens = vec![Permutation::transposition(n, 0, 1)];
        if n > 2 {
            let cyc: Vec<Colour> = (1..n as Colour).chain(std::iter::once(0)).collect();
            gens.push(Permutation::from_images(cyc).unwrap());
        }
        Self::generate(n, gens).expect("symmetric group")
    }

    /// The full product of symmetric groups on consecutive blocks of the given sizes.
    pub fn product_of_symmetric(orbit_sizes: &[usize]) -> Self {
        let n: usize = orbit_sizes.iter().sum();
        let mut gens = Vec::new();
        let mut start = 0;
        for &s in orbit_sizes {
            if s >= 2 {
                gens.push(Permutation::transposition(n, start as Colour, start as Colour + 1));
                let mut img: Vec<Colour> = (0..n as Colour).collect();
                for k in 0..s {
                    img[start + k] = (start + (k + 1) % s) as Colour;
                }
                gens.push(Permutation::from_images(img).unwrap());
            }
            start += s;
        }
        Self::generate(n, gens).expect("product of symmetric groups")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The `d` of the tree, one less than the number of colours.
    pub fn d(&self) -> usize {
        self.degree - 1
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn orbits(&self) -> &[Vec<Colour>] {
        &self.orbits
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.len()).collect()
    }

    pub fn orbit_index(&self, c: Colour) -> usize {
        self.orbit_of[c as usize]
    }

    pub fn same_orbit(&self, a: Colour, b: Colour) -> bool {
        self.orbit_of[a as usize] == self.orbit_of[b as usize]
    }

    pub fn is_invariant(&self, set: &[Colour]) -> bool {
        self.generators.iter().all(|g| g.maps_set_to_itself(set))
    }

    pub fn acts_freely(&self) -> bool {
        self.elements.iter().all(|g| g.is_identity() || g.fixed_points() == 0)
    }

    pub fn is_single_switch(&self) -> bool {
        self.order() == 2 && self.elements.iter().any(|g| g.moved_points() == 2)
    }

    pub fn stabilizer(&self, c: Colour) -> impl Iterator<Item = &Permutation> {
        self.elements.iter().filter(move |g| g.apply(c) == c)
    }

    /// Whether every element fixing `chi` restricts to an even permutation of `subset`.
    pub fn stabilizer_restriction_in_alt(&self, chi: Colour, subset: &[Colour]) -> Result<bool, PermError> {
        self.check_colours(subset)?;
        if !self.is_invariant(subset) {
            return Err(PermError::NotInvariant(subset.to_vec()));
        }
        Ok(self.stabilizer(chi).all(|g| g.is_even_on(subset)))
    }

    pub fn structure_report(&self, support: &[Colour]) -> Result<StructureReport, PermError> {
        self.check_colours(support)?;
        if !self.is_invariant(support) {
            return Err(PermError::NotInvariant(support.to_vec()));
        }
        Ok(structure_report(&self.generators, support))
    }

    fn check_colours(&self, set: &[Colour]) -> Result<(), PermError> {
        for &c in set {
            if c as usize >= self.degree {
                return Err(PermError::ColourOutOfRange { colour: c as usize, max: self.degree - 1 });
            }
        }
        Ok(())
    }
}

/// Orbits of the group generated by `generators`, sorted by least element.
pub fn orbits_of(degree: usize, generators: &[Permutation]) -> Vec<Vec<Colour>> {
    let mut assigned = vec![false; degree];
    let mut out = Vec::new();
    for s in 0..degree {
        if assigned[s] {
            continue;
        }
        let mut orbit = BTreeSet::new();
        let mut stack = vec![s as Colour];
        orbit.insert(s as Colour);
        assigned[s] = true;
        while let Some(x) = stack.pop() {
            for g in generators {
                let y = g.apply(x);
                if orbit.insert(y) {
                    assigned[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        out.push(orbit.into_iter().collect());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub transitive: bool,
    pub doubly_transitive: bool,
    pub primitive: bool,
    /// A nontrivial block system, when the action is transitive and imprimitive.
    pub block_system: Option<Vec<Vec<Colour>>>,
}

/// Structure of the action on an invariant `support`, computed from generators only.
pub fn structure_report(generators: &[Permutation], support: &[Colour]) -> StructureReport {
    let pts: Vec<Colour> = {
        let mut v = support.to_vec();
        v.sort_unstable();
        v.dedup();
        v
    };
    let transitive = match pts.first() {
        None => true,
        Some(&p0) => {
            let mut reached = BTreeSet::from([p0]);
            let mut stack = vec![p0];
            while let Some(x) = stack.pop() {
                for g in generators {
                    let y = g.apply(x);
                    if reached.insert(y) {
                        stack.push(y);
                    }
                }
            }
            reached.len() == pts.len()
        }
    };
    let doubly_transitive = transitive && (pts.len() < 2 || ordered_pair_orbit_count(generators, &pts) == 1);
    let mut block_system = None;
    let mut primitive = transitive;
    if transitive && pts.len() > 2 {
        let alpha = pts[0];
        for &beta in &pts[1..] {
            let blocks = minimal_block_system(generators, &pts, alpha, beta);
            if blocks.len() > 1 {
                primitive = false;
                block_system = Some(blocks);
                break;
            }
        }
    }
    StructureReport { transitive, doubly_transitive, primitive, block_system }
}

fn ordered_pair_orbit_count(generators: &[Permutation], pts: &[Colour]) -> usize {
    let mut seen: HashSet<(Colour, Colour)> = HashSet::new();
    let mut count = 0;
    for &a in pts {
        for &b in pts {
            if a == b || seen.contains(&(a, b)) {
                continue;
            }
            count += 1;
            seen.insert((a, b));
            let mut stack = vec![(a, b)];
            while let Some((x, y)) = stack.pop() {
                for g in generators {
                    let img = (g.apply(x), g.apply(y));
                    if seen.insert(img) {
                        stack.push(img);
                    }
                }
            }
        }
    }
    count
}

/// Finest invariant partition of `pts` in which `alpha` and `beta` share a block.
pub fn minimal_block_system(generators: &[Permutation], pts: &[Colour], alpha: Colour, beta: Colour) -> Vec<Vec<Colour>> {
    let n = pts.iter().map(|&p| p as usize + 1).max().unwrap_or(0);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut queue = vec![(alpha as usize, beta as usize)];
    let (ra, rb) = (find(&mut parent, alpha as usize), find(&mut parent, beta as usize));
    if ra != rb {
        parent[rb] = ra;
    }
    while let Some((x, y)) = queue.pop() {
        for g in generators {
            let gx = find(&mut parent, g.apply(x as Colour) as usize);
            let gy = find(&mut parent, g.apply(y as Colour) as usize);
            if gx != gy {
                parent[gy] = gx;
                queue.push((gx, gy));
            }
        }
    }
    let mut blocks: std::collections::BTreeMap<usize, Vec<Colour>> = std::collections::BTreeMap::new();
    for &p in pts {
        let r = find(&mut parent, p as usize);
        blocks.entry(r).or_default().push(p);
    }
    let mut out: Vec<Vec<Colour>> = blocks.into_values().collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_cycles() {
        let p = Permutation::parse_cycles("(1 2)(3 4)", 7).unwrap();
        assert_eq!(p.images(), &[0, 2, 1, 4, 3, 5, 6]);
        assert_eq!(p.to_cycle_string(), "(1 2)(3 4)");
        assert_eq!(Permutation::parse_cycles("(0,1,2)", 3).unwrap().images(), &[1, 2, 0]);
        assert!(Permutation::parse_cycles("()", 3).unwrap().is_identity());
        assert!(Permutation::parse_cycles("(1 1)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 5)", 3).is_err());
        assert!(Permutation::parse_cycles("1 2", 3).is_err());
    }

    #[test]
    fn closure_examples() {
        let g = ColourGroup::generate(3, vec![]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.orbits(), &[vec![0], vec![1], vec![2]]);

        let g = ColourGroup::from_cycles(3, &["(1 2 3)"]).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.orbits(), &[vec![0], vec![1, 2, 3]]);

        let g = ColourGroup::from_cycles(2, &["(0 1)", "(0 1 2)"]).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g, ColourGroup::symmetric(2));
    }

    #[test]
    fn elements_sorted_by_image_tuple() {
        let g = ColourGroup::symmetric(3);
        assert!(g.elements().windows(2).all(|w| w[0].images() < w[1].images()));
        assert!(g.elements()[0].is_identity());
    }

    #[test]
    fn degree_mismatch_and_cap() {
        let a = Permutation::identity(3);
        let b = Permutation::identity(4);
        assert!(matches!(ColourGroup::generate(3, vec![a, b]), Err(PermError::DegreeMismatch { index: 1, .. })));
        let s = ColourGroup::symmetric(3);
        assert_eq!(
            ColourGroup::generate_with_cap(4, s.generators().to_vec(), 10),
            Err(PermError::CapExceeded(10))
        );
    }

    #[test]
    fn two_transposition_example_orbits_and_stabilizers() {
        let f = ColourGroup::from_cycles(6, &["(1 2)(3 4)", "(5 6)"]).unwrap();
        assert_eq!(f.orbits(), &[vec![0], vec![1, 2], vec![3, 4], vec![5, 6]]);
        assert_eq!(f.stabilizer_restriction_in_alt(5, &[1, 2, 3, 4]), Ok(true));
        assert_eq!(f.stabilizer_restriction_in_alt(0, &[5, 6]), Ok(false));
        assert!(matches!(f.stabilizer_restriction_in_alt(0, &[1, 3]), Err(PermError::NotInvariant(_))));
        let triv = ColourGroup::trivial(4);
        assert_eq!(triv.stabilizer_restriction_in_alt(2, &[1, 3]), Ok(true));
    }

    #[test]
    fn freeness_and_single_switch() {
        assert!(ColourGroup::trivial(2).acts_freely());
        assert!(!ColourGroup::from_cycles(2, &["(0 1)"]).unwrap().acts_freely());
        assert!(ColourGroup::from_cycles(3, &["(0 1 2 3)"]).unwrap().acts_freely());
        assert!(ColourGroup::from_cycles(3, &["(0 1)"]).unwrap().is_single_switch());
        assert!(!ColourGroup::from_cycles(3, &["(0 1)(2 3)"]).unwrap().is_single_switch());
        assert!(!ColourGroup::trivial(3).is_single_switch());
    }

    #[test]
    fn structure_examples() {
        let g = ColourGroup::from_cycles(4, &["(0 1 2)", "(2 3 4)"]).unwrap();
        let r = g.structure_report(&[0, 1, 2, 3, 4]).unwrap();
        assert!(r.transitive && r.doubly_transitive && r.primitive);
        assert_eq!(r.block_system, None);

        let k = ColourGroup::from_cycles(3, &["(0 1)(2 3)", "(0 2)(1 3)"]).unwrap();
        let r = k.structure_report(&[0, 1, 2, 3]).unwrap();
        assert!(r.transitive && !r.primitive && !r.doubly_transitive);
        assert_eq!(r.block_system, Some(vec![vec![0, 1], vec![2, 3]]));

        let s = ColourGroup::symmetric(2);
        let r = s.structure_report(&[0, 1, 2]).unwrap();
        assert!(r.doubly_transitive && r.primitive);

        assert!(k.structure_report(&[0, 1]).is_err());
    }

    #[test]
    fn parity() {
        let p = Permutation::parse_cycles("(0 1 2)(3 4)", 5).unwrap();
        assert!(!p.is_even());
        assert!(p.is_even_on(&[0, 1, 2]));
        assert!(!p.is_even_on(&[3, 4]));
    }
}
