//! The graph attached to the orbit sizes of `F`, integer matrices, Smith normal form
//! and the abelianization of `V_F`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("orbit sizes must be a nonempty list of positive integers")]
    BadOrbitSizes,
    #[error("degenerate tree: d = {0}, need d >= 2")]
    Degenerate(usize),
    #[error("adjacency matrix is reducible")]
    Reducible,
    #[error("adjacency matrix is a permutation matrix")]
    PermutationMatrix,
}

/// A dense matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "rectangular input");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().map(BigInt::from).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[target] += q * row[source]
    fn add_row(&mut self, target: usize, source: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(target, j) + q * self.get(source, j);
            self.set(target, j, v);
        }
    }

    /// col[target] += q * col[source]
    fn add_col(&mut self, target: usize, source: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, target) + q * self.get(i, source);
            self.set(i, target, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j);
            self.set(r, j, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.data.iter().map(|x| x.to_string().len()).max().unwrap_or(1);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:>width$}", self.get(i, j).to_string())).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Invariant factors of a matrix, normalized nonnegative, zeros last.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianInvariants {
    pub invariant_factors: Vec<BigInt>,
    /// Rank of the free part of the cokernel.
    pub free_rank: usize,
}

impl AbelianInvariants {
    /// Number of `Z/2` summands after tensoring the cokernel with `Z/2`.
    pub fn mod2_rank(&self) -> usize {
        let two = BigInt::from(2);
        let torsion = self.invariant_factors.iter().filter(|e| !e.is_zero() && e.gcd(&two) == two).count();
        torsion + self.free_rank
    }

    /// Nontrivial cyclic summands `Z/ε` with `ε > 1`.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|e| **e > BigInt::one()).cloned().collect()
    }
}

#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub invariants: AbelianInvariants,
    pub right: IntMatrix,
    pub diagonal: IntMatrix,
}

/// Smith normal form `S·M·T = diag(ε_1, ..., ε_r, 0, ...)` with unimodular `S`, `T`.
///
/// Pivot: a nonzero entry of least absolute value in the remaining block.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut s = IntMatrix::identity(rows);
    let mut t = IntMatrix::identity(cols);
    let steps = rows.min(cols);
    'outer: for k in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    let v = a.get(i, j);
                    if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'outer };
            a.swap_rows(k, pi);
            s.swap_rows(k, pi);
            a.swap_cols(k, pj);
            t.swap_cols(k, pj);
            let pivot = a.get(k, k).clone();
            let mut clean = true;
            for i in k + 1..rows {
                let q = -(a.get(i, k) / &pivot);
                if !q.is_zero() {
                    a.add_row(i, k, &q);
                    s.add_row(i, k, &q);
                }
                clean &= a.get(i, k).is_zero();
            }
            for j in k + 1..cols {
                let q = -(a.get(k, j) / &pivot);
                if !q.is_zero() {
                    a.add_col(j, k, &q);
                    t.add_col(j, k, &q);
                }
                clean &= a.get(k, j).is_zero();
            }
            if !clean {
                continue;
            }
            let offending = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(k, i, &one);
                    s.add_row(k, i, &one);
                }
                None => break,
            }
        }
        if a.get(k, k).is_negative() {
            a.negate_row(k);
            s.negate_row(k);
        }
    }
    let invariant_factors: Vec<BigInt> = (0..steps).map(|i| a.get(i, i).clone()).collect();
    let nonzero = invariant_factors.iter().filter(|e| !e.is_zero()).count();
    let invariants = AbelianInvariants { invariant_factors, free_rank: rows - nonzero };
    SmithForm { left: s, invariants, right: t, diagonal: a }
}

/// Vertices of the graph: orbit vertices first, then the loop vertices by orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphVertex {
    Orbit(usize),
    /// The `index`-th interrupting vertex on a loop at an orbit vertex, `index ≥ 1`.
    Loop { orbit: usize, index: usize },
}

/// An oriented edge with its position among parallel edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub multiplicity_index: usize,
}

#[derive(Clone, Debug)]
pub struct SftGraph {
    orbit_sizes: Vec<usize>,
    vertices: Vec<GraphVertex>,
    edges: Vec<GraphEdge>,
    matrix: IntMatrix,
}

impl SftGraph {
    pub fn new(orbit_sizes: &[usize]) -> Result<Self, AbelianError> {
        if orbit_sizes.is_empty() || orbit_sizes.contains(&0) {
            return Err(AbelianError::BadOrbitSizes);
        }
        let d = orbit_sizes.iter().sum::<usize>() - 1;
        if d < 2 {
            return Err(AbelianError::Degenerate(d));
        }
        let l1 = orbit_sizes.len();
        let mut vertices: Vec<GraphVertex> = (0..l1).map(GraphVertex::Orbit).collect();
        for (i, &s) in orbit_sizes.iter().enumerate() {
            for j in 1..s {
                vertices.push(GraphVertex::Loop { orbit: i, index: j });
            }
        }
        let n = vertices.len();
        let mut matrix = IntMatrix::zeros(n, n);
        for j in 0..l1 {
            for (i, &s) in orbit_sizes.iter().enumerate() {
                if i != j {
                    matrix.set(j, i, BigInt::from(s));
                }
            }
        }
        for (v, vert) in vertices.iter().enumerate() {
            if let GraphVertex::Loop { orbit, .. } = *vert {
                matrix.set(orbit, v, BigInt::one());
                matrix.set(v, orbit, BigInt::one());
            }
        }
        let mut edges = Vec::new();
        for from in 0..n {
            for to in 0..n {
                let k = usize::try_from(matrix.get(from, to)).unwrap();
                edges.extend((0..k).map(|multiplicity_index| GraphEdge { from, to, multiplicity_index }));
            }
        }
        let g = SftGraph { orbit_sizes: orbit_sizes.to_vec(), vertices, edges, matrix };
        if g.is_permutation_matrix() {
            return Err(AbelianError::PermutationMatrix);
        }
        if !g.is_irreducible() {
            return Err(AbelianError::Reducible);
        }
        Ok(g)
    }

    pub fn orbit_sizes(&self) -> &[usize] {
        &self.orbit_sizes
    }

    pub fn d(&self) -> usize {
        self.orbit_sizes.iter().sum::<usize>() - 1
    }

    pub fn vertices(&self) -> &[GraphVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn vertex_index(&self, v: GraphVertex) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    pub fn edge_index(&self, e: GraphEdge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn is_orbit_vertex(&self, v: usize) -> bool {
        matches!(self.vertices[v], GraphVertex::Orbit(_))
    }

    /// Edge ids leaving vertex `v`.
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().enumerate().filter(move |(_, e)| e.from == v).map(|(i, _)| i)
    }

    pub fn vertex_name(&self, v: usize) -> String {
        match self.vertices[v] {
            GraphVertex::Orbit(i) => format!("D{i}"),
            GraphVertex::Loop { orbit, index } => format!("delta{orbit}_{index}"),
        }
    }

    fn is_permutation_matrix(&self) -> bool {
        let n = self.vertices.len();
        let ok_entry = |x: &BigInt| x.is_zero() || x.is_one();
        (0..n).all(|i| (0..n).all(|j| ok_entry(self.matrix.get(i, j))))
            && (0..n).all(|i| (0..n).filter(|&j| self.matrix.get(i, j).is_one()).count() == 1)
            && (0..n).all(|j| (0..n).filter(|&i| self.matrix.get(i, j).is_one()).count() == 1)
    }

    fn is_irreducible(&self) -> bool {
        let n = self.vertices.len();
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            seen[0] = true;
            let mut stack = vec![0];
            while let Some(x) = stack.pop() {
                for y in 0..n {
                    let e = if forward { self.matrix.get(x, y) } else { self.matrix.get(y, x) };
                    if !e.is_zero() && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            seen.into_iter().all(|b| b)
        };
        reach(true) && reach(false)
    }

    /// Graphviz rendering with every parallel edge drawn and labelled by its id.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph sft {\n");
        for v in 0..self.vertices.len() {
            let shape = if self.is_orbit_vertex(v) { "circle" } else { "point" };
            out.push_str(&format!("  {} [shape={shape}];\n", self.vertex_name(v)));
        }
        for (id, e) in self.edges.iter().enumerate() {
            out.push_str(&format!(
                "  {} -> {} [label=\"e{id} ({},{},{})\"];\n",
                self.vertex_name(e.from),
                self.vertex_name(e.to),
                e.from,
                e.to,
                e.multiplicity_index
            ));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug)]
pub struct VfAbelianization {
    pub orbit_sizes: Vec<usize>,
    pub smith: AbelianInvariants,
    pub determinant: BigInt,
    pub kernel_rank: usize,
    /// Number of `Z/2` summands of the abelianization.
    pub rank: usize,
    /// The value predicted by the orbit-size parity rule.
    pub closed_form_rank: usize,
}

impl VfAbelianization {
    pub fn matches_closed_form(&self) -> bool {
        self.rank == self.closed_form_rank && self.kernel_rank == 0
    }

    /// `2^l (1 - d)`
    pub fn expected_determinant(&self) -> BigInt {
        let l = self.orbit_sizes.len() - 1;
        let d = self.orbit_sizes.iter().sum::<usize>() as i64 - 1;
        BigInt::from(2).pow(l as u32) * BigInt::from(1 - d)
    }
}

/// `Z/2`-rank of the abelianization predicted from the orbit sizes alone.
pub fn closed_form_rank(orbit_sizes: &[usize]) -> usize {
    let l = orbit_sizes.len() - 1;
    if orbit_sizes.iter().all(|s| s % 2 == 0) {
        l + 1
    } else {
        l
    }
}

/// Abelianization of `V_F` as `Coker(id - M^t) ⊗ Z/2`.
pub fn vf_abelianization(orbit_sizes: &[usize]) -> Result<VfAbelianization, AbelianError> {
    let g = SftGraph::new(orbit_sizes)?;
    let n = g.vertices.len();
    let a = IntMatrix::identity(n).sub(&g.matrix.transpose());
    let determinant = a.determinant();
    let snf = smith_normal_form(&a);
    let kernel_rank = snf.invariants.invariant_factors.iter().filter(|e| e.is_zero()).count();
    Ok(VfAbelianization {
        orbit_sizes: orbit_sizes.to_vec(),
        rank: snf.invariants.mod2_rank(),
        smith: snf.invariants,
        determinant,
        kernel_rank,
        closed_form_rank: closed_form_rank(orbit_sizes),
    })
}

/// All partitions of `n` as nonincreasing lists.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn figure_graph() {
        let g = SftGraph::new(&[1, 3, 2]).unwrap();
        assert_eq!(g.vertices().len(), 6);
        assert_eq!(g.matrix().get(0, 1), &BigInt::from(3));
        assert_eq!(g.matrix().get(0, 2), &BigInt::from(2));
        assert_eq!(g.vertices()[3], GraphVertex::Loop { orbit: 1, index: 1 });
        assert_eq!(g.vertices()[5], GraphVertex::Loop { orbit: 2, index: 1 });
        for v in 0..3 {
            let row: BigInt = (0..6).map(|j| g.matrix().get(v, j).clone()).sum();
            assert_eq!(row, BigInt::from(5));
        }
    }

    #[test]
    fn graph_edge_cases() {
        let g = SftGraph::new(&[4]).unwrap();
        assert_eq!(g.vertices().len(), 4);
        let row: BigInt = (0..4).map(|j| g.matrix().get(0, j).clone()).sum();
        assert_eq!(row, BigInt::from(3));
        assert!(SftGraph::new(&[1, 1, 1]).is_ok());
        assert_eq!(SftGraph::new(&[1, 1]).unwrap_err(), AbelianError::Degenerate(1));
        assert_eq!(SftGraph::new(&[]).unwrap_err(), AbelianError::BadOrbitSizes);
    }

    #[test]
    fn snf_examples() {
        let m = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 3]]);
        assert_eq!(smith_normal_form(&m).invariants.invariant_factors, bi(&[1, 6]));
        let id = IntMatrix::identity(4);
        assert_eq!(smith_normal_form(&id).invariants.invariant_factors, bi(&[1, 1, 1, 1]));
        let z = IntMatrix::zeros(3, 3);
        let inv = smith_normal_form(&z).invariants;
        assert_eq!(inv.free_rank, 3);
        assert!(inv.torsion().is_empty());
    }

    #[test]
    fn snf_is_constructive() {
        let m = IntMatrix::from_rows(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let f = smith_normal_form(&m);
        assert_eq!(f.left.mul(&m).mul(&f.right), f.diagonal);
        assert_eq!(f.invariants.invariant_factors, bi(&[2, 6, 12]));
        assert_eq!(f.left.determinant().abs(), BigInt::one());
        assert_eq!(f.right.determinant().abs(), BigInt::one());
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_rows(vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 9]]);
        assert_eq!(m.determinant(), BigInt::from(-3));
        assert_eq!(IntMatrix::zeros(2, 2).determinant(), BigInt::zero());
    }

    #[test]
    fn abelianization_examples() {
        let a = vf_abelianization(&[2, 2, 3]).unwrap();
        assert_eq!(a.rank, 2);
        assert!(a.matches_closed_form());
        assert_eq!(vf_abelianization(&[2, 2]).unwrap().rank, 2);
        // Sym(D) with d even: one odd orbit, trivial abelianization
        assert_eq!(vf_abelianization(&[5]).unwrap().rank, 0);
        assert_eq!(vf_abelianization(&[1, 2, 2, 2]).unwrap().rank, 3);
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(partitions(10).len(), 42);
    }
}
