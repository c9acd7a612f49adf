//! Cardinalities of balls, the covolume chain and the inequalities behind the
//! non-existence of lattices.
//!
//! Everything that can be decided in integers is decided in integers. Comparisons
//! that mix unrelated logarithms go through [`crate::interval`].

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::abelian::partitions;
use crate::interval::{Interval, LogTable, PrecisionLadder, SignDecision};
use crate::permgrp::ColourGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("level must be at least 1")]
    LevelTooSmall,
    #[error("orbit sizes must be positive and sum to at least 3")]
    BadOrbitSizes,
    #[error("gamma order must be positive")]
    ZeroGamma,
    #[error("no subgroup of order {gamma}: it does not divide the sphere permutation group order ({ambient} digits)")]
    Lagrange { gamma: String, ambient: usize },
    #[error("invalid appendix parameters: need d >= 2, k >= 2, n >= 1")]
    BadAppendixParameters,
}

fn check_sizes(orbit_sizes: &[usize]) -> Result<usize, LatticeError> {
    if orbit_sizes.is_empty() || orbit_sizes.contains(&0) || orbit_sizes.iter().sum::<usize>() < 3 {
        return Err(LatticeError::BadOrbitSizes);
    }
    Ok(orbit_sizes.iter().sum::<usize>() - 1)
}

fn big(n: usize) -> BigUint {
    BigUint::from(n)
}

/// Product `lo·(lo+1)···hi` by binary splitting.
fn range_product(lo: u64, hi: u64) -> BigUint {
    if lo > hi {
        return BigUint::one();
    }
    if hi - lo < 16 {
        return (lo..=hi).fold(BigUint::one(), |acc, k| acc * k);
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid + 1, hi)
}

pub fn factorial(n: usize) -> BigUint {
    range_product(2, n as u64)
}

fn pow(base: &BigUint, exp: usize) -> BigUint {
    num_traits::pow(base.clone(), exp)
}

/// `(d^{n-1} - 1)/(d - 1)`: the number of internal vertices at depths `1..n-1`, per root child.
fn internal_per_child(d: usize, n: usize) -> usize {
    (0..n.saturating_sub(1)).map(|k| d.pow(k as u32)).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallCounts {
    pub n: usize,
    pub sphere_size: BigUint,
    pub orbit_sphere_sizes: Vec<BigUint>,
    pub sym_product_order: BigUint,
    pub aut_ball_order: BigUint,
}

/// `|Aut_{G(F)}(B_n)|` from the closed form.
pub fn aut_ball_closed_form(orbit_sizes: &[usize], n: usize) -> Result<BigUint, LatticeError> {
    let d = check_sizes(orbit_sizes)?;
    if n < 1 {
        return Err(LatticeError::LevelTooSmall);
    }
    let root: BigUint = orbit_sizes.iter().map(|&s| factorial(s)).product();
    // ∏ d_i!^{d+1} / d_i^{d_i}
    let num: BigUint = orbit_sizes.iter().map(|&s| pow(&factorial(s), d + 1)).product();
    let den: BigUint = orbit_sizes.iter().map(|&s| pow(&big(s), s)).product();
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    Ok(root * pow(&q, internal_per_child(d, n)))
}

/// `|Aut_{G(F)}(B_n)|` level by level: a vertex of colour `c` below the root may permute
/// its children within the orbits of the remaining colours, with `c`'s orbit one short.
pub fn aut_ball_by_levels(orbit_sizes: &[usize], n: usize) -> Result<BigUint, LatticeError> {
    let d = check_sizes(orbit_sizes)?;
    if n < 1 {
        return Err(LatticeError::LevelTooSmall);
    }
    let mut acc: BigUint = orbit_sizes.iter().map(|&s| factorial(s)).product();
    let per_colour: Vec<BigUint> = (0..orbit_sizes.len())
        .map(|i| {
            orbit_sizes
                .iter()
                .enumerate()
                .map(|(j, &s)| if i == j { factorial(s - 1) } else { factorial(s) })
                .product()
        })
        .collect();
    for level in 1..n {
        for (i, &s) in orbit_sizes.iter().enumerate() {
            let count = s * d.pow(level as u32 - 1);
            acc *= pow(&per_colour[i], count);
        }
    }
    Ok(acc)
}

/// `|Aut(B_n)| / |Aut(B_{n-1})|` as displayed: `(∏ d_i!^{d+1}/d_i^{d_i})^{d^{n-2}}`.
pub fn kernel_order(orbit_sizes: &[usize], n: usize) -> Result<BigUint, LatticeError> {
    let d = check_sizes(orbit_sizes)?;
    if n < 2 {
        return Err(LatticeError::LevelTooSmall);
    }
    let num: BigUint = orbit_sizes.iter().map(|&s| pow(&factorial(s), d + 1)).product();
    let den: BigUint = orbit_sizes.iter().map(|&s| pow(&big(s), s)).product();
    Ok(pow(&(num / den), d.pow(n as u32 - 2)))
}

/// `∏ (d_i d^{n-1})!`, the order of the colour-preserving permutations of the sphere.
pub fn sym_product_order(orbit_sizes: &[usize], n: usize) -> Result<BigUint, LatticeError> {
    let d = check_sizes(orbit_sizes)?;
    if n < 1 {
        return Err(LatticeError::LevelTooSmall);
    }
    Ok(orbit_sizes.iter().map(|&s| factorial(s * d.pow(n as u32 - 1))).product())
}

pub fn ball_counts(orbit_sizes: &[usize], n: usize) -> Result<BallCounts, LatticeError> {
    let d = check_sizes(orbit_sizes)?;
    if n < 1 {
        return Err(LatticeError::LevelTooSmall);
    }
    let scale = d.pow(n as u32 - 1);
    Ok(BallCounts {
        n,
        sphere_size: big((d + 1) * scale),
        orbit_sphere_sizes: orbit_sizes.iter().map(|&s| big(s * scale)).collect(),
        sym_product_order: sym_product_order(orbit_sizes, n)?,
        aut_ball_order: aut_ball_closed_form(orbit_sizes, n)?,
    })
}

/// Terms of the lower bound for the covolume of a lattice meeting `O_n` in a group of
/// the given order. `O_0` has measure one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovolumeChain {
    pub n: usize,
    pub gamma_order: BigUint,
    /// `[O_n : U_n]`, the order of the sphere permutation group.
    pub sym_product_order: BigUint,
    /// `[U_0 : U_n] = |Aut_{U(F)}(B_n)|`.
    pub u_index: BigUint,
    /// `|Aut_{G(F)}(B_n)|`.
    pub g_ball_order: BigUint,
    /// `[O_n : O_0] = [O_n : U_n] / [U_0 : U_n]`.
    pub o_index: BigRational,
    /// `c_n = [O_n : O_0] / |Γ_n|`.
    pub c_n: BigRational,
    /// `[O_n : U_n] / (|Γ_n| · [U_0 : U_n])`, computed without forming `[O_n : O_0]`.
    pub c_n_split: BigRational,
    /// `[∏Sym : Γ_n] / |Aut_{G(F)}(B_n)|`.
    pub lower_bound: BigRational,
}

fn ratio(a: &BigUint, b: &BigUint) -> BigRational {
    BigRational::new(a.clone().into(), b.clone().into())
}

fn lagrange(gamma: &BigUint, ambient: &BigUint) -> Result<(), LatticeError> {
    if gamma.is_zero() {
        return Err(LatticeError::ZeroGamma);
    }
    if !(ambient % gamma).is_zero() {
        return Err(LatticeError::Lagrange { gamma: gamma.to_string(), ambient: ambient.to_string().len() });
    }
    Ok(())
}

fn chain(n: usize, gamma: BigUint, sym: BigUint, u_index: BigUint, g_ball: BigUint) -> Result<CovolumeChain, LatticeError> {
    lagrange(&gamma, &sym)?;
    let o_index = ratio(&sym, &u_index);
    let c_n = &o_index / BigRational::from_integer(gamma.clone().into());
    let c_n_split = BigRational::new(sym.clone().into(), (&gamma * &u_index).into());
    let lower_bound = ratio(&(&sym / &gamma), &g_ball);
    Ok(CovolumeChain { n, gamma_order: gamma, sym_product_order: sym, u_index, g_ball_order: g_ball, o_index, c_n, c_n_split, lower_bound })
}

/// Chain for the maximal colour group with the given orbits, where `U(F) = G(F)`.
pub fn covolume_chain(orbit_sizes: &[usize], n: usize, gamma_order: &BigUint) -> Result<CovolumeChain, LatticeError> {
    let sym = sym_product_order(orbit_sizes, n)?;
    let g_ball = aut_ball_closed_form(orbit_sizes, n)?;
    chain(n, gamma_order.clone(), sym, g_ball.clone(), g_ball)
}

/// `|Aut_{U(F)}(B_n)|`: `|F|` at the root and `|F| / |orbit|` at every other internal vertex.
pub fn universal_ball_order(group: &ColourGroup, n: usize) -> Result<BigUint, LatticeError> {
    if n < 1 {
        return Err(LatticeError::LevelTooSmall);
    }
    let d = group.d();
    let f = big(group.order());
    let mut acc = f.clone();
    for level in 1..n {
        for orbit in group.orbits() {
            let s = orbit.len();
            acc *= pow(&(&f / big(s)), s * d.pow(level as u32 - 1));
        }
    }
    Ok(acc)
}

/// Chain for an arbitrary colour group.
pub fn covolume_chain_for_group(group: &ColourGroup, n: usize, gamma_order: &BigUint) -> Result<CovolumeChain, LatticeError> {
    let sizes = group.orbit_sizes();
    let sym = sym_product_order(&sizes, n)?;
    let u_index = universal_ball_order(group, n)?;
    let g_ball = aut_ball_closed_form(&sizes, n)?;
    chain(n, gamma_order.clone(), sym, u_index, g_ball)
}

/// Verdict of an inequality `lhs < rhs` decided exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InequalityVerdict {
    Holds,
    Equality,
    Reversed,
}

impl InequalityVerdict {
    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Less => InequalityVerdict::Holds,
            Ordering::Equal => InequalityVerdict::Equality,
            Ordering::Greater => InequalityVerdict::Reversed,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityVerdict::Holds => "holds",
            InequalityVerdict::Equality => "equality",
            InequalityVerdict::Reversed => "reversed",
        }
    }
}

/// `(d+1)^{d²-1} (∏ d_i!)^{d+1}` and `d^{d²-1} ∏ d_i^{d·d_i}`.
pub fn smallest_integer_sides(orbit_sizes: &[usize]) -> Result<(BigUint, BigUint), LatticeError> {
    let d = check_sizes(orbit_sizes)?;
    let e = d * d - 1;
    let lhs = pow(&big(d + 1), e) * pow(&orbit_sizes.iter().map(|&s| factorial(s)).product::<BigUint>(), d + 1);
    let rhs = pow(&big(d), e) * orbit_sizes.iter().map(|&s| pow(&big(s), d * s)).product::<BigUint>();
    Ok((lhs, rhs))
}

/// `Ξ` of a partition: `x/(x+1) Σ x_i ln x_i − Σ ln x_i! − (x−1)(ln(x+1) − ln x)` where
/// the parts sum to `x + 1`. Positive exactly when the smallest-case inequality holds.
pub fn xi_partition(parts: &[usize], t: &mut LogTable) -> Interval {
    let x = parts.iter().sum::<usize>() as i64 - 1;
    let entropy: Interval = parts.iter().map(|&p| t.ln(p as u64).scale_int(p as i64)).sum();
    let lead = entropy.scale(&BigRational::new(x.into(), (x + 1).into()));
    let facts: Interval = parts.iter().map(|&p| t.ln_factorial(p as u64)).sum();
    let gap = (&t.ln(x as u64 + 1) - &t.ln(x as u64)).scale_int(x - 1);
    &(&lead - &facts) - &gap
}

#[derive(Clone, Debug)]
pub struct SmallestCheck {
    pub orbit_sizes: Vec<usize>,
    pub verdict: InequalityVerdict,
    /// Enclosure of the logarithmic margin; positive when the inequality holds.
    pub margin: Interval,
    pub interval_verdict: Option<InequalityVerdict>,
}

/// Decides the smallest-case inequality exactly and encloses the log margin at `bits`.
pub fn verify_smallest_inequality(orbit_sizes: &[usize], bits: u64) -> Result<SmallestCheck, LatticeError> {
    let (lhs, rhs) = smallest_integer_sides(orbit_sizes)?;
    let verdict = InequalityVerdict::from_ordering(lhs.cmp(&rhs));
    let margin = xi_partition(orbit_sizes, &mut LogTable::new(bits));
    let interval_verdict = margin.sign().map(|s| InequalityVerdict::from_ordering(s.reverse()));
    Ok(SmallestCheck { orbit_sizes: orbit_sizes.to_vec(), verdict, margin, interval_verdict })
}

#[derive(Clone, Debug)]
pub struct DominantComparison {
    pub orbit_sizes: Vec<usize>,
    /// `(d+1) Σ ln d_i! + (d²−1) ln(d+1)`.
    pub lhs: Interval,
    /// `d Σ d_i ln d_i + (d²−1) ln d`.
    pub rhs: Interval,
    pub strict_less: bool,
    /// What the orbit count predicts: fewer than `d − 1` orbits beyond the first and `d > 2`.
    pub expected_strict_less: bool,
    /// The case `d = 2` with a single orbit, handled outside this comparison.
    pub flagged: bool,
}

/// Compares the coefficients of `d^{n-1}` in `ln |Aut(B_n)| + ln [Sym(S_n):∏Sym(D_n)]`
/// and `|S_n| ln d`, scaled by `d − 1`. The decision is the exact integer comparison; the
/// intervals are reported alongside.
pub fn dominant_coefficient_compare(orbit_sizes: &[usize], bits: u64) -> Result<DominantComparison, LatticeError> {
    let d = check_sizes(orbit_sizes)?;
    let mut t = LogTable::new(bits);
    let dd = d as i64;
    let facts: Interval = orbit_sizes.iter().map(|&s| t.ln_factorial(s as u64)).sum();
    let lhs = &facts.scale_int(dd + 1) + &t.ln(d as u64 + 1).scale_int(dd * dd - 1);
    let entropy: Interval = orbit_sizes.iter().map(|&s| t.ln(s as u64).scale_int(s as i64)).sum();
    let rhs = &entropy.scale_int(dd) + &t.ln(d as u64).scale_int(dd * dd - 1);
    let (left, right) = smallest_integer_sides(orbit_sizes)?;
    let l = orbit_sizes.len() - 1;
    Ok(DominantComparison {
        orbit_sizes: orbit_sizes.to_vec(),
        lhs,
        rhs,
        strict_less: left < right,
        expected_strict_less: l + 1 < d && d > 2,
        flagged: d == 2 && l == 0,
    })
}

/// `ln` of the index ratio `|Aut(B_n)|·[Sym(S_n):∏Sym(D_n)] / d^{|S_n|}` in floating point.
pub fn ln_index_ratio(orbit_sizes: &[usize], n: usize) -> f64 {
    let d = orbit_sizes.iter().sum::<usize>() - 1;
    let df = d as f64;
    let lf = |k: f64| ln_gamma(k + 1.0);
    let per = internal_per_child(d, n) as f64;
    let aut = orbit_sizes.iter().map(|&s| lf(s as f64)).sum::<f64>()
        + per * orbit_sizes.iter().map(|&s| (df + 1.0) * lf(s as f64) - s as f64 * (s as f64).ln()).sum::<f64>();
    let scale = df.powi(n as i32 - 1);
    let sphere = (df + 1.0) * scale;
    let index = lf(sphere) - orbit_sizes.iter().map(|&s| lf(s as f64 * scale)).sum::<f64>();
    aut + index - sphere * df.ln()
}

/// `ln(ratio_n) / d^{n-1}`, whose limit has the sign of the dominant comparison.
pub fn index_ratio_slope(orbit_sizes: &[usize], n: usize) -> f64 {
    let d = orbit_sizes.iter().sum::<usize>() - 1;
    ln_index_ratio(orbit_sizes, n) / (d as f64).powi(n as i32 - 1)
}

/// A failed or undecided comparison in [`verify_xi_claims`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiCase {
    pub claim: &'static str,
    pub larger: Vec<usize>,
    pub smaller: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct XiReport {
    pub claim1_checked: usize,
    pub claim2_checked: usize,
    pub xi_checked: usize,
    pub failures: Vec<XiCase>,
    pub undecided: Vec<XiCase>,
    /// Claim 1 at `k = x − 1` (parts `(2,1,…,1)`), outside the regime; reported only.
    pub boundary_failures: Vec<XiCase>,
    pub max_bits_used: u64,
}

impl XiReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.undecided.is_empty()
    }
}

/// `ξ(x) = x²·ln(1 + 1/x) − ln(x + 1)`, the Claim 2 quantity at a part of size 2.
fn xi_aux(x: u64, t: &mut LogTable) -> Interval {
    let x2 = (x * x) as i64;
    &(&t.ln(x + 1) - &t.ln(x)).scale_int(x2) - &t.ln(x + 1)
}

/// Checks both monotonicity claims for `Ξ` over partitions with `x + 1 ≤ max_x` and
/// fewer than `x − 1` parts beyond the first, and `ξ(x) > 0` for `3 ≤ x ≤ max_x`.
pub fn verify_xi_claims(max_x: usize, start_bits: u64, max_bits: u64) -> XiReport {
    let mut ladder = PrecisionLadder::new(start_bits, max_bits);
    let mut rep = XiReport::default();
    let record = |rep: &mut XiReport, case: XiCase, dec: SignDecision, boundary: bool| match dec {
        SignDecision::Decided { sign, bits } => {
            rep.max_bits_used = rep.max_bits_used.max(bits);
            if sign != Ordering::Greater {
                if boundary {
                    rep.boundary_failures.push(case)
                } else {
                    rep.failures.push(case)
                }
            }
        }
        SignDecision::Undecided { bits } => {
            rep.max_bits_used = rep.max_bits_used.max(bits);
            rep.undecided.push(case)
        }
    };
    for total in 3..=max_x {
        let x = total - 1;
        for p in partitions(total) {
            let k = p.len() - 1;
            if k + 1 > x {
                continue;
            }
            let boundary = k + 1 == x;
            let mut with_one = p.clone();
            with_one.push(1);
            let (dec, _) = ladder.decide(|t| &xi_partition(&with_one, t) - &xi_partition(&p, t));
            record(&mut rep, XiCase { claim: "claim1", larger: with_one.clone(), smaller: p.clone() }, dec, boundary);
            if !boundary {
                rep.claim1_checked += 1;
                let mut seen = Vec::new();
                for j in 0..p.len() {
                    if seen.contains(&p[j]) {
                        continue;
                    }
                    seen.push(p[j]);
                    let mut bumped = p.clone();
                    bumped[j] += 1;
                    let (dec, _) = ladder.decide(|t| &xi_partition(&bumped, t) - &xi_partition(&with_one, t));
                    record(&mut rep, XiCase { claim: "claim2", larger: bumped, smaller: with_one.clone() }, dec, false);
                    rep.claim2_checked += 1;
                }
            }
        }
    }
    for x in 3..=max_x as u64 {
        let (dec, _) = ladder.decide(|t| xi_aux(x, t));
        record(&mut rep, XiCase { claim: "xi", larger: vec![x as usize], smaller: vec![] }, dec, false);
        rep.xi_checked += 1;
    }
    rep
}

/// `(1 + 1/x)^{x²}` against `x + 1`, exactly.
pub fn claim2_base_case(x: u64) -> (BigRational, BigRational) {
    let base = BigRational::new((x + 1).into(), x.into());
    (num_traits::pow(base, (x * x) as usize), BigRational::from_integer((x + 1).into()))
}

/// Primality table for `0..=m`.
pub fn sieve(m: usize) -> Vec<bool> {
    let mut is = vec![true; m + 1];
    for v in is.iter_mut().take(2.min(m + 1)) {
        *v = false;
    }
    let mut p = 2;
    while p * p <= m {
        if is[p] {
            for q in (p * p..=m).step_by(p) {
                is[q] = false;
            }
        }
        p += 1;
    }
    is
}

/// Primes in `(m/2, m]`.
pub fn ramanujan_primes(m: usize) -> Vec<usize> {
    let is = sieve(m);
    (m / 2 + 1..=m).filter(|&p| is[p]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeWindowReport {
    pub from: usize,
    pub to: usize,
    pub min_count: usize,
    pub argmin: usize,
    pub below_three: Vec<usize>,
}

/// Counts primes in `(m/2, m]` for every `from ≤ m ≤ to` from a single sieve.
pub fn prime_windows(from: usize, to: usize) -> PrimeWindowReport {
    let is = sieve(to);
    let mut pi = vec![0usize; to + 1];
    for k in 1..=to {
        pi[k] = pi[k - 1] + is[k] as usize;
    }
    let mut rep = PrimeWindowReport { from, to, min_count: usize::MAX, argmin: from, below_three: Vec::new() };
    for m in from.max(2)..=to {
        let c = pi[m] - pi[m / 2];
        if c < rep.min_count {
            rep.min_count = c;
            rep.argmin = m;
        }
        if c < 3 {
            rep.below_three.push(m);
        }
    }
    rep
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixCounts {
    pub d: usize,
    pub k: usize,
    pub n: usize,
    pub sphere: BigUint,
    /// By recursion over the levels of the ball.
    pub aut_ball: BigUint,
    /// `k!·d!^{k(d^{n-1}-1)/(d-1)}`.
    pub closed_form: BigUint,
    /// `k!·d!^{k(d^n-1)/(d-1)}`, the exponent as printed.
    pub printed_form: BigUint,
    pub bound: BigUint,
    pub constant: BigUint,
    pub bound_ok: bool,
    pub printed_bound_ok: bool,
}

impl AppendixCounts {
    pub fn matches_closed_form(&self) -> bool {
        self.aut_ball == self.closed_form
    }

    pub fn matches_printed_form(&self) -> bool {
        self.aut_ball == self.printed_form
    }
}

/// Ball counts in the tree whose root has degree `k` and other vertices degree `d + 1`.
pub fn appendix_counts(d: usize, k: usize, n: usize) -> Result<AppendixCounts, LatticeError> {
    if d < 2 || k < 2 || n < 1 {
        return Err(LatticeError::BadAppendixParameters);
    }
    let dfact = factorial(d);
    let constant = factorial(k);
    let mut aut_ball = constant.clone();
    let mut width = k;
    for _ in 1..n {
        aut_ball *= pow(&dfact, width);
        width *= d;
    }
    let closed_form = &constant * pow(&dfact, k * internal_per_child(d, n));
    let printed_form = &constant * pow(&dfact, k * internal_per_child(d, n + 1));
    let sphere_n = k * d.pow(n as u32 - 1);
    let bound = &constant * pow(&big(d), sphere_n);
    Ok(AppendixCounts {
        d,
        k,
        n,
        sphere: big(sphere_n),
        bound_ok: aut_ball <= bound,
        printed_bound_ok: printed_form <= bound,
        aut_ball,
        closed_form,
        printed_form,
        bound,
        constant,
    })
}

/// One row of the covolume table.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub d: usize,
    pub orbit_sizes: Vec<usize>,
    pub n: usize,
    pub counts: BallCounts,
    pub ln_bound_ratio: f64,
    pub verdict: InequalityVerdict,
}

pub fn table_row(orbit_sizes: &[usize], n: usize) -> Result<TableRow, LatticeError> {
    let d = check_sizes(orbit_sizes)?;
    let counts = ball_counts(orbit_sizes, n)?;
    let (lhs, rhs) = smallest_integer_sides(orbit_sizes)?;
    Ok(TableRow {
        d,
        orbit_sizes: orbit_sizes.to_vec(),
        n,
        counts,
        ln_bound_ratio: ln_index_ratio(orbit_sizes, n),
        verdict: InequalityVerdict::from_ordering(lhs.cmp(&rhs)),
    })
}

/// Formats `exp(ln_value)` in scientific notation without overflowing.
pub fn format_exp(ln_value: f64) -> String {
    if !ln_value.is_finite() {
        return "nan".into();
    }
    let log10 = ln_value / std::f64::consts::LN_10;
    let e = log10.floor();
    let m = 10f64.powf(log10 - e);
    format!("{m:.6}e{e}")
}

pub const CSV_HEADER: &str = "d,orbit_sizes,n,sphere,sym_product_order,aut_ball_order,bound_ratio,inequality_verdict";

impl TableRow {
    pub fn to_csv(&self) -> String {
        let sizes: Vec<String> = self.orbit_sizes.iter().map(|s| s.to_string()).collect();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.d,
            sizes.join(";"),
            self.n,
            self.counts.sphere_size,
            self.counts.sym_product_order,
            self.counts.aut_ball_order,
            format_exp(self.ln_bound_ratio),
            self.verdict.as_str()
        )
    }
}

/// Decimal digit count, for compact reports.
pub fn digits(x: &BigUint) -> usize {
    x.to_string().len()
}

/// `f64` value of a rational when representable.
pub fn approx(x: &BigRational) -> Option<f64> {
    x.to_f64()
}
