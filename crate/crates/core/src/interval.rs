//! Rigorous interval arithmetic with rational endpoints and logarithms of integers.
//!
//! Logarithms are enclosed by summing `atanh` series with outward rounding to a
//! dyadic grid of the requested precision and bounding the tail.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_int(x: i64) -> Self {
        Self::point(BigRational::from_integer(x.into()))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// `Some(sign)` when the interval excludes zero or is exactly zero.
    pub fn sign(&self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        if self.lo.is_positive() {
            Some(Greater)
        } else if self.hi.is_negative() {
            Some(Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Equal)
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn scale(&self, c: &BigRational) -> Interval {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if c.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    pub fn scale_int(&self, c: i64) -> Interval {
        self.scale(&BigRational::from_integer(c.into()))
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN)
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        let p = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Interval { lo, hi }
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::zero(), |a, b| &a + &b)
    }
}

/// Enclosure of `atanh(a/b)` for `0 ≤ a/b ≤ 1/3`, scaled by `2^bits`.
fn atanh_scaled(a: &BigInt, b: &BigInt, bits: u64) -> (BigInt, BigInt) {
    let scale = BigInt::one() << bits;
    let a2 = a * a;
    let b2 = b * b;
    let mut num = a.clone();
    let mut den = b.clone();
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut k = 1u64;
    loop {
        // term = num / (den * k)
        let d = &den * BigInt::from(k);
        let (q, r) = (&scale * &num).div_rem(&d);
        lo += &q;
        hi += if r.is_zero() { q } else { q + 1 };
        num *= &a2;
        den *= &b2;
        k += 2;
        // remaining tail ≤ next_term / (1 - y²) ≤ 9/8 · next_term
        let tail_den = &den * BigInt::from(k) * BigInt::from(8);
        let tail_num = &scale * &num * BigInt::from(9);
        if tail_num < tail_den {
            hi += 1;
            break;
        }
    }
    (lo, hi)
}

/// Enclosure of `ln(n)` for an integer `n ≥ 1` with width about `2^-bits`.
pub fn ln_int(n: &BigUint, bits: u64) -> Interval {
    assert!(!n.is_zero(), "logarithm of zero");
    if n.is_one() {
        return Interval::zero();
    }
    let work = bits + 16;
    let denom = BigRational::from_integer(BigInt::one() << work);
    // ln 2 = 2 atanh(1/3)
    let (l2lo, l2hi) = atanh_scaled(&BigInt::one(), &BigInt::from(3), work);
    let m = n.bits() - 1;
    // n = 2^m · r with 1 ≤ r < 2; ln r = 2 atanh((n - 2^m)/(n + 2^m))
    let p = BigInt::one() << m;
    let nn = BigInt::from(n.clone());
    let (rlo, rhi) = atanh_scaled(&(&nn - &p), &(&nn + &p), work);
    let mb = BigInt::from(m);
    let lo = BigRational::new(BigInt::from(2) * (&mb * l2lo + rlo), BigInt::one()) / &denom;
    let hi = BigRational::new(BigInt::from(2) * (&mb * l2hi + rhi), BigInt::one()) / &denom;
    Interval { lo, hi }
}

/// Cache of integer logarithms at a fixed precision.
pub struct LogTable {
    bits: u64,
    cache: HashMap<u64, Interval>,
    fact_cache: HashMap<u64, Interval>,
}

impl LogTable {
    pub fn new(bits: u64) -> Self {
        LogTable { bits, cache: HashMap::new(), fact_cache: HashMap::new() }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn ln(&mut self, n: u64) -> Interval {
        let bits = self.bits;
        self.cache.entry(n).or_insert_with(|| ln_int(&BigUint::from(n), bits)).clone()
    }

    /// `ln(n!)` as a sum of logarithms.
    pub fn ln_factorial(&mut self, n: u64) -> Interval {
        if let Some(v) = self.fact_cache.get(&n) {
            return v.clone();
        }
        let v = (2..=n).map(|k| self.ln(k)).sum();
        self.fact_cache.insert(n, v);
        self.fact_cache[&n].clone()
    }
}

/// Outcome of an adaptive-precision sign decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignDecision {
    Decided { sign: std::cmp::Ordering, bits: u64 },
    Undecided { bits: u64 },
}

/// Log tables at doubling precisions, shared across many sign decisions.
pub struct PrecisionLadder {
    start: u64,
    max: u64,
    tables: Vec<LogTable>,
}

impl PrecisionLadder {
    pub fn new(start_bits: u64, max_bits: u64) -> Self {
        let start = start_bits.max(8);
        PrecisionLadder { start, max: max_bits.max(start), tables: Vec::new() }
    }

    /// Evaluates `f` at doubling precision until the sign of the result is determined.
    /// An exact zero counts as determined only when the enclosure has zero width.
    pub fn decide(&mut self, mut f: impl FnMut(&mut LogTable) -> Interval) -> (SignDecision, Interval) {
        let mut level = 0;
        loop {
            let bits = self.start << level;
            if self.tables.len() <= level {
                self.tables.push(LogTable::new(bits));
            }
            let iv = f(&mut self.tables[level]);
            if let Some(sign) = iv.sign() {
                if sign != std::cmp::Ordering::Equal || iv.width().is_zero() {
                    return (SignDecision::Decided { sign, bits }, iv);
                }
            }
            if bits >= self.max {
                return (SignDecision::Undecided { bits }, iv);
            }
            level += 1;
        }
    }
}

/// One-off version of [`PrecisionLadder::decide`].
pub fn decide_sign(start_bits: u64, max_bits: u64, f: impl FnMut(&mut LogTable) -> Interval) -> (SignDecision, Interval) {
    PrecisionLadder::new(start_bits, max_bits).decide(f)
}

/// Starting precision from the environment, defaulting to 128 bits.
pub fn default_precision() -> u64 {
    std::env::var("COLOURED_NERETIN_PRECISION").ok().and_then(|v| v.parse().ok()).filter(|&b| b >= 8).unwrap_or(128)
}

/// Upper limit for adaptive doubling.
pub const MAX_PRECISION: u64 = 1 << 14;
