//! Finite abelian groups presented as direct sums of cyclic groups.
//!
//! A [`GroupSpec`] keeps the factor list exactly as the user wrote it. Anything
//! that must not depend on the presentation (the 2-rank `s`, the odd part,
//! cache keys, isomorphism classes) goes through [`PrimaryDecomposition`].
//!
//! Elements are indexed in mixed radix with the first factor most
//! significant, so in `Z4xZ2` the element `(1,0)` has index 2 and `(3,1)`
//! has index 7.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Z_{m_1} x ... x Z_{m_t}` in the order written. An empty factor list is
/// the trivial group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupSpec {
    factors: Vec<u64>,
}

/// Residue tuple aligned with a [`GroupSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub coords: Vec<u64>,
}

impl Element {
    pub fn new(coords: Vec<u64>) -> Self {
        Self { coords }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl GroupSpec {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = factors.iter().find(|&&m| m == 0) {
            return Err(Error::NonPositiveFactor(bad as i64));
        }
        Ok(Self { factors })
    }

    pub fn trivial() -> Self {
        Self {
            factors: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product::<u64>() as usize
    }

    /// `self x Z_n`, with the new factor appended last (least significant).
    pub fn times_cyclic(&self, n: u64) -> Result<Self> {
        let mut factors = self.factors.clone();
        factors.push(n);
        Self::new(factors)
    }

    pub fn identity(&self) -> Element {
        Element::new(vec![0; self.rank()])
    }

    fn check_arity(&self, a: &Element) -> Result<()> {
        if a.coords.len() != self.rank() {
            return Err(Error::ArityMismatch {
                expected: self.rank(),
                got: a.coords.len(),
            });
        }
        Ok(())
    }

    /// Reduces arbitrary integer coordinates into an element.
    pub fn element(&self, coords: &[i64]) -> Result<Element> {
        if coords.len() != self.rank() {
            return Err(Error::ArityMismatch {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        Ok(Element::new(
            coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &m)| x.rem_euclid(m as i64) as u64)
                .collect(),
        ))
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_arity(a)?;
        self.check_arity(b)?;
        Ok(Element::new(
            a.coords
                .iter()
                .zip(&b.coords)
                .zip(&self.factors)
                .map(|((&x, &y), &m)| (x % m + y % m) % m)
                .collect(),
        ))
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        self.check_arity(a)?;
        Ok(Element::new(
            a.coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &m)| (m - x % m) % m)
                .collect(),
        ))
    }

    pub fn scale(&self, t: i64, a: &Element) -> Result<Element> {
        self.check_arity(a)?;
        Ok(Element::new(
            a.coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &m)| {
                    let m = m as i128;
                    ((t as i128 * x as i128).rem_euclid(m)) as u64
                })
                .collect(),
        ))
    }

    pub fn element_index(&self, a: &Element) -> Result<usize> {
        self.check_arity(a)?;
        let mut index = 0usize;
        for (&x, &m) in a.coords.iter().zip(&self.factors) {
            if x >= m {
                return Err(Error::IndexOutOfRange {
                    index: x as usize,
                    order: m as usize,
                });
            }
            index = index * m as usize + x as usize;
        }
        Ok(index)
    }

    pub fn index_element(&self, index: usize) -> Result<Element> {
        let order = self.order();
        if index >= order {
            return Err(Error::IndexOutOfRange { index, order });
        }
        let mut coords = vec![0u64; self.rank()];
        let mut rest = index;
        for (slot, &m) in coords.iter_mut().zip(&self.factors).rev() {
            *slot = (rest % m as usize) as u64;
            rest /= m as usize;
        }
        Ok(Element::new(coords))
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order()).map(move |i| self.index_element(i).expect("index in range"))
    }

    /// Precomputed index arithmetic for hot loops.
    pub fn table(&self) -> IndexTable {
        IndexTable::new(self)
    }

    pub fn primary_decomposition(&self) -> PrimaryDecomposition {
        PrimaryDecomposition::of(self)
    }

    /// For each element index of `self`, the index of its image in
    /// `self.primary_decomposition().canonical_spec()` under the CRT
    /// isomorphism.
    pub fn canonical_map(&self) -> Vec<usize> {
        // (p, e, source factor) sorted the same way as the canonical spec
        let mut slots: Vec<(u64, u32, usize)> = Vec::new();
        for (i, &m) in self.factors.iter().enumerate() {
            for (p, e) in factorize(m) {
                slots.push((p, e, i));
            }
        }
        slots.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)).then(a.2.cmp(&b.2)));
        let moduli: Vec<u64> = slots.iter().map(|&(p, e, _)| p.pow(e)).collect();
        self.elements()
            .map(|x| {
                slots
                    .iter()
                    .zip(&moduli)
                    .fold(0usize, |acc, (&(_, _, src), &q)| {
                        acc * q as usize + (x.coords[src] % q) as usize
                    })
            })
            .collect()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        for (i, m) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z{m}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_group_spec(s)
    }
}

/// Parses `Z4xZ2xZ9`, `z4 x z2`, `4x2x9` or `4,2,9`.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec> {
    let parse_err = |reason: &str| Error::Parse {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(parse_err("empty spec"));
    }
    let lower = trimmed.to_ascii_lowercase();
    let terms: Vec<&str> = if lower.contains(',') {
        lower.split(',').collect()
    } else {
        lower.split('x').collect()
    };
    let mut factors = Vec::with_capacity(terms.len());
    for term in terms {
        let term = term.trim();
        let digits = term.strip_prefix('z').unwrap_or(term).trim();
        if digits.is_empty() {
            return Err(parse_err("missing factor order"));
        }
        let value: i64 = digits
            .parse()
            .map_err(|_| parse_err(&format!("`{term}` is not a cyclic factor")))?;
        if value <= 0 {
            return Err(Error::NonPositiveFactor(value));
        }
        factors.push(value as u64);
    }
    GroupSpec::new(factors)
}

/// Mixed-radix index arithmetic for a fixed group.
#[derive(Clone, Debug)]
pub struct IndexTable {
    factors: Vec<u64>,
    coords: Vec<Vec<u64>>,
}

impl IndexTable {
    fn new(spec: &GroupSpec) -> Self {
        let coords = spec.elements().map(|e| e.coords).collect();
        Self {
            factors: spec.factors.clone(),
            coords,
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self, i: usize) -> &[u64] {
        &self.coords[i]
    }

    /// Index of `a + t*d`.
    pub fn affine(&self, a: usize, t: u64, d: usize) -> usize {
        let (ca, cd) = (&self.coords[a], &self.coords[d]);
        let mut index = 0usize;
        for ((&x, &y), &m) in ca.iter().zip(cd).zip(&self.factors) {
            index = index * m as usize + ((x + (t % m) * y) % m) as usize;
        }
        index
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.affine(a, 1, b)
    }

    pub fn neg(&self, a: usize) -> usize {
        let mut index = 0usize;
        for (&x, &m) in self.coords[a].iter().zip(&self.factors) {
            index = index * m as usize + ((m - x) % m) as usize;
        }
        index
    }
}

/// `p^e` with `p` prime and `e >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub e: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.p.pow(self.e)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.e)
        }
    }
}

/// The group as a multiset of prime-power cyclic factors, sorted by prime
/// ascending and then exponent descending. Two specs are isomorphic exactly
/// when their decompositions are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimaryDecomposition {
    factors: Vec<PrimePower>,
}

impl PrimaryDecomposition {
    pub fn of(spec: &GroupSpec) -> Self {
        let factors = spec
            .factors()
            .iter()
            .flat_map(|&m| factorize(m))
            .map(|(p, e)| PrimePower { p, e })
            .collect();
        Self::from_factors(factors)
    }

    pub fn from_factors(mut factors: Vec<PrimePower>) -> Self {
        factors.retain(|f| f.e > 0);
        factors.sort_by(|a, b| a.p.cmp(&b.p).then(b.e.cmp(&a.e)));
        Self { factors }
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().map(PrimePower::value).product()
    }

    /// Number of cyclic 2-power factors.
    pub fn s(&self) -> usize {
        self.factors.iter().filter(|f| f.p == 2).count()
    }

    /// Largest odd divisor of the order.
    pub fn odd_part(&self) -> u64 {
        self.odd_factors().map(|f| f.value()).product()
    }

    pub fn two_factors(&self) -> impl Iterator<Item = &PrimePower> {
        self.factors.iter().filter(|f| f.p == 2)
    }

    pub fn odd_factors(&self) -> impl Iterator<Item = &PrimePower> {
        self.factors.iter().filter(|f| f.p != 2)
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.windows(2).all(|w| w[0].p != w[1].p)
    }

    pub fn canonical_spec(&self) -> GroupSpec {
        GroupSpec {
            factors: self.factors.iter().map(PrimePower::value).collect(),
        }
    }

    /// Cache key such as `2^2·3`; the trivial group is `1`.
    pub fn key(&self) -> String {
        if self.factors.is_empty() {
            return "1".to_string();
        }
        self.factors
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("·")
    }

    pub fn from_key(key: &str) -> Result<Self> {
        let bad = || Error::BadCacheKey(key.to_string());
        if key.trim() == "1" {
            return Ok(Self { factors: vec![] });
        }
        let mut factors = Vec::new();
        for part in key.split('·') {
            let (p, e) = match part.split_once('^') {
                Some((p, e)) => (p, e.parse::<u32>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            if !is_prime(p) || e == 0 {
                return Err(bad());
            }
            factors.push(PrimePower { p, e });
        }
        let decomposition = Self::from_factors(factors);
        if decomposition.key() != key {
            return Err(bad());
        }
        Ok(decomposition)
    }
}

impl fmt::Display for PrimaryDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Trial-division factorization, primes ascending. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Integer partitions of `n`, largest part first, partitions in
/// reverse-lexicographic order (`[3]`, `[2,1]`, `[1,1,1]`).
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// One decomposition per isomorphism class of abelian groups of order `n`.
pub fn abelian_groups_of_order(n: u64) -> Vec<PrimaryDecomposition> {
    let mut classes = vec![Vec::<PrimePower>::new()];
    for (p, e) in factorize(n) {
        let mut next = Vec::new();
        for prefix in &classes {
            for partition in partitions(e) {
                let mut factors = prefix.clone();
                factors.extend(partition.into_iter().map(|e| PrimePower { p, e }));
                next.push(factors);
            }
        }
        classes = next;
    }
    classes
        .into_iter()
        .map(PrimaryDecomposition::from_factors)
        .collect()
}

/// Isomorphism classes of order `1..=max_order`, by order then in partition
/// order within each prime.
pub fn abelian_groups_up_to(max_order: u64) -> Vec<PrimaryDecomposition> {
    (1..=max_order).flat_map(abelian_groups_of_order).collect()
}
