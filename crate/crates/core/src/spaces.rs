//! Finite sequence spaces, their permutation orbits, and the objects that
//! live on them: events, nonnegative payoffs, points of the probability
//! simplex, and mixtures over orbits.
//!
//! Sequences over the alphabet `{1, ..., K}` of length `N` are identified
//! with base-K integers (symbol 1 is digit 0, the first observation is the
//! most significant digit), which gives a canonical, order-preserving
//! index. Exhaustive paths are guarded: `K^N <= 2^24` for full-space
//! enumeration, `10^6` members per orbit, `10^7` orbits per space.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::combinatorics::{ln_factorial_f64, log_multinomial};
use crate::error::{Error, Result};

/// Every sequence of a space must have an index below this for the space
/// to be exhaustively enumerable.
pub const ENUMERATION_GUARD: u64 = 1 << 24;
/// Largest orbit that may be materialized.
pub const ORBIT_SIZE_GUARD: u64 = 1_000_000;
/// Largest number of orbits that may be listed for one space.
pub const ORBIT_COUNT_GUARD: u64 = 10_000_000;

/// The space of sequences of length `n` over symbols `1..=k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceSpace {
    k: u32,
    n: u32,
}

impl SequenceSpace {
    pub fn new(k: u32, n: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("alphabet size k must be positive"));
        }
        if n == 0 {
            return Err(Error::invalid("sequence length n must be positive"));
        }
        Ok(SequenceSpace { k, n })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `k^n` when it fits an index, `None` otherwise.
    pub fn index_capacity(&self) -> Option<u64> {
        if self.k == 1 {
            return Some(1);
        }
        let mut size: u64 = 1;
        for _ in 0..self.n {
            size = size.checked_mul(self.k as u64)?;
        }
        Some(size)
    }

    /// Whether the full space may be enumerated (`k^n <= 2^24`).
    pub fn is_enumerable(&self) -> bool {
        matches!(self.index_capacity(), Some(c) if c <= ENUMERATION_GUARD)
    }

    pub fn validate_sequence(&self, seq: &Sequence) -> Result<()> {
        if seq.len() != self.n as usize {
            return Err(Error::invalid(format!(
                "sequence length {} does not match space length {}",
                seq.len(),
                self.n
            )));
        }
        for &s in seq.symbols() {
            if s < 1 || s > self.k {
                return Err(Error::invalid(format!(
                    "symbol {s} outside alphabet 1..={}",
                    self.k
                )));
            }
        }
        Ok(())
    }

    /// Base-K index of a sequence. Panics on sequences that do not belong
    /// to this space or when the space is not index-addressable; use
    /// [`SequenceSpace::validate_sequence`] for fallible checking.
    pub fn index_of(&self, seq: &Sequence) -> u64 {
        self.validate_sequence(seq).expect("sequence fits the space");
        seq.symbols()
            .iter()
            .fold(0u64, |acc, &s| acc * self.k as u64 + (s as u64 - 1))
    }

    /// Decodes an index back into a sequence.
    pub fn sequence_at(&self, index: u64) -> Sequence {
        let mut symbols = vec![1u32; self.n as usize];
        let mut rest = index;
        for slot in symbols.iter_mut().rev() {
            *slot = (rest % self.k as u64) as u32 + 1;
            rest /= self.k as u64;
        }
        debug_assert_eq!(rest, 0, "index out of range");
        Sequence::from(symbols)
    }

    /// Iterates the whole space in index order. Guarded.
    pub fn sequences(&self) -> Result<impl Iterator<Item = Sequence> + '_> {
        let cap = self.enumerable_capacity()?;
        Ok((0..cap).map(move |i| self.sequence_at(i)))
    }

    pub(crate) fn enumerable_capacity(&self) -> Result<u64> {
        match self.index_capacity() {
            Some(c) if c <= ENUMERATION_GUARD => Ok(c),
            _ => Err(Error::guard(format!(
                "{}^{} sequences exceed the enumeration limit 2^24",
                self.k, self.n
            ))),
        }
    }

    /// Symbol multiplicities of a sequence.
    pub fn count_vector(&self, seq: &Sequence) -> CountVector {
        self.validate_sequence(seq).expect("sequence fits the space");
        let mut counts = vec![0u64; self.k as usize];
        for &s in seq.symbols() {
            counts[(s - 1) as usize] += 1;
        }
        CountVector::from(counts)
    }

    /// Symbol multiplicities straight from an index, without building the
    /// sequence.
    pub fn count_vector_of_index(&self, index: u64) -> CountVector {
        let mut counts = vec![0u64; self.k as usize];
        let mut rest = index;
        for _ in 0..self.n {
            counts[(rest % self.k as u64) as usize] += 1;
            rest /= self.k as u64;
        }
        CountVector::from(counts)
    }
}

/// A concrete observation sequence; symbols are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequence(Vec<u32>);

impl Sequence {
    pub fn symbols(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<u32>> for Sequence {
    fn from(symbols: Vec<u32>) -> Self {
        Sequence(symbols)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// Symbol multiplicities `n_1, ..., n_K`; the orbit of a sequence is
/// determined by its count vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountVector(Vec<u64>);

impl CountVector {
    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    /// Number of coordinates (the alphabet size it is written over).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of observations `N`.
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Number of symbols that actually occur.
    pub fn distinct_count(&self) -> usize {
        self.0.iter().filter(|&&c| c > 0).count()
    }

    /// Number of distinct rearrangements, as a double (exact below 2^53,
    /// saturating to infinity for orbits beyond the double range).
    pub fn orbit_size(&self) -> f64 {
        log_multinomial(self).ln().exp()
    }
}

impl From<Vec<u64>> for CountVector {
    fn from(counts: Vec<u64>) -> Self {
        CountVector(counts)
    }
}

impl fmt::Display for CountVector {
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

/// An explicit event: a deduplicated set of sequence indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    space: SequenceSpace,
    members: BTreeSet<u64>,
}

impl Event {
    pub fn new(space: SequenceSpace, indices: impl IntoIterator<Item = u64>) -> Result<Self> {
        let cap = space.index_capacity().ok_or_else(|| {
            Error::invalid(format!(
                "space {}^{} is too large for explicit index sets",
                space.k, space.n
            ))
        })?;
        let mut members = BTreeSet::new();
        for i in indices {
            if i >= cap {
                return Err(Error::invalid(format!(
                    "sequence index {i} out of range for a space of {cap} sequences"
                )));
            }
            members.insert(i);
        }
        Ok(Event { space, members })
    }

    pub fn from_sequences<'a>(
        space: SequenceSpace,
        seqs: impl IntoIterator<Item = &'a Sequence>,
    ) -> Result<Self> {
        let mut indices = Vec::new();
        for s in seqs {
            space.validate_sequence(s)?;
            indices.push(space.index_of(s));
        }
        Event::new(space, indices)
    }

    pub fn empty(space: SequenceSpace) -> Self {
        Event {
            space,
            members: BTreeSet::new(),
        }
    }

    /// The whole space as an event. Guarded by enumerability.
    pub fn full(space: SequenceSpace) -> Result<Self> {
        let cap = space.enumerable_capacity()?;
        Ok(Event {
            space,
            members: (0..cap).collect(),
        })
    }

    pub fn space(&self) -> SequenceSpace {
        self.space
    }

    pub fn members(&self) -> &BTreeSet<u64> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_index(&self, index: u64) -> bool {
        self.members.contains(&index)
    }

    pub fn contains(&self, seq: &Sequence) -> bool {
        self.space.validate_sequence(seq).is_ok() && self.members.contains(&self.space.index_of(seq))
    }

    /// The 0/1 payoff of this event.
    pub fn indicator(&self) -> Payoff {
        let table = self.members.iter().map(|&i| (i, 1.0)).collect();
        Payoff {
            space: self.space,
            table,
            default: 0.0,
        }
    }
}

/// A nonnegative payoff, stored as a sparse table over sequence indices
/// plus a default value for every unlisted sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Payoff {
    space: SequenceSpace,
    table: BTreeMap<u64, f64>,
    default: f64,
}

impl Payoff {
    pub fn new(space: SequenceSpace, table: BTreeMap<u64, f64>, default: f64) -> Result<Self> {
        if !(default.is_finite() && default >= 0.0) {
            return Err(Error::invalid(format!(
                "payoff default must be finite and nonnegative, got {default}"
            )));
        }
        let cap = space.index_capacity().ok_or_else(|| {
            Error::invalid(format!(
                "space {}^{} is too large for explicit payoff tables",
                space.k, space.n
            ))
        })?;
        for (&i, &v) in &table {
            if i >= cap {
                return Err(Error::invalid(format!(
                    "sequence index {i} out of range for a space of {cap} sequences"
                )));
            }
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!(
                    "payoff values must be finite and nonnegative, got {v} at index {i}"
                )));
            }
        }
        Ok(Payoff {
            space,
            table,
            default,
        })
    }

    /// The payoff that is `value` everywhere.
    pub fn constant(space: SequenceSpace, value: f64) -> Result<Self> {
        Payoff::new(space, BTreeMap::new(), value)
    }

    pub fn space(&self) -> SequenceSpace {
        self.space
    }

    pub fn table(&self) -> &BTreeMap<u64, f64> {
        &self.table
    }

    pub fn default_value(&self) -> f64 {
        self.default
    }

    pub fn value_at(&self, index: u64) -> f64 {
        *self.table.get(&index).unwrap_or(&self.default)
    }

    pub fn value_of(&self, seq: &Sequence) -> f64 {
        self.value_at(self.space.index_of(seq))
    }

    /// Multiplies every value (table and default) by a nonnegative factor.
    pub fn scale(&self, factor: f64) -> Payoff {
        assert!(
            factor.is_finite() && factor >= 0.0,
            "scale factor must be finite and nonnegative"
        );
        Payoff {
            space: self.space,
            table: self.table.iter().map(|(&i, &v)| (i, v * factor)).collect(),
            default: self.default * factor,
        }
    }

    /// Largest value the payoff takes anywhere.
    pub fn max_value(&self) -> f64 {
        let table_max = self.table.values().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let covers_space = match self.space.index_capacity() {
            Some(cap) => self.table.len() as u64 >= cap,
            None => false,
        };
        if covers_space {
            table_max
        } else {
            table_max.max(self.default)
        }
    }
}

/// A point of the probability simplex on `{1, ..., K}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invalid("a simplex point needs at least one coordinate"));
        }
        for &p in &probs {
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::invalid(format!(
                    "probabilities must be finite and nonnegative, got {p}"
                )));
            }
        }
        let total = kahan_sum(probs.iter().copied());
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "probabilities must sum to 1 within 1e-12, got {total}"
            )));
        }
        Ok(SimplexPoint(probs))
    }

    pub fn uniform(k: usize) -> Self {
        assert!(k >= 1);
        SimplexPoint(vec![1.0 / k as f64; k])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    /// Probability of the 1-based symbol `c`.
    pub fn prob_of(&self, symbol: u32) -> f64 {
        self.0[(symbol - 1) as usize]
    }
}

/// A mixture over orbits: the extreme points of the exchangeable laws on a
/// finite space are the uniform distributions on single orbits, so every
/// exchangeable law is identified with a weight map on count vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitMixture {
    weights: BTreeMap<CountVector, f64>,
}

impl OrbitMixture {
    pub fn new(weights: impl IntoIterator<Item = (CountVector, f64)>) -> Result<Self> {
        let mut map: BTreeMap<CountVector, f64> = BTreeMap::new();
        for (cv, w) in weights {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::invalid(format!(
                    "mixture weights must be finite and nonnegative, got {w}"
                )));
            }
            *map.entry(cv).or_insert(0.0) += w;
        }
        let total = kahan_sum(map.values().copied());
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "mixture weights are not normalized: sum {total}"
            )));
        }
        Ok(OrbitMixture { weights: map })
    }

    /// The exchangeable law concentrated on a single orbit.
    pub fn point_mass(counts: CountVector) -> Self {
        OrbitMixture {
            weights: [(counts, 1.0)].into_iter().collect(),
        }
    }

    pub fn weights(&self) -> &BTreeMap<CountVector, f64> {
        &self.weights
    }
}

pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let term = v - comp;
        let next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    sum
}

/// Lists every orbit of the space as a count vector, in lexicographically
/// descending order. The number of orbits is `C(n+k-1, k-1)`; the call is
/// rejected when that exceeds the guard.
pub fn enumerate_orbits(space: &SequenceSpace) -> Result<Vec<CountVector>> {
    let n = space.n as u64;
    let k = space.k as u64;
    let ln_count =
        ln_factorial_f64(n + k - 1) - ln_factorial_f64(k - 1) - ln_factorial_f64(n);
    if ln_count > (ORBIT_COUNT_GUARD as f64).ln() + 1e-9 {
        return Err(Error::guard(format!(
            "space has about 10^{:.1} orbits, over the limit of {}",
            ln_count / std::f64::consts::LN_10,
            ORBIT_COUNT_GUARD
        )));
    }
    let mut out = Vec::with_capacity(ln_count.exp().round() as usize);
    let mut current = vec![0u64; k as usize];
    current[0] = n;
    loop {
        out.push(CountVector::from(current.clone()));
        if !next_weak_composition(&mut current) {
            break;
        }
    }
    Ok(out)
}

/// Advances a weak composition to its lexicographic successor (descending
/// order). Returns false after the last composition `(0, ..., 0, n)`.
fn next_weak_composition(c: &mut [u64]) -> bool {
    let k = c.len();
    if k <= 1 {
        return false;
    }
    // Rightmost position before the last that still has something to move.
    let Some(i) = (0..k - 1).rev().find(|&i| c[i] > 0) else {
        return false;
    };
    c[i] -= 1;
    let moved: u64 = 1 + c[i + 1..].iter().sum::<u64>();
    c[i + 1..].iter_mut().for_each(|x| *x = 0);
    c[i + 1] = moved;
    true
}

/// Materializes every distinct rearrangement with the given multiplicities,
/// in lexicographic order. Guarded by the orbit size limit.
pub fn orbit_members(counts: &CountVector) -> Result<Vec<Sequence>> {
    let size_ln = log_multinomial(counts).ln();
    if size_ln > (ORBIT_SIZE_GUARD as f64).ln() + 1e-9 {
        return Err(Error::guard(format!(
            "orbit {counts} has about 10^{:.1} members, over the limit of {}",
            size_ln / std::f64::consts::LN_10,
            ORBIT_SIZE_GUARD
        )));
    }
    let n = counts.total() as usize;
    let mut remaining: Vec<u64> = counts.counts().to_vec();
    let mut out = Vec::with_capacity(size_ln.exp().round() as usize);
    let mut prefix = Vec::with_capacity(n);
    fill_orbit(&mut remaining, &mut prefix, n, &mut out);
    Ok(out)
}

fn fill_orbit(remaining: &mut [u64], prefix: &mut Vec<u32>, n: usize, out: &mut Vec<Sequence>) {
    if prefix.len() == n {
        out.push(Sequence::from(prefix.clone()));
        return;
    }
    for c in 0..remaining.len() {
        if remaining[c] > 0 {
            remaining[c] -= 1;
            prefix.push(c as u32 + 1);
            fill_orbit(remaining, prefix, n, out);
            prefix.pop();
            remaining[c] += 1;
        }
    }
}

/// Expectation of a payoff under the product measure `Q^N`. Exact for any
/// space when the payoff has finite support (`default + Σ (v - default) P(x)`
/// uses the normalization of the product measure for the tail).
pub fn product_expectation(q: &SimplexPoint, f: &Payoff) -> Result<f64> {
    let space = f.space();
    if q.dim() != space.k() as usize {
        return Err(Error::invalid(format!(
            "simplex point has {} coordinates but the alphabet has {}",
            q.dim(),
            space.k()
        )));
    }
    if !space.is_enumerable() && f.default_value() != 0.0 {
        return Err(Error::guard(
            "nonzero default on a non-enumerable space".to_string(),
        ));
    }
    let mut acc = f.default_value();
    for (&idx, &v) in f.table() {
        let mut prob = 1.0;
        let mut rest = idx;
        for _ in 0..space.n() {
            prob *= q.probs()[(rest % space.k() as u64) as usize];
            rest /= space.k() as u64;
        }
        acc += (v - f.default_value()) * prob;
    }
    Ok(acc)
}

/// Mean of a payoff over the distinct members of an orbit (equal to the
/// average over all permutations, since duplicates repeat with equal
/// multiplicity). Guarded by the orbit size limit.
pub fn orbit_average(f: &Payoff, counts: &CountVector) -> Result<f64> {
    let space = f.space();
    if counts.len() != space.k() as usize {
        return Err(Error::invalid(format!(
            "count vector has {} coordinates but the alphabet has {}",
            counts.len(),
            space.k()
        )));
    }
    if counts.total() != space.n() as u64 {
        return Err(Error::invalid(format!(
            "count vector totals {} but the sequence length is {}",
            counts.total(),
            space.n()
        )));
    }
    let size_ln = log_multinomial(counts).ln();
    if size_ln > (ORBIT_SIZE_GUARD as f64).ln() + 1e-9 {
        return Err(Error::guard(format!(
            "orbit {counts} has about 10^{:.1} members, over the limit of {}",
            size_ln / std::f64::consts::LN_10,
            ORBIT_SIZE_GUARD
        )));
    }
    let size = size_ln.exp().round();
    // Unlisted members contribute the default; only table entries on this
    // orbit shift the mean.
    let mut shift = 0.0;
    for (&idx, &v) in f.table() {
        if space.count_vector_of_index(idx) == *counts {
            shift += v - f.default_value();
        }
    }
    Ok(f.default_value() + shift / size)
}

/// Expectation of a payoff under an exchangeable law given as an orbit
/// mixture.
pub fn mixture_expectation(m: &OrbitMixture, f: &Payoff) -> Result<f64> {
    let mut acc = 0.0;
    for (cv, &w) in m.weights() {
        if w == 0.0 {
            continue;
        }
        acc += w * orbit_average(f, cv)?;
    }
    Ok(acc)
}

/// Empirical frequencies `n_c / N` of a count vector: the product law that
/// maximizes the probability of any single member of the orbit.
pub fn empirical_mle(counts: &CountVector) -> SimplexPoint {
    let total = counts.total();
    assert!(total >= 1, "empirical frequencies need at least one observation");
    let probs: Vec<f64> = counts
        .counts()
        .iter()
        .map(|&c| c as f64 / total as f64)
        .collect();
    // Renormalize with a compensated sum so wide alphabets stay within the
    // simplex tolerance.
    let sum = kahan_sum(probs.iter().copied());
    SimplexPoint::new(probs.into_iter().map(|p| p / sum).collect())
        .expect("renormalized frequencies form a simplex point")
}
