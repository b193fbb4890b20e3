//! Upper probabilities and upper expectations on finite sequence spaces.
//!
//! The exchangeability side is exact: the upper expectation over
//! exchangeable laws is the largest orbit average, found by enumerating
//! orbits. The randomness (IID) side is the supremum over product laws
//! `Q^N`; for payoffs supported on a single orbit it has a closed form
//! attained at the empirical frequencies, and for general payoffs it is
//! estimated from below by multistart exponentiated-gradient ascent,
//! cross-checkable against a deterministic simplex grid for small
//! alphabets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{balanced_split, log_multinomial, LogReal};
use crate::error::{Error, Result};
use crate::spaces::{
    empirical_mle, enumerate_orbits, kahan_sum, orbit_average, orbit_members, CountVector, Event,
    Payoff, SequenceSpace, SimplexPoint, ORBIT_SIZE_GUARD,
};

/// Which upper quantity a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Uxp,
    Urp,
    Uxe,
    Ure,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Quantity::Uxp => "UXP",
            Quantity::Urp => "URP",
            Quantity::Uxe => "UXE",
            Quantity::Ure => "URE",
        };
        write!(f, "{s}")
    }
}

/// How a reported value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Exact maximum over enumerated orbits.
    OrbitExact,
    /// Closed form for payoffs supported on one orbit.
    ClosedForm,
    /// Multistart exponentiated-gradient ascent; the value is a certified
    /// lower bound on the true supremum.
    MultistartGradient,
    /// Deterministic maximum over a simplex lattice.
    GridOracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::OrbitExact => "orbit-exact",
            Method::ClosedForm => "closed-form",
            Method::MultistartGradient => "multistart-gradient",
            Method::GridOracle => "grid-oracle",
        };
        write!(f, "{s}")
    }
}

/// The maximizer a bound was attained at.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Orbit(CountVector),
    Simplex(SimplexPoint),
}

/// A computed bound together with how it was obtained and how precisely
/// the witness reproduces it.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub quantity: Quantity,
    pub value: f64,
    pub method: Method,
    pub witness: Witness,
    pub tolerance: f64,
}

/// Settings for the randomness-side optimizer.
#[derive(Debug, Clone)]
pub struct OptimConfig {
    /// Number of additional pseudo-random interior starts.
    pub restarts: usize,
    /// Stop a start once the objective improves by less than this.
    pub tol: f64,
    /// Iteration cap per start.
    pub max_iters: usize,
}

impl Default for OptimConfig {
    fn default() -> Self {
        OptimConfig {
            restarts: 8,
            tol: 1e-12,
            max_iters: 10_000,
        }
    }
}

/// Seed for the optimizer's pseudo-random starts; fixed so that reports
/// are reproducible run to run.
pub const OPTIMIZER_SEED: u64 = 0x5eed_ca1c_0001;

const MLE_PERTURBATION: f64 = 1e-6;

/// Upper exchangeability expectation: the largest orbit average of the
/// payoff, with the attaining orbit as witness.
pub fn uxe(f: &Payoff) -> Result<BoundReport> {
    orbit_maximum(f, Quantity::Uxe)
}

/// Upper exchangeability probability of an event.
pub fn uxp(a: &Event) -> Result<BoundReport> {
    let mut report = orbit_maximum(&a.indicator(), Quantity::Uxp)?;
    report.value = report.value.min(1.0);
    Ok(report)
}

fn orbit_maximum(f: &Payoff, quantity: Quantity) -> Result<BoundReport> {
    let space = f.space();
    let orbits = enumerate_orbits(&space)?;
    // Only table entries shift an orbit's mean away from the default, so
    // group them by orbit once instead of scanning the table per orbit.
    let mut shifts: BTreeMap<CountVector, f64> = BTreeMap::new();
    for (&idx, &v) in f.table() {
        *shifts
            .entry(space.count_vector_of_index(idx))
            .or_insert(0.0) += v - f.default_value();
    }
    let guard_ln = (ORBIT_SIZE_GUARD as f64).ln() + 1e-9;
    let mut best: Option<(f64, CountVector)> = None;
    for counts in orbits {
        let size_ln = log_multinomial(&counts).ln();
        if size_ln > guard_ln {
            return Err(Error::guard(format!(
                "orbit {counts} has about 10^{:.1} members, over the limit of {}",
                size_ln / std::f64::consts::LN_10,
                ORBIT_SIZE_GUARD
            )));
        }
        let size = size_ln.exp().round();
        let avg = f.default_value() + shifts.get(&counts).copied().unwrap_or(0.0) / size;
        let better = match &best {
            Some((b, _)) => avg > *b,
            None => true,
        };
        if better {
            best = Some((avg, counts));
        }
    }
    let (value, witness) = best.expect("every space has at least one orbit");
    Ok(BoundReport {
        quantity,
        value: value.max(0.0),
        method: Method::OrbitExact,
        witness: Witness::Orbit(witness),
        tolerance: 1e-12,
    })
}

/// ln of the per-member product probability `Π (n_c/N)^{n_c}` at the
/// empirical frequencies; zero counts contribute nothing.
fn ln_mle_member_mass(counts: &CountVector) -> f64 {
    let n = counts.total() as f64;
    counts
        .counts()
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| c as f64 * (c as f64 / n).ln())
        .sum()
}

/// ln of the probability the empirical-frequency product law gives to the
/// whole orbit.
pub(crate) fn ln_orbit_mass_at_mle(counts: &CountVector) -> f64 {
    log_multinomial(counts).ln() + ln_mle_member_mass(counts)
}

/// Exact upper randomness expectation for a payoff that vanishes outside
/// one orbit: mean over the orbit times the orbit's probability under the
/// empirical-frequency product law.
pub fn ure_closed_form(f: &Payoff, counts: &CountVector) -> Result<f64> {
    let space = f.space();
    if f.default_value() != 0.0 {
        return Err(Error::invalid(
            "closed form requires the payoff to vanish off the orbit, but the default is nonzero",
        ));
    }
    for (&idx, &v) in f.table() {
        if v > 0.0 && space.count_vector_of_index(idx) != *counts {
            return Err(Error::invalid(format!(
                "payoff has support outside the orbit {counts}"
            )));
        }
    }
    let mean = orbit_average(f, counts)?;
    Ok(mean * ln_orbit_mass_at_mle(counts).exp())
}

/// One merged term of the optimizer objective: all sequences of an orbit
/// share the same product probability, so their weights collapse.
struct Term {
    multiplicities: Vec<u32>,
    weight: f64,
}

fn merged_terms(f: &Payoff) -> Vec<Term> {
    let space = f.space();
    let mut by_orbit: BTreeMap<CountVector, f64> = BTreeMap::new();
    for (&idx, &v) in f.table() {
        *by_orbit
            .entry(space.count_vector_of_index(idx))
            .or_insert(0.0) += v - f.default_value();
    }
    by_orbit
        .into_iter()
        .map(|(cv, weight)| Term {
            multiplicities: cv.counts().iter().map(|&c| c as u32).collect(),
            weight,
        })
        .collect()
}

fn eval_objective(default: f64, terms: &[Term], q: &[f64]) -> f64 {
    let mut acc = default;
    for t in terms {
        let mut p = t.weight;
        for (c, &m) in t.multiplicities.iter().enumerate() {
            if m > 0 {
                p *= q[c].powi(m as i32);
            }
        }
        acc += p;
    }
    acc
}

/// Gradient of the objective by per-coordinate factor exclusion; a zero
/// probability raised to a positive power short-circuits the product.
fn eval_gradient(terms: &[Term], q: &[f64], g: &mut [f64]) {
    g.fill(0.0);
    for t in terms {
        for (c, &mc) in t.multiplicities.iter().enumerate() {
            if mc == 0 {
                continue;
            }
            let mut p = t.weight * mc as f64;
            for (c2, &m2) in t.multiplicities.iter().enumerate() {
                let e = if c2 == c { m2 - 1 } else { m2 };
                if e > 0 {
                    p *= q[c2].powi(e as i32);
                }
            }
            g[c] += p;
        }
    }
}

/// Exponentiated-gradient ascent from one start: multiplicative update
/// `q_c <- q_c exp(s (g_c - g_max))` then renormalize, with the step
/// halved until the objective improves. Returns the best point reached.
fn ascent(default: f64, terms: &[Term], start: &[f64], cfg: &OptimConfig) -> (f64, Vec<f64>) {
    let k = start.len();
    let mut q = start.to_vec();
    let mut value = eval_objective(default, terms, &q);
    let mut g = vec![0.0; k];
    let mut cand = vec![0.0; k];
    let mut step = 1.0f64;
    for _ in 0..cfg.max_iters {
        eval_gradient(terms, &q, &mut g);
        let gmax = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut s = step;
        let mut improvement = None;
        for _ in 0..60 {
            let mut sum = 0.0;
            for c in 0..k {
                cand[c] = q[c] * (s * (g[c] - gmax)).exp();
                sum += cand[c];
            }
            if sum > 0.0 {
                for c in cand.iter_mut() {
                    *c /= sum;
                }
                let cv = eval_objective(default, terms, &cand);
                if cv > value {
                    improvement = Some(cv - value);
                    q.copy_from_slice(&cand);
                    value = cv;
                    step = s;
                    break;
                }
            }
            s *= 0.5;
        }
        match improvement {
            Some(d) if d >= cfg.tol => {}
            _ => break,
        }
    }
    (value, q)
}

fn consider(best: &mut Option<(f64, Vec<f64>)>, value: f64, q: &[f64]) {
    let better = match best {
        Some((b, _)) => value > *b,
        None => true,
    };
    if better {
        *best = Some((value, q.to_vec()));
    }
}

fn simplex_from(mut q: Vec<f64>) -> SimplexPoint {
    let sum = kahan_sum(q.iter().copied());
    for p in q.iter_mut() {
        *p /= sum;
    }
    SimplexPoint::new(q).expect("renormalized optimizer point lies on the simplex")
}

/// Estimates the upper randomness expectation by maximizing the product
/// expectation over the simplex from several starts: uniform, each
/// positive-support orbit's empirical frequencies (evaluated exactly and
/// as a perturbed interior ascent start), and `restarts` seeded random
/// points. The reported value is a lower bound on the true supremum.
pub fn ure_numeric(f: &Payoff, cfg: &OptimConfig) -> Result<BoundReport> {
    let space = f.space();
    if !space.is_enumerable() {
        return Err(Error::guard(format!(
            "{}^{} sequences exceed the enumeration limit 2^24",
            space.k(),
            space.n()
        )));
    }
    if cfg.restarts < 1 {
        return Err(Error::invalid("the optimizer needs at least one restart"));
    }
    if !(cfg.tol > 0.0 && cfg.tol.is_finite()) {
        return Err(Error::invalid("the optimizer tolerance must be positive"));
    }
    let k = space.k() as usize;
    let default = f.default_value();
    let terms = merged_terms(f);

    let mut best: Option<(f64, Vec<f64>)> = None;

    let uniform = vec![1.0 / k as f64; k];
    let (v, q) = ascent(default, &terms, &uniform, cfg);
    consider(&mut best, v, &q);

    let mut support: BTreeSet<CountVector> = BTreeSet::new();
    for (&idx, &val) in f.table() {
        if val > 0.0 {
            support.insert(space.count_vector_of_index(idx));
        }
    }
    for cv in &support {
        let mle = empirical_mle(cv);
        // For a payoff concentrated on this orbit the supremum is attained
        // exactly at the frequencies, so take the untouched point as a
        // candidate before perturbing it into the interior for the ascent.
        let exact = eval_objective(default, &terms, mle.probs());
        consider(&mut best, exact, mle.probs());
        let start: Vec<f64> = mle
            .probs()
            .iter()
            .map(|&p| (1.0 - MLE_PERTURBATION) * p + MLE_PERTURBATION / k as f64)
            .collect();
        let (v, q) = ascent(default, &terms, &start, cfg);
        consider(&mut best, v, &q);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(OPTIMIZER_SEED);
    for _ in 0..cfg.restarts {
        let raw: Vec<f64> = (0..k)
            .map(|_| (-(1.0 - rng.gen::<f64>()).ln()).max(1e-12))
            .collect();
        let sum: f64 = raw.iter().sum();
        let start: Vec<f64> = raw.iter().map(|x| x / sum).collect();
        let (v, q) = ascent(default, &terms, &start, cfg);
        consider(&mut best, v, &q);
    }

    let (value, q) = best.expect("at least the uniform start ran");
    Ok(BoundReport {
        quantity: Quantity::Ure,
        value: value.max(0.0),
        method: Method::MultistartGradient,
        witness: Witness::Simplex(simplex_from(q)),
        tolerance: cfg.tol,
    })
}

/// Deterministic maximum of the product expectation over the simplex
/// lattice of mesh `step` (which must be `1/m` for an integer `m <= 2000`).
/// Only alphabets of up to three symbols are supported.
pub fn ure_grid_oracle(f: &Payoff, step: f64) -> Result<f64> {
    Ok(grid_oracle_argmax(f, step)?.0)
}

/// Grid-oracle result as a full report, with the attaining lattice point.
pub fn ure_grid_report(f: &Payoff, step: f64) -> Result<BoundReport> {
    let (value, q) = grid_oracle_argmax(f, step)?;
    Ok(BoundReport {
        quantity: Quantity::Ure,
        value,
        method: Method::GridOracle,
        witness: Witness::Simplex(simplex_from(q)),
        tolerance: 0.0,
    })
}

pub(crate) fn grid_oracle_argmax(f: &Payoff, step: f64) -> Result<(f64, Vec<f64>)> {
    let space = f.space();
    let k = space.k();
    if k > 3 {
        return Err(Error::Unsupported(format!(
            "the grid oracle handles alphabets of at most 3 symbols, got {k}"
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid("grid step must be positive"));
    }
    let m_real = 1.0 / step;
    let m = m_real.round();
    if (m_real - m).abs() > 1e-6 || !(1.0..=2000.0).contains(&m) {
        return Err(Error::invalid(
            "grid step must be 1/m for an integer m between 1 and 2000",
        ));
    }
    let m = m as u64;
    // Evaluate through per-sequence symbol products rather than orbit
    // powers, so the oracle takes an independent arithmetic route from the
    // optimizer.
    let entries: Vec<(Vec<u32>, f64)> = f
        .table()
        .iter()
        .map(|(&i, &v)| (space.sequence_at(i).symbols().to_vec(), v))
        .collect();
    let default = f.default_value();
    let eval = |q: &[f64]| -> f64 {
        let mut acc = default;
        for (symbols, v) in &entries {
            let p: f64 = symbols.iter().map(|&s| q[(s - 1) as usize]).product();
            acc += (v - default) * p;
        }
        acc
    };
    let mut best = f64::NEG_INFINITY;
    let mut best_q = Vec::new();
    let mut visit = |q: &[f64]| {
        let v = eval(q);
        if v > best {
            best = v;
            best_q = q.to_vec();
        }
    };
    match k {
        1 => visit(&[1.0]),
        2 => {
            for i in 0..=m {
                visit(&[i as f64 / m as f64, (m - i) as f64 / m as f64]);
            }
        }
        _ => {
            for i in 0..=m {
                for j in 0..=(m - i) {
                    visit(&[
                        i as f64 / m as f64,
                        j as f64 / m as f64,
                        (m - i - j) as f64 / m as f64,
                    ]);
                }
            }
        }
    }
    Ok((best, best_q))
}

/// Upper randomness probability of an event. Events concentrated on a
/// single orbit (even partially) take the exact closed-form route; the
/// rest go through the optimizer.
pub fn urp(a: &Event, cfg: &OptimConfig) -> Result<BoundReport> {
    let space = a.space();
    if a.is_empty() {
        return Ok(BoundReport {
            quantity: Quantity::Urp,
            value: 0.0,
            method: Method::ClosedForm,
            witness: Witness::Simplex(SimplexPoint::uniform(space.k() as usize)),
            tolerance: 0.0,
        });
    }
    let mut members = a.members().iter();
    let first = space.count_vector_of_index(*members.next().unwrap());
    let single_orbit = members.all(|&i| space.count_vector_of_index(i) == first);
    if single_orbit {
        // Every member has the same probability under any product law, so
        // the supremum is |A| times the per-member mass at the frequencies.
        let value = ((a.len() as f64).ln() + ln_mle_member_mass(&first)).exp();
        return Ok(BoundReport {
            quantity: Quantity::Urp,
            value: value.min(1.0),
            method: Method::ClosedForm,
            witness: Witness::Simplex(empirical_mle(&first)),
            tolerance: 1e-12,
        });
    }
    let mut report = ure_numeric(&a.indicator(), cfg)?;
    report.quantity = Quantity::Urp;
    report.value = report.value.min(1.0);
    Ok(report)
}

/// An orbit given analytically: the event "the observed multiplicities are
/// exactly these", on an alphabet that may be far too large to enumerate.
/// Carries closed-form bounds: the orbit is certain under some exchangeable
/// law (upper exchangeability probability 1) while its best product-law
/// probability is the orbit mass at the empirical frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitEvent {
    alphabet: u64,
    counts: CountVector,
}

impl OrbitEvent {
    /// `counts` holds the positive multiplicities only.
    pub fn new(alphabet: u64, counts: CountVector) -> Result<Self> {
        if counts.is_empty() || counts.counts().iter().any(|&c| c == 0) {
            return Err(Error::invalid(
                "an orbit descriptor lists positive multiplicities only",
            ));
        }
        if (counts.len() as u64) > alphabet {
            return Err(Error::invalid(format!(
                "{} distinct symbols cannot occur in an alphabet of {alphabet}",
                counts.len()
            )));
        }
        Ok(OrbitEvent { alphabet, counts })
    }

    pub fn alphabet(&self) -> u64 {
        self.alphabet
    }

    pub fn n(&self) -> u64 {
        self.counts.total()
    }

    pub fn counts(&self) -> &CountVector {
        &self.counts
    }

    /// A full orbit is certain under the uniform law on itself.
    pub fn uxp(&self) -> f64 {
        1.0
    }

    pub fn ln_urp(&self) -> LogReal {
        LogReal::from_ln(ln_orbit_mass_at_mle(&self.counts))
    }

    pub fn urp(&self) -> f64 {
        self.ln_urp().value()
    }

    pub fn uxp_report(&self) -> BoundReport {
        BoundReport {
            quantity: Quantity::Uxp,
            value: 1.0,
            method: Method::OrbitExact,
            witness: Witness::Orbit(self.padded_counts()),
            tolerance: 0.0,
        }
    }

    pub fn urp_report(&self) -> BoundReport {
        BoundReport {
            quantity: Quantity::Urp,
            value: self.urp(),
            method: Method::ClosedForm,
            witness: Witness::Simplex(empirical_mle(&self.padded_counts())),
            tolerance: 1e-12,
        }
    }

    fn padded_counts(&self) -> CountVector {
        let mut padded = self.counts.counts().to_vec();
        padded.resize(self.alphabet as usize, 0);
        CountVector::from(padded)
    }

    /// Expands the descriptor into an explicit event, provided the space
    /// and the orbit are small enough.
    pub fn materialize(&self) -> Result<Event> {
        let k = u32::try_from(self.alphabet)
            .map_err(|_| Error::guard(format!("alphabet {} too large", self.alphabet)))?;
        let n = u32::try_from(self.n())
            .map_err(|_| Error::guard(format!("length {} too large", self.n())))?;
        let space = SequenceSpace::new(k, n)?;
        let members = orbit_members(&self.padded_counts())?;
        Event::from_sequences(space, members.iter())
    }
}

/// The balanced-split orbit: the event attaining the tight gap, with
/// upper exchangeability probability 1 and upper randomness probability
/// exactly the reciprocal of the tight constant.
pub fn extremal_event(n: u64, k: u64) -> Result<OrbitEvent> {
    if k == 0 {
        return Err(Error::invalid("the alphabet needs at least one symbol"));
    }
    OrbitEvent::new(k, balanced_split(n, k)?)
}

/// The sharpest available randomness-side estimate: exact closed form for
/// single-orbit payoffs, otherwise the larger of the optimizer result and
/// (for alphabets up to three symbols) the grid oracle.
pub fn ure_best(f: &Payoff, cfg: &OptimConfig) -> Result<BoundReport> {
    if let Some(counts) = single_orbit_support(f) {
        let value = ure_closed_form(f, &counts)?;
        return Ok(BoundReport {
            quantity: Quantity::Ure,
            value,
            method: Method::ClosedForm,
            witness: Witness::Simplex(empirical_mle(&counts)),
            tolerance: 1e-12,
        });
    }
    let mut best = ure_numeric(f, cfg)?;
    let k = f.space().k();
    if k <= 3 {
        let step = if k == 3 { 1.0 / 60.0 } else { 1.0 / 200.0 };
        let (value, q) = grid_oracle_argmax(f, step)?;
        if value > best.value {
            best = BoundReport {
                quantity: Quantity::Ure,
                value,
                method: Method::GridOracle,
                witness: Witness::Simplex(simplex_from(q)),
                tolerance: 0.0,
            };
        }
    }
    Ok(best)
}

/// The orbit its positive values live on, when there is exactly one.
fn single_orbit_support(f: &Payoff) -> Option<CountVector> {
    if f.default_value() != 0.0 {
        return None;
    }
    let space = f.space();
    let mut orbit: Option<CountVector> = None;
    for (&idx, &v) in f.table() {
        if v <= 0.0 {
            continue;
        }
        let cv = space.count_vector_of_index(idx);
        match &orbit {
            None => orbit = Some(cv),
            Some(existing) if *existing == cv => {}
            Some(_) => return None,
        }
    }
    orbit
}

/// Ratio of the exchangeability side to the randomness side. At most the
/// tight constant when the randomness side is exact; the optimizer only
/// underestimates its denominator, so the ratio can exceed the constant by
/// optimizer slack alone.
pub fn gap_ratio(f: &Payoff) -> Result<f64> {
    let cfg = OptimConfig::default();
    let uxe_value = uxe(f)?.value;
    let ure_value = ure_best(f, &cfg)?.value;
    if ure_value <= 0.0 {
        if uxe_value <= 0.0 {
            return Err(Error::invalid(
                "the payoff is identically zero; its gap ratio is undefined",
            ));
        }
        // A positive payoff somewhere gives positive mass under some
        // product law, so this branch is unreachable for valid payoffs.
        return Err(Error::invalid(
            "randomness side vanished while the exchangeability side is positive",
        ));
    }
    Ok(uxe_value / ure_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::ln_tight_constant;
    use crate::spaces::Sequence;

    fn space(k: u32, n: u32) -> SequenceSpace {
        SequenceSpace::new(k, n).unwrap()
    }

    fn seq(symbols: &[u32]) -> Sequence {
        Sequence::from(symbols.to_vec())
    }

    fn event(sp: SequenceSpace, seqs: &[&[u32]]) -> Event {
        let seqs: Vec<Sequence> = seqs.iter().map(|s| seq(s)).collect();
        Event::from_sequences(sp, seqs.iter()).unwrap()
    }

    #[test]
    fn uxe_examples() {
        let sp = space(2, 2);
        let f = event(sp, &[&[1, 2]]).indicator();
        let r = uxe(&f).unwrap();
        assert_eq!(r.value, 0.5);
        assert_eq!(r.witness, Witness::Orbit(CountVector::from(vec![1, 1])));
        assert_eq!(r.method, Method::OrbitExact);

        // All-distinct event on k = n: some orbit is fully inside.
        let sp7 = space(4, 4);
        let orbit = orbit_members(&CountVector::from(vec![1, 1, 1, 1])).unwrap();
        let all_distinct = Event::from_sequences(sp7, orbit.iter()).unwrap();
        assert_eq!(uxe(&all_distinct.indicator()).unwrap().value, 1.0);

        let zero = Payoff::constant(sp, 0.0).unwrap();
        assert_eq!(uxe(&zero).unwrap().value, 0.0);
    }

    #[test]
    fn uxp_examples() {
        // The extremal event has upper exchangeability probability one.
        let a = extremal_event(4, 2).unwrap().materialize().unwrap();
        assert_eq!(uxp(&a).unwrap().value, 1.0);

        let sp = space(2, 2);
        assert_eq!(uxp(&Event::empty(sp)).unwrap().value, 0.0);

        // Orbit (2,0) = {(1,1)} is contained in the event.
        let a2 = event(sp, &[&[1, 1], &[1, 2]]);
        assert_eq!(uxp(&a2).unwrap().value, 1.0);
    }

    #[test]
    fn ure_closed_form_examples() {
        // All-distinct orbit at K = N = 7: exactly N!/N^N.
        let sp = space(7, 7);
        let orbit = CountVector::from(vec![1; 7]);
        let f = Event::from_sequences(sp, orbit_members(&orbit).unwrap().iter())
            .unwrap()
            .indicator();
        let v = ure_closed_form(&f, &orbit).unwrap();
        assert!((v - 6.119899021666143e-3).abs() < 1e-15, "got {v}");

        // Orbit (2,2) of length 4: 6 (1/2)^4 = 3/8.
        let sp4 = space(2, 4);
        let orbit22 = CountVector::from(vec![2, 2]);
        let f22 = Event::from_sequences(sp4, orbit_members(&orbit22).unwrap().iter())
            .unwrap()
            .indicator();
        assert!((ure_closed_form(&f22, &orbit22).unwrap() - 0.375).abs() < 1e-15);

        // Degenerate orbit {(1,1)}: mass 1 at Q = (1, 0).
        let sp2 = space(2, 2);
        let f11 = event(sp2, &[&[1, 1]]).indicator();
        assert_eq!(
            ure_closed_form(&f11, &CountVector::from(vec![2, 0])).unwrap(),
            1.0
        );
    }

    #[test]
    fn ure_closed_form_rejects_off_orbit_support() {
        let sp = space(2, 2);
        let f = event(sp, &[&[1, 1], &[1, 2]]).indicator();
        assert!(ure_closed_form(&f, &CountVector::from(vec![2, 0])).is_err());
        let nonzero_default = Payoff::constant(sp, 0.5).unwrap();
        assert!(ure_closed_form(&nonzero_default, &CountVector::from(vec![2, 0])).is_err());
    }

    #[test]
    fn ure_numeric_examples() {
        let cfg = OptimConfig::default();

        let sp4 = space(2, 4);
        let orbit22 = CountVector::from(vec![2, 2]);
        let f22 = Event::from_sequences(sp4, orbit_members(&orbit22).unwrap().iter())
            .unwrap()
            .indicator();
        let r = ure_numeric(&f22, &cfg).unwrap();
        assert!((r.value - 0.375).abs() < 1e-6, "got {}", r.value);
        assert_eq!(r.method, Method::MultistartGradient);

        let ones = Payoff::constant(sp4, 1.0).unwrap();
        assert!((ure_numeric(&ones, &cfg).unwrap().value - 1.0).abs() < 1e-12);

        // Mixed support across orbits: agree with the grid oracle.
        let sp2 = space(2, 2);
        let mixed = event(sp2, &[&[1, 2], &[2, 1], &[1, 1]]).indicator();
        let numeric = ure_numeric(&mixed, &cfg).unwrap().value;
        let oracle = ure_grid_oracle(&mixed, 1.0 / 1000.0).unwrap();
        assert!(
            (numeric - oracle).abs() < 1e-4,
            "numeric {numeric} vs oracle {oracle}"
        );
    }

    #[test]
    fn ure_numeric_validates_config() {
        let f = Payoff::constant(space(2, 2), 1.0).unwrap();
        let bad = OptimConfig {
            restarts: 0,
            ..OptimConfig::default()
        };
        assert!(ure_numeric(&f, &bad).is_err());
        let huge = Payoff::new(space(2, 60), BTreeMap::new(), 0.0).unwrap();
        assert!(matches!(
            ure_numeric(&huge, &OptimConfig::default()),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn grid_oracle_examples() {
        // sup q(1)q(2) over the fair-step grid: 0.25 at (0.5, 0.5).
        let sp = space(2, 2);
        let f = event(sp, &[&[1, 2], &[2, 1]])
            .indicator();
        // Restrict to the orbit-(1,1) event only: members are (1,2),(2,1).
        let (v, q) = grid_oracle_argmax(&f, 0.01).unwrap();
        assert!((v - 0.5).abs() < 1e-12, "2 q(1) q(2) at half");
        assert_eq!(q, vec![0.5, 0.5]);

        let single = event(sp, &[&[1, 2]]).indicator();
        assert!((ure_grid_oracle(&single, 0.01).unwrap() - 0.25).abs() < 1e-12);

        let c = Payoff::constant(sp, 0.3).unwrap();
        assert!((ure_grid_oracle(&c, 0.05).unwrap() - 0.3).abs() < 1e-15);

        // Orbit (2,1) of length 3: closed-form value 4/9.
        let sp3 = space(2, 3);
        let orbit21 = CountVector::from(vec![2, 1]);
        let f21 = Event::from_sequences(sp3, orbit_members(&orbit21).unwrap().iter())
            .unwrap()
            .indicator();
        let v21 = ure_grid_oracle(&f21, 0.001).unwrap();
        assert!((v21 - 4.0 / 9.0).abs() < 2e-3, "got {v21}");
    }

    #[test]
    fn grid_oracle_guards() {
        let f = Payoff::constant(space(4, 2), 1.0).unwrap();
        assert!(matches!(
            ure_grid_oracle(&f, 0.01),
            Err(Error::Unsupported(_))
        ));
        let ok = Payoff::constant(space(2, 2), 1.0).unwrap();
        assert!(ure_grid_oracle(&ok, 0.3).is_err(), "not 1/m");
        assert!(ure_grid_oracle(&ok, 1.0 / 4096.0).is_err(), "m too large");
    }

    #[test]
    fn urp_examples() {
        let cfg = OptimConfig::default();

        // All-distinct event at N = 7 goes through the closed form.
        let a = extremal_event(7, 7).unwrap().materialize().unwrap();
        let r = urp(&a, &cfg).unwrap();
        assert_eq!(r.method, Method::ClosedForm);
        assert!((r.value - 6.119899021666143e-3).abs() < 1e-15);

        // Full space.
        let full = Event::full(space(2, 3)).unwrap();
        let rf = urp(&full, &cfg).unwrap();
        assert!((rf.value - 1.0).abs() < 1e-9, "got {}", rf.value);

        // Empty event.
        assert_eq!(urp(&Event::empty(space(2, 3)), &cfg).unwrap().value, 0.0);

        // Partial orbit: two of the three members of orbit (2,1).
        let part = event(space(2, 3), &[&[1, 1, 2], &[1, 2, 1]]);
        let rp = urp(&part, &cfg).unwrap();
        assert_eq!(rp.method, Method::ClosedForm);
        assert!((rp.value - 2.0 * (4.0 / 27.0)).abs() < 1e-15);
    }

    #[test]
    fn extremal_event_examples() {
        let cfg = OptimConfig::default();

        let e42 = extremal_event(4, 2).unwrap();
        assert_eq!(e42.counts().counts(), &[2, 2]);
        assert_eq!(e42.uxp(), 1.0);
        assert!((e42.urp() - 0.375).abs() < 1e-15);
        let materialized = e42.materialize().unwrap();
        assert_eq!(uxp(&materialized).unwrap().value, 1.0);
        assert!((urp(&materialized, &cfg).unwrap().value - 0.375).abs() < 1e-12);

        let e77 = extremal_event(7, 7).unwrap();
        assert!((e77.urp() - 6.119899021666143e-3).abs() < 1e-15);

        // Single-letter alphabet: the orbit is the whole space.
        let e31 = extremal_event(3, 1).unwrap();
        assert_eq!(e31.urp(), 1.0);
        assert_eq!(e31.uxp(), 1.0);
        let m31 = e31.materialize().unwrap();
        assert_eq!(m31.len(), 1);
    }

    #[test]
    fn extremal_urp_is_reciprocal_of_the_tight_constant() {
        for (n, k) in [
            (3u64, 2u64),
            (4, 2),
            (5, 2),
            (4, 3),
            (5, 3),
            (6, 3),
            (1000, 2),
            (1000, 7),
            (10_000, 13),
            (1_000_000, 17),
        ] {
            let e = extremal_event(n, k).unwrap();
            let ln_urp = e.ln_urp().ln();
            let ln_c = ln_tight_constant(n, k).unwrap();
            // The two routes round intermediates of size ~N ln N, so the
            // achievable log-domain agreement degrades with N.
            let tol = 1e-9 + 1e-15 * (n as f64) * (n as f64).ln();
            assert!(
                (ln_urp + ln_c).abs() < tol,
                "n={n} k={k}: ln URP {ln_urp} vs -ln C {}",
                -ln_c
            );
        }
    }

    #[test]
    fn gap_ratio_examples() {
        // Indicator of a single sequence across the (1,1) orbit: 1/2 over
        // 1/4 gives the binary tight constant 2.
        let sp = space(2, 2);
        let f = event(sp, &[&[1, 2]]).indicator();
        let r = gap_ratio(&f).unwrap();
        assert!((r - 2.0).abs() < 1e-9, "got {r}");

        let f42 = extremal_event(4, 2)
            .unwrap()
            .materialize()
            .unwrap()
            .indicator();
        let r42 = gap_ratio(&f42).unwrap();
        assert!((r42 - 8.0 / 3.0).abs() < 1e-9, "got {r42}");

        let ones = Payoff::constant(sp, 1.0).unwrap();
        assert!((gap_ratio(&ones).unwrap() - 1.0).abs() < 1e-9);

        let zero = Payoff::constant(sp, 0.0).unwrap();
        assert!(gap_ratio(&zero).is_err(), "degenerate ratio must error");
    }

    #[test]
    fn tightness_over_all_orbit_events() {
        // Over every orbit event of small spaces, the largest ratio of the
        // two closed-form probabilities is exactly the tight constant.
        for (n, k) in [(3u64, 2u64), (4, 2), (5, 2), (4, 3), (5, 3), (6, 3)] {
            let sp = space(k as u32, n as u32);
            let mut best = f64::NEG_INFINITY;
            for counts in enumerate_orbits(&sp).unwrap() {
                let positive: Vec<u64> = counts
                    .counts()
                    .iter()
                    .copied()
                    .filter(|&c| c > 0)
                    .collect();
                let orbit = OrbitEvent::new(k, CountVector::from(positive)).unwrap();
                // UXP = 1, so the ratio is 1/URP.
                best = best.max(-orbit.ln_urp().ln());
            }
            let ln_c = ln_tight_constant(n, k).unwrap();
            assert!(
                (best - ln_c).abs() < 1e-9,
                "(n,k)=({n},{k}): max ln ratio {best} vs ln C {ln_c}"
            );
        }
    }
}
