//! Hypothesis-testing machinery on top of the bounds: p-variables and
//! e-variables under the exchangeability and randomness assumptions,
//! conversion of randomness e-variables into exchangeability e-variables
//! through the tight constant, the named extreme events, and one-step-ahead
//! prediction sets obtained by inverting critical regions.

use std::collections::BTreeSet;

use crate::bounds::{grid_oracle_argmax, ure_best, urp, uxe, uxp, OptimConfig, OrbitEvent};
use crate::combinatorics::{tight_constant, Alphabet};
use crate::error::{Error, Result};
use crate::spaces::{CountVector, Event, Payoff, Sequence};

/// Which composite null hypothesis a statistic is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assumption {
    /// The law is invariant under permutations of the coordinates.
    Exchangeability,
    /// The law is a product `Q^N` for a single Q (IID observations).
    Randomness,
}

/// A candidate p-variable: a statistic with values in [0, 1].
#[derive(Debug, Clone)]
pub struct PVariable {
    payoff: Payoff,
}

impl PVariable {
    pub fn new(payoff: Payoff) -> Result<Self> {
        let ok = |v: f64| (0.0..=1.0).contains(&v);
        if !ok(payoff.default_value()) {
            return Err(Error::invalid(format!(
                "p-variable values must lie in [0, 1], default is {}",
                payoff.default_value()
            )));
        }
        if let Some((&i, &v)) = payoff.table().iter().find(|(_, &v)| !ok(v)) {
            return Err(Error::invalid(format!(
                "p-variable values must lie in [0, 1], got {v} at index {i}"
            )));
        }
        Ok(PVariable { payoff })
    }

    pub fn payoff(&self) -> &Payoff {
        &self.payoff
    }
}

/// Outcome of checking the defining inequality of a p- or e-variable.
#[derive(Debug, Clone, Copy)]
pub struct ValidationReport {
    pub valid: bool,
    /// For p-variables: the level at which the violation is largest.
    pub worst_epsilon: Option<f64>,
    /// Largest value of `upper_prob({P <= eps}) - eps`, or of
    /// `upper_expectation - 1` for e-variables.
    pub violation: f64,
}

impl ValidationReport {
    fn from_violation(worst_epsilon: Option<f64>, violation: f64) -> Self {
        ValidationReport {
            valid: violation <= 1e-9,
            worst_epsilon,
            violation,
        }
    }
}

/// Sharpest available estimate of the upper probability of an event under
/// the given assumption: exact orbit maximum for exchangeability; for
/// randomness, the closed form when available, otherwise the larger of the
/// optimizer and (alphabets up to three symbols) the grid oracle.
fn upper_probability(a: &Event, assumption: Assumption, cfg: &OptimConfig) -> Result<f64> {
    match assumption {
        Assumption::Exchangeability => Ok(uxp(a)?.value),
        Assumption::Randomness => {
            let mut value = urp(a, cfg)?.value;
            let k = a.space().k();
            if k <= 3 && !a.is_empty() {
                let step = if k == 3 { 1.0 / 60.0 } else { 1.0 / 200.0 };
                let (grid, _) = grid_oracle_argmax(&a.indicator(), step)?;
                value = value.max(grid.min(1.0));
            }
            Ok(value)
        }
    }
}

/// Checks `upper_prob(P <= eps) <= eps` at every achieved value of P (the
/// sublevel sets are constant between achieved values, so those are the
/// only levels where the worst violation can sit).
pub fn validate_p_variable(p: &PVariable, assumption: Assumption) -> Result<ValidationReport> {
    let space = p.payoff().space();
    let capacity = space.enumerable_capacity()?;
    let cfg = OptimConfig::default();

    let mut values: Vec<(f64, u64)> = (0..capacity)
        .map(|i| (p.payoff().value_at(i), i))
        .collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("p-variable values are finite"));

    // Candidate levels: zero plus every achieved value below one.
    let mut candidates: Vec<f64> = vec![0.0];
    for &(v, _) in &values {
        if v < 1.0 && candidates.last() != Some(&v) {
            candidates.push(v);
        }
    }

    let mut worst: Option<(f64, f64)> = None;
    for &eps in &candidates {
        let members = values
            .iter()
            .take_while(|(v, _)| *v <= eps)
            .map(|&(_, i)| i);
        let sublevel = Event::new(space, members)?;
        let prob = upper_probability(&sublevel, assumption, &cfg)?;
        let violation = prob - eps;
        if worst.map_or(true, |(w, _)| violation > w) {
            worst = Some((violation, eps));
        }
    }
    let (violation, eps) = worst.expect("the zero level is always checked");
    Ok(ValidationReport::from_violation(Some(eps), violation))
}

/// Checks `upper_expectation(f) <= 1` under the given assumption.
pub fn validate_e_variable(f: &Payoff, assumption: Assumption) -> Result<ValidationReport> {
    let cfg = OptimConfig::default();
    let value = match assumption {
        Assumption::Exchangeability => uxe(f)?.value,
        Assumption::Randomness => best_ure_value(f, &cfg)?,
    };
    Ok(ValidationReport::from_violation(None, value - 1.0))
}

fn best_ure_value(f: &Payoff, cfg: &OptimConfig) -> Result<f64> {
    ure_best(f, cfg).map(|r| r.value)
}

/// Divides a randomness e-variable by the tight constant of its space,
/// which makes it an exchangeability e-variable; no smaller universal
/// divisor works.
pub fn exch_e_from_rand_e(f: &Payoff) -> Payoff {
    let space = f.space();
    let c = tight_constant(space.n() as u64, Alphabet::Finite(space.k() as u64))
        .expect("spaces have positive n and k");
    f.scale((-c.ln_c()).exp())
}

/// The prediction set after `n-1` observations: the symbols whose
/// continuation stays outside the critical region.
pub fn prediction_set(a: &Event, prefix: &Sequence) -> Result<BTreeSet<u32>> {
    let space = a.space();
    if prefix.len() + 1 != space.n() as usize {
        return Err(Error::invalid(format!(
            "prefix has {} observations but the critical region needs {}",
            prefix.len(),
            space.n() - 1
        )));
    }
    for &s in prefix.symbols() {
        if s < 1 || s > space.k() {
            return Err(Error::invalid(format!(
                "symbol {s} outside alphabet 1..={}",
                space.k()
            )));
        }
    }
    let mut out = BTreeSet::new();
    for z in 1..=space.k() {
        let mut symbols = prefix.symbols().to_vec();
        symbols.push(z);
        if !a.contains(&Sequence::from(symbols)) {
            out.insert(z);
        }
    }
    Ok(out)
}

/// Verifies that inverting a level-`epsilon` critical region yields
/// one-step-ahead prediction sets with coverage at least `1 - epsilon`.
/// Under randomness the coverage is certified over a simplex grid (step
/// 0.01 for two symbols, 0.02 for three); under exchangeability over the
/// orbit extreme points.
pub fn coverage_check(a: &Event, epsilon: f64, assumption: Assumption) -> Result<bool> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::invalid(format!(
            "significance level must lie in [0, 1), got {epsilon}"
        )));
    }
    let space = a.space();
    space.enumerable_capacity()?;
    let cfg = OptimConfig::default();
    let level = upper_probability(a, assumption, &cfg)?;
    if level > epsilon + 1e-9 {
        return Err(Error::invalid(format!(
            "the event is not a level-{epsilon} critical region: upper probability {level}"
        )));
    }
    let floor = 1.0 - epsilon - 1e-9;
    match assumption {
        Assumption::Exchangeability => {
            // The infimum over exchangeable laws of the covered mass is
            // attained on a single orbit.
            Ok(1.0 - uxp(a)?.value >= floor)
        }
        Assumption::Randomness => {
            let k = space.k();
            if k > 3 {
                return Err(Error::Unsupported(format!(
                    "grid-certified coverage handles alphabets of at most 3 symbols, got {k}"
                )));
            }
            let m: u64 = if k == 3 { 50 } else { 100 };
            let n = space.n();
            let prefix_space = if n >= 2 {
                Some(crate::spaces::SequenceSpace::new(k, n - 1)?)
            } else {
                None
            };
            let grid_points = simplex_grid(k as usize, m);
            for q in grid_points {
                let covered = match &prefix_space {
                    Some(ps) => {
                        let mut total = 0.0;
                        for prefix in ps.sequences()? {
                            let prefix_prob: f64 =
                                prefix.symbols().iter().map(|&s| q[(s - 1) as usize]).product();
                            if prefix_prob == 0.0 {
                                continue;
                            }
                            let gamma = prediction_set(a, &prefix)?;
                            let next_mass: f64 =
                                gamma.iter().map(|&z| q[(z - 1) as usize]).sum();
                            total += prefix_prob * next_mass;
                        }
                        total
                    }
                    None => {
                        let gamma = prediction_set(a, &Sequence::from(vec![]))?;
                        gamma.iter().map(|&z| q[(z - 1) as usize]).sum()
                    }
                };
                if covered < floor {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

fn simplex_grid(k: usize, m: u64) -> Vec<Vec<f64>> {
    match k {
        1 => vec![vec![1.0]],
        2 => (0..=m)
            .map(|i| vec![i as f64 / m as f64, (m - i) as f64 / m as f64])
            .collect(),
        _ => {
            let mut out = Vec::new();
            for i in 0..=m {
                for j in 0..=(m - i) {
                    out.push(vec![
                        i as f64 / m as f64,
                        j as f64 / m as f64,
                        (m - i - j) as f64 / m as f64,
                    ]);
                }
            }
            out
        }
    }
}

/// The event that all N observations of `{1, ..., N}` are distinct:
/// certain under some exchangeable law, exponentially unlikely under every
/// product law.
pub fn all_distinct_event(n: u64) -> OrbitEvent {
    assert!(n >= 1, "all_distinct_event requires n >= 1");
    OrbitEvent::new(n, CountVector::from(vec![1; n as usize]))
        .expect("an all-distinct orbit is always well formed")
}

/// The event of exactly half heads in `n` fair-coin-style observations
/// (alphabet of two symbols); `n` must be even.
pub fn half_heads_event(n: u64) -> Result<OrbitEvent> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::invalid(format!(
            "half-heads needs a positive even number of observations, got {n}"
        )));
    }
    OrbitEvent::new(2, CountVector::from(vec![n / 2, n / 2]))
}
