//! Deterministic verification suites: closed-form identities, oracle
//! agreement, dominance and gap properties on seeded random corpora, and
//! the testing-layer guarantees. Output carries no timestamps or timing so
//! consecutive runs are byte-identical.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use exchbound::bounds::{
    extremal_event, ure_best, ure_closed_form, ure_numeric, urp, uxe, uxp, OptimConfig,
};
use exchbound::combinatorics::{
    convexity_increment, ln_tight_constant, log10_tight_constant, log_factorial, slope_multiplier,
};
use exchbound::spaces::{
    enumerate_orbits, mixture_expectation, orbit_members, CountVector, Event, OrbitMixture,
    Payoff, SequenceSpace,
};
use exchbound::testing::{
    all_distinct_event, coverage_check, exch_e_from_rand_e, half_heads_event, validate_p_variable,
    Assumption, PVariable,
};

pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        pass,
        detail,
    }
}

fn space(k: u32, n: u32) -> SequenceSpace {
    SequenceSpace::new(k, n).unwrap()
}

fn dense_random_payoff(rng: &mut ChaCha8Rng, k: u32, n: u32) -> Payoff {
    let sp = space(k, n);
    let cap = sp.index_capacity().unwrap();
    let table: BTreeMap<u64, f64> = (0..cap).map(|i| (i, rng.gen_range(0.0..1.0))).collect();
    Payoff::new(sp, table, 0.0).unwrap()
}

fn random_event(rng: &mut ChaCha8Rng, k: u32, n: u32) -> Event {
    let sp = space(k, n);
    let cap = sp.index_capacity().unwrap();
    let members = (0..cap).filter(|_| rng.gen_bool(0.5));
    Event::new(sp, members).unwrap()
}

fn grid_step_for(k: u32) -> f64 {
    if k >= 3 {
        1.0 / 60.0
    } else {
        1.0 / 200.0
    }
}

/// Best available randomness-side value for a corpus payoff: the larger of
/// the grid oracle and the multistart optimizer.
fn ure_oracle(f: &Payoff, cfg: &OptimConfig) -> f64 {
    let numeric = ure_numeric(f, cfg).unwrap().value;
    let grid = exchbound::bounds::ure_grid_oracle(f, grid_step_for(f.space().k())).unwrap();
    numeric.max(grid)
}

fn tight_constant_monotonicity() -> CheckOutcome {
    let mut worst = f64::INFINITY;
    for n in [1u64, 7, 50, 1000] {
        let mut prev = -1.0;
        for k in 1..=(n + 3) {
            let c = log10_tight_constant(n, k).unwrap();
            worst = worst.min(c - prev);
            if c < prev {
                return check(
                    "tight-constant-monotonicity",
                    false,
                    format!("C({n},{k}) decreased"),
                );
            }
            prev = c;
        }
        if log10_tight_constant(n, 1).unwrap() != 0.0
            || log10_tight_constant(n, n + 3).unwrap() != log10_tight_constant(n, n).unwrap()
        {
            return check(
                "tight-constant-monotonicity",
                false,
                format!("endpoint behavior broken at n = {n}"),
            );
        }
    }
    check(
        "tight-constant-monotonicity",
        true,
        "nondecreasing in K, zero at K=1, flat for K>=N".to_string(),
    )
}

fn slope_block_consistency() -> CheckOutcome {
    let n = 1000u64;
    let mut worst = 0.0f64;
    let mut checked = 0u32;
    for j in 1..=30u64 {
        let lo = n / (j + 1);
        let hi = n / j;
        for k in (lo + 1)..hi {
            let d = log10_tight_constant(n, k + 1).unwrap() - log10_tight_constant(n, k).unwrap();
            let gap = (d - slope_multiplier(j)).abs();
            worst = worst.max(gap);
            checked += 1;
        }
    }
    check(
        "slope-block-consistency",
        worst < 1e-9,
        format!("{checked} finite differences at N=1000, worst gap {worst:.3e}"),
    )
}

fn extremal_two_routes() -> CheckOutcome {
    let mut worst = 0.0f64;
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
    ] {
        let gap = (extremal_event(n, k).unwrap().ln_urp().ln() + ln_tight_constant(n, k).unwrap())
            .abs();
        worst = worst.max(gap);
    }
    check(
        "extremal-two-routes",
        worst < 1e-9,
        format!("orbit mass vs reciprocal constant, worst log gap {worst:.3e}"),
    )
}

fn robbins_inequality() -> CheckOutcome {
    for n in 2..=1_000_000u64 {
        let nf = n as f64;
        let ln_bound = 3f64.ln() + 0.5 * nf.ln() - nf;
        let ln_exact = log_factorial(n).ln() - nf * nf.ln();
        if ln_exact >= ln_bound {
            return check("robbins-inequality", false, format!("violated at N = {n}"));
        }
    }
    check(
        "robbins-inequality",
        true,
        "N!/N^N < 3 sqrt(N) e^-N for N in [2, 10^6]".to_string(),
    )
}

fn convexity_monotonicity() -> CheckOutcome {
    let mut prev = convexity_increment(0);
    for n in 1..=1_000_000u64 {
        let cur = convexity_increment(n);
        if cur <= prev {
            return check(
                "convexity-monotonicity",
                false,
                format!("increment not strictly increasing at n = {n}"),
            );
        }
        prev = cur;
    }
    check(
        "convexity-monotonicity",
        true,
        "n ln(1 + 1/n) strictly increasing on [0, 10^6]".to_string(),
    )
}

fn prop2_tightness(deep: bool) -> CheckOutcome {
    let mut pairs = vec![(3u64, 2u64), (4, 2), (5, 2), (4, 3), (5, 3)];
    if deep {
        pairs.push((6, 3));
    }
    let mut worst = 0.0f64;
    for &(n, k) in &pairs {
        let sp = space(k as u32, n as u32);
        let mut best = f64::NEG_INFINITY;
        for counts in enumerate_orbits(&sp).unwrap() {
            let positive: Vec<u64> = counts
                .counts()
                .iter()
                .copied()
                .filter(|&c| c > 0)
                .collect();
            let orbit =
                exchbound::bounds::OrbitEvent::new(k, CountVector::from(positive)).unwrap();
            best = best.max(-orbit.ln_urp().ln());
        }
        worst = worst.max((best - ln_tight_constant(n, k).unwrap()).abs());
    }
    check(
        "prop2-tightness",
        worst < 1e-9,
        format!(
            "max orbit-event ratio equals C on {} pairs, worst log gap {worst:.3e}",
            pairs.len()
        ),
    )
}

fn corpus(deep: bool) -> Vec<(u32, u32, usize)> {
    let per = if deep { 60 } else { 40 };
    let mut v = vec![
        (2u32, 2u32, per),
        (2, 3, per),
        (2, 4, per),
        (3, 2, per),
        (3, 3, per),
    ];
    if deep {
        v.push((2, 5, per));
        v.push((3, 4, per));
    }
    v
}

fn prop1_random_payoffs(deep: bool) -> CheckOutcome {
    let cfg = OptimConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = f64::NEG_INFINITY;
    let mut count = 0usize;
    for (k, n, cases) in corpus(deep) {
        let nf = n as f64;
        let factor = (nf * nf.ln() - log_factorial(n as u64).ln()).exp();
        for _ in 0..cases {
            let f = dense_random_payoff(&mut rng, k, n);
            let slack = uxe(&f).unwrap().value - factor * ure_oracle(&f, &cfg);
            worst = worst.max(slack);
            count += 1;
            if slack > 1e-6 {
                return check(
                    "prop1-gap-bound",
                    false,
                    format!("violated on k={k} n={n}: slack {slack:.3e}"),
                );
            }
        }
    }
    check(
        "prop1-gap-bound",
        true,
        format!("UXE <= (N^N/N!) URE on {count} random payoffs, worst slack {worst:.3e}"),
    )
}

fn dominance(deep: bool) -> CheckOutcome {
    let cfg = OptimConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = f64::NEG_INFINITY;
    let mut count = 0usize;
    for (k, n, cases) in corpus(deep) {
        for _ in 0..cases {
            let f = dense_random_payoff(&mut rng, k, n);
            let slack = ure_oracle(&f, &cfg) - uxe(&f).unwrap().value;
            worst = worst.max(slack);
            count += 1;
            if slack > 1e-12 {
                return check(
                    "dominance",
                    false,
                    format!("URE > UXE on k={k} n={n}: slack {slack:.3e}"),
                );
            }
            let a = random_event(&mut rng, k, n);
            let slack_p = urp(&a, &cfg).unwrap().value - uxp(&a).unwrap().value;
            worst = worst.max(slack_p);
            if slack_p > 1e-12 {
                return check(
                    "dominance",
                    false,
                    format!("URP > UXP on k={k} n={n}: slack {slack_p:.3e}"),
                );
            }
        }
    }
    check(
        "dominance",
        true,
        format!("randomness side below exchangeability side on {count} payoff/event pairs, worst slack {worst:.3e}"),
    )
}

fn optimizer_vs_closed_form(deep: bool) -> CheckOutcome {
    let cases = if deep { 100 } else { 30 };
    let cfg = OptimConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut worst = 0.0f64;
    for i in 0..cases {
        let (k, n) = [(2u32, 4u32), (2, 6), (3, 4), (3, 5)][i % 4];
        let sp = space(k, n);
        let orbits = enumerate_orbits(&sp).unwrap();
        let counts = orbits[rng.gen_range(0..orbits.len())].clone();
        let mut table = BTreeMap::new();
        for s in orbit_members(&counts).unwrap() {
            table.insert(sp.index_of(&s), rng.gen_range(0.0..1.0));
        }
        let f = Payoff::new(sp, table, 0.0).unwrap();
        let gap = (ure_numeric(&f, &cfg).unwrap().value - ure_closed_form(&f, &counts).unwrap())
            .abs();
        worst = worst.max(gap);
    }
    check(
        "optimizer-vs-closed-form",
        worst < 1e-8,
        format!("{cases} orbit-supported payoffs, worst gap {worst:.3e}"),
    )
}

fn mixture_bound(deep: bool) -> CheckOutcome {
    let trials = if deep { 1000 } else { 200 };
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let f = dense_random_payoff(&mut rng, 3, 4);
    let best = uxe(&f).unwrap().value;
    let orbits = enumerate_orbits(&f.space()).unwrap();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let raw: Vec<f64> = (0..orbits.len()).map(|_| rng.gen_range(0.0..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let m = OrbitMixture::new(
            orbits
                .iter()
                .zip(raw.iter())
                .map(|(cv, &w)| (cv.clone(), w / total)),
        )
        .unwrap();
        worst = worst.max(mixture_expectation(&m, &f).unwrap() - best);
    }
    check(
        "mixture-cannot-beat-best-orbit",
        worst <= 1e-12,
        format!("{trials} random exchangeable laws, worst excess {worst:.3e}"),
    )
}

fn p_variable_suite(deep: bool) -> CheckOutcome {
    let trials = if deep { 100 } else { 25 };
    let sp = space(2, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for t in 0..trials {
        let scores: BTreeMap<u64, f64> = (0..sp.index_capacity().unwrap())
            .map(|i| (i, rng.gen::<f64>()))
            .collect();
        let p = rank_p_variable(sp, &scores);
        for assumption in [Assumption::Exchangeability, Assumption::Randomness] {
            let r = validate_p_variable(&p, assumption).unwrap();
            if !r.valid {
                return check(
                    "p-variables",
                    false,
                    format!("trial {t} invalid under {assumption:?}: violation {:.3e}", r.violation),
                );
            }
        }
    }
    check(
        "p-variables",
        true,
        format!("{trials} rank statistics valid under both assumptions"),
    )
}

/// Within-orbit rank of a score function: an exchangeability p-variable by
/// construction.
fn rank_p_variable(sp: SequenceSpace, scores: &BTreeMap<u64, f64>) -> PVariable {
    let mut table = BTreeMap::new();
    for counts in enumerate_orbits(&sp).unwrap() {
        let members = orbit_members(&counts).unwrap();
        let size = members.len() as f64;
        for s in &members {
            let i = sp.index_of(s);
            let at_least = members
                .iter()
                .filter(|t| scores[&sp.index_of(t)] >= scores[&i])
                .count();
            table.insert(i, at_least as f64 / size);
        }
    }
    PVariable::new(Payoff::new(sp, table, 0.0).unwrap()).unwrap()
}

fn e_conversion() -> CheckOutcome {
    // Extremal payoff: scaled so the randomness side is exactly 1; the
    // conversion must then hit 1 with no slack.
    let f = extremal_event(4, 2)
        .unwrap()
        .materialize()
        .unwrap()
        .indicator()
        .scale(8.0 / 3.0);
    let converted = exch_e_from_rand_e(&f);
    let gap = (uxe(&converted).unwrap().value - 1.0).abs();
    if gap > 1e-9 {
        return check(
            "e-variable-conversion",
            false,
            format!("extremal conversion off by {gap:.3e}"),
        );
    }
    // A constant converts lossily.
    let ones = Payoff::constant(space(2, 4), 1.0).unwrap();
    let lossy = uxe(&exch_e_from_rand_e(&ones)).unwrap().value;
    check(
        "e-variable-conversion",
        lossy < 1.0,
        format!("extremal conversion exact (gap {gap:.3e}), constant drops to {lossy:.6}"),
    )
}

fn coverage_suite() -> CheckOutcome {
    let cfg = OptimConfig::default();
    let a = extremal_event(4, 2).unwrap().materialize().unwrap();
    let eps = urp(&a, &cfg).unwrap().value;
    let extremal_ok = coverage_check(&a, eps, Assumption::Randomness).unwrap();

    let ad = all_distinct_event(3).materialize().unwrap();
    let ad_ok = coverage_check(&ad, 6.0 / 27.0, Assumption::Randomness).unwrap();

    let empty = Event::empty(space(2, 3));
    let empty_ok = coverage_check(&empty, 0.01, Assumption::Randomness).unwrap()
        && coverage_check(&empty, 0.01, Assumption::Exchangeability).unwrap();

    check(
        "coverage",
        extremal_ok && ad_ok && empty_ok,
        "prediction sets cover at 1 - eps for extremal, all-distinct, and empty regions"
            .to_string(),
    )
}

fn half_heads_routes() -> CheckOutcome {
    let mut worst = 0.0f64;
    for n in (2..=22u64).step_by(2) {
        let hh = half_heads_event(n).unwrap();
        let sp = space(2, n as u32);
        let counts = CountVector::from(vec![n / 2, n / 2]);
        let f = Event::from_sequences(sp, orbit_members(&counts).unwrap().iter())
            .unwrap()
            .indicator();
        let closed = ure_closed_form(&f, &counts).unwrap();
        worst = worst.max((hh.ln_urp().ln() - closed.ln()).abs());
    }
    check(
        "half-heads-two-routes",
        worst < 1e-12,
        format!("descriptor vs closed form for even N <= 22, worst log gap {worst:.3e}"),
    )
}

fn ure_best_consistency() -> CheckOutcome {
    // The combined estimate can never fall below either route.
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let cfg = OptimConfig::default();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..20 {
        let f = dense_random_payoff(&mut rng, 3, 3);
        let best = ure_best(&f, &cfg).unwrap().value;
        let numeric = ure_numeric(&f, &cfg).unwrap().value;
        let grid = exchbound::bounds::ure_grid_oracle(&f, 1.0 / 60.0).unwrap();
        worst = worst.max(numeric.max(grid) - best);
    }
    check(
        "ure-best-consistency",
        worst <= 0.0,
        format!("combined estimate dominates both routes, worst shortfall {worst:.3e}"),
    )
}

pub fn run(deep: bool, inject_failure: bool) -> bool {
    let mut outcomes = vec![
        tight_constant_monotonicity(),
        slope_block_consistency(),
        extremal_two_routes(),
        robbins_inequality(),
        convexity_monotonicity(),
        prop2_tightness(deep),
        prop1_random_payoffs(deep),
        dominance(deep),
        optimizer_vs_closed_form(deep),
        mixture_bound(deep),
        p_variable_suite(deep),
        e_conversion(),
        coverage_suite(),
        half_heads_routes(),
        ure_best_consistency(),
    ];
    if inject_failure {
        outcomes.push(check(
            "injected-failure",
            false,
            "deliberate failure for harness testing".to_string(),
        ));
    }
    let mut passed = 0;
    let mut failed = 0;
    for o in &outcomes {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} {} - {}", o.name, o.detail);
        if o.pass {
            passed += 1;
        } else {
            failed += 1;
        }
    }
    println!("verified: {passed} passed, {failed} failed");
    failed == 0
}
