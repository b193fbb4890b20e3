//! Log-domain special functions and the closed-form constants of the
//! exchangeability-vs-randomness gap.
//!
//! Everything here is pure arithmetic on nonnegative quantities that can
//! overflow or underflow doubles badly (`N^N/N!` overflows from `N = 171`,
//! and the figures go up to `N = 10^6`), so all intermediate values are
//! carried as natural logarithms and only converted to plain decimals at
//! the boundary.

use std::f64::consts::{LN_10, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::spaces::CountVector;

/// Natural logarithm of a nonnegative real. Zero is encoded as negative
/// infinity; the value is never NaN and never positive infinity.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogReal(f64);

impl LogReal {
    /// Wraps a value already in log domain.
    pub fn from_ln(ln: f64) -> Self {
        assert!(!ln.is_nan(), "LogReal cannot hold NaN");
        assert!(
            ln != f64::INFINITY,
            "LogReal cannot hold an infinite quantity"
        );
        LogReal(ln)
    }

    /// Takes the logarithm of a nonnegative finite value; zero maps to
    /// negative infinity.
    pub fn from_value(value: f64) -> Self {
        assert!(
            value >= 0.0 && value.is_finite(),
            "LogReal::from_value requires a finite nonnegative value, got {value}"
        );
        LogReal(value.ln())
    }

    pub fn zero() -> Self {
        LogReal(f64::NEG_INFINITY)
    }

    pub fn one() -> Self {
        LogReal(0.0)
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn log10(self) -> f64 {
        self.0 / LN_10
    }

    /// Converts back to a plain double. Very large magnitudes saturate to
    /// `f64::INFINITY` and very small ones flush to zero; callers that care
    /// should stay in log domain.
    pub fn value(self) -> f64 {
        self.0.exp()
    }

    /// Raises to a nonnegative integer power, with the convention
    /// `x^0 = 1` even for `x = 0`.
    pub fn powu(self, exp: u64) -> Self {
        if exp == 0 {
            return LogReal::one();
        }
        LogReal(self.0 * exp as f64)
    }
}

impl std::ops::Mul for LogReal {
    type Output = LogReal;
    fn mul(self, rhs: LogReal) -> LogReal {
        // -inf + finite = -inf, matching 0 * x = 0.
        LogReal(self.0 + rhs.0)
    }
}

impl std::ops::Div for LogReal {
    type Output = LogReal;
    fn div(self, rhs: LogReal) -> LogReal {
        assert!(!rhs.is_zero(), "division of a LogReal by zero");
        LogReal(self.0 - rhs.0)
    }
}

impl fmt::Display for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({})", self.0)
    }
}

/// Largest `n` for which `ln(n!)` is taken from the exact cumulative table.
const EXACT_FACTORIAL_LIMIT: u64 = 10_000;

static LN_FACTORIAL_TABLE: OnceLock<Vec<f64>> = OnceLock::new();

fn ln_factorial_table() -> &'static [f64] {
    LN_FACTORIAL_TABLE.get_or_init(|| {
        let len = EXACT_FACTORIAL_LIMIT as usize + 1;
        let mut table = vec![0.0; len];
        // Compensated running sum of ln(i) keeps the absolute error at a
        // few ulps across the whole table.
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for i in 2..len {
            let term = (i as f64).ln() - comp;
            let next = sum + term;
            comp = (next - sum) - term;
            sum = next;
            table[i] = sum;
        }
        table
    })
}

/// Stirling series for ln(n!), accurate to well below 1e-13 relative for
/// n > 10^4 (the first omitted term is ~n^-9).
fn stirling_ln_factorial(n: f64) -> f64 {
    let inv = 1.0 / n;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0 + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0))));
    n * n.ln() - n + 0.5 * (2.0 * PI * n).ln() + series
}

pub(crate) fn ln_factorial_f64(n: u64) -> f64 {
    if n <= EXACT_FACTORIAL_LIMIT {
        ln_factorial_table()[n as usize]
    } else {
        stirling_ln_factorial(n as f64)
    }
}

/// ln(n!), exact summation up to n = 10^4 and a Stirling series beyond.
pub fn log_factorial(n: u64) -> LogReal {
    LogReal::from_ln(ln_factorial_f64(n))
}

/// ln of the multinomial coefficient `(Σ n_k)! / Π n_k!`. Zero counts
/// contribute nothing (`0! = 1`).
pub fn log_multinomial(counts: &CountVector) -> LogReal {
    let total: u64 = counts.total();
    let mut ln = ln_factorial_f64(total);
    for &c in counts.counts() {
        if c > 1 {
            ln -= ln_factorial_f64(c);
        }
    }
    LogReal::from_ln(ln)
}

/// Splits `n` into parts that are as equal as possible: for `k <= n`,
/// `n mod k` parts equal to `ceil(n/k)` followed by the rest equal to
/// `floor(n/k)`; for `k > n`, `n` parts equal to 1.
pub fn balanced_split(n: u64, k: u64) -> Result<CountVector> {
    if n == 0 {
        return Err(Error::invalid("balanced split requires n >= 1"));
    }
    if k == 0 {
        return Err(Error::invalid("balanced split requires k >= 1"));
    }
    if k >= n {
        return Ok(CountVector::from(vec![1u64; n as usize]));
    }
    let floor = n / k;
    let rem = n % k;
    let mut parts = Vec::with_capacity(k as usize);
    parts.extend(std::iter::repeat(floor + 1).take(rem as usize));
    parts.extend(std::iter::repeat(floor).take((k - rem) as usize));
    Ok(CountVector::from(parts))
}

/// Alphabet size: a finite number of symbols, or effectively unbounded
/// (any alphabet at least as large as the sequence length behaves the
/// same way).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alphabet {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Finite(k) => write!(f, "{k}"),
            Alphabet::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Alphabet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "infinity" => Ok(Alphabet::Infinite),
            other => other
                .parse::<u64>()
                .map(Alphabet::Finite)
                .map_err(|_| Error::invalid(format!("alphabet size must be a positive integer or 'inf', got '{other}'"))),
        }
    }
}

/// The tight multiplicative gap `C(N, K)` between upper expectations under
/// exchangeability and under the IID assumption, together with the
/// balanced split that attains it.
///
/// `C = (N^N / N!) * Π n_k! / n_k^{n_k}` over the balanced split; for
/// `K >= N` the product is empty and `C = N^N / N!`.
#[derive(Debug, Clone)]
pub struct TightConstant {
    pub n: u64,
    pub k: Alphabet,
    /// Base-10 logarithm of C. Zero exactly when K = 1.
    pub log10_c: f64,
    /// The balanced split, with zero parts dropped (length `min(K, N)`).
    pub split: CountVector,
}

impl TightConstant {
    pub fn ln_c(&self) -> f64 {
        self.log10_c * LN_10
    }

    /// C as a plain double; saturates to infinity when too large.
    pub fn c(&self) -> f64 {
        self.ln_c().exp()
    }
}

/// ln C(n, k) for finite k, computed without materializing the split.
pub fn ln_tight_constant(n: u64, k: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("tight constant requires n >= 1"));
    }
    if k == 0 {
        return Err(Error::invalid("tight constant requires k >= 1"));
    }
    let nf = n as f64;
    let base = nf * nf.ln() - ln_factorial_f64(n);
    if k >= n {
        return Ok(base);
    }
    // ln(c!/c^c) for one part of the split. For k = 1 the single part is n
    // itself and the term cancels `base` exactly.
    let part = |c: u64| ln_factorial_f64(c) - (c as f64) * (c as f64).ln();
    let floor = n / k;
    let rem = n % k;
    Ok(base + rem as f64 * part(floor + 1) + (k - rem) as f64 * part(floor))
}

/// log10 C(n, k) for finite k. Scalar fast path used for figure sweeps.
pub fn log10_tight_constant(n: u64, k: u64) -> Result<f64> {
    Ok(ln_tight_constant(n, k)? / LN_10)
}

/// Computes the tight constant together with its balanced split.
pub fn tight_constant(n: u64, k: Alphabet) -> Result<TightConstant> {
    if n == 0 {
        return Err(Error::invalid("tight constant requires n >= 1"));
    }
    let k_eff = match k {
        Alphabet::Finite(0) => return Err(Error::invalid("tight constant requires k >= 1")),
        Alphabet::Finite(k) => k.min(n),
        Alphabet::Infinite => n,
    };
    let split = balanced_split(n, k_eff)?;
    let log10_c = log10_tight_constant(n, k_eff)?;
    debug_assert!(log10_c >= 0.0);
    Ok(TightConstant { n, k, log10_c, split })
}

/// The Stirling-type bound `3 sqrt(N) e^{-N}` on the largest product
/// probability of seeing N distinct values in N draws, alongside the exact
/// probability `N!/N^N`.
#[derive(Debug, Clone, Copy)]
pub struct RobbinsBound {
    pub n: u64,
    bound: LogReal,
    exact_urp: LogReal,
}

impl RobbinsBound {
    /// `3 sqrt(n) e^{-n}` as a plain double (flushes to zero for n beyond
    /// ~745; use [`RobbinsBound::ln_bound`] when that matters).
    pub fn bound(&self) -> f64 {
        self.bound.value()
    }

    pub fn ln_bound(&self) -> LogReal {
        self.bound
    }

    /// The exact value `n!/n^n`.
    pub fn exact_urp(&self) -> f64 {
        self.exact_urp.value()
    }

    pub fn ln_exact_urp(&self) -> LogReal {
        self.exact_urp
    }
}

/// Evaluates `3 sqrt(n) e^{-n}` and `n!/n^n` in log domain. The exact
/// value is always strictly below the bound.
pub fn robbins_bound(n: u64) -> RobbinsBound {
    assert!(n >= 1, "robbins_bound requires n >= 1");
    let nf = n as f64;
    let ln_bound = 3f64.ln() + 0.5 * nf.ln() - nf;
    let ln_exact = ln_factorial_f64(n) - nf * nf.ln();
    assert!(
        ln_exact < ln_bound,
        "factorial bound violated at n = {n}: {ln_exact} >= {ln_bound}"
    );
    RobbinsBound {
        n,
        bound: LogReal::from_ln(ln_bound),
        exact_urp: LogReal::from_ln(ln_exact),
    }
}

/// Result of a significance-level scan: the smallest sequence length whose
/// all-distinct probability bound drops below the level, and, for levels of
/// the form `10^-k`, the simple sufficient length `3k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelThreshold {
    pub minimal_n: u64,
    pub sufficient_n: Option<u64>,
}

/// Finds the smallest N with `3 sqrt(N) e^{-N} <= epsilon` by linear scan
/// (the bound decays like e^{-N}, so the scan is O(log 1/epsilon)).
pub fn min_n_for_level(epsilon: f64) -> Result<LevelThreshold> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid(format!(
            "significance level must lie in (0, 1), got {epsilon}"
        )));
    }
    let ln_eps = epsilon.ln();
    let mut n = 1u64;
    loop {
        let nf = n as f64;
        if 3f64.ln() + 0.5 * nf.ln() - nf <= ln_eps {
            break;
        }
        n += 1;
    }
    // Detect epsilon = 10^-k for integer k >= 2.
    let neg_log10 = -epsilon.log10();
    let k = neg_log10.round();
    let sufficient_n = if k >= 2.0 && (neg_log10 - k).abs() < 1e-9 {
        let s = 3 * k as u64 + 1;
        assert!(n <= s, "scan found {n}, above the sufficient bound {s}");
        Some(s)
    } else {
        None
    };
    Ok(LevelThreshold {
        minimal_n: n,
        sufficient_n,
    })
}

/// log10 of the factor by which C grows when K increases by one inside the
/// segment `(N/(j+1), N/j]`: there a block of j+1 parts equal to j replaces
/// a block of j parts equal to j+1, multiplying C by
/// `(j!/j^j)^{j+1} * ((j+1)^{j+1}/(j+1)!)^j`. Strictly increasing in j.
pub fn slope_multiplier(j: u64) -> f64 {
    assert!(j >= 1, "slope_multiplier requires j >= 1");
    let jf = j as f64;
    let j1 = (j + 1) as f64;
    let ln = (j1) * (ln_factorial_f64(j) - jf * jf.ln())
        + jf * (j1 * j1.ln() - ln_factorial_f64(j + 1));
    ln / LN_10
}

/// `C(n, k) / n^{(k-1)/2}`, the constant-order factor in the polynomial
/// growth of C for fixed alphabet size.
pub fn asymptotic_ratio(n: u64, k: u64) -> f64 {
    assert!(k >= 1 && n >= k, "asymptotic_ratio requires n >= k >= 1");
    let ln_c = ln_tight_constant(n, k).expect("n, k validated above");
    (ln_c - 0.5 * (k - 1) as f64 * (n as f64).ln()).exp()
}

/// `f(n) = n ln(1 + 1/n)` (0 for n = 0): the increment of
/// `n ln n - ln n!` between consecutive integers. Strictly increasing and
/// bounded above by 1, which is what makes the balanced split optimal.
pub fn convexity_increment(n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let x = n as f64;
    x * (1.0 / x).ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
        assert!(
            (actual - expected).abs() <= tol,
            "{what}: got {actual}, expected {expected} (tol {tol})"
        );
    }

    #[test]
    fn log_factorial_small_values() {
        assert_eq!(log_factorial(0).ln(), 0.0);
        assert_eq!(log_factorial(1).ln(), 0.0);
        // ln(5040) for n = 7.
        assert_close(log_factorial(7).ln(), 8.525161361065414, 1e-12, "ln 7!");
        assert_close(log_factorial(2).ln(), 2f64.ln(), 1e-15, "ln 2!");
    }

    #[test]
    fn log_factorial_agrees_across_the_table_boundary() {
        // The Stirling series and the exact table must agree near the
        // switch point to ~1e-13 relative.
        for n in [9_990u64, 10_000, 10_001, 10_050] {
            let exact: f64 = (2..=n).map(|i| (i as f64).ln()).sum();
            let got = ln_factorial_f64(n);
            assert_close(got / exact, 1.0, 1e-12, &format!("ln {n}! ratio"));
        }
    }

    #[test]
    fn log_multinomial_known_values() {
        let c = CountVector::from(vec![2, 2]);
        assert_close(log_multinomial(&c).ln(), 6f64.ln(), 1e-12, "4!/(2!2!)");
        // A single part is one orbit element.
        assert_eq!(log_multinomial(&CountVector::from(vec![9])).ln(), 0.0);
        // Zero counts contribute nothing.
        let with_zeros = CountVector::from(vec![2, 0, 2, 0]);
        assert_close(
            log_multinomial(&with_zeros).ln(),
            6f64.ln(),
            1e-12,
            "zeros ignored",
        );
    }

    #[test]
    fn balanced_split_examples() {
        assert_eq!(
            balanced_split(7, 3).unwrap().counts(),
            &[3, 2, 2],
            "7 into 3"
        );
        assert_eq!(
            balanced_split(6, 3).unwrap().counts(),
            &[2, 2, 2],
            "exact division"
        );
        assert_eq!(
            balanced_split(4, 9).unwrap().counts(),
            &[1, 1, 1, 1],
            "k > n collapses to all-distinct"
        );
        assert!(balanced_split(0, 3).is_err());
        assert!(balanced_split(3, 0).is_err());
    }

    #[test]
    fn tight_constant_known_values() {
        // C(4, 2) = 4^4/4! * (2!/2^2)^2 = 8/3.
        let t = tight_constant(4, Alphabet::Finite(2)).unwrap();
        assert_close(t.log10_c, 0.4259687322722811, 1e-12, "log10 C(4,2)");
        assert_eq!(t.split.counts(), &[2, 2]);

        // Single-letter alphabet: C = 1 exactly.
        let t1 = tight_constant(1000, Alphabet::Finite(1)).unwrap();
        assert_eq!(t1.log10_c, 0.0);

        // Fair-coin, exactly half heads: 1/C(1000, 2) ~ 2.52%.
        let coin = tight_constant(1000, Alphabet::Finite(2)).unwrap();
        assert_close(coin.log10_c, 1.5981685121174566, 1e-9, "log10 C(1000,2)");
        assert_close(1.0 / coin.c(), 0.025225018178360802, 1e-9, "1/C(1000,2)");

        // K >= N and K = inf coincide with N^N/N!.
        let tn = tight_constant(7, Alphabet::Finite(7)).unwrap();
        let tinf = tight_constant(7, Alphabet::Infinite).unwrap();
        assert_eq!(tn.log10_c, tinf.log10_c);
        assert_close(
            tinf.log10_c,
            (823543f64 / 5040.0).log10(),
            1e-12,
            "log10(7^7/7!)",
        );
        assert_eq!(tinf.split.counts(), &[1, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn tight_constant_rejects_degenerate_sizes() {
        assert!(tight_constant(0, Alphabet::Finite(2)).is_err());
        assert!(tight_constant(5, Alphabet::Finite(0)).is_err());
    }

    #[test]
    fn tight_constant_nondecreasing_in_k() {
        for n in [1u64, 2, 7, 50, 137] {
            let mut prev = -1.0;
            for k in 1..=(n + 3) {
                let c = log10_tight_constant(n, k).unwrap();
                assert!(
                    c >= prev,
                    "C({n}, {k}) decreased: {c} < {prev}"
                );
                prev = c;
            }
            // Constant once k >= n.
            let at_n = log10_tight_constant(n, n).unwrap();
            assert_eq!(log10_tight_constant(n, n + 3).unwrap(), at_n);
        }
    }

    #[test]
    fn robbins_bound_known_values() {
        let b7 = robbins_bound(7);
        assert_close(b7.bound(), 7.237838717706051e-3, 1e-15, "3 sqrt(7) e^-7");
        assert_close(b7.exact_urp(), 6.119899021666143e-3, 1e-15, "7!/7^7");
        assert!(b7.exact_urp() < b7.bound());

        // The bound exceeds 1 at n = 1.
        let b1 = robbins_bound(1);
        assert_close(b1.bound(), 1.1036383235143270, 1e-12, "3 e^-1");
        assert!(b1.bound() > 1.0);

        // Five-sigma territory at n = 22.
        let b22 = robbins_bound(22);
        assert_close(b22.bound(), 3.925129531295103e-9, 1e-21, "3 sqrt(22) e^-22");
        assert!(b22.bound() < 1.0 / 3e6);
    }

    #[test]
    fn robbins_inequality_holds_over_a_wide_range() {
        for n in 2..=20_000u64 {
            let nf = n as f64;
            let ln_bound = 3f64.ln() + 0.5 * nf.ln() - nf;
            let ln_exact = ln_factorial_f64(n) - nf * nf.ln();
            assert!(ln_exact < ln_bound, "violated at n = {n}");
        }
    }

    #[test]
    fn min_n_for_level_known_values() {
        let t = min_n_for_level(1e-2).unwrap();
        assert_eq!(t.minimal_n, 7);
        assert_eq!(t.sufficient_n, Some(7));

        let t7 = min_n_for_level(1e-7).unwrap();
        assert_eq!(t7.sufficient_n, Some(22));
        assert!(t7.minimal_n <= 22);

        // Five sigma is not a power of ten; the scan alone applies.
        let five_sigma = min_n_for_level(1.0 / 3e6).unwrap();
        assert_eq!(five_sigma.minimal_n, 18);
        assert_eq!(five_sigma.sufficient_n, None);

        assert!(min_n_for_level(0.0).is_err());
        assert!(min_n_for_level(1.0).is_err());
        assert!(min_n_for_level(-0.5).is_err());
    }

    #[test]
    fn slope_multiplier_known_values() {
        assert_close(slope_multiplier(1), 0.3010299956639812, 1e-12, "log10 2");
        assert_close(
            slope_multiplier(2),
            0.4033350405587438,
            1e-12,
            "log10(3^4/2^5)",
        );
        assert_close(
            slope_multiplier(3),
            0.4712361156993559,
            1e-12,
            "log10(2^19/3^11)",
        );
        // Slopes keep increasing toward small K.
        let mut prev = 0.0;
        for j in 1..200 {
            let s = slope_multiplier(j);
            assert!(s > prev, "slope stopped increasing at j = {j}");
            prev = s;
        }
    }

    #[test]
    fn slope_matches_finite_differences_of_the_constant() {
        // Inside a block (n/(j+1), n/j] where both k and k+1 replace whole
        // blocks, the finite difference of log10 C equals the slope.
        let n = 1000u64;
        for j in 1..=6u64 {
            let lo = n / (j + 1);
            let hi = n / j;
            // k from lo+1 to hi-1 keeps both k and k+1 inside (n/(j+1), n/j].
            for k in (lo + 1)..hi {
                let d = log10_tight_constant(n, k + 1).unwrap()
                    - log10_tight_constant(n, k).unwrap();
                let s = slope_multiplier(j);
                assert!(
                    (d - s).abs() < 1e-9,
                    "block j = {j}, k = {k}: diff {d} vs slope {s}"
                );
            }
        }
    }

    #[test]
    fn asymptotic_ratio_known_values() {
        // K = 2 constant is sqrt(pi/2).
        assert_close(asymptotic_ratio(10_000, 2), 1.2533141373155003, 0.01, "K=2");
        // K = 1: C = 1 and n^0 = 1.
        assert_eq!(asymptotic_ratio(500, 1), 1.0);
        // Boundedness: ratios at widely separated n agree within 2%.
        let a = asymptotic_ratio(1_000, 2);
        let b = asymptotic_ratio(1_000_000, 2);
        assert!((a - b).abs() / a < 0.02, "ratio drifted: {a} vs {b}");
    }

    #[test]
    fn convexity_increment_known_values() {
        assert_eq!(convexity_increment(0), 0.0);
        assert_close(convexity_increment(1), 2f64.ln(), 1e-15, "ln 2");
        let big = convexity_increment(1_000_000);
        assert_close(big, 1.0 - 5e-7, 1e-10, "1 - 1/(2n) at n = 10^6");
        assert!(big > convexity_increment(999_999));
        assert!(big < 1.0);
    }

    #[test]
    fn log_real_arithmetic() {
        let a = LogReal::from_value(6.0);
        let b = LogReal::from_value(4.0);
        assert_close((a * b).value(), 24.0, 1e-12, "product");
        assert_close((a / b).value(), 1.5, 1e-15, "ratio");
        assert_eq!(LogReal::zero().powu(0).ln(), 0.0, "0^0 = 1");
        assert!(LogReal::zero().is_zero());
        assert_eq!((LogReal::zero() * a).value(), 0.0);
        assert!(LogReal::from_value(2.0) > LogReal::from_value(1.0));
    }

    #[test]
    fn log_real_round_trip() {
        // Near 1 the exp/ln round trip is exact to a ulp; across the whole
        // double range the log-space quantization costs up to |ln v| ulps.
        for &v in &[0.25f64, 0.5, 1.0, 2.5, 7.0] {
            let rt = LogReal::from_value(v).value();
            assert!((rt - v).abs() <= v * f64::EPSILON, "round trip at {v}");
        }
        for &v in &[1e-300f64, 1e-30, 1e30, 1e300] {
            let rt = LogReal::from_value(v).value();
            assert!(
                ((rt - v) / v).abs() < 1e-13,
                "wide-range round trip at {v}: {rt}"
            );
        }
    }

    #[test]
    #[should_panic(expected = "NaN")]
    fn log_real_rejects_nan() {
        let _ = LogReal::from_ln(f64::NAN);
    }

    #[test]
    fn alphabet_parsing() {
        assert_eq!("inf".parse::<Alphabet>().unwrap(), Alphabet::Infinite);
        assert_eq!("12".parse::<Alphabet>().unwrap(), Alphabet::Finite(12));
        assert!("twelve".parse::<Alphabet>().is_err());
    }
}
