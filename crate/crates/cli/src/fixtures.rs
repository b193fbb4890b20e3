//! The headline numbers the `examples` command reproduces, kept in one
//! place so no expectation is duplicated elsewhere in the binary.

/// Level at which seven all-distinct observations become significant.
pub const LEVEL_N7: f64 = 1e-2;
pub const MINIMAL_N_AT_1E2: u64 = 7;

/// 3 sqrt(7) e^-7, the factorial bound at N = 7.
pub const ROBBINS_N7: f64 = 7.237838717706051e-3;
pub const ROBBINS_N7_TOL: f64 = 1e-12;

/// The five-sigma level of particle physics, roughly 1/(3e6), and the
/// length from which the bound stays below it.
pub const FIVE_SIGMA: f64 = 1.0 / 3e6;
pub const SUFFICIENT_N_AT_1E7: u64 = 22;

/// Largest product probability of exactly half heads in 1000 tosses.
pub const HALF_HEADS_N1000: f64 = 0.0252;
pub const HALF_HEADS_TOL: f64 = 5e-5;

/// Per-unit-K growth of log10 C in the three outermost split blocks.
pub const SLOPES: [f64; 3] = [0.3010, 0.4030, 0.4709];
pub const SLOPE_TOL: f64 = 5e-4;

/// log10(N^N/N!) at N = 1000, the figure's right endpoint.
pub const ENDPOINT_N1000: f64 = 432.3954;
pub const ENDPOINT_TOL: f64 = 1e-3;
