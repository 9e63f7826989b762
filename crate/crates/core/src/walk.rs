//! The random walk on the directed graph over `Z_E = {(i, j) : i + j even}`
//! in which every state steps to `(i-1, j-1)`, `(i+1, j-1)` or `(i, j+2)`
//! with probability 1/3.
//!
//! A closed walk must use each step equally often, so returns happen only
//! at lengths `3m`, with probability `(3m)! / (27^m (m!)^3)`.
//!
//! Monte-Carlo runs use ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. [`simulate`] reads stream 0; trial shard `k` of
//! [`estimate_return_frequency`] reads stream `k + 1` and holds
//! [`SHARD_SIZE`] consecutive trials. Each step draws one `u32`, redraws on
//! `u32::MAX` and takes the remainder mod 3 as the index into
//! [`successors`].

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::Rational;

/// Trials per Monte-Carlo shard. Fixed so that the stream used by every
/// trial does not depend on how many workers run.
pub const SHARD_SIZE: u64 = 4096;

/// Longest walk the displacement DP accepts.
pub const DP_LIMIT: u64 = 60;

/// Environment variable bounding the Monte-Carlo worker count.
pub const THREADS_ENV: &str = "TRILAB_THREADS";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("({0}, {1}) is not a state: i + j is odd")]
    OddParity(i64, i64),
    #[error("walk length must be non-negative, got {0}")]
    NegativeLength(i64),
    #[error("path counting is limited to n <= {DP_LIMIT}, got {0}")]
    BeyondBand(u64),
    #[error("m must be at least 1")]
    ZeroIndex,
    #[error("p^(3m) = {term} is below the Stirling bound {bound} at m = {m}")]
    BoundViolated { m: u64, term: f64, bound: f64 },
    #[error("field is undefined at {0:?}")]
    Undefined(State),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct State {
    pub i: i64,
    pub j: i64,
}

impl State {
    pub fn new(i: i64, j: i64) -> Result<State, WalkError> {
        if (i + j).rem_euclid(2) != 0 {
            return Err(WalkError::OddParity(i, j));
        }
        Ok(State { i, j })
    }

    pub const ORIGIN: State = State { i: 0, j: 0 };

    fn step(self, k: usize) -> State {
        let (di, dj) = STEPS[k];
        State { i: self.i + di, j: self.j + dj }
    }
}

const STEPS: [(i64, i64); 3] = [(-1, -1), (1, -1), (0, 2)];

pub fn successors(s: State) -> Result<[State; 3], WalkError> {
    let s = State::new(s.i, s.j)?;
    Ok([s.step(0), s.step(1), s.step(2)])
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `(3m)! / (m!)^3`, the number of closed walks of length `3m`.
pub fn closed_walks(m: u64) -> BigUint {
    let f = factorial(m);
    factorial(3 * m) / (&f * &f * &f)
}

/// Probability of being back at the start after `n` steps.
pub fn return_probability(n: i64) -> Result<Rational, WalkError> {
    if n < 0 {
        return Err(WalkError::NegativeLength(n));
    }
    let n = n as u64;
    if n % 3 != 0 {
        return Ok(Rational::zero());
    }
    let num = BigInt::from(closed_walks(n / 3));
    let den = BigInt::from(27u32).pow((n / 3) as u32);
    Ok(Rational::new(num, den))
}

/// Closed walks of length `n` counted by dynamic programming over
/// displacements, independent of the closed form.
pub fn path_count_dp(n: u64) -> Result<BigUint, WalkError> {
    if n > DP_LIMIT {
        return Err(WalkError::BeyondBand(n));
    }
    // displacement i in [-n, n], j in [-n, 2n]
    let w = n as i64;
    let (ni, nj) = (2 * w + 1, 3 * w + 1);
    let at = |i: i64, j: i64| ((i + w) * nj + (j + w)) as usize;
    let mut cur = vec![BigUint::zero(); (ni * nj) as usize];
    cur[at(0, 0)] = BigUint::one();
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); cur.len()];
        for i in -w..=w {
            for j in -w..=2 * w {
                let c = &cur[at(i, j)];
                if c.is_zero() {
                    continue;
                }
                for (di, dj) in STEPS {
                    let (a, b) = (i + di, j + dj);
                    if a.abs() <= w && (-w..=2 * w).contains(&b) {
                        next[at(a, b)] += c;
                    }
                }
            }
        }
        cur = next;
    }
    Ok(std::mem::take(&mut cur[at(0, 0)]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenMode {
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GreenValue {
    Exact(Rational),
    Float(f64),
}

impl GreenValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            GreenValue::Exact(r) => crate::lattice::to_f64(r),
            GreenValue::Float(x) => *x,
        }
    }
}

/// `sum_{m=0}^{M} p^(3m)`, the expected number of visits to the start
/// within `3M` steps.
pub fn green_partial(m_max: u64, mode: GreenMode) -> GreenValue {
    match mode {
        GreenMode::Exact => GreenValue::Exact(green_exact(m_max)),
        GreenMode::Float => GreenValue::Float(green_float(m_max)),
    }
}

fn green_exact(m_max: u64) -> Rational {
    let mut term = Rational::one();
    let mut sum = Rational::one();
    for m in 0..m_max {
        let k = BigInt::from(3 * m);
        let ratio = Rational::new(
            (&k + 1) * (&k + 2) * (&k + 3),
            BigInt::from(27u32) * BigInt::from(m + 1).pow(3),
        );
        term *= ratio;
        sum += &term;
    }
    sum
}

fn green_float(m_max: u64) -> f64 {
    (0..=m_max).map(term_f64).sum()
}

const EXACT_BELOW: u64 = 30;

/// `ln Γ(n + 1) - (n ln n - n + ln(2πn)/2)`, the Stirling correction.
fn stirling_correction(n: f64) -> f64 {
    let n2 = n * n;
    let inv = 1.0 / n;
    inv * (1.0 / 12.0 - inv * inv * (1.0 / 360.0 - (1.0 / n2) * (1.0 / 1260.0 - 1.0 / (1680.0 * n2))))
}

/// `p^(3m)` in floating point. Exact below a small threshold; above it the
/// leading Stirling terms cancel analytically, leaving
/// `sqrt(3) / (2πm) · exp(c(3m) - 3c(m))`.
pub fn term_f64(m: u64) -> f64 {
    if m < EXACT_BELOW {
        return crate::lattice::to_f64(&return_probability(3 * m as i64).expect("non-negative"));
    }
    ln_term(m).exp()
}

/// `ln p^(3m)` for `m >= 1`.
pub fn ln_term(m: u64) -> f64 {
    if m < EXACT_BELOW {
        return term_f64(m).ln();
    }
    let x = m as f64;
    (3f64.sqrt() / (2.0 * std::f64::consts::PI * x)).ln() + stirling_correction(3.0 * x) - 3.0 * stirling_correction(x)
}

/// `sqrt(6π) / e^3`, the constant in the per-term lower bound `C / m`.
pub fn stirling_constant() -> f64 {
    (6.0 * std::f64::consts::PI).sqrt() / 3f64.exp()
}

/// `sqrt(3) / (2π)`, the limit of `m p^(3m)`.
pub fn asymptote() -> f64 {
    3f64.sqrt() / (2.0 * std::f64::consts::PI)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirlingCheck {
    pub term: f64,
    pub lower_bound: f64,
    pub ratio_to_asymptote: f64,
}

pub fn stirling_term_check(m: u64) -> Result<StirlingCheck, WalkError> {
    if m == 0 {
        return Err(WalkError::ZeroIndex);
    }
    let term = term_f64(m);
    let lower_bound = stirling_constant() / m as f64;
    if term < lower_bound {
        return Err(WalkError::BoundViolated { m, term, bound: lower_bound });
    }
    Ok(StirlingCheck { term, lower_bound, ratio_to_asymptote: m as f64 * term / asymptote() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StirlingRow {
    pub m: u64,
    pub term: f64,
    pub lower_bound: f64,
    pub partial_sum: f64,
}

/// Rows for `m = 1..=m_max`; `partial_sum` runs from `m = 0`.
pub fn stirling_table(m_max: u64) -> Vec<StirlingRow> {
    let mut sum = 1.0;
    (1..=m_max)
        .map(|m| {
            let term = term_f64(m);
            sum += term;
            StirlingRow { m, term, lower_bound: stirling_constant() / m as f64, partial_sum: sum }
        })
        .collect()
}

pub fn write_stirling_csv<W: Write>(rows: &[StirlingRow], w: W) -> Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

fn choose(rng: &mut ChaCha8Rng) -> usize {
    loop {
        let u = rng.next_u32();
        if u != u32::MAX {
            return (u % 3) as usize;
        }
    }
}

/// Trajectory of `n_steps` steps from the origin.
pub fn simulate(seed: u64, n_steps: u64) -> Vec<State> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = State::ORIGIN;
    let mut out = Vec::with_capacity(n_steps as usize + 1);
    out.push(s);
    for _ in 0..n_steps {
        s = s.step(choose(&mut rng));
        out.push(s);
    }
    out
}

fn shard_returns(seed: u64, shard: u64, trials: u64, n: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard + 1);
    let mut hits = 0;
    for _ in 0..trials {
        let mut s = State::ORIGIN;
        for _ in 0..n {
            s = s.step(choose(&mut rng));
        }
        hits += u64::from(s == State::ORIGIN);
    }
    hits
}

/// Number of trials among `trials` length-`n` walks that end at the origin.
fn count_returns(seed: u64, trials: u64, n: u64) -> u64 {
    let shards = trials.div_ceil(SHARD_SIZE);
    (0..shards)
        .into_par_iter()
        .map(|k| shard_returns(seed, k, SHARD_SIZE.min(trials - k * SHARD_SIZE), n))
        .sum()
}

/// Fraction of walks back at the origin, using at most `threads` workers.
pub fn estimate_return_frequency_with(seed: u64, trials: u64, n: u64, threads: usize) -> Result<f64, WalkError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| WalkError::Pool(e.to_string()))?;
    Ok(pool.install(|| count_returns(seed, trials, n)) as f64 / trials as f64)
}

/// Fraction of `trials` independent length-`n` walks ending at the origin.
/// Honours [`THREADS_ENV`] when set.
pub fn estimate_return_frequency(seed: u64, trials: u64, n: u64) -> Result<f64, WalkError> {
    if trials == 0 {
        return Ok(f64::NAN);
    }
    match std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(t) if t > 0 => estimate_return_frequency_with(seed, trials, n, t),
        _ => Ok(count_returns(seed, trials, n) as f64 / trials as f64),
    }
}

/// Inclusive rectangle of index space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexWindow {
    pub i_min: i64,
    pub i_max: i64,
    pub j_min: i64,
    pub j_max: i64,
}

impl IndexWindow {
    pub fn states(&self) -> impl Iterator<Item = State> + '_ {
        (self.i_min..=self.i_max)
            .flat_map(move |i| (self.j_min..=self.j_max).map(move |j| (i, j)))
            .filter_map(|(i, j)| State::new(i, j).ok())
    }
}

/// `f(s)` minus the mean of `f` over the successors of `s`, at every state
/// of the window.
pub fn harmonic_residual(f: impl Fn(State) -> Option<Rational>, window: &IndexWindow) -> Result<BTreeMap<State, Rational>, WalkError> {
    let get = |s: State| f(s).ok_or(WalkError::Undefined(s));
    let third = Rational::new(BigInt::one(), BigInt::from(3));
    window
        .states()
        .map(|s| {
            let mut mean = Rational::zero();
            for n in successors(s)? {
                mean += get(n)?;
            }
            Ok((s, get(s)? - mean * &third))
        })
        .collect()
}

/// Length of a shortest directed path from `from` to `to`, searching paths
/// of at most `max_len` steps.
pub fn shortest_path_len(from: State, to: State, max_len: usize) -> Result<Option<usize>, WalkError> {
    let from = State::new(from.i, from.j)?;
    let to = State::new(to.i, to.j)?;
    let mut seen = HashSet::from([from]);
    let mut queue = VecDeque::from([(from, 0usize)]);
    while let Some((s, d)) = queue.pop_front() {
        if s == to {
            return Ok(Some(d));
        }
        if d == max_len {
            continue;
        }
        for k in 0..3 {
            let n = s.step(k);
            if seen.insert(n) {
                queue.push_back((n, d + 1));
            }
        }
    }
    Ok(None)
}

/// Counts of each step type along a trajectory.
pub fn step_counts(path: &[State]) -> [usize; 3] {
    let mut c = [0; 3];
    for w in path.windows(2) {
        let d = (w[1].i - w[0].i, w[1].j - w[0].j);
        let k = STEPS.iter().position(|&s| s == d).expect("consecutive states differ by a step");
        c[k] += 1;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{int, rat};
    use proptest::prelude::*;

    fn st(i: i64, j: i64) -> State {
        State::new(i, j).unwrap()
    }

    #[test]
    fn successor_lists() {
        assert_eq!(successors(st(0, 0)).unwrap(), [st(-1, -1), st(1, -1), st(0, 2)]);
        assert_eq!(successors(st(1, 1)).unwrap(), [st(0, 0), st(2, 0), st(1, 3)]);
        assert_eq!(successors(st(-2, 0)).unwrap(), [st(-3, -1), st(-1, -1), st(-2, 2)]);
        assert_eq!(successors(State { i: 1, j: 0 }), Err(WalkError::OddParity(1, 0)));
    }

    #[test]
    fn return_probabilities() {
        assert_eq!(return_probability(0).unwrap(), int(1));
        assert_eq!(return_probability(3).unwrap(), rat(2, 9));
        assert_eq!(return_probability(6).unwrap(), rat(10, 81));
        assert_eq!(return_probability(4).unwrap(), int(0));
        assert!(return_probability(-1).is_err());
    }

    #[test]
    fn dp_counts() {
        assert_eq!(path_count_dp(3).unwrap(), BigUint::from(6u32));
        assert_eq!(path_count_dp(6).unwrap(), BigUint::from(90u32));
        assert_eq!(path_count_dp(5).unwrap(), BigUint::zero());
        assert!(path_count_dp(61).is_err());
    }

    #[test]
    fn dp_agrees_with_closed_form() {
        for n in 0..=36u64 {
            let p = return_probability(n as i64).unwrap();
            let dp = Rational::new(BigInt::from(path_count_dp(n).unwrap()), BigInt::from(3u32).pow(n as u32));
            assert_eq!(p, dp, "n = {n}");
            assert_eq!(p.is_zero(), n % 3 != 0 && n > 0);
        }
    }

    #[test]
    fn green_values() {
        assert_eq!(green_partial(0, GreenMode::Exact), GreenValue::Exact(int(1)));
        assert_eq!(green_partial(1, GreenMode::Exact), GreenValue::Exact(rat(11, 9)));
        assert_eq!(green_partial(2, GreenMode::Exact), GreenValue::Exact(rat(109, 81)));
        let exact = green_partial(200, GreenMode::Exact).to_f64();
        let float = green_partial(200, GreenMode::Float).to_f64();
        assert!((exact - float).abs() < 1e-12, "{exact} vs {float}");
    }

    #[test]
    fn series_term_matches_exact_past_threshold() {
        for m in [30u64, 31, 50, 120] {
            let (a, b) = (term_f64(m), crate::lattice::to_f64(&return_probability(3 * m as i64).unwrap()));
            assert!(((a - b) / b).abs() < 1e-13, "m = {m}: {a} vs {b}");
        }
    }

    #[test]
    fn stirling_examples() {
        let c = stirling_term_check(1).unwrap();
        assert!((c.term - 2.0 / 9.0).abs() < 1e-15);
        assert!((c.lower_bound - 0.21616).abs() < 1e-5);
        assert!(stirling_term_check(10).unwrap().term >= 0.021616);
        assert!((stirling_term_check(1000).unwrap().ratio_to_asymptote - 1.0).abs() < 1e-3);
        assert_eq!(stirling_term_check(0), Err(WalkError::ZeroIndex));
    }

    #[test]
    fn partial_sums_dominate_harmonic_bound() {
        let c = stirling_constant();
        let mut green = 1.0;
        let mut harmonic = 0.0;
        let mut prev_scaled = 0.0;
        for m in 1..=10_000u64 {
            let t = term_f64(m);
            assert!(t > 0.0);
            green += t;
            harmonic += 1.0 / m as f64;
            assert!(green >= 1.0 + c * harmonic - 1e-9, "m = {m}");
            let scaled = m as f64 * t;
            assert!(scaled > prev_scaled && scaled < asymptote(), "m = {m}");
            prev_scaled = scaled;
        }
    }

    #[test]
    fn table_and_csv() {
        let rows = stirling_table(3);
        assert_eq!(rows.len(), 3);
        assert!((rows[0].partial_sum - 11.0 / 9.0).abs() < 1e-15);
        let mut buf = Vec::new();
        write_stirling_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("m,term,lower_bound,partial_sum\n1,"));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn zero_step_walks() {
        assert_eq!(simulate(7, 0), vec![State::ORIGIN]);
        assert_eq!(estimate_return_frequency(7, 100, 0).unwrap(), 1.0);
        assert_eq!(estimate_return_frequency(7, 100, 1).unwrap(), 0.0);
    }

    #[test]
    fn return_frequency_near_exact() {
        let f = estimate_return_frequency(2024, 100_000, 3).unwrap();
        assert!((f - 2.0 / 9.0).abs() < 0.0053, "{f}");
    }

    #[test]
    fn frequency_ignores_worker_count() {
        let trials = 3 * SHARD_SIZE + 17;
        let one = estimate_return_frequency_with(5, trials, 6, 1).unwrap();
        let four = estimate_return_frequency_with(5, trials, 6, 4).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn residual_examples() {
        let w = IndexWindow { i_min: -3, i_max: 3, j_min: -3, j_max: 3 };
        let all = |r: Rational| move |m: &BTreeMap<State, Rational>| m.values().all(|x| *x == r);
        let c = harmonic_residual(|_| Some(int(5)), &w).unwrap();
        assert!(all(int(0))(&c));
        let lin = harmonic_residual(|s| Some(int(s.i)), &w).unwrap();
        assert!(all(int(0))(&lin));
        let sq = harmonic_residual(|s| Some(int(s.i * s.i)), &w).unwrap();
        assert!(all(rat(-2, 3))(&sq));
        assert_eq!(sq.len(), w.states().count());
        let partial = harmonic_residual(|s| (s.j < 4).then(|| int(0)), &w);
        assert!(matches!(partial, Err(WalkError::Undefined(s)) if s.j >= 4));
    }

    #[test]
    fn every_state_is_reachable() {
        let w = IndexWindow { i_min: -3, i_max: 3, j_min: -3, j_max: 3 };
        for s in w.states() {
            assert!(shortest_path_len(State::ORIGIN, s, 30).unwrap().is_some(), "{s:?}");
        }
        assert_eq!(shortest_path_len(State::ORIGIN, State::ORIGIN, 0).unwrap(), Some(0));
        assert_eq!(shortest_path_len(State::ORIGIN, st(0, 2), 5).unwrap(), Some(1));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn trajectories_use_unit_steps(seed in any::<u64>(), n in 0u64..300) {
            let path = simulate(seed, n);
            prop_assert_eq!(path.len() as u64, n + 1);
            prop_assert_eq!(step_counts(&path).iter().sum::<usize>() as u64, n);
            prop_assert_eq!(simulate(seed, n), path);
        }

        #[test]
        fn returns_balance_step_types(seed in any::<u64>(), m in 1u64..6) {
            // a walk of length 3m back at the origin uses each step m times
            let path = simulate(seed, 3 * m);
            if *path.last().unwrap() == State::ORIGIN {
                prop_assert_eq!(step_counts(&path), [m as usize; 3]);
            }
        }

        #[test]
        fn linear_fields_are_harmonic(beta in -5i64..5, gamma in -5i64..5, c in -5i64..5) {
            let w = IndexWindow { i_min: -2, i_max: 2, j_min: -2, j_max: 2 };
            let r = harmonic_residual(|s| Some(int(beta * s.i + gamma * s.j + c)), &w).unwrap();
            prop_assert!(r.values().all(|x| x.is_zero()));
        }
    }
}
