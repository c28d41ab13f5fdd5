//! The counting argument for generic no-signaling advantage.
//!
//! For binary outputs the parity box wins any game with probability exactly
//! 2^(1-n), while describing all functions whose classical optimum exceeds
//! the 2^(-n) guessing floor takes measurably fewer bits than describing an
//! arbitrary function. The gap is quantified by the generalized entropy h*
//! and the encoding length M' = m*n + h*(omega) * m^n; as the number of
//! inputs grows the fraction of functions with a non-negligible classical
//! advantage vanishes.

use crate::classical::optimal_classical;
use crate::exact::Rational;
use crate::game::{ExactBox, GameFunction, Scenario};
use crate::{Error, Result};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// The no-signaling box that wins any binary-output game with probability
/// exactly 2^(1-n): outputs are uniform over the tuples whose parity matches
/// the parity of f's target outputs.
pub fn parity_box(f: &GameFunction) -> Result<ExactBox> {
    let s = f.scenario();
    if s.outputs() != 2 {
        return Err(Error::NonBinaryOutputs(s.outputs()));
    }
    let n = s.players();
    let joint_out = s.joint_outputs();
    let weight = Rational::new(1.into(), (1i64 << (n - 1)).into());
    let mut entries = Vec::with_capacity(s.joint_inputs() * joint_out);
    for x in 0..s.joint_inputs() {
        let target_parity = (f.output_index(x) as u32).count_ones() & 1;
        for y in 0..joint_out {
            if (y as u32).count_ones() & 1 == target_parity {
                entries.push(weight.clone());
            } else {
                entries.push(Rational::zero());
            }
        }
    }
    ExactBox::new(s.clone(), entries)
}

/// Highest entropy of a 2^n-letter variable when one letter is pinned at
/// probability `omega`: h(omega) + (1 - omega) * log2(2^n - 1). Equals n
/// exactly at omega = 2^(-n) and is strictly smaller elsewhere.
pub fn hstar(omega: f64, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::Parse(format!("omega {omega} outside [0, 1]")));
    }
    if n == 0 {
        return Err(Error::Parse("need at least one player".into()));
    }
    let h = |p: f64| -> f64 {
        if p <= 0.0 || p >= 1.0 {
            0.0
        } else {
            -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
        }
    };
    let letters = (1u64 << n) as f64;
    Ok(h(omega) + (1.0 - omega) * (letters - 1.0).log2())
}

/// The encoding-length bound at (n players, m inputs = outputs per player,
/// classical success level omega), all logarithms in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct CountingBound {
    pub n: usize,
    pub m: usize,
    pub omega: f64,
    /// h*(omega) for 2^n letters.
    pub hstar: f64,
    /// Bits to encode any function at classical level omega: mn + h* m^n.
    pub mprime: f64,
    /// Bits to encode an arbitrary function: n m^n.
    pub log_total: f64,
    /// log2 of the fraction bound, mprime - log_total; negative means the
    /// functions reaching omega classically are exponentially rare.
    pub log_fraction_bound: f64,
}

pub fn encoding_bound(n: usize, m: usize, omega: f64) -> Result<CountingBound> {
    let hs = hstar(omega, n)?;
    let mn = (m as f64).powi(n as i32);
    let mprime = (m * n) as f64 + hs * mn;
    let log_total = n as f64 * mn;
    Ok(CountingBound {
        n,
        m,
        omega,
        hstar: hs,
        mprime,
        log_total,
        log_fraction_bound: mprime - log_total,
    })
}

/// Empirical distribution of exact classical optima over sampled functions
/// (binary outputs), for comparison with the guaranteed no-signaling level
/// 2^(1-n).
#[derive(Debug, Clone)]
pub struct GapSample {
    pub scenario: Scenario,
    pub samples: u64,
    pub histogram: BTreeMap<Rational, u64>,
    /// Fraction of samples with omega_cl <= 2^(-n) + epsilon.
    pub near_floor_fraction: Rational,
    /// The guaranteed no-signaling success level 2^(1-n).
    pub ns_guarantee: Rational,
}

use crate::util::splitmix64 as splitmix;

/// Samples `sample_size` functions uniformly at (n players, m inputs each,
/// binary outputs) and brute-forces each classical optimum. Per-sample RNG
/// streams are derived from the master seed so results do not depend on the
/// thread count.
pub fn empirical_gap_sample(
    n: usize,
    m: usize,
    sample_size: u64,
    epsilon: Rational,
    seed: u64,
) -> Result<GapSample> {
    let s = Scenario::symmetric(n, m, 2)?;
    let values: Vec<Rational> = (0..sample_size)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed, i));
            let table: Vec<u32> = (0..s.joint_inputs())
                .map(|_| rng.gen_range(0..s.joint_outputs() as u32))
                .collect();
            let f = GameFunction::from_table(s.clone(), table).expect("valid table");
            optimal_classical(&f).expect("in range").value
        })
        .collect();
    Ok(assemble(s, values, epsilon))
}

/// Exact distribution over the whole function space instead of sampling;
/// only feasible for tiny scenarios such as n = m = 2.
pub fn exhaustive_gap(n: usize, m: usize, epsilon: Rational) -> Result<GapSample> {
    let s = Scenario::symmetric(n, m, 2)?;
    let total = s
        .function_space_size()
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| Error::TooLarge("function space too large to exhaust".into()))?;
    let values: Vec<Rational> = (0..total)
        .into_par_iter()
        .map(|code| {
            let f = GameFunction::from_code(s.clone(), code).expect("valid code");
            optimal_classical(&f).expect("in range").value
        })
        .collect();
    Ok(assemble(s, values, epsilon))
}

fn assemble(scenario: Scenario, values: Vec<Rational>, epsilon: Rational) -> GapSample {
    let n = scenario.players();
    let floor = Rational::new(1.into(), (1i64 << n).into());
    let threshold = floor + epsilon;
    let samples = values.len() as u64;
    let mut histogram = BTreeMap::new();
    let mut near = 0u64;
    for v in values {
        if v <= threshold {
            near += 1;
        }
        *histogram.entry(v).or_insert(0) += 1;
    }
    GapSample {
        scenario,
        samples,
        histogram,
        near_floor_fraction: Rational::new((near as i64).into(), (samples as i64).into()),
        ns_guarantee: Rational::new(1.into(), (1i64 << (n - 1)).into()),
    }
}
