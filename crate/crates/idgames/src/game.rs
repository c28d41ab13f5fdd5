//! Scenarios, game functions, boxes and the winning-probability evaluator.
//!
//! Conventions fixed here and relied on everywhere else:
//!
//! * Joint inputs and joint outputs are mixed-radix integers with **player 1
//!   least significant**. For a two-player scenario with three inputs each,
//!   the pair (x1=2, x2=1) encodes to 2 + 1*3 = 5.
//! * A [`GameFunction`] stores one joint-output index per joint input, so the
//!   census loop touches a single flat array.
//! * For census scenarios the whole function is a single integer: the table
//!   entries written in radix m_o^n, entry for joint input 0 least
//!   significant. The map between functions and integers is a bijection.

use crate::exact::Rational;
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};

/// Number of players, inputs per player, and the common output count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scenario {
    players: usize,
    inputs: Vec<usize>,
    outputs: usize,
}

impl Scenario {
    pub fn new(players: usize, inputs: Vec<usize>, outputs: usize) -> Result<Self> {
        if players == 0 {
            return Err(Error::InvalidScenario("need at least one player".into()));
        }
        if inputs.len() != players {
            return Err(Error::InvalidScenario(format!(
                "got {} input counts for {} players",
                inputs.len(),
                players
            )));
        }
        if inputs.contains(&0) {
            return Err(Error::InvalidScenario("every player needs an input".into()));
        }
        if outputs < 2 {
            return Err(Error::InvalidScenario("need at least two outputs".into()));
        }
        let s = Scenario {
            players,
            inputs,
            outputs,
        };
        // Both joint counts must fit a word; census encodings also need the
        // function space to fit u64, which is checked where codes are built.
        s.checked_joint_inputs()?;
        s.checked_joint_outputs()?;
        Ok(s)
    }

    /// Scenario with the same number of inputs for every player.
    pub fn symmetric(players: usize, inputs_per_player: usize, outputs: usize) -> Result<Self> {
        Scenario::new(players, vec![inputs_per_player; players], outputs)
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn input_count(&self, player: usize) -> usize {
        self.inputs[player]
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    fn checked_joint_inputs(&self) -> Result<usize> {
        self.inputs
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m))
            .ok_or_else(|| Error::TooLarge("joint input count overflows".into()))
    }

    fn checked_joint_outputs(&self) -> Result<usize> {
        (0..self.players)
            .try_fold(1usize, |acc, _| acc.checked_mul(self.outputs))
            .ok_or_else(|| Error::TooLarge("joint output count overflows".into()))
    }

    pub fn joint_inputs(&self) -> usize {
        self.inputs.iter().product()
    }

    pub fn joint_outputs(&self) -> usize {
        self.outputs.pow(self.players as u32)
    }

    /// True when all players have the same number of inputs, which is what
    /// the census group (player reordering included) requires.
    pub fn is_symmetric(&self) -> bool {
        self.inputs.iter().all(|&m| m == self.inputs[0])
    }

    /// Number of game functions, if it fits in u64.
    pub fn function_space_size(&self) -> Option<u64> {
        let base = self.joint_outputs() as u64;
        let mut acc = 1u64;
        for _ in 0..self.joint_inputs() {
            acc = acc.checked_mul(base)?;
        }
        Some(acc)
    }
}

/// Mixed-radix encoding of a per-player input tuple, player 1 least
/// significant. `decode_input` inverts it.
pub fn encode_input(x: &[usize], s: &Scenario) -> Result<usize> {
    if x.len() != s.players() {
        return Err(Error::ScenarioMismatch(format!(
            "input tuple has {} components, scenario has {} players",
            x.len(),
            s.players()
        )));
    }
    let mut idx = 0;
    let mut stride = 1;
    for (k, &xk) in x.iter().enumerate() {
        if xk >= s.input_count(k) {
            return Err(Error::OutOfRange {
                what: "input",
                value: xk,
                bound: s.input_count(k),
            });
        }
        idx += xk * stride;
        stride *= s.input_count(k);
    }
    Ok(idx)
}

pub fn decode_input(mut idx: usize, s: &Scenario) -> Vec<usize> {
    let mut x = Vec::with_capacity(s.players());
    for k in 0..s.players() {
        x.push(idx % s.input_count(k));
        idx /= s.input_count(k);
    }
    x
}

/// Output tuples use the same convention with radix m_o.
pub fn encode_output(y: &[usize], s: &Scenario) -> Result<usize> {
    if y.len() != s.players() {
        return Err(Error::ScenarioMismatch(format!(
            "output tuple has {} components, scenario has {} players",
            y.len(),
            s.players()
        )));
    }
    let mut idx = 0;
    let mut stride = 1;
    for &yk in y {
        if yk >= s.outputs() {
            return Err(Error::OutOfRange {
                what: "output",
                value: yk,
                bound: s.outputs(),
            });
        }
        idx += yk * stride;
        stride *= s.outputs();
    }
    Ok(idx)
}

pub fn decode_output(mut idx: usize, s: &Scenario) -> Vec<usize> {
    let mut y = Vec::with_capacity(s.players());
    for _ in 0..s.players() {
        y.push(idx % s.outputs());
        idx /= s.outputs();
    }
    y
}

/// A total function from joint inputs to joint outputs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameFunction {
    scenario: Scenario,
    table: Vec<u32>,
}

impl GameFunction {
    pub fn from_table(scenario: Scenario, table: Vec<u32>) -> Result<Self> {
        if table.len() != scenario.joint_inputs() {
            return Err(Error::ScenarioMismatch(format!(
                "table has {} entries, scenario has {} joint inputs",
                table.len(),
                scenario.joint_inputs()
            )));
        }
        let bound = scenario.joint_outputs() as u32;
        if let Some(&bad) = table.iter().find(|&&v| v >= bound) {
            return Err(Error::OutOfRange {
                what: "joint output",
                value: bad as usize,
                bound: bound as usize,
            });
        }
        Ok(GameFunction { scenario, table })
    }

    /// Builds the function from a closure giving each player's output for a
    /// decoded input tuple.
    pub fn from_fn<F>(scenario: Scenario, f: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> Vec<usize>,
    {
        let mut table = Vec::with_capacity(scenario.joint_inputs());
        for idx in 0..scenario.joint_inputs() {
            let x = decode_input(idx, &scenario);
            let y = f(&x);
            table.push(encode_output(&y, &scenario)? as u32);
        }
        GameFunction::from_table(scenario, table)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// Joint output index at a joint input index.
    pub fn output_index(&self, joint_input: usize) -> usize {
        self.table[joint_input] as usize
    }

    /// Player `k`'s output at a joint input index.
    pub fn component(&self, k: usize, joint_input: usize) -> usize {
        let mut v = self.table[joint_input] as usize;
        for _ in 0..k {
            v /= self.scenario.outputs();
        }
        v % self.scenario.outputs()
    }

    /// The integer encoding of the whole function: table entries in radix
    /// m_o^n, joint input 0 least significant.
    pub fn code(&self) -> u64 {
        let radix = self.scenario.joint_outputs() as u64;
        let mut code = 0u64;
        for &entry in self.table.iter().rev() {
            code = code * radix + entry as u64;
        }
        code
    }

    pub fn from_code(scenario: Scenario, mut code: u64) -> Result<Self> {
        let radix = scenario.joint_outputs() as u64;
        let mut table = Vec::with_capacity(scenario.joint_inputs());
        for _ in 0..scenario.joint_inputs() {
            table.push((code % radix) as u32);
            code /= radix;
        }
        if code != 0 {
            return Err(Error::OutOfRange {
                what: "function code",
                value: code as usize,
                bound: 0,
            });
        }
        GameFunction::from_table(scenario, table)
    }
}

/// One output map per player; the vertices of the classical polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicStrategy {
    scenario: Scenario,
    maps: Vec<Vec<u32>>,
}

impl DeterministicStrategy {
    pub fn new(scenario: Scenario, maps: Vec<Vec<u32>>) -> Result<Self> {
        if maps.len() != scenario.players() {
            return Err(Error::ScenarioMismatch(format!(
                "{} output maps for {} players",
                maps.len(),
                scenario.players()
            )));
        }
        for (k, map) in maps.iter().enumerate() {
            if map.len() != scenario.input_count(k) {
                return Err(Error::ScenarioMismatch(format!(
                    "player {} map covers {} of {} inputs",
                    k + 1,
                    map.len(),
                    scenario.input_count(k)
                )));
            }
            if let Some(&bad) = map.iter().find(|&&y| y as usize >= scenario.outputs()) {
                return Err(Error::OutOfRange {
                    what: "output",
                    value: bad as usize,
                    bound: scenario.outputs(),
                });
            }
        }
        Ok(DeterministicStrategy { scenario, maps })
    }

    /// Strategy where every player always answers `y`.
    pub fn constant(scenario: Scenario, y: u32) -> Result<Self> {
        let maps = (0..scenario.players())
            .map(|k| vec![y; scenario.input_count(k)])
            .collect();
        DeterministicStrategy::new(scenario, maps)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn maps(&self) -> &[Vec<u32>] {
        &self.maps
    }

    /// Joint output index produced on joint input `joint_input`.
    pub fn output_index(&self, joint_input: usize) -> usize {
        let x = decode_input(joint_input, &self.scenario);
        let mut idx = 0;
        let mut stride = 1;
        for (k, &xk) in x.iter().enumerate() {
            idx += self.maps[k][xk] as usize * stride;
            stride *= self.scenario.outputs();
        }
        idx
    }
}

/// Scalar used for box entries: exact rationals on the classical/LP side,
/// floats on the quantum side.
pub trait BoxScalar: Clone + PartialEq + std::fmt::Debug {
    const EXACT: bool;
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn is_nonnegative(&self) -> bool;
    fn is_unit_sum(total: &Self) -> bool;
}

impl BoxScalar for Rational {
    const EXACT: bool = true;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_nonnegative(&self) -> bool {
        !self.is_negative()
    }
    fn is_unit_sum(total: &Self) -> bool {
        total.is_one()
    }
}

impl BoxScalar for f64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn from_rational(r: &Rational) -> Self {
        crate::exact::to_f64(r)
    }
    fn is_nonnegative(&self) -> bool {
        *self >= -1e-12
    }
    fn is_unit_sum(total: &Self) -> bool {
        (total - 1.0).abs() <= 1e-9
    }
}

/// A box: conditional joint distribution p(y-bar | x-bar). Entries are laid
/// out as `entries[joint_input * joint_outputs + joint_output]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior<T: BoxScalar> {
    scenario: Scenario,
    entries: Vec<T>,
}

pub type ExactBox = Behavior<Rational>;
pub type FloatBox = Behavior<f64>;

impl<T: BoxScalar> Behavior<T> {
    pub fn new(scenario: Scenario, entries: Vec<T>) -> Result<Self> {
        let expected = scenario.joint_inputs() * scenario.joint_outputs();
        if entries.len() != expected {
            return Err(Error::ScenarioMismatch(format!(
                "box has {} entries, scenario needs {}",
                entries.len(),
                expected
            )));
        }
        let b = Behavior { scenario, entries };
        if !b.entries.iter().all(|e| e.is_nonnegative()) {
            return Err(Error::UnnormalizedBox);
        }
        for x in 0..b.scenario.joint_inputs() {
            let mut total = T::zero();
            for y in 0..b.scenario.joint_outputs() {
                total = total.add(b.entry(x, y));
            }
            if !T::is_unit_sum(&total) {
                return Err(Error::UnnormalizedBox);
            }
        }
        Ok(b)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn entry(&self, joint_input: usize, joint_output: usize) -> &T {
        &self.entries[joint_input * self.scenario.joint_outputs() + joint_output]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    /// The box where every output tuple is equally likely on every input.
    pub fn uniform(scenario: Scenario) -> Self {
        let m = scenario.joint_outputs();
        let p = T::from_rational(&Rational::new(1.into(), (m as i64).into()));
        let entries = vec![p; scenario.joint_inputs() * m];
        Behavior { scenario, entries }
    }

    /// The deterministic box realizing a deterministic strategy.
    pub fn from_deterministic(d: &DeterministicStrategy) -> Self {
        let s = d.scenario().clone();
        let m = s.joint_outputs();
        let mut entries = vec![T::zero(); s.joint_inputs() * m];
        for x in 0..s.joint_inputs() {
            entries[x * m + d.output_index(x)] = T::one();
        }
        Behavior {
            scenario: s,
            entries,
        }
    }
}

impl ExactBox {
    pub fn to_float(&self) -> FloatBox {
        FloatBox {
            scenario: self.scenario.clone(),
            entries: self.entries.iter().map(crate::exact::to_f64).collect(),
        }
    }
}

/// Distribution of the referee's joint input; the censuses assume uniform.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDistribution {
    scenario: Scenario,
    weights: Vec<Rational>,
}

impl InputDistribution {
    pub fn new(scenario: Scenario, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != scenario.joint_inputs() {
            return Err(Error::ScenarioMismatch(format!(
                "{} weights for {} joint inputs",
                weights.len(),
                scenario.joint_inputs()
            )));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::Parse("negative input weight".into()));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::Parse("input weights must sum to 1".into()));
        }
        Ok(InputDistribution { scenario, weights })
    }

    pub fn uniform(scenario: &Scenario) -> Self {
        let n = scenario.joint_inputs();
        let w = Rational::new(1.into(), (n as i64).into());
        InputDistribution {
            scenario: scenario.clone(),
            weights: vec![w; n],
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn weight(&self, joint_input: usize) -> &Rational {
        &self.weights[joint_input]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }
}

/// Probability that the box's outputs equal `f` of the inputs:
/// sum over x of q(x) * p(f(x) | x).
pub fn winning_probability<T: BoxScalar>(
    f: &GameFunction,
    b: &Behavior<T>,
    q: &InputDistribution,
) -> Result<T> {
    if f.scenario() != b.scenario() || f.scenario() != q.scenario() {
        return Err(Error::ScenarioMismatch(
            "game, box and input distribution must share a scenario".into(),
        ));
    }
    let mut total = T::zero();
    for x in 0..f.scenario().joint_inputs() {
        let w = T::from_rational(q.weight(x));
        total = total.add(&w.mul(b.entry(x, f.output_index(x))));
    }
    Ok(total)
}

/// Fraction of joint inputs on which the deterministic strategy returns
/// exactly f(x); exact, uniform inputs.
pub fn evaluate_deterministic(f: &GameFunction, d: &DeterministicStrategy) -> Result<Rational> {
    if f.scenario() != d.scenario() {
        return Err(Error::ScenarioMismatch(
            "game and strategy must share a scenario".into(),
        ));
    }
    let n = f.scenario().joint_inputs();
    let wins = (0..n)
        .filter(|&x| d.output_index(x) == f.output_index(x))
        .count();
    Ok(Rational::new((wins as i64).into(), (n as i64).into()))
}
