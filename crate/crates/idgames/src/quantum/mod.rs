//! Quantum strategies: Born-rule evaluation, the explicit constructions for
//! the named games, Bell-functional bookkeeping, and seesaw lower bounds.

pub mod bell;
pub mod linalg;
pub mod seesaw;
pub mod strategies;

pub use bell::CorrelatorExpr;
pub use seesaw::{seesaw, seesaw_fixed_state, SeesawOptions, SeesawOutcome};

use crate::game::{FloatBox, GameFunction, InputDistribution, Scenario};
use crate::symmetry::RelabellingElement;
use crate::{Error, Result};
use linalg::{hermitian_eigen, inner, CMatrix, C64};
use serde::{Deserialize, Serialize};

const HERMITIAN_TOL: f64 = 1e-10;
const PROJECTIVE_TOL: f64 = 1e-8;

/// Shared state: either a pure state vector or a density operator on the
/// tensor product of the players' component spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Vector(Vec<C64>),
    Density(CMatrix),
}

impl State {
    pub fn dim(&self) -> usize {
        match self {
            State::Vector(v) => v.len(),
            State::Density(m) => m.dim(),
        }
    }
}

/// A Hermitian operator with spectrum in [-1, 1], representing the binary
/// measurement with effects (I +- A) / 2.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable(CMatrix);

impl Observable {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::InvalidStrategy("observable is not Hermitian".into()));
        }
        let (values, _) = hermitian_eigen(&m, 1e-12);
        if values.iter().any(|v| v.abs() > 1.0 + PROJECTIVE_TOL) {
            return Err(Error::InvalidStrategy(
                "observable spectrum leaves [-1, 1]".into(),
            ));
        }
        Ok(Observable(m))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    /// True when A^2 = I within tolerance, i.e. the measurement is
    /// projective.
    pub fn is_projective(&self) -> bool {
        let sq = self.0.matmul(&self.0);
        sq.max_abs_diff(&CMatrix::identity(self.0.dim())) < PROJECTIVE_TOL
    }

    /// The two effects, outcome 0 on the +1 eigenspace.
    pub fn effects(&self) -> [CMatrix; 2] {
        let id = CMatrix::identity(self.0.dim());
        [id.add(&self.0).scale_re(0.5), id.sub(&self.0).scale_re(0.5)]
    }
}

/// A shared state plus per-player, per-input measurements (one effect per
/// output symbol).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumStrategy {
    scenario: Scenario,
    dims: Vec<usize>,
    state: State,
    measurements: Vec<Vec<Vec<CMatrix>>>,
}

impl QuantumStrategy {
    pub fn new(
        scenario: Scenario,
        dims: Vec<usize>,
        state: State,
        measurements: Vec<Vec<Vec<CMatrix>>>,
    ) -> Result<Self> {
        if dims.len() != scenario.players() {
            return Err(Error::InvalidStrategy(format!(
                "{} component dimensions for {} players",
                dims.len(),
                scenario.players()
            )));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidStrategy("zero-dimensional component".into()));
        }
        let full: usize = dims.iter().product();
        if state.dim() != full {
            return Err(Error::InvalidStrategy(format!(
                "state lives in dimension {}, components give {}",
                state.dim(),
                full
            )));
        }
        match &state {
            State::Vector(v) => {
                let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                if (norm - 1.0).abs() > HERMITIAN_TOL {
                    return Err(Error::InvalidStrategy("state vector is not unit".into()));
                }
            }
            State::Density(rho) => {
                if !rho.is_hermitian(HERMITIAN_TOL) {
                    return Err(Error::InvalidStrategy(
                        "density matrix not Hermitian".into(),
                    ));
                }
                if (rho.trace().re - 1.0).abs() > HERMITIAN_TOL {
                    return Err(Error::InvalidStrategy(
                        "density matrix trace is not 1".into(),
                    ));
                }
                let (values, _) = hermitian_eigen(rho, 1e-12);
                if values.iter().any(|&v| v < -HERMITIAN_TOL) {
                    return Err(Error::InvalidStrategy("density matrix not PSD".into()));
                }
            }
        }
        if measurements.len() != scenario.players() {
            return Err(Error::InvalidStrategy(
                "need one measurement family per player".into(),
            ));
        }
        for (k, per_input) in measurements.iter().enumerate() {
            if per_input.len() != scenario.input_count(k) {
                return Err(Error::InvalidStrategy(format!(
                    "player {} has measurements for {} of {} inputs",
                    k + 1,
                    per_input.len(),
                    scenario.input_count(k)
                )));
            }
            for effects in per_input {
                if effects.len() != scenario.outputs() {
                    return Err(Error::InvalidStrategy(
                        "one effect per output symbol required".into(),
                    ));
                }
                let mut sum = CMatrix::zeros(dims[k]);
                for e in effects {
                    if e.dim() != dims[k] {
                        return Err(Error::InvalidStrategy(
                            "effect dimension differs from the player's space".into(),
                        ));
                    }
                    if !e.is_hermitian(HERMITIAN_TOL) {
                        return Err(Error::InvalidStrategy("effect not Hermitian".into()));
                    }
                    let (values, _) = hermitian_eigen(e, 1e-12);
                    if values.iter().any(|&v| v < -HERMITIAN_TOL) {
                        return Err(Error::InvalidStrategy("effect not PSD".into()));
                    }
                    sum = sum.add(e);
                }
                if sum.max_abs_diff(&CMatrix::identity(dims[k])) > HERMITIAN_TOL {
                    return Err(Error::InvalidStrategy(
                        "effects do not sum to the identity".into(),
                    ));
                }
            }
        }
        Ok(QuantumStrategy {
            scenario,
            dims,
            state,
            measurements,
        })
    }

    /// Builds a binary-output strategy from observables.
    pub fn from_observables(
        scenario: Scenario,
        dims: Vec<usize>,
        state: State,
        observables: Vec<Vec<Observable>>,
    ) -> Result<Self> {
        if scenario.outputs() != 2 {
            return Err(Error::NonBinaryOutputs(scenario.outputs()));
        }
        let measurements = observables
            .into_iter()
            .map(|per_input| {
                per_input
                    .into_iter()
                    .map(|o| o.effects().to_vec())
                    .collect()
            })
            .collect();
        QuantumStrategy::new(scenario, dims, state, measurements)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn effect(&self, player: usize, input: usize, output: usize) -> &CMatrix {
        &self.measurements[player][input][output]
    }

    /// Tensor product of the chosen effects, player 1 in the least
    /// significant index position (matching the joint output encoding).
    fn joint_effect(&self, x: &[usize], y: &[usize]) -> CMatrix {
        let mut acc = self.measurements[0][x[0]][y[0]].clone();
        for k in 1..self.scenario.players() {
            acc = self.measurements[k][x[k]][y[k]].kron(&acc);
        }
        acc
    }

    /// The box this strategy produces under the Born rule.
    pub fn born_box(&self) -> Result<FloatBox> {
        let s = &self.scenario;
        let joint_out = s.joint_outputs();
        let mut entries = Vec::with_capacity(s.joint_inputs() * joint_out);
        for xi in 0..s.joint_inputs() {
            let x = crate::game::decode_input(xi, s);
            for yi in 0..joint_out {
                let y = crate::game::decode_output(yi, s);
                let op = self.joint_effect(&x, &y);
                let p = match &self.state {
                    State::Vector(psi) => inner(psi, &op.apply(psi)).re,
                    State::Density(rho) => rho.matmul(&op).trace().re,
                };
                entries.push(p.max(0.0));
            }
        }
        FloatBox::new(s.clone(), entries)
    }

    /// Winning probability of this strategy on `f` under uniform inputs.
    pub fn value(&self, f: &GameFunction) -> Result<f64> {
        let b = self.born_box()?;
        crate::game::winning_probability(f, &b, &InputDistribution::uniform(&self.scenario))
    }

    pub fn to_doc(&self) -> StrategyDoc {
        StrategyDoc::of(self)
    }
}

/// Pushes a strategy through a relabelling element so that it plays the
/// relabelled game exactly as well: new player k inherits old player
/// sigma(k)'s space and wires its effects through the input and output maps.
pub fn transform_strategy(g: &RelabellingElement, qs: &QuantumStrategy) -> Result<QuantumStrategy> {
    if g.scenario() != qs.scenario() {
        return Err(Error::ScenarioMismatch(
            "element and strategy have different scenarios".into(),
        ));
    }
    let s = qs.scenario().clone();
    let n = s.players();
    let sigma = g.player_perm();
    let new_dims: Vec<usize> = (0..n).map(|k| qs.dims[sigma[k]]).collect();

    // Joint index remap: new tuple (i_1..i_n) reads old slot sigma(k) at
    // position k.
    let full: usize = new_dims.iter().product();
    let mut old_strides = vec![1usize; n];
    for j in 1..n {
        old_strides[j] = old_strides[j - 1] * qs.dims[j - 1];
    }
    let remap = |new_index: usize| -> usize {
        let mut rest = new_index;
        let mut old = 0;
        for k in 0..n {
            let digit = rest % new_dims[k];
            rest /= new_dims[k];
            old += digit * old_strides[sigma[k]];
        }
        old
    };

    let state = match &qs.state {
        State::Vector(psi) => State::Vector((0..full).map(|i| psi[remap(i)]).collect()),
        State::Density(rho) => {
            let mut out = CMatrix::zeros(full);
            for i in 0..full {
                for j in 0..full {
                    out[(i, j)] = rho[(remap(i), remap(j))];
                }
            }
            State::Density(out)
        }
    };

    let mut measurements = Vec::with_capacity(n);
    for k in 0..n {
        let j = sigma[k];
        let mut per_input = Vec::with_capacity(s.input_count(k));
        for x in 0..s.input_count(k) {
            let wired = g.input_perms()[j][x];
            let h = &g.output_maps()[j][wired];
            // h maps old outputs to new; new outcome y uses the old effect
            // at h^{-1}(y).
            let mut inverse = vec![0usize; s.outputs()];
            for (z, &y) in h.iter().enumerate() {
                inverse[y] = z;
            }
            let effects: Vec<CMatrix> = (0..s.outputs())
                .map(|y| qs.measurements[j][wired][inverse[y]].clone())
                .collect();
            per_input.push(effects);
        }
        measurements.push(per_input);
    }
    QuantumStrategy::new(s, new_dims, state, measurements)
}

/// Serialized strategy: real and imaginary parts split so the document is
/// plain JSON, readable back for re-evaluation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategyDoc {
    pub players: usize,
    pub inputs: Vec<usize>,
    pub outputs: usize,
    pub dims: Vec<usize>,
    pub state_kind: String,
    pub state_re: Vec<f64>,
    pub state_im: Vec<f64>,
    /// `effects[player][input][output]` as row-major (re, im) matrices.
    pub effects_re: Vec<Vec<Vec<Vec<f64>>>>,
    pub effects_im: Vec<Vec<Vec<Vec<f64>>>>,
}

impl StrategyDoc {
    pub fn of(qs: &QuantumStrategy) -> Self {
        let s = qs.scenario();
        let (state_kind, state_re, state_im) = match &qs.state {
            State::Vector(v) => (
                "vector".to_string(),
                v.iter().map(|z| z.re).collect(),
                v.iter().map(|z| z.im).collect(),
            ),
            State::Density(m) => {
                let d = m.dim();
                let mut re = Vec::with_capacity(d * d);
                let mut im = Vec::with_capacity(d * d);
                for i in 0..d {
                    for j in 0..d {
                        re.push(m[(i, j)].re);
                        im.push(m[(i, j)].im);
                    }
                }
                ("density".to_string(), re, im)
            }
        };
        let flatten = |m: &CMatrix, im: bool| -> Vec<f64> {
            let d = m.dim();
            (0..d * d)
                .map(|idx| {
                    let z = m[(idx / d, idx % d)];
                    if im {
                        z.im
                    } else {
                        z.re
                    }
                })
                .collect()
        };
        let effects_re = qs
            .measurements
            .iter()
            .map(|pi| {
                pi.iter()
                    .map(|es| es.iter().map(|e| flatten(e, false)).collect())
                    .collect()
            })
            .collect();
        let effects_im = qs
            .measurements
            .iter()
            .map(|pi| {
                pi.iter()
                    .map(|es| es.iter().map(|e| flatten(e, true)).collect())
                    .collect()
            })
            .collect();
        StrategyDoc {
            players: s.players(),
            inputs: s.inputs().to_vec(),
            outputs: s.outputs(),
            dims: qs.dims.clone(),
            state_kind,
            state_re,
            state_im,
            effects_re,
            effects_im,
        }
    }

    pub fn to_strategy(&self) -> Result<QuantumStrategy> {
        let scenario = Scenario::new(self.players, self.inputs.clone(), self.outputs)?;
        let full: usize = self.dims.iter().product();
        let state = match self.state_kind.as_str() {
            "vector" => State::Vector(
                self.state_re
                    .iter()
                    .zip(&self.state_im)
                    .map(|(&re, &im)| C64::new(re, im))
                    .collect(),
            ),
            "density" => {
                let mut m = CMatrix::zeros(full);
                for i in 0..full {
                    for j in 0..full {
                        m[(i, j)] =
                            C64::new(self.state_re[i * full + j], self.state_im[i * full + j]);
                    }
                }
                State::Density(m)
            }
            other => {
                return Err(Error::Parse(format!("unknown state kind {other:?}")));
            }
        };
        let mut measurements = Vec::with_capacity(self.players);
        for (k, (res, ims)) in self.effects_re.iter().zip(&self.effects_im).enumerate() {
            let d = self.dims[k];
            let mut per_input = Vec::new();
            for (res_i, ims_i) in res.iter().zip(ims) {
                let mut effects = Vec::new();
                for (re, im) in res_i.iter().zip(ims_i) {
                    if re.len() != d * d || im.len() != d * d {
                        return Err(Error::Parse("effect matrix size mismatch".into()));
                    }
                    let mut m = CMatrix::zeros(d);
                    for idx in 0..d * d {
                        m[(idx / d, idx % d)] = C64::new(re[idx], im[idx]);
                    }
                    effects.push(m);
                }
                per_input.push(effects);
            }
            measurements.push(per_input);
        }
        QuantumStrategy::new(scenario, self.dims.clone(), state, measurements)
    }
}
