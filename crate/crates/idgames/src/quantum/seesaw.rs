//! Seesaw alternating optimization: lower bounds on the quantum value of
//! binary-output games over fixed component dimensions.
//!
//! Each pass holds everything but one object fixed and replaces it by the
//! exact best response, so the objective is monotone nondecreasing:
//!
//! * a measurement `A[k][x]` is replaced by the spectral sign of its
//!   conditional payoff operator (the objective is linear in A with
//!   -I <= A <= I, maximized by sign(M));
//! * the shared state is replaced by the top eigenvector of the full game
//!   operator.
//!
//! Restarts draw fresh random observables and states from per-restart
//! streams derived from the master seed, so results are reproducible and
//! independent of the thread count; the best restart wins, lowest index on
//! ties.

use super::linalg::{expectation, normalize, spectral_sign, top_eigenvector, CMatrix, C64};
use super::{Observable, QuantumStrategy, State};
use crate::game::{decode_input, GameFunction};
use crate::util::splitmix64;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const EIG_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SeesawOptions {
    pub dims: Vec<usize>,
    pub restarts: usize,
    pub seed: u64,
    /// Stop when an iteration improves the objective by less than this.
    pub tol: f64,
    pub max_iters: usize,
    /// Restart-level parallelism; 1 runs inline.
    pub threads: usize,
}

impl SeesawOptions {
    pub fn new(dims: Vec<usize>) -> Self {
        SeesawOptions {
            dims,
            restarts: 20,
            seed: 0,
            tol: 1e-10,
            max_iters: 10_000,
            threads: 1,
        }
    }

    pub fn restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }
}

#[derive(Debug, Clone)]
pub struct SeesawOutcome {
    /// Best value found, reproduced through the returned strategy's box.
    pub value: f64,
    pub strategy: QuantumStrategy,
    /// False when the best restart hit the iteration cap before its
    /// improvement dropped below tolerance.
    pub converged: bool,
    /// False if any accepted iteration decreased the objective by more than
    /// numerical noise.
    pub monotone: bool,
    pub iterations: usize,
    pub best_restart: usize,
}

struct RestartRun {
    value: f64,
    observables: Vec<Vec<CMatrix>>,
    psi: Vec<C64>,
    converged: bool,
    monotone: bool,
    iterations: usize,
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<C64> {
    // Box-Muller pairs make the direction rotation-invariant.
    let mut v = Vec::with_capacity(dim);
    for _ in 0..dim {
        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = (-2.0 * u1.ln()).sqrt();
        v.push(C64::new(r * u2.cos(), r * u2.sin()));
    }
    normalize(&v)
}

fn random_observable(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..dim {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    spectral_sign(&m, EIG_TOL)
}

struct Workspace<'a> {
    f: &'a GameFunction,
    dims: &'a [usize],
    strides: Vec<usize>,
    full: usize,
    /// Per joint input, the decoded input tuple.
    inputs: Vec<Vec<usize>>,
    weight: f64,
}

impl<'a> Workspace<'a> {
    fn new(f: &'a GameFunction, dims: &'a [usize]) -> Self {
        let s = f.scenario();
        let n = s.players();
        let mut strides = vec![1usize; n];
        for k in 1..n {
            strides[k] = strides[k - 1] * dims[k - 1];
        }
        let full = strides[n - 1] * dims[n - 1];
        let inputs = (0..s.joint_inputs())
            .map(|xi| decode_input(xi, s))
            .collect();
        Workspace {
            f,
            dims,
            strides,
            full,
            inputs,
            weight: 1.0 / s.joint_inputs() as f64,
        }
    }

    fn effect(&self, obs: &CMatrix, outcome: usize) -> CMatrix {
        let id = CMatrix::identity(obs.dim());
        if outcome == 0 {
            id.add(obs).scale_re(0.5)
        } else {
            id.sub(obs).scale_re(0.5)
        }
    }

    /// The full game operator sum_x q(x) (x)_k E_{k, x_k, f_k(x)}.
    fn game_operator(&self, observables: &[Vec<CMatrix>]) -> CMatrix {
        let n = self.dims.len();
        let mut w = CMatrix::zeros(self.full);
        for (xi, x) in self.inputs.iter().enumerate() {
            let mut acc = self.effect(&observables[0][x[0]], self.f.component(0, xi));
            for k in 1..n {
                let ek = self.effect(&observables[k][x[k]], self.f.component(k, xi));
                acc = ek.kron(&acc);
            }
            w = w.add(&acc.scale_re(self.weight));
        }
        w
    }

    /// Conditional payoff operator for player k at input a: the Hermitian
    /// d_k x d_k matrix M with tr(A M) equal to the A-dependent part of the
    /// objective (up to a positive constant).
    fn payoff_operator(
        &self,
        observables: &[Vec<CMatrix>],
        psi: &[C64],
        k: usize,
        a: usize,
    ) -> CMatrix {
        let n = self.dims.len();
        let dk = self.dims[k];
        let mut m = CMatrix::zeros(dk);
        for (xi, x) in self.inputs.iter().enumerate() {
            if x[k] != a {
                continue;
            }
            let sign = if self.f.component(k, xi) == 0 {
                1.0
            } else {
                -1.0
            };
            let coef = sign * self.weight;
            // Gather the other players' chosen effects once.
            let others: Vec<(usize, CMatrix)> = (0..n)
                .filter(|&l| l != k)
                .map(|l| {
                    (
                        l,
                        self.effect(&observables[l][x[l]], self.f.component(l, xi)),
                    )
                })
                .collect();
            for i in 0..self.full {
                let pi = psi[i];
                if pi.norm_sqr() == 0.0 {
                    continue;
                }
                let ik = (i / self.strides[k]) % dk;
                for j in 0..self.full {
                    let pj = psi[j];
                    if pj.norm_sqr() == 0.0 {
                        continue;
                    }
                    let jk = (j / self.strides[k]) % dk;
                    let mut w = C64::new(coef, 0.0);
                    for (l, e) in &others {
                        let il = (i / self.strides[*l]) % self.dims[*l];
                        let jl = (j / self.strides[*l]) % self.dims[*l];
                        w *= e[(il, jl)];
                        if w.norm_sqr() == 0.0 {
                            break;
                        }
                    }
                    if w.norm_sqr() != 0.0 {
                        m[(jk, ik)] += pi.conj() * w * pj;
                    }
                }
            }
        }
        m
    }
}

fn run_restart(
    ws: &Workspace,
    opts: &SeesawOptions,
    fixed_state: Option<&[C64]>,
    restart: usize,
) -> RestartRun {
    let s = ws.f.scenario();
    let n = s.players();
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(opts.seed, restart as u64));
    let mut observables: Vec<Vec<CMatrix>> = (0..n)
        .map(|k| {
            (0..s.input_count(k))
                .map(|_| random_observable(&mut rng, ws.dims[k]))
                .collect()
        })
        .collect();
    let mut psi = match fixed_state {
        Some(v) => v.to_vec(),
        None => random_unit(&mut rng, ws.full),
    };

    let mut value = expectation(&ws.game_operator(&observables), &psi);
    let mut converged = false;
    let mut monotone = true;
    let mut iterations = 0;
    for _ in 0..opts.max_iters {
        iterations += 1;
        for k in 0..n {
            for a in 0..s.input_count(k) {
                let m = ws.payoff_operator(&observables, &psi, k, a);
                observables[k][a] = spectral_sign(&m, EIG_TOL);
            }
        }
        let w = ws.game_operator(&observables);
        if fixed_state.is_none() {
            let (_, top) = top_eigenvector(&w, EIG_TOL);
            psi = top;
        }
        let new_value = expectation(&w, &psi);
        if new_value < value - 1e-9 {
            monotone = false;
        }
        let improvement = new_value - value;
        value = new_value;
        if improvement.abs() < opts.tol {
            converged = true;
            break;
        }
    }
    RestartRun {
        value,
        observables,
        psi,
        converged,
        monotone,
        iterations,
    }
}

fn run(
    f: &GameFunction,
    opts: &SeesawOptions,
    fixed_state: Option<&[C64]>,
) -> Result<SeesawOutcome> {
    let s = f.scenario();
    if s.outputs() != 2 {
        return Err(Error::NonBinaryOutputs(s.outputs()));
    }
    if opts.dims.len() != s.players() {
        return Err(Error::InvalidStrategy(format!(
            "{} dimensions for {} players",
            opts.dims.len(),
            s.players()
        )));
    }
    if opts.dims.contains(&0) {
        return Err(Error::InvalidStrategy("zero-dimensional component".into()));
    }
    if opts.restarts == 0 {
        return Err(Error::InvalidStrategy("need at least one restart".into()));
    }
    let full: usize = opts.dims.iter().product();
    if let Some(v) = fixed_state {
        if v.len() != full {
            return Err(Error::InvalidStrategy(format!(
                "fixed state has dimension {}, components give {full}",
                v.len()
            )));
        }
    }

    let ws = Workspace::new(f, &opts.dims);
    let runs: Vec<RestartRun> = if opts.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::Parse(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..opts.restarts)
                .into_par_iter()
                .map(|r| run_restart(&ws, opts, fixed_state, r))
                .collect()
        })
    } else {
        (0..opts.restarts)
            .map(|r| run_restart(&ws, opts, fixed_state, r))
            .collect()
    };

    let mut best = 0usize;
    for (i, r) in runs.iter().enumerate() {
        if r.value > runs[best].value {
            best = i;
        }
    }
    let chosen = &runs[best];
    let observables = chosen
        .observables
        .iter()
        .map(|per_input| {
            per_input
                .iter()
                .map(|m| Observable::new(m.clone()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let strategy = QuantumStrategy::from_observables(
        s.clone(),
        opts.dims.clone(),
        State::Vector(chosen.psi.clone()),
        observables,
    )?;
    // The objective must be reproducible through the Born box.
    let reproduced = strategy.value(f)?;
    if (reproduced - chosen.value).abs() > 1e-9 {
        return Err(Error::InvalidStrategy(format!(
            "seesaw value {} not reproduced by its box ({reproduced})",
            chosen.value
        )));
    }
    Ok(SeesawOutcome {
        value: reproduced,
        strategy,
        converged: chosen.converged,
        monotone: runs.iter().all(|r| r.monotone),
        iterations: chosen.iterations,
        best_restart: best,
    })
}

/// Seesaw over both the state and the measurements.
pub fn seesaw(f: &GameFunction, opts: &SeesawOptions) -> Result<SeesawOutcome> {
    run(f, opts, None)
}

/// Seesaw over measurements only, with the shared state held fixed; a lower
/// bound on the best value achievable with that state.
pub fn seesaw_fixed_state(
    f: &GameFunction,
    state: &[C64],
    opts: &SeesawOptions,
) -> Result<SeesawOutcome> {
    run(f, opts, Some(state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::to_f64;
    use crate::games;
    use crate::quantum::strategies::phi_plus;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn addition_game_reaches_the_tsirelson_level() {
        let f = games::addition();
        let out = seesaw(&f, &SeesawOptions::new(vec![2, 2]).restarts(20)).unwrap();
        assert!(out.monotone);
        assert!(
            out.value >= (2.0 + SQRT2) / 8.0 - 1e-6,
            "value {}",
            out.value
        );
        // Lower bound can never exceed the no-signaling optimum.
        let ns = crate::ns::optimal_ns(&f).unwrap();
        assert!(out.value <= to_f64(&ns.value) + 1e-9);
    }

    #[test]
    fn dimension_one_components_reproduce_the_classical_optimum() {
        let f = games::three_input_example();
        let out = seesaw(&f, &SeesawOptions::new(vec![1, 1]).restarts(30)).unwrap();
        let cl = crate::classical::optimal_classical(&f).unwrap();
        assert!((out.value - to_f64(&cl.value)).abs() < 1e-9);
    }

    #[test]
    fn product_state_restricts_to_the_classical_optimum() {
        let f = games::three_input_example();
        // |00> as the fixed shared state.
        let mut state = vec![C64::new(0.0, 0.0); 4];
        state[0] = C64::new(1.0, 0.0);
        let out =
            seesaw_fixed_state(&f, &state, &SeesawOptions::new(vec![2, 2]).restarts(30)).unwrap();
        let cl = crate::classical::optimal_classical(&f).unwrap();
        assert!((out.value - to_f64(&cl.value)).abs() < 1e-9);
    }

    #[test]
    fn three_input_example_seesaw_matches_the_explicit_strategy() {
        let f = games::three_input_example();
        let out = seesaw(&f, &SeesawOptions::new(vec![2, 2]).restarts(30)).unwrap();
        let explicit = (1.0 + 1.5 + (SQRT2 + 2.0) / 2.0) / 9.0;
        assert!((out.value - explicit).abs() < 1e-4, "value {}", out.value);
    }

    #[test]
    fn partial_entanglement_optimum_uses_a_partially_entangled_state() {
        use crate::quantum::linalg::hermitian_eigen;
        use crate::quantum::State;
        let f = games::partial_entanglement();
        let out = seesaw(&f, &SeesawOptions::new(vec![2, 2]).restarts(50)).unwrap();
        assert!((out.value - 4.1224 / 9.0).abs() < 1e-4);
        let State::Vector(psi) = out.strategy.state().clone() else {
            panic!("seesaw states are vectors");
        };
        // Schmidt probabilities via the reduced state of player 1
        // (index = i1 + 2*i2).
        let mut reduced = CMatrix::zeros(2);
        for i1 in 0..2 {
            for j1 in 0..2 {
                for i2 in 0..2 {
                    reduced[(i1, j1)] += psi[i1 + 2 * i2] * psi[j1 + 2 * i2].conj();
                }
            }
        }
        let (mut probs, _) = hermitian_eigen(&reduced, 1e-13);
        probs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Strictly between product (0, 1) and maximally entangled
        // (1/2, 1/2), with wide margins.
        assert!(probs[0] > 0.03 && probs[1] < 0.97, "schmidt {probs:?}");
        assert!(probs[1] - probs[0] > 0.1, "schmidt {probs:?}");
    }

    #[test]
    fn singlet_fixed_reaches_the_five_input_optimum() {
        let f = games::symmetric_five_input();
        let out = seesaw_fixed_state(
            &f,
            &crate::quantum::strategies::singlet(),
            &SeesawOptions::new(vec![2, 2]).restarts(20),
        )
        .unwrap();
        assert!((out.value - 10.295_084_9 / 25.0).abs() < 1e-4, "value {}", out.value);
    }

    #[test]
    fn fixed_phi_plus_matches_free_seesaw_on_the_addition_game() {
        let f = games::addition();
        let out = seesaw_fixed_state(
            &f,
            &phi_plus(),
            &SeesawOptions::new(vec![2, 2]).restarts(10),
        )
        .unwrap();
        assert!(out.value >= (2.0 + SQRT2) / 8.0 - 1e-6);
    }

    #[test]
    fn seeded_runs_are_reproducible_across_thread_counts() {
        let f = games::three_input_example();
        let a = seesaw(&f, &SeesawOptions::new(vec![2, 2]).restarts(6).seed(3)).unwrap();
        let b = seesaw(
            &f,
            &SeesawOptions::new(vec![2, 2])
                .restarts(6)
                .seed(3)
                .threads(2),
        )
        .unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.best_restart, b.best_restart);
    }

    #[test]
    fn nonbinary_outputs_are_rejected() {
        let s = crate::game::Scenario::symmetric(2, 2, 3).unwrap();
        let f = crate::game::GameFunction::from_table(s, vec![0; 4]).unwrap();
        assert!(seesaw(&f, &SeesawOptions::new(vec![2, 2])).is_err());
    }
}
