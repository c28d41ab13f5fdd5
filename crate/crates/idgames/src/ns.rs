//! The no-signaling polytope: exact LP optimum, vertex tests,
//! decomposability, and the local-polytope facet check.
//!
//! A box is no-signaling when, for every proper subset of players, the
//! marginal distribution of their outputs does not depend on the other
//! players' inputs. The constraint system materializes one equality row per
//! (subset, subset inputs, subset outputs, non-baseline complement context);
//! many rows are redundant, which the simplex tolerates, and a maximal
//! independent subset is precomputed once per scenario so census runs do not
//! re-reduce the same matrix thousands of times.

use crate::classical::optimal_classical;
use crate::exact::{FractionDoc, Rational};
use crate::game::{
    decode_input, decode_output, encode_input, encode_output, winning_probability,
    DeterministicStrategy, ExactBox, FloatBox, GameFunction, InputDistribution, Scenario,
};
use crate::lp::{self, LpSolution, StandardLp};
use crate::{Error, Result};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Equality constraints cutting the no-signaling polytope out of the
/// nonnegative orthant: normalization per joint input, then the marginal
/// equalities. Coefficients are all 0 or +-1.
#[derive(Debug, Clone)]
pub struct NsConstraintSystem {
    scenario: Scenario,
    rows: Vec<Vec<i64>>,
    rhs: Vec<i64>,
    normalization_rows: usize,
    independent: Vec<usize>,
}

impl NsConstraintSystem {
    pub fn build(scenario: &Scenario) -> Self {
        let s = scenario;
        let n = s.players();
        let joint_in = s.joint_inputs();
        let joint_out = s.joint_outputs();
        let vars = joint_in * joint_out;
        let idx = |x: usize, y: usize| x * joint_out + y;

        let mut rows: Vec<Vec<i64>> = Vec::new();
        let mut rhs: Vec<i64> = Vec::new();

        for x in 0..joint_in {
            let mut row = vec![0i64; vars];
            for y in 0..joint_out {
                row[idx(x, y)] = 1;
            }
            rows.push(row);
            rhs.push(1);
        }
        let normalization_rows = rows.len();

        // For each proper nonempty subset S of players, the marginal of S's
        // outputs at fixed S-inputs must agree across every assignment of
        // the complement's inputs; we pin each context to the all-zeros
        // baseline.
        for subset in 1..(1u32 << n) - 1 {
            let members: Vec<usize> = (0..n).filter(|k| subset >> k & 1 == 1).collect();
            let others: Vec<usize> = (0..n).filter(|k| subset >> k & 1 == 0).collect();
            let sub_in: usize = members.iter().map(|&k| s.input_count(k)).product();
            let sub_out: usize = members.iter().map(|_| s.outputs()).product();
            let ctx_count: usize = others.iter().map(|&k| s.input_count(k)).product();
            let free_out: usize = others.iter().map(|_| s.outputs()).product();

            for xs in 0..sub_in {
                let mut x_tuple = vec![0usize; n];
                let mut rest = xs;
                for &k in &members {
                    x_tuple[k] = rest % s.input_count(k);
                    rest /= s.input_count(k);
                }
                for ys in 0..sub_out {
                    let mut y_members = vec![0usize; n];
                    let mut rest = ys;
                    for &k in &members {
                        y_members[k] = rest % s.outputs();
                        rest /= s.outputs();
                    }
                    for ctx in 1..ctx_count {
                        let mut row = vec![0i64; vars];
                        for (sign, context) in [(1i64, ctx), (-1, 0)] {
                            let mut x_full = x_tuple.clone();
                            let mut rest = context;
                            for &k in &others {
                                x_full[k] = rest % s.input_count(k);
                                rest /= s.input_count(k);
                            }
                            let xi = encode_input(&x_full, s).expect("in range");
                            for yfree in 0..free_out {
                                let mut y_full = y_members.clone();
                                let mut rest = yfree;
                                for &k in &others {
                                    y_full[k] = rest % s.outputs();
                                    rest /= s.outputs();
                                }
                                let yi = encode_output(&y_full, s).expect("in range");
                                row[idx(xi, yi)] += sign;
                            }
                        }
                        rows.push(row);
                        rhs.push(0);
                    }
                }
            }
        }

        let independent = lp::independent_rows(&rows);
        NsConstraintSystem {
            scenario: s.clone(),
            rows,
            rhs,
            normalization_rows,
            independent,
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn variable_count(&self) -> usize {
        self.scenario.joint_inputs() * self.scenario.joint_outputs()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn normalization_row_count(&self) -> usize {
        self.normalization_rows
    }

    pub fn independent_row_count(&self) -> usize {
        self.independent.len()
    }

    fn reduced_lp(&self, objective: Vec<i64>) -> StandardLp {
        StandardLp {
            rows: self
                .independent
                .iter()
                .map(|&i| self.rows[i].clone())
                .collect(),
            rhs: self.independent.iter().map(|&i| self.rhs[i]).collect(),
            objective,
        }
    }

    /// Exact check of every constraint row (normalization included).
    pub fn is_satisfied_exactly(&self, b: &ExactBox) -> bool {
        if b.scenario() != &self.scenario {
            return false;
        }
        for (row, &target) in self.rows.iter().zip(&self.rhs) {
            let mut acc = Rational::zero();
            for (j, &coef) in row.iter().enumerate() {
                if coef != 0 {
                    acc += Rational::from_integer(coef.into()) * &b.entries()[j];
                }
            }
            if acc != Rational::from_integer(target.into()) {
                return false;
            }
        }
        true
    }

    /// Tolerance-based variant for float boxes (the quantum side).
    pub fn is_satisfied_approx(&self, b: &FloatBox, tol: f64) -> bool {
        if b.scenario() != &self.scenario {
            return false;
        }
        for (row, &target) in self.rows.iter().zip(&self.rhs) {
            let mut acc = 0.0;
            for (j, &coef) in row.iter().enumerate() {
                if coef != 0 {
                    acc += coef as f64 * b.entries()[j];
                }
            }
            if (acc - target as f64).abs() > tol {
                return false;
            }
        }
        true
    }
}

/// Builds the constraint system for a scenario.
pub fn build_constraints(s: &Scenario) -> NsConstraintSystem {
    NsConstraintSystem::build(s)
}

/// Dual certificate attached to every LP optimum: multipliers for the
/// independent rows, verified by exact strong duality against the original
/// integer data.
#[derive(Debug, Clone)]
pub struct NsCertificate {
    pub duals: Vec<Rational>,
    pub verified: bool,
}

/// Exact no-signaling optimum with a vertex witness.
#[derive(Debug, Clone)]
pub struct NsResult {
    pub value: Rational,
    pub witness: ExactBox,
    pub certificate: NsCertificate,
}

/// Serializable form: exact fraction plus the witness as a dense fraction
/// array over (joint input, joint output).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NsResultDoc {
    pub value: FractionDoc,
    pub witness: Vec<FractionDoc>,
}

impl NsResult {
    pub fn to_doc(&self) -> NsResultDoc {
        NsResultDoc {
            value: FractionDoc::of(&self.value),
            witness: self.witness.entries().iter().map(FractionDoc::of).collect(),
        }
    }
}

/// Maximal winning probability over no-signaling boxes (uniform inputs),
/// solved by exact rational simplex; builds the constraint system on the
/// fly. Census code should pre-build the system and call
/// [`optimal_ns_with`].
pub fn optimal_ns(f: &GameFunction) -> Result<NsResult> {
    let sys = NsConstraintSystem::build(f.scenario());
    optimal_ns_with(f, &sys)
}

pub fn optimal_ns_with(f: &GameFunction, sys: &NsConstraintSystem) -> Result<NsResult> {
    if f.scenario() != sys.scenario() {
        return Err(Error::ScenarioMismatch(
            "game and constraint system have different scenarios".into(),
        ));
    }
    let s = f.scenario();
    let joint_in = s.joint_inputs();
    let joint_out = s.joint_outputs();

    // Maximize sum_x p(f(x)|x); the uniform 1/N input weight is applied
    // after solving so the LP data stays integral.
    let mut objective = vec![0i64; joint_in * joint_out];
    for x in 0..joint_in {
        objective[x * joint_out + f.output_index(x)] = 1;
    }
    let lp = sys.reduced_lp(objective);
    let sol: LpSolution = lp::solve(&lp)?;

    let verified = lp::verify_certificate(&lp, &sol);
    if !verified {
        return Err(Error::Parse(
            "internal error: LP certificate failed verification".into(),
        ));
    }

    // Basic feasible solution of a full-row-rank system: the witness is a
    // vertex, with support confined to the basis.
    debug_assert!(sol
        .primal
        .iter()
        .enumerate()
        .all(|(j, v)| v.is_zero() || sol.basis.contains(&j)));

    let witness = ExactBox::new(s.clone(), sol.primal.clone())?;
    let value = sol.value / Rational::from_integer((joint_in as i64).into());

    debug_assert!(sys.is_satisfied_exactly(&witness));
    debug_assert_eq!(
        winning_probability(f, &witness, &InputDistribution::uniform(s))?,
        value
    );

    Ok(NsResult {
        value,
        witness,
        certificate: NsCertificate {
            duals: sol.dual,
            verified,
        },
    })
}

/// True iff all marginal equalities hold exactly.
pub fn is_no_signaling(b: &ExactBox) -> bool {
    NsConstraintSystem::build(b.scenario()).is_satisfied_exactly(b)
}

/// Tolerance-based check for float boxes, tolerance per constraint row.
pub fn is_no_signaling_approx(b: &FloatBox, tol: f64) -> bool {
    NsConstraintSystem::build(b.scenario()).is_satisfied_approx(b, tol)
}

/// Vertex test: the box is an extremal point of the no-signaling polytope
/// iff the active constraints (all equality rows plus the tight
/// nonnegativity rows) have full column rank.
pub fn is_extremal(b: &ExactBox) -> Result<bool> {
    let sys = NsConstraintSystem::build(b.scenario());
    if !sys.is_satisfied_exactly(b) {
        return Err(Error::Parse("box is not no-signaling".into()));
    }
    let vars = sys.variable_count();
    let mut active: Vec<Vec<i64>> = sys.rows.clone();
    for (j, entry) in b.entries().iter().enumerate() {
        if entry.is_zero() {
            let mut row = vec![0i64; vars];
            row[j] = 1;
            active.push(row);
        }
    }
    Ok(lp::rank(&active) == vars)
}

/// A split of a tripartite box into a bipartite factor and a deterministic
/// lone player.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// The player whose output is a function of their own input.
    pub lone_player: usize,
    /// That function, one output per input.
    pub lone_map: Vec<u32>,
    /// The box shared by the other two players (in ascending player order).
    pub pair_box: ExactBox,
}

/// Checks whether a 3-player box factors as (bipartite box on some pair)
/// x (deterministic box on the remaining player), trying all 3 pair choices
/// and every deterministic output map; the bipartite factor is recovered by
/// conditioning on the lone player's baseline input.
pub fn is_decomposable(b: &ExactBox) -> Result<Option<Decomposition>> {
    let s = b.scenario();
    if s.players() != 3 {
        return Err(Error::WrongPlayerCount {
            expected: 3,
            got: s.players(),
        });
    }
    for lone in 0..3 {
        let pair: Vec<usize> = (0..3).filter(|&k| k != lone).collect();
        let pair_scenario = Scenario::new(
            2,
            vec![s.input_count(pair[0]), s.input_count(pair[1])],
            s.outputs(),
        )?;
        let map_count = (s.outputs() as u64).pow(s.input_count(lone) as u32);
        'maps: for code in 0..map_count {
            let mut rest = code;
            let mut lone_map = Vec::with_capacity(s.input_count(lone));
            for _ in 0..s.input_count(lone) {
                lone_map.push((rest % s.outputs() as u64) as u32);
                rest /= s.outputs() as u64;
            }

            // Candidate bipartite factor from the lone player's baseline
            // input, then exact verification of the full product structure.
            let mut pair_entries = vec![
                Rational::zero();
                pair_scenario.joint_inputs() * pair_scenario.joint_outputs()
            ];
            for xp in 0..pair_scenario.joint_inputs() {
                let xp_t = decode_input(xp, &pair_scenario);
                let mut x_full = vec![0usize; 3];
                x_full[pair[0]] = xp_t[0];
                x_full[pair[1]] = xp_t[1];
                x_full[lone] = 0;
                let xi = encode_input(&x_full, s)?;
                for yp in 0..pair_scenario.joint_outputs() {
                    let yp_t = decode_output(yp, &pair_scenario);
                    let mut y_full = vec![0usize; 3];
                    y_full[pair[0]] = yp_t[0];
                    y_full[pair[1]] = yp_t[1];
                    y_full[lone] = lone_map[0] as usize;
                    let yi = encode_output(&y_full, s)?;
                    pair_entries[xp * pair_scenario.joint_outputs() + yp] = b.entry(xi, yi).clone();
                }
            }

            for xi in 0..s.joint_inputs() {
                let x = decode_input(xi, s);
                let xp = encode_input(&[x[pair[0]], x[pair[1]]], &pair_scenario)?;
                for yi in 0..s.joint_outputs() {
                    let y = decode_output(yi, s);
                    let expected = if y[lone] == lone_map[x[lone]] as usize {
                        let yp = encode_output(&[y[pair[0]], y[pair[1]]], &pair_scenario)?;
                        pair_entries[xp * pair_scenario.joint_outputs() + yp].clone()
                    } else {
                        Rational::zero()
                    };
                    if b.entry(xi, yi) != &expected {
                        continue 'maps;
                    }
                }
            }

            let pair_box = ExactBox::new(pair_scenario, pair_entries)?;
            return Ok(Some(Decomposition {
                lone_player: lone,
                lone_map,
                pair_box,
            }));
        }
    }
    Ok(None)
}

/// Whether the game's classical bound is a facet of the local polytope:
/// the deterministic boxes attaining the optimum must span an affine
/// subspace of dimension exactly one less than all deterministic boxes.
pub fn facet_check(f: &GameFunction) -> Result<bool> {
    let s = f.scenario();
    let joint_in = s.joint_inputs();
    let joint_out = s.joint_outputs();
    let vars = joint_in * joint_out;

    let mut strategy_counts: u64 = 1;
    for k in 0..s.players() {
        strategy_counts = strategy_counts
            .checked_mul((s.outputs() as u64).pow(s.input_count(k) as u32))
            .filter(|&v| v <= 1 << 20)
            .ok_or_else(|| Error::TooLarge("deterministic box enumeration".into()))?;
    }

    let best = optimal_classical(f)?.value;
    let mut all_vectors: Vec<Vec<i64>> = Vec::with_capacity(strategy_counts as usize);
    let mut optimal_vectors: Vec<Vec<i64>> = Vec::new();
    for index in 0..strategy_counts {
        let mut rest = index;
        let mut maps = Vec::with_capacity(s.players());
        for k in 0..s.players() {
            let count = (s.outputs() as u64).pow(s.input_count(k) as u32);
            let mut code = rest % count;
            rest /= count;
            let mut map = Vec::with_capacity(s.input_count(k));
            for _ in 0..s.input_count(k) {
                map.push((code % s.outputs() as u64) as u32);
                code /= s.outputs() as u64;
            }
            maps.push(map);
        }
        let d = DeterministicStrategy::new(s.clone(), maps)?;
        let mut v = vec![0i64; vars];
        let mut wins = 0usize;
        for x in 0..joint_in {
            let y = d.output_index(x);
            v[x * joint_out + y] = 1;
            if y == f.output_index(x) {
                wins += 1;
            }
        }
        let value = Rational::new((wins as i64).into(), (joint_in as i64).into());
        if value == best {
            optimal_vectors.push(v.clone());
        }
        all_vectors.push(v);
    }

    let affine_dim = |vectors: &[Vec<i64>]| -> usize {
        if vectors.len() <= 1 {
            return 0;
        }
        let base = &vectors[0];
        let diffs: Vec<Vec<i64>> = vectors[1..]
            .iter()
            .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        lp::rank(&diffs)
    };

    let full_dim = affine_dim(&all_vectors);
    let opt_dim = affine_dim(&optimal_vectors);
    Ok(opt_dim + 1 == full_dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use crate::games;

    #[test]
    fn variable_counts() {
        assert_eq!(
            NsConstraintSystem::build(&Scenario::symmetric(2, 2, 2).unwrap()).variable_count(),
            16
        );
        assert_eq!(
            NsConstraintSystem::build(&Scenario::symmetric(2, 3, 2).unwrap()).variable_count(),
            36
        );
        assert_eq!(
            NsConstraintSystem::build(&Scenario::symmetric(3, 2, 2).unwrap()).variable_count(),
            64
        );
    }

    #[test]
    fn uniform_box_satisfies_every_constraint_row() {
        for s in [
            Scenario::symmetric(2, 3, 2).unwrap(),
            Scenario::symmetric(3, 2, 2).unwrap(),
        ] {
            let sys = NsConstraintSystem::build(&s);
            assert!(sys.is_satisfied_exactly(&ExactBox::uniform(s.clone())));
            assert!(sys.independent_row_count() <= sys.row_count());
            assert!(sys.normalization_row_count() == s.joint_inputs());
        }
    }

    #[test]
    fn pr_box_is_feasible_and_extremal() {
        let b = games::pr_box();
        let sys = NsConstraintSystem::build(b.scenario());
        assert!(sys.is_satisfied_exactly(&b));
        assert!(is_no_signaling(&b));
        assert!(is_extremal(&b).unwrap());
    }

    #[test]
    fn deterministic_boxes_do_not_signal_and_are_extremal() {
        let s = Scenario::symmetric(2, 3, 2).unwrap();
        let d = DeterministicStrategy::new(s.clone(), vec![vec![0, 1, 0], vec![1, 0, 0]]).unwrap();
        let b = ExactBox::from_deterministic(&d);
        assert!(is_no_signaling(&b));
        assert!(is_extremal(&b).unwrap());
    }

    #[test]
    fn uniform_box_is_not_extremal() {
        let b = ExactBox::uniform(Scenario::symmetric(2, 2, 2).unwrap());
        assert!(is_no_signaling(&b));
        assert!(!is_extremal(&b).unwrap());
    }

    #[test]
    fn signaling_box_is_rejected() {
        // Player 1's output copies player 2's input.
        let s = Scenario::symmetric(2, 2, 2).unwrap();
        let mut entries = vec![Rational::zero(); 16];
        for x in 0..4 {
            let x2 = x >> 1;
            let y = x2; // y1 = x2, y2 = 0
            entries[x * 4 + y] = rat_int(1);
        }
        let b = ExactBox::new(s, entries).unwrap();
        assert!(!is_no_signaling(&b));
    }

    #[test]
    fn ns_value_of_first_example_is_half() {
        let r = optimal_ns(&games::three_input_example()).unwrap();
        assert_eq!(r.value, rat(1, 2));
        assert!(r.certificate.verified);
    }

    #[test]
    fn ns_value_of_addition_game_is_half() {
        let r = optimal_ns(&games::addition()).unwrap();
        assert_eq!(r.value, rat(1, 2));
    }

    #[test]
    fn symmetric_three_input_game_bounds() {
        let f = games::symmetric_three_input();
        assert_eq!(optimal_classical(&f).unwrap().value, rat(4, 9));
        assert_eq!(optimal_ns(&f).unwrap().value, rat(1, 2));
    }

    #[test]
    fn ns_value_of_class25_is_third() {
        let r = optimal_ns(&games::class25()).unwrap();
        assert_eq!(r.value, rat(1, 3));
    }

    #[test]
    fn ns_value_of_constant_game_is_one() {
        let s = Scenario::symmetric(2, 2, 2).unwrap();
        let f = GameFunction::from_table(s, vec![2; 4]).unwrap();
        let r = optimal_ns(&f).unwrap();
        assert_eq!(r.value, rat_int(1));
    }

    #[test]
    fn witness_is_a_vertex() {
        let r = optimal_ns(&games::three_input_example()).unwrap();
        assert!(is_extremal(&r.witness).unwrap());
    }

    #[test]
    fn tripartite_witness_decomposes_as_described() {
        // The optimal vertex splits into a box on players 1 and 2 plus
        // player 3 answering 0 on every input; the bipartite factor is the
        // PR box for the complemented-AND condition y1 ^ y2 = !x1 & !x2.
        let r = optimal_ns(&games::tripartite()).unwrap();
        assert_eq!(r.value, rat(1, 2));
        assert!(is_extremal(&r.witness).unwrap());
        let d = is_decomposable(&r.witness).unwrap().expect("decomposable");
        assert_eq!(d.lone_player, 2);
        assert_eq!(d.lone_map, vec![0, 0]);
        for x in 0..4usize {
            let (x1, x2) = (x & 1, x >> 1);
            for y in 0..4usize {
                let (y1, y2) = (y & 1, y >> 1);
                let expected = if y1 ^ y2 == (1 - x1) & (1 - x2) {
                    rat(1, 2)
                } else {
                    rat(0, 1)
                };
                assert_eq!(d.pair_box.entry(x, y), &expected);
            }
        }
    }

    #[test]
    fn class25_witness_is_the_printed_box() {
        // Bland's rule pivoting from the canonical initial basis lands
        // exactly on the published table for this game.
        let r = optimal_ns(&games::class25()).unwrap();
        assert_eq!(r.value, rat(1, 3));
        assert_eq!(r.witness, games::class25_box());
    }

    #[test]
    fn class25_box_checks() {
        let b = games::class25_box();
        assert!(is_no_signaling(&b));
        assert!(is_extremal(&b).unwrap());
        assert!(is_decomposable(&b).unwrap().is_none());
    }

    #[test]
    fn pr_box_with_deterministic_third_player_is_decomposable() {
        // PR box on players 1,2; player 3 answers 0.
        let s = Scenario::symmetric(3, 2, 2).unwrap();
        let pr = games::pr_box();
        let mut entries = vec![Rational::zero(); 64];
        for x in 0..8 {
            let (x1, x2) = (x & 1, (x >> 1) & 1);
            let xp = x1 + 2 * x2;
            for y in 0..8 {
                let (y1, y2, y3) = (y & 1, (y >> 1) & 1, y >> 2);
                if y3 == 0 {
                    entries[x * 8 + y] = pr.entry(xp, y1 + 2 * y2).clone();
                }
            }
        }
        let b = ExactBox::new(s, entries).unwrap();
        assert!(is_no_signaling(&b));
        let d = is_decomposable(&b).unwrap().expect("decomposable");
        assert_eq!(d.lone_player, 2);
        assert_eq!(d.lone_map, vec![0, 0]);
        assert_eq!(d.pair_box, pr);
    }

    #[test]
    fn fully_deterministic_tripartite_box_is_decomposable() {
        let s = Scenario::symmetric(3, 2, 2).unwrap();
        let d = DeterministicStrategy::new(s.clone(), vec![vec![0, 1], vec![1, 1], vec![0, 0]])
            .unwrap();
        let b = ExactBox::from_deterministic(&d);
        assert!(is_decomposable(&b).unwrap().is_some());
    }

    #[test]
    fn facet_game_defines_a_facet_and_first_example_does_not() {
        assert!(facet_check(&games::facet()).unwrap());
        assert!(!facet_check(&games::three_input_example()).unwrap());
    }

    #[test]
    fn constant_game_is_not_a_facet() {
        let s = Scenario::symmetric(2, 2, 2).unwrap();
        let f = GameFunction::from_table(s, vec![0; 4]).unwrap();
        assert!(!facet_check(&f).unwrap());
    }

    #[test]
    fn parity_box_lower_bound_holds() {
        // For binary outputs the parity box is always feasible, so the NS
        // optimum is at least 2^(1-n).
        let f = games::tripartite();
        let r = optimal_ns(&f).unwrap();
        assert!(r.value >= rat(1, 4));
    }
}
