//! Two-player correlator expressions: constants, marginals <A_i>, <B_m> and
//! correlators <A_i B_m> with <A_i B_m> = p(a=b|i,m) - p(a!=b|i,m).
//!
//! Any binary-output two-player game value can be written in this form for
//! no-signaling boxes; the constructors below give the Bell functionals the
//! addition and facet games correspond to.

use crate::game::{encode_input, FloatBox, GameFunction};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorExpr {
    pub constant: f64,
    pub a_coef: Vec<f64>,
    pub b_coef: Vec<f64>,
    /// `corr[i][m]` multiplies <A_i B_m>.
    pub corr: Vec<Vec<f64>>,
}

impl CorrelatorExpr {
    pub fn zero(a_inputs: usize, b_inputs: usize) -> Self {
        CorrelatorExpr {
            constant: 0.0,
            a_coef: vec![0.0; a_inputs],
            b_coef: vec![0.0; b_inputs],
            corr: vec![vec![0.0; b_inputs]; a_inputs],
        }
    }

    /// The exact correlator expansion of a game's winning probability
    /// (uniform inputs): for every no-signaling box,
    /// `expr.evaluate(box) == winning_probability(f, box)`.
    pub fn from_game(f: &GameFunction) -> Result<Self> {
        let s = f.scenario();
        if s.players() != 2 {
            return Err(Error::WrongPlayerCount {
                expected: 2,
                got: s.players(),
            });
        }
        if s.outputs() != 2 {
            return Err(Error::NonBinaryOutputs(s.outputs()));
        }
        let (m1, m2) = (s.input_count(0), s.input_count(1));
        let norm = 1.0 / (4 * m1 * m2) as f64;
        let mut expr = CorrelatorExpr::zero(m1, m2);
        expr.constant = 0.25;
        for x1 in 0..m1 {
            for x2 in 0..m2 {
                let xi = encode_input(&[x1, x2], s)?;
                let sign1 = if f.component(0, xi) == 0 { 1.0 } else { -1.0 };
                let sign2 = if f.component(1, xi) == 0 { 1.0 } else { -1.0 };
                expr.a_coef[x1] += sign1 * norm;
                expr.b_coef[x2] += sign2 * norm;
                expr.corr[x1][x2] += sign1 * sign2 * norm;
            }
        }
        Ok(expr)
    }

    /// Evaluates against a two-player binary box. Marginals are read in the
    /// partner's first input context (contexts agree for no-signaling
    /// boxes).
    pub fn evaluate(&self, b: &FloatBox) -> Result<f64> {
        let s = b.scenario();
        if s.players() != 2 || s.outputs() != 2 {
            return Err(Error::ScenarioMismatch(
                "correlator expressions need two players and binary outputs".into(),
            ));
        }
        if self.a_coef.len() != s.input_count(0) || self.b_coef.len() != s.input_count(1) {
            return Err(Error::ScenarioMismatch(
                "expression and box have different input counts".into(),
            ));
        }
        let corr = |i: usize, m: usize| -> Result<f64> {
            let xi = encode_input(&[i, m], s)?;
            let mut acc = 0.0;
            for y1 in 0..2usize {
                for y2 in 0..2usize {
                    let sign = if (y1 + y2) % 2 == 0 { 1.0 } else { -1.0 };
                    acc += sign * b.entry(xi, y1 + 2 * y2);
                }
            }
            Ok(acc)
        };
        let mut total = self.constant;
        for (i, &coef) in self.a_coef.iter().enumerate() {
            if coef != 0.0 {
                let xi = encode_input(&[i, 0], s)?;
                let marg = b.entry(xi, 0) + b.entry(xi, 2) - b.entry(xi, 1) - b.entry(xi, 3);
                total += coef * marg;
            }
        }
        for (m, &coef) in self.b_coef.iter().enumerate() {
            if coef != 0.0 {
                let xi = encode_input(&[0, m], s)?;
                let marg = b.entry(xi, 0) + b.entry(xi, 1) - b.entry(xi, 2) - b.entry(xi, 3);
                total += coef * marg;
            }
        }
        for i in 0..self.a_coef.len() {
            for m in 0..self.b_coef.len() {
                let coef = self.corr[i][m];
                if coef != 0.0 {
                    total += coef * corr(i, m)?;
                }
            }
        }
        Ok(total)
    }

    fn add_scaled(&mut self, other: &CorrelatorExpr, scale: f64) {
        self.constant += other.constant * scale;
        for (a, b) in self.a_coef.iter_mut().zip(&other.a_coef) {
            *a += b * scale;
        }
        for (a, b) in self.b_coef.iter_mut().zip(&other.b_coef) {
            *a += b * scale;
        }
        for (row_a, row_b) in self.corr.iter_mut().zip(&other.corr) {
            for (a, b) in row_a.iter_mut().zip(row_b) {
                *a += b * scale;
            }
        }
    }
}

/// The CHSH block I_2^(i,j;m,n) = -<A_i B_m> + <A_i B_n> + <A_j B_m>
/// + <A_j B_n> over a 4-input scenario.
pub fn chsh_block(i: usize, j: usize, m: usize, n: usize, inputs: usize) -> CorrelatorExpr {
    let mut e = CorrelatorExpr::zero(inputs, inputs);
    e.corr[i][m] -= 1.0;
    e.corr[i][n] += 1.0;
    e.corr[j][m] += 1.0;
    e.corr[j][n] += 1.0;
    e
}

/// The Bell functional equal to the addition game's winning probability:
/// (-I2(0,1;0,1) + I2(2,3;0,1) + I2(0,1;2,3) - I2(2,3;2,3) + 16) / 64.
pub fn i_add() -> CorrelatorExpr {
    let mut e = CorrelatorExpr::zero(4, 4);
    e.constant = 16.0 / 64.0;
    e.add_scaled(&chsh_block(0, 1, 0, 1, 4), -1.0 / 64.0);
    e.add_scaled(&chsh_block(2, 3, 0, 1, 4), 1.0 / 64.0);
    e.add_scaled(&chsh_block(0, 1, 2, 3, 4), 1.0 / 64.0);
    e.add_scaled(&chsh_block(2, 3, 2, 3, 4), -1.0 / 64.0);
    e
}

/// The facet Bell expression: -I2(1,0;1,0) + I2(1,0;3,2) + I2(2,3;1,0)
/// + I2(2,3;3,2) - 2<A_3 B_0> - 2<A_3 B_2> + 2<A_2> + 2<A_3>.
pub fn i4422_6() -> CorrelatorExpr {
    let mut e = CorrelatorExpr::zero(4, 4);
    e.add_scaled(&chsh_block(1, 0, 1, 0, 4), -1.0);
    e.add_scaled(&chsh_block(1, 0, 3, 2, 4), 1.0);
    e.add_scaled(&chsh_block(2, 3, 1, 0, 4), 1.0);
    e.add_scaled(&chsh_block(2, 3, 3, 2, 4), 1.0);
    e.corr[3][0] -= 2.0;
    e.corr[3][2] -= 2.0;
    e.a_coef[2] += 2.0;
    e.a_coef[3] += 2.0;
    e
}

/// The facet game's winning probability: (I_4422^6 + 16) / 64.
pub fn i_facet() -> CorrelatorExpr {
    let mut e = CorrelatorExpr::zero(4, 4);
    e.constant = 16.0 / 64.0;
    e.add_scaled(&i4422_6(), 1.0 / 64.0);
    e
}

/// Evaluates a correlator expression on the box a strategy produces.
pub fn bell_functional_value(
    expr: &CorrelatorExpr,
    qs: &crate::quantum::QuantumStrategy,
) -> Result<f64> {
    expr.evaluate(&qs.born_box()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{
        winning_probability, DeterministicStrategy, ExactBox, InputDistribution, Scenario,
    };
    use crate::games;
    use crate::quantum::strategies::addition_strategy;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    /// Random no-signaling box: a mixture of deterministic boxes and the
    /// parity box of a random game.
    fn random_ns_box(s: &Scenario, rng: &mut StdRng) -> FloatBox {
        let mut weights = [0.0f64; 4];
        let mut total = 0.0;
        for w in weights.iter_mut() {
            *w = rng.gen_range(0.01..1.0);
            total += *w;
        }
        let mut entries = vec![0.0; s.joint_inputs() * s.joint_outputs()];
        for (idx, w) in weights.iter().enumerate() {
            let share = w / total;
            if idx < 3 {
                let maps = (0..s.players())
                    .map(|k| {
                        (0..s.input_count(k))
                            .map(|_| rng.gen_range(0..s.outputs() as u32))
                            .collect()
                    })
                    .collect();
                let d = DeterministicStrategy::new(s.clone(), maps).unwrap();
                let b = ExactBox::from_deterministic(&d).to_float();
                for (e, v) in entries.iter_mut().zip(b.entries()) {
                    *e += share * v;
                }
            } else {
                let table = (0..s.joint_inputs())
                    .map(|_| rng.gen_range(0..s.joint_outputs() as u32))
                    .collect();
                let f = crate::game::GameFunction::from_table(s.clone(), table).unwrap();
                let b = crate::counting::parity_box(&f).unwrap().to_float();
                for (e, v) in entries.iter_mut().zip(b.entries()) {
                    *e += share * v;
                }
            }
        }
        FloatBox::new(s.clone(), entries).unwrap()
    }

    #[test]
    fn i_add_equals_the_addition_game_value_on_all_boxes() {
        let f = games::addition();
        let derived = CorrelatorExpr::from_game(&f).unwrap();
        let hand = i_add();
        assert!((derived.constant - hand.constant).abs() < 1e-15);
        for i in 0..4 {
            assert!((derived.a_coef[i] - hand.a_coef[i]).abs() < 1e-15);
            assert!((derived.b_coef[i] - hand.b_coef[i]).abs() < 1e-15);
            for m in 0..4 {
                assert!((derived.corr[i][m] - hand.corr[i][m]).abs() < 1e-15);
            }
        }
        let s = f.scenario().clone();
        let q = InputDistribution::uniform(&s);
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let b = random_ns_box(&s, &mut rng);
            let omega = winning_probability(&f, &b, &q).unwrap();
            assert!((hand.evaluate(&b).unwrap() - omega).abs() < 1e-12);
        }
    }

    #[test]
    fn i_facet_equals_the_facet_game_value_on_all_boxes() {
        let f = games::facet();
        let derived = CorrelatorExpr::from_game(&f).unwrap();
        let hand = i_facet();
        let s = f.scenario().clone();
        let q = InputDistribution::uniform(&s);
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..20 {
            let b = random_ns_box(&s, &mut rng);
            let omega = winning_probability(&f, &b, &q).unwrap();
            assert!((hand.evaluate(&b).unwrap() - omega).abs() < 1e-12);
            assert!((derived.evaluate(&b).unwrap() - omega).abs() < 1e-12);
        }
    }

    #[test]
    fn addition_strategy_saturates_every_chsh_block() {
        let qs = addition_strategy();
        let b = qs.born_box().unwrap();
        for (block, sign) in [
            (chsh_block(0, 1, 0, 1, 4), -1.0),
            (chsh_block(2, 3, 0, 1, 4), 1.0),
            (chsh_block(0, 1, 2, 3, 4), 1.0),
            (chsh_block(2, 3, 2, 3, 4), -1.0),
        ] {
            let v = block.evaluate(&b).unwrap() * sign;
            assert!((v - 2.0 * SQRT2).abs() < 1e-12, "block value {v}");
        }
        assert!((i_add().evaluate(&b).unwrap() - (2.0 + SQRT2) / 8.0).abs() < 1e-12);
    }

    #[test]
    fn facet_seesaw_optimum_through_the_bell_functional() {
        use crate::quantum::seesaw::{seesaw, SeesawOptions};
        let f = games::facet();
        let out = seesaw(&f, &SeesawOptions::new(vec![2, 2]).restarts(50)).unwrap();
        let via_functional = bell_functional_value(&i_facet(), &out.strategy).unwrap();
        assert!((via_functional - 0.403093).abs() < 1e-4);
        assert!((via_functional - out.value).abs() < 1e-12);
    }

    #[test]
    fn deterministic_boxes_stay_below_the_classical_addition_bound() {
        let f = games::addition();
        let s = f.scenario().clone();
        let q = InputDistribution::uniform(&s);
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..50 {
            let maps = (0..2)
                .map(|_| (0..4).map(|_| rng.gen_range(0..2u32)).collect())
                .collect();
            let d = DeterministicStrategy::new(s.clone(), maps).unwrap();
            let b = ExactBox::from_deterministic(&d).to_float();
            let v = i_add().evaluate(&b).unwrap();
            let omega = crate::exact::to_f64(
                &winning_probability(&f, &ExactBox::from_deterministic(&d), &q).unwrap(),
            );
            assert!((v - omega).abs() < 1e-12);
            assert!(v <= 3.0 / 8.0 + 1e-12);
        }
    }
}
