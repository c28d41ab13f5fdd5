//! Optimal classical winning probability by exhaustive search.
//!
//! Shared randomness never helps: the winning probability is affine in the
//! box, so the maximum over local boxes is attained at a deterministic
//! strategy. The search space is the product of per-player output maps,
//! m_o^(m_i) per player, which stays comfortably enumerable for every
//! scenario in scope.

use crate::exact::Rational;
use crate::game::{DeterministicStrategy, GameFunction};
use crate::{Error, Result};

/// Exact classical optimum with one optimal witness strategy (the
/// lexicographically smallest one).
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalResult {
    pub value: Rational,
    pub witness: DeterministicStrategy,
}

const MAX_STRATEGIES: u64 = 1 << 22;

/// Exhaustively maximizes the winning count over deterministic strategy
/// tuples, enumerated in lexicographic order (player 1's map in the least
/// significant position, map entries for input 0 least significant).
pub fn optimal_classical(f: &GameFunction) -> Result<ClassicalResult> {
    let s = f.scenario();
    let n = s.players();
    let m_o = s.outputs() as u64;

    let mut per_player: Vec<u64> = Vec::with_capacity(n);
    let mut total: u64 = 1;
    for k in 0..n {
        let count = (0..s.input_count(k)).try_fold(1u64, |acc, _| {
            acc.checked_mul(m_o).filter(|&v| v <= MAX_STRATEGIES)
        });
        let count = count
            .ok_or_else(|| Error::TooLarge(format!("player {} has too many output maps", k + 1)))?;
        total = total
            .checked_mul(count)
            .filter(|&v| v <= MAX_STRATEGIES)
            .ok_or_else(|| Error::TooLarge("deterministic strategy space".into()))?;
        per_player.push(count);
    }

    let joint = s.joint_inputs();
    // Per joint input, the per-player input components (decoded once).
    let mut input_tuples: Vec<Vec<usize>> = Vec::with_capacity(joint);
    for x in 0..joint {
        input_tuples.push(crate::game::decode_input(x, s));
    }

    let mut best_wins: usize = 0;
    let mut best_index: u64 = 0;
    let mut maps: Vec<Vec<u32>> = (0..n).map(|k| vec![0u32; s.input_count(k)]).collect();

    for index in 0..total {
        // Decode the strategy tuple index into per-player output maps.
        let mut rest = index;
        for k in 0..n {
            let mut code = rest % per_player[k];
            rest /= per_player[k];
            for x in 0..s.input_count(k) {
                maps[k][x] = (code % m_o) as u32;
                code /= m_o;
            }
        }
        let mut wins = 0;
        for (x, tuple) in input_tuples.iter().enumerate() {
            let mut yi = 0usize;
            let mut stride = 1usize;
            for (k, &xk) in tuple.iter().enumerate() {
                yi += maps[k][xk] as usize * stride;
                stride *= s.outputs();
            }
            if yi == f.output_index(x) {
                wins += 1;
            }
        }
        if wins > best_wins {
            best_wins = wins;
            best_index = index;
        }
    }

    // Rebuild the witness from the winning index.
    let mut rest = best_index;
    let mut witness_maps = Vec::with_capacity(n);
    for k in 0..n {
        let mut code = rest % per_player[k];
        rest /= per_player[k];
        let mut map = Vec::with_capacity(s.input_count(k));
        for _ in 0..s.input_count(k) {
            map.push((code % m_o) as u32);
            code /= m_o;
        }
        witness_maps.push(map);
    }
    let witness = DeterministicStrategy::new(s.clone(), witness_maps)?;
    let value = Rational::new((best_wins as i64).into(), (joint as i64).into());
    debug_assert_eq!(crate::game::evaluate_deterministic(f, &witness)?, value);
    Ok(ClassicalResult { value, witness })
}
