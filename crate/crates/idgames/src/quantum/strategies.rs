//! Explicit quantum strategies for the named games.

use super::linalg::{CMatrix, C64};
use super::{Observable, QuantumStrategy, State};
use crate::game::Scenario;

pub fn pauli_x() -> CMatrix {
    CMatrix::from_reals(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_rows(&[
        &[C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        &[C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
    ])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_reals(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// |phi+> = (|00> + |11>) / sqrt(2).
pub fn phi_plus() -> Vec<C64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        C64::new(h, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(h, 0.0),
    ]
}

/// The singlet (|01> - |10>) / sqrt(2).
pub fn singlet() -> Vec<C64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        C64::new(0.0, 0.0),
        C64::new(h, 0.0),
        C64::new(-h, 0.0),
        C64::new(0.0, 0.0),
    ]
}

/// The standard optimal observable pair for the XOR game
/// y1 ^ y2 = x1 & x2 on |phi+>: correlators <A_i B_j> = (-1)^(i&j)/sqrt(2).
pub fn chsh_observables() -> (Vec<CMatrix>, Vec<CMatrix>) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let a = vec![pauli_z(), pauli_x()];
    let b = vec![
        pauli_z().add(&pauli_x()).scale_re(s),
        pauli_z().sub(&pauli_x()).scale_re(s),
    ];
    (a, b)
}

/// The CHSH-optimal strategy for y1 ^ y2 = x1 & x2, winning with
/// probability cos^2(pi/8).
pub fn chsh_strategy() -> QuantumStrategy {
    let s = Scenario::symmetric(2, 2, 2).unwrap();
    let (a, b) = chsh_observables();
    let to_obs = |ms: Vec<CMatrix>| -> Vec<Observable> {
        ms.into_iter()
            .map(|m| Observable::new(m).unwrap())
            .collect()
    };
    QuantumStrategy::from_observables(
        s,
        vec![2, 2],
        State::Vector(phi_plus()),
        vec![to_obs(a), to_obs(b)],
    )
    .unwrap()
}

/// The two-qubit strategy reaching (2 + sqrt 2)/8 on the addition game:
/// |phi+> with A = [sx, sz, -sx, -sz] and B = [(sx - sz)/sqrt 2,
/// (-sx - sz)/sqrt 2, ...] (second pair negated).
pub fn addition_strategy() -> QuantumStrategy {
    let s = Scenario::symmetric(2, 4, 2).unwrap();
    let rt = std::f64::consts::FRAC_1_SQRT_2;
    let a0 = pauli_x();
    let a1 = pauli_z();
    let b0 = pauli_x().sub(&pauli_z()).scale_re(rt);
    let b1 = pauli_x().scale_re(-1.0).sub(&pauli_z()).scale_re(rt);
    let a = vec![a0.clone(), a1.clone(), a0.scale_re(-1.0), a1.scale_re(-1.0)];
    let b = vec![b0.clone(), b1.clone(), b0.scale_re(-1.0), b1.scale_re(-1.0)];
    let to_obs = |ms: Vec<CMatrix>| -> Vec<Observable> {
        ms.into_iter()
            .map(|m| Observable::new(m).unwrap())
            .collect()
    };
    QuantumStrategy::from_observables(
        s,
        vec![2, 2],
        State::Vector(phi_plus()),
        vec![to_obs(a), to_obs(b)],
    )
    .unwrap()
}

/// The tripartite strategy: players 1 and 2 play the XOR game
/// y1 ^ y2 = !x1 & !x2 optimally on |phi+>, player 3 answers 0 from a
/// trivial one-dimensional component.
pub fn tripartite_strategy() -> QuantumStrategy {
    let s = Scenario::symmetric(3, 2, 2).unwrap();
    let (a, b) = chsh_observables();
    // Complemented inputs: wire input x to the XOR observable for !x.
    let a = [a[1].clone(), a[0].clone()];
    let b = [b[1].clone(), b[0].clone()];
    let one = CMatrix::identity(1);
    let zero = CMatrix::zeros(1);
    let det0 = vec![
        vec![one.clone(), zero.clone()],
        vec![one.clone(), zero.clone()],
    ];
    let effect_pair =
        |m: &CMatrix| -> Vec<CMatrix> { Observable::new(m.clone()).unwrap().effects().to_vec() };
    let measurements = vec![
        a.iter().map(effect_pair).collect(),
        b.iter().map(effect_pair).collect(),
        det0,
    ];
    QuantumStrategy::new(s, vec![2, 2, 1], State::Vector(phi_plus()), measurements).unwrap()
}

/// The explicit strategy for the three-input game with the highest SDP
/// bound: each player answers 0 outright on input 0 and otherwise plays
/// their CHSH-optimal observable on the relabelled input.
pub fn three_input_strategy() -> QuantumStrategy {
    let s = Scenario::symmetric(2, 3, 2).unwrap();
    let (a, b) = chsh_observables();
    let id = CMatrix::identity(2);
    let zero = CMatrix::zeros(2);
    let effect_pair =
        |m: &CMatrix| -> Vec<CMatrix> { Observable::new(m.clone()).unwrap().effects().to_vec() };
    // Player 1: input 0 -> deterministic 0; 1 -> XOR input 1; 2 -> XOR 0.
    let p1 = vec![
        vec![id.clone(), zero.clone()],
        effect_pair(&a[1]),
        effect_pair(&a[0]),
    ];
    // Player 2: input 0 -> deterministic 0; 1 -> XOR input 0; 2 -> XOR 1.
    let p2 = vec![
        vec![id.clone(), zero.clone()],
        effect_pair(&b[0]),
        effect_pair(&b[1]),
    ];
    QuantumStrategy::new(s, vec![2, 2], State::Vector(phi_plus()), vec![p1, p2]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games;
    use crate::ns::is_no_signaling_approx;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn chsh_strategy_wins_cos_squared_pi_over_8() {
        let qs = chsh_strategy();
        let b = qs.born_box().unwrap();
        // Standard XOR scoring: average probability of y1 ^ y2 = x1 & x2.
        let mut total = 0.0;
        for x in 0..4usize {
            let (x1, x2) = (x & 1, x >> 1);
            for y in 0..4usize {
                let (y1, y2) = (y & 1, y >> 1);
                if y1 ^ y2 == (x1 & x2) {
                    total += b.entry(x, y) / 4.0;
                }
            }
        }
        let expected = (std::f64::consts::PI / 8.0).cos().powi(2);
        assert!((total - expected).abs() < 1e-12);
    }

    #[test]
    fn addition_strategy_reaches_the_quantum_optimum() {
        let qs = addition_strategy();
        let v = qs.value(&games::addition()).unwrap();
        assert!((v - (2.0 + SQRT2) / 8.0).abs() < 1e-12);
        let b = qs.born_box().unwrap();
        assert!(is_no_signaling_approx(&b, 1e-12));
    }

    #[test]
    fn tripartite_strategy_reaches_half_cos_squared() {
        let qs = tripartite_strategy();
        let v = qs.value(&games::tripartite()).unwrap();
        let expected = 0.5 * (std::f64::consts::PI / 8.0).cos().powi(2);
        assert!((v - expected).abs() < 1e-12);
        // Stays below the published semidefinite upper bound.
        assert!(v <= 0.42683);
    }

    #[test]
    fn three_input_strategy_value() {
        let qs = three_input_strategy();
        let v = qs.value(&games::three_input_example()).unwrap();
        let expected = (1.0 + 1.5 + (SQRT2 + 2.0) / 2.0) / 9.0;
        assert!((v - expected).abs() < 1e-12);
    }
}
