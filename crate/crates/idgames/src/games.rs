//! The named example games bundled with the crate, plus a few reference
//! boxes used in tests and the verification suite.

use crate::exact::{rat, Rational};
use crate::game::{encode_input, encode_output, ExactBox, GameFunction, Scenario};

/// Builds a two-player binary-output game from a table laid out the way the
/// text format prints it: columns are x1, rows are x2, each cell is (y2, y1).
fn two_player(cells: &[&[(u32, u32)]]) -> GameFunction {
    let m2 = cells.len();
    let m1 = cells[0].len();
    let s = Scenario::new(2, vec![m1, m2], 2).expect("valid scenario");
    let mut table = vec![0u32; s.joint_inputs()];
    for (x2, row) in cells.iter().enumerate() {
        assert_eq!(row.len(), m1, "ragged table");
        for (x1, &(y2, y1)) in row.iter().enumerate() {
            let xi = encode_input(&[x1, x2], &s).unwrap();
            table[xi] = encode_output(&[y1 as usize, y2 as usize], &s).unwrap() as u32;
        }
    }
    GameFunction::from_table(s, table).unwrap()
}

fn three_player<F>(f: F) -> GameFunction
where
    F: Fn(usize, usize, usize) -> (usize, usize, usize),
{
    let s = Scenario::symmetric(3, 2, 2).unwrap();
    GameFunction::from_fn(s, |x| {
        let (y1, y2, y3) = f(x[0], x[1], x[2]);
        vec![y1, y2, y3]
    })
    .unwrap()
}

/// The first three-input example: the game with the highest known quantum
/// advantage in the (2,3,2) scenario.
pub fn three_input_example() -> GameFunction {
    two_player(&[
        &[(0, 0), (0, 0), (0, 0)],
        &[(0, 0), (1, 1), (1, 1)],
        &[(0, 1), (0, 1), (1, 1)],
    ])
}

/// Three-input game symmetric under player exchange; quantum strategies give
/// no advantage here.
pub fn symmetric_three_input() -> GameFunction {
    two_player(&[
        &[(0, 0), (0, 0), (1, 0)],
        &[(0, 0), (1, 1), (1, 1)],
        &[(0, 1), (1, 1), (0, 0)],
    ])
}

/// Three-input game whose quantum optimum needs a partially entangled state.
pub fn partial_entanglement() -> GameFunction {
    two_player(&[
        &[(0, 1), (1, 1), (1, 0)],
        &[(0, 0), (0, 1), (1, 1)],
        &[(0, 1), (1, 0), (0, 1)],
    ])
}

/// Three-input game acting as a dimension witness: the quantum optimum needs
/// at least three-dimensional component spaces.
pub fn dimension_witness() -> GameFunction {
    two_player(&[
        &[(0, 1), (1, 1), (1, 0)],
        &[(0, 1), (1, 1), (1, 1)],
        &[(0, 1), (1, 0), (1, 0)],
    ])
}

/// The addition game: (y2, y1) must encode x1 + x2 mod 4 in two bits.
pub fn addition() -> GameFunction {
    let s = Scenario::symmetric(2, 4, 2).unwrap();
    GameFunction::from_fn(s, |x| {
        let sum = (x[0] + x[1]) % 4;
        vec![sum & 1, sum >> 1]
    })
    .unwrap()
}

/// The four-input game that defines a facet of the local polytope.
pub fn facet() -> GameFunction {
    two_player(&[
        &[(0, 1), (1, 0), (0, 0), (1, 0)],
        &[(0, 1), (1, 1), (0, 1), (1, 1)],
        &[(0, 0), (1, 1), (0, 0), (1, 0)],
        &[(0, 0), (1, 0), (1, 0), (0, 0)],
    ])
}

/// Symmetric five-input game with a quantum advantage.
pub fn symmetric_five_input() -> GameFunction {
    two_player(&[
        &[(1, 1), (1, 0), (0, 0), (0, 0), (1, 1)],
        &[(0, 1), (0, 0), (0, 1), (1, 1), (1, 1)],
        &[(0, 0), (1, 0), (0, 0), (1, 1), (0, 1)],
        &[(0, 0), (1, 1), (1, 1), (0, 0), (0, 0)],
        &[(1, 1), (1, 1), (1, 0), (0, 0), (0, 0)],
    ])
}

/// The tripartite example game: y1 = (!x1 & !x2) ^ !x3, y2 = !x3, y3 = 0.
pub fn tripartite() -> GameFunction {
    three_player(|x1, x2, x3| {
        let nx1 = 1 - x1;
        let nx2 = 1 - x2;
        let nx3 = 1 - x3;
        ((nx1 & nx2) ^ nx3, nx3, 0)
    })
}

/// The tripartite game whose optimal no-signaling strategy is a
/// non-decomposable extremal box:
/// y1 = !x3, y2 = !x3, y3 = (!x3 & !x1) | (x3 & !x2).
pub fn class25() -> GameFunction {
    three_player(|x1, x2, x3| {
        let nx1 = 1 - x1;
        let nx2 = 1 - x2;
        let nx3 = 1 - x3;
        (nx3, nx3, (nx3 & nx1) | (x3 & nx2))
    })
}

/// The optimal no-signaling box for [`class25`], transcribed entry by entry.
/// Rows are joint inputs x3 x2 x1, columns joint outputs y3 y2 y1, both with
/// player 1 in the least significant bit.
pub fn class25_box() -> ExactBox {
    let s = Scenario::symmetric(3, 2, 2).unwrap();
    let t = rat(1, 3);
    let z = Rational::from_integer(0.into());
    #[rustfmt::skip]
    let rows: [[u8; 8]; 8] = [
        // y3y2y1: 000 001 010 011 100 101 110 111
        [1, 0, 1, 0, 0, 0, 0, 1], // x = 000
        [1, 0, 0, 1, 0, 0, 1, 0], // x = 001
        [1, 0, 1, 0, 0, 0, 0, 1], // x = 010
        [1, 0, 0, 1, 0, 0, 1, 0], // x = 011
        [0, 0, 1, 1, 1, 0, 0, 0], // x = 100
        [0, 0, 1, 1, 1, 0, 0, 0], // x = 101
        [1, 0, 0, 1, 0, 0, 1, 0], // x = 110
        [1, 0, 0, 1, 0, 0, 1, 0], // x = 111
    ];
    let mut entries = Vec::with_capacity(64);
    for row in rows.iter() {
        for &cell in row.iter() {
            entries.push(if cell == 1 { t.clone() } else { z.clone() });
        }
    }
    ExactBox::new(s, entries).unwrap()
}

/// The PR box on two binary players: y1 ^ y2 = x1 & x2, outputs otherwise
/// uniform.
pub fn pr_box() -> ExactBox {
    let s = Scenario::symmetric(2, 2, 2).unwrap();
    let h = rat(1, 2);
    let z = Rational::from_integer(0.into());
    let mut entries = Vec::with_capacity(16);
    for x in 0..4 {
        let (x1, x2) = (x & 1, x >> 1);
        for y in 0..4 {
            let (y1, y2) = (y & 1, y >> 1);
            if y1 ^ y2 == (x1 & x2) {
                entries.push(h.clone());
            } else {
                entries.push(z.clone());
            }
        }
    }
    ExactBox::new(s, entries).unwrap()
}

/// Every named game, with the identifier used by the CLI's bundled files.
pub fn all_named() -> Vec<(&'static str, GameFunction)> {
    vec![
        ("three_input_example", three_input_example()),
        ("symmetric_three_input", symmetric_three_input()),
        ("partial_entanglement", partial_entanglement()),
        ("dimension_witness", dimension_witness()),
        ("addition", addition()),
        ("facet", facet()),
        ("symmetric_five_input", symmetric_five_input()),
        ("tripartite", tripartite()),
        ("class25", class25()),
    ]
}
