//! Reading and writing game functions.
//!
//! Two formats: a structured JSON document for arbitrary scenarios, and the
//! two-player text-table layout (columns = x1, rows = x2, cell "y2,y1").

use crate::game::{decode_input, encode_input, encode_output, GameFunction, Scenario};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Structured game document. `table` is indexed by the joint input index and
/// lists each player's output as `[y_1, ..., y_n]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameDoc {
    pub players: usize,
    pub inputs: Vec<usize>,
    pub outputs: usize,
    pub table: Vec<Vec<usize>>,
}

impl GameDoc {
    pub fn of(f: &GameFunction) -> Self {
        let s = f.scenario();
        let table = (0..s.joint_inputs())
            .map(|x| (0..s.players()).map(|k| f.component(k, x)).collect())
            .collect();
        GameDoc {
            players: s.players(),
            inputs: s.inputs().to_vec(),
            outputs: s.outputs(),
            table,
        }
    }

    pub fn to_game(&self) -> Result<GameFunction> {
        let s = Scenario::new(self.players, self.inputs.clone(), self.outputs)?;
        if self.table.len() != s.joint_inputs() {
            return Err(Error::Parse(format!(
                "table has {} rows, scenario has {} joint inputs",
                self.table.len(),
                s.joint_inputs()
            )));
        }
        let mut table = Vec::with_capacity(self.table.len());
        for y in &self.table {
            table.push(encode_output(y, &s)? as u32);
        }
        GameFunction::from_table(s, table)
    }
}

pub fn parse_game_json(text: &str) -> Result<GameFunction> {
    let doc: GameDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad game document: {e}")))?;
    doc.to_game()
}

pub fn serialize_game_json(f: &GameFunction) -> String {
    let mut s = serde_json::to_string_pretty(&GameDoc::of(f)).expect("serializable");
    s.push('\n');
    s
}

/// Parses the two-player text table. The output count cannot be inferred
/// from a table that happens not to use all symbols, so it is a parameter.
pub fn parse_game_text(text: &str, outputs: usize) -> Result<GameFunction> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty table".into()))?;
    if !header.replace(' ', "").starts_with("x2\\x1") {
        return Err(Error::Parse(format!(
            "expected header starting with 'x2\\x1 (y2,y1)', got {header:?}"
        )));
    }

    let mut rows: Vec<Vec<(usize, usize)>> = Vec::new();
    for line in lines {
        let mut tokens = line.split_whitespace();
        let label = tokens
            .next()
            .ok_or_else(|| Error::Parse("missing row label".into()))?;
        let row_idx: usize = label
            .parse()
            .map_err(|_| Error::Parse(format!("bad row label {label:?}")))?;
        if row_idx != rows.len() {
            return Err(Error::Parse(format!(
                "row label {row_idx} out of order (expected {})",
                rows.len()
            )));
        }
        let mut row = Vec::new();
        for cell in tokens {
            let (a, b) = cell
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("malformed cell {cell:?}")))?;
            let y2: usize = a
                .parse()
                .map_err(|_| Error::Parse(format!("malformed cell {cell:?}")))?;
            let y1: usize = b
                .parse()
                .map_err(|_| Error::Parse(format!("malformed cell {cell:?}")))?;
            if y1 >= outputs || y2 >= outputs {
                return Err(Error::Parse(format!(
                    "cell {cell:?} uses an output symbol >= {outputs}"
                )));
            }
            row.push((y2, y1));
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse(format!(
                    "row {row_idx} has {} cells, expected {}",
                    row.len(),
                    first.len()
                )));
            }
        }
        if row.is_empty() {
            return Err(Error::Parse(format!("row {row_idx} has no cells")));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("table has no rows".into()));
    }

    let m1 = rows[0].len();
    let m2 = rows.len();
    let s = Scenario::new(2, vec![m1, m2], outputs)?;
    let mut table = vec![0u32; s.joint_inputs()];
    for (x2, row) in rows.iter().enumerate() {
        for (x1, &(y2, y1)) in row.iter().enumerate() {
            let xi = encode_input(&[x1, x2], &s)?;
            table[xi] = encode_output(&[y1, y2], &s)? as u32;
        }
    }
    GameFunction::from_table(s, table)
}

pub fn serialize_game_text(f: &GameFunction) -> Result<String> {
    let s = f.scenario();
    if s.players() != 2 {
        return Err(Error::WrongPlayerCount {
            expected: 2,
            got: s.players(),
        });
    }
    let m1 = s.input_count(0);
    let m2 = s.input_count(1);
    let mut out = String::from("x2\\x1 (y2,y1)");
    for x1 in 0..m1 {
        out.push_str(&format!("  {x1}"));
    }
    out.push('\n');
    for x2 in 0..m2 {
        out.push_str(&x2.to_string());
        for x1 in 0..m1 {
            let xi = encode_input(&[x1, x2], s)?;
            let x = decode_input(xi, s);
            debug_assert_eq!(x, vec![x1, x2]);
            out.push_str(&format!("  {},{}", f.component(1, xi), f.component(0, xi)));
        }
        out.push('\n');
    }
    Ok(out)
}
