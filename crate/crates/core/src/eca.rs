//! Elementary cellular automata, kept independent of the machine engine so
//! it can serve as the reference for every cross-check.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Widest row accepted by [`preimages`].
pub const MAX_PREIMAGE_WIDTH: usize = 24;

/// Wolfram-numbered rule: the new cell is bit `4l + 2c + r` of the rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EcaRule(pub u8);

impl EcaRule {
    pub const R90: EcaRule = EcaRule(90);

    #[inline]
    pub fn apply(self, left: bool, center: bool, right: bool) -> bool {
        let idx = (left as u8) << 2 | (center as u8) << 1 | right as u8;
        (self.0 >> idx) & 1 == 1
    }
}

impl fmt::Display for EcaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Cells beyond either end read as 0.
    Null,
    Periodic,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EcaRow {
    pub cells: Vec<bool>,
    pub boundary: Boundary,
}

impl EcaRow {
    pub fn new(cells: Vec<bool>, boundary: Boundary) -> Self {
        EcaRow { cells, boundary }
    }

    pub fn null(cells: Vec<bool>) -> Self {
        EcaRow::new(cells, Boundary::Null)
    }

    /// A single 1 at index `n / 2`.
    pub fn single_centered(n: usize, boundary: Boundary) -> Self {
        let mut cells = vec![false; n];
        if n > 0 {
            cells[n / 2] = true;
        }
        EcaRow::new(cells, boundary)
    }

    pub fn parse(s: &str, boundary: Boundary) -> Result<Self> {
        let cells = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    what: "eca row",
                    input: s.to_string(),
                    reason: format!("unexpected character {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EcaRow::new(cells, boundary))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn count_ones(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn bit_string(&self) -> String {
        self.cells
            .iter()
            .map(|&c| if c { '1' } else { '0' })
            .collect()
    }

    fn neighbour(&self, k: isize) -> bool {
        let n = self.cells.len() as isize;
        match self.boundary {
            Boundary::Null if k < 0 || k >= n => false,
            Boundary::Null => self.cells[k as usize],
            Boundary::Periodic => self.cells[k.rem_euclid(n) as usize],
        }
    }

    /// Packs the row so that cell `k` sits at bit `n - 1 - k`.
    fn pack(&self) -> u32 {
        self.cells
            .iter()
            .fold(0u32, |acc, &c| (acc << 1) | c as u32)
    }

    fn unpack(bits: u32, n: usize, boundary: Boundary) -> Self {
        EcaRow::new(
            (0..n).map(|k| (bits >> (n - 1 - k)) & 1 == 1).collect(),
            boundary,
        )
    }
}

impl fmt::Display for EcaRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bit_string())
    }
}

impl fmt::Debug for EcaRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EcaRow({}, {:?})", self.bit_string(), self.boundary)
    }
}

impl FromStr for EcaRow {
    type Err = Error;

    /// Parses a null-boundary row.
    fn from_str(s: &str) -> Result<Self> {
        EcaRow::parse(s, Boundary::Null)
    }
}

pub fn eca_step(row: &EcaRow, rule: EcaRule) -> EcaRow {
    let cells = (0..row.len() as isize)
        .map(|k| rule.apply(row.neighbour(k - 1), row.neighbour(k), row.neighbour(k + 1)))
        .collect();
    EcaRow::new(cells, row.boundary)
}

/// `steps + 1` rows, the first being `row`.
pub fn eca_run(row: &EcaRow, rule: EcaRule, steps: usize) -> Vec<EcaRow> {
    let mut rows = Vec::with_capacity(steps + 1);
    rows.push(row.clone());
    for _ in 0..steps {
        let next = eca_step(rows.last().expect("non-empty"), rule);
        rows.push(next);
    }
    rows
}

/// Bit-parallel image of a packed row of width `n`.
#[inline]
fn step_packed(x: u32, n: usize, rule: EcaRule, boundary: Boundary) -> u32 {
    let mask = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    // left neighbour of the cell at bit p is bit p + 1
    let mut left = x >> 1;
    let mut right = (x << 1) & mask;
    if boundary == Boundary::Periodic {
        left |= (x & 1) << (n - 1);
        right |= (x >> (n - 1)) & 1;
    }
    let mut out = 0u32;
    for pattern in 0..8u8 {
        if (rule.0 >> pattern) & 1 == 0 {
            continue;
        }
        let pick = |bit: u8, v: u32| if pattern & bit != 0 { v } else { !v };
        out |= pick(4, left) & pick(2, x) & pick(1, right);
    }
    out & mask
}

/// Every row that steps to `row` under `rule`, in ascending bit-string
/// order, found by trying all `2^n` candidates.
pub fn preimages(row: &EcaRow, rule: EcaRule) -> Result<Vec<EcaRow>> {
    let n = row.len();
    if n > MAX_PREIMAGE_WIDTH {
        return Err(Error::PreimageCapacity {
            len: n,
            max: MAX_PREIMAGE_WIDTH,
        });
    }
    if n == 0 {
        return Ok(vec![row.clone()]);
    }
    let target = row.pack();
    let found: Vec<u32> = (0..1u32 << n)
        .into_par_iter()
        .filter(|&x| step_packed(x, n, rule, row.boundary) == target)
        .collect();
    Ok(found
        .into_iter()
        .map(|x| EcaRow::unpack(x, n, row.boundary))
        .collect())
}

/// One row per line, `0`/`1` characters, newline-terminated.
pub fn rows_to_text<'a>(rows: impl IntoIterator<Item = &'a EcaRow>) -> String {
    let mut out = String::new();
    for r in rows {
        out.push_str(&r.bit_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> EcaRow {
        s.parse().unwrap()
    }

    #[test]
    fn rule90_examples() {
        assert_eq!(eca_step(&r("00100"), EcaRule::R90), r("01010"));
        assert_eq!(eca_step(&r("01010"), EcaRule::R90), r("10001"));
        assert_eq!(eca_step(&r("0000000"), EcaRule::R90), r("0000000"));
    }

    #[test]
    fn periodic_wraps() {
        let row = EcaRow::parse("1000", Boundary::Periodic).unwrap();
        assert_eq!(eca_step(&row, EcaRule::R90).bit_string(), "0101");
    }

    #[test]
    fn run_length() {
        let rows = eca_run(&r("010"), EcaRule::R90, 0);
        assert_eq!(rows, vec![r("010")]);
        assert_eq!(eca_run(&r("010"), EcaRule::R90, 5).len(), 6);
    }

    #[test]
    fn packed_step_agrees_with_cellwise() {
        for rule in [0u8, 30, 90, 110, 150, 165, 255] {
            for boundary in [Boundary::Null, Boundary::Periodic] {
                for n in 1..=7usize {
                    for x in 0..1u32 << n {
                        let row = EcaRow::unpack(x, n, boundary);
                        let want = eca_step(&row, EcaRule(rule)).pack();
                        assert_eq!(step_packed(x, n, EcaRule(rule), boundary), want);
                    }
                }
            }
        }
    }

    #[test]
    fn quiescent_self_preimage() {
        let pre = preimages(&r("0000"), EcaRule::R90).unwrap();
        assert!(pre.contains(&r("0000")));
    }

    #[test]
    fn capacity_bound() {
        let row = EcaRow::null(vec![false; MAX_PREIMAGE_WIDTH + 1]);
        assert!(matches!(
            preimages(&row, EcaRule::R90),
            Err(Error::PreimageCapacity { len: 25, max: 24 })
        ));
    }

    #[test]
    fn text_rows() {
        assert_eq!(rows_to_text(&[r("01"), r("10")]), "01\n10\n");
    }
}
