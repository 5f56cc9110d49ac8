//! Cross-checks between the machine lattice and elementary cellular
//! automata. Expectations always come from [`crate::eca`]; the engine is
//! only ever the system under test.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::eca::{eca_run, eca_step, EcaRow, EcaRule};
use crate::engine::{
    reverse_outcome, run, run_reverse, BoundaryPolicy, Direction, LatticeState, Trajectory,
};
use crate::error::{Error, Result};
use crate::machine::{Machine, MachineClass, MachineId, State, Symbol};
use crate::rng::random_lattice;

pub const M44: MachineId = MachineId(44);
pub const M45: MachineId = MachineId(45);
pub const M54: MachineId = MachineId(54);
pub const M60: MachineId = MachineId(60);

/// Widest lattice for which [`check_reversibility`] enumerates every
/// configuration.
pub const MAX_EXHAUSTIVE_WIDTH: usize = 10;

/// Reads a lattice row as cellular-automaton cells. State-reporting
/// machines map each state to the output it reports; all others use
/// `S0 ↦ 0`, `S1 ↦ 1`.
pub fn as_eca_row(row: &LatticeState, machine: &Machine) -> EcaRow {
    let cells = row
        .cells()
        .iter()
        .map(|&q| match machine.reported(q) {
            Some(sym) => sym == Symbol::One,
            None => q == State::S1,
        })
        .collect();
    EcaRow::null(cells)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub row: usize,
    pub cell: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub machine: MachineId,
    pub rule: EcaRule,
    pub width: usize,
    pub steps_checked: usize,
    pub first_divergence: Option<Divergence>,
    pub passed: bool,
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M{} vs {} (null), width {}, {} steps: ",
            self.machine, self.rule, self.width, self.steps_checked
        )?;
        match self.first_divergence {
            None => write!(f, "PASS, every even row matches"),
            Some(d) => write!(f, "FAIL, row {} differs at cell {}", d.row, d.cell),
        }
    }
}

/// M45 from a single centred `S1` under the forward Rule-90 boundary.
pub fn verify_forward_r90(width: usize, steps: usize) -> Result<EquivalenceReport> {
    if width < 3 {
        return Err(Error::Domain(format!(
            "forward check needs at least 3 cells, got {width}"
        )));
    }
    verify_forward_r90_from(&LatticeState::centered_one(width)?, steps)
}

/// Runs M45 under [`BoundaryPolicy::ForwardR90`] and checks that row `2k`
/// equals Rule-90 generation `k` for every `k <= steps / 2`.
pub fn verify_forward_r90_from(initial: &LatticeState, steps: usize) -> Result<EquivalenceReport> {
    if !steps.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "forward check takes an even step count, got {steps}"
        )));
    }
    let m = M45.machine();
    let traj = run(M45, initial, &BoundaryPolicy::ForwardR90, steps)?;
    let oracle = eca_run(&as_eca_row(initial, &m), EcaRule::R90, steps / 2);
    let first_divergence =
        traj.even_rows()
            .zip(&oracle)
            .enumerate()
            .find_map(|(k, (row, want))| {
                let got = as_eca_row(row, &m);
                got.cells
                    .iter()
                    .zip(&want.cells)
                    .position(|(a, b)| a != b)
                    .map(|cell| Divergence { row: 2 * k, cell })
            });
    Ok(EquivalenceReport {
        machine: M45,
        rule: EcaRule::R90,
        width: initial.len(),
        steps_checked: steps,
        passed: first_divergence.is_none(),
        first_divergence,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReversalReport {
    pub machine: MachineId,
    pub width: usize,
    pub steps_requested: usize,
    pub pairs_checked: usize,
    /// Even row indices `2k` for which row `2k + 2` does not step to row `2k`.
    pub violations: Vec<usize>,
    pub no_preimage_at: Option<usize>,
    pub inputs: Vec<Symbol>,
    pub passed: bool,
}

impl fmt::Display for ReversalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M{} reverse R90, width {}, {} of {} steps committed, {} pairs checked: ",
            self.machine,
            self.width,
            self.pairs_checked * 2,
            self.steps_requested,
            self.pairs_checked
        )?;
        if self.passed {
            f.write_str("PASS")?;
        } else {
            write!(f, "FAIL at even rows {:?}", self.violations)?;
        }
        if let Some(t) = self.no_preimage_at {
            write!(f, " (truncated: no preimage at step {t})")?;
        }
        Ok(())
    }
}

/// Runs the reverse boundary trial and checks that every committed even
/// row steps forward under Rule 90 to the even row before it.
pub fn verify_reverse_r90(
    machine: MachineId,
    initial: &LatticeState,
    steps: usize,
) -> Result<ReversalReport> {
    if machine != M54 && machine != M60 {
        return Err(Error::Domain(format!(
            "reverse check covers M54 and M60, not M{machine}"
        )));
    }
    let (traj, no_preimage_at) = reverse_outcome(run_reverse(machine, initial, steps))?;
    let m = machine.machine();
    let evens: Vec<EcaRow> = traj.even_rows().map(|r| as_eca_row(r, &m)).collect();
    let violations: Vec<usize> = evens
        .windows(2)
        .enumerate()
        .filter(|(_, pair)| eca_step(&pair[1], EcaRule::R90) != pair[0])
        .map(|(k, _)| 2 * k)
        .collect();
    Ok(ReversalReport {
        machine,
        width: initial.len(),
        steps_requested: steps,
        pairs_checked: evens.len() - 1,
        passed: violations.is_empty(),
        violations,
        no_preimage_at,
        inputs: traj.inputs(),
    })
}

/// Inputs shared by both machines in [`compare_m54_m60`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SharedInputs {
    /// The inputs committed by M54's reverse trial run.
    ReverseCommitted,
    Scripted(Vec<Symbol>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftReport {
    pub width: usize,
    pub steps: usize,
    pub inputs: Vec<Symbol>,
    pub even_rows_equal: bool,
    pub first_even_mismatch: Option<usize>,
    /// Uniform offset `s` with `m60[k] = m54[k + s]` on every odd row; `1`
    /// means M60 sits one cell to the left.
    pub odd_shift: Option<i32>,
    pub passed: bool,
}

impl fmt::Display for ShiftReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M54 vs M60, width {}, {} steps: even rows ",
            self.width, self.steps
        )?;
        match self.first_even_mismatch {
            None => f.write_str("identical")?,
            Some(r) => write!(f, "differ from row {r}")?,
        }
        match self.odd_shift {
            Some(s) => write!(f, ", odd rows offset by {s}")?,
            None => f.write_str(", odd rows share no uniform offset")?,
        }
        f.write_str(if self.passed { ": PASS" } else { ": FAIL" })
    }
}

/// Offset `s` in `candidates` with `b[k] = a[k + s]` wherever `k + s` is in
/// range, for every pair of rows.
fn uniform_shift(pairs: &[(&LatticeState, &LatticeState)], candidates: &[i32]) -> Option<i32> {
    candidates.iter().copied().find(|&s| {
        pairs.iter().all(|(a, b)| {
            let n = a.len() as i32;
            (0..n)
                .filter(|k| (0..n).contains(&(k + s)))
                .all(|k| b.cells()[k as usize] == a.cells()[(k + s) as usize])
        })
    })
}

/// Runs M54 and M60 from the same start on the same inputs and compares
/// even rows cell for cell and odd rows up to a one-cell offset.
pub fn compare_m54_m60(
    initial: &LatticeState,
    inputs: &SharedInputs,
    steps: usize,
) -> Result<ShiftReport> {
    let script = match inputs {
        SharedInputs::Scripted(v) => v.clone(),
        SharedInputs::ReverseCommitted => {
            let (traj, _) = reverse_outcome(run_reverse(M54, initial, steps))?;
            traj.inputs()
        }
    };
    let steps = steps.min(script.len());
    let policy = BoundaryPolicy::scripted(script[..steps].to_vec());
    let a = run(M54, initial, &policy, steps)?;
    let b = run(M60, initial, &policy, steps)?;
    let first_even_mismatch = a
        .rows
        .iter()
        .zip(&b.rows)
        .enumerate()
        .step_by(2)
        .find(|(_, (x, y))| x != y)
        .map(|(t, _)| t);
    let odd_pairs: Vec<_> = a.odd_rows().zip(b.odd_rows()).collect();
    let odd_shift = uniform_shift(&odd_pairs, &[1, 0, -1]);
    let even_rows_equal = first_even_mismatch.is_none();
    Ok(ShiftReport {
        width: initial.len(),
        steps,
        inputs: a.inputs(),
        even_rows_equal,
        first_even_mismatch,
        odd_shift,
        passed: even_rows_equal && odd_shift == Some(1),
    })
}

/// How initial configurations are chosen for [`check_reversibility`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweep {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReversibilityReport {
    pub machine: MachineId,
    pub width: usize,
    pub steps: usize,
    pub tested: usize,
    pub recovered: usize,
    pub pass_rate: f64,
    pub first_failure: Option<LatticeState>,
    pub passed: bool,
}

impl fmt::Display for ReversibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M{} reversal by lattice reversal, width {}, {} steps: {}/{} recovered (rate {:.4})",
            self.machine, self.width, self.steps, self.recovered, self.tested, self.pass_rate
        )?;
        if let Some(c) = &self.first_failure {
            write!(f, ", first failure from {c}")?;
        }
        Ok(())
    }
}

fn advance(cells: &mut [State], m: &Machine, from_t: usize, steps: usize) {
    for t in from_t..from_t + steps {
        crate::engine::step_in_place(
            cells,
            m,
            Symbol::Zero,
            Direction::at(t, Direction::LeftToRight),
        );
    }
}

/// Runs `steps` steps under constant-0 input, reverses the lattice, runs
/// `steps` more with the step clock continuing, and checks that the result
/// is the reversed starting configuration.
pub fn recovers_by_reversal(m: &Machine, initial: &LatticeState, steps: usize) -> bool {
    let mut cells = initial.cells().to_vec();
    advance(&mut cells, m, 0, steps);
    cells.reverse();
    advance(&mut cells, m, steps, steps);
    cells.iter().eq(initial.cells().iter().rev())
}

pub fn check_reversibility(
    machine: MachineId,
    width: usize,
    steps: usize,
    sweep: Sweep,
) -> Result<ReversibilityReport> {
    if width == 0 {
        return Err(Error::EmptyLattice);
    }
    let configs: Vec<LatticeState> = match sweep {
        Sweep::Exhaustive => {
            if width > MAX_EXHAUSTIVE_WIDTH {
                return Err(Error::Domain(format!(
                    "exhaustive sweep supports up to {MAX_EXHAUSTIVE_WIDTH} cells, got {width}"
                )));
            }
            (0..1u32 << width)
                .map(|x| {
                    let bits: Vec<u8> = (0..width)
                        .map(|k| ((x >> (width - 1 - k)) & 1) as u8)
                        .collect();
                    LatticeState::from_u8s(&bits)
                })
                .collect::<Result<_>>()?
        }
        Sweep::Sampled { count, seed } => (0..count)
            .map(|k| random_lattice(width, seed.wrapping_add(k as u64)))
            .collect::<Result<_>>()?,
    };
    let m = machine.machine();
    let failures: Vec<usize> = configs
        .par_iter()
        .enumerate()
        .filter(|(_, c)| !recovers_by_reversal(&m, c, steps))
        .map(|(k, _)| k)
        .collect();
    let tested = configs.len();
    let recovered = tested - failures.len();
    Ok(ReversibilityReport {
        machine,
        width,
        steps,
        tested,
        recovered,
        pass_rate: if tested == 0 {
            1.0
        } else {
            recovered as f64 / tested as f64
        },
        first_failure: failures.first().map(|&k| configs[k].clone()),
        passed: recovered == tested,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasTile {
    pub machine: MachineId,
    pub class: MachineClass,
    /// Every row after the initial one is all `S0` or all `S1`.
    pub blank: bool,
    pub trajectory: Trajectory,
}

/// Every machine from a single centred `S1` under constant-0 input, in id
/// order.
pub fn atlas(width: usize, steps: usize) -> Result<Vec<AtlasTile>> {
    let initial = LatticeState::centered_one(width)?;
    let policy = BoundaryPolicy::constant(Symbol::Zero);
    (0..=255u8)
        .into_par_iter()
        .map(|id| {
            let machine = MachineId(id);
            let trajectory = run(machine, &initial, &policy, steps)?;
            Ok(AtlasTile {
                machine,
                class: machine.machine().classify(),
                blank: trajectory.rows.iter().skip(1).all(LatticeState::is_uniform),
                trajectory,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WidthReport {
    pub narrow: usize,
    pub wide: usize,
    pub steps: usize,
    /// First even row at which the narrow lattice differs from the matching
    /// window of the wide one.
    pub first_divergent_row: Option<usize>,
    pub narrow_stopped_at: Option<usize>,
    pub wide_stopped_at: Option<usize>,
}

fn embed(pattern: &[State], width: usize) -> Result<(LatticeState, usize)> {
    if pattern.len() > width {
        return Err(Error::Domain(format!(
            "pattern of {} cells does not fit in {width}",
            pattern.len()
        )));
    }
    let offset = (width - pattern.len()) / 2;
    let mut cells = vec![State::S0; width];
    cells[offset..offset + pattern.len()].copy_from_slice(pattern);
    Ok((LatticeState::new(cells)?, offset))
}

/// Centres `pattern` on two lattice widths, runs M54's reverse trial on
/// each, and reports where the narrow run stops matching the aligned
/// window of the wide run.
pub fn compare_widths(
    pattern: &[State],
    narrow: usize,
    wide: usize,
    steps: usize,
) -> Result<WidthReport> {
    let (a0, off_a) = embed(pattern, narrow)?;
    let (b0, off_b) = embed(pattern, wide)?;
    let shift = off_b - off_a;
    let (a, narrow_stopped_at) = reverse_outcome(run_reverse(M54, &a0, steps))?;
    let (b, wide_stopped_at) = reverse_outcome(run_reverse(M54, &b0, steps))?;
    let first_divergent_row = a
        .rows
        .iter()
        .zip(&b.rows)
        .enumerate()
        .step_by(2)
        .find(|(_, (x, y))| x.cells() != &y.cells()[shift..shift + narrow])
        .map(|(t, _)| t);
    Ok(WidthReport {
        narrow,
        wide,
        steps,
        first_divergent_row,
        narrow_stopped_at,
        wide_stopped_at,
    })
}
