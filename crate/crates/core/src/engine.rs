//! Reflexive composition on a fixed lattice of identical machines.
//!
//! One step threads a message through every cell: the boundary input
//! enters the first cell visited, each cell transitions on the message it
//! receives and passes its output on, and whatever leaves the last cell is
//! the row output. The traversal direction alternates every step. Cells
//! keep their positions (the folded view), so a step is an in-place sweep.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::{Machine, MachineId, State, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

impl Direction {
    pub fn reverse(self) -> Self {
        match self {
            Direction::LeftToRight => Direction::RightToLeft,
            Direction::RightToLeft => Direction::LeftToRight,
        }
    }

    /// Direction of step `t` when step 0 runs in direction `first`.
    pub fn at(t: usize, first: Direction) -> Self {
        if t.is_multiple_of(2) {
            first
        } else {
            first.reverse()
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::LeftToRight => "left-to-right",
            Direction::RightToLeft => "right-to-left",
        })
    }
}

/// One configuration of the lattice. Never empty.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeState(Vec<State>);

impl LatticeState {
    pub fn new(cells: Vec<State>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::EmptyLattice);
        }
        Ok(LatticeState(cells))
    }

    /// `0 ↦ S0`, `1 ↦ S1`, position for position.
    pub fn from_bits(bits: &[Symbol]) -> Result<Self> {
        LatticeState::new(bits.iter().map(|b| b.as_state()).collect())
    }

    pub fn to_bits(&self) -> Vec<Symbol> {
        self.0.iter().map(|q| q.as_symbol()).collect()
    }

    pub fn from_u8s(bits: &[u8]) -> Result<Self> {
        LatticeState::new(bits.iter().map(|&b| State::from_bit(b != 0)).collect())
    }

    pub fn all_s0(n: usize) -> Result<Self> {
        LatticeState::new(vec![State::S0; n])
    }

    /// All `S0` except a single `S1` at index `n / 2`.
    pub fn centered_one(n: usize) -> Result<Self> {
        let mut cells = vec![State::S0; n];
        if let Some(c) = cells.get_mut(n / 2) {
            *c = State::S1;
        }
        LatticeState::new(cells)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cells(&self) -> &[State] {
        &self.0
    }

    pub fn into_cells(self) -> Vec<State> {
        self.0
    }

    /// Positions reversed.
    pub fn reversed(&self) -> Self {
        LatticeState(self.0.iter().rev().copied().collect())
    }

    /// Every state relabelled `S0 ↔ S1`.
    pub fn mirrored(&self) -> Self {
        LatticeState(self.0.iter().map(|q| q.mirror()).collect())
    }

    pub fn count_s1(&self) -> usize {
        self.0.iter().filter(|&&q| q == State::S1).count()
    }

    pub fn is_uniform(&self) -> bool {
        self.0.iter().all(|&q| q == self.0[0])
    }

    pub fn bit_string(&self) -> String {
        self.0
            .iter()
            .map(|q| if q.bit() == 1 { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for LatticeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bit_string())
    }
}

impl fmt::Debug for LatticeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeState({})", self.bit_string())
    }
}

impl FromStr for LatticeState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cells = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(State::S0),
                '1' => Ok(State::S1),
                other => Err(Error::Parse {
                    what: "lattice row",
                    input: s.to_string(),
                    reason: format!("unexpected character {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        LatticeState::new(cells)
    }
}

impl Serialize for LatticeState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.bit_string())
    }
}

impl<'de> Deserialize<'de> for LatticeState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sweeps `cells` in place and returns the row output.
pub fn step_in_place(cells: &mut [State], m: &Machine, input: Symbol, dir: Direction) -> Symbol {
    let mut msg = input;
    let mut visit = |q: &mut State| {
        let (next, out) = m.fire(*q, msg);
        *q = next;
        msg = out;
    };
    match dir {
        Direction::LeftToRight => cells.iter_mut().for_each(&mut visit),
        Direction::RightToLeft => cells.iter_mut().rev().for_each(&mut visit),
    }
    msg
}

/// One reflexive-composition step in the folded (fixed-position) view.
pub fn step(
    lattice: &LatticeState,
    m: &Machine,
    input: Symbol,
    dir: Direction,
) -> (LatticeState, Symbol) {
    let mut cells = lattice.0.clone();
    let out = step_in_place(&mut cells, m, input, dir);
    (LatticeState(cells), out)
}

/// The unfolded form of a step: cell `k` receives the composition of the
/// outputs of cells `0..k`, and its destination is written to position
/// `n - 1 - k`. Iterating this without refolding gives the same
/// configurations as [`step`] on even steps and their reversal on odd ones.
pub fn compose_unfolded(cells: &[State], m: &Machine, input: Symbol) -> (Vec<State>, Symbol) {
    let n = cells.len();
    let mut next = vec![State::S0; n];
    let mut msg = input;
    for (k, &q) in cells.iter().enumerate() {
        let (dest, out) = m.fire(q, msg);
        next[n - 1 - k] = dest;
        msg = out;
    }
    (next, msg)
}

/// Where each step's boundary input comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundaryPolicy {
    Constant {
        symbol: Symbol,
    },
    Scripted {
        inputs: Vec<Symbol>,
    },
    /// `i(even) = 0`, `i(odd) = o(t - 1)`.
    ForwardR90,
    /// Greedy two-step trial; see [`run_reverse`].
    ReverseR90Trial,
}

impl BoundaryPolicy {
    pub fn constant(symbol: Symbol) -> Self {
        BoundaryPolicy::Constant { symbol }
    }

    pub fn scripted(inputs: Vec<Symbol>) -> Self {
        BoundaryPolicy::Scripted { inputs }
    }
}

impl fmt::Display for BoundaryPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPolicy::Constant { symbol } => write!(f, "const{symbol}"),
            BoundaryPolicy::Scripted { inputs } => {
                f.write_str("scripted:")?;
                inputs.iter().try_for_each(|s| write!(f, "{s}"))
            }
            BoundaryPolicy::ForwardR90 => f.write_str("forward-r90"),
            BoundaryPolicy::ReverseR90Trial => f.write_str("reverse-r90"),
        }
    }
}

/// Boundary input that makes a state-reporting machine's even rows follow
/// Rule 90 with null boundaries.
pub fn forward_r90_input(t: usize, previous_output: Symbol) -> Symbol {
    if t.is_multiple_of(2) {
        Symbol::Zero
    } else {
        previous_output
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub input: Symbol,
    pub output: Symbol,
    pub direction: Direction,
}

/// A run: `rows[t]` is the configuration before step `t`, so there is one
/// more row than step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub machine: MachineId,
    pub policy: BoundaryPolicy,
    pub first_direction: Direction,
    pub steps: Vec<StepRecord>,
    pub rows: Vec<LatticeState>,
}

impl Trajectory {
    fn start(
        machine: MachineId,
        policy: BoundaryPolicy,
        first: Direction,
        initial: LatticeState,
    ) -> Self {
        Trajectory {
            machine,
            policy,
            first_direction: first,
            steps: Vec::new(),
            rows: vec![initial],
        }
    }

    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    pub fn initial(&self) -> &LatticeState {
        &self.rows[0]
    }

    pub fn last(&self) -> &LatticeState {
        self.rows.last().expect("trajectory has an initial row")
    }

    /// Configuration before step `k`.
    pub fn before(&self, k: usize) -> &LatticeState {
        &self.rows[k]
    }

    /// Configuration after step `k`.
    pub fn after(&self, k: usize) -> &LatticeState {
        &self.rows[k + 1]
    }

    pub fn inputs(&self) -> Vec<Symbol> {
        self.steps.iter().map(|s| s.input).collect()
    }

    pub fn outputs(&self) -> Vec<Symbol> {
        self.steps.iter().map(|s| s.output).collect()
    }

    pub fn even_rows(&self) -> impl Iterator<Item = &LatticeState> {
        self.rows.iter().step_by(2)
    }

    pub fn odd_rows(&self) -> impl Iterator<Item = &LatticeState> {
        self.rows.iter().skip(1).step_by(2)
    }

    fn push(&mut self, input: Symbol, output: Symbol, direction: Direction, after: LatticeState) {
        let t = self.steps.len();
        self.steps.push(StepRecord {
            t,
            input,
            output,
            direction,
        });
        self.rows.push(after);
    }
}

/// [`run_with`] starting left-to-right.
pub fn run(
    machine: MachineId,
    initial: &LatticeState,
    policy: &BoundaryPolicy,
    steps: usize,
) -> Result<Trajectory> {
    run_with(machine, initial, policy, steps, Direction::LeftToRight)
}

pub fn run_with(
    machine: MachineId,
    initial: &LatticeState,
    policy: &BoundaryPolicy,
    steps: usize,
    first: Direction,
) -> Result<Trajectory> {
    if let BoundaryPolicy::ReverseR90Trial = policy {
        return run_reverse_with(machine, initial, steps, first);
    }
    if let BoundaryPolicy::Scripted { inputs } = policy {
        if inputs.len() < steps {
            return Err(Error::ScriptTooShort {
                needed: steps,
                available: inputs.len(),
            });
        }
    }
    let m = machine.machine();
    let mut traj = Trajectory::start(machine, policy.clone(), first, initial.clone());
    let mut cells = initial.cells().to_vec();
    let mut previous = Symbol::Zero;
    for t in 0..steps {
        let input = match policy {
            BoundaryPolicy::Constant { symbol } => *symbol,
            BoundaryPolicy::Scripted { inputs } => inputs[t],
            BoundaryPolicy::ForwardR90 => forward_r90_input(t, previous),
            BoundaryPolicy::ReverseR90Trial => unreachable!(),
        };
        let dir = Direction::at(t, first);
        let output = step_in_place(&mut cells, &m, input, dir);
        traj.push(input, output, dir, LatticeState(cells.clone()));
        previous = output;
    }
    Ok(traj)
}

/// [`run_reverse_with`] starting left-to-right.
pub fn run_reverse(machine: MachineId, initial: &LatticeState, steps: usize) -> Result<Trajectory> {
    run_reverse_with(machine, initial, steps, Direction::LeftToRight)
}

/// Runs step pairs under the reverse Rule-90 boundary constraints
/// `i(odd) = o(odd - 1)` and `o(odd) = 0`.
///
/// For each even `t` the input `0` is tried first: step `t` runs, its
/// output is fed back as `i(t + 1)`, and step `t + 1` runs. The pair is
/// committed if `o(t + 1) = 0`; otherwise input `1` is tried. If neither
/// works the run stops with [`Error::NoPreimage`], carrying everything
/// committed before `t`. Committed pairs are never revisited.
pub fn run_reverse_with(
    machine: MachineId,
    initial: &LatticeState,
    steps: usize,
    first: Direction,
) -> Result<Trajectory> {
    if !steps.is_multiple_of(2) {
        return Err(Error::OddReverseDepth(steps));
    }
    let m = machine.machine();
    let mut traj = Trajectory::start(
        machine,
        BoundaryPolicy::ReverseR90Trial,
        first,
        initial.clone(),
    );
    let mut even_cells = initial.cells().to_vec();
    for t in (0..steps).step_by(2) {
        let (d0, d1) = (Direction::at(t, first), Direction::at(t + 1, first));
        let mut committed = false;
        for trial in Symbol::ALL {
            let mut mid = even_cells.clone();
            let o_even = step_in_place(&mut mid, &m, trial, d0);
            let mut end = mid.clone();
            let o_odd = step_in_place(&mut end, &m, o_even, d1);
            if o_odd == Symbol::Zero {
                traj.push(trial, o_even, d0, LatticeState(mid));
                traj.push(o_even, o_odd, d1, LatticeState(end.clone()));
                even_cells = end;
                committed = true;
                break;
            }
        }
        if !committed {
            return Err(Error::NoPreimage {
                at: t,
                partial: Box::new(traj),
            });
        }
    }
    Ok(traj)
}

/// Splits a reverse-run result into the committed trajectory and the step
/// at which it stopped, if it stopped early.
pub fn reverse_outcome(result: Result<Trajectory>) -> Result<(Trajectory, Option<usize>)> {
    match result {
        Ok(t) => Ok((t, None)),
        Err(Error::NoPreimage { at, partial }) => Ok((*partial, Some(at))),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(s: &str) -> LatticeState {
        s.parse().unwrap()
    }

    const M45: MachineId = MachineId(45);
    const M54: MachineId = MachineId(54);

    #[test]
    fn step_m45_pair() {
        let (next, out) = step(
            &row("01"),
            &M45.machine(),
            Symbol::Zero,
            Direction::LeftToRight,
        );
        assert_eq!(next, row("01"));
        assert_eq!(out, Symbol::One);
    }

    #[test]
    fn single_cell_either_direction() {
        for dir in [Direction::LeftToRight, Direction::RightToLeft] {
            let (next, out) = step(&row("1"), &M45.machine(), Symbol::One, dir);
            assert_eq!(next, row("0"));
            assert_eq!(out, Symbol::One);
        }
    }

    #[test]
    fn quiescent_fixed_point() {
        for id in [44u8, 45, 54, 60] {
            let m = MachineId(id).machine();
            let (next, out) = step(&row("00000"), &m, Symbol::Zero, Direction::RightToLeft);
            assert_eq!(next, row("00000"));
            assert_eq!(out, Symbol::Zero);
        }
    }

    #[test]
    fn empty_lattice_rejected() {
        assert!(matches!(
            LatticeState::new(vec![]),
            Err(Error::EmptyLattice)
        ));
        assert!(LatticeState::from_bits(&[]).is_err());
        assert!("".parse::<LatticeState>().is_err());
        assert!("01x".parse::<LatticeState>().is_err());
    }

    #[test]
    fn bits_round_trip() {
        let bits = [Symbol::Zero, Symbol::One, Symbol::Zero];
        let l = LatticeState::from_bits(&bits).unwrap();
        assert_eq!(l.cells(), &[State::S0, State::S1, State::S0]);
        assert_eq!(l.to_bits(), bits);
        let c = LatticeState::centered_one(19).unwrap();
        assert_eq!(c.count_s1(), 1);
        assert_eq!(c.cells()[9], State::S1);
    }

    #[test]
    fn zero_steps_keeps_initial_only() {
        let t = run(
            M45,
            &row("01001"),
            &BoundaryPolicy::constant(Symbol::Zero),
            0,
        )
        .unwrap();
        assert_eq!(t.rows, vec![row("01001")]);
        assert!(t.steps.is_empty());
        let t = run_reverse(M54, &row("01001"), 0).unwrap();
        assert_eq!(t.rows.len(), 1);
    }

    #[test]
    fn directions_alternate() {
        let t = run(M45, &row("010"), &BoundaryPolicy::constant(Symbol::Zero), 4).unwrap();
        let dirs: Vec<_> = t.steps.iter().map(|s| s.direction).collect();
        use Direction::*;
        assert_eq!(
            dirs,
            vec![LeftToRight, RightToLeft, LeftToRight, RightToLeft]
        );
        let t = run_with(
            M45,
            &row("010"),
            &BoundaryPolicy::ForwardR90,
            2,
            RightToLeft,
        )
        .unwrap();
        assert_eq!(t.steps[0].direction, RightToLeft);
    }

    #[test]
    fn script_underflow() {
        let p = BoundaryPolicy::scripted(vec![Symbol::Zero; 3]);
        assert!(matches!(
            run(M45, &row("01"), &p, 4),
            Err(Error::ScriptTooShort {
                needed: 4,
                available: 3
            })
        ));
        assert!(run(M45, &row("01"), &p, 3).is_ok());
    }

    #[test]
    fn forward_r90_inputs() {
        assert_eq!(forward_r90_input(0, Symbol::One), Symbol::Zero);
        assert_eq!(forward_r90_input(3, Symbol::One), Symbol::One);
        assert_eq!(forward_r90_input(5, Symbol::Zero), Symbol::Zero);
    }

    #[test]
    fn forward_policy_feeds_previous_output() {
        let t = run(M45, &row("1001"), &BoundaryPolicy::ForwardR90, 6).unwrap();
        for s in &t.steps {
            if s.t % 2 == 0 {
                assert_eq!(s.input, Symbol::Zero);
            } else {
                assert_eq!(s.input, t.steps[s.t - 1].output);
            }
        }
    }

    #[test]
    fn reverse_requires_even_depth() {
        assert!(matches!(
            run_reverse(M54, &row("0110"), 3),
            Err(Error::OddReverseDepth(3))
        ));
    }

    #[test]
    fn reverse_quiescent() {
        let t = run_reverse(M54, &LatticeState::all_s0(12).unwrap(), 20).unwrap();
        assert!(t.inputs().iter().all(|&i| i == Symbol::Zero));
        assert!(t.rows.iter().all(|r| r.count_s1() == 0));
    }

    #[test]
    fn reverse_odd_width_without_preimage_stops() {
        // on three null-boundary cells Rule 90 always yields equal end cells
        let err = run_reverse(M54, &row("100"), 4).unwrap_err();
        match err {
            Error::NoPreimage { at, partial } => {
                assert_eq!(at, 0);
                assert_eq!(partial.rows.len(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trajectory_accessors() {
        let t = run(
            M45,
            &row("01001"),
            &BoundaryPolicy::constant(Symbol::Zero),
            4,
        )
        .unwrap();
        for k in 0..3 {
            assert_eq!(t.after(k), t.before(k + 1));
        }
        assert_eq!(t.even_rows().count(), 3);
        assert_eq!(t.odd_rows().count(), 2);
        assert_eq!(t.width(), 5);
    }
}
