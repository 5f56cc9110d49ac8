//! The 256 elementary machines: two states, two message symbols.
//!
//! A machine is a pair of total tables over `State × Symbol`: a transition
//! table `delta` and an output table `phi`. Its 8-bit identifier lists the
//! table entries in the order `(S0,0) (S0,1) (S1,0) (S1,1)`, destination
//! bit before output bit, most significant first.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A message value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Symbol {
    Zero,
    One,
}

impl Symbol {
    pub const ALL: [Symbol; 2] = [Symbol::Zero, Symbol::One];

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Symbol::One
        } else {
            Symbol::Zero
        }
    }

    pub fn bit(self) -> u8 {
        self as u8
    }

    pub fn complement(self) -> Self {
        match self {
            Symbol::Zero => Symbol::One,
            Symbol::One => Symbol::Zero,
        }
    }

    /// The state carrying the same bit (`0 ↔ S0`, `1 ↔ S1`).
    pub fn as_state(self) -> State {
        State::from_bit(self == Symbol::One)
    }
}

impl From<Symbol> for u8 {
    fn from(s: Symbol) -> u8 {
        s.bit()
    }
}

impl TryFrom<u8> for Symbol {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Symbol::Zero),
            1 => Ok(Symbol::One),
            _ => Err(Error::Domain(format!("symbol must be 0 or 1, got {v}"))),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.bit(), f)
    }
}

/// A machine state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum State {
    S0,
    S1,
}

impl State {
    pub const ALL: [State; 2] = [State::S0, State::S1];

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            State::S1
        } else {
            State::S0
        }
    }

    pub fn bit(self) -> u8 {
        self as u8
    }

    /// Swaps `S0` and `S1`.
    pub fn mirror(self) -> Self {
        match self {
            State::S0 => State::S1,
            State::S1 => State::S0,
        }
    }

    pub fn as_symbol(self) -> Symbol {
        Symbol::from_bit(self == State::S1)
    }
}

impl From<State> for u8 {
    fn from(s: State) -> u8 {
        s.bit()
    }
}

impl TryFrom<u8> for State {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(State::S0),
            1 => Ok(State::S1),
            _ => Err(Error::Domain(format!("state must be 0 or 1, got {v}"))),
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::S0 => f.pad("S0"),
            State::S1 => f.pad("S1"),
        }
    }
}

/// Identifier of an elementary machine, `0..=255`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MachineId(pub u8);

impl MachineId {
    pub fn new(id: i64) -> Result<Self> {
        u8::try_from(id)
            .map(MachineId)
            .map_err(|_| Error::MachineIdOutOfRange(id))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = MachineId> {
        (0..=255u8).map(MachineId)
    }

    pub fn machine(self) -> Machine {
        Machine::decode(self)
    }

    /// The eight-character bit string, most significant bit first.
    pub fn bit_string(self) -> String {
        format!("{:08b}", self.0)
    }
}

impl fmt::Display for MachineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for MachineId {
    type Err = Error;

    /// Accepts a decimal id (`45`, `M45`) or an 8-character bit string
    /// (`00101101`).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = |reason: &str| Error::Parse {
            what: "machine id",
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if t.len() == 8 && t.bytes().all(|b| b == b'0' || b == b'1') {
            return u8::from_str_radix(t, 2)
                .map(MachineId)
                .map_err(|e| bad(&e.to_string()));
        }
        let digits = t.strip_prefix(['M', 'm']).unwrap_or(t);
        let v: i64 = digits
            .parse()
            .map_err(|_| bad("expected decimal id or 8-bit string"))?;
        MachineId::new(v)
    }
}

/// Partition of the machines by how their output depends on input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MachineClass {
    /// Output ignores the input and differs between the two states.
    StateReporting,
    /// Some state emits different outputs for different inputs.
    MessagePropagating,
    /// Output ignores the input and is the same in both states.
    ConstantNonReporting,
}

impl fmt::Display for MachineClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MachineClass::StateReporting => "state-reporting",
            MachineClass::MessagePropagating => "message-propagating",
            MachineClass::ConstantNonReporting => "constant-non-reporting",
        })
    }
}

#[inline]
fn slot(q: State, i: Symbol) -> usize {
    ((q as usize) << 1) | i as usize
}

/// A two-state, two-symbol transducer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Machine {
    delta: [State; 4],
    phi: [Symbol; 4],
}

impl Machine {
    /// Builds a machine from closures over the full domain.
    pub fn from_fn(
        mut delta: impl FnMut(State, Symbol) -> State,
        mut phi: impl FnMut(State, Symbol) -> Symbol,
    ) -> Self {
        let mut m = Machine {
            delta: [State::S0; 4],
            phi: [Symbol::Zero; 4],
        };
        for q in State::ALL {
            for i in Symbol::ALL {
                m.delta[slot(q, i)] = delta(q, i);
                m.phi[slot(q, i)] = phi(q, i);
            }
        }
        m
    }

    pub fn decode(id: MachineId) -> Self {
        let bits = id.0;
        let at = |pos: u8| (bits >> pos) & 1 == 1;
        Machine::from_fn(
            |q, i| State::from_bit(at(7 - 2 * slot(q, i) as u8)),
            |q, i| Symbol::from_bit(at(6 - 2 * slot(q, i) as u8)),
        )
    }

    pub fn encode(&self) -> MachineId {
        let mut id = 0u8;
        for k in 0..4 {
            id = (id << 1) | self.delta[k].bit();
            id = (id << 1) | self.phi[k].bit();
        }
        MachineId(id)
    }

    #[inline]
    pub fn delta(&self, q: State, i: Symbol) -> State {
        self.delta[slot(q, i)]
    }

    #[inline]
    pub fn phi(&self, q: State, i: Symbol) -> Symbol {
        self.phi[slot(q, i)]
    }

    /// Destination and output for one input.
    #[inline]
    pub fn fire(&self, q: State, i: Symbol) -> (State, Symbol) {
        let k = slot(q, i);
        (self.delta[k], self.phi[k])
    }

    /// Relabels messages `0 ↔ 1` on both input and output.
    pub fn complement(&self) -> Self {
        Machine::from_fn(
            |q, i| self.delta(q, i.complement()),
            |q, i| self.phi(q, i.complement()).complement(),
        )
    }

    /// Relabels states `S0 ↔ S1`.
    pub fn mirror(&self) -> Self {
        Machine::from_fn(
            |q, i| self.delta(q.mirror(), i).mirror(),
            |q, i| self.phi(q.mirror(), i),
        )
    }

    /// Exchanges the roles of state and message: inputs and outputs become
    /// source and destination states, and vice versa.
    pub fn transpose(&self) -> Self {
        let mut delta = [State::S0; 4];
        let mut phi = [Symbol::Zero; 4];
        for q in State::ALL {
            for i in Symbol::ALL {
                let k = slot(i.as_state(), q.as_symbol());
                delta[k] = self.phi(q, i).as_state();
                phi[k] = self.delta(q, i).as_symbol();
            }
        }
        Machine { delta, phi }
    }

    /// The constant per-state outputs, if the output never depends on input.
    pub fn constant_outputs(&self) -> Option<[Symbol; 2]> {
        let o0 = self.phi(State::S0, Symbol::Zero);
        let o1 = self.phi(State::S1, Symbol::Zero);
        (o0 == self.phi(State::S0, Symbol::One) && o1 == self.phi(State::S1, Symbol::One))
            .then_some([o0, o1])
    }

    pub fn classify(&self) -> MachineClass {
        match self.constant_outputs() {
            None => MachineClass::MessagePropagating,
            Some([a, b]) if a != b => MachineClass::StateReporting,
            Some(_) => MachineClass::ConstantNonReporting,
        }
    }

    /// Output reported for state `q` by a state-reporting machine.
    pub fn reported(&self, q: State) -> Option<Symbol> {
        match self.classify() {
            MachineClass::StateReporting => Some(self.phi(q, Symbol::Zero)),
            _ => None,
        }
    }

    /// Human-readable transition table, one row per `(state, input)`.
    pub fn table(&self) -> String {
        let mut s = format!("M{} ({})\n", self.encode(), self.encode().bit_string());
        s.push_str("state input dest output\n");
        for q in State::ALL {
            for i in Symbol::ALL {
                let (d, o) = self.fire(q, i);
                s.push_str(&format!("{q:<5} {i:<5} {d:<4} {o}\n"));
            }
        }
        s
    }

    /// Parses the format written by [`Machine::table`]. Lines that are not
    /// four-field table rows are ignored; all four `(state, input)` rows must
    /// be present exactly once.
    pub fn parse_table(text: &str) -> Result<Self> {
        let bad = |reason: String| Error::Parse {
            what: "machine table",
            input: text.to_string(),
            reason,
        };
        let parse_state = |t: &str| match t {
            "S0" | "s0" => Some(State::S0),
            "S1" | "s1" => Some(State::S1),
            _ => None,
        };
        let parse_symbol = |t: &str| match t {
            "0" => Some(Symbol::Zero),
            "1" => Some(Symbol::One),
            _ => None,
        };
        let mut seen = [None::<(State, Symbol)>; 4];
        for line in text.lines() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [q, i, d, o] = fields[..] else { continue };
            let (Some(q), Some(i), Some(d), Some(o)) = (
                parse_state(q),
                parse_symbol(i),
                parse_state(d),
                parse_symbol(o),
            ) else {
                continue;
            };
            let k = slot(q, i);
            if seen[k].replace((d, o)).is_some() {
                return Err(bad(format!("row ({q}, {i}) given twice")));
            }
        }
        let mut m = Machine {
            delta: [State::S0; 4],
            phi: [Symbol::Zero; 4],
        };
        for (k, entry) in seen.iter().enumerate() {
            let (d, o) = entry.ok_or_else(|| bad(format!("missing table row {k}")))?;
            m.delta[k] = d;
            m.phi[k] = o;
        }
        Ok(m)
    }
}

impl From<MachineId> for Machine {
    fn from(id: MachineId) -> Self {
        Machine::decode(id)
    }
}

impl FromStr for Machine {
    type Err = Error;

    /// Decimal id, 8-bit string, or a transition table.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().lines().count() > 1 {
            Machine::parse_table(s)
        } else {
            s.parse::<MachineId>().map(Machine::decode)
        }
    }
}

/// `{id, complement, mirror, complement∘mirror}` with duplicates collapsed.
pub fn equivalence_class(id: MachineId) -> BTreeSet<MachineId> {
    let m = id.machine();
    [m, m.complement(), m.mirror(), m.complement().mirror()]
        .iter()
        .map(Machine::encode)
        .collect()
}

/// Smallest id in the equivalence class.
pub fn canonical(id: MachineId) -> MachineId {
    *equivalence_class(id).first().expect("class contains id")
}

/// Canonical representatives of every class, ascending.
pub fn canonical_ids() -> Vec<MachineId> {
    MachineId::all().filter(|&id| canonical(id) == id).collect()
}
