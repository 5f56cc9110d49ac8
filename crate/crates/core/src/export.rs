//! Trajectory documents.
//!
//! JSON layout:
//!
//! ```json
//! {
//!   "machine_id": 45,
//!   "n": 5,
//!   "policy": {"kind": "constant", "symbol": 0},
//!   "first_direction": "left-to-right",
//!   "initial": "01001",
//!   "no_preimage_at": null,
//!   "steps": [
//!     {"t": 0, "input": 0, "output": 1, "direction": "left-to-right", "row": "01101"}
//!   ]
//! }
//! ```
//!
//! `row` is the configuration after step `t`. The text format is one
//! `0`/`1` row per line, initial row first.

use serde::{Deserialize, Serialize};

use crate::engine::{BoundaryPolicy, Direction, LatticeState, StepRecord, Trajectory};
use crate::error::{Error, Result};
use crate::machine::{MachineId, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub t: usize,
    pub input: Symbol,
    pub output: Symbol,
    pub direction: Direction,
    pub row: LatticeState,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryDoc {
    pub machine_id: MachineId,
    pub n: usize,
    pub policy: BoundaryPolicy,
    pub first_direction: Direction,
    pub initial: LatticeState,
    pub no_preimage_at: Option<usize>,
    pub steps: Vec<StepDoc>,
}

impl TrajectoryDoc {
    pub fn new(traj: &Trajectory, no_preimage_at: Option<usize>) -> Self {
        TrajectoryDoc {
            machine_id: traj.machine,
            n: traj.width(),
            policy: traj.policy.clone(),
            first_direction: traj.first_direction,
            initial: traj.initial().clone(),
            no_preimage_at,
            steps: traj
                .steps
                .iter()
                .map(|s| StepDoc {
                    t: s.t,
                    input: s.input,
                    output: s.output,
                    direction: s.direction,
                    row: traj.after(s.t).clone(),
                })
                .collect(),
        }
    }

    pub fn into_trajectory(self) -> Result<Trajectory> {
        let mut rows = vec![self.initial];
        let mut steps = Vec::with_capacity(self.steps.len());
        for (k, s) in self.steps.into_iter().enumerate() {
            if s.t != k || s.row.len() != self.n {
                return Err(Error::Domain(format!(
                    "step record {k} is out of sequence or mis-sized"
                )));
            }
            steps.push(StepRecord {
                t: s.t,
                input: s.input,
                output: s.output,
                direction: s.direction,
            });
            rows.push(s.row);
        }
        if rows[0].len() != self.n {
            return Err(Error::LengthMismatch(rows[0].len(), self.n));
        }
        Ok(Trajectory {
            machine: self.machine_id,
            policy: self.policy,
            first_direction: self.first_direction,
            steps,
            rows,
        })
    }
}

pub fn to_json(traj: &Trajectory, no_preimage_at: Option<usize>) -> String {
    serde_json::to_string_pretty(&TrajectoryDoc::new(traj, no_preimage_at))
        .expect("trajectory serialises")
}

pub fn from_json(text: &str) -> Result<(Trajectory, Option<usize>)> {
    let doc: TrajectoryDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        what: "trajectory json",
        input: text.chars().take(80).collect(),
        reason: e.to_string(),
    })?;
    let stop = doc.no_preimage_at;
    Ok((doc.into_trajectory()?, stop))
}

pub fn rows_text(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(traj.rows.len() * (traj.width() + 1));
    for r in &traj.rows {
        out.push_str(&r.bit_string());
        out.push('\n');
    }
    out
}
