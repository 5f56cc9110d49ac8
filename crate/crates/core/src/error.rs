use thiserror::Error;

use crate::engine::Trajectory;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("machine id {0} is outside 0..=255")]
    MachineIdOutOfRange(i64),

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("lattice must contain at least one cell")]
    EmptyLattice,

    #[error("scripted policy supplies {available} inputs but {needed} steps were requested")]
    ScriptTooShort { needed: usize, available: usize },

    #[error("reverse runs take an even number of steps, got {0}")]
    OddReverseDepth(usize),

    /// The reverse boundary trial found no input at step `at`. The
    /// trajectory committed up to that point is kept.
    #[error("no single-bit input extends the reverse trajectory at step {at}")]
    NoPreimage { at: usize, partial: Box<Trajectory> },

    #[error("brute-force preimage search supports rows up to {max} cells, got {len}")]
    PreimageCapacity { len: usize, max: usize },

    #[error("row lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("atlas needs 256 tiles in id order, found {0}")]
    MissingTiles(usize),

    #[error("{0}")]
    Domain(String),
}
