use thiserror::Error;

use crate::rules::{Color, PieceKind};

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed position text {text:?}: {reason}")]
    Sfen { text: String, reason: String },

    #[error("{0:?} player has no King on the board")]
    MissingKing(Color),

    #[error("{0:?} player has more than one King")]
    ExtraKing(Color),

    #[error("{kind:?} pieces total {found}, expected 2")]
    Conservation { kind: PieceKind, found: u8 },

    #[error("move {0} is not legal in this position")]
    IllegalMove(String),

    #[error("rank {rank} is outside [0, {total})")]
    RankOutOfRange { rank: u64, total: u64 },

    #[error("position is not in the candidate space: {0}")]
    NotCandidate(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
