//! Minishogi game mechanics: board and piece model, legal move generation,
//! attack detection, symmetry transforms and the SFEN-style text form.

mod geometry;
mod movegen;
mod position;
mod sfen;
mod types;

pub(crate) use geometry::{is_immobile, neighbor, opposite, slide_mask, step_mask};
#[cfg(test)]
pub(crate) use movegen::make_move;
pub(crate) use movegen::pawn_drop_gives_check;
pub use movegen::{apply_move, has_legal_move, is_checkmate, legal_moves};
pub use position::Position;
pub use sfen::{from_sfen, to_sfen, INITIAL_SFEN};
pub use types::{Color, Move, Piece, PieceKind, Square, FILES, NUM_SQUARES, RANKS};

/// The standard starting position.
pub fn initial_position() -> Position {
    Position::initial()
}
