use super::geometry::{is_immobile, neighbor, slide_mask, step_mask};
use super::position::Position;
use super::types::{Color, Move, Piece, PieceKind, Square};
use crate::error::{Error, Result};

/// Forward direction index for `color`'s Pawns.
#[inline]
pub(crate) fn forward(color: Color) -> usize {
    match color {
        Color::First => 0,
        Color::Second => 4,
    }
}

#[inline]
fn push_board_move(out: &mut Vec<Move>, piece: Piece, from: Square, to: Square) {
    let owner = piece.owner();
    let zone = owner.promotion_rank();
    if !piece.is_promoted()
        && piece.kind().can_promote()
        && (from.rank() == zone || to.rank() == zone)
    {
        out.push(Move::Board {
            from,
            to,
            promote: true,
        });
        if !is_immobile(owner, piece.kind(), to) {
            out.push(Move::Board {
                from,
                to,
                promote: false,
            });
        }
    } else {
        out.push(Move::Board {
            from,
            to,
            promote: false,
        });
    }
}

/// Moves that obey piece geometry, promotion and drop rules but may leave
/// the mover's King attacked or deliver mate with a Pawn drop.
pub(crate) fn pseudo_moves(pos: &Position, out: &mut Vec<Move>) {
    let side = pos.side_to_move();
    for (from, piece) in pos.pieces() {
        if piece.owner() != side {
            continue;
        }
        let steps = step_mask(piece);
        let slides = slide_mask(piece);
        for dir in 0..8 {
            let bit = 1u8 << dir;
            if slides & bit != 0 {
                let mut cur = from;
                while let Some(to) = neighbor(cur, dir) {
                    match pos.piece_at(to) {
                        None => push_board_move(out, piece, from, to),
                        Some(target) => {
                            if target.owner() != side {
                                push_board_move(out, piece, from, to);
                            }
                            break;
                        }
                    }
                    cur = to;
                }
            } else if steps & bit != 0 {
                if let Some(to) = neighbor(from, dir) {
                    if pos.piece_at(to).is_none_or(|t| t.owner() != side) {
                        push_board_move(out, piece, from, to);
                    }
                }
            }
        }
    }

    let pawn_files = pos.pawn_files(side);
    for kind in PieceKind::HAND {
        if pos.hand_count(side, kind) == 0 {
            continue;
        }
        for to in Square::all() {
            if pos.piece_at(to).is_some() {
                continue;
            }
            if kind == PieceKind::Pawn
                && (is_immobile(side, kind, to) || pawn_files[to.file() as usize] > 0)
            {
                continue;
            }
            out.push(Move::Drop { kind, to });
        }
    }
}

/// Applies a move without checking legality.
pub(crate) fn make_move(pos: &Position, m: Move) -> Position {
    let mut next = *pos;
    let side = pos.side;
    match m {
        Move::Board { from, to, promote } => {
            let piece = pos.board[from.index()].expect("move from an empty square");
            if let Some(captured) = pos.board[to.index()] {
                next.hands[side.index()][captured.kind().index()] += 1;
            }
            next.board[to.index()] = Some(if promote { piece.promote() } else { piece });
            next.board[from.index()] = None;
        }
        Move::Drop { kind, to } => {
            next.hands[side.index()][kind.index()] -= 1;
            next.board[to.index()] = Some(Piece::new_unchecked(side, kind, false));
        }
    }
    next.side = side.opponent();
    next
}

/// Whether the Pawn just dropped on `to` by the player who is no longer to
/// move gives check to the side to move.
#[inline]
pub(crate) fn pawn_drop_gives_check(after: &Position, to: Square) -> bool {
    let dropper = after.side_to_move().opponent();
    neighbor(to, forward(dropper)).is_some_and(|front| {
        after.piece_at(front)
            == Some(Piece::new_unchecked(
                dropper.opponent(),
                PieceKind::King,
                false,
            ))
    })
}

fn is_legal_after(pos: &Position, m: Move, after: &Position) -> bool {
    let mover = pos.side_to_move();
    if after.in_check(mover) {
        return false;
    }
    if let Move::Drop {
        kind: PieceKind::Pawn,
        to,
    } = m
    {
        if pawn_drop_gives_check(after, to) && !has_legal_move(after) {
            return false;
        }
    }
    true
}

/// All legal moves of the side to move.
pub fn legal_moves(pos: &Position) -> Vec<Move> {
    let mut pseudo = Vec::with_capacity(64);
    pseudo_moves(pos, &mut pseudo);
    pseudo.retain(|&m| is_legal_after(pos, m, &make_move(pos, m)));
    pseudo
}

/// Whether the side to move has at least one legal move.
pub fn has_legal_move(pos: &Position) -> bool {
    let mut pseudo = Vec::with_capacity(64);
    pseudo_moves(pos, &mut pseudo);
    // drops of non-Pawns and board moves first: they never need the mate test
    pseudo.sort_by_key(|m| {
        matches!(
            m,
            Move::Drop {
                kind: PieceKind::Pawn,
                ..
            }
        )
    });
    pseudo
        .iter()
        .any(|&m| is_legal_after(pos, m, &make_move(pos, m)))
}

/// Whether the side to move is checkmated (in check with no legal move).
pub fn is_checkmate(pos: &Position) -> bool {
    pos.in_check(pos.side_to_move()) && !has_legal_move(pos)
}

/// Applies `m`, rejecting it unless it is one of [`legal_moves`].
pub fn apply_move(pos: &Position, m: Move) -> Result<Position> {
    if legal_moves(pos).contains(&m) {
        Ok(make_move(pos, m))
    } else {
        Err(Error::IllegalMove(m.to_string()))
    }
}
