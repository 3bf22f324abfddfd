//! SFEN-style text form.
//!
//! `<rank5>/<rank4>/<rank3>/<rank2>/<rank1> <b|w> <hands|-> 1`, each rank
//! listed from file a to file e. Uppercase is the first player, lowercase the
//! second, `+` marks promotion and digits are runs of empty squares. Hands
//! list R, B, G, S, P for the first player and then the second, each entry
//! prefixed by its count when the count exceeds one.

use super::position::Position;
use super::types::{Color, Piece, PieceKind, Square, FILES, NUM_SQUARES, RANKS};
use crate::error::{Error, Result};

pub const INITIAL_SFEN: &str = "rbsgk/4p/5/P4/KGSBR b - 1";

const HAND_ORDER: [PieceKind; 5] = [
    PieceKind::Rook,
    PieceKind::Bishop,
    PieceKind::Gold,
    PieceKind::Silver,
    PieceKind::Pawn,
];

pub fn to_sfen(pos: &Position) -> String {
    let mut out = String::with_capacity(40);
    for rank in (0..RANKS).rev() {
        let mut empty = 0;
        for file in 0..FILES {
            match pos.piece_at(Square::new(file, rank).unwrap()) {
                Some(p) => {
                    if empty > 0 {
                        out.push((b'0' + empty) as char);
                        empty = 0;
                    }
                    out.push_str(&p.sfen());
                }
                None => empty += 1,
            }
        }
        if empty > 0 {
            out.push((b'0' + empty) as char);
        }
        if rank > 0 {
            out.push('/');
        }
    }
    out.push_str(match pos.side_to_move() {
        Color::First => " b ",
        Color::Second => " w ",
    });
    let mut hand = String::new();
    for color in Color::ALL {
        for kind in HAND_ORDER {
            let n = pos.hand_count(color, kind);
            if n == 0 {
                continue;
            }
            if n > 1 {
                hand.push_str(&n.to_string());
            }
            let c = kind.letter();
            hand.push(if color == Color::First {
                c
            } else {
                c.to_ascii_lowercase()
            });
        }
    }
    if hand.is_empty() {
        hand.push('-');
    }
    out.push_str(&hand);
    out.push_str(" 1");
    out
}

pub fn from_sfen(text: &str) -> Result<Position> {
    let fail = |reason: &str| Error::Sfen {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let mut fields = text.split_whitespace();
    let board_field = fields.next().ok_or_else(|| fail("empty input"))?;
    let side_field = fields.next().ok_or_else(|| fail("missing side to move"))?;
    let hand_field = fields.next().unwrap_or("-");
    if let Some(counter) = fields.next() {
        if counter.parse::<u32>().is_err() {
            return Err(fail("move counter is not a number"));
        }
    }
    if fields.next().is_some() {
        return Err(fail("trailing fields"));
    }

    let mut board = [None; NUM_SQUARES];
    let ranks: Vec<&str> = board_field.split('/').collect();
    if ranks.len() != RANKS as usize {
        return Err(fail("expected five ranks"));
    }
    for (i, group) in ranks.iter().enumerate() {
        let rank = RANKS - 1 - i as u8;
        let mut file = 0u8;
        let mut promoted = false;
        for c in group.chars() {
            if c == '+' {
                if promoted {
                    return Err(fail("double promotion marker"));
                }
                promoted = true;
                continue;
            }
            if let Some(d) = c.to_digit(10) {
                if promoted || d == 0 {
                    return Err(fail("bad empty-run digit"));
                }
                file += d as u8;
                if file > FILES {
                    return Err(fail("rank overflows five files"));
                }
                continue;
            }
            let kind = PieceKind::from_letter(c).ok_or_else(|| fail("unknown piece letter"))?;
            let owner = if c.is_ascii_uppercase() {
                Color::First
            } else {
                Color::Second
            };
            let piece = Piece::new(owner, kind, promoted)
                .ok_or_else(|| fail("piece cannot be promoted"))?;
            let sq = Square::new(file, rank).ok_or_else(|| fail("rank overflows five files"))?;
            board[sq.index()] = Some(piece);
            file += 1;
            promoted = false;
        }
        if promoted {
            return Err(fail("dangling promotion marker"));
        }
        if file != FILES {
            return Err(fail("rank does not cover five files"));
        }
    }

    let side = match side_field {
        "b" => Color::First,
        "w" => Color::Second,
        _ => return Err(fail("side to move must be 'b' or 'w'")),
    };

    let mut hands = [[0u8; 5]; 2];
    if hand_field != "-" {
        let mut count: Option<u32> = None;
        for c in hand_field.chars() {
            if let Some(d) = c.to_digit(10) {
                count = Some(count.unwrap_or(0) * 10 + d);
                continue;
            }
            let kind = PieceKind::from_letter(c).ok_or_else(|| fail("unknown hand letter"))?;
            if kind == PieceKind::King {
                return Err(fail("King in hand"));
            }
            let n = count.take().unwrap_or(1);
            if n == 0 || n > 2 {
                return Err(fail("hand count out of range"));
            }
            let owner = if c.is_ascii_uppercase() {
                Color::First
            } else {
                Color::Second
            };
            let slot = &mut hands[owner.index()][kind.index()];
            *slot = slot.saturating_add(n as u8);
        }
        if count.is_some() {
            return Err(fail("hand count without piece"));
        }
    }

    Position::new(board, hands, side)
}
