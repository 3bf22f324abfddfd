use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::geometry::{neighbor, opposite, slide_mask, step_mask};
use super::types::{Color, Piece, PieceKind, Square, NUM_SQUARES};
use crate::error::{Error, Result};

/// Board occupancy, both hands and the side to move.
///
/// Hands are indexed by [`PieceKind::index`] for the five non-King kinds.
/// Values are plain data; every constructor that accepts outside input
/// validates the conservation law (two units of every kind, one King each).
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub(crate) board: [Option<Piece>; NUM_SQUARES],
    pub(crate) hands: [[u8; 5]; 2],
    pub(crate) side: Color,
}

impl Position {
    /// Builds a position and checks it against the conservation law.
    pub fn new(
        board: [Option<Piece>; NUM_SQUARES],
        hands: [[u8; 5]; 2],
        side: Color,
    ) -> Result<Position> {
        let pos = Position { board, hands, side };
        pos.validate()?;
        Ok(pos)
    }

    /// Builds a position from a board, placing every non-King piece that
    /// is not on the board into `holder`'s hand.
    pub fn with_rest_in_hand(
        board: [Option<Piece>; NUM_SQUARES],
        side: Color,
        holder: Color,
    ) -> Result<Position> {
        let mut hands = [[0u8; 5]; 2];
        let counts = board_counts(&board);
        for kind in PieceKind::HAND {
            let on_board = counts[kind.index()];
            if on_board > 2 {
                return Err(Error::Conservation {
                    kind,
                    found: on_board,
                });
            }
            hands[holder.index()][kind.index()] = 2 - on_board;
        }
        Position::new(board, hands, side)
    }

    pub fn validate(&self) -> Result<()> {
        for color in Color::ALL {
            let kings = self
                .board
                .iter()
                .flatten()
                .filter(|p| p.kind() == PieceKind::King && p.owner() == color)
                .count();
            match kings {
                0 => return Err(Error::MissingKing(color)),
                1 => {}
                _ => return Err(Error::ExtraKing(color)),
            }
        }
        let counts = board_counts(&self.board);
        for kind in PieceKind::HAND {
            let i = kind.index();
            let found = counts[i] + self.hands[0][i] + self.hands[1][i];
            if found != 2 {
                return Err(Error::Conservation { kind, found });
            }
        }
        Ok(())
    }

    #[inline]
    pub fn piece_at(&self, sq: Square) -> Option<Piece> {
        self.board[sq.index()]
    }

    #[inline]
    pub fn side_to_move(&self) -> Color {
        self.side
    }

    #[inline]
    pub fn hand_count(&self, color: Color, kind: PieceKind) -> u8 {
        if kind == PieceKind::King {
            0
        } else {
            self.hands[color.index()][kind.index()]
        }
    }

    pub fn hands(&self) -> [[u8; 5]; 2] {
        self.hands
    }

    pub fn board(&self) -> &[Option<Piece>; NUM_SQUARES] {
        &self.board
    }

    pub fn pieces(&self) -> impl Iterator<Item = (Square, Piece)> + '_ {
        Square::all().filter_map(move |sq| self.board[sq.index()].map(|p| (sq, p)))
    }

    pub fn king_square(&self, color: Color) -> Square {
        let king = Piece::new_unchecked(color, PieceKind::King, false);
        let idx = self
            .board
            .iter()
            .position(|p| *p == Some(king))
            .expect("position without a King");
        Square::from_index_unchecked(idx as u8)
    }

    /// True iff some piece of `by` attacks `sq` given the current occupancy.
    pub fn is_attacked(&self, sq: Square, by: Color) -> bool {
        for dir in 0..8 {
            let toward = opposite(dir);
            let mut cur = sq;
            let mut distance = 0;
            while let Some(next) = neighbor(cur, dir) {
                distance += 1;
                cur = next;
                if let Some(p) = self.board[cur.index()] {
                    if p.owner() == by {
                        let bit = 1u8 << toward;
                        if slide_mask(p) & bit != 0 || (distance == 1 && step_mask(p) & bit != 0) {
                            return true;
                        }
                    }
                    break;
                }
            }
        }
        false
    }

    /// Whether `color`'s King is attacked.
    #[inline]
    pub fn in_check(&self, color: Color) -> bool {
        self.is_attacked(self.king_square(color), color.opponent())
    }

    /// Mirror image across the central file. Hands and turn are unchanged.
    pub fn hflip(&self) -> Position {
        let mut board = [None; NUM_SQUARES];
        for sq in Square::all() {
            board[sq.hflip().index()] = self.board[sq.index()];
        }
        Position {
            board,
            hands: self.hands,
            side: self.side,
        }
    }

    /// Rotates the board by 180 degrees and swaps the roles of the players,
    /// including hands and the side to move.
    pub fn rotate(&self) -> Position {
        let mut board = [None; NUM_SQUARES];
        for sq in Square::all() {
            board[sq.rotate().index()] =
                self.board[sq.index()].map(|p| p.with_owner(p.owner().opponent()));
        }
        Position {
            board,
            hands: [self.hands[1], self.hands[0]],
            side: self.side.opponent(),
        }
    }

    /// The standard Minishogi starting position.
    pub fn initial() -> Position {
        use PieceKind::*;
        let mut board = [None; NUM_SQUARES];
        let back = [King, Gold, Silver, Bishop, Rook];
        for (file, kind) in back.into_iter().enumerate() {
            let sq = Square::new(file as u8, 0).unwrap();
            board[sq.index()] = Some(Piece::new_unchecked(Color::First, kind, false));
            board[sq.rotate().index()] = Some(Piece::new_unchecked(Color::Second, kind, false));
        }
        let pawn = Square::new(0, 1).unwrap();
        board[pawn.index()] = Some(Piece::new_unchecked(Color::First, Pawn, false));
        board[pawn.rotate().index()] = Some(Piece::new_unchecked(Color::Second, Pawn, false));
        Position {
            board,
            hands: [[0; 5]; 2],
            side: Color::First,
        }
    }

    /// Counts of (unpromoted) Pawns of `color` per file.
    pub(crate) fn pawn_files(&self, color: Color) -> [u8; 5] {
        let mut files = [0u8; 5];
        for (sq, p) in self.pieces() {
            if p.owner() == color && p.is_unpromoted_pawn() {
                files[sq.file() as usize] += 1;
            }
        }
        files
    }

    /// No doubled unpromoted Pawns and no unpromoted Pawn on its owner's last rank.
    pub(crate) fn pawns_ok(&self) -> bool {
        let mut files = [[0u8; 5]; 2];
        for (sq, p) in self.pieces() {
            if p.is_unpromoted_pawn() {
                let owner = p.owner();
                if sq.rank() == owner.promotion_rank() {
                    return false;
                }
                let n = &mut files[owner.index()][sq.file() as usize];
                *n += 1;
                if *n > 1 {
                    return false;
                }
            }
        }
        true
    }

    #[inline]
    pub(crate) fn set(&mut self, sq: Square, piece: Option<Piece>) {
        self.board[sq.index()] = piece;
    }

    /// Lexicographic comparison: the 25 square codes in scan order (pieces
    /// sort before empty squares), then the first player's hand, then the
    /// second player's hand (kinds in canonical order), then the side to move.
    pub fn position_order(&self, other: &Position) -> Ordering {
        fn code(p: Option<Piece>) -> u8 {
            p.map_or(u8::MAX, Piece::code)
        }
        self.board
            .iter()
            .map(|p| code(*p))
            .cmp(other.board.iter().map(|p| code(*p)))
            .then_with(|| self.hands.cmp(&other.hands))
            .then_with(|| self.side.cmp(&other.side))
    }
}

impl Hash for Position {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let mut bytes = [0u8; 36];
        for (b, p) in bytes.iter_mut().zip(&self.board) {
            *b = p.map_or(0, Piece::code);
        }
        bytes[25..30].copy_from_slice(&self.hands[0]);
        bytes[30..35].copy_from_slice(&self.hands[1]);
        bytes[35] = self.side as u8;
        state.write(&bytes);
    }
}

impl PartialOrd for Position {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Position {
    fn cmp(&self, other: &Self) -> Ordering {
        self.position_order(other)
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Position({})", super::sfen::to_sfen(self))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::sfen::to_sfen(self))
    }
}

pub(crate) fn board_counts(board: &[Option<Piece>; NUM_SQUARES]) -> [u8; 6] {
    let mut counts = [0u8; 6];
    for p in board.iter().flatten() {
        counts[p.kind().index()] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(s: &str) -> Square {
        Square::parse(s).unwrap()
    }

    fn kings(first: &str, second: &str) -> [Option<Piece>; NUM_SQUARES] {
        let mut board = [None; NUM_SQUARES];
        board[sq(first).index()] = Piece::new(Color::First, PieceKind::King, false);
        board[sq(second).index()] = Piece::new(Color::Second, PieceKind::King, false);
        board
    }

    #[test]
    fn initial_position_conserves_pieces() {
        let pos = Position::initial();
        pos.validate().unwrap();
        assert_eq!(pos.king_square(Color::First), sq("a1"));
        assert_eq!(pos.king_square(Color::Second), sq("e5"));
        assert!(!pos.in_check(Color::First));
        assert!(!pos.in_check(Color::Second));
    }

    #[test]
    fn adjacent_kings_attack_each_other() {
        let pos =
            Position::with_rest_in_hand(kings("c3", "c4"), Color::First, Color::First).unwrap();
        assert!(pos.is_attacked(sq("c4"), Color::First));
        assert!(pos.is_attacked(sq("c3"), Color::Second));
    }

    #[test]
    fn rook_on_open_file_and_blocked() {
        let mut board = kings("c1", "e3");
        board[sq("a1").index()] = Piece::new(Color::First, PieceKind::Rook, false);
        let open = Position::with_rest_in_hand(board, Color::First, Color::First).unwrap();
        assert!(open.is_attacked(sq("a5"), Color::First));

        board[sq("a3").index()] = Piece::new(Color::Second, PieceKind::Pawn, false);
        let blocked = Position::with_rest_in_hand(board, Color::First, Color::First).unwrap();
        assert!(!blocked.is_attacked(sq("a5"), Color::First));
        assert!(blocked.is_attacked(sq("a3"), Color::First));
    }

    #[test]
    fn promoted_silver_attacks_sideways() {
        let mut board = kings("e1", "a2");
        board[sq("b2").index()] = Piece::new(Color::First, PieceKind::Silver, true);
        let pos = Position::with_rest_in_hand(board, Color::First, Color::Second).unwrap();
        assert!(pos.in_check(Color::Second));
        // an unpromoted Silver does not
        board[sq("b2").index()] = Piece::new(Color::First, PieceKind::Silver, false);
        let pos = Position::with_rest_in_hand(board, Color::First, Color::Second).unwrap();
        assert!(!pos.in_check(Color::Second));
    }

    #[test]
    fn hflip_examples() {
        let mut board = kings("a1", "e5");
        board[sq("e3").index()] = Piece::new(Color::First, PieceKind::Gold, false);
        let pos = Position::with_rest_in_hand(board, Color::First, Color::First).unwrap();
        let flipped = pos.hflip();
        assert_eq!(flipped.piece_at(sq("a3")).unwrap().kind(), PieceKind::Gold);
        assert_eq!(flipped.king_square(Color::First), sq("e1"));
        assert_eq!(flipped.king_square(Color::Second), sq("a5"));
        assert_eq!(flipped.hflip(), pos);
    }

    #[test]
    fn order_prefers_pieces_near_file_a() {
        let mut b1 = kings("a1", "e5");
        b1[sq("a3").index()] = Piece::new(Color::First, PieceKind::Gold, false);
        let mut b2 = kings("a1", "e5");
        b2[sq("e3").index()] = Piece::new(Color::First, PieceKind::Gold, false);
        let p1 = Position::with_rest_in_hand(b1, Color::First, Color::First).unwrap();
        let p2 = Position::with_rest_in_hand(b2, Color::First, Color::First).unwrap();
        assert_eq!(p1.position_order(&p2), Ordering::Less);
        assert_eq!(p2.position_order(&p1), Ordering::Greater);
        assert_eq!(p1.position_order(&p1), Ordering::Equal);
    }

    #[test]
    fn conservation_violations_are_rejected() {
        let mut board = kings("a1", "e5");
        board[sq("b1").index()] = Piece::new(Color::First, PieceKind::Gold, false);
        let err = Position::new(board, [[0; 5]; 2], Color::First).unwrap_err();
        assert!(matches!(err, Error::Conservation { .. }));
        let err = Position::new([None; NUM_SQUARES], [[2; 5], [0; 5]], Color::First).unwrap_err();
        assert!(matches!(err, Error::MissingKing(Color::First)));
    }
}
