use std::fmt;
use std::num::NonZeroU8;

/// Number of files (columns) on the board.
pub const FILES: u8 = 5;
/// Number of ranks (rows) on the board.
pub const RANKS: u8 = 5;
/// Number of squares on the board.
pub const NUM_SQUARES: usize = (FILES as usize) * (RANKS as usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    /// The player who moves first (uppercase in SFEN, "b").
    First = 0,
    /// The player who moves second (lowercase in SFEN, "w").
    Second = 1,
}

impl Color {
    pub const ALL: [Color; 2] = [Color::First, Color::Second];

    #[inline]
    pub fn opponent(self) -> Color {
        match self {
            Color::First => Color::Second,
            Color::Second => Color::First,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    /// The rank in which this player's pieces promote, which is also the
    /// last rank for its Pawns.
    #[inline]
    pub fn promotion_rank(self) -> u8 {
        match self {
            Color::First => RANKS - 1,
            Color::Second => 0,
        }
    }
}

/// A board square. Index 0 is a1, then b1 .. e1, a2 .. e5 (rank-major scan
/// order, files a to e inside each rank).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square(u8);

impl Square {
    pub const COUNT: usize = NUM_SQUARES;

    /// `file` and `rank` are zero based (file 0 = a, rank 0 = 1).
    #[inline]
    pub fn new(file: u8, rank: u8) -> Option<Square> {
        (file < FILES && rank < RANKS).then(|| Square(rank * FILES + file))
    }

    #[inline]
    pub fn from_index(index: usize) -> Option<Square> {
        (index < NUM_SQUARES).then_some(Square(index as u8))
    }

    #[inline]
    pub(crate) const fn from_index_unchecked(index: u8) -> Square {
        Square(index)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn file(self) -> u8 {
        self.0 % FILES
    }

    #[inline]
    pub fn rank(self) -> u8 {
        self.0 / FILES
    }

    /// Mirror across the central file (a <-> e, b <-> d).
    #[inline]
    pub fn hflip(self) -> Square {
        Square(self.rank() * FILES + (FILES - 1 - self.file()))
    }

    /// Rotate the board by 180 degrees.
    #[inline]
    pub fn rotate(self) -> Square {
        Square(NUM_SQUARES as u8 - 1 - self.0)
    }

    pub fn all() -> impl Iterator<Item = Square> {
        (0..NUM_SQUARES as u8).map(Square)
    }

    pub fn manhattan(self, other: Square) -> u8 {
        self.file().abs_diff(other.file()) + self.rank().abs_diff(other.rank())
    }

    pub fn parse(s: &str) -> Option<Square> {
        let mut chars = s.chars();
        let f = chars.next()?;
        let r = chars.next()?;
        if chars.next().is_some() || !('a'..='e').contains(&f) || !('1'..='5').contains(&r) {
            return None;
        }
        Square::new(f as u8 - b'a', r as u8 - b'1')
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", (b'a' + self.file()) as char, self.rank() + 1)
    }
}

/// Piece kinds. The five non-King kinds come first, in the fixed order used
/// for hands, patterns and the rank layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PieceKind {
    Gold = 0,
    Silver = 1,
    Bishop = 2,
    Rook = 3,
    Pawn = 4,
    King = 5,
}

impl PieceKind {
    /// Kinds that can be captured and held in hand, in canonical order.
    pub const HAND: [PieceKind; 5] = [
        PieceKind::Gold,
        PieceKind::Silver,
        PieceKind::Bishop,
        PieceKind::Rook,
        PieceKind::Pawn,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Option<PieceKind> {
        Some(match i {
            0 => PieceKind::Gold,
            1 => PieceKind::Silver,
            2 => PieceKind::Bishop,
            3 => PieceKind::Rook,
            4 => PieceKind::Pawn,
            5 => PieceKind::King,
            _ => return None,
        })
    }

    #[inline]
    pub fn can_promote(self) -> bool {
        matches!(
            self,
            PieceKind::Silver | PieceKind::Bishop | PieceKind::Rook | PieceKind::Pawn
        )
    }

    pub fn letter(self) -> char {
        match self {
            PieceKind::King => 'K',
            PieceKind::Gold => 'G',
            PieceKind::Silver => 'S',
            PieceKind::Bishop => 'B',
            PieceKind::Rook => 'R',
            PieceKind::Pawn => 'P',
        }
    }

    pub fn from_letter(c: char) -> Option<PieceKind> {
        Some(match c.to_ascii_uppercase() {
            'K' => PieceKind::King,
            'G' => PieceKind::Gold,
            'S' => PieceKind::Silver,
            'B' => PieceKind::Bishop,
            'R' => PieceKind::Rook,
            'P' => PieceKind::Pawn,
            _ => return None,
        })
    }
}

/// A piece on the board, packed into one byte:
/// bits 0..3 hold `kind + 1`, bit 3 the promotion flag, bit 4 the owner.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Piece(NonZeroU8);

const PROMOTED_BIT: u8 = 0b0_1000;
const OWNER_BIT: u8 = 0b1_0000;

impl Piece {
    /// Returns `None` if the promotion flag is set on a kind that cannot promote.
    pub fn new(owner: Color, kind: PieceKind, promoted: bool) -> Option<Piece> {
        if promoted && !kind.can_promote() {
            return None;
        }
        Some(Self::new_unchecked(owner, kind, promoted))
    }

    #[inline]
    pub(crate) fn new_unchecked(owner: Color, kind: PieceKind, promoted: bool) -> Piece {
        let code = (kind as u8 + 1)
            | if promoted { PROMOTED_BIT } else { 0 }
            | if owner == Color::Second { OWNER_BIT } else { 0 };
        // kind + 1 is never zero
        Piece(NonZeroU8::new(code).unwrap())
    }

    #[inline]
    pub fn owner(self) -> Color {
        if self.0.get() & OWNER_BIT != 0 {
            Color::Second
        } else {
            Color::First
        }
    }

    #[inline]
    pub fn kind(self) -> PieceKind {
        // the low three bits always hold a valid kind + 1
        PieceKind::from_index((self.0.get() & 0b111) as usize - 1).unwrap()
    }

    #[inline]
    pub fn is_promoted(self) -> bool {
        self.0.get() & PROMOTED_BIT != 0
    }

    #[inline]
    pub fn code(self) -> u8 {
        self.0.get()
    }

    #[inline]
    pub fn promote(self) -> Piece {
        Piece(self.0 | PROMOTED_BIT)
    }

    #[inline]
    pub fn unpromote(self) -> Piece {
        Piece(NonZeroU8::new(self.0.get() & !PROMOTED_BIT).unwrap())
    }

    #[inline]
    pub fn with_owner(self, owner: Color) -> Piece {
        Piece::new_unchecked(owner, self.kind(), self.is_promoted())
    }

    #[inline]
    pub(crate) fn is_unpromoted_pawn(self) -> bool {
        self.0.get() & !OWNER_BIT == PieceKind::Pawn as u8 + 1
    }

    /// SFEN token, e.g. "+S" or "p".
    pub fn sfen(self) -> String {
        let mut s = String::with_capacity(2);
        if self.is_promoted() {
            s.push('+');
        }
        let c = self.kind().letter();
        s.push(match self.owner() {
            Color::First => c,
            Color::Second => c.to_ascii_lowercase(),
        });
        s
    }
}

impl fmt::Debug for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.sfen())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Board {
        from: Square,
        to: Square,
        promote: bool,
    },
    Drop {
        kind: PieceKind,
        to: Square,
    },
}

impl Move {
    pub fn to(self) -> Square {
        match self {
            Move::Board { to, .. } | Move::Drop { to, .. } => to,
        }
    }

    pub fn hflip(self) -> Move {
        match self {
            Move::Board { from, to, promote } => Move::Board {
                from: from.hflip(),
                to: to.hflip(),
                promote,
            },
            Move::Drop { kind, to } => Move::Drop {
                kind,
                to: to.hflip(),
            },
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Move::Board { from, to, promote } => {
                write!(f, "{from}{to}{}", if promote { "+" } else { "" })
            }
            Move::Drop { kind, to } => write!(f, "{}*{to}", kind.letter()),
        }
    }
}
