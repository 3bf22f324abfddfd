//! Movement geometry: eight compass directions, neighbour tables and the
//! per-piece step/slide direction masks.
//!
//! Directions are indexed 0..8 as N, NE, E, SE, S, SW, W, NW where "N" points
//! towards rank 5 (forward for the first player). A piece's masks are stored
//! in absolute orientation, so second-player masks are the first-player
//! masks rotated by four directions.

use super::types::{Color, Piece, PieceKind, Square, FILES, NUM_SQUARES, RANKS};

pub(crate) const DIRS: [(i8, i8); 8] = [
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
];

pub(crate) const NONE: u8 = u8::MAX;

#[inline]
pub(crate) const fn opposite(dir: usize) -> usize {
    (dir + 4) & 7
}

const fn build_neighbors() -> [[u8; 8]; NUM_SQUARES] {
    let mut table = [[NONE; 8]; NUM_SQUARES];
    let mut sq = 0;
    while sq < NUM_SQUARES {
        let file = (sq % FILES as usize) as i8;
        let rank = (sq / FILES as usize) as i8;
        let mut d = 0;
        while d < 8 {
            let f = file + DIRS[d].0;
            let r = rank + DIRS[d].1;
            if f >= 0 && f < FILES as i8 && r >= 0 && r < RANKS as i8 {
                table[sq][d] = (r * FILES as i8 + f) as u8;
            }
            d += 1;
        }
        sq += 1;
    }
    table
}

pub(crate) static NEIGHBORS: [[u8; 8]; NUM_SQUARES] = build_neighbors();

#[inline]
pub(crate) fn neighbor(sq: Square, dir: usize) -> Option<Square> {
    let n = NEIGHBORS[sq.index()][dir];
    (n != NONE).then(|| Square::from_index_unchecked(n))
}

const ORTHOGONAL: u8 = 0b0101_0101;
const DIAGONAL: u8 = 0b1010_1010;
const GOLD: u8 = 0b1101_0111;
const SILVER: u8 = 0b1010_1011;
const PAWN: u8 = 0b0000_0001;

/// (step mask, slide mask) for a first-player piece.
const fn first_player_masks(kind: PieceKind, promoted: bool) -> (u8, u8) {
    match (kind, promoted) {
        (PieceKind::King, _) => (0xFF, 0),
        (PieceKind::Gold, _) | (PieceKind::Silver, true) | (PieceKind::Pawn, true) => (GOLD, 0),
        (PieceKind::Silver, false) => (SILVER, 0),
        (PieceKind::Pawn, false) => (PAWN, 0),
        (PieceKind::Bishop, false) => (0, DIAGONAL),
        (PieceKind::Bishop, true) => (ORTHOGONAL, DIAGONAL),
        (PieceKind::Rook, false) => (0, ORTHOGONAL),
        (PieceKind::Rook, true) => (DIAGONAL, ORTHOGONAL),
    }
}

const fn build_masks() -> [(u8, u8); 32] {
    let mut table = [(0u8, 0u8); 32];
    let mut code = 1usize;
    while code < 32 {
        let kind_index = code & 0b111;
        if kind_index >= 1 && kind_index <= 6 {
            let kind = match kind_index - 1 {
                0 => PieceKind::Gold,
                1 => PieceKind::Silver,
                2 => PieceKind::Bishop,
                3 => PieceKind::Rook,
                4 => PieceKind::Pawn,
                _ => PieceKind::King,
            };
            let promoted = code & 0b1000 != 0;
            let second = code & 0b1_0000 != 0;
            let (step, slide) = first_player_masks(kind, promoted);
            table[code] = if second {
                (step.rotate_left(4), slide.rotate_left(4))
            } else {
                (step, slide)
            };
        }
        code += 1;
    }
    table
}

static MASKS: [(u8, u8); 32] = build_masks();

#[inline]
pub(crate) fn step_mask(piece: Piece) -> u8 {
    MASKS[piece.code() as usize].0
}

#[inline]
pub(crate) fn slide_mask(piece: Piece) -> u8 {
    MASKS[piece.code() as usize].1
}

/// Whether an unpromoted piece of `kind` owned by `owner` could never move
/// again from `sq`. Only Pawns on their last rank qualify in Minishogi.
#[inline]
pub(crate) fn is_immobile(owner: Color, kind: PieceKind, sq: Square) -> bool {
    kind == PieceKind::Pawn && sq.rank() == owner.promotion_rank()
}
