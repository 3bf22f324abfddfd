//! Exact counting of the candidate space and a bijection between ranks and
//! candidate positions.
//!
//! A candidate position has the first player to move, the first King on
//! files a-c, and, when the first King is on file c, the second King on
//! files a-c as well. Every other square is unconstrained.
//!
//! The space is split into 3^5 = 243 patterns according to how many units of
//! each non-King kind are off the board. A global rank is the pattern's
//! offset plus a local mixed-radix index whose digits are, most significant
//! first:
//!
//! 1. for each kind with units in hand, the first player's share of them;
//! 2. the King placement (0..310);
//! 3. for each kind in the order Gold, Silver, Bishop, Rook, Pawn, the
//!    placement of its board units on the squares still empty, grouped as
//!    (first promoted, second promoted, first unpromoted, second unpromoted)
//!    with each group a colexicographic subset of the remaining empties.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::rules::{Color, Piece, PieceKind, Position, Square, FILES, NUM_SQUARES, RANKS};

const BINOM: [[u64; NUM_SQUARES + 1]; NUM_SQUARES + 1] = {
    let mut t = [[0u64; NUM_SQUARES + 1]; NUM_SQUARES + 1];
    let mut n = 0;
    while n <= NUM_SQUARES {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
            k += 1;
        }
        n += 1;
    }
    t
};

#[inline]
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        0
    } else {
        BINOM[n][k]
    }
}

/// Squares left for the non-King pieces.
pub const NON_KING_SQUARES: usize = NUM_SQUARES - 2;

/// Number of ways to place `v` identical-kind pieces on `n_empty` squares,
/// each labelled with an owner and (for promotable kinds) a promotion state.
pub fn placement_count(kind: PieceKind, n_empty: usize, v: usize) -> u64 {
    let mut total = 0;
    for class in placement_classes(kind, v) {
        total += class_count(n_empty, class);
    }
    total
}

/// How `v` board units of one kind split into owner/promotion groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlacementClass {
    /// first player's promoted units
    pub p0: usize,
    /// second player's promoted units
    pub p1: usize,
    /// first player's unpromoted units
    pub p0bar: usize,
    /// second player's unpromoted units
    pub remainder: usize,
}

impl PlacementClass {
    fn groups(self) -> [usize; 4] {
        [self.p0, self.p1, self.p0bar, self.remainder]
    }
}

/// Group order inside a placement: (owner, promoted).
const GROUPS: [(Color, bool); 4] = [
    (Color::First, true),
    (Color::Second, true),
    (Color::First, false),
    (Color::Second, false),
];

/// Classes in summation order: p0 outermost, then p1, then p0bar.
pub fn placement_classes(kind: PieceKind, v: usize) -> impl Iterator<Item = PlacementClass> {
    let promo = usize::from(kind.can_promote());
    (0..=v * promo).flat_map(move |p0| {
        (0..=(v - p0) * promo).flat_map(move |p1| {
            (0..=v - p0 - p1).map(move |p0bar| PlacementClass {
                p0,
                p1,
                p0bar,
                remainder: v - p0 - p1 - p0bar,
            })
        })
    })
}

fn class_count(n_empty: usize, class: PlacementClass) -> u64 {
    let mut left = n_empty;
    let mut product = 1;
    for k in class.groups() {
        product *= binomial(left, k);
        left = left.saturating_sub(k);
    }
    product
}

/// Ordered King placements: the first King on files a-b with the second
/// anywhere else, then the first King on file c with the second on files a-c.
pub fn kpos_count() -> u64 {
    kpos_terms().0 + kpos_terms().1
}

/// (first King on files a-b, first King on file c).
pub fn kpos_terms() -> (u64, u64) {
    let h = RANKS as u64;
    let w = FILES as u64;
    (h * (w / 2) * (h * w - 1), h * (h * w.div_ceil(2) - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PiecePattern {
    /// Units off the board per kind (players not distinguished).
    pub hand_counts: [u8; 5],
    /// Units on the board per kind.
    pub board_counts: [u8; 5],
    /// Number of candidate positions with this pattern.
    pub n_c: u64,
}

impl PiecePattern {
    pub fn from_hand_counts(hand_counts: [u8; 5]) -> PiecePattern {
        let board_counts = hand_counts.map(|h| 2 - h);
        let mut pattern = PiecePattern {
            hand_counts,
            board_counts,
            n_c: 0,
        };
        pattern.n_c = count2n(&pattern);
        pattern
    }

    /// Position of this pattern in the table: hand counts read as a base-3
    /// number, Gold most significant.
    pub fn index(&self) -> usize {
        self.hand_counts
            .iter()
            .fold(0, |acc, &h| acc * 3 + h as usize)
    }

    /// Radices of the local mixed-radix index, most significant first.
    fn radices(&self) -> Vec<u64> {
        let mut radices: Vec<u64> = self
            .hand_counts
            .iter()
            .filter(|&&h| h > 0)
            .map(|&h| h as u64 + 1)
            .collect();
        radices.push(kpos_count());
        let mut n_empty = NON_KING_SQUARES;
        for kind in PieceKind::HAND {
            let v = self.board_counts[kind.index()] as usize;
            radices.push(placement_count(kind, n_empty, v));
            n_empty -= v;
        }
        radices
    }
}

/// Number of positions in a pattern.
pub fn count2n(pattern: &PiecePattern) -> u64 {
    let mut hand_ways: u64 = 1;
    for &h in &pattern.hand_counts {
        if h > 0 {
            hand_ways *= h as u64 + 1;
        }
    }
    let mut board_ways = kpos_count();
    let mut n_empty = NON_KING_SQUARES;
    for kind in PieceKind::HAND {
        let v = pattern.board_counts[kind.index()] as usize;
        board_ways = board_ways
            .checked_mul(placement_count(kind, n_empty, v))
            .expect("pattern count overflows u64");
        n_empty -= v;
    }
    hand_ways
        .checked_mul(board_ways)
        .expect("pattern count overflows u64")
}

/// All 243 patterns in table order with their exclusive prefix sums.
#[derive(Debug)]
pub struct PatternTable {
    patterns: Vec<PiecePattern>,
    offsets: Vec<u64>,
    total: u64,
}

impl PatternTable {
    fn build() -> PatternTable {
        let mut patterns = Vec::with_capacity(243);
        for i in 0..243usize {
            let mut hand = [0u8; 5];
            let mut x = i;
            for slot in hand.iter_mut().rev() {
                *slot = (x % 3) as u8;
                x /= 3;
            }
            patterns.push(PiecePattern::from_hand_counts(hand));
        }
        let mut offsets = Vec::with_capacity(243);
        let mut total: u64 = 0;
        for p in &patterns {
            offsets.push(total);
            total = total
                .checked_add(p.n_c)
                .expect("candidate space overflows u64");
        }
        PatternTable {
            patterns,
            offsets,
            total,
        }
    }

    pub fn get() -> &'static PatternTable {
        static TABLE: OnceLock<PatternTable> = OnceLock::new();
        TABLE.get_or_init(PatternTable::build)
    }

    pub fn patterns(&self) -> &[PiecePattern] {
        &self.patterns
    }

    /// Exclusive prefix sums of `n_c`.
    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

/// Size of the candidate space.
pub fn total_space() -> u64 {
    PatternTable::get().total()
}

/// An index into the candidate space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankIndex(u64);

impl RankIndex {
    pub fn new(value: u64) -> Result<RankIndex> {
        let total = total_space();
        if value < total {
            Ok(RankIndex(value))
        } else {
            Err(Error::RankOutOfRange { rank: value, total })
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

pub fn in_candidate_space(pos: &Position) -> bool {
    candidate_check(pos).is_ok()
}

fn candidate_check(pos: &Position) -> Result<()> {
    if pos.side_to_move() != Color::First {
        return Err(Error::NotCandidate("second player to move"));
    }
    pos.validate()?;
    let first = pos.king_square(Color::First).file();
    if first > 2 {
        return Err(Error::NotCandidate("first King outside files a-c"));
    }
    if first == 2 && pos.king_square(Color::Second).file() > 2 {
        return Err(Error::NotCandidate(
            "first King on file c, second King outside files a-c",
        ));
    }
    Ok(())
}

fn king_index(first: Square, second: Square) -> u64 {
    let first_file = first.file() as u64;
    let rank = first.rank() as u64;
    if first_file < 2 {
        let i = rank * 2 + first_file;
        let j = second.index() as u64 - u64::from(second.index() > first.index());
        i * (NUM_SQUARES as u64 - 1) + j
    } else {
        // second King on files a-c, skipping the first King's square
        let j = second.rank() as u64 * 3 + second.file() as u64;
        let own = first.rank() as u64 * 3 + 2;
        kpos_terms().0 + rank * 14 + j - u64::from(j > own)
    }
}

fn king_squares(index: u64) -> (Square, Square) {
    let (left, _) = kpos_terms();
    if index < left {
        let per = NUM_SQUARES as u64 - 1;
        let (i, j) = (index / per, index % per);
        let first = Square::new((i % 2) as u8, (i / 2) as u8).unwrap();
        let j = j as usize + usize::from(j as usize >= first.index());
        (first, Square::from_index(j).unwrap())
    } else {
        let local = index - left;
        let (rank, j) = (local / 14, local % 14);
        let own = rank * 3 + 2;
        let j = j + u64::from(j >= own);
        let first = Square::new(2, rank as u8).unwrap();
        let second = Square::new((j % 3) as u8, (j / 3) as u8).unwrap();
        (first, second)
    }
}

/// Colexicographic rank of a sorted k-subset.
fn colex_rank(sorted: &[usize]) -> u64 {
    sorted
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c, i + 1))
        .sum()
}

/// Inverse of [`colex_rank`]; returns the subset in increasing order.
fn colex_unrank(mut r: u64, k: usize, out: &mut Vec<usize>) {
    out.clear();
    let mut upper = NUM_SQUARES;
    for i in (1..=k).rev() {
        let mut c = i - 1;
        while c + 1 < upper && binomial(c + 1, i) <= r {
            c += 1;
        }
        r -= binomial(c, i);
        out.push(c);
        upper = c;
    }
    out.reverse();
}

/// Maps a rank to its candidate position.
pub fn unrank(rank: u64) -> Result<Position> {
    let table = PatternTable::get();
    if rank >= table.total {
        return Err(Error::RankOutOfRange {
            rank,
            total: table.total,
        });
    }
    let pi = table.offsets.partition_point(|&o| o <= rank) - 1;
    let pattern = &table.patterns[pi];
    let mut local = rank - table.offsets[pi];

    let radices = pattern.radices();
    let mut digits = vec![0u64; radices.len()];
    for (d, &radix) in digits.iter_mut().zip(&radices).rev() {
        *d = local % radix;
        local /= radix;
    }
    debug_assert_eq!(local, 0);

    let mut hands = [[0u8; 5]; 2];
    let mut next = 0;
    for kind in PieceKind::HAND {
        let h = pattern.hand_counts[kind.index()];
        if h > 0 {
            let first = digits[next] as u8;
            next += 1;
            hands[0][kind.index()] = first;
            hands[1][kind.index()] = h - first;
        }
    }

    let mut board = [None; NUM_SQUARES];
    let (k1, k2) = king_squares(digits[next]);
    next += 1;
    board[k1.index()] = Piece::new(Color::First, PieceKind::King, false);
    board[k2.index()] = Piece::new(Color::Second, PieceKind::King, false);

    let mut empties: Vec<Square> = Square::all().filter(|s| *s != k1 && *s != k2).collect();
    let mut chosen = Vec::with_capacity(2);
    for kind in PieceKind::HAND {
        let v = pattern.board_counts[kind.index()] as usize;
        let mut idx = digits[next];
        next += 1;
        if v == 0 {
            continue;
        }
        let class = placement_classes(kind, v)
            .find(|&c| {
                let n = class_count(empties.len(), c);
                if idx < n {
                    true
                } else {
                    idx -= n;
                    false
                }
            })
            .expect("placement index within count");
        let groups = class.groups();
        // sub-radices of the four subset digits, most significant first
        let mut sub = [1u64; 4];
        let mut left = empties.len();
        for (g, &k) in groups.iter().enumerate() {
            sub[g] = binomial(left, k);
            left -= k;
        }
        let mut sub_digits = [0u64; 4];
        for g in (0..4).rev() {
            sub_digits[g] = idx % sub[g];
            idx /= sub[g];
        }
        for (g, &k) in groups.iter().enumerate() {
            if k == 0 {
                continue;
            }
            colex_unrank(sub_digits[g], k, &mut chosen);
            let (owner, promoted) = GROUPS[g];
            for &c in chosen.iter().rev() {
                let sq = empties.remove(c);
                board[sq.index()] = Some(Piece::new_unchecked(owner, kind, promoted));
            }
        }
    }
    Ok(Position::new(board, hands, Color::First).expect("unrank builds a valid position"))
}

/// Maps a candidate position to its rank.
pub fn rank(pos: &Position) -> Result<RankIndex> {
    candidate_check(pos)?;
    let table = PatternTable::get();

    let mut hand_counts = [0u8; 5];
    for kind in PieceKind::HAND {
        hand_counts[kind.index()] =
            pos.hand_count(Color::First, kind) + pos.hand_count(Color::Second, kind);
    }
    let pi = hand_counts.iter().fold(0, |acc, &h| acc * 3 + h as usize);
    let pattern = &table.patterns[pi];
    let radices = pattern.radices();
    let mut digits = Vec::with_capacity(radices.len());

    for kind in PieceKind::HAND {
        if hand_counts[kind.index()] > 0 {
            digits.push(pos.hand_count(Color::First, kind) as u64);
        }
    }
    let k1 = pos.king_square(Color::First);
    let k2 = pos.king_square(Color::Second);
    digits.push(king_index(k1, k2));

    let mut empties: Vec<Square> = Square::all().filter(|s| *s != k1 && *s != k2).collect();
    for kind in PieceKind::HAND {
        let v = pattern.board_counts[kind.index()] as usize;
        if v == 0 {
            digits.push(0);
            continue;
        }
        let mut members: [Vec<usize>; 4] = Default::default();
        for (i, sq) in empties.iter().enumerate() {
            if let Some(p) = pos.piece_at(*sq) {
                if p.kind() == kind {
                    let g = GROUPS
                        .iter()
                        .position(|&(o, pr)| o == p.owner() && pr == p.is_promoted())
                        .unwrap();
                    members[g].push(i);
                }
            }
        }
        let class = PlacementClass {
            p0: members[0].len(),
            p1: members[1].len(),
            p0bar: members[2].len(),
            remainder: members[3].len(),
        };
        let mut idx = 0;
        for c in placement_classes(kind, v) {
            if c == class {
                break;
            }
            idx += class_count(empties.len(), c);
        }
        // within the class: subset ranks among the progressively shrinking empties
        let mut within = 0u64;
        let mut remaining: Vec<usize> = (0..empties.len()).collect();
        for group in &members {
            let positions: Vec<usize> = group
                .iter()
                .map(|orig| remaining.binary_search(orig).unwrap())
                .collect();
            within = within * binomial(remaining.len(), group.len()) + colex_rank(&positions);
            remaining.retain(|r| !group.contains(r));
        }
        digits.push(idx + within);
        empties.retain(|sq| pos.piece_at(*sq).is_none_or(|p| p.kind() != kind));
    }

    let mut local = 0u64;
    for (d, r) in digits.iter().zip(&radices) {
        debug_assert!(d < r);
        local = local * r + d;
    }
    Ok(RankIndex(table.offsets[pi] + local))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{from_sfen, initial_position, to_sfen};

    #[test]
    fn placement_counts() {
        assert_eq!(placement_count(PieceKind::Gold, 23, 1), 46);
        assert_eq!(placement_count(PieceKind::Pawn, 23, 1), 92);
        assert_eq!(placement_count(PieceKind::Gold, 23, 2), 1012);
        assert_eq!(placement_count(PieceKind::Rook, 23, 0), 1);
    }

    #[test]
    fn kpos() {
        assert_eq!(kpos_terms(), (240, 70));
        assert_eq!(kpos_count(), 310);
    }

    #[test]
    fn king_index_is_a_bijection() {
        let mut seen = vec![false; 310];
        for i in 0..310 {
            let (a, b) = king_squares(i);
            assert_ne!(a, b);
            assert!(a.file() <= 2);
            if a.file() == 2 {
                assert!(b.file() <= 2);
            }
            assert_eq!(king_index(a, b), i);
            seen[i as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn colex_round_trip() {
        let mut out = Vec::new();
        for k in 0..=3 {
            for r in 0..binomial(10, k) {
                colex_unrank(r, k, &mut out);
                assert!(out.windows(2).all(|w| w[0] < w[1]));
                assert!(out.iter().all(|&c| c < 10));
                assert_eq!(colex_rank(&out), r);
            }
        }
    }

    #[test]
    fn all_in_hand_pattern() {
        let p = PiecePattern::from_hand_counts([2; 5]);
        assert_eq!(p.n_c, 75_330);
        assert_eq!(p.index(), 242);
        let all_board = PiecePattern::from_hand_counts([0; 5]);
        let mut expected = kpos_count();
        let mut n = NON_KING_SQUARES;
        for kind in PieceKind::HAND {
            expected *= placement_count(kind, n, 2);
            n -= 2;
        }
        assert_eq!(all_board.n_c, expected);
    }

    #[test]
    fn total_matches_constant() {
        let table = PatternTable::get();
        assert_eq!(table.patterns().len(), 243);
        assert_eq!(table.total(), 16_014_219_505_238_849_250);
        assert!(table.offsets().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn first_rank_golden() {
        // pattern 0 has every piece on the board; local index 0 puts the Kings
        // on a1/b1 and every kind's two units as second-player unpromoted
        // pieces on the first two free squares
        let pos = unrank(0).unwrap();
        assert_eq!(to_sfen(&pos), "5/5/pp3/sbbrr/Kkggs b - 1");
        assert_eq!(rank(&pos).unwrap().get(), 0);
    }

    #[test]
    fn out_of_range_and_wrong_side() {
        assert!(unrank(total_space()).is_err());
        assert!(unrank(total_space() - 1).is_ok());
        let pos = from_sfen("rbsgk/4p/5/P4/KGSBR w - 1").unwrap();
        assert!(rank(&pos).is_err());
    }

    #[test]
    fn candidate_space_membership() {
        let start = initial_position();
        assert!(in_candidate_space(&start));
        let r = rank(&start).unwrap();
        assert_eq!(unrank(r.get()).unwrap(), start);
        assert!(!in_candidate_space(
            &from_sfen("4k/5/5/5/3K1 b 2G2S2B2R2P 1").unwrap()
        ));
        assert!(!in_candidate_space(
            &from_sfen("4k/5/2K2/5/5 b 2G2S2B2R2P 1").unwrap()
        ));
        assert!(in_candidate_space(
            &from_sfen("2k2/5/2K2/5/5 b 2G2S2B2R2P 1").unwrap()
        ));
    }
}
