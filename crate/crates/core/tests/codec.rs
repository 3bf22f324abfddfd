//! Codec checks against independently built positions.

use std::collections::HashSet;

use minishogi_reach::codec::{
    kpos_count, placement_count, rank, total_space, unrank, PatternTable, PiecePattern,
};
use minishogi_reach::oracle::brute_force_placements;
use minishogi_reach::rules::{Color, Piece, PieceKind, Position, Square};

/// King pairs of the candidate space, built from the definition.
fn king_pairs() -> Vec<(Square, Square)> {
    let mut out = Vec::new();
    for first in Square::all().filter(|s| s.file() <= 2) {
        for second in Square::all().filter(|&s| s != first) {
            if first.file() == 2 && second.file() > 2 {
                continue;
            }
            out.push((first, second));
        }
    }
    out
}

/// Every split of `totals[k]` units of each kind between the two hands.
fn hand_splits(totals: [u8; 5]) -> Vec<[[u8; 5]; 2]> {
    let mut out = vec![[[0u8; 5]; 2]];
    for k in 0..5 {
        out = out
            .into_iter()
            .flat_map(|h| {
                (0..=totals[k]).map(move |first| {
                    let mut h = h;
                    h[0][k] = first;
                    h[1][k] = totals[k] - first;
                    h
                })
            })
            .collect();
    }
    out
}

fn kings_board(first: Square, second: Square) -> [Option<Piece>; 25] {
    let mut board = [None; 25];
    board[first.index()] = Piece::new(Color::First, PieceKind::King, false);
    board[second.index()] = Piece::new(Color::Second, PieceKind::King, false);
    board
}

/// Ranks of a stratum must be distinct and fill one contiguous block.
fn assert_contiguous(ranks: &[u64], expected: u64) {
    let set: HashSet<u64> = ranks.iter().copied().collect();
    assert_eq!(set.len() as u64, expected, "ranks not distinct");
    let lo = *ranks.iter().min().unwrap();
    let hi = *ranks.iter().max().unwrap();
    assert_eq!(hi - lo + 1, expected, "ranks not contiguous");
    assert!(hi < total_space());
}

#[test]
fn all_in_hand_stratum() {
    let pattern = PiecePattern::from_hand_counts([2; 5]);
    let table = PatternTable::get();
    let offset = table.offsets()[pattern.index()];

    let mut ranks = Vec::new();
    for (first, second) in king_pairs() {
        for hands in hand_splits([2; 5]) {
            let pos = Position::new(kings_board(first, second), hands, Color::First).unwrap();
            let r = rank(&pos).unwrap().get();
            assert_eq!(unrank(r).unwrap(), pos);
            ranks.push(r);
        }
    }
    assert_eq!(ranks.len(), 75_330);
    assert_contiguous(&ranks, 75_330);
    assert_eq!(*ranks.iter().min().unwrap(), offset);
}

#[test]
fn one_gold_on_board_stratum() {
    let mut ranks = Vec::new();
    let totals = [1, 2, 2, 2, 2];
    let splits = hand_splits(totals);
    for (first, second) in king_pairs() {
        for sq in Square::all().filter(|&s| s != first && s != second) {
            for owner in Color::ALL {
                let mut board = kings_board(first, second);
                board[sq.index()] = Piece::new(owner, PieceKind::Gold, false);
                for hands in &splits {
                    let pos = Position::new(board, *hands, Color::First).unwrap();
                    ranks.push(rank(&pos).unwrap().get());
                }
            }
        }
    }
    let expected = kpos_count() * 46 * 2 * 81;
    assert_eq!(ranks.len() as u64, expected);
    assert_contiguous(&ranks, expected);
}

#[test]
fn counting_oracle() {
    for kind in PieceKind::HAND {
        for squares in 0..=8 {
            for v in 0..=2 {
                assert_eq!(
                    placement_count(kind, squares, v),
                    brute_force_placements(kind, squares, v),
                    "{kind:?} on {squares} squares, {v} units"
                );
            }
        }
    }
}

#[test]
fn pattern_offsets_partition_the_space() {
    let table = PatternTable::get();
    assert_eq!(table.patterns().len(), 243);
    assert_eq!(table.offsets()[0], 0);
    assert_eq!(table.total(), total_space());
    assert!(table.offsets().windows(2).all(|w| w[0] < w[1]));
    for (i, p) in table.patterns().iter().enumerate() {
        assert_eq!(p.index(), i);
    }
}

#[test]
fn rank_boundaries() {
    let last = total_space() - 1;
    for r in [0, 1, 75_329, 75_330, last / 2, last - 1, last] {
        assert_eq!(rank(&unrank(r).unwrap()).unwrap().get(), r);
    }
    assert!(unrank(total_space()).is_err());
    assert!(unrank(u64::MAX).is_err());
}
