//! Ground truth for cross-checking: breadth-first forward enumeration from
//! the initial position, and literal counting of piece placements.

use std::io::{self, Write};

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::codec::{in_candidate_space, rank, unrank};
use crate::legality::{classify, StageVerdict};
use crate::retro::{HeuristicParams, SearchBudget};
use crate::rules::{apply_move, initial_position, legal_moves, Color, PieceKind, Position};

/// Maps a position to the candidate-space member that stands for it.
///
/// A second-player-to-move position is rotated 180 degrees first; the result
/// is then replaced by its mirror image when the mirror is the one that
/// survives the flip filter.
pub fn representative(pos: &Position) -> Position {
    let pos = match pos.side_to_move() {
        Color::First => *pos,
        Color::Second => pos.rotate(),
    };
    let flipped = pos.hflip();
    if !in_candidate_space(&pos) || (in_candidate_space(&flipped) && flipped < pos) {
        flipped
    } else {
        pos
    }
}

/// Representatives reachable within `depth` plies, grouped by the ply at
/// which each was first reached.
#[derive(Clone, Debug)]
pub struct ForwardSet {
    layers: Vec<Vec<Position>>,
}

impl ForwardSet {
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    /// Members first reached at ply `d`, in position order.
    pub fn layer(&self, d: usize) -> &[Position] {
        &self.layers[d]
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Position> + '_ {
        self.layers.iter().flatten()
    }

    /// All members as SFEN lines, sorted.
    pub fn dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut all: Vec<String> = self.iter().map(|p| p.to_string()).collect();
        all.sort_unstable();
        for line in all {
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

fn successors(pos: &Position) -> Vec<Position> {
    legal_moves(pos)
        .into_iter()
        .map(|m| representative(&apply_move(pos, m).expect("legal move applies")))
        .collect()
}

/// Breadth-first enumeration of representatives up to `max_depth` plies
/// from the initial position.
pub fn forward_enumerate(max_depth: usize) -> ForwardSet {
    let start = representative(&initial_position());
    let mut seen: FxHashSet<Position> = FxHashSet::default();
    seen.insert(start);
    let mut layers = vec![vec![start]];
    for _ in 0..max_depth {
        let frontier = layers.last().expect("non-empty");
        let children: Vec<Position> = frontier.par_iter().flat_map_iter(successors).collect();
        let mut next: Vec<Position> = children.into_iter().filter(|c| seen.insert(*c)).collect();
        next.par_sort_unstable();
        layers.push(next);
    }
    ForwardSet { layers }
}

/// A forward-reachable member that the codec or the funnel mishandles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub position: Position,
    pub reason: String,
}

fn check_member(pos: &Position, params: &HeuristicParams, budget: &SearchBudget) -> Option<String> {
    if !in_candidate_space(pos) {
        return Some("not in the candidate space".into());
    }
    match rank(pos).and_then(|r| unrank(r.get())) {
        Ok(back) if back == *pos => {}
        Ok(back) => return Some(format!("codec round trip gave {back}")),
        Err(e) => return Some(format!("codec: {e}")),
    }
    match classify(pos, params, budget) {
        StageVerdict::Reachable => None,
        other => Some(other.to_string()),
    }
}

/// Checks that every member round-trips through the codec and classifies
/// as reachable. Violations come back in position order.
pub fn verify(set: &ForwardSet, params: &HeuristicParams, budget: &SearchBudget) -> Vec<Violation> {
    let mut found: Vec<Violation> = set
        .layers
        .par_iter()
        .flat_map_iter(|layer| layer.iter())
        .filter_map(|p| {
            check_member(p, params, budget).map(|reason| Violation {
                position: *p,
                reason,
            })
        })
        .collect();
    found.sort_by_key(|v| v.position);
    found
}

/// Counts placements of `v` pieces of `kind` on `squares` squares by
/// visiting every assignment of a piece label (owner and, for promotable
/// kinds, promotion state) or nothing to each square.
pub fn brute_force_placements(kind: PieceKind, squares: usize, v: usize) -> u64 {
    let labels = if kind.can_promote() { 4 } else { 2 };
    fn visit(square: usize, squares: usize, left: usize, labels: usize) -> u64 {
        if square == squares {
            return u64::from(left == 0);
        }
        let mut n = 0;
        if squares - square > left {
            n += visit(square + 1, squares, left, labels);
        }
        if left > 0 {
            for _ in 0..labels {
                n += visit(square + 1, squares, left - 1, labels);
            }
        }
        n
    }
    if v > squares {
        return 0;
    }
    visit(0, squares, v, labels)
}
