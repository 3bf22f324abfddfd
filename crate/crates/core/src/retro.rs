//! Retrograde reachability: the predecessor generator, the distance-to-KK
//! heuristic and the searches built on them.
//!
//! A KK position holds only the two Kings, at Manhattan distance greater
//! than two. Every KK position (with any hand split and either side to move)
//! is reachable from the initial position, so a position that can be traced
//! back to one is reachable too.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::rules::{
    has_legal_move, is_immobile, neighbor, opposite, pawn_drop_gives_check, slide_mask, step_mask,
    Piece, PieceKind, Position, Square,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeuristicParams {
    /// weight of the non-King piece count
    pub a: f64,
    /// weight of the promoted piece count
    pub b: f64,
    /// weight of the promoted pieces' distance from their promotion rank
    pub c: f64,
    /// weight of the Kings-too-close indicator
    pub d: f64,
}

impl Default for HeuristicParams {
    fn default() -> Self {
        HeuristicParams {
            a: 10.0,
            b: 10.0,
            c: 1.0,
            d: 1.0,
        }
    }
}

impl HeuristicParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<HeuristicParams> {
        if [a, b, c, d].iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Config(
                "heuristic weights must be finite and non-negative".into(),
            ));
        }
        Ok(HeuristicParams { a, b, c, d })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum number of node expansions.
    pub max_nodes: u64,
    /// Optional cap on the open set.
    pub max_open_set_size: Option<usize>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 10_000_000,
            max_open_set_size: None,
        }
    }
}

impl SearchBudget {
    pub fn new(max_nodes: u64, max_open_set_size: Option<usize>) -> Result<SearchBudget> {
        if max_nodes == 0 || max_open_set_size == Some(0) {
            return Err(Error::Config("search budget must be positive".into()));
        }
        Ok(SearchBudget {
            max_nodes,
            max_open_set_size,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchOutcome {
    Succeeded,
    /// The predecessor graph was exhausted; `max_ply` is the deepest
    /// predecessor level reached.
    Failed {
        max_ply: u32,
    },
    ResourceExhausted {
        nodes_expanded: u64,
    },
}

/// The heuristic's components: non-King pieces on the board, promoted pieces,
/// their summed distance from the owner's promotion rank, and whether the
/// Kings are within Manhattan distance two.
pub fn heuristic_terms(pos: &Position) -> (u32, u32, u32, u32) {
    let mut n = 0;
    let mut promoted = 0;
    let mut distance = 0;
    let mut kings = [None; 2];
    for (sq, p) in pos.pieces() {
        if p.kind() == PieceKind::King {
            kings[p.owner().index()] = Some(sq);
            continue;
        }
        n += 1;
        if p.is_promoted() {
            promoted += 1;
            distance += sq.rank().abs_diff(p.owner().promotion_rank()) as u32;
        }
    }
    let close = match kings {
        [Some(a), Some(b)] => u32::from(a.manhattan(b) <= 2),
        _ => 0,
    };
    (n, promoted, distance, close)
}

pub fn heuristic(pos: &Position, params: &HeuristicParams) -> f64 {
    let (n, p, d, k) = heuristic_terms(pos);
    params.a * n as f64 + params.b * p as f64 + params.c * d as f64 + params.d * k as f64
}

/// Only the two Kings on the board, more than two squares apart.
pub fn is_kk(pos: &Position) -> bool {
    let mut kings = pos.pieces();
    match (kings.next(), kings.next(), kings.next()) {
        (Some((a, pa)), Some((b, pb)), None) => {
            pa.kind() == PieceKind::King && pb.kind() == PieceKind::King && a.manhattan(b) > 2
        }
        _ => false,
    }
}

/// Squares from which `piece` could have moved to `to`, given that every
/// square strictly between them is empty in `pos`.
fn retraction_sources(pos: &Position, piece: Piece, to: Square, out: &mut Vec<Square>) {
    out.clear();
    let steps = step_mask(piece);
    let slides = slide_mask(piece);
    for dir in 0..8 {
        let bit = 1u8 << dir;
        let back = opposite(dir);
        if slides & bit != 0 {
            let mut cur = to;
            while let Some(from) = neighbor(cur, back) {
                if pos.piece_at(from).is_some() {
                    break;
                }
                out.push(from);
                cur = from;
            }
        } else if steps & bit != 0 {
            if let Some(from) = neighbor(to, back) {
                if pos.piece_at(from).is_none() {
                    out.push(from);
                }
            }
        }
    }
}

/// All positions one legal move before `pos`.
///
/// The player who just moved retracts one of its pieces: an un-drop returns
/// an unpromoted piece to its hand, an un-move slides the piece back
/// (optionally un-promoting it), and an un-capture additionally restores a
/// piece from the mover's hand, in either promotion state, on the vacated
/// square. A predecessor is kept only if the forward move is legal and the
/// predecessor itself has no Pawn fouls and does not leave the waiting
/// player in check.
pub fn prev(pos: &Position) -> Vec<Position> {
    let mut out = Vec::new();
    prev_into(pos, &mut out);
    out
}

pub(crate) fn prev_into(pos: &Position, out: &mut Vec<Position>) {
    out.clear();
    let waiting = pos.side_to_move();
    let mover = waiting.opponent();
    // a move never leaves the mover's own King attacked
    if pos.in_check(mover) {
        return;
    }
    let zone = mover.promotion_rank();
    let keep = |q: &Position| q.pawns_ok() && !q.in_check(waiting);
    let mut sources = Vec::with_capacity(8);
    let mut drop_mate: Option<bool> = None;

    for (to, piece) in pos.pieces() {
        if piece.owner() != mover {
            continue;
        }
        let kind = piece.kind();

        if !piece.is_promoted() && kind != PieceKind::King {
            let mut legal_drop = true;
            if kind == PieceKind::Pawn {
                legal_drop = !is_immobile(mover, kind, to)
                    && pos.pawn_files(mover)[to.file() as usize] == 1
                    && !(pawn_drop_gives_check(pos, to)
                        && *drop_mate.get_or_insert_with(|| !has_legal_move(pos)));
            }
            if legal_drop {
                let mut q = *pos;
                q.set(to, None);
                q.hands[mover.index()][kind.index()] += 1;
                q.side = mover;
                if keep(&q) {
                    out.push(q);
                }
            }
        }

        let priors: &[(Piece, bool)] = if piece.is_promoted() {
            &[(piece, false), (piece.unpromote(), true)]
        } else {
            &[(piece, false)]
        };
        for &(prior, promoted_now) in priors {
            if !promoted_now && !prior.is_promoted() && is_immobile(mover, kind, to) {
                // declining promotion here would strand the piece
                continue;
            }
            retraction_sources(pos, prior, to, &mut sources);
            for &from in &sources {
                if promoted_now && from.rank() != zone && to.rank() != zone {
                    continue;
                }
                let mut q = *pos;
                q.set(from, Some(prior));
                q.set(to, None);
                q.side = mover;
                if keep(&q) {
                    out.push(q);
                }
                for captured in PieceKind::HAND {
                    if pos.hands[mover.index()][captured.index()] == 0 {
                        continue;
                    }
                    let mut base = q;
                    base.hands[mover.index()][captured.index()] -= 1;
                    for restored_promoted in [false, true] {
                        if restored_promoted && !captured.can_promote() {
                            continue;
                        }
                        let mut r = base;
                        r.set(
                            to,
                            Some(Piece::new_unchecked(waiting, captured, restored_promoted)),
                        );
                        if keep(&r) {
                            out.push(r);
                        }
                    }
                }
            }
        }
    }
}

#[inline]
fn key(h: f64) -> u64 {
    // non-negative floats order like their bit patterns
    h.to_bits()
}

/// Greedy best-first search from `pos` back towards a position with zero
/// heuristic value. Equal-valued open nodes are taken first-in first-out.
pub fn can_reach_kk(
    pos: &Position,
    params: &HeuristicParams,
    budget: &SearchBudget,
) -> SearchOutcome {
    if heuristic(pos, params) == 0.0 {
        return SearchOutcome::Succeeded;
    }
    let mut nodes: Vec<(Position, u32)> = vec![(*pos, 0)];
    let mut open: BinaryHeap<Reverse<(u64, usize)>> = BinaryHeap::new();
    let mut visited: FxHashSet<Position> = FxHashSet::default();
    visited.insert(*pos);
    open.push(Reverse((key(heuristic(pos, params)), 0)));
    let mut expanded: u64 = 0;
    let mut max_ply = 0;
    let mut preds = Vec::new();

    while let Some(Reverse((h, idx))) = open.pop() {
        if h == 0 {
            return SearchOutcome::Succeeded;
        }
        if expanded >= budget.max_nodes {
            return SearchOutcome::ResourceExhausted {
                nodes_expanded: expanded,
            };
        }
        expanded += 1;
        let (node, depth) = nodes[idx];
        max_ply = max_ply.max(depth);
        prev_into(&node, &mut preds);
        for q in preds.drain(..) {
            if visited.insert(q) {
                let hq = key(heuristic(&q, params));
                if hq == 0 {
                    // it would be extracted next
                    return SearchOutcome::Succeeded;
                }
                open.push(Reverse((hq, nodes.len())));
                nodes.push((q, depth + 1));
            }
        }
        if budget.max_open_set_size.is_some_and(|cap| open.len() > cap) {
            return SearchOutcome::ResourceExhausted {
                nodes_expanded: expanded,
            };
        }
    }
    SearchOutcome::Failed { max_ply }
}

/// Breadth-first traversal of the predecessor graph by depth layers. Stops
/// with `Succeeded` at the first layer holding a KK position; otherwise
/// reports the deepest non-empty layer.
pub fn max_backtrack_ply(pos: &Position, budget: &SearchBudget) -> SearchOutcome {
    let mut visited: FxHashSet<Position> = FxHashSet::default();
    visited.insert(*pos);
    let mut layer = vec![*pos];
    let mut depth = 0;
    let mut expanded: u64 = 0;
    let mut preds = Vec::new();
    loop {
        if layer.iter().any(is_kk) {
            return SearchOutcome::Succeeded;
        }
        let mut next = Vec::new();
        for node in &layer {
            if expanded >= budget.max_nodes {
                return SearchOutcome::ResourceExhausted {
                    nodes_expanded: expanded,
                };
            }
            expanded += 1;
            prev_into(node, &mut preds);
            next.extend(preds.drain(..).filter(|q| visited.insert(*q)));
            if budget.max_open_set_size.is_some_and(|cap| next.len() > cap) {
                return SearchOutcome::ResourceExhausted {
                    nodes_expanded: expanded,
                };
            }
        }
        if next.is_empty() {
            return SearchOutcome::Failed { max_ply: depth };
        }
        layer = next;
        depth += 1;
    }
}
