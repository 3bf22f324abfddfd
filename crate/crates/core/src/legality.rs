//! The elimination funnel applied to candidate positions: horizontal-flip
//! deduplication, Pawn fouls, the waiting King in check, and finally
//! retrograde reachability.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::codec::in_candidate_space;
use crate::retro::{can_reach_kk, max_backtrack_ply, HeuristicParams, SearchBudget, SearchOutcome};
use crate::rules::{Color, Position};

/// Funnel stages in the order they are applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stage {
    Generated,
    PassedFlip,
    PassedPawn,
    PassedCheck,
    Reachable,
}

/// The stage a position failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rejection {
    HorizontalFlip,
    PawnPlacement,
    OpponentKingCheck,
    /// The predecessor graph was exhausted `max_ply` moves back.
    Reachability {
        max_ply: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StageVerdict {
    Reachable,
    Rejected(Rejection),
    /// The search hit its budget after passing the first three stages.
    /// Counted neither as reachable nor as unreachable.
    Exhausted {
        nodes_expanded: u64,
    },
}

impl StageVerdict {
    /// The last stage the position passed.
    pub fn stage_reached(&self) -> Stage {
        match self {
            StageVerdict::Reachable => Stage::Reachable,
            StageVerdict::Rejected(Rejection::HorizontalFlip) => Stage::Generated,
            StageVerdict::Rejected(Rejection::PawnPlacement) => Stage::PassedFlip,
            StageVerdict::Rejected(Rejection::OpponentKingCheck) => Stage::PassedPawn,
            StageVerdict::Rejected(Rejection::Reachability { .. })
            | StageVerdict::Exhausted { .. } => Stage::PassedCheck,
        }
    }
}

impl fmt::Display for StageVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StageVerdict::Reachable => f.write_str("Reachable"),
            StageVerdict::Rejected(Rejection::HorizontalFlip) => {
                f.write_str("Failed: HorizontalFlip")
            }
            StageVerdict::Rejected(Rejection::PawnPlacement) => {
                f.write_str("Failed: PawnPlacement")
            }
            StageVerdict::Rejected(Rejection::OpponentKingCheck) => {
                f.write_str("Failed: OpponentKingCheck")
            }
            StageVerdict::Rejected(Rejection::Reachability { max_ply }) => {
                write!(f, "Failed: Reachability, ply={max_ply}")
            }
            StageVerdict::Exhausted { nodes_expanded } => {
                write!(f, "ResourceExhausted: nodes={nodes_expanded}")
            }
        }
    }
}

/// False iff the mirror image is also a candidate and sorts strictly first.
pub fn flip_pass(pos: &Position) -> bool {
    let flipped = pos.hflip();
    !(in_candidate_space(&flipped) && flipped.position_order(pos) == Ordering::Less)
}

/// False iff a player has two unpromoted Pawns on one file or an
/// unpromoted Pawn on its last rank.
pub fn pawn_pass(pos: &Position) -> bool {
    pos.pawns_ok()
}

/// False iff the second player's King is attacked while the first player
/// is to move.
pub fn opponent_check_pass(pos: &Position) -> bool {
    !pos.in_check(Color::Second)
}

/// Runs the four stages in order, stopping at the first failure.
///
/// For reachability failures the reported ply is the depth of the deepest
/// breadth-first predecessor layer; the greedy search's own depth is used
/// directly when it is zero (the two agree there).
pub fn classify(pos: &Position, params: &HeuristicParams, budget: &SearchBudget) -> StageVerdict {
    if !flip_pass(pos) {
        return StageVerdict::Rejected(Rejection::HorizontalFlip);
    }
    if !pawn_pass(pos) {
        return StageVerdict::Rejected(Rejection::PawnPlacement);
    }
    if !opponent_check_pass(pos) {
        return StageVerdict::Rejected(Rejection::OpponentKingCheck);
    }
    match can_reach_kk(pos, params, budget) {
        SearchOutcome::Succeeded => StageVerdict::Reachable,
        SearchOutcome::ResourceExhausted { nodes_expanded } => {
            StageVerdict::Exhausted { nodes_expanded }
        }
        SearchOutcome::Failed { max_ply: 0 } => {
            StageVerdict::Rejected(Rejection::Reachability { max_ply: 0 })
        }
        SearchOutcome::Failed { .. } => match max_backtrack_ply(pos, budget) {
            SearchOutcome::Failed { max_ply } => {
                StageVerdict::Rejected(Rejection::Reachability { max_ply })
            }
            SearchOutcome::ResourceExhausted { nodes_expanded } => {
                StageVerdict::Exhausted { nodes_expanded }
            }
            SearchOutcome::Succeeded => unreachable!("greedy and breadth-first searches disagree"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{from_sfen, initial_position};

    fn pos(s: &str) -> Position {
        from_sfen(s).unwrap_or_else(|e| panic!("{e}"))
    }

    fn run(p: &Position) -> StageVerdict {
        classify(p, &HeuristicParams::default(), &SearchBudget::default())
    }

    #[test]
    fn flip_stage() {
        // Kings on file c, Gold on e3: the mirror with the Gold on a3 is smaller
        let p = pos("2k2/5/4G/5/2K2 b G2S2B2R2P 1");
        assert!(!flip_pass(&p));
        assert!(flip_pass(&p.hflip()));
        assert_eq!(run(&p), StageVerdict::Rejected(Rejection::HorizontalFlip));
        // the mirror of a file-a King position leaves the candidate space
        assert!(flip_pass(&initial_position()));
        // symmetric positions survive
        assert!(flip_pass(&pos("2k2/5/5/5/2K2 b 2G2S2B2R2P 1")));
    }

    #[test]
    fn pawn_stage() {
        assert!(!pawn_pass(&pos("1P2k/5/5/5/K4 b 2G2S2B2RP 1")));
        assert!(!pawn_pass(&pos("4k/1P3/5/1P3/K4 b 2G2S2B2R 1")));
        assert!(pawn_pass(&pos("1+P2k/5/5/5/K4 b 2G2S2B2RP 1")));
        assert!(!pawn_pass(&pos("4k/5/5/5/Kp3 b 2G2S2B2Rp 1")));
        let v = run(&pos("1P2k/5/5/5/K4 b 2G2S2B2RP 1"));
        assert_eq!(v, StageVerdict::Rejected(Rejection::PawnPlacement));
        assert_eq!(v.to_string(), "Failed: PawnPlacement");
        assert_eq!(v.stage_reached(), Stage::PassedFlip);
    }

    #[test]
    fn check_stage() {
        assert!(!opponent_check_pass(&pos("5/5/5/k+S3/4K b 2GS2B2R2P 1")));
        assert!(!opponent_check_pass(&pos("5/2k2/2K2/5/5 b 2G2S2B2R2P 1")));
        assert!(opponent_check_pass(&initial_position()));
    }

    #[test]
    fn start_is_reachable() {
        assert_eq!(run(&initial_position()), StageVerdict::Reachable);
    }

    #[test]
    fn double_check_fails_at_ply_zero() {
        let v = run(&pos("r3b/5/5/5/K2k1 b RB2G2S2P 1"));
        assert_eq!(
            v,
            StageVerdict::Rejected(Rejection::Reachability { max_ply: 0 })
        );
        assert_eq!(v.to_string(), "Failed: Reachability, ply=0");
    }
}
