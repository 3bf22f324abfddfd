//! Values computed once by this implementation and frozen against regressions.

use std::collections::BTreeMap;

use minishogi_reach::codec::{rank, unrank};
use minishogi_reach::estimator::{run, SampleConfig};
use minishogi_reach::oracle::forward_enumerate;
use minishogi_reach::rules::{initial_position, legal_moves};

#[test]
fn start_position_rank() {
    assert_eq!(
        rank(&initial_position()).unwrap().get(),
        791_435_837_433_331_558
    );
    assert_eq!(unrank(0).unwrap().to_string(), "5/5/pp3/sbbrr/Kkggs b - 1");
}

/// Enumerated by hand piece by piece: Pawn a3; King b2; Gold b2 c2;
/// Silver b2 c2 d2; Bishop e2 c2 b3 a4; Rook e2 e3 e4.
#[test]
fn start_position_moves() {
    let mut moves: Vec<String> = legal_moves(&initial_position())
        .iter()
        .map(|m| m.to_string())
        .collect();
    moves.sort();
    let expected = [
        "a1b2", "a2a3", "b1b2", "b1c2", "c1b2", "c1c2", "c1d2", "d1a4", "d1b3", "d1c2", "d1e2",
        "e1e2", "e1e3", "e1e4",
    ];
    assert_eq!(moves, expected);
}

#[test]
fn forward_layer_sizes() {
    assert_eq!(
        forward_enumerate(4).layer_sizes(),
        [1, 14, 181, 1498, 14186]
    );
}

#[test]
fn small_sample_funnel() {
    let mut c = SampleConfig::new(2000, 42);
    c.worker_count = 1;
    let f = run(&c).unwrap().funnel;
    assert_eq!(
        (
            f.generated,
            f.passed_flip,
            f.passed_pawn,
            f.passed_check,
            f.reachable,
            f.exhausted
        ),
        (2000, 1946, 1581, 433, 308, 0)
    );
    assert_eq!(f.backtrack_ply_histogram, BTreeMap::from([(0, 125)]));
}
