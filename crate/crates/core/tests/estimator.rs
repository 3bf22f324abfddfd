use std::fs;
use std::path::Path;

use minishogi_reach::estimator::{run, sample_ranks, EstimateReport, SampleConfig};
use minishogi_reach::Error;

fn config(workers: usize, checkpoint: Option<&Path>) -> SampleConfig {
    let mut c = SampleConfig::new(700, 5);
    c.batch_size = 100;
    c.worker_count = workers;
    c.checkpoint_path = checkpoint.map(Path::to_path_buf);
    c
}

fn baseline() -> EstimateReport {
    run(&config(1, None)).unwrap()
}

#[test]
fn report_is_independent_of_worker_count() {
    let one = baseline();
    let three = run(&config(3, None)).unwrap();
    assert_eq!(one, three);
    assert_eq!(
        serde_json::to_string(&one).unwrap(),
        serde_json::to_string(&three).unwrap()
    );
    assert!(one.funnel.is_consistent());
    assert_eq!(one.funnel.generated, 700);
}

#[test]
fn checkpoint_records_every_batch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.jsonl");
    let report = run(&config(2, Some(&path))).unwrap();
    assert_eq!(report, baseline());
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 7);
    // a finished checkpoint resumes without recomputation
    assert_eq!(run(&config(1, Some(&path))).unwrap(), report);
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 7);
}

#[test]
fn interrupted_run_resumes_to_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.jsonl");
    run(&config(1, Some(&path))).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // three batches survived, the fourth was cut off mid-write
    let partial = format!(
        "{}\n{}",
        lines[..3].join("\n"),
        &lines[3][..lines[3].len() / 2]
    );
    fs::write(&path, partial).unwrap();

    let resumed = run(&config(2, Some(&path))).unwrap();
    assert_eq!(resumed, baseline());
    let rewritten = fs::read_to_string(&path).unwrap();
    assert_eq!(rewritten.lines().count(), 7);
    assert!(rewritten
        .lines()
        .all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));
}

#[test]
fn mismatched_checkpoint_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.jsonl");
    run(&config(1, Some(&path))).unwrap();
    let mut other = config(1, Some(&path));
    other.seed = 6;
    assert!(matches!(run(&other), Err(Error::Checkpoint { .. })));
    let mut other = config(1, Some(&path));
    other.budget.max_nodes = 1000;
    assert!(matches!(run(&other), Err(Error::Checkpoint { .. })));
}

#[test]
fn corrupted_checkpoint_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.jsonl");
    run(&config(1, Some(&path))).unwrap();
    let text = fs::read_to_string(&path).unwrap();

    let garbled = text.replacen('{', "#", 1);
    fs::write(&path, &garbled).unwrap();
    assert!(matches!(
        run(&config(1, Some(&path))),
        Err(Error::Checkpoint { .. })
    ));

    let tampered = text.replacen("\"reachable\":", "\"reachable\":1", 1);
    fs::write(&path, &tampered).unwrap();
    assert!(matches!(
        run(&config(1, Some(&path))),
        Err(Error::Checkpoint { .. })
    ));

    let versioned = text.replace("\"version\":1", "\"version\":99");
    fs::write(&path, &versioned).unwrap();
    assert!(matches!(
        run(&config(1, Some(&path))),
        Err(Error::Checkpoint { .. })
    ));
}

#[test]
fn sampling_is_a_function_of_the_seed() {
    assert_eq!(sample_ranks(300, 5), sample_ranks(300, 5));
    let prefix = sample_ranks(100, 5);
    assert_eq!(&sample_ranks(300, 5)[..100], &prefix[..]);
}

#[test]
fn invalid_configs() {
    assert!(matches!(
        run(&SampleConfig::new(0, 1)),
        Err(Error::Config(_))
    ));
    let mut c = SampleConfig::new(10, 1);
    c.worker_count = 0;
    assert!(matches!(run(&c), Err(Error::Config(_))));
}
