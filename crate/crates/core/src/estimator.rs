//! The sampling experiment: draw unique uniform ranks, classify the positions
//! in parallel batches, and turn the pass counts into an interval estimate of
//! the number of reachable positions.
//!
//! The report depends only on the sample size, the seed and the search
//! settings. Batches are independent; their counts are summed in batch order
//! so neither the worker count nor the scheduling affects the result.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::codec::{total_space, unrank, RankIndex};
use crate::error::{Error, Result};
use crate::legality::{classify, Rejection, StageVerdict};
use crate::retro::{HeuristicParams, SearchBudget};

pub const CHECKPOINT_VERSION: u32 = 1;

/// z-score of a two-sided 95% interval.
const Z95: f64 = 1.96;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CiMethod {
    /// Normal approximation, p ± z·sqrt(p(1-p)/n).
    #[default]
    Wald,
    Wilson,
}

#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub n_samples: u64,
    pub seed: u64,
    pub worker_count: usize,
    pub budget: SearchBudget,
    pub params: HeuristicParams,
    pub checkpoint_path: Option<PathBuf>,
    pub batch_size: u64,
    pub ci_method: CiMethod,
}

impl SampleConfig {
    pub fn new(n_samples: u64, seed: u64) -> SampleConfig {
        SampleConfig {
            n_samples,
            seed,
            worker_count: std::thread::available_parallelism().map_or(1, |n| n.get()),
            budget: SearchBudget::default(),
            params: HeuristicParams::default(),
            checkpoint_path: None,
            batch_size: 10_000,
            ci_method: CiMethod::Wald,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::Config("n_samples must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch_size must be at least 1".into()));
        }
        if self.worker_count == 0 {
            return Err(Error::Config("worker_count must be at least 1".into()));
        }
        // uniqueness by rejection needs the sample to be a small fraction of the space
        if self.n_samples > total_space() / 2 {
            return Err(Error::Config(
                "n_samples exceeds half of the candidate space".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunnelCounts {
    pub generated: u64,
    pub passed_flip: u64,
    pub passed_pawn: u64,
    pub passed_check: u64,
    pub reachable: u64,
    /// Unreachable positions keyed by how far back they could be traced.
    pub backtrack_ply_histogram: BTreeMap<u32, u64>,
    pub exhausted: u64,
}

impl FunnelCounts {
    pub fn record(&mut self, verdict: &StageVerdict) {
        self.generated += 1;
        match verdict {
            StageVerdict::Rejected(Rejection::HorizontalFlip) => return,
            StageVerdict::Rejected(Rejection::PawnPlacement) => {
                self.passed_flip += 1;
                return;
            }
            StageVerdict::Rejected(Rejection::OpponentKingCheck) => {
                self.passed_flip += 1;
                self.passed_pawn += 1;
                return;
            }
            _ => {}
        }
        self.passed_flip += 1;
        self.passed_pawn += 1;
        self.passed_check += 1;
        match verdict {
            StageVerdict::Reachable => self.reachable += 1,
            StageVerdict::Rejected(Rejection::Reachability { max_ply }) => {
                *self.backtrack_ply_histogram.entry(*max_ply).or_default() += 1;
            }
            StageVerdict::Exhausted { .. } => self.exhausted += 1,
            StageVerdict::Rejected(_) => unreachable!(),
        }
    }

    pub fn merge(&mut self, other: &FunnelCounts) {
        self.generated += other.generated;
        self.passed_flip += other.passed_flip;
        self.passed_pawn += other.passed_pawn;
        self.passed_check += other.passed_check;
        self.reachable += other.reachable;
        self.exhausted += other.exhausted;
        for (ply, n) in &other.backtrack_ply_histogram {
            *self.backtrack_ply_histogram.entry(*ply).or_default() += n;
        }
    }

    pub fn unreachable(&self) -> u64 {
        self.backtrack_ply_histogram.values().sum()
    }

    /// Stage counts are non-increasing and the histogram accounts for every
    /// position that passed the check stage but was not reachable.
    pub fn is_consistent(&self) -> bool {
        self.generated >= self.passed_flip
            && self.passed_flip >= self.passed_pawn
            && self.passed_pawn >= self.passed_check
            && self.passed_check >= self.reachable
            && self.unreachable() + self.reachable + self.exhausted == self.passed_check
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub n_samples: u64,
    pub seed: u64,
    pub total_space: u64,
    pub funnel: FunnelCounts,
    pub p_hat: f64,
    pub ci_method: CiMethod,
    pub ci_low: f64,
    pub ci_high: f64,
    pub count_point: f64,
    pub count_low: f64,
    pub count_high: f64,
}

impl EstimateReport {
    pub fn from_counts(n_samples: u64, seed: u64, funnel: FunnelCounts, method: CiMethod) -> Self {
        let total = total_space();
        let n = funnel.generated;
        let p_hat = funnel.reachable as f64 / n as f64;
        let (ci_low, ci_high) = interval(funnel.reachable, n, method);
        EstimateReport {
            n_samples,
            seed,
            total_space: total,
            p_hat,
            ci_method: method,
            ci_low,
            ci_high,
            count_point: p_hat * total as f64,
            count_low: ci_low * total as f64,
            count_high: ci_high * total as f64,
            funnel,
        }
    }

    /// Pass counts per stage followed by the backtrack-ply distribution.
    pub fn render_table(&self) -> String {
        let f = &self.funnel;
        let mut out = String::new();
        let rows = [
            ("Initial Generation", f.generated),
            ("Horizontal Flip", f.passed_flip),
            ("Pawn Placement", f.passed_pawn),
            ("Opponent King Check", f.passed_check),
            ("Reachability", f.reachable),
        ];
        let _ = writeln!(out, "{:<22} | {:>14}", "Check Content", "Number Passed");
        let _ = writeln!(out, "{:-<22}-+-{:-<14}", "", "");
        for (name, n) in rows {
            let _ = writeln!(out, "{name:<22} | {:>14}", group_digits(n));
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<6} | {:>19}", "Ply", "Number of Positions");
        let _ = writeln!(out, "{:-<6}-+-{:-<19}", "", "");
        for (ply, n) in &f.backtrack_ply_histogram {
            let _ = writeln!(out, "{ply:<6} | {:>19}", group_digits(*n));
        }
        let _ = writeln!(out);
        if f.exhausted > 0 {
            let _ = writeln!(
                out,
                "WARNING: {} searches exhausted their budget",
                f.exhausted
            );
        }
        let _ = writeln!(out, "p_hat        = {:.6}", self.p_hat);
        let _ = writeln!(
            out,
            "95% CI       = [{:.6}, {:.6}] ({:?})",
            self.ci_low, self.ci_high, self.ci_method
        );
        let _ = writeln!(out, "reachable    ≈ {:.4e}", self.count_point);
        let _ = writeln!(
            out,
            "95% CI count = [{:.4e}, {:.4e}]",
            self.count_low, self.count_high
        );
        out
    }
}

fn group_digits(n: u64) -> String {
    let s = n.to_string();
    let mut out = String::with_capacity(s.len() + s.len() / 3);
    for (i, c) in s.chars().enumerate() {
        if i > 0 && (s.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// Wald 95% interval for a binomial proportion, clamped to [0, 1].
pub fn confidence_interval(k: u64, n: u64) -> (f64, f64) {
    interval(k, n, CiMethod::Wald)
}

pub fn interval(k: u64, n: u64, method: CiMethod) -> (f64, f64) {
    assert!(n >= 1 && k <= n, "need 0 <= k <= n and n >= 1");
    let n_f = n as f64;
    let p = k as f64 / n_f;
    let (low, high) = match method {
        CiMethod::Wald => {
            let half = Z95 * (p * (1.0 - p) / n_f).sqrt();
            (p - half, p + half)
        }
        CiMethod::Wilson => {
            let z2 = Z95 * Z95;
            let denom = 1.0 + z2 / n_f;
            let center = (p + z2 / (2.0 * n_f)) / denom;
            let half = Z95 * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
            (center - half, center + half)
        }
    };
    (low.clamp(0.0, 1.0), high.clamp(0.0, 1.0))
}

/// `n` distinct ranks drawn uniformly from the candidate space.
///
/// 64-bit outputs of a seeded ChaCha8 stream are kept when they fall below
/// the space size and have not been seen before.
pub fn sample_ranks(n: u64, seed: u64) -> Vec<RankIndex> {
    let total = total_space();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: FxHashSet<u64> = FxHashSet::default();
    seen.reserve(n as usize);
    let mut out = Vec::with_capacity(n as usize);
    while (out.len() as u64) < n {
        let x = rng.next_u64();
        if x < total && seen.insert(x) {
            out.push(RankIndex::new(x).expect("below total"));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct CheckpointRecord {
    version: u32,
    seed: u64,
    n_samples: u64,
    batch_size: u64,
    max_nodes: u64,
    params: [f64; 4],
    batch_index: u64,
    n_in_batch: u64,
    digest: String,
    counts: FunnelCounts,
}

fn batch_digest(ranks: &[RankIndex]) -> String {
    let mut h = Sha256::new();
    for r in ranks {
        h.update(r.get().to_le_bytes());
    }
    h.finalize()[..8]
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn params_array(p: &HeuristicParams) -> [f64; 4] {
    [p.a, p.b, p.c, p.d]
}

fn classify_batch(ranks: &[RankIndex], config: &SampleConfig) -> FunnelCounts {
    let mut counts = FunnelCounts::default();
    for r in ranks {
        let pos = unrank(r.get()).expect("sampled rank in range");
        counts.record(&classify(&pos, &config.params, &config.budget));
    }
    counts
}

/// Reads completed batches from a checkpoint, dropping a trailing partial
/// record, and rewrites the file so that it holds only the valid records.
fn load_checkpoint(
    path: &Path,
    config: &SampleConfig,
    batches: &[&[RankIndex]],
) -> Result<BTreeMap<u64, FunnelCounts>> {
    let mut done = BTreeMap::new();
    if !path.exists() {
        return Ok(done);
    }
    let fail = |reason: String| Error::Checkpoint {
        path: path.display().to_string(),
        reason,
    };
    let lines: Vec<String> = BufReader::new(File::open(path)?)
        .lines()
        .collect::<Result<_, _>>()?;
    let mut valid = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: CheckpointRecord = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(_) if i + 1 == lines.len() => break,
            Err(e) => return Err(fail(format!("line {}: {e}", i + 1))),
        };
        if record.version != CHECKPOINT_VERSION {
            return Err(fail(format!(
                "version {} (expected {CHECKPOINT_VERSION})",
                record.version
            )));
        }
        if record.seed != config.seed
            || record.n_samples != config.n_samples
            || record.batch_size != config.batch_size
            || record.max_nodes != config.budget.max_nodes
            || record.params != params_array(&config.params)
        {
            return Err(fail("written with a different configuration".into()));
        }
        let b = record.batch_index;
        let Some(ranks) = batches.get(b as usize) else {
            return Err(fail(format!("batch index {b} out of range")));
        };
        if record.n_in_batch != ranks.len() as u64 || record.digest != batch_digest(ranks) {
            return Err(fail(format!("batch {b} does not match the sampled ranks")));
        }
        if record.counts.generated != record.n_in_batch || !record.counts.is_consistent() {
            return Err(fail(format!("batch {b} has inconsistent counts")));
        }
        if done.insert(b, record.counts).is_some() {
            return Err(fail(format!("batch {b} recorded twice")));
        }
        valid.push(line.as_str());
    }
    let mut file = File::create(path)?;
    for line in valid {
        writeln!(file, "{line}")?;
    }
    file.sync_all()?;
    Ok(done)
}

/// Runs the experiment described by `config`.
pub fn run(config: &SampleConfig) -> Result<EstimateReport> {
    config.validate()?;
    let ranks = sample_ranks(config.n_samples, config.seed);
    let batches: Vec<&[RankIndex]> = ranks.chunks(config.batch_size as usize).collect();

    let mut results: Vec<Option<FunnelCounts>> = vec![None; batches.len()];
    let writer = match &config.checkpoint_path {
        Some(path) => {
            for (b, counts) in load_checkpoint(path, config, &batches)? {
                results[b as usize] = Some(counts);
            }
            Some(Mutex::new(
                OpenOptions::new().create(true).append(true).open(path)?,
            ))
        }
        None => None,
    };

    let pending: Vec<usize> = (0..batches.len())
        .filter(|&b| results[b].is_none())
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.worker_count)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let computed: Vec<(usize, FunnelCounts)> = pool.install(|| {
        pending
            .par_iter()
            .map(|&b| -> Result<(usize, FunnelCounts)> {
                let counts = classify_batch(batches[b], config);
                if let Some(w) = &writer {
                    let record = CheckpointRecord {
                        version: CHECKPOINT_VERSION,
                        seed: config.seed,
                        n_samples: config.n_samples,
                        batch_size: config.batch_size,
                        max_nodes: config.budget.max_nodes,
                        params: params_array(&config.params),
                        batch_index: b as u64,
                        n_in_batch: batches[b].len() as u64,
                        digest: batch_digest(batches[b]),
                        counts: counts.clone(),
                    };
                    let line = serde_json::to_string(&record).expect("record serializes");
                    let mut file = w.lock().unwrap_or_else(|e| e.into_inner());
                    writeln!(file, "{line}")?;
                    file.flush()?;
                }
                Ok((b, counts))
            })
            .collect::<Result<_>>()
    })?;
    for (b, counts) in computed {
        results[b] = Some(counts);
    }

    let mut funnel = FunnelCounts::default();
    for counts in results.iter().flatten() {
        funnel.merge(counts);
    }
    debug_assert!(funnel.is_consistent());
    Ok(EstimateReport::from_counts(
        config.n_samples,
        config.seed,
        funnel,
        config.ci_method,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_are_deterministic_unique_and_in_range() {
        let a = sample_ranks(1000, 7);
        let b = sample_ranks(1000, 7);
        assert_eq!(a, b);
        assert_ne!(a, sample_ranks(1000, 8));
        let set: FxHashSet<_> = a.iter().collect();
        assert_eq!(set.len(), 1000);
        assert!(a.iter().all(|r| r.get() < total_space()));
        assert_eq!(sample_ranks(5, 42), sample_ranks(5, 42));
    }

    #[test]
    fn wald_interval_edges() {
        assert_eq!(confidence_interval(0, 10), (0.0, 0.0));
        assert_eq!(confidence_interval(10, 10), (1.0, 1.0));
        let (lo, hi) = confidence_interval(1, 1);
        assert_eq!((lo, hi), (1.0, 1.0));
        let (lo, hi) = interval(0, 10, CiMethod::Wilson);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.4);
    }

    #[test]
    fn wald_interval_reproduces_reported_digits() {
        let (lo, hi) = confidence_interval(14_849_198, 100_000_000);
        assert_eq!(format!("{lo:.5}"), "0.14842");
        assert_eq!(format!("{hi:.5}"), "0.14856");
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(run(&SampleConfig::new(0, 1)).is_err());
        let mut c = SampleConfig::new(10, 1);
        c.batch_size = 0;
        assert!(run(&c).is_err());
    }

    #[test]
    fn single_sample_has_degenerate_interval() {
        let mut c = SampleConfig::new(1, 3);
        c.worker_count = 1;
        let r = run(&c).unwrap();
        assert_eq!(r.funnel.generated, 1);
        assert_eq!(r.ci_low, r.p_hat);
        assert_eq!(r.ci_high, r.p_hat);
    }

    #[test]
    fn digit_grouping() {
        assert_eq!(group_digits(100_000_000), "100,000,000");
        assert_eq!(group_digits(114), "114");
        assert_eq!(group_digits(4175), "4,175");
    }
}
