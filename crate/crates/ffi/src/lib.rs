//! C interface to `minishogi_reach`.
//!
//! Positions and estimate reports are opaque handles created and freed by
//! this library. Every fallible call returns an [`MsrStatus`]; the message of
//! the most recent failure on the calling thread is available through
//! [`msr_last_error`]. Text is exchanged through caller-owned buffers: the
//! required size (including the terminating NUL) is always written to
//! `needed`, and [`MsrStatus::BufferTooSmall`] is returned when it does not fit.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use minishogi_reach::codec::{kpos_count, rank, total_space, unrank};
use minishogi_reach::estimator::{self, confidence_interval, EstimateReport, SampleConfig};
use minishogi_reach::legality::{classify, Rejection, StageVerdict};
use minishogi_reach::retro::{HeuristicParams, SearchBudget};
use minishogi_reach::rules::{from_sfen, Position};
use minishogi_reach::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidSfen = 3,
    NotCandidate = 4,
    RankOutOfRange = 5,
    InvalidArgument = 6,
    BufferTooSmall = 7,
    Checkpoint = 8,
    Io = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsrVerdictKind {
    Reachable = 0,
    FailedHorizontalFlip = 1,
    FailedPawnPlacement = 2,
    FailedOpponentKingCheck = 3,
    FailedReachability = 4,
    ResourceExhausted = 5,
}

/// Outcome of [`msr_classify`]. `max_ply` is meaningful for
/// `FailedReachability`, `nodes_expanded` for `ResourceExhausted`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MsrVerdict {
    pub kind: MsrVerdictKind,
    pub max_ply: u32,
    pub nodes_expanded: u64,
}

/// Heuristic weights and search limits. `max_open_set_size == 0` means no
/// cap on the open set.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MsrSearchConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub max_nodes: u64,
    pub max_open_set_size: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MsrFunnel {
    pub generated: u64,
    pub passed_flip: u64,
    pub passed_pawn: u64,
    pub passed_check: u64,
    pub reachable: u64,
    pub exhausted: u64,
}

/// Opaque position handle.
pub struct MsrPosition(Position);

/// Opaque estimate report handle.
pub struct MsrEstimate(EstimateReport);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: MsrStatus, message: impl Into<String>) -> MsrStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = message.into());
    status
}

fn status_of(e: &Error) -> MsrStatus {
    match e {
        Error::Sfen { .. }
        | Error::MissingKing(_)
        | Error::ExtraKing(_)
        | Error::Conservation { .. }
        | Error::IllegalMove(_) => MsrStatus::InvalidSfen,
        Error::NotCandidate(_) => MsrStatus::NotCandidate,
        Error::RankOutOfRange { .. } => MsrStatus::RankOutOfRange,
        Error::Config(_) => MsrStatus::InvalidArgument,
        Error::Checkpoint { .. } => MsrStatus::Checkpoint,
        Error::Io(_) => MsrStatus::Io,
    }
}

fn from_error(e: Error) -> MsrStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `f`, turning a panic into [`MsrStatus::Panic`].
fn guard(f: impl FnOnce() -> MsrStatus) -> MsrStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(MsrStatus::Panic, "internal panic"))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, MsrStatus> {
    if s.is_null() {
        return Err(fail(MsrStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(MsrStatus::InvalidUtf8, e.to_string()))
}

unsafe fn write_str(text: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> MsrStatus {
    let len = text.len() + 1;
    if !needed.is_null() {
        *needed = len;
    }
    if buf.is_null() || cap < len {
        return fail(MsrStatus::BufferTooSmall, format!("{len} bytes needed"));
    }
    ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
    *buf.add(text.len()) = 0;
    MsrStatus::Ok
}

unsafe fn search_settings(
    config: *const MsrSearchConfig,
) -> Result<(HeuristicParams, SearchBudget), MsrStatus> {
    let c = if config.is_null() {
        msr_search_config_default()
    } else {
        *config
    };
    let open = (c.max_open_set_size != 0).then_some(c.max_open_set_size as usize);
    let params = HeuristicParams::new(c.a, c.b, c.c, c.d).map_err(from_error)?;
    let budget = SearchBudget::new(c.max_nodes, open).map_err(from_error)?;
    Ok((params, budget))
}

macro_rules! out_ptr {
    ($p:expr) => {
        if $p.is_null() {
            return fail(MsrStatus::NullPointer, concat!("null ", stringify!($p)));
        }
    };
}

macro_rules! handle {
    ($p:expr) => {
        match $p.as_ref() {
            Some(h) => &h.0,
            None => return fail(MsrStatus::NullPointer, concat!("null ", stringify!($p))),
        }
    };
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Copies the message of the last failed call on this thread.
///
/// # Safety
/// `buf` must be valid for `cap` bytes or null; `needed` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn msr_last_error(
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> MsrStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    write_str(&msg, buf, cap, needed)
}

#[no_mangle]
pub extern "C" fn msr_total_space() -> u64 {
    total_space()
}

#[no_mangle]
pub extern "C" fn msr_kpos_count() -> u64 {
    kpos_count()
}

#[no_mangle]
pub extern "C" fn msr_search_config_default() -> MsrSearchConfig {
    let p = HeuristicParams::default();
    let b = SearchBudget::default();
    MsrSearchConfig {
        a: p.a,
        b: p.b,
        c: p.c,
        d: p.d,
        max_nodes: b.max_nodes,
        max_open_set_size: b.max_open_set_size.map_or(0, |n| n as u64),
    }
}

/// Wald 95% interval for `k` successes in `n` trials.
///
/// # Safety
/// `low` and `high` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msr_confidence_interval(
    k: u64,
    n: u64,
    low: *mut f64,
    high: *mut f64,
) -> MsrStatus {
    out_ptr!(low);
    out_ptr!(high);
    if n == 0 || k > n {
        return fail(MsrStatus::InvalidArgument, "need 0 <= k <= n and n >= 1");
    }
    (*low, *high) = confidence_interval(k, n);
    MsrStatus::Ok
}

/// Parses an SFEN string into a new handle.
///
/// # Safety
/// `sfen` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msr_position_from_sfen(
    sfen: *const c_char,
    out: *mut *mut MsrPosition,
) -> MsrStatus {
    out_ptr!(out);
    guard(|| {
        let text = try_status!(read_str(sfen));
        match from_sfen(text) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(MsrPosition(p)));
                MsrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Creates the position with rank `r`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msr_position_unrank(r: u64, out: *mut *mut MsrPosition) -> MsrStatus {
    out_ptr!(out);
    guard(|| match unrank(r) {
        Ok(p) => {
            *out = Box::into_raw(Box::new(MsrPosition(p)));
            MsrStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// # Safety
/// `pos` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn msr_position_free(pos: *mut MsrPosition) {
    if !pos.is_null() {
        drop(Box::from_raw(pos));
    }
}

/// # Safety
/// `pos` must be a live handle; `buf`/`needed` as for [`msr_last_error`].
#[no_mangle]
pub unsafe extern "C" fn msr_position_to_sfen(
    pos: *const MsrPosition,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> MsrStatus {
    let p = handle!(pos);
    write_str(&p.to_string(), buf, cap, needed)
}

/// # Safety
/// `pos` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msr_position_rank(pos: *const MsrPosition, out: *mut u64) -> MsrStatus {
    let p = handle!(pos);
    out_ptr!(out);
    guard(|| match rank(p) {
        Ok(r) => {
            *out = r.get();
            MsrStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// Runs the legality funnel. A null `config` selects the defaults.
///
/// # Safety
/// `pos` must be a live handle; `config` null or valid; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msr_classify(
    pos: *const MsrPosition,
    config: *const MsrSearchConfig,
    out: *mut MsrVerdict,
) -> MsrStatus {
    let p = handle!(pos);
    out_ptr!(out);
    let (params, budget) = try_status!(search_settings(config));
    guard(|| {
        let (kind, max_ply, nodes_expanded) = match classify(p, &params, &budget) {
            StageVerdict::Reachable => (MsrVerdictKind::Reachable, 0, 0),
            StageVerdict::Rejected(Rejection::HorizontalFlip) => {
                (MsrVerdictKind::FailedHorizontalFlip, 0, 0)
            }
            StageVerdict::Rejected(Rejection::PawnPlacement) => {
                (MsrVerdictKind::FailedPawnPlacement, 0, 0)
            }
            StageVerdict::Rejected(Rejection::OpponentKingCheck) => {
                (MsrVerdictKind::FailedOpponentKingCheck, 0, 0)
            }
            StageVerdict::Rejected(Rejection::Reachability { max_ply }) => {
                (MsrVerdictKind::FailedReachability, max_ply, 0)
            }
            StageVerdict::Exhausted { nodes_expanded } => {
                (MsrVerdictKind::ResourceExhausted, 0, nodes_expanded)
            }
        };
        *out = MsrVerdict {
            kind,
            max_ply,
            nodes_expanded,
        };
        MsrStatus::Ok
    })
}

/// Runs the sampling estimate. `worker_count == 0` uses the available
/// parallelism; `batch_size == 0` uses the default; a null
/// `checkpoint_path` disables checkpointing.
///
/// # Safety
/// `config` null or valid; `checkpoint_path` null or NUL-terminated; `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msr_estimate_run(
    n_samples: u64,
    seed: u64,
    worker_count: u32,
    batch_size: u64,
    config: *const MsrSearchConfig,
    checkpoint_path: *const c_char,
    out: *mut *mut MsrEstimate,
) -> MsrStatus {
    out_ptr!(out);
    let (params, budget) = try_status!(search_settings(config));
    let mut sc = SampleConfig::new(n_samples, seed);
    sc.params = params;
    sc.budget = budget;
    if worker_count > 0 {
        sc.worker_count = worker_count as usize;
    }
    if batch_size > 0 {
        sc.batch_size = batch_size;
    }
    if !checkpoint_path.is_null() {
        sc.checkpoint_path = Some(PathBuf::from(try_status!(read_str(checkpoint_path))));
    }
    guard(|| match estimator::run(&sc) {
        Ok(report) => {
            *out = Box::into_raw(Box::new(MsrEstimate(report)));
            MsrStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// # Safety
/// `report` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn msr_estimate_free(report: *mut MsrEstimate) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Point estimate and interval of the reachable fraction.
///
/// # Safety
/// `report` must be a live handle; the out pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msr_estimate_fraction(
    report: *const MsrEstimate,
    p_hat: *mut f64,
    low: *mut f64,
    high: *mut f64,
) -> MsrStatus {
    let r = handle!(report);
    out_ptr!(p_hat);
    out_ptr!(low);
    out_ptr!(high);
    (*p_hat, *low, *high) = (r.p_hat, r.ci_low, r.ci_high);
    MsrStatus::Ok
}

/// Point estimate and interval scaled to position counts.
///
/// # Safety
/// As for [`msr_estimate_fraction`].
#[no_mangle]
pub unsafe extern "C" fn msr_estimate_count(
    report: *const MsrEstimate,
    point: *mut f64,
    low: *mut f64,
    high: *mut f64,
) -> MsrStatus {
    let r = handle!(report);
    out_ptr!(point);
    out_ptr!(low);
    out_ptr!(high);
    (*point, *low, *high) = (r.count_point, r.count_low, r.count_high);
    MsrStatus::Ok
}

/// # Safety
/// `report` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msr_estimate_funnel(
    report: *const MsrEstimate,
    out: *mut MsrFunnel,
) -> MsrStatus {
    let r = handle!(report);
    out_ptr!(out);
    let f = &r.funnel;
    *out = MsrFunnel {
        generated: f.generated,
        passed_flip: f.passed_flip,
        passed_pawn: f.passed_pawn,
        passed_check: f.passed_check,
        reachable: f.reachable,
        exhausted: f.exhausted,
    };
    MsrStatus::Ok
}

/// Number of unreachable samples whose deepest predecessor was `ply` moves back.
///
/// # Safety
/// `report` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msr_estimate_ply_count(
    report: *const MsrEstimate,
    ply: u32,
    out: *mut u64,
) -> MsrStatus {
    let r = handle!(report);
    out_ptr!(out);
    *out = r
        .funnel
        .backtrack_ply_histogram
        .get(&ply)
        .copied()
        .unwrap_or(0);
    MsrStatus::Ok
}

/// The full report as JSON.
///
/// # Safety
/// `report` must be a live handle; `buf`/`needed` as for [`msr_last_error`].
#[no_mangle]
pub unsafe extern "C" fn msr_estimate_to_json(
    report: *const MsrEstimate,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> MsrStatus {
    let r = handle!(report);
    let text = serde_json::to_string(r).expect("report serializes");
    write_str(&text, buf, cap, needed)
}
