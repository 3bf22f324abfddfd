use std::ffi::{c_char, CStr, CString};
use std::ptr;

use minishogi_reach_ffi::*;

const START: &str = "rbsgk/4p/5/P4/KGSBR b - 1";

fn position(sfen: &str) -> *mut MsrPosition {
    let text = CString::new(sfen).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { msr_position_from_sfen(text.as_ptr(), &mut out) },
        MsrStatus::Ok
    );
    assert!(!out.is_null());
    out
}

fn sfen_of(pos: *const MsrPosition) -> String {
    let mut needed = 0;
    let status = unsafe { msr_position_to_sfen(pos, ptr::null_mut(), 0, &mut needed) };
    assert_eq!(status, MsrStatus::BufferTooSmall);
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(
        unsafe { msr_position_to_sfen(pos, buf.as_mut_ptr(), buf.len(), &mut needed) },
        MsrStatus::Ok
    );
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_str()
        .unwrap()
        .to_owned()
}

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let mut needed = 0;
    unsafe { msr_last_error(buf.as_mut_ptr(), buf.len(), &mut needed) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn constants() {
    assert_eq!(msr_total_space(), 16_014_219_505_238_849_250);
    assert_eq!(msr_kpos_count(), 310);
    let c = msr_search_config_default();
    assert_eq!((c.a, c.b, c.c, c.d), (10.0, 10.0, 1.0, 1.0));
    assert_eq!(c.max_open_set_size, 0);
}

#[test]
fn rank_unrank_round_trip() {
    let pos = position(START);
    let mut r = 0;
    assert_eq!(unsafe { msr_position_rank(pos, &mut r) }, MsrStatus::Ok);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { msr_position_unrank(r, &mut back) }, MsrStatus::Ok);
    assert_eq!(sfen_of(back), START);
    unsafe {
        msr_position_free(pos);
        msr_position_free(back);
    }
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    let bad = CString::new("not a position").unwrap();
    assert_eq!(
        unsafe { msr_position_from_sfen(bad.as_ptr(), &mut out) },
        MsrStatus::InvalidSfen
    );
    assert!(out.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(
        unsafe { msr_position_from_sfen(ptr::null(), &mut out) },
        MsrStatus::NullPointer
    );
    assert_eq!(
        unsafe { msr_position_unrank(msr_total_space(), &mut out) },
        MsrStatus::RankOutOfRange
    );
    assert!(last_error().contains("outside"));

    let second = position("rbsgk/4p/5/P4/KGSBR w - 1");
    let mut r = 0;
    assert_eq!(
        unsafe { msr_position_rank(second, &mut r) },
        MsrStatus::NotCandidate
    );
    assert_eq!(
        unsafe { msr_position_rank(ptr::null(), &mut r) },
        MsrStatus::NullPointer
    );
    unsafe { msr_position_free(second) };
    unsafe { msr_position_free(ptr::null_mut()) };

    let (mut lo, mut hi) = (0.0, 0.0);
    assert_eq!(
        unsafe { msr_confidence_interval(3, 0, &mut lo, &mut hi) },
        MsrStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { msr_confidence_interval(1, 2, &mut lo, ptr::null_mut()) },
        MsrStatus::NullPointer
    );
}

#[test]
fn classify_verdicts() {
    let cases = [
        (START, MsrVerdictKind::Reachable, 0),
        (
            "1P2k/5/5/5/K4 b 2G2S2B2RP 1",
            MsrVerdictKind::FailedPawnPlacement,
            0,
        ),
        (
            "2k2/5/4G/5/2K2 b G2S2B2R2P 1",
            MsrVerdictKind::FailedHorizontalFlip,
            0,
        ),
        (
            "r3b/5/5/5/K2k1 b RB2G2S2P 1",
            MsrVerdictKind::FailedReachability,
            0,
        ),
        (
            "3G+b/4k/5/GKRR1/B3+P b SPs 1",
            MsrVerdictKind::FailedReachability,
            1,
        ),
    ];
    for (sfen, kind, ply) in cases {
        let pos = position(sfen);
        let mut v = MsrVerdict {
            kind: MsrVerdictKind::Reachable,
            max_ply: 99,
            nodes_expanded: 0,
        };
        assert_eq!(
            unsafe { msr_classify(pos, ptr::null(), &mut v) },
            MsrStatus::Ok
        );
        assert_eq!((v.kind, v.max_ply), (kind, ply), "{sfen}");
        unsafe { msr_position_free(pos) };
    }

    let pos = position("3G+b/4k/5/GKRR1/B3+P b SPs 1");
    let mut tight = msr_search_config_default();
    tight.max_nodes = 2;
    let mut v = MsrVerdict {
        kind: MsrVerdictKind::Reachable,
        max_ply: 0,
        nodes_expanded: 0,
    };
    assert_eq!(unsafe { msr_classify(pos, &tight, &mut v) }, MsrStatus::Ok);
    assert_eq!(v.kind, MsrVerdictKind::ResourceExhausted);
    tight.a = -1.0;
    assert_eq!(
        unsafe { msr_classify(pos, &tight, &mut v) },
        MsrStatus::InvalidArgument
    );
    unsafe { msr_position_free(pos) };
}

#[test]
fn estimate_handle() {
    let mut report = ptr::null_mut();
    let status = unsafe { msr_estimate_run(500, 9, 1, 100, ptr::null(), ptr::null(), &mut report) };
    assert_eq!(status, MsrStatus::Ok);

    let mut funnel = MsrFunnel::default();
    assert_eq!(
        unsafe { msr_estimate_funnel(report, &mut funnel) },
        MsrStatus::Ok
    );
    assert_eq!(funnel.generated, 500);
    assert!(funnel.passed_flip >= funnel.passed_pawn && funnel.passed_check >= funnel.reachable);

    let (mut p, mut lo, mut hi) = (0.0, 0.0, 0.0);
    assert_eq!(
        unsafe { msr_estimate_fraction(report, &mut p, &mut lo, &mut hi) },
        MsrStatus::Ok
    );
    assert_eq!(p, funnel.reachable as f64 / 500.0);
    assert!(lo <= p && p <= hi);
    let (mut c, mut clo, mut chi) = (0.0, 0.0, 0.0);
    assert_eq!(
        unsafe { msr_estimate_count(report, &mut c, &mut clo, &mut chi) },
        MsrStatus::Ok
    );
    assert!(clo <= c && c <= chi);

    let mut ply0 = 0;
    assert_eq!(
        unsafe { msr_estimate_ply_count(report, 0, &mut ply0) },
        MsrStatus::Ok
    );
    assert!(ply0 <= funnel.passed_check - funnel.reachable);

    let mut needed = 0;
    unsafe { msr_estimate_to_json(report, ptr::null_mut(), 0, &mut needed) };
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(
        unsafe { msr_estimate_to_json(report, buf.as_mut_ptr(), needed, &mut needed) },
        MsrStatus::Ok
    );
    let json = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    assert!(json.contains("\"generated\":500"));
    unsafe { msr_estimate_free(report) };

    let mut none = ptr::null_mut();
    assert_eq!(
        unsafe { msr_estimate_run(0, 9, 1, 0, ptr::null(), ptr::null(), &mut none) },
        MsrStatus::InvalidArgument
    );
}
