use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use syncgame_ffi::*;

fn family(name: &str, n: usize, k: usize, m: usize) -> *mut SgDfa {
    let name = CString::new(name).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { sg_dfa_family(name.as_ptr(), n, k, m, &mut out) };
    assert_eq!(status, SgStatus::Ok);
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sg_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn decisions_through_the_c_api() {
    let e5 = family("e_series", 5, 0, 0);
    let mut level = SgLevel {
        kind: SgLevelKind::Omega,
        k: 0,
    };
    assert_eq!(unsafe { sg_game_level(e5, &mut level) }, SgStatus::Ok);
    assert_eq!(level, SgLevel { kind: SgLevelKind::Finite, k: 4 });

    let mut w = SgWinner::Alice;
    assert_eq!(unsafe { sg_decide_k(e5, 5, &mut w) }, SgStatus::Ok);
    assert_eq!(w, SgWinner::Bob);
    assert_eq!(unsafe { sg_decide_k(e5, 0, &mut w) }, SgStatus::InvalidArgument);
    assert!(last_error().contains("k must be at least 1"));

    let c5 = family("cerny", 5, 0, 0);
    assert_eq!(unsafe { sg_decide_m_omega(c5, 10, &mut w) }, SgStatus::Ok);
    assert_eq!(w, SgWinner::Alice);
    assert_eq!(unsafe { sg_decide_m_omega(c5, 9, &mut w) }, SgStatus::Ok);
    assert_eq!(w, SgWinner::Bob);

    let flower = family("flower", 5, 0, 0);
    let mut word = ptr::null_mut();
    assert_eq!(unsafe { sg_extract_reset_word(flower, 2, &mut word) }, SgStatus::Ok);
    let text = unsafe { CStr::from_ptr(word) }.to_str().unwrap().to_string();
    assert_eq!(text.split(' ').count(), 7);
    unsafe {
        sg_string_free(word);
        sg_dfa_free(flower);
        sg_dfa_free(c5);
        sg_dfa_free(e5);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut out = ptr::null_mut();
    let bad = CString::new("dfa\nstates 2\nletters a\ntrans\n0\n7\nend\n").unwrap();
    assert_eq!(unsafe { sg_dfa_parse(bad.as_ptr(), &mut out) }, SgStatus::Parse);
    assert!(out.is_null());

    let name = CString::new("nope").unwrap();
    assert_eq!(unsafe { sg_dfa_family(name.as_ptr(), 3, 0, 0, &mut out) }, SgStatus::InvalidArgument);

    let big = family("one_way_line", 40, 0, 0);
    let mut rt = 0usize;
    assert_eq!(unsafe { sg_reset_threshold(big, &mut rt) }, SgStatus::CapExceeded);

    let two_cycle = CString::new("dfa\nstates 2\nletters a\ntrans\n1\n0\nend\n").unwrap();
    let mut cycle = ptr::null_mut();
    assert_eq!(unsafe { sg_dfa_parse(two_cycle.as_ptr(), &mut cycle) }, SgStatus::Ok);
    assert_eq!(unsafe { sg_reset_threshold(cycle, &mut rt) }, SgStatus::NotSynchronizing);

    assert_eq!(unsafe { sg_decide_omega(big, ptr::null_mut()) }, SgStatus::NullPointer);
    assert_eq!(unsafe { sg_dfa_states(ptr::null()) }, 0);
    unsafe {
        sg_dfa_free(cycle);
        sg_dfa_free(big);
        sg_dfa_free(ptr::null_mut());
        sg_string_free(ptr::null_mut());
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libsyncgame_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let exe = std::env::temp_dir().join(format!("syncgame-ffi-smoke-{}", std::process::id()));
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    std::fs::remove_file(&exe).unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok 0.1.0"));
}
