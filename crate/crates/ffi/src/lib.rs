//! C interface to `syncgame`.
//!
//! Automata are passed around as opaque `SgDfa` handles. Every fallible call
//! returns an [`SgStatus`]; on failure the message is available from
//! [`sg_last_error`] on the same thread. Strings returned to the caller are
//! owned by the caller and released with [`sg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use syncgame::automaton::{parse_dfa, serialize_dfa};
use syncgame::families::FamilySpec;
use syncgame::oracle::rt_exact;
use syncgame::potential::extract_reset_word;
use syncgame::solver::{decide_k, decide_m_omega, decide_omega, game_level, Level};
use syncgame::{Dfa, Error};

/// An automaton owned by the library.
pub struct SgDfa(Dfa);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    InvalidArgument = 3,
    CapExceeded = 4,
    NotSynchronizing = 5,
    Precondition = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SgWinner {
    Alice = 0,
    Bob = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SgLevelKind {
    NotSynchronizing = 0,
    Finite = 1,
    Omega = 2,
}

/// Game level; `k` is meaningful only for `Finite`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SgLevel {
    pub kind: SgLevelKind,
    pub k: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SgStatus {
    match e {
        Error::Parse { .. } | Error::InvalidDfa(_) => SgStatus::Parse,
        Error::InvalidWord(_) | Error::InvalidArgument(_) => SgStatus::InvalidArgument,
        Error::CapExceeded { .. } => SgStatus::CapExceeded,
        Error::NotSynchronizing => SgStatus::NotSynchronizing,
        Error::Precondition(_) => SgStatus::Precondition,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `body`, recording any failure or panic as the thread's last error.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SgStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("{what} is null"));
            SgStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal error: {msg}"));
            SgStatus::Panic
        }
    }
}

unsafe fn dfa_ref<'a>(dfa: *const SgDfa) -> Result<&'a Dfa, Failure> {
    unsafe { dfa.as_ref() }.map(|d| &d.0).ok_or(Failure::Null("dfa"))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Null(what));
    }
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| Failure::Lib(Error::InvalidArgument(format!("{what} is not UTF-8"))))
}

fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    unsafe { out.write(value) };
    Ok(())
}

fn string_out(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::Lib(Error::InvalidArgument("nul byte in output".into())))?;
    write_out(out, c.into_raw(), "out")
}

fn winner_of(alice: bool) -> SgWinner {
    if alice {
        SgWinner::Alice
    } else {
        SgWinner::Bob
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on this thread.
#[no_mangle]
pub extern "C" fn sg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses the DFA text format.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_dfa_parse(text: *const c_char, out: *mut *mut SgDfa) -> SgStatus {
    guard(|| {
        let text = unsafe { str_arg(text, "text") }?;
        let dfa = parse_dfa(text)?;
        write_out(out, Box::into_raw(Box::new(SgDfa(dfa))), "out")
    })
}

/// Builds a family member. Parameters that the family does not use are
/// ignored; pass 0 for "not given".
///
/// # Safety
/// `name` must be a valid NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_dfa_family(
    name: *const c_char,
    n: usize,
    k: usize,
    m: usize,
    out: *mut *mut SgDfa,
) -> SgStatus {
    guard(|| {
        let name = unsafe { str_arg(name, "name") }?;
        let given = |v: usize| (v != 0).then_some(v);
        let dfa = FamilySpec::from_parts(name, given(n), given(k), given(m))?.build()?;
        write_out(out, Box::into_raw(Box::new(SgDfa(dfa))), "out")
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `dfa` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sg_dfa_free(dfa: *mut SgDfa) {
    if !dfa.is_null() {
        drop(unsafe { Box::from_raw(dfa) });
    }
}

/// Number of states, 0 for null.
///
/// # Safety
/// `dfa` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sg_dfa_states(dfa: *const SgDfa) -> usize {
    unsafe { dfa.as_ref() }.map_or(0, |d| d.0.n())
}

/// Number of letters, 0 for null.
///
/// # Safety
/// `dfa` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sg_dfa_letters(dfa: *const SgDfa) -> usize {
    unsafe { dfa.as_ref() }.map_or(0, |d| d.0.num_letters())
}

/// Canonical text form; free the result with [`sg_string_free`].
///
/// # Safety
/// `dfa` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_dfa_serialize(dfa: *const SgDfa, out: *mut *mut c_char) -> SgStatus {
    guard(|| {
        let dfa = unsafe { dfa_ref(dfa) }?;
        string_out(out, serialize_dfa(dfa))
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Winner of the k-game, `k >= 1`.
///
/// # Safety
/// `dfa` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_decide_k(dfa: *const SgDfa, k: u32, out: *mut SgWinner) -> SgStatus {
    guard(|| {
        let dfa = unsafe { dfa_ref(dfa) }?;
        write_out(out, winner_of(decide_k(dfa, k)?.alice_wins()), "out")
    })
}

/// Winner of the ω-game.
///
/// # Safety
/// `dfa` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_decide_omega(dfa: *const SgDfa, out: *mut SgWinner) -> SgStatus {
    guard(|| {
        let dfa = unsafe { dfa_ref(dfa) }?;
        write_out(out, winner_of(decide_omega(dfa)?.alice_wins()), "out")
    })
}

/// Winner of the m/ω-game.
///
/// # Safety
/// `dfa` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_decide_m_omega(dfa: *const SgDfa, m: usize, out: *mut SgWinner) -> SgStatus {
    guard(|| {
        let dfa = unsafe { dfa_ref(dfa) }?;
        write_out(out, winner_of(decide_m_omega(dfa, m)?.alice_wins()), "out")
    })
}

/// Largest k for which Alice wins the k-game.
///
/// # Safety
/// `dfa` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_game_level(dfa: *const SgDfa, out: *mut SgLevel) -> SgStatus {
    guard(|| {
        let dfa = unsafe { dfa_ref(dfa) }?;
        let level = match game_level(dfa)? {
            Level::NotSynchronizing => SgLevel {
                kind: SgLevelKind::NotSynchronizing,
                k: 0,
            },
            Level::Finite(k) => SgLevel {
                kind: SgLevelKind::Finite,
                k,
            },
            Level::Omega => SgLevel {
                kind: SgLevelKind::Omega,
                k: 0,
            },
        };
        write_out(out, level, "out")
    })
}

/// Exact reset threshold. Fails with `NotSynchronizing` when there is none.
///
/// # Safety
/// `dfa` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_reset_threshold(dfa: *const SgDfa, out: *mut usize) -> SgStatus {
    guard(|| {
        let dfa = unsafe { dfa_ref(dfa) }?;
        write_out(out, rt_exact(dfa)?.rt, "out")
    })
}

/// Reset word from Alice's strategy in the m/ω-game against a passing Bob,
/// as space-separated letter names (`-` for the empty word). Free the result
/// with [`sg_string_free`].
///
/// # Safety
/// `dfa` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_extract_reset_word(dfa: *const SgDfa, m: usize, out: *mut *mut c_char) -> SgStatus {
    guard(|| {
        let dfa = unsafe { dfa_ref(dfa) }?;
        let w = extract_reset_word(dfa, m)?;
        string_out(out, dfa.format_word(&w))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(name: &str, n: usize) -> *mut SgDfa {
        let name = CString::new(name).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { sg_dfa_family(name.as_ptr(), n, 0, 0, &mut out) }, SgStatus::Ok);
        out
    }

    fn last_error() -> String {
        let p = sg_last_error();
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
    }

    #[test]
    fn status_codes_follow_errors() {
        assert_eq!(status_of(&Error::CapExceeded { what: "x", requested: 2, cap: 1 }), SgStatus::CapExceeded);
        assert_eq!(status_of(&Error::NotSynchronizing), SgStatus::NotSynchronizing);
        assert_eq!(status_of(&Error::Precondition("p".into())), SgStatus::Precondition);
    }

    #[test]
    fn panics_become_status() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, SgStatus::Panic);
        assert!(last_error().contains("boom"));
    }

    #[test]
    fn success_clears_last_error() {
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { sg_dfa_parse(ptr::null(), &mut out) }, SgStatus::NullPointer);
        assert_eq!(last_error(), "text is null");
        let c = family("cerny", 3);
        assert!(sg_last_error().is_null());
        unsafe { sg_dfa_free(c) };
    }
}
