//! C ABI for the `tugames` solver.
//!
//! Games, payoffs and families are opaque heap handles owned by the caller
//! and released with the matching `*_free` function. Every fallible call
//! returns a [`TgStatus`]; on failure [`tg_last_error_message`] describes
//! the error for the calling thread. Strings returned through out-pointers
//! are released with [`tg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tugames::game::is_prekernel;
use tugames::io::{game_to_json, parse_game};
use tugames::prekernel::{certify_unique, prekernel_point};
use tugames::prenucleolus::{kohlberg_verify, prenucleolus};
use tugames::rational::{parse_list, parse_rational, to_f64};
use tugames::replication::{replicate_family, RelatedFamily};
use tugames::{Error, Payoff, Rational, TuGame};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    NotPrekernel = 4,
    BoundaryPoint = 5,
    NoConvergence = 6,
    Internal = 7,
}

pub struct TgGame {
    inner: TuGame,
}

pub struct TgPayoff {
    inner: Payoff,
}

pub struct TgFamily {
    inner: RelatedFamily,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(err: &Error) -> TgStatus {
    match err {
        Error::Parse(_) => TgStatus::ParseError,
        Error::NotPrekernel(_) => TgStatus::NotPrekernel,
        Error::BoundaryPoint => TgStatus::BoundaryPoint,
        Error::NoConvergence(_) | Error::ReplicationFailed { .. } => TgStatus::NoConvergence,
        _ => TgStatus::InvalidArgument,
    }
}

fn fail(err: Error) -> TgStatus {
    set_error(err.to_string());
    status_of(&err)
}

/// Runs `f`, turning panics into [`TgStatus::Internal`].
fn guard(f: impl FnOnce() -> TgStatus) -> TgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal error");
            TgStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, TgStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(TgStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        TgStatus::InvalidArgument
    })
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, TgStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        TgStatus::NullPointer
    })
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> TgStatus {
    if out.is_null() {
        set_error("null output pointer");
        return TgStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(value));
    TgStatus::Ok
}

unsafe fn emit_string(out: *mut *mut c_char, text: String) -> TgStatus {
    if out.is_null() {
        set_error("null output pointer");
        return TgStatus::NullPointer;
    }
    match CString::new(text) {
        Ok(s) => {
            *out = s.into_raw();
            TgStatus::Ok
        }
        Err(_) => {
            set_error("string contains an interior NUL");
            TgStatus::Internal
        }
    }
}

unsafe fn emit_bool(out: *mut bool, value: bool) -> TgStatus {
    if out.is_null() {
        set_error("null output pointer");
        return TgStatus::NullPointer;
    }
    *out = value;
    TgStatus::Ok
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a JSON game document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tg_game_from_json(json: *const c_char, out: *mut *mut TgGame) -> TgStatus {
    guard(|| {
        let text = tri!(read_str(json));
        match parse_game(text) {
            Ok(inner) => emit(out, TgGame { inner }),
            Err(e) => fail(e),
        }
    })
}

/// Builds a game from `len = 2^n - 1` worths `num[k] / den[k]`, where entry
/// `k` is the coalition with bitmask `k + 1` (bit `i` set for player `i + 1`).
///
/// # Safety
/// `num` and `den` must point to `len` readable values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tg_game_from_fractions(
    n: u32,
    num: *const i64,
    den: *const i64,
    len: usize,
    out: *mut *mut TgGame,
) -> TgStatus {
    guard(|| {
        if num.is_null() || den.is_null() {
            set_error("null worth array");
            return TgStatus::NullPointer;
        }
        let num = std::slice::from_raw_parts(num, len);
        let den = std::slice::from_raw_parts(den, len);
        if den.contains(&0) {
            set_error("zero denominator");
            return TgStatus::InvalidArgument;
        }
        let values: Vec<Rational> = num
            .iter()
            .zip(den)
            .map(|(&p, &q)| Rational::new(p.into(), q.into()))
            .collect();
        match TuGame::new(n as usize, values) {
            Ok(inner) => emit(out, TgGame { inner }),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `game` must come from this library or be NULL; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tg_game_free(game: *mut TgGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Number of players, 0 for NULL.
///
/// # Safety
/// `game` must be a valid handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn tg_game_players(game: *const TgGame) -> u32 {
    game.as_ref().map_or(0, |g| g.inner.players() as u32)
}

/// # Safety
/// `game` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tg_game_to_json(game: *const TgGame, out: *mut *mut c_char) -> TgStatus {
    guard(|| {
        let g = tri!(deref(game));
        emit_string(out, game_to_json(&g.inner))
    })
}

/// Parses a comma-separated list of rationals such as `"44/9,4,32/9,32/9"`.
///
/// # Safety
/// `csv` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tg_payoff_parse(csv: *const c_char, out: *mut *mut TgPayoff) -> TgStatus {
    guard(|| {
        let text = tri!(read_str(csv));
        match parse_list(text) {
            Ok(v) => emit(out, TgPayoff { inner: Payoff::new(v) }),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `payoff` must come from this library or be NULL; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tg_payoff_free(payoff: *mut TgPayoff) {
    if !payoff.is_null() {
        drop(Box::from_raw(payoff));
    }
}

/// # Safety
/// `payoff` must be a valid handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn tg_payoff_len(payoff: *const TgPayoff) -> usize {
    payoff.as_ref().map_or(0, |p| p.inner.len())
}

/// Exact payoff as `"p/q,p/q,..."`.
///
/// # Safety
/// `payoff` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tg_payoff_to_string(payoff: *const TgPayoff, out: *mut *mut c_char) -> TgStatus {
    guard(|| {
        let p = tri!(deref(payoff));
        let text = p
            .inner
            .as_slice()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",");
        emit_string(out, text)
    })
}

/// Nearest double to coordinate `index`.
///
/// # Safety
/// `payoff` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tg_payoff_get_f64(payoff: *const TgPayoff, index: usize, out: *mut f64) -> TgStatus {
    guard(|| {
        let p = tri!(deref(payoff));
        if index >= p.inner.len() {
            set_error(format!("index {index} out of range"));
            return TgStatus::InvalidArgument;
        }
        if out.is_null() {
            set_error("null output pointer");
            return TgStatus::NullPointer;
        }
        *out = to_f64(&p.inner[index]);
        TgStatus::Ok
    })
}

/// # Safety
/// `game` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tg_prekernel(game: *const TgGame, out: *mut *mut TgPayoff) -> TgStatus {
    guard(|| {
        let g = tri!(deref(game));
        match prekernel_point(&g.inner) {
            Ok(inner) => emit(out, TgPayoff { inner }),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `game` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tg_prenucleolus(game: *const TgGame, out: *mut *mut TgPayoff) -> TgStatus {
    guard(|| {
        let g = tri!(deref(game));
        emit(out, TgPayoff { inner: prenucleolus(&g.inner) })
    })
}

unsafe fn game_and_payoff<'a>(
    game: *const TgGame,
    payoff: *const TgPayoff,
) -> Result<(&'a TuGame, &'a Payoff), TgStatus> {
    let g = deref(game)?;
    let p = deref(payoff)?;
    if p.inner.len() != g.inner.players() {
        set_error(format!(
            "payoff has {} entries for {} players",
            p.inner.len(),
            g.inner.players()
        ));
        return Err(TgStatus::InvalidArgument);
    }
    Ok((&g.inner, &p.inner))
}

/// # Safety
/// Handles must be valid and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tg_is_prekernel(game: *const TgGame, payoff: *const TgPayoff, out: *mut bool) -> TgStatus {
    guard(|| {
        let (g, x) = tri!(game_and_payoff(game, payoff));
        emit_bool(out, is_prekernel(g, x))
    })
}

/// Kohlberg's balancedness criterion; fails on inefficient payoffs.
///
/// # Safety
/// Handles must be valid and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tg_kohlberg(game: *const TgGame, payoff: *const TgPayoff, out: *mut bool) -> TgStatus {
    guard(|| {
        let (g, x) = tri!(game_and_payoff(game, payoff));
        match kohlberg_verify(g, x) {
            Ok(b) => emit_bool(out, b),
            Err(e) => fail(e),
        }
    })
}

/// Sets `*certified` when the sufficient uniqueness test succeeds; `false`
/// means inconclusive. Fails with `TG_STATUS_NOT_PREKERNEL` when `payoff`
/// is not a pre-kernel point.
///
/// # Safety
/// Handles must be valid and `certified` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tg_certify(game: *const TgGame, payoff: *const TgPayoff, certified: *mut bool) -> TgStatus {
    guard(|| {
        let (g, x) = tri!(game_and_payoff(game, payoff));
        match certify_unique(g, x) {
            Ok(c) => emit_bool(certified, c.is_certified()),
            Err(e) => fail(e),
        }
    })
}

/// Related games keeping `payoff` in the pre-kernel, scaled by `mu` (a
/// rational string such as `"9/10"`).
///
/// # Safety
/// Handles must be valid, `mu` NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tg_replicate(
    game: *const TgGame,
    payoff: *const TgPayoff,
    mu: *const c_char,
    out: *mut *mut TgFamily,
) -> TgStatus {
    guard(|| {
        let (g, x) = tri!(game_and_payoff(game, payoff));
        let mu = match parse_rational(tri!(read_str(mu))) {
            Ok(m) => m,
            Err(e) => return fail(e),
        };
        match replicate_family(g, x, &mu) {
            Ok(inner) => emit(out, TgFamily { inner }),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `family` must come from this library or be NULL; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tg_family_free(family: *mut TgFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Number of generated games (the base game not counted).
///
/// # Safety
/// `family` must be a valid handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn tg_family_len(family: *const TgFamily) -> usize {
    family.as_ref().map_or(0, |f| f.inner.games.len())
}

/// Copies generated game `index` (0-based) into a new handle.
///
/// # Safety
/// `family` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tg_family_game(family: *const TgFamily, index: usize, out: *mut *mut TgGame) -> TgStatus {
    guard(|| {
        let f = tri!(deref(family));
        match f.inner.games.get(index) {
            Some(g) => emit(out, TgGame { inner: g.clone() }),
            None => {
                set_error(format!("game index {index} out of range"));
                TgStatus::InvalidArgument
            }
        }
    })
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn tg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
