//! C ABI over the `coincalc` library.
//!
//! A database is held behind an opaque [`CoincalcDb`] handle. Queries take
//! the same arguments as the command-line tool (without the program name)
//! and hand back the machine-format JSON response as an owned C string,
//! which must be released with [`coincalc_string_free`]. Every function
//! returns a [`CoincalcStatus`]; after a non-`OK` status the message is
//! available from [`coincalc_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use coincalc::cli::{self, QueryRequest, Status};
use coincalc::Database;

/// Result codes. `OK`, `ERROR` and `UNKNOWN` mirror the command-line exit
/// codes 0, 1 and 2.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoincalcStatus {
    Ok = 0,
    Error = 1,
    /// A gap in the database blocked the computation.
    Unknown = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    /// The arguments did not parse.
    Usage = 5,
    /// The database file could not be loaded.
    Load = 6,
    Panic = 7,
}

/// Opaque database handle.
pub struct CoincalcDb {
    db: Database,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> Result<CoincalcStatus, (CoincalcStatus, String)>) -> CoincalcStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CoincalcStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (CoincalcStatus, String)> {
    if p.is_null() {
        return Err((CoincalcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (CoincalcStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn give(out: *mut *mut CoincalcDb, db: Database) {
    unsafe { *out = Box::into_raw(Box::new(CoincalcDb { db })) };
}

/// Opens the database built into the library.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn coincalc_db_open_builtin(out: *mut *mut CoincalcDb) -> CoincalcStatus {
    guard(|| {
        if out.is_null() {
            return Err((CoincalcStatus::NullPointer, "out is null".into()));
        }
        give(out, Database::shipped().clone());
        Ok(CoincalcStatus::Ok)
    })
}

/// Loads and validates a database file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn coincalc_db_open(path: *const c_char, out: *mut *mut CoincalcDb) -> CoincalcStatus {
    guard(|| {
        let path = text(path, "path")?;
        if out.is_null() {
            return Err((CoincalcStatus::NullPointer, "out is null".into()));
        }
        let db = Database::load(Path::new(path)).map_err(|e| (CoincalcStatus::Load, e.to_string()))?;
        give(out, db);
        Ok(CoincalcStatus::Ok)
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `db` must come from one of the open functions and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn coincalc_db_free(db: *mut CoincalcDb) {
    if !db.is_null() {
        drop(Box::from_raw(db));
    }
}

/// Runs one query, e.g. `{"classify", "--space", "rp", "--nprime", "6",
/// "--m", "9", "--f1", "12", "--f2", "12"}`. A global `--db` flag is
/// ignored in favour of the handle.
///
/// On `OK`, `UNKNOWN` and `ERROR`, `*out_json` receives the JSON response;
/// for the other codes it is set to null.
///
/// # Safety
/// `db` must be a live handle, `argv` must point to `argc` NUL-terminated
/// strings and `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn coincalc_query(
    db: *const CoincalcDb,
    argv: *const *const c_char,
    argc: usize,
    out_json: *mut *mut c_char,
) -> CoincalcStatus {
    guard(|| {
        if out_json.is_null() {
            return Err((CoincalcStatus::NullPointer, "out_json is null".into()));
        }
        *out_json = ptr::null_mut();
        let Some(handle) = db.as_ref() else {
            return Err((CoincalcStatus::NullPointer, "db is null".into()));
        };
        if argv.is_null() && argc > 0 {
            return Err((CoincalcStatus::NullPointer, "argv is null".into()));
        }
        let mut args = vec!["coincalc".to_string()];
        for i in 0..argc {
            args.push(text(*argv.add(i), "argument")?.to_string());
        }
        let request =
            QueryRequest::from_args(&args).map_err(|e| (CoincalcStatus::Usage, e.render().to_string()))?;
        let response = cli::run(&request.command, &handle.db);
        let json = CString::new(response.to_machine()).expect("JSON has no interior NUL");
        *out_json = json.into_raw();
        Ok(match response.status {
            Status::Ok => CoincalcStatus::Ok,
            Status::Unknown => {
                set_error(response.message.unwrap_or_default());
                CoincalcStatus::Unknown
            }
            Status::Error => {
                set_error(response.message.unwrap_or_default());
                CoincalcStatus::Error
            }
        })
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn coincalc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn coincalc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static, NUL-terminated library version.
#[no_mangle]
pub extern "C" fn coincalc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_arguments_are_rejected() {
        let mut out = ptr::null_mut();
        let status = unsafe { coincalc_query(ptr::null(), ptr::null(), 0, &mut out) };
        assert_eq!(status, CoincalcStatus::NullPointer);
        assert!(!coincalc_last_error().is_null());
        assert_eq!(unsafe { coincalc_db_open(ptr::null(), ptr::null_mut()) }, CoincalcStatus::NullPointer);
    }

    #[test]
    fn version_is_terminated() {
        let v = unsafe { CStr::from_ptr(coincalc_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
