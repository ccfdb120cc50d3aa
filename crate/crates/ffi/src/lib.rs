//! C interface. Formulas are opaque handles; every call returns a
//! [`PatholabStatus`] and, on failure, leaves a message retrievable with
//! [`patholab_last_error`] on the same thread. Strings handed out by the
//! library must be released with [`patholab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use patholab_core::formula::Formula;
use patholab_core::modelfinder::{find_model, ModelError};
use patholab_core::pipeline::{classify_text, prepare_formula, Config};
use patholab_core::strat::stratify;
use patholab_core::verdict::{decide, Verdict};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatholabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    NotNearlyClosed = 4,
    Unsupported = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatholabVerdict {
    ProvedPatho = 0,
    CertifiedNonPatho = 1,
    Unknown = 2,
    Unsupported = 3,
}

impl From<Verdict> for PatholabVerdict {
    fn from(v: Verdict) -> PatholabVerdict {
        match v {
            Verdict::ProvedPatho => PatholabVerdict::ProvedPatho,
            Verdict::CertifiedNonPatho => PatholabVerdict::CertifiedNonPatho,
            Verdict::Unknown => PatholabVerdict::Unknown,
            Verdict::Unsupported => PatholabVerdict::Unsupported,
        }
    }
}

/// Search budgets.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PatholabConfig {
    pub refute_depth: u32,
    pub refute_steps: u64,
    pub model_size: u32,
}

impl From<&PatholabConfig> for Config {
    fn from(c: &PatholabConfig) -> Config {
        Config {
            refute_depth: c.refute_depth.max(1) as usize,
            refute_steps: c.refute_steps as usize,
            model_size: c.model_size as usize,
        }
    }
}

/// A parsed formula.
pub struct PatholabFormula {
    formula: Formula,
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

fn guarded(body: impl FnOnce() -> Result<(), (PatholabStatus, String)>) -> PatholabStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PatholabStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal error");
            PatholabStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, (PatholabStatus, String)> {
    if text.is_null() {
        return Err((PatholabStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|e| (PatholabStatus::InvalidUtf8, e.to_string()))
}

fn give_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("no interior nul")
        .into_raw()
}

fn config_or_default(config: *const PatholabConfig) -> Config {
    if config.is_null() {
        Config::default()
    } else {
        Config::from(unsafe { &*config })
    }
}

/// Default budgets: depth 3, 50000 steps, universes up to 5 elements.
#[no_mangle]
pub extern "C" fn patholab_config_default() -> PatholabConfig {
    let c = Config::default();
    PatholabConfig {
        refute_depth: c.refute_depth as u32,
        refute_steps: c.refute_steps as u64,
        model_size: c.model_size as u32,
    }
}

/// Parse `text` into a new handle stored in `*out`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn patholab_formula_parse(
    text: *const c_char,
    out: *mut *mut PatholabFormula,
) -> PatholabStatus {
    guarded(|| {
        if out.is_null() {
            return Err((PatholabStatus::NullPointer, "null output pointer".into()));
        }
        *out = ptr::null_mut();
        let text = read_str(text)?;
        let formula =
            patholab_core::parse(text).map_err(|e| (PatholabStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(PatholabFormula { formula }));
        Ok(())
    })
}

/// Release a handle; null is ignored.
///
/// # Safety
/// `f` must come from `patholab_formula_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn patholab_formula_free(f: *mut PatholabFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Print the formula in canonical concrete syntax.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn patholab_formula_print(
    f: *const PatholabFormula,
    out: *mut *mut c_char,
) -> PatholabStatus {
    guarded(|| {
        if f.is_null() || out.is_null() {
            return Err((PatholabStatus::NullPointer, "null argument".into()));
        }
        *out = give_string((*f).formula.to_string());
        Ok(())
    })
}

/// Release a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn patholab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Full classification report of `text` as JSON. A null `config` means
/// default budgets.
///
/// # Safety
/// `text` must be a nul-terminated string, `config` null or valid, `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn patholab_classify_json(
    text: *const c_char,
    config: *const PatholabConfig,
    out: *mut *mut c_char,
) -> PatholabStatus {
    guarded(|| {
        if out.is_null() {
            return Err((PatholabStatus::NullPointer, "null output pointer".into()));
        }
        *out = ptr::null_mut();
        let text = read_str(text)?;
        let (report, _) = classify_text(text, &config_or_default(config));
        let json = serde_json::to_string_pretty(&report)
            .map_err(|e| (PatholabStatus::Internal, e.to_string()))?;
        *out = give_string(json);
        match &report.error {
            Some(e) if e.contains("free variables") => {
                Err((PatholabStatus::NotNearlyClosed, e.clone()))
            }
            Some(e) => Err((PatholabStatus::ParseError, e.clone())),
            None => Ok(()),
        }
    })
}

/// Refutation and model search on the formula; closed formulas are wrapped
/// as `B & (x = x)`.
///
/// # Safety
/// `f` must be a live handle, `config` null or valid, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn patholab_patho_check(
    f: *const PatholabFormula,
    config: *const PatholabConfig,
    out: *mut PatholabVerdict,
) -> PatholabStatus {
    guarded(|| {
        if f.is_null() || out.is_null() {
            return Err((PatholabStatus::NullPointer, "null argument".into()));
        }
        let (a, _) =
            prepare_formula(&(*f).formula).map_err(|e| (PatholabStatus::NotNearlyClosed, e))?;
        let c = config_or_default(config);
        *out = decide(&a, c.budget(), c.model_size).verdict.into();
        Ok(())
    })
}

/// Whether the formula admits a stratification.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn patholab_stratified(
    f: *const PatholabFormula,
    out: *mut bool,
) -> PatholabStatus {
    guarded(|| {
        if f.is_null() || out.is_null() {
            return Err((PatholabStatus::NullPointer, "null argument".into()));
        }
        *out = stratify(&(*f).formula).is_stratified();
        Ok(())
    })
}

/// Model certificate text for the formula, or null in `*out` when no model
/// exists up to `max_size` elements.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn patholab_find_model(
    f: *const PatholabFormula,
    max_size: u32,
    out: *mut *mut c_char,
) -> PatholabStatus {
    guarded(|| {
        if f.is_null() || out.is_null() {
            return Err((PatholabStatus::NullPointer, "null argument".into()));
        }
        *out = ptr::null_mut();
        let (a, _) =
            prepare_formula(&(*f).formula).map_err(|e| (PatholabStatus::NotNearlyClosed, e))?;
        match find_model(&a, max_size as usize) {
            Ok(Some(m)) => *out = give_string(m.to_text()),
            Ok(None) => {}
            Err(e @ ModelError::UnsupportedTerm(_)) => {
                return Err((PatholabStatus::Unsupported, e.to_string()))
            }
            Err(e) => return Err((PatholabStatus::Internal, e.to_string())),
        }
        Ok(())
    })
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn patholab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
