//! C ABI for `fano_g2`.
//!
//! Every fallible call returns a [`FanoStatus`]. On failure the message is
//! available from [`fano_last_error_message`] on the same thread. Strings
//! returned through `out` parameters are owned by the caller and must be
//! released with [`fano_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;
use std::sync::OnceLock;

use fano_g2::certify::{self, VerifyOptions};
use fano_g2::export::{self, EnumTarget};
use fano_g2::g2::{IncidentPair, G2};
use fano_g2::lifting::AugGroup;
use fano_g2::octonion::{Octonion, OctonionAlgebra};
use fano_g2::scalar::{FieldDescriptor, Rational};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FanoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    Computation = 4,
    Overflow = 5,
    Panic = 6,
}

/// Opaque handle holding the octonion algebra and lazily built caches.
pub struct FanoContext {
    cache_dir: Option<PathBuf>,
    alg: OctonionAlgebra,
    g2: OnceLock<G2<Rational>>,
    group: OnceLock<AugGroup>,
}

impl FanoContext {
    fn g2(&self) -> &G2<Rational> {
        self.g2.get_or_init(G2::new)
    }

    fn group(&self) -> Result<&AugGroup, Error> {
        if let Some(g) = self.group.get() {
            return Ok(g);
        }
        let built = match &self.cache_dir {
            Some(dir) => AugGroup::load_or_build(dir, &self.alg),
            None => AugGroup::enumerate(&self.alg),
        }
        .map_err(|e| Error(FanoStatus::Computation, e.to_string()))?;
        Ok(self.group.get_or_init(|| built))
    }
}

struct Error(FanoStatus, String);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, converting errors and panics into a status and a message.
fn guard<F: FnOnce() -> Result<(), Error>>(f: F) -> FanoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            FanoStatus::Ok
        }
        Ok(Err(Error(code, msg))) => {
            set_last_error(&msg);
            code
        }
        Err(_) => {
            set_last_error("internal panic");
            FanoStatus::Panic
        }
    }
}

fn null(what: &str) -> Error {
    Error(FanoStatus::NullPointer, format!("{what} is null"))
}

fn invalid<E: std::fmt::Display>(e: E) -> Error {
    Error(FanoStatus::InvalidArgument, e.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Error(FanoStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn ctx_arg<'a>(ctx: *const FanoContext) -> Result<&'a FanoContext, Error> {
    ctx.as_ref().ok_or_else(|| null("context"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Error> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|e| Error(FanoStatus::Computation, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Creates a context. `cache_dir` may be null to disable the on-disk cache.
/// Returns null on failure.
///
/// # Safety
/// `cache_dir` must be null or a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fano_context_new(cache_dir: *const c_char) -> *mut FanoContext {
    let mut handle = ptr::null_mut();
    let status = guard(|| {
        let cache_dir = if cache_dir.is_null() {
            None
        } else {
            Some(PathBuf::from(str_arg(cache_dir, "cache_dir")?))
        };
        let ctx = FanoContext {
            cache_dir,
            alg: OctonionAlgebra::canonical(),
            g2: OnceLock::new(),
            group: OnceLock::new(),
        };
        handle = Box::into_raw(Box::new(ctx));
        Ok(())
    });
    if status == FanoStatus::Ok {
        handle
    } else {
        ptr::null_mut()
    }
}

/// Releases a context. Null is ignored.
///
/// # Safety
/// `ctx` must be null or a pointer from [`fano_context_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fano_context_free(ctx: *mut FanoContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fano_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn fano_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Runs a verification suite (`all` for every suite) over `field`
/// (`q`, `qi` or `fp:<p>`; null means `q`) and writes the JSON report.
/// A report with failing checks is still `Ok`; inspect its `pass` field.
///
/// # Safety
/// Pointers must be valid; `out_json` receives a string to free.
#[no_mangle]
pub unsafe extern "C" fn fano_verify_json(
    ctx: *const FanoContext,
    suite: *const c_char,
    field: *const c_char,
    out_json: *mut *mut c_char,
) -> FanoStatus {
    guard(|| {
        let ctx = ctx_arg(ctx)?;
        let suite = str_arg(suite, "suite")?;
        let field: FieldDescriptor = if field.is_null() {
            FieldDescriptor::Rational
        } else {
            str_arg(field, "field")?.parse().map_err(invalid)?
        };
        let opts = VerifyOptions {
            cache_dir: ctx.cache_dir.clone(),
            field,
            timing: false,
        };
        let report = certify::verify(suite, &opts).map_err(|e| match e {
            certify::CertifyError::Computation(m) => Error(FanoStatus::Computation, m),
            other => invalid(other),
        })?;
        let json = serde_json::to_string(&report).map_err(|e| Error(FanoStatus::Computation, e.to_string()))?;
        write_string(out_json, json)
    })
}

/// Multiplies two integer octonions given as 8 coefficients on `1, e1, …, e7`.
///
/// # Safety
/// `a`, `b` and `out` must each point to 8 `int64_t` values.
#[no_mangle]
pub unsafe extern "C" fn fano_octonion_mul(
    ctx: *const FanoContext,
    a: *const i64,
    b: *const i64,
    out: *mut i64,
) -> FanoStatus {
    guard(|| {
        let ctx = ctx_arg(ctx)?;
        if a.is_null() || b.is_null() || out.is_null() {
            return Err(null("coefficient array"));
        }
        let x = Octonion::<Rational>::from_i64(*(a as *const [i64; 8]));
        let y = Octonion::<Rational>::from_i64(*(b as *const [i64; 8]));
        let z = ctx.alg.mul(&x, &y);
        let mut coeffs = [0i64; 8];
        for (k, c) in z.coeffs().iter().enumerate() {
            coeffs[k] = c
                .to_i64()
                .ok_or_else(|| Error(FanoStatus::Overflow, "product does not fit in int64".into()))?;
        }
        ptr::copy_nonoverlapping(coeffs.as_ptr(), out, 8);
        Ok(())
    })
}

/// Writes the basis product `e_a · e_b` (indices 0..=7, 0 is the unit) as a
/// sign and an index.
///
/// # Safety
/// `out_sign` and `out_index` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fano_basis_product(
    ctx: *const FanoContext,
    a: u8,
    b: u8,
    out_sign: *mut i8,
    out_index: *mut u8,
) -> FanoStatus {
    guard(|| {
        let ctx = ctx_arg(ctx)?;
        if a > 7 || b > 7 {
            return Err(invalid(format!("basis index out of range: {a}, {b}")));
        }
        if out_sign.is_null() || out_index.is_null() {
            return Err(null("output pointer"));
        }
        let p = ctx.alg.basis_product(a as usize, b as usize);
        *out_sign = p.sign;
        *out_index = p.index as u8;
        Ok(())
    })
}

/// Writes the bracket `[X(left), X(right)]` as JSON, with incident pairs
/// written like `(P1,D1)`.
///
/// # Safety
/// Pointers must be valid; `out_json` receives a string to free.
#[no_mangle]
pub unsafe extern "C" fn fano_bracket_json(
    ctx: *const FanoContext,
    left: *const c_char,
    right: *const c_char,
    out_json: *mut *mut c_char,
) -> FanoStatus {
    guard(|| {
        let ctx = ctx_arg(ctx)?;
        let l: IncidentPair = str_arg(left, "left")?.parse().map_err(invalid)?;
        let r: IncidentPair = str_arg(right, "right")?.parse().map_err(invalid)?;
        let entry = ctx.g2().bracket_entry(&l, &r);
        let mut v = serde_json::to_value(&entry).map_err(|e| Error(FanoStatus::Computation, e.to_string()))?;
        v["display"] = entry.to_string().into();
        write_string(out_json, v.to_string())
    })
}

/// Writes the records for `aut`, `aug-aut`, `comp-factors` or
/// `oriented-maps` as JSON lines.
///
/// # Safety
/// Pointers must be valid; `out_jsonl` receives a string to free.
#[no_mangle]
pub unsafe extern "C" fn fano_enumerate_jsonl(
    ctx: *const FanoContext,
    target: *const c_char,
    out_jsonl: *mut *mut c_char,
) -> FanoStatus {
    guard(|| {
        let ctx = ctx_arg(ctx)?;
        let target: EnumTarget = str_arg(target, "target")?.parse().map_err(invalid)?;
        let group = match target {
            EnumTarget::AugAut => Some(ctx.group()?),
            _ => None,
        };
        let records = export::enumerate_records(target, group)
            .map_err(|e| Error(FanoStatus::Computation, e.to_string()))?;
        write_string(out_jsonl, export::to_json_lines(&records))
    })
}

/// Writes the order of the covering group of automorphisms of the octonion
/// algebra that permute the signed basis.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fano_aug_group_order(ctx: *const FanoContext, out: *mut usize) -> FanoStatus {
    guard(|| {
        let ctx = ctx_arg(ctx)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = ctx.group()?.len();
        Ok(())
    })
}
