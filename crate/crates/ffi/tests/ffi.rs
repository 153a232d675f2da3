use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use fano_g2_ffi::*;
use serde_json::Value;

struct Ctx(*mut FanoContext);

impl Ctx {
    fn new(cache: Option<&Path>) -> Self {
        let dir = cache.map(|p| CString::new(p.to_str().unwrap()).unwrap());
        let raw = unsafe { fano_context_new(dir.as_ref().map_or(ptr::null(), |d| d.as_ptr())) };
        assert!(!raw.is_null());
        Ctx(raw)
    }
}

impl Drop for Ctx {
    fn drop(&mut self) {
        unsafe { fano_context_free(self.0) }
    }
}

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { fano_string_free(s) };
    out
}

fn last_error() -> String {
    let p = fano_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn verify_suite_returns_json_report() {
    let ctx = Ctx::new(None);
    let mut out = ptr::null_mut();
    let st = unsafe { fano_verify_json(ctx.0, c("radon").as_ptr(), ptr::null(), &mut out) };
    assert_eq!(st, FanoStatus::Ok);
    let v: Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["field"], "q");
    let kernel = &v["suites"][0]["checks"][0];
    assert_eq!(kernel["id"], "radon.kernel");
    assert_eq!(kernel["observed"][0], 8);
}

#[test]
fn unknown_suite_and_bad_field_are_invalid_arguments() {
    let ctx = Ctx::new(None);
    let mut out = ptr::null_mut();
    let st = unsafe { fano_verify_json(ctx.0, c("nosuchsuite").as_ptr(), ptr::null(), &mut out) };
    assert_eq!(st, FanoStatus::InvalidArgument);
    assert!(out.is_null());
    assert!(last_error().contains("nosuchsuite"));
    let st = unsafe { fano_verify_json(ctx.0, c("fano").as_ptr(), c("fp:4").as_ptr(), &mut out) };
    assert_eq!(st, FanoStatus::InvalidArgument);
    assert!(!last_error().is_empty());
}

#[test]
fn null_arguments_are_reported() {
    let mut out = ptr::null_mut();
    let st = unsafe { fano_verify_json(ptr::null(), c("fano").as_ptr(), ptr::null(), &mut out) };
    assert_eq!(st, FanoStatus::NullPointer);
    assert!(last_error().contains("context"));
    let ctx = Ctx::new(None);
    let st = unsafe { fano_verify_json(ctx.0, ptr::null(), ptr::null(), &mut out) };
    assert_eq!(st, FanoStatus::NullPointer);
    let st = unsafe { fano_verify_json(ctx.0, c("fano").as_ptr(), ptr::null(), ptr::null_mut()) };
    assert_eq!(st, FanoStatus::NullPointer);
    // Freeing null is a no-op.
    unsafe {
        fano_string_free(ptr::null_mut());
        fano_context_free(ptr::null_mut());
    }
}

#[test]
fn success_clears_last_error() {
    let ctx = Ctx::new(None);
    let (mut s, mut i) = (0i8, 0u8);
    assert_eq!(unsafe { fano_basis_product(ctx.0, 9, 1, &mut s, &mut i) }, FanoStatus::InvalidArgument);
    assert!(!fano_last_error_message().is_null());
    assert_eq!(unsafe { fano_basis_product(ctx.0, 1, 2, &mut s, &mut i) }, FanoStatus::Ok);
    assert!(fano_last_error_message().is_null());
}

#[test]
fn basis_products_match_the_table() {
    let ctx = Ctx::new(None);
    // Row e1: -1 e4 e7 -e2 e6 -e5 -e3.
    let expected = [(-1, 0), (1, 4), (1, 7), (-1, 2), (1, 6), (-1, 5), (-1, 3)];
    for (b, &(sign, index)) in (1u8..=7).zip(expected.iter()) {
        let (mut s, mut i) = (0i8, 0u8);
        assert_eq!(unsafe { fano_basis_product(ctx.0, 1, b, &mut s, &mut i) }, FanoStatus::Ok);
        assert_eq!((s, i), (sign, index), "e1 * e{b}");
    }
}

#[test]
fn octonion_product_is_norm_multiplicative() {
    let ctx = Ctx::new(None);
    let a = [3i64, -1, 4, 1, -5, 9, -2, 6];
    let b = [2i64, 7, -1, 8, 2, -8, 1, 8];
    let mut z = [0i64; 8];
    assert_eq!(unsafe { fano_octonion_mul(ctx.0, a.as_ptr(), b.as_ptr(), z.as_mut_ptr()) }, FanoStatus::Ok);
    let n = |v: &[i64; 8]| v.iter().map(|x| x * x).sum::<i64>();
    assert_eq!(n(&z), n(&a) * n(&b));
    let e1 = [0i64, 1, 0, 0, 0, 0, 0, 0];
    let e2 = [0i64, 0, 1, 0, 0, 0, 0, 0];
    assert_eq!(unsafe { fano_octonion_mul(ctx.0, e1.as_ptr(), e2.as_ptr(), z.as_mut_ptr()) }, FanoStatus::Ok);
    assert_eq!(z, [0, 0, 0, 0, 1, 0, 0, 0]);
}

#[test]
fn octonion_overflow_is_reported() {
    let ctx = Ctx::new(None);
    let big = [i64::MAX, 0, 0, 0, 0, 0, 0, 0];
    let mut z = [0i64; 8];
    let st = unsafe { fano_octonion_mul(ctx.0, big.as_ptr(), big.as_ptr(), z.as_mut_ptr()) };
    assert_eq!(st, FanoStatus::Overflow);
}

#[test]
fn bracket_entry_json() {
    let ctx = Ctx::new(None);
    let mut out = ptr::null_mut();
    let st = unsafe { fano_bracket_json(ctx.0, c("(P1,D1)").as_ptr(), c("(P3,D7)").as_ptr(), &mut out) };
    assert_eq!(st, FanoStatus::Ok);
    let v: Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["coefficient"], -1);
    assert_eq!(v["target"], "(P7,D7)");
    assert_eq!(v["orbit"], "O3");
    let st = unsafe { fano_bracket_json(ctx.0, c("(P1,D2)").as_ptr(), c("(P3,D7)").as_ptr(), &mut out) };
    assert_eq!(st, FanoStatus::InvalidArgument);
}

#[test]
fn enumerations_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = Ctx::new(Some(dir.path()));
    for (target, count) in [("aut", 168), ("comp-factors", 16), ("oriented-maps", 8), ("aug-aut", 1344)] {
        let mut out = ptr::null_mut();
        let st = unsafe { fano_enumerate_jsonl(ctx.0, c(target).as_ptr(), &mut out) };
        assert_eq!(st, FanoStatus::Ok);
        assert_eq!(take(out).lines().count(), count, "{target}");
    }
    let mut n = 0usize;
    assert_eq!(unsafe { fano_aug_group_order(ctx.0, &mut n) }, FanoStatus::Ok);
    assert_eq!(n, 1344);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    // A second context reads the cache back.
    let warm = Ctx::new(Some(dir.path()));
    assert_eq!(unsafe { fano_aug_group_order(warm.0, &mut n) }, FanoStatus::Ok);
    assert_eq!(n, 1344);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { fano_enumerate_jsonl(ctx.0, c("nope").as_ptr(), &mut out) },
        FanoStatus::InvalidArgument
    );
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/fano_g2.h")).unwrap();
    for name in [
        "fano_context_new",
        "fano_context_free",
        "fano_string_free",
        "fano_last_error_message",
        "fano_verify_json",
        "fano_octonion_mul",
        "fano_basis_product",
        "fano_bracket_json",
        "fano_enumerate_jsonl",
        "fano_aug_group_order",
        "FANO_STATUS_OK = 0",
        "typedef struct FanoContext FanoContext;",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/fano_g2.h");
    let status = match Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"]).arg(&header).status() {
        Ok(s) => s,
        // No C compiler available.
        Err(_) => return,
    };
    assert!(status.success());
}
