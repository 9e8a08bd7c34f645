//! C ABI over `cmapprox`.
//!
//! Every fallible call returns a [`CmStatus`]; on failure the message is kept in a
//! thread-local buffer readable through [`cm_last_error`]. Handles are opaque and
//! must be released with their matching `_free`.

use cmapprox::cm::{parse_function, CmClass, CmFunction, Family};
use cmapprox::functionals::{a_of, b_of, c_alpha, d0_of, d1_of, euler_c_alpha_exact, functional_l};
use cmapprox::numeric::C64;
use cmapprox::opcalc::{parse_generator, scheme_apply, GeneratorMatrix};
use cmapprox::special::{digamma, ln_gamma};
use cmapprox::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    InvalidMeasure = 3,
    RequiresMeasure = 4,
    RequiresClass = 5,
    Divergent = 6,
    LimitUndefined = 7,
    Unsupported = 8,
    RequiresHolomorphic = 9,
    NonConvergence = 10,
    InsufficientPoints = 11,
    Io = 12,
    Utf8 = 13,
    Panic = 14,
}

/// Opaque completely monotone function.
pub struct CmFunctionHandle(CmFunction);

/// Opaque generator matrix.
pub struct CmGeneratorHandle(GeneratorMatrix);

/// Scalar functionals; NaN where a value is unavailable.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct CmFunctionalValues {
    pub l: f64,
    pub a: f64,
    pub b: f64,
    pub c_alpha: f64,
    pub d0: f64,
    pub d1: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CmStatus {
    match e {
        Error::InvalidParameter(_) => CmStatus::InvalidParameter,
        Error::InvalidMeasure(_) => CmStatus::InvalidMeasure,
        Error::RequiresMeasure => CmStatus::RequiresMeasure,
        Error::RequiresClass(_) => CmStatus::RequiresClass,
        Error::Divergent(_) => CmStatus::Divergent,
        Error::LimitUndefined => CmStatus::LimitUndefined,
        Error::Unsupported(_) => CmStatus::Unsupported,
        Error::RequiresHolomorphic => CmStatus::RequiresHolomorphic,
        Error::NonConvergence(_) => CmStatus::NonConvergence,
        Error::InsufficientPoints => CmStatus::InsufficientPoints,
        Error::Io(_) | Error::Json(_) | Error::Csv(_) => CmStatus::Io,
    }
}

enum Fail {
    Null,
    Utf8,
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> CmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CmStatus::Ok
        }
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument");
            CmStatus::NullPointer
        }
        Ok(Err(Fail::Utf8)) => {
            set_error("string argument is not valid UTF-8");
            CmStatus::Utf8
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            CmStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Utf8)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null)
}

unsafe fn func<'a>(h: *const CmFunctionHandle) -> Result<&'a CmFunction, Fail> {
    h.as_ref().map(|h| &h.0).ok_or(Fail::Null)
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse a function spec such as "euler", "kendall:t=0.5" or "frac_tail:gamma=0.3".
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_function_new(spec: *const c_char, out_handle: *mut *mut CmFunctionHandle) -> CmStatus {
    guard(|| {
        let s = str_arg(spec)?;
        let o = out(out_handle)?;
        *o = Box::into_raw(Box::new(CmFunctionHandle(parse_function(s)?)));
        Ok(())
    })
}

/// # Safety
/// `h` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cm_function_free(h: *mut CmFunctionHandle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// g(z) for real z ≥ 0.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cm_function_eval(h: *const CmFunctionHandle, z: f64, value: *mut f64) -> CmStatus {
    guard(|| {
        *out(value)? = func(h)?.eval(z)?;
        Ok(())
    })
}

/// g(re + i·im) for re ≥ 0.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cm_function_eval_complex(
    h: *const CmFunctionHandle,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> CmStatus {
    guard(|| {
        let v = func(h)?.eval_complex(C64::new(re, im))?;
        *out(out_re)? = v.re;
        *out(out_im)? = v.im;
        Ok(())
    })
}

/// k-th moment of the representing measure, k ≤ 4; +∞ when infinite.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cm_function_moment(h: *const CmFunctionHandle, k: u32, value: *mut f64) -> CmStatus {
    guard(|| {
        if k > 4 {
            return Err(Error::InvalidParameter("moment order above 4".into()).into());
        }
        *out(value)? = func(h)?.moment(k as usize).to_f64();
        Ok(())
    })
}

/// Class of the function: -1 bounded only, otherwise k for B_k.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cm_function_class(h: *const CmFunctionHandle, class: *mut i32) -> CmStatus {
    guard(|| {
        *out(class)? = match func(h)?.class() {
            CmClass::Bounded => -1,
            CmClass::B1 => 1,
            CmClass::B2 => 2,
            CmClass::B3 => 3,
            CmClass::B4 => 4,
        };
        Ok(())
    })
}

/// New handle for gₙ(z) = gⁿ(z/n).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cm_function_power_scale(
    h: *const CmFunctionHandle,
    n: u32,
    out_handle: *mut *mut CmFunctionHandle,
) -> CmStatus {
    guard(|| {
        let g = func(h)?.power_scale(n)?;
        *out(out_handle)? = Box::into_raw(Box::new(CmFunctionHandle(g)));
        Ok(())
    })
}

/// L, a, b, c_α, d₀, d₁ of the function. Entries that do not exist for it are NaN.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cm_functional_values(
    h: *const CmFunctionHandle,
    alpha: f64,
    values: *mut CmFunctionalValues,
) -> CmStatus {
    guard(|| {
        let g = func(h)?;
        let o = out(values)?;
        let v = |r: cmapprox::Result<f64>| r.unwrap_or(f64::NAN);
        *o = CmFunctionalValues {
            l: v(functional_l(g).map(|x| x.l)),
            a: v(a_of(g)),
            b: v(b_of(g)),
            c_alpha: v(c_alpha(g, alpha)),
            d0: v(d0_of(g)),
            d1: v(d1_of(g)),
        };
        Ok(())
    })
}

/// Exact c_α of the n-th Euler power.
///
/// # Safety
/// `value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cm_euler_c_alpha_exact(n: u32, alpha: f64, value: *mut f64) -> CmStatus {
    guard(|| {
        *out(value)? = euler_c_alpha_exact(n, alpha)?;
        Ok(())
    })
}

/// # Safety
/// `value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cm_digamma(x: f64, value: *mut f64) -> CmStatus {
    guard(|| {
        if !(x > 0.0) {
            return Err(Error::InvalidParameter("digamma needs x > 0".into()).into());
        }
        *out(value)? = digamma(x);
        Ok(())
    })
}

/// # Safety
/// `value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cm_log_gamma(x: f64, value: *mut f64) -> CmStatus {
    guard(|| {
        if !(x > 0.0) {
            return Err(Error::InvalidParameter("log_gamma needs x > 0".into()).into());
        }
        *out(value)? = ln_gamma(x);
        Ok(())
    })
}

/// Parse a gallery generator such as "laplacian:d=64" or "diag_imag:k=32,max=100".
///
/// # Safety
/// `spec` must be NUL-terminated and `out_handle` valid.
#[no_mangle]
pub unsafe extern "C" fn cm_generator_new(spec: *const c_char, out_handle: *mut *mut CmGeneratorHandle) -> CmStatus {
    guard(|| {
        let s = str_arg(spec)?;
        let o = out(out_handle)?;
        *o = Box::into_raw(Box::new(CmGeneratorHandle(parse_generator(s)?)));
        Ok(())
    })
}

/// # Safety
/// `h` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cm_generator_free(h: *mut CmGeneratorHandle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Dimension of the generator, 0 for null.
///
/// # Safety
/// `h` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn cm_generator_dim(h: *const CmGeneratorHandle) -> usize {
    h.as_ref().map_or(0, |g| g.0.dim())
}

/// y = gₙ(tA)x for a scheme spec ("euler", "kendall", "yosida", ...) with
/// x and y given as split real and imaginary arrays of length `len` = dim.
///
/// # Safety
/// All arrays must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn cm_scheme_apply(
    scheme: *const c_char,
    generator: *const CmGeneratorHandle,
    t: f64,
    n: u32,
    x_re: *const f64,
    x_im: *const f64,
    len: usize,
    y_re: *mut f64,
    y_im: *mut f64,
) -> CmStatus {
    guard(|| {
        let family = Family::parse(str_arg(scheme)?)?;
        let a = &generator.as_ref().ok_or(Fail::Null)?.0;
        if [x_re.is_null(), x_im.is_null(), y_re.is_null(), y_im.is_null()].contains(&true) {
            return Err(Fail::Null);
        }
        if len != a.dim() {
            return Err(Error::InvalidParameter(format!("vector length {len} != dimension {}", a.dim())).into());
        }
        let xr = std::slice::from_raw_parts(x_re, len);
        let xi = std::slice::from_raw_parts(x_im, len);
        let x = nalgebra::DVector::from_iterator(len, xr.iter().zip(xi).map(|(&r, &i)| C64::new(r, i)));
        let y = scheme_apply(&family, a, t, n)? * x;
        let yr = std::slice::from_raw_parts_mut(y_re, len);
        let yi = std::slice::from_raw_parts_mut(y_im, len);
        for (k, v) in y.iter().enumerate() {
            yr[k] = v.re;
            yi[k] = v.im;
        }
        Ok(())
    })
}
