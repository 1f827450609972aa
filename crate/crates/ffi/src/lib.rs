//! C ABI for orbitlab.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_build`
//! functions and released with the matching `*_free`. Every fallible call
//! returns an [`OrbitlabStatus`]; on failure the message is available from
//! [`orbitlab_last_error`] on the same thread. Panics are caught and reported
//! as [`OrbitlabStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use orbitlab::checks::run_check;
use orbitlab::discrete_series::{
    branch_to_b, branch_to_b1, central_character_selects, from_harish_chandra, BranchingDecomposition, Chamber,
    DiscreteSeriesParam, DsClass, Mult,
};
use orbitlab::irregular_connection::{global_l2_dimension, ConnectionConfig};
use orbitlab::ode_builder::{build_system, OdeSystem};
use orbitlab::symplectic_reduction::reduced_volume;
use orbitlab::{Error, Sign};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitlabStatus {
    Ok = 0,
    InvalidParameter = 1,
    NotInRegularSet = 2,
    BoundaryEigenvalue = 3,
    RadiusError = 4,
    ResonanceFailure = 5,
    AmbiguousRank = 6,
    StepUnderflow = 7,
    Numeric = 8,
    NullPointer = 9,
    IndexOutOfRange = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitlabClass {
    Holo = 0,
    AntiHolo = 1,
    Neither = 2,
}

/// Numerical settings of the L2 dimension count.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct OrbitlabConfig {
    pub z0: f64,
    pub z1: f64,
    pub rank_tol: f64,
    pub integration_tol: f64,
}

/// Multiplicity value standing for an infinite multiplicity.
pub const ORBITLAB_MULT_INFINITE: u64 = u64::MAX;

/// Discrete-series parameter `(f0H, f0Z)`.
pub struct OrbitlabDiscreteSeries(DiscreteSeriesParam);

/// Restriction of a discrete series to `B` or `B1`.
pub struct OrbitlabBranching(BranchingDecomposition);

/// A system `z x' = (A + B z + C z^2) x` in the variable `z`.
pub struct OrbitlabSystem(OdeSystem);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OrbitlabStatus {
    match e {
        Error::InvalidParameter(_) => OrbitlabStatus::InvalidParameter,
        Error::NotInRegularSet => OrbitlabStatus::NotInRegularSet,
        Error::BoundaryEigenvalue { .. } => OrbitlabStatus::BoundaryEigenvalue,
        Error::RadiusError { .. } => OrbitlabStatus::RadiusError,
        Error::ResonanceFailure { .. } => OrbitlabStatus::ResonanceFailure,
        Error::AmbiguousRank { .. } => OrbitlabStatus::AmbiguousRank,
        Error::StepUnderflow { .. } => OrbitlabStatus::StepUnderflow,
        Error::Numeric(_) => OrbitlabStatus::Numeric,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
    Index(usize, usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Run `f`, translating errors and panics into a status and the thread's last error.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> OrbitlabStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OrbitlabStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("{what} is null"));
            OrbitlabStatus::NullPointer
        }
        Ok(Err(Failure::Index(i, n))) => {
            set_last_error(format!("index {i} out of range (length {n})"));
            OrbitlabStatus::IndexOutOfRange
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            OrbitlabStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

fn sign_of(s: i32) -> Result<Sign, Failure> {
    match s {
        1 => Ok(Sign::Plus),
        -1 => Ok(Sign::Minus),
        _ => Err(Error::InvalidParameter(format!("sign must be +1 or -1, got {s}")).into()),
    }
}

fn sign_value(s: Sign) -> i32 {
    match s {
        Sign::Plus => 1,
        Sign::Minus => -1,
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next orbitlab call on the same thread.
#[no_mangle]
pub extern "C" fn orbitlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn orbitlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from an orbitlab function documented as returning an owned
/// string, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Default numerical settings.
#[no_mangle]
pub extern "C" fn orbitlab_config_default() -> OrbitlabConfig {
    let c = ConnectionConfig::default();
    OrbitlabConfig { z0: c.z0, z1: c.z1, rank_tol: c.rank_tol, integration_tol: c.integration_tol }
}

/// # Safety
/// `out_ds` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_ds_new(f0h: i64, f0z: i64, out_ds: *mut *mut OrbitlabDiscreteSeries) -> OrbitlabStatus {
    guard(|| {
        let slot = out(out_ds, "out_ds")?;
        let ds = DiscreteSeriesParam::new(f0h, f0z)?;
        *slot = Box::into_raw(Box::new(OrbitlabDiscreteSeries(ds)));
        Ok(())
    })
}

/// `chamber` is 1, 2 or 3; `second` is `n3`, `n23` or `n2` accordingly.
///
/// # Safety
/// `out_ds` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_ds_from_harish_chandra(
    n1: i64,
    second: i64,
    chamber: i32,
    out_ds: *mut *mut OrbitlabDiscreteSeries,
) -> OrbitlabStatus {
    guard(|| {
        let slot = out(out_ds, "out_ds")?;
        let chamber = match chamber {
            1 => Chamber::D1,
            2 => Chamber::D2,
            3 => Chamber::D3,
            c => return Err(Error::InvalidParameter(format!("chamber must be 1, 2 or 3, got {c}")).into()),
        };
        let ds = from_harish_chandra(n1, second, chamber)?;
        *slot = Box::into_raw(Box::new(OrbitlabDiscreteSeries(ds)));
        Ok(())
    })
}

/// # Safety
/// `ds` must be NULL or a handle from `orbitlab_ds_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_ds_free(ds: *mut OrbitlabDiscreteSeries) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// # Safety
/// `ds` must be a live handle; the out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_ds_params(
    ds: *const OrbitlabDiscreteSeries,
    f0h: *mut i64,
    f0z: *mut i64,
    class: *mut OrbitlabClass,
) -> OrbitlabStatus {
    guard(|| {
        let d = &deref(ds, "ds")?.0;
        *out(f0h, "f0h")? = d.f0h;
        *out(f0z, "f0z")? = d.f0z;
        *out(class, "class")? = match d.class {
            DsClass::Holo => OrbitlabClass::Holo,
            DsClass::AntiHolo => OrbitlabClass::AntiHolo,
            DsClass::Neither => OrbitlabClass::Neither,
        };
        Ok(())
    })
}

/// # Safety
/// `ds` must be a live handle and `selected` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_central_character_selects(
    ds: *const OrbitlabDiscreteSeries,
    m: i64,
    selected: *mut bool,
) -> OrbitlabStatus {
    guard(|| {
        let d = &deref(ds, "ds")?.0;
        *out(selected, "selected")? = central_character_selects(d, m);
        Ok(())
    })
}

/// Restriction to `B`, families cut at `n_max` terms.
///
/// # Safety
/// `ds` must be a live handle and `out_br` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_branch_b(
    ds: *const OrbitlabDiscreteSeries,
    n_max: usize,
    out_br: *mut *mut OrbitlabBranching,
) -> OrbitlabStatus {
    guard(|| {
        let d = &deref(ds, "ds")?.0;
        let slot = out(out_br, "out_br")?;
        *slot = Box::into_raw(Box::new(OrbitlabBranching(branch_to_b(d, n_max))));
        Ok(())
    })
}

/// Restriction to `B1`.
///
/// # Safety
/// `ds` must be a live handle and `out_br` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_branch_b1(ds: *const OrbitlabDiscreteSeries, out_br: *mut *mut OrbitlabBranching) -> OrbitlabStatus {
    guard(|| {
        let d = &deref(ds, "ds")?.0;
        let slot = out(out_br, "out_br")?;
        *slot = Box::into_raw(Box::new(OrbitlabBranching(branch_to_b1(d))));
        Ok(())
    })
}

/// # Safety
/// `br` must be NULL or a live branching handle.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_branching_free(br: *mut OrbitlabBranching) {
    if !br.is_null() {
        drop(Box::from_raw(br));
    }
}

/// Number of listed entries and whether every multiplicity is finite.
///
/// # Safety
/// `br` must be a live handle; the out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_branching_info(br: *const OrbitlabBranching, len: *mut usize, admissible: *mut bool) -> OrbitlabStatus {
    guard(|| {
        let b = &deref(br, "br")?.0;
        *out(len, "len")? = b.entries.len();
        *out(admissible, "admissible")? = b.admissible;
        Ok(())
    })
}

/// Entry `index`: label `m` (`has_m` is false for `B1`), sign (+1/-1) and
/// multiplicity (`ORBITLAB_MULT_INFINITE` for infinite).
///
/// # Safety
/// `br` must be a live handle; the out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_branching_entry(
    br: *const OrbitlabBranching,
    index: usize,
    has_m: *mut bool,
    m: *mut i64,
    sign: *mut i32,
    mult: *mut u64,
) -> OrbitlabStatus {
    guard(|| {
        let b = &deref(br, "br")?.0;
        let e = b.entries.get(index).ok_or(Failure::Index(index, b.entries.len()))?;
        *out(has_m, "has_m")? = e.m.is_some();
        *out(m, "m")? = e.m.unwrap_or(0);
        *out(sign, "sign")? = sign_value(e.sign);
        *out(mult, "mult")? = match e.mult {
            Mult::Finite(n) => n,
            Mult::Infinite => ORBITLAB_MULT_INFINITE,
        };
        Ok(())
    })
}

/// The system `D±_m` of a non-holomorphic discrete series; `sign` is +1 or -1.
///
/// # Safety
/// `ds` must be a live handle and `out_sys` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_system_build(
    ds: *const OrbitlabDiscreteSeries,
    m: i64,
    sign: i32,
    out_sys: *mut *mut OrbitlabSystem,
) -> OrbitlabStatus {
    guard(|| {
        let d = &deref(ds, "ds")?.0;
        let slot = out(out_sys, "out_sys")?;
        let sys = build_system(d, m, sign_of(sign)?)?;
        *slot = Box::into_raw(Box::new(OrbitlabSystem(sys)));
        Ok(())
    })
}

/// # Safety
/// `sys` must be NULL or a live system handle.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_system_free(sys: *mut OrbitlabSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// # Safety
/// `sys` must be a live handle and `size` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_system_size(sys: *const OrbitlabSystem, size: *mut usize) -> OrbitlabStatus {
    guard(|| {
        *out(size, "size")? = deref(sys, "sys")?.0.size();
        Ok(())
    })
}

/// Copy matrix `which` (0 = A, 1 = B, 2 = C) row-major into `re` and `im`,
/// each holding `size * size` doubles.
///
/// # Safety
/// `sys` must be a live handle; `re` and `im` must each be valid for
/// `size * size` writes.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_system_matrix(sys: *const OrbitlabSystem, which: i32, re: *mut f64, im: *mut f64) -> OrbitlabStatus {
    guard(|| {
        let s = &deref(sys, "sys")?.0;
        let mat = match which {
            0 => &s.a,
            1 => &s.b,
            2 => &s.c,
            w => return Err(Failure::Index(w as usize, 3)),
        };
        if re.is_null() || im.is_null() {
            return Err(Failure::Null("re/im"));
        }
        let n = s.size();
        let re = std::slice::from_raw_parts_mut(re, n * n);
        let im = std::slice::from_raw_parts_mut(im, n * n);
        for i in 0..n {
            for j in 0..n {
                re[i * n + j] = mat[(i, j)].re;
                im[i * n + j] = mat[(i, j)].im;
            }
        }
        Ok(())
    })
}

/// Dimension of the space of L2 solutions on `(0, inf)`. `config` may be NULL
/// for the defaults.
///
/// # Safety
/// `sys` must be a live handle, `config` NULL or valid, `dim` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_l2_dimension(
    sys: *const OrbitlabSystem,
    config: *const OrbitlabConfig,
    dim: *mut usize,
) -> OrbitlabStatus {
    guard(|| {
        let s = &deref(sys, "sys")?.0;
        let slot = out(dim, "dim")?;
        let mut cfg = ConnectionConfig::default();
        if let Some(c) = config.as_ref() {
            if !(c.z0 > 0.0 && c.z1 > c.z0 && c.rank_tol > 0.0 && c.integration_tol > 0.0) {
                return Err(Error::InvalidParameter("need 0 < z0 < z1 and positive tolerances".into()).into());
            }
            cfg = ConnectionConfig { z0: c.z0, z1: c.z1, rank_tol: c.rank_tol, integration_tol: c.integration_tol, ..cfg };
        }
        *slot = global_l2_dimension(s, &cfg)?.dim;
        Ok(())
    })
}

/// Symplectic volume (over `2 pi`) of the reduced sphere, Simpson with `n` intervals.
///
/// # Safety
/// `volume` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_reduced_volume(f0h: f64, f0z: f64, n: usize, volume: *mut f64) -> OrbitlabStatus {
    guard(|| {
        let slot = out(volume, "volume")?;
        *slot = reduced_volume(f0h, f0z, n)?;
        Ok(())
    })
}

/// Run acceptance check `id` (1 to 10). `detail`, when not NULL, receives an
/// owned string to release with `orbitlab_string_free`.
///
/// # Safety
/// `passed` must be valid for writes; `detail` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn orbitlab_run_check(id: u8, passed: *mut bool, detail: *mut *mut c_char) -> OrbitlabStatus {
    guard(|| {
        if !(1..=10).contains(&id) {
            return Err(Error::InvalidParameter(format!("check id must be 1 to 10, got {id}")).into());
        }
        let slot = out(passed, "passed")?;
        let r = run_check(id);
        *slot = r.passed;
        if let Some(d) = detail.as_mut() {
            *d = CString::new(r.to_string().replace('\0', " ")).expect("nul bytes removed").into_raw();
        }
        Ok(())
    })
}
