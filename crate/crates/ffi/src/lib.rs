//! C ABI for the harmonic polygon library.
//!
//! Every function returns an [`HpStatus`]; on failure a description is
//! available from [`hp_last_error_message`] on the same thread. Families are
//! opaque handles created by [`hp_family_new`] and released with
//! [`hp_family_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use harmonic::invariants::{closed_form, sweep_family, QuantityId, SweepConfig, Verdict};
use harmonic::isocurves::omega_prime;
use harmonic::transforms::{lateral_areas, HomotheticPair};
use harmonic::{pt, Error, FamilySpec, Frame};

/// Casey frame: unit circumcircle, interior limiting point at `(d, 0)`.
pub const HP_FRAME_CASEY: u32 = 0;
/// Inversive frame: regular polygon inverted about `(x0, 0)`.
pub const HP_FRAME_INVERSIVE: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Degenerate = 3,
    NotHarmonic = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpVerdict {
    Invariant = 0,
    Varies = 1,
    Zero = 2,
    Inconclusive = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HpPoint {
    pub x: f64,
    pub y: f64,
}

/// Stationary objects of a family, in the family's frame. The pencil
/// fields are zero and `has_pencil` is 0 for the regular polygon.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HpBrocard {
    pub circumcenter: HpPoint,
    pub circumradius: f64,
    pub symmedian: HpPoint,
    pub brocard1: HpPoint,
    pub brocard2: HpPoint,
    pub inellipse_cx: f64,
    pub inellipse_a: f64,
    pub inellipse_b: f64,
    pub brocard_angle: f64,
    pub has_pencil: u8,
    pub brocard_center: HpPoint,
    pub brocard_radius: f64,
    pub l1: HpPoint,
    pub l2: HpPoint,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpInvariantSummary {
    pub mean: f64,
    pub max_abs_dev: f64,
    pub relative_dev: f64,
    /// NaN when no closed form is known.
    pub closed_form: f64,
    pub verdict: HpVerdict,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HpLateralAreas {
    pub a1: f64,
    pub a2: f64,
    pub inv_sum: f64,
}

/// Opaque family handle.
pub struct HpFamily {
    spec: FamilySpec,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HpStatus {
    match e {
        Error::ParameterOutOfRange { .. } | Error::InconsistentInput(_) | Error::NonFinite(_) => {
            HpStatus::InvalidArgument
        }
        Error::NotHarmonic { .. } => HpStatus::NotHarmonic,
        _ => HpStatus::Degenerate,
    }
}

fn fail(status: HpStatus, msg: &str) -> HpStatus {
    set_last_error(msg);
    status
}

fn guard<F>(f: F) -> HpStatus
where
    F: FnOnce() -> Result<(), HpStatus>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            HpStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(HpStatus::Panic, "internal panic"),
    }
}

fn lib<T>(r: harmonic::Result<T>) -> Result<T, HpStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), HpStatus> {
    if p.is_null() {
        Err(fail(HpStatus::NullPointer, &format!("{name} is NULL")))
    } else {
        Ok(())
    }
}

unsafe fn family<'a>(fam: *const HpFamily) -> Result<&'a HpFamily, HpStatus> {
    non_null(fam, "family")?;
    Ok(&*fam)
}

fn point(p: harmonic::CPoint) -> HpPoint {
    HpPoint { x: p.re, y: p.im }
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn hp_status_string(status: HpStatus) -> *const c_char {
    let s: &'static str = match status {
        HpStatus::Ok => "ok\0",
        HpStatus::NullPointer => "null pointer\0",
        HpStatus::InvalidArgument => "invalid argument\0",
        HpStatus::Degenerate => "degenerate configuration\0",
        HpStatus::NotHarmonic => "not harmonic\0",
        HpStatus::BufferTooSmall => "buffer too small\0",
        HpStatus::Panic => "internal panic\0",
    };
    s.as_ptr().cast()
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn hp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Create a family of `n`-gons. `frame` is [`HP_FRAME_CASEY`] or
/// [`HP_FRAME_INVERSIVE`]; `param` is `d` or `x0` with `|param| < 1`.
///
/// # Safety
/// `out` must be NULL or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn hp_family_new(
    n: u32,
    frame: u32,
    param: f64,
    out: *mut *mut HpFamily,
) -> HpStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let frame = match frame {
            HP_FRAME_CASEY => Frame::Casey,
            HP_FRAME_INVERSIVE => Frame::Inversive,
            other => {
                return Err(fail(
                    HpStatus::InvalidArgument,
                    &format!("unknown frame {other}"),
                ))
            }
        };
        let spec = lib(FamilySpec::new(n as usize, frame, param))?;
        *out = Box::into_raw(Box::new(HpFamily { spec }));
        Ok(())
    })
}

/// Release a family. NULL is ignored.
///
/// # Safety
/// `fam` must be NULL or a handle from [`hp_family_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hp_family_free(fam: *mut HpFamily) {
    if !fam.is_null() {
        drop(Box::from_raw(fam));
    }
}

/// # Safety
/// `fam` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hp_family_vertex_count(fam: *const HpFamily, out: *mut u32) -> HpStatus {
    guard(|| {
        let f = family(fam)?;
        non_null(out, "out")?;
        *out = f.spec.n() as u32;
        Ok(())
    })
}

/// Write the `N` vertices at phase `t` into `buf`, which holds `len`
/// points.
///
/// # Safety
/// `fam` must be a live handle; `buf` valid for writing `len` points.
#[no_mangle]
pub unsafe extern "C" fn hp_family_vertices(
    fam: *const HpFamily,
    t: f64,
    buf: *mut HpPoint,
    len: usize,
) -> HpStatus {
    guard(|| {
        let f = family(fam)?;
        non_null(buf, "buf")?;
        let n = f.spec.n();
        if len < n {
            return Err(fail(
                HpStatus::BufferTooSmall,
                &format!("buffer holds {len} points, {n} needed"),
            ));
        }
        let p = lib(f.spec.vertices(t))?;
        let dst = std::slice::from_raw_parts_mut(buf, n);
        for (d, v) in dst.iter_mut().zip(p.vertices()) {
            *d = point(*v);
        }
        Ok(())
    })
}

/// # Safety
/// `fam` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hp_family_brocard(fam: *const HpFamily, out: *mut HpBrocard) -> HpStatus {
    guard(|| {
        let f = family(fam)?;
        non_null(out, "out")?;
        let o = f.spec.brocard_objects();
        let mut b = HpBrocard {
            circumcenter: point(o.circumcircle.center),
            circumradius: o.circumcircle.radius,
            symmedian: point(o.symmedian),
            brocard1: point(o.brocard_points[0]),
            brocard2: point(o.brocard_points[1]),
            inellipse_cx: o.inellipse.cx,
            inellipse_a: o.inellipse.a,
            inellipse_b: o.inellipse.b,
            brocard_angle: o.brocard_angle,
            l1: point(o.limiting_points.0),
            ..Default::default()
        };
        if let (Some(bc), Some(l2)) = (o.brocard_circle, o.limiting_points.1) {
            b.has_pencil = 1;
            b.brocard_center = point(bc.center);
            b.brocard_radius = bc.radius;
            b.l2 = point(l2);
        }
        *out = b;
        Ok(())
    })
}

/// Brocard angle `arccot(Σs²/(4A))` measured on the polygon at `t`.
///
/// # Safety
/// `fam` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hp_family_brocard_angle_measured(
    fam: *const HpFamily,
    t: f64,
    out: *mut f64,
) -> HpStatus {
    guard(|| {
        let f = family(fam)?;
        non_null(out, "out")?;
        let snap = lib(f.spec.snapshot(t))?;
        *out = lib(harmonic::family::brocard_angle_measured(&snap))?;
        Ok(())
    })
}

/// Largest side-to-inellipse tangency residual at `t`.
///
/// # Safety
/// `fam` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hp_family_closure_residual(
    fam: *const HpFamily,
    t: f64,
    out: *mut f64,
) -> HpStatus {
    guard(|| {
        let f = family(fam)?;
        non_null(out, "out")?;
        *out = lib(harmonic::family::closure_residual(&f.spec, t))?;
        Ok(())
    })
}

/// Sweep one quantity, named as on the command line (`sum-inv-sq-sides`,
/// `cotpow:3`, `elemsym:2`, ...), over `samples` phases.
///
/// # Safety
/// `fam` must be a live handle; `quantity` a NUL-terminated string; `out`
/// valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hp_family_invariant(
    fam: *const HpFamily,
    quantity: *const c_char,
    samples: u32,
    out: *mut HpInvariantSummary,
) -> HpStatus {
    guard(|| {
        let f = family(fam)?;
        non_null(quantity, "quantity")?;
        non_null(out, "out")?;
        let name = CStr::from_ptr(quantity)
            .to_str()
            .map_err(|_| fail(HpStatus::InvalidArgument, "quantity is not UTF-8"))?;
        let q: QuantityId = lib(name.parse())?;
        if q.is_lateral() || samples < 2 {
            return Err(fail(
                HpStatus::InvalidArgument,
                "quantity must be a harmonic-family quantity and samples >= 2",
            ));
        }
        let r = lib(sweep_family(
            &f.spec,
            &[q],
            &SweepConfig::with_samples(samples as usize),
        ))?
        .remove(0);
        *out = HpInvariantSummary {
            mean: r.mean,
            max_abs_dev: r.max_abs_dev,
            relative_dev: r.relative_dev,
            closed_form: closed_form(&f.spec, q).unwrap_or(f64::NAN),
            verdict: match r.verdict {
                Verdict::Invariant => HpVerdict::Invariant,
                Verdict::Varies => HpVerdict::Varies,
                Verdict::Zero => HpVerdict::Zero,
                Verdict::Inconclusive => HpVerdict::Inconclusive,
            },
        };
        Ok(())
    })
}

/// Brocard angle of the polygon at `t` inverted about `(qx, qy)`.
///
/// # Safety
/// `fam` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hp_family_omega_prime(
    fam: *const HpFamily,
    t: f64,
    qx: f64,
    qy: f64,
    out: *mut f64,
) -> HpStatus {
    guard(|| {
        let f = family(fam)?;
        non_null(out, "out")?;
        *out = lib(omega_prime(&f.spec, t, pt(qx, qy)))?;
        Ok(())
    })
}

/// Areas of the polar images about the inner foci of the homothetic
/// `n`-gon at `t` with inner semiaxes `(ah, bh)` centered at the origin.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hp_lateral_areas(
    n: u32,
    ah: f64,
    bh: f64,
    t: f64,
    out: *mut HpLateralAreas,
) -> HpStatus {
    guard(|| {
        non_null(out, "out")?;
        let pair = lib(HomotheticPair::from_inner(n as usize, 0.0, ah, bh))?;
        let la = lib(lateral_areas(&pair, t))?;
        *out = HpLateralAreas {
            a1: la.a1,
            a2: la.a2,
            inv_sum: la.inv_sum(),
        };
        Ok(())
    })
}
