//! C ABI over the holonomic rotation-number library.
//!
//! Conventions: every fallible call returns a [`HoloStatus`] and writes
//! its result through an out-pointer that is touched only on
//! `HOLO_STATUS_OK`. Handles are opaque; release them with the matching
//! `holo_*_free`. Strings returned through `char**` are NUL-terminated,
//! UTF-8, and owned by the caller until passed to [`holo_string_free`].
//! Panics never unwind across the boundary; they surface as
//! `HOLO_STATUS_PANIC`.

use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use holonomic::loewner::{verify_theorem, SweepConfig};
use holonomic::trigpoly::{TrigPoly, TrigPolyError};
use holonomic::winding::{region_map, Curve, Point, WindingError};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoloStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// An argument was out of range or otherwise malformed.
    InvalidArgument = 2,
    /// The inputs produced a degenerate configuration (constant function,
    /// tangential level, or non-finite data).
    Degenerate = 3,
    /// The query point lies inside the exclusion tube around the curve.
    OnCurve = 4,
    /// The curve has a near-zero velocity and is rejected.
    NotImmersed = 5,
    /// An adaptive computation exceeded its refinement budget.
    NonConvergent = 6,
    /// A panic was caught at the boundary.
    Panic = 7,
}

/// Opaque handle to a trigonometric polynomial.
pub struct HoloTrigPoly(TrigPoly);

/// Opaque handle to a closed immersed curve.
pub struct HoloCurve(Curve);

fn winding_status(e: &WindingError) -> HoloStatus {
    match e {
        WindingError::OnCurve { .. } => HoloStatus::OnCurve,
        WindingError::DegenerateRay { .. } => HoloStatus::Degenerate,
        WindingError::NonConvergent { .. } => HoloStatus::NonConvergent,
        WindingError::NotImmersed { .. } => HoloStatus::NotImmersed,
    }
}

fn trig_status(e: &TrigPolyError) -> HoloStatus {
    match e {
        TrigPolyError::NonFinite => HoloStatus::InvalidArgument,
        _ => HoloStatus::Degenerate,
    }
}

/// Runs `body` with panics converted to `HOLO_STATUS_PANIC`.
fn guarded(body: impl FnOnce() -> HoloStatus) -> HoloStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(HoloStatus::Panic)
}

/// Version of the underlying library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn holo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds a seeded random polynomial of the given degree with
/// coefficients drawn uniformly from `[-amplitude, amplitude]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn holo_trigpoly_random(
    seed: u64,
    degree: usize,
    amplitude: f64,
    out: *mut *mut HoloTrigPoly,
) -> HoloStatus {
    if out.is_null() {
        return HoloStatus::NullArgument;
    }
    if !(amplitude.is_finite() && amplitude > 0.0) {
        return HoloStatus::InvalidArgument;
    }
    guarded(|| {
        let poly = TrigPoly::random(seed, degree, amplitude);
        *out = Box::into_raw(Box::new(HoloTrigPoly(poly)));
        HoloStatus::Ok
    })
}

/// Builds a polynomial from a mean value and `pairs` harmonic
/// coefficients laid out as `[a1, b1, a2, b2, …]` (frequency `k` has
/// coefficient `a_k cos(kt) + b_k sin(kt)`).
///
/// # Safety
/// `coeffs` must point to `2 * pairs` doubles (may be NULL when `pairs`
/// is zero); `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn holo_trigpoly_new(
    mean: f64,
    coeffs: *const f64,
    pairs: usize,
    out: *mut *mut HoloTrigPoly,
) -> HoloStatus {
    if out.is_null() || (coeffs.is_null() && pairs > 0) {
        return HoloStatus::NullArgument;
    }
    guarded(|| {
        let flat = if pairs == 0 { &[][..] } else { std::slice::from_raw_parts(coeffs, 2 * pairs) };
        let list: Vec<(f64, f64)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        match TrigPoly::new(mean, list) {
            Ok(poly) => {
                *out = Box::into_raw(Box::new(HoloTrigPoly(poly)));
                HoloStatus::Ok
            }
            Err(e) => trig_status(&e),
        }
    })
}

/// Evaluates the polynomial at parameter `t`.
///
/// # Safety
/// `poly` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn holo_trigpoly_evaluate(
    poly: *const HoloTrigPoly,
    t: f64,
    out: *mut f64,
) -> HoloStatus {
    if poly.is_null() || out.is_null() {
        return HoloStatus::NullArgument;
    }
    guarded(|| {
        *out = (*poly).0.evaluate(t);
        HoloStatus::Ok
    })
}

/// Returns a new handle holding the derivative.
///
/// # Safety
/// `poly` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn holo_trigpoly_derivative(
    poly: *const HoloTrigPoly,
    out: *mut *mut HoloTrigPoly,
) -> HoloStatus {
    if poly.is_null() || out.is_null() {
        return HoloStatus::NullArgument;
    }
    guarded(|| {
        *out = Box::into_raw(Box::new(HoloTrigPoly((*poly).0.derivative())));
        HoloStatus::Ok
    })
}

/// Releases a polynomial handle. NULL is ignored.
///
/// # Safety
/// `poly` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn holo_trigpoly_free(poly: *mut HoloTrigPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Builds the closed curve `(x(t), y(t))`; fails with
/// `HOLO_STATUS_NOT_IMMERSED` when the velocity can vanish.
///
/// # Safety
/// `x` and `y` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn holo_curve_new(
    x: *const HoloTrigPoly,
    y: *const HoloTrigPoly,
    out: *mut *mut HoloCurve,
) -> HoloStatus {
    if x.is_null() || y.is_null() || out.is_null() {
        return HoloStatus::NullArgument;
    }
    guarded(|| match Curve::new((*x).0.clone(), (*y).0.clone()) {
        Ok(curve) => {
            *out = Box::into_raw(Box::new(HoloCurve(curve)));
            HoloStatus::Ok
        }
        Err(e) => winding_status(&e),
    })
}

/// Builds the curve `(f'(t), f(t))`.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn holo_curve_holonomic(
    f: *const HoloTrigPoly,
    out: *mut *mut HoloCurve,
) -> HoloStatus {
    if f.is_null() || out.is_null() {
        return HoloStatus::NullArgument;
    }
    guarded(|| match Curve::holonomic(&(*f).0) {
        Ok(curve) => {
            *out = Box::into_raw(Box::new(HoloCurve(curve)));
            HoloStatus::Ok
        }
        Err(e) => winding_status(&e),
    })
}

/// Releases a curve handle. NULL is ignored.
///
/// # Safety
/// `curve` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn holo_curve_free(curve: *mut HoloCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Writes the axis-aligned bounding box as `[x0, y0, x1, y1]`.
///
/// # Safety
/// `curve` must be a live handle; `out` must point to four doubles.
#[no_mangle]
pub unsafe extern "C" fn holo_curve_bounding_box(
    curve: *const HoloCurve,
    out: *mut f64,
) -> HoloStatus {
    if curve.is_null() || out.is_null() {
        return HoloStatus::NullArgument;
    }
    guarded(|| {
        let b = (*curve).0.bounding_box();
        std::slice::from_raw_parts_mut(out, 4).copy_from_slice(&b);
        HoloStatus::Ok
    })
}

/// Rotation number about `(x, y)` by certified ray crossings, with the
/// two-sided level perturbation fallback.
///
/// # Safety
/// `curve` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn holo_curve_rotation_ray(
    curve: *const HoloCurve,
    x: f64,
    y: f64,
    out: *mut i64,
) -> HoloStatus {
    if curve.is_null() || out.is_null() {
        return HoloStatus::NullArgument;
    }
    guarded(|| match (*curve).0.rotation_number_ray_robust(Point::new(x, y)) {
        Ok((r, _)) => {
            *out = r;
            HoloStatus::Ok
        }
        Err(e) => winding_status(&e),
    })
}

/// Rotation number about `(x, y)` by adaptive angle accumulation;
/// `residual` receives the distance of the raw turn count from the
/// returned integer.
///
/// # Safety
/// `curve` must be a live handle; `out` and `residual` must be valid.
#[no_mangle]
pub unsafe extern "C" fn holo_curve_rotation_angle(
    curve: *const HoloCurve,
    x: f64,
    y: f64,
    out: *mut i64,
    residual: *mut f64,
) -> HoloStatus {
    if curve.is_null() || out.is_null() || residual.is_null() {
        return HoloStatus::NullArgument;
    }
    guarded(|| match (*curve).0.rotation_number_angle(Point::new(x, y)) {
        Ok((r, res)) => {
            *out = r;
            *residual = res;
            HoloStatus::Ok
        }
        Err(e) => winding_status(&e),
    })
}

/// Winding of the tangent vector about the origin.
///
/// # Safety
/// `curve` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn holo_curve_whitney(
    curve: *const HoloCurve,
    out: *mut i64,
) -> HoloStatus {
    if curve.is_null() || out.is_null() {
        return HoloStatus::NullArgument;
    }
    guarded(|| match (*curve).0.whitney_winding() {
        Ok(w) => {
            *out = w;
            HoloStatus::Ok
        }
        Err(e) => winding_status(&e),
    })
}

fn string_out(s: String, out: *mut *mut c_char) -> HoloStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            HoloStatus::Ok
        }
        Err(_) => HoloStatus::Panic, // JSON never contains NUL bytes
    }
}

/// Rotation numbers on an `nx × ny` grid over `[x0, x1] × [y0, y1]`,
/// serialized as the region-map JSON document
/// `{"bounds", "nx", "ny", "values", "sentinel"}` with row-major values
/// from the bottom row up and failed cells at the sentinel.
///
/// # Safety
/// `curve` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn holo_curve_region_map_json(
    curve: *const HoloCurve,
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    nx: usize,
    ny: usize,
    out: *mut *mut c_char,
) -> HoloStatus {
    if curve.is_null() || out.is_null() {
        return HoloStatus::NullArgument;
    }
    if nx < 2 || ny < 2 || !(x0 < x1 && y0 < y1) || ![x0, y0, x1, y1].iter().all(|v| v.is_finite())
    {
        return HoloStatus::InvalidArgument;
    }
    guarded(|| {
        let map = region_map(&(*curve).0, [x0, y0, x1, y1], nx, ny);
        string_out(serde_json::to_string(&map).expect("map serializes"), out)
    })
}

/// Runs the randomized whole-statement sweep and returns the JSON report
/// (with `elapsed_ms` zeroed so identical seeds give identical bytes).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn holo_verify_theorem_json(
    seed: u64,
    trials: u64,
    n_max: usize,
    f_degree: usize,
    out: *mut *mut c_char,
) -> HoloStatus {
    if out.is_null() {
        return HoloStatus::NullArgument;
    }
    if n_max < 1 || f_degree < 1 {
        return HoloStatus::InvalidArgument;
    }
    guarded(|| {
        let cfg = SweepConfig { seed, trials, n_max, f_degree, ..SweepConfig::default() };
        let mut report = verify_theorem(&cfg);
        report.elapsed_ms = 0;
        string_out(serde_json::to_string(&report).expect("report serializes"), out)
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn holo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;
    use std::ptr;

    unsafe fn circle_curve() -> *mut HoloCurve {
        let coeffs = [0.0f64, 1.0]; // sin t
        let mut poly = ptr::null_mut();
        assert_eq!(holo_trigpoly_new(0.0, coeffs.as_ptr(), 1, &mut poly), HoloStatus::Ok);
        let mut curve = ptr::null_mut();
        assert_eq!(holo_curve_holonomic(poly, &mut curve), HoloStatus::Ok);
        holo_trigpoly_free(poly);
        curve
    }

    #[test]
    fn version_is_a_c_string() {
        let v = unsafe { CStr::from_ptr(holo_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn circle_rotations_through_the_abi() {
        unsafe {
            let curve = circle_curve();
            let mut r = 0i64;
            assert_eq!(holo_curve_rotation_ray(curve, 0.0, 0.0, &mut r), HoloStatus::Ok);
            assert_eq!(r, 1);
            assert_eq!(holo_curve_rotation_ray(curve, 2.0, 0.0, &mut r), HoloStatus::Ok);
            assert_eq!(r, 0);

            let mut residual = 1.0;
            assert_eq!(
                holo_curve_rotation_angle(curve, 0.3, -0.2, &mut r, &mut residual),
                HoloStatus::Ok
            );
            assert_eq!(r, 1);
            assert!(residual < 1e-6);

            let mut w = 0i64;
            assert_eq!(holo_curve_whitney(curve, &mut w), HoloStatus::Ok);
            assert_eq!(w, 1);

            assert_eq!(
                holo_curve_rotation_ray(curve, 1.0, 0.0, &mut r),
                HoloStatus::OnCurve
            );
            holo_curve_free(curve);
        }
    }

    #[test]
    fn region_map_json_round_trips() {
        unsafe {
            let curve = circle_curve();
            let mut s = ptr::null_mut();
            assert_eq!(
                holo_curve_region_map_json(curve, -2.0, -2.0, 2.0, 2.0, 5, 5, &mut s),
                HoloStatus::Ok
            );
            let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
            holo_string_free(s);
            let v: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(v["nx"], 5);
            assert_eq!(v["values"].as_array().unwrap().len(), 25);
            assert_eq!(
                holo_curve_region_map_json(curve, 2.0, -2.0, -2.0, 2.0, 5, 5, &mut s),
                HoloStatus::InvalidArgument
            );
            holo_curve_free(curve);
        }
    }

    #[test]
    fn sweep_report_is_deterministic_json() {
        unsafe {
            let mut s1 = ptr::null_mut();
            let mut s2 = ptr::null_mut();
            assert_eq!(holo_verify_theorem_json(7, 3, 2, 3, &mut s1), HoloStatus::Ok);
            assert_eq!(holo_verify_theorem_json(7, 3, 2, 3, &mut s2), HoloStatus::Ok);
            let (a, b) = (CStr::from_ptr(s1).to_bytes().to_vec(), CStr::from_ptr(s2).to_bytes().to_vec());
            holo_string_free(s1);
            holo_string_free(s2);
            assert_eq!(a, b);
            let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
            assert_eq!(v["violations"].as_array().unwrap().len(), 0);
            assert_eq!(v["elapsed_ms"], 0);
        }
    }

    #[test]
    fn null_and_invalid_arguments_are_reported() {
        unsafe {
            assert_eq!(
                holo_trigpoly_random(1, 3, 1.0, ptr::null_mut()),
                HoloStatus::NullArgument
            );
            let mut poly = ptr::null_mut();
            assert_eq!(
                holo_trigpoly_random(1, 3, f64::NAN, &mut poly),
                HoloStatus::InvalidArgument
            );
            assert_eq!(
                holo_trigpoly_new(f64::NAN, ptr::null(), 0, &mut poly),
                HoloStatus::InvalidArgument
            );
            let mut r = 0i64;
            assert_eq!(
                holo_curve_rotation_ray(ptr::null(), 0.0, 0.0, &mut r),
                HoloStatus::NullArgument
            );
            // A flat "curve" is rejected as not immersed.
            let coeffs = [1e-12f64, 0.0];
            assert_eq!(holo_trigpoly_new(0.0, coeffs.as_ptr(), 1, &mut poly), HoloStatus::Ok);
            let mut curve = ptr::null_mut();
            assert_eq!(holo_curve_holonomic(poly, &mut curve), HoloStatus::NotImmersed);
            holo_trigpoly_free(poly);
            holo_trigpoly_free(ptr::null_mut()); // NULL free is a no-op
            holo_string_free(ptr::null_mut());
        }
    }
}
