//! C ABI over the annealed Ising library: flat structs for the limit
//! quantities, an opaque handle for g-tables, and integer status codes.
//!
//! Every function returns an `AiStatus`; outputs go through pointers that
//! must be non-null. No function panics across the boundary.

use std::panic::{catch_unwind, AssertUnwindSafe};

use annealed_ising::error::Error;
use annealed_ising::finite::{finite_thermo, SpinCountLaw};
use annealed_ising::gtable::GTable;
use annealed_ising::params::ModelParams;
use annealed_ising::quenched::quenched_pressure;
use annealed_ising::regular::{critical_beta, pressure};

/// Status codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AiStatus {
    Ok = 0,
    /// An argument was outside the domain of the operation.
    DomainError = 1,
    /// A bracketed solve found no sign change.
    BracketError = 2,
    /// An iterative scheme failed to converge.
    NumericalError = 3,
    /// A required pointer was null.
    NullPointer = 4,
    /// Internal panic caught at the boundary.
    Panic = 5,
}

fn status_of(e: &Error) -> AiStatus {
    match e {
        Error::Domain(_) => AiStatus::DomainError,
        Error::Bracket { .. } => AiStatus::BracketError,
        Error::Numerical(_) => AiStatus::NumericalError,
    }
}

fn guarded<F: FnOnce() -> AiStatus>(f: F) -> AiStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(AiStatus::Panic)
}

/// Thermodynamic-limit quantities at one parameter point.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AiThermoResult {
    pub psi: f64,
    pub t_star: f64,
    pub magnetization: f64,
    pub chi: f64,
    /// 1 when the point lies in the region where the limit theorems hold.
    pub in_u: i32,
}

/// Finite-n quantities.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AiFiniteResult {
    pub psi_n: f64,
    pub m_n: f64,
    pub chi_n: f64,
}

/// Opaque g-table handle; create with `ai_gtable_new`, release with
/// `ai_gtable_free`.
pub struct AiGTable {
    inner: GTable,
}

/// Limit pressure, maximizer, magnetization and susceptibility for the
/// d-regular model.
#[no_mangle]
pub extern "C" fn ai_pressure(beta: f64, b: f64, d: u32, out: *mut AiThermoResult) -> AiStatus {
    if out.is_null() {
        return AiStatus::NullPointer;
    }
    guarded(|| match ModelParams::new(beta, b, d).and_then(|p| pressure(&p)) {
        Ok(r) => {
            unsafe {
                *out = AiThermoResult {
                    psi: r.psi,
                    t_star: r.t_star,
                    magnetization: r.magnetization,
                    chi: r.chi,
                    in_u: r.in_u as i32,
                };
            }
            AiStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Critical inverse temperature atanh(1/(d-1)); +inf for d = 2.
#[no_mangle]
pub extern "C" fn ai_critical_beta(d: u32, out: *mut f64) -> AiStatus {
    if out.is_null() {
        return AiStatus::NullPointer;
    }
    guarded(|| match critical_beta(d) {
        Ok(v) => {
            unsafe { *out = v };
            AiStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Quenched pressure via the tree fixed point.
#[no_mangle]
pub extern "C" fn ai_quenched_pressure(beta: f64, b: f64, d: u32, out: *mut f64) -> AiStatus {
    if out.is_null() {
        return AiStatus::NullPointer;
    }
    guarded(
        || match ModelParams::new(beta, b, d).and_then(|p| quenched_pressure(&p)) {
            Ok(r) => {
                unsafe { *out = r.psi_tilde };
                AiStatus::Ok
            }
            Err(e) => status_of(&e),
        },
    )
}

/// Exact finite-n pressure, magnetization and susceptibility.
#[no_mangle]
pub extern "C" fn ai_finite_thermo(
    n: usize,
    beta: f64,
    b: f64,
    d: u32,
    out: *mut AiFiniteResult,
) -> AiStatus {
    if out.is_null() {
        return AiStatus::NullPointer;
    }
    guarded(
        || match ModelParams::new(beta, b, d).and_then(|p| SpinCountLaw::build(n, &p)) {
            Ok(law) => {
                let t = finite_thermo(&law);
                unsafe {
                    *out = AiFiniteResult { psi_n: t.psi_n, m_n: t.m_n, chi_n: t.chi_n };
                }
                AiStatus::Ok
            }
            Err(e) => status_of(&e),
        },
    )
}

/// Builds a g-table for (beta, m); the handle must be freed by the caller.
#[no_mangle]
pub extern "C" fn ai_gtable_new(beta: f64, m: usize, out: *mut *mut AiGTable) -> AiStatus {
    if out.is_null() {
        return AiStatus::NullPointer;
    }
    guarded(|| match GTable::build(beta, m) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(AiGTable { inner })) };
            AiStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// log g(beta, k, m) from a handle; k > m is a domain error.
#[no_mangle]
pub extern "C" fn ai_gtable_log_g(table: *const AiGTable, k: usize, out: *mut f64) -> AiStatus {
    if table.is_null() || out.is_null() {
        return AiStatus::NullPointer;
    }
    guarded(|| {
        let t = unsafe { &*table };
        if k > t.inner.m() {
            return AiStatus::DomainError;
        }
        unsafe { *out = t.inner.log_g(k) };
        AiStatus::Ok
    })
}

/// Releases a handle from `ai_gtable_new`. Null is a no-op.
#[no_mangle]
pub extern "C" fn ai_gtable_free(table: *mut AiGTable) {
    if !table.is_null() {
        drop(unsafe { Box::from_raw(table) });
    }
}
