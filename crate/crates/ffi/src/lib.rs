//! C ABI over `fracbvp`.
//!
//! Every function returns an [`FbvpStatus`]; results go through out-pointers.
//! On failure, [`fbvp_last_error_message`] describes the most recent error on
//! the calling thread. Handles are opaque and must be released with their
//! matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fracbvp::green::{self, FracOrder, GreenTable};
use fracbvp::lyapunov::{self, CertifyMode, Variant};
use fracbvp::solver::{self, PicardOptions, ProblemSpec, Solution};
use fracbvp::specfun;
use fracbvp::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbvpStatus {
    Ok = 0,
    /// A required pointer was null or a string was not UTF-8.
    NullOrInvalidPointer = 1,
    /// An argument was outside its domain (order, length, radius, index).
    InvalidArgument = 2,
    /// An expression failed to parse.
    ParseError = 3,
    /// Evaluation or a numerical step failed.
    ComputationError = 4,
    /// Picard iteration hit its iteration limit.
    NoConvergence = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// Constant convention: `Exact` uses the stated formulas, `Paper` the published
/// example's scaling by `Γ(b+3)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbvpVariant {
    Exact = 0,
    Paper = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FbvpCertificate {
    pub lhs: f64,
    pub rhs: f64,
    /// 1 when `lhs > rhs`.
    pub satisfied: i32,
    /// 0 for even `b`, 1 for odd.
    pub odd_branch: i32,
}

pub struct FbvpGreenTable(GreenTable);
pub struct FbvpProblem(ProblemSpec);
pub struct FbvpSolution(Solution);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FbvpStatus {
    match e {
        Error::Parse { .. } | Error::UnknownIdentifier { .. } | Error::WrongVariable { .. } => {
            FbvpStatus::ParseError
        }
        Error::Domain(_)
        | Error::Length(_)
        | Error::Index(_)
        | Error::ZeroSum
        | Error::EmptyWindow => FbvpStatus::InvalidArgument,
        Error::Eval(_) | Error::Singular { .. } | Error::NonFinite { .. } | Error::Invariant(_) => {
            FbvpStatus::ComputationError
        }
    }
}

struct Fail(FbvpStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(FbvpStatus::NullOrInvalidPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> FbvpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FbvpStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal panic: {message}"));
            FbvpStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn utf8<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Fail(
            FbvpStatus::NullOrInvalidPointer,
            format!("{what} is not UTF-8"),
        )
    })
}

/// Message for the last failure on this thread; empty if none. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn fbvp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Falling factorial `x^(y) = Γ(x+1)/Γ(x-y+1)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fbvp_falling_power(x: f64, y: f64, out: *mut f64) -> FbvpStatus {
    guard(|| write(out, specfun::falling_power(x, y)?, "out"))
}

/// `G(α-1+k, s)` for `k, s ∈ 0..=b+1`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fbvp_green_value(
    alpha: f64,
    b: usize,
    k: usize,
    s: usize,
    out: *mut f64,
) -> FbvpStatus {
    guard(|| {
        write(
            out,
            green::green_value(FracOrder::new(alpha)?, b, k, s)?,
            "out",
        )
    })
}

/// Maximum of the Green's function from its closed form.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fbvp_green_max_closed_form(
    alpha: f64,
    b: usize,
    out: *mut f64,
) -> FbvpStatus {
    guard(|| {
        write(
            out,
            green::green_max_closed_form(FracOrder::new(alpha)?, b)?,
            "out",
        )
    })
}

/// Cone constant `λ`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fbvp_lambda_constant(alpha: f64, b: usize, out: *mut f64) -> FbvpStatus {
    guard(|| {
        write(
            out,
            green::lambda_constant(FracOrder::new(alpha)?, b)?,
            "out",
        )
    })
}

/// Eigenvalue exclusion radius.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fbvp_eigen_exclusion(alpha: f64, b: usize, out: *mut f64) -> FbvpStatus {
    guard(|| {
        write(
            out,
            lyapunov::eigen_exclusion(FracOrder::new(alpha)?, b)?,
            "out",
        )
    })
}

/// Builds the full `(b+2) × (b+2)` Green table.
///
/// # Safety
/// `out` must be null or valid for writes. Free the result with
/// [`fbvp_green_table_free`].
#[no_mangle]
pub unsafe extern "C" fn fbvp_green_table_new(
    alpha: f64,
    b: usize,
    out: *mut *mut FbvpGreenTable,
) -> FbvpStatus {
    guard(|| {
        let table = green::green_table(FracOrder::new(alpha)?, b)?;
        write(out, Box::into_raw(Box::new(FbvpGreenTable(table))), "out")
    })
}

/// Side length `b+2` of the table.
///
/// # Safety
/// `table` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fbvp_green_table_size(
    table: *const FbvpGreenTable,
    out: *mut usize,
) -> FbvpStatus {
    guard(|| write(out, borrow(table, "table")?.0.size(), "out"))
}

/// Entry at row `k` (point `α-1+k`) and column `s`.
///
/// # Safety
/// `table` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fbvp_green_table_get(
    table: *const FbvpGreenTable,
    k: usize,
    s: usize,
    out: *mut f64,
) -> FbvpStatus {
    guard(|| {
        let t = &borrow(table, "table")?.0;
        let n = t.size();
        if k >= n || s >= n {
            return Err(Fail(
                FbvpStatus::InvalidArgument,
                format!("index ({k}, {s}) outside a {n}x{n} table"),
            ));
        }
        write(out, t.get(k, s), "out")
    })
}

/// Releases a table. Null is ignored.
///
/// # Safety
/// `table` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fbvp_green_table_free(table: *mut FbvpGreenTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Parses a problem with load `q(t)` and nonlinearity `f(y)`.
///
/// # Safety
/// `q` and `f` must be null or NUL-terminated strings; `out` null or valid for
/// writes. Free the result with [`fbvp_problem_free`].
#[no_mangle]
pub unsafe extern "C" fn fbvp_problem_new(
    alpha: f64,
    b: usize,
    q: *const c_char,
    f: *const c_char,
    out: *mut *mut FbvpProblem,
) -> FbvpStatus {
    guard(|| {
        let spec = ProblemSpec::new(alpha, b, utf8(q, "q")?, utf8(f, "f")?)?;
        write(out, Box::into_raw(Box::new(FbvpProblem(spec))), "out")
    })
}

/// Releases a problem. Null is ignored.
///
/// # Safety
/// `problem` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fbvp_problem_free(problem: *mut FbvpProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Picard iteration from zero. `tol <= 0` or `max_iter == 0` select the defaults.
///
/// On [`FbvpStatus::NoConvergence`] the last iterate is still returned in `out`.
///
/// # Safety
/// `problem` must be null or a live handle; `out` null or valid for writes.
/// Free the result with [`fbvp_solution_free`].
#[no_mangle]
pub unsafe extern "C" fn fbvp_solve(
    problem: *const FbvpProblem,
    tol: f64,
    max_iter: usize,
    damping: f64,
    out: *mut *mut FbvpSolution,
) -> FbvpStatus {
    guard(|| {
        let p = &borrow(problem, "problem")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut options = PicardOptions::default();
        if tol > 0.0 {
            options.tol = tol;
        }
        if max_iter > 0 {
            options.max_iter = max_iter;
        }
        options.damping = damping;
        let sol = solver::solve_picard(p, &options)?;
        let converged = sol.converged;
        let iterations = sol.iterations;
        out.write(Box::into_raw(Box::new(FbvpSolution(sol))));
        if converged {
            Ok(())
        } else {
            Err(Fail(
                FbvpStatus::NoConvergence,
                format!("no convergence after {iterations} iterations"),
            ))
        }
    })
}

/// Number of grid points `b+4`, boundaries included.
///
/// # Safety
/// `solution` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fbvp_solution_len(
    solution: *const FbvpSolution,
    out: *mut usize,
) -> FbvpStatus {
    guard(|| write(out, borrow(solution, "solution")?.0.y.len(), "out"))
}

/// Copies up to `capacity` values, starting at the left boundary `α-2`.
///
/// # Safety
/// `solution` must be null or a live handle; `values` null or valid for
/// `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn fbvp_solution_values(
    solution: *const FbvpSolution,
    values: *mut f64,
    capacity: usize,
) -> FbvpStatus {
    guard(|| {
        let y = borrow(solution, "solution")?.0.y.values();
        if values.is_null() {
            return Err(null("values"));
        }
        if capacity < y.len() {
            return Err(Fail(
                FbvpStatus::InvalidArgument,
                format!("buffer holds {capacity} values, need {}", y.len()),
            ));
        }
        std::ptr::copy_nonoverlapping(y.as_ptr(), values, y.len());
        Ok(())
    })
}

/// Maximum, final residual, and iteration count. Any out-pointer may be null.
///
/// # Safety
/// `solution` must be null or a live handle; non-null out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fbvp_solution_summary(
    solution: *const FbvpSolution,
    eta: *mut f64,
    residual_sup: *mut f64,
    iterations: *mut usize,
) -> FbvpStatus {
    guard(|| {
        let s = &borrow(solution, "solution")?.0;
        if !eta.is_null() {
            eta.write(s.eta);
        }
        if !residual_sup.is_null() {
            residual_sup.write(s.residual_sup);
        }
        if !iterations.is_null() {
            iterations.write(s.iterations);
        }
        Ok(())
    })
}

/// Releases a solution. Null is ignored.
///
/// # Safety
/// `solution` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fbvp_solution_free(solution: *mut FbvpSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

fn certificate(c: lyapunov::Certificate) -> FbvpCertificate {
    FbvpCertificate {
        lhs: c.lhs,
        rhs: c.rhs,
        satisfied: c.satisfied as i32,
        odd_branch: matches!(c.branch, green::Parity::Odd) as i32,
    }
}

fn variant(v: FbvpVariant) -> Variant {
    match v {
        FbvpVariant::Exact => Variant::Exact,
        FbvpVariant::Paper => Variant::Paper,
    }
}

/// Inequality every nontrivial solution with maximum `eta` satisfies.
///
/// # Safety
/// `problem` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fbvp_certify_nontrivial(
    problem: *const FbvpProblem,
    eta: f64,
    which: FbvpVariant,
    out: *mut FbvpCertificate,
) -> FbvpStatus {
    guard(|| {
        let p = &borrow(problem, "problem")?.0;
        let c = lyapunov::certify(p, CertifyMode::NontrivialSolution { eta }, variant(which))?;
        write(out, certificate(c), "out")
    })
}

/// Inequality implied by the existence shell `[r1, r2]`. `gamma <= 0`
/// selects the variant's default constant.
///
/// # Safety
/// `problem` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fbvp_certify_shell(
    problem: *const FbvpProblem,
    r1: f64,
    r2: f64,
    gamma: f64,
    which: FbvpVariant,
    out: *mut FbvpCertificate,
) -> FbvpStatus {
    guard(|| {
        let p = &borrow(problem, "problem")?.0;
        let mode = CertifyMode::ExistenceShell {
            r1,
            r2,
            gamma: (gamma > 0.0).then_some(gamma),
        };
        let c = lyapunov::certify(p, mode, variant(which))?;
        write(out, certificate(c), "out")
    })
}
