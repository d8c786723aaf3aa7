//! Fixed-point solution of the nonlinear problem through the summation
//! operator `(Ty)(t) = Σ_s G(t,s) q(s+α-1) f(y(s+α-1))`, plus a direct
//! linear-system oracle and residual evaluation.
//!
//! Solutions live on `N_{α-2}` with `b+4` points: the two boundary points
//! `α-2` and `α+b+1` and the interior `t = α-1+k`, `k = 0..=b+1`, stored at
//! index `k+1`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fracops::{frac_diff, frac_diff_matrix, GridFunction, ShiftedGrid};
use crate::green::{check_b, green_table, ConeWindow, FracOrder, GreenTable};
use crate::linalg::solve_dense;

const OFFSET_TOL: f64 = 1e-12;

/// A fully specified boundary value problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub alpha: FracOrder,
    pub b: usize,
    /// Load `q`, in the variable `t`.
    pub q: Expr,
    /// Nonlinearity `f`, in the variable `y`.
    pub f: Expr,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
}

impl ProblemSpec {
    pub fn new(alpha: f64, b: usize, q: &str, f: &str) -> Result<Self> {
        let alpha = FracOrder::new(alpha)?;
        check_b(b)?;
        Ok(Self {
            alpha,
            b,
            q: Expr::parse(q, "t")?,
            f: Expr::parse(f, "y")?,
            r1: None,
            r2: None,
        })
    }

    /// Attaches the radii of the existence shell, `0 < r1 < r2`.
    pub fn with_radii(mut self, r1: f64, r2: f64) -> Result<Self> {
        check_radii(r1, r2)?;
        self.r1 = Some(r1);
        self.r2 = Some(r2);
        Ok(self)
    }

    /// `N_{α-2}` with `b+4` points.
    pub fn solution_grid(&self) -> ShiftedGrid {
        ShiftedGrid::new(self.alpha.get() - 2.0, self.b + 4).expect("b + 4 > 0")
    }

    /// Interior points `s + α - 1`, `s = 0..=b+1`.
    pub fn load_grid(&self) -> ShiftedGrid {
        ShiftedGrid::new(self.alpha.get() - 1.0, self.b + 2).expect("b + 2 > 0")
    }

    /// `q(s+α-1)` for `s = 0..=b+1`.
    pub fn q_values(&self) -> Result<Vec<f64>> {
        self.load_grid()
            .points()
            .enumerate()
            .map(|(s, t)| {
                self.q
                    .eval(t)
                    .map_err(|e| Error::Eval(format!("q at s = {s} (t = {t}): {e}")))
            })
            .collect()
    }

    fn check_solution_grid(&self, y: &GridFunction) -> Result<()> {
        if y.len() != self.b + 4 {
            return Err(Error::Length(format!(
                "expected {} solution values, got {}",
                self.b + 4,
                y.len()
            )));
        }
        if (y.offset() - (self.alpha.get() - 2.0)).abs() > OFFSET_TOL {
            return Err(Error::Domain(format!(
                "solution grid must start at alpha - 2 = {}, got {}",
                self.alpha.get() - 2.0,
                y.offset()
            )));
        }
        Ok(())
    }
}

pub(crate) fn check_radii(r1: f64, r2: f64) -> Result<()> {
    if !(r1 > 0.0 && r2 > r1 && r2.is_finite()) {
        return Err(Error::Domain(format!(
            "radii must satisfy 0 < r1 < r2, got r1 = {r1}, r2 = {r2}"
        )));
    }
    Ok(())
}

/// `T` with the Green table and the load values precomputed.
#[derive(Debug, Clone)]
pub struct SummationOperator<'p> {
    problem: &'p ProblemSpec,
    table: GreenTable,
    q: Vec<f64>,
}

impl<'p> SummationOperator<'p> {
    pub fn new(problem: &'p ProblemSpec) -> Result<Self> {
        Ok(Self {
            problem,
            table: green_table(problem.alpha, problem.b)?,
            q: problem.q_values()?,
        })
    }

    pub fn table(&self) -> &GreenTable {
        &self.table
    }

    pub fn q_values(&self) -> &[f64] {
        &self.q
    }

    /// `Ty`; both boundary values of the result are exactly zero.
    pub fn apply(&self, y: &GridFunction) -> Result<GridFunction> {
        self.problem.check_solution_grid(y)?;
        let n = self.table.size();
        let loads = (0..n)
            .map(|s| {
                let ys = y.values()[s + 1];
                let fy = self
                    .problem
                    .f
                    .eval(ys)
                    .map_err(|e| Error::Eval(format!("f at s = {s} (y = {ys}): {e}")))?;
                Ok(self.q[s] * fy)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(green_sum(&self.table, &loads))
    }
}

/// `Σ_s G(t,s) h_s` on the full solution grid, boundaries set to zero.
pub fn green_sum(table: &GreenTable, loads: &[f64]) -> GridFunction {
    let n = table.size();
    let mut values = vec![0.0; n + 2];
    for (k, out) in values[1..=n].iter_mut().enumerate() {
        *out = table.row(k).iter().zip(loads).map(|(g, h)| g * h).sum();
    }
    GridFunction::new(table.alpha().get() - 2.0, values).expect("nonempty grid")
}

/// One application of `T`.
pub fn apply_t(problem: &ProblemSpec, y: &GridFunction) -> Result<GridFunction> {
    SummationOperator::new(problem)?.apply(y)
}

#[derive(Debug, Clone)]
pub struct PicardOptions {
    /// Stop once the sup-norm of successive iterates differs by less than this.
    pub tol: f64,
    pub max_iter: usize,
    /// Relaxation `θ ∈ (0, 1]`: `y ← (1-θ) y + θ Ty`.
    pub damping: f64,
    /// Starting guess; zero when absent.
    pub y0: Option<GridFunction>,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100_000,
            damping: 1.0,
            y0: None,
        }
    }
}

impl PicardOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::Domain(format!(
                "damping must be in (0,1], got {}",
                self.damping
            )));
        }
        Ok(())
    }
}

/// Infinite sequence of (damped) Picard iterates, starting after `y0`.
pub struct PicardIterates<'p> {
    op: SummationOperator<'p>,
    current: GridFunction,
    damping: f64,
    iteration: usize,
}

impl<'p> PicardIterates<'p> {
    pub fn new(problem: &'p ProblemSpec, options: &PicardOptions) -> Result<Self> {
        options.validate()?;
        let current = match &options.y0 {
            Some(y0) => {
                problem.check_solution_grid(y0)?;
                y0.clone()
            }
            None => GridFunction::zeros(problem.solution_grid()),
        };
        Ok(Self {
            op: SummationOperator::new(problem)?,
            current,
            damping: options.damping,
            iteration: 0,
        })
    }

    pub fn current(&self) -> &GridFunction {
        &self.current
    }
}

impl Iterator for PicardIterates<'_> {
    type Item = Result<GridFunction>;

    fn next(&mut self) -> Option<Self::Item> {
        self.iteration += 1;
        let mut next = match self.op.apply(&self.current) {
            Ok(v) => v,
            Err(e) => return Some(Err(e)),
        };
        if self.damping < 1.0 {
            let theta = self.damping;
            for (n, c) in next.values_mut().iter_mut().zip(self.current.values()) {
                *n = (1.0 - theta) * c + theta * *n;
            }
        }
        if next.values().iter().any(|v| !v.is_finite()) {
            return Some(Err(Error::NonFinite {
                iteration: self.iteration,
            }));
        }
        self.current = next.clone();
        Some(Ok(next))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Solution {
    /// Values on `N_{α-2}`, boundaries included.
    #[serde(skip)]
    pub y: GridFunction,
    /// Maximum of `y` over the interior.
    pub eta: f64,
    pub residual_sup: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl Solution {
    /// Interior values `y(α-1+k)`, `k = 0..=b+1`.
    pub fn interior(&self) -> &[f64] {
        let v = self.y.values();
        &v[1..v.len() - 1]
    }

    pub fn norm(&self) -> f64 {
        self.y.sup_norm()
    }
}

/// Picard iteration `y ← Ty` until successive iterates agree to `tol`.
///
/// Running out of iterations is not an error: the result carries `converged = false`.
pub fn solve_picard(problem: &ProblemSpec, options: &PicardOptions) -> Result<Solution> {
    let mut iterates = PicardIterates::new(problem, options)?;
    let mut previous = iterates.current().clone();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < options.max_iter {
        let next = iterates.next().expect("iterator is infinite")?;
        iterations += 1;
        let change = next
            .values()
            .iter()
            .zip(previous.values())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        previous = next;
        if change < options.tol {
            converged = true;
            break;
        }
    }
    let residual_sup = residual(problem, &previous)?;
    let eta = interior_max(&previous);
    Ok(Solution {
        y: previous,
        eta,
        residual_sup,
        iterations,
        converged,
    })
}

fn interior_max(y: &GridFunction) -> f64 {
    let v = y.values();
    v[1..v.len() - 1]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Solves `Δ^α y(t) = -h(t+α-1)`, `t = 0..=b+1`, with zero boundary values,
/// by assembling the `(b+4) × (b+4)` system from the fractional-difference
/// coefficient matrix and eliminating densely.
///
/// `h` holds the loads on `N_{α-1}` (`b+2` points).
pub fn solve_linear_direct(alpha: FracOrder, b: usize, h: &GridFunction) -> Result<GridFunction> {
    check_b(b)?;
    if h.len() != b + 2 {
        return Err(Error::Length(format!(
            "expected {} load values, got {}",
            b + 2,
            h.len()
        )));
    }
    if (h.offset() - (alpha.get() - 1.0)).abs() > OFFSET_TOL {
        return Err(Error::Domain(format!(
            "load grid must start at alpha - 1 = {}, got {}",
            alpha.get() - 1.0,
            h.offset()
        )));
    }
    let (system, rhs) = assemble_system(alpha, b, h.values())?;
    let y = solve_dense(&system, &rhs)?;
    GridFunction::new(alpha.get() - 2.0, y.iter().copied().collect())
}

fn assemble_system(
    alpha: FracOrder,
    b: usize,
    loads: &[f64],
) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let n = b + 4;
    let diff = frac_diff_matrix(alpha.get(), n)?;
    debug_assert_eq!(diff.nrows(), b + 2);
    let mut system = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);
    system[(0, 0)] = 1.0;
    for t in 0..b + 2 {
        system.row_mut(t + 1).copy_from(&diff.row(t));
        rhs[t + 1] = -loads[t];
    }
    system[(n - 1, n - 1)] = 1.0;
    Ok((system, rhs))
}

/// Per-point residual `Δ^α y(t) + q(t+α-1) f(y(t+α-1))`, `t = 0..=b+1`.
pub fn residual_terms(problem: &ProblemSpec, y: &GridFunction) -> Result<Vec<f64>> {
    problem.check_solution_grid(y)?;
    let diff = frac_diff(y, problem.alpha.get())?;
    let q = problem.q_values()?;
    diff.values()
        .iter()
        .enumerate()
        .map(|(t, d)| {
            let yt = y.values()[t + 1];
            let fy = problem
                .f
                .eval(yt)
                .map_err(|e| Error::Eval(format!("f at t = {t} (y = {yt}): {e}")))?;
            Ok(d + q[t] * fy)
        })
        .collect()
}

/// Sup-norm of [`residual_terms`].
pub fn residual(problem: &ProblemSpec, y: &GridFunction) -> Result<f64> {
    Ok(residual_terms(problem, y)?
        .into_iter()
        .fold(0.0_f64, |m, r| m.max(r.abs())))
}

/// Membership in the cone `{y ≥ 0 : min_window y ≥ λ ||y||}`.
///
/// `y` is a full solution-grid function (`b+4` points).
pub fn cone_check(y: &GridFunction, lambda: f64, window: &ConeWindow) -> Result<bool> {
    window.require_nonempty()?;
    if y.len() != window.b + 4 {
        return Err(Error::Length(format!(
            "expected {} values, got {}",
            window.b + 4,
            y.len()
        )));
    }
    let v = y.values();
    let interior = &v[1..v.len() - 1];
    if interior.iter().any(|&x| x < 0.0) {
        return Ok(false);
    }
    let norm = interior.iter().copied().fold(0.0_f64, f64::max);
    let window_min = window
        .grid_indices
        .iter()
        .map(|&k| interior[k])
        .fold(f64::INFINITY, f64::min);
    Ok(window_min >= lambda * norm)
}

/// Where a solution's norm falls relative to the existence shell `[r1, r2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormBounds {
    pub r1: f64,
    pub r2: f64,
    pub norm: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

pub fn norm_bounds(solution: &Solution, r1: f64, r2: f64) -> NormBounds {
    let norm = solution.norm();
    NormBounds {
        r1,
        r2,
        norm,
        lower_holds: norm >= r1,
        upper_holds: norm <= r2,
    }
}
