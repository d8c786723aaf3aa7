//! Shifted integer grids `N_a = {a, a+1, ...}` and the discrete fractional
//! sum and difference operators defined on them.
//!
//! Both operators are finite weighted sums, so each one is also available as
//! an explicit coefficient matrix. The matrices do not depend on the grid
//! offset, only on the order and the number of points.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::specfun::{falling_power, gamma};

/// A finite prefix `{offset, offset+1, ..., offset+len-1}` of `N_offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedGrid {
    offset: f64,
    len: usize,
}

impl ShiftedGrid {
    pub fn new(offset: f64, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Length("a grid needs at least one point".into()));
        }
        if !offset.is_finite() {
            return Err(Error::Domain(format!(
                "grid offset must be finite, got {offset}"
            )));
        }
        Ok(Self { offset, len })
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The `k`-th grid point, `offset + k`.
    pub fn point(&self, k: usize) -> f64 {
        self.offset + k as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|k| self.point(k))
    }
}

/// Real values attached to each point of a [`ShiftedGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: ShiftedGrid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(offset: f64, values: Vec<f64>) -> Result<Self> {
        let grid = ShiftedGrid::new(offset, values.len())?;
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: ShiftedGrid, f: impl FnMut(f64) -> f64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: ShiftedGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn grid(&self) -> ShiftedGrid {
        self.grid
    }

    pub fn offset(&self) -> f64 {
        self.grid.offset
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `(point, value)` pairs in grid order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.points().zip(self.values.iter().copied())
    }

    /// Supremum norm.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Standard `n`-th forward difference. The result keeps the offset and loses `n` points.
pub fn forward_diff(f: &GridFunction, n: usize) -> Result<GridFunction> {
    if n == 0 {
        return Ok(f.clone());
    }
    if f.len() < n + 1 {
        return Err(Error::Length(format!(
            "forward difference of order {n} needs at least {} points, got {}",
            n + 1,
            f.len()
        )));
    }
    let weights: Vec<f64> = (0..=n)
        .map(|j| {
            let sign = if (n - j).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * binomial(n, j)
        })
        .collect();
    let values = (0..f.len() - n)
        .map(|i| {
            weights
                .iter()
                .enumerate()
                .map(|(j, w)| w * f.values[i + j])
                .sum()
        })
        .collect();
    GridFunction::new(f.offset(), values)
}

/// Coefficient of `f(a+k)` in `(Δ^{-ν} f)(a+ν+m)`, for `k ≤ m`.
///
/// Order zero is the identity map.
fn frac_sum_weight(nu: f64, m: usize, k: usize) -> Result<f64> {
    if nu == 0.0 {
        return Ok(if m == k { 1.0 } else { 0.0 });
    }
    // t - s - 1 with t = a+ν+m and s = a+k
    let x = nu + (m - k) as f64 - 1.0;
    Ok(falling_power(x, nu - 1.0)? / gamma(nu)?)
}

fn check_sum_order(nu: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!(
            "fractional sum order must be nonnegative, got {nu}"
        )));
    }
    Ok(())
}

/// Lower-triangular `len × len` matrix of the fractional sum of order `nu`.
///
/// Row `m` gives the output at `a+ν+m`, column `k` the input at `a+k`.
pub fn frac_sum_matrix(nu: f64, len: usize) -> Result<DMatrix<f64>> {
    check_sum_order(nu)?;
    let mut out = DMatrix::zeros(len, len);
    // Weights depend only on m - k.
    let diagonals = (0..len)
        .map(|d| frac_sum_weight(nu, d, 0))
        .collect::<Result<Vec<_>>>()?;
    for m in 0..len {
        for k in 0..=m {
            out[(m, k)] = diagonals[m - k];
        }
    }
    Ok(out)
}

/// `(len - n) × len` matrix of the `n`-th forward difference.
pub fn forward_diff_matrix(n: usize, len: usize) -> Result<DMatrix<f64>> {
    if len < n + 1 {
        return Err(Error::Length(format!(
            "forward difference of order {n} needs at least {} points, got {len}",
            n + 1
        )));
    }
    let mut out = DMatrix::zeros(len - n, len);
    for i in 0..len - n {
        for j in 0..=n {
            let sign = if (n - j).is_multiple_of(2) { 1.0 } else { -1.0 };
            out[(i, i + j)] = sign * binomial(n, j);
        }
    }
    Ok(out)
}

/// Integer order `n = ⌈α⌉` used by the fractional difference; `α = n` is allowed.
pub fn difference_order(alpha: f64) -> Result<usize> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::Domain(format!(
            "fractional difference order must lie in (0, 2], got {alpha}"
        )));
    }
    Ok(alpha.ceil() as usize)
}

/// `(len - n) × len` matrix of the fractional difference of order `alpha`.
pub fn frac_diff_matrix(alpha: f64, len: usize) -> Result<DMatrix<f64>> {
    let n = difference_order(alpha)?;
    let diff = forward_diff_matrix(n, len)?;
    let sum = frac_sum_matrix(n as f64 - alpha, len)?;
    Ok(diff * sum)
}

/// Discrete fractional sum of order `nu > 0`.
///
/// The input lives on `N_a`; the output lives on `N_{a+ν}` and has the same
/// number of points, the value at `a+ν+m` using inputs `a, ..., a+m`.
pub fn frac_sum(f: &GridFunction, nu: f64) -> Result<GridFunction> {
    if !(nu > 0.0) {
        return Err(Error::Domain(format!(
            "fractional sum order must be positive, got {nu}"
        )));
    }
    frac_sum_any_order(f, nu)
}

fn frac_sum_any_order(f: &GridFunction, nu: f64) -> Result<GridFunction> {
    check_sum_order(nu)?;
    let len = f.len();
    let weights = (0..len)
        .map(|d| frac_sum_weight(nu, d, 0))
        .collect::<Result<Vec<_>>>()?;
    let values = (0..len)
        .map(|m| (0..=m).map(|k| weights[m - k] * f.values[k]).sum())
        .collect();
    GridFunction::new(f.offset() + nu, values)
}

/// Discrete fractional difference `Δ^α f = Δ^n Δ^{-(n-α)} f` with `n = ⌈α⌉`, `α ∈ (0, 2]`.
///
/// Output lives on `N_{a+n-α}` with `len - n` points.
pub fn frac_diff(f: &GridFunction, alpha: f64) -> Result<GridFunction> {
    let n = difference_order(alpha)?;
    if f.len() < n + 1 {
        return Err(Error::Length(format!(
            "fractional difference of order {alpha} needs at least {} points, got {}",
            n + 1,
            f.len()
        )));
    }
    let summed = frac_sum_any_order(f, n as f64 - alpha)?;
    forward_diff(&summed, n)
}
