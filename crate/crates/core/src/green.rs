//! Green's function of the two-point problem
//! `Δ^α y(t) + h(t+α-1) = 0`, `y(α-2) = y(α+b+1) = 0`, together with its
//! extremal constants.
//!
//! Rows are indexed by `k` with `t = α-1+k`, `k = 0..=b+1`; columns by the
//! integer `s = 0..=b+1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{falling_power, gamma, ln_gamma};

/// Slack used when intersecting real window bounds with the integer grid.
const WINDOW_EPS: f64 = 1e-9;

/// Fractional order `α ∈ (1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 1.0 && alpha <= 2.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::Domain(format!(
                "alpha must be in (1,2], got {alpha}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Validates the problem length `b ≥ 2`.
pub fn check_b(b: usize) -> Result<()> {
    if b < 2 {
        return Err(Error::Domain(format!("b must be an integer >= 2, got {b}")));
    }
    Ok(())
}

/// Which side of the even/odd split a closed-form constant came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(b: usize) -> Self {
        if b.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// `G(α-1+k, s)` for any `k ∈ -1..=b+2`; the two outermost rows are the
/// boundary points and vanish.
fn kernel(alpha: f64, b: usize, k: i64, s: usize) -> Result<f64> {
    let t = alpha - 1.0 + k as f64;
    let b = b as f64;
    let s_f = s as f64;
    let order = alpha - 1.0;
    let mut value = falling_power(t, order)? * falling_power(alpha + b - s_f, order)?
        / falling_power(alpha + b + 1.0, order)?;
    // s < t - α + 1  ⇔  s ≤ k - 1
    if (s as i64) < k {
        value -= falling_power(t - s_f - 1.0, order)?;
    }
    Ok(value / gamma(alpha)?)
}

/// One entry of the Green's function, row `k` (`t = α-1+k`) and column `s`.
pub fn green_value(alpha: FracOrder, b: usize, k: usize, s: usize) -> Result<f64> {
    check_b(b)?;
    if k > b + 1 || s > b + 1 {
        return Err(Error::Index(format!(
            "green_value({k}, {s}) out of range 0..={}",
            b + 1
        )));
    }
    kernel(alpha.get(), b, k as i64, s)
}

/// Boundary row of the Green's function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryRow {
    /// `t = α - 2`
    Left,
    /// `t = α + b + 1`
    Right,
}

/// The Green's function evaluated on a boundary row, for every `s = 0..=b+1`.
///
/// The left row is exactly zero; the right row is zero up to rounding.
pub fn green_boundary_row(alpha: FracOrder, b: usize, row: BoundaryRow) -> Result<Vec<f64>> {
    check_b(b)?;
    let k = match row {
        BoundaryRow::Left => -1,
        BoundaryRow::Right => b as i64 + 2,
    };
    (0..=b + 1).map(|s| kernel(alpha.get(), b, k, s)).collect()
}

/// Interior rows `t ∈ [α-1, α+b]` lying inside `[(b+α)/4, 3(b+α)/4]`, plus
/// the integer summation range `s ∈ [(b+α)/4, 3(b+α)/4]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeWindow {
    pub b: usize,
    pub lower: f64,
    pub upper: f64,
    /// Row indices `k` (with `t = α-1+k`) inside the window.
    pub grid_indices: Vec<usize>,
    /// Integer `s` inside the window, clipped to `0..=b+1`.
    pub sum_indices: Vec<usize>,
}

impl ConeWindow {
    pub fn new(alpha: FracOrder, b: usize) -> Result<Self> {
        check_b(b)?;
        let a = alpha.get();
        let lower = (b as f64 + a) / 4.0;
        let upper = 3.0 * (b as f64 + a) / 4.0;
        let clip = |lo: f64, hi: f64| -> Vec<usize> {
            let lo = (lo - WINDOW_EPS).ceil().max(0.0) as usize;
            let hi = (hi + WINDOW_EPS).floor();
            if hi < 0.0 {
                return Vec::new();
            }
            let hi = (hi as usize).min(b + 1);
            (lo..=hi).collect()
        };
        Ok(Self {
            b,
            lower,
            upper,
            grid_indices: clip(lower - (a - 1.0), upper - (a - 1.0)),
            sum_indices: clip(lower, upper),
        })
    }

    pub fn require_nonempty(&self) -> Result<()> {
        if self.grid_indices.is_empty() {
            Err(Error::EmptyWindow)
        } else {
            Ok(())
        }
    }
}

/// Dense `(b+2) × (b+2)` table of Green's function values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreenTable {
    alpha: FracOrder,
    b: usize,
    /// Row-major, `values[k * (b+2) + s]`.
    values: Vec<f64>,
}

impl GreenTable {
    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// Number of rows (and columns), `b + 2`.
    pub fn size(&self) -> usize {
        self.b + 2
    }

    /// Grid point `t` of row `k`.
    pub fn row_point(&self, k: usize) -> f64 {
        self.alpha.get() - 1.0 + k as f64
    }

    pub fn get(&self, k: usize, s: usize) -> f64 {
        self.values[k * self.size() + s]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        let n = self.size();
        &self.values[k * n..(k + 1) * n]
    }

    pub fn column(&self, s: usize) -> Vec<f64> {
        (0..self.size()).map(|k| self.get(k, s)).collect()
    }

    /// `G(s+α-1, s)` for every `s`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.size()).map(|s| self.get(s, s)).collect()
    }

    /// Largest entry and its `(k, s)` location.
    pub fn max_entry(&self) -> (f64, usize, usize) {
        let n = self.size();
        self.values
            .iter()
            .enumerate()
            .fold((f64::NEG_INFINITY, 0, 0), |best, (i, &v)| {
                if v > best.0 {
                    (v, i / n, i % n)
                } else {
                    best
                }
            })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    fn check_invariants(&self) -> Result<()> {
        let n = self.size();
        let (max, _, _) = self.max_entry();
        let margin = 1e-12 * max;
        for k in 0..n {
            for s in 0..n {
                let v = self.get(k, s);
                if !(v > 0.0) {
                    return Err(Error::Invariant(format!(
                        "G[{k}][{s}] = {v} is not positive"
                    )));
                }
            }
        }
        for s in 0..n {
            let peak = self.get(s, s);
            if let Some(k) = (0..n).find(|&k| k != s && self.get(k, s) >= peak - margin) {
                return Err(Error::Invariant(format!(
                    "column {s}: row {k} ({}) is not below the diagonal value {peak}",
                    self.get(k, s)
                )));
            }
        }
        Ok(())
    }
}

/// Builds the full Green table and checks positivity and the diagonal column maxima.
pub fn green_table(alpha: FracOrder, b: usize) -> Result<GreenTable> {
    check_b(b)?;
    let n = b + 2;
    let mut values = Vec::with_capacity(n * n);
    for k in 0..n {
        for s in 0..n {
            values.push(kernel(alpha.get(), b, k as i64, s)?);
        }
    }
    let table = GreenTable { alpha, b, values };
    table.check_invariants()?;
    Ok(table)
}

/// Closed-form maximum of the diagonal `G(s+α-1, s)` over `s`.
pub fn green_max_closed_form(alpha: FracOrder, b: usize) -> Result<f64> {
    check_b(b)?;
    let a = alpha.get();
    let bf = b as f64;
    let ln = match Parity::of(b) {
        Parity::Even => {
            (0.25 * (bf + 2.0 * a) * (bf + 2.0)).ln()
                + 2.0 * ln_gamma(bf / 2.0 + a)?
                + ln_gamma(bf + 3.0)?
                - ln_gamma(a)?
                - ln_gamma(bf + a + 2.0)?
                - 2.0 * ln_gamma(bf / 2.0 + 2.0)?
        }
        Parity::Odd => {
            ln_gamma(bf + 3.0)? + 2.0 * ln_gamma((bf + 1.0) / 2.0 + a)?
                - ln_gamma(a)?
                - ln_gamma(bf + a + 2.0)?
                - 2.0 * ln_gamma((bf + 3.0) / 2.0)?
        }
    };
    Ok(ln.exp())
}

/// Cone constant: the largest `λ` with
/// `min_{t in window} G(t,s) ≥ λ G(s+α-1, s)` for every `s = 1..=b+1`.
pub fn lambda_constant(alpha: FracOrder, b: usize) -> Result<f64> {
    let table = green_table(alpha, b)?;
    let window = ConeWindow::new(alpha, b)?;
    lambda_from_table(&table, &window)
}

pub(crate) fn lambda_from_table(table: &GreenTable, window: &ConeWindow) -> Result<f64> {
    window.require_nonempty()?;
    let lambda = (1..table.size())
        .map(|s| {
            let window_min = window
                .grid_indices
                .iter()
                .map(|&k| table.get(k, s))
                .fold(f64::INFINITY, f64::min);
            window_min / table.get(s, s)
        })
        .fold(f64::INFINITY, f64::min);
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Invariant(format!(
            "lambda = {lambda} is not in (0,1)"
        )));
    }
    Ok(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn frac_order_range() {
        assert!(FracOrder::new(1.0).is_err());
        assert!(FracOrder::new(2.5).is_err());
        assert!(FracOrder::new(f64::NAN).is_err());
        assert!(FracOrder::new(2.0).is_ok());
        assert!(FracOrder::new(1.0001).is_ok());
    }

    #[test]
    fn corner_entry() {
        let g = green_value(order(1.5), 3, 0, 0).unwrap();
        assert!((g - 10.0 / 11.0).abs() < 1e-13);
    }

    #[test]
    fn index_errors() {
        assert!(matches!(
            green_value(order(1.5), 3, 5, 0),
            Err(Error::Index(_))
        ));
        assert!(matches!(
            green_value(order(1.5), 3, 0, 5),
            Err(Error::Index(_))
        ));
        assert!(matches!(
            green_value(order(1.5), 1, 0, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn boundary_rows_vanish() {
        for a in [1.1, 1.5, 2.0] {
            for b in 2..9 {
                let left = green_boundary_row(order(a), b, BoundaryRow::Left).unwrap();
                assert!(left.iter().all(|&v| v == 0.0));
                let right = green_boundary_row(order(a), b, BoundaryRow::Right).unwrap();
                assert!(right.iter().all(|&v| v.abs() < 1e-12), "{a} {b}: {right:?}");
            }
        }
    }

    #[test]
    fn branches_agree_on_the_diagonal() {
        // At s = k the subtracted term is (α-2)^[α-1] = 0.
        let a = 1.5;
        let sub = falling_power(a - 2.0, a - 1.0).unwrap();
        assert_eq!(sub, 0.0);
    }

    #[test]
    fn closed_form_max_odd_b() {
        let m = green_max_closed_form(order(1.5), 3).unwrap();
        assert!((m - 1.2987012987012987).abs() < 1e-12);
        let table = green_table(order(1.5), 3).unwrap();
        let diag_max = table.diagonal().into_iter().fold(0.0, f64::max);
        assert!((m - diag_max).abs() <= 1e-10 * m);
    }

    #[test]
    fn closed_form_max_even_b() {
        let m = green_max_closed_form(order(1.5), 2).unwrap();
        let table = green_table(order(1.5), 2).unwrap();
        let diag_max = table.diagonal().into_iter().fold(0.0, f64::max);
        assert!((m - diag_max).abs() <= 1e-10 * m);
        assert!((m - 8.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn table_shape_and_max() {
        let table = green_table(order(1.5), 3).unwrap();
        assert_eq!(table.size(), 5);
        assert_eq!(table.row_point(0), 0.5);
        let (max, k, s) = table.max_entry();
        assert_eq!((k, s), (2, 2));
        assert!((max - 1.2987012987012987).abs() < 1e-12);
    }

    #[test]
    fn window_for_example_problem() {
        let w = ConeWindow::new(order(1.5), 3).unwrap();
        assert_eq!(w.lower, 1.125);
        assert_eq!(w.upper, 3.375);
        assert_eq!(w.grid_indices, vec![1, 2]); // t = 1.5, 2.5
        assert_eq!(w.sum_indices, vec![2, 3]);
    }

    #[test]
    fn window_hits_exact_endpoints() {
        // α = 2, b = 2: window [1, 3] on N_1 contains t = 1, 2, 3.
        let w = ConeWindow::new(order(2.0), 2).unwrap();
        assert_eq!(w.grid_indices, vec![0, 1, 2]);
        assert_eq!(w.sum_indices, vec![1, 2, 3]);
    }

    #[test]
    fn lambda_for_example_problem() {
        let lambda = lambda_constant(order(1.5), 3).unwrap();
        // Enumerated: column s = 1 attains min over window rows / diagonal = 0.425.
        assert!((lambda - 0.425).abs() < 1e-12);
        assert!(lambda > 0.0 && lambda < 1.0);
    }

    #[test]
    fn parity() {
        assert_eq!(Parity::of(2), Parity::Even);
        assert_eq!(Parity::of(7), Parity::Odd);
    }
}
