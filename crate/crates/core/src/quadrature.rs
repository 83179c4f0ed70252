//! Uniform grids and kernel-weighted quadrature rows
//! `sum_j h rho_j K(t_i, t_j) phi_j`.
//!
//! Rows are evaluated by direct summation in index order `j = 0..=N`, so a
//! row is bit-reproducible regardless of how a sweep is scheduled.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::green::Kernel;

/// Uniform partition of `[0, 1]` into `n` subintervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooFewIntervals { n, min: 1 });
        }
        Ok(Grid { n })
    }

    /// Number of subintervals `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// `t_i = i / N`; `t_0 = 0` and `t_N = 1` exactly.
    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        i as f64 / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.node(i)).collect()
    }
}

/// Values attached to the nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(GridFunction { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        GridFunction {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        GridFunction {
            grid,
            values: (0..=grid.n()).map(|i| f(grid.node(i))).collect(),
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
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

    pub(crate) fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch {
                left: self.grid.n(),
                right: other.grid.n(),
            });
        }
        Ok(())
    }
}

/// Quadrature used for the kernel integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadratureMethod {
    /// Composite trapezium rule, `O(h^2)`.
    Trapezium,
    /// Composite Simpson rule with the odd-node correction
    /// `(h/6)(K_{i,i-1} phi_{i-1} - 2 K_{i,i} phi_i + K_{i,i+1} phi_{i+1})`, `O(h^3)`.
    ModifiedSimpson,
    /// Composite Simpson rule without any correction at odd nodes.
    Simpson,
}

impl QuadratureMethod {
    pub fn requires_even(self) -> bool {
        !matches!(self, QuadratureMethod::Trapezium)
    }

    pub fn check_grid(self, grid: Grid) -> Result<()> {
        if self.requires_even() && !grid.n().is_multiple_of(2) {
            return Err(Error::OddIntervals(grid.n()));
        }
        Ok(())
    }

    pub fn weights(self, n: usize) -> Result<Vec<f64>> {
        match self {
            QuadratureMethod::Trapezium => trap_weights(n),
            QuadratureMethod::ModifiedSimpson | QuadratureMethod::Simpson => simpson_weights(n),
        }
    }

    /// One row of the rule at node `i`.
    pub fn row(self, kernel: Kernel, i: usize, phi: &GridFunction) -> Result<f64> {
        Ok(self
            .rule(kernel, i, phi, Summation::Naive)?
            .row(i, phi.values()))
    }

    /// All rows `i = 0..=N`, evaluated in parallel.
    pub fn sweep(
        self,
        kernel: Kernel,
        phi: &GridFunction,
        summation: Summation,
    ) -> Result<GridFunction> {
        let rule = self.rule(kernel, 0, phi, summation)?;
        let values = (0..phi.grid.len())
            .into_par_iter()
            .map(|i| rule.row(i, phi.values()))
            .collect();
        Ok(GridFunction {
            grid: phi.grid,
            values,
        })
    }

    fn rule(
        self,
        kernel: Kernel,
        i: usize,
        phi: &GridFunction,
        summation: Summation,
    ) -> Result<Rule> {
        if kernel == Kernel::G2 {
            return Err(Error::UnsupportedKernel(kernel));
        }
        let grid = phi.grid;
        self.check_grid(grid)?;
        if i > grid.n() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: grid.n(),
            });
        }
        let scaled = self
            .weights(grid.n())?
            .into_iter()
            .map(|w| w * grid.h())
            .collect();
        Ok(Rule {
            grid,
            kernel,
            scaled_weights: scaled,
            odd_correction: self == QuadratureMethod::ModifiedSimpson,
            summation,
        })
    }
}

impl std::fmt::Display for QuadratureMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            QuadratureMethod::Trapezium => "trapezium",
            QuadratureMethod::ModifiedSimpson => "modified Simpson",
            QuadratureMethod::Simpson => "Simpson",
        })
    }
}

/// Accumulation strategy for row sums.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Summation {
    /// Plain left-to-right summation.
    #[default]
    Naive,
    /// Neumaier-compensated summation.
    Compensated,
}

struct Rule {
    grid: Grid,
    kernel: Kernel,
    scaled_weights: Vec<f64>,
    odd_correction: bool,
    summation: Summation,
}

impl Rule {
    /// Kernel value used by the rows. On the diagonal at the end nodes the
    /// jump of `G2` is one-sided, so `G2Star` takes the one-sided limit there.
    #[inline]
    fn kernel_at(&self, i: usize, j: usize) -> f64 {
        if self.kernel == Kernel::G2Star && i == j {
            if i == 0 {
                return -1.0;
            }
            if i == self.grid.n() {
                return 1.0;
            }
        }
        self.kernel.value(self.grid.node(i), self.grid.node(j))
    }

    fn row(&self, i: usize, phi: &[f64]) -> f64 {
        let terms = self
            .scaled_weights
            .iter()
            .zip(phi)
            .enumerate()
            .map(|(j, (w, p))| w * self.kernel_at(i, j) * p);
        let mut sum = match self.summation {
            Summation::Naive => terms.fold(0.0, |acc, x| acc + x),
            Summation::Compensated => neumaier(terms),
        };
        if self.odd_correction && i % 2 == 1 {
            let h = self.grid.h();
            sum += h / 6.0
                * (self.kernel_at(i, i - 1) * phi[i - 1] - 2.0 * self.kernel_at(i, i) * phi[i]
                    + self.kernel_at(i, i + 1) * phi[i + 1]);
        }
        sum
    }
}

fn neumaier(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in terms {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Trapezium weights: `1/2` at both ends, `1` inside.
pub fn trap_weights(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::TooFewIntervals { n, min: 1 });
    }
    let mut w = vec![1.0; n + 1];
    w[0] = 0.5;
    w[n] = 0.5;
    Ok(w)
}

/// Simpson weights: `1/3` at both ends, `4/3` at odd nodes, `2/3` at even
/// interior nodes.
pub fn simpson_weights(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::TooFewIntervals { n, min: 2 });
    }
    if !n.is_multiple_of(2) {
        return Err(Error::OddIntervals(n));
    }
    let mut w: Vec<f64> = (0..=n)
        .map(|j| if j % 2 == 1 { 4.0 / 3.0 } else { 2.0 / 3.0 })
        .collect();
    w[0] = 1.0 / 3.0;
    w[n] = 1.0 / 3.0;
    Ok(w)
}

/// Trapezium row `sum_j h rho_j K(t_i, t_j) phi_j`.
pub fn trap_row(kernel: Kernel, i: usize, phi: &GridFunction) -> Result<f64> {
    QuadratureMethod::Trapezium.row(kernel, i, phi)
}

/// Simpson row with the `h/6` correction at odd `i`.
pub fn simpson_mod_row(kernel: Kernel, i: usize, phi: &GridFunction) -> Result<f64> {
    QuadratureMethod::ModifiedSimpson.row(kernel, i, phi)
}

/// Plain composite Simpson row, no odd-node correction.
pub fn simpson_row(kernel: Kernel, i: usize, phi: &GridFunction) -> Result<f64> {
    QuadratureMethod::Simpson.row(kernel, i, phi)
}
