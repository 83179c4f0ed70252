//! Fixed-point solver for fully third-order nonlinear two-point boundary
//! value problems
//!
//! ```text
//! u'''(t) = f(t, u, u', u''),   0 < t < 1,
//! u(0) = c1,  u'(0) = c2,  u'(1) = c3.
//! ```
//!
//! The problem is rewritten as a fixed-point equation for `phi = u'''`:
//! `u`, `u'` and `u''` are recovered from `phi` by integrating against the
//! Green's kernels of the homogeneous linear problem, and `phi` is updated by
//! evaluating `f` on them. The integrals are discretized on a uniform grid with
//! either the composite trapezium rule (second order) or a composite Simpson
//! rule with an odd-node correction across the kernel kink (third order).
//!
//! Modules:
//!
//! * [`green`]: kernels `G0`, `G1`, `G2`, the jump-averaged `G2*` and their bounds.
//! * [`quadrature`]: grids, grid functions and kernel-weighted quadrature rows.
//! * [`solver`]: homogenization, the discrete iteration and stopping control.
//! * [`analysis`]: contraction number, a-priori bounds, empirical orders.
//! * [`problemspec`]: expression language for right-hand sides and the problem file.
//! * [`examples`]: the four benchmark problems with their reference tables.

pub mod analysis;
pub mod error;
pub mod examples;
pub mod green;
pub mod problemspec;
pub mod quadrature;
pub mod solver;

pub use analysis::{
    apriori_bound, estimate_constants, order_table, uniqueness_report, AprioriBound,
    ConstantEstimate, ConvergenceRow, UniquenessReport,
};
pub use error::{Error, Result};
pub use examples::{get_example, NamedExample, ReferenceRow, ReferenceTable};
pub use green::{analytic_row_integral, eval_kernel, kernel_bounds, Kernel, KernelBounds};
pub use problemspec::{read_problem_file, read_problem_str, Expr, ParseError, ProblemFileError};
pub use quadrature::{Grid, GridFunction, QuadratureMethod, Summation};
pub use solver::{
    homogenize, initial_phi, iterate_once, max_norm_diff, solve, solve_with, Constants,
    IterationState, Problem, Quadratic, SolveError, SolveResult, SolverConfig,
};
