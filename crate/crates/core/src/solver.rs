//! Discrete fixed-point iteration.
//!
//! Starting from `Phi_0(t_i) = f(t_i, 0, 0, 0)`, each step integrates `Phi_k`
//! against `G0`, `G1` and `G2*` to get `U_k`, `Y_k`, `Z_k` and sets
//! `Phi_{k+1}(t_i) = f(t_i, U_k, Y_k, Z_k)`. Iteration stops once
//! `max_i |Phi_{k+1} - Phi_k| <= tol`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::error::Error;
use crate::green::Kernel;
use crate::quadrature::{Grid, GridFunction, QuadratureMethod, Summation};

pub type RhsFn = dyn Fn(f64, f64, f64, f64) -> f64 + Send + Sync;
pub type ExactFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Bound `M` on `|f|` over `D_M` and Lipschitz constants of `f` in `u`, `u'`, `u''`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub m: f64,
    pub l0: f64,
    pub l1: f64,
    pub l2: f64,
}

/// `u''' = f(t, u, u', u'')` on `(0, 1)` with `u(0) = c1`, `u'(0) = c2`, `u'(1) = c3`.
#[derive(Clone)]
pub struct Problem {
    pub rhs: Arc<RhsFn>,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub exact: Option<Arc<ExactFn>>,
    pub constants: Option<Constants>,
}

impl Problem {
    pub fn new(
        rhs: impl Fn(f64, f64, f64, f64) -> f64 + Send + Sync + 'static,
        c1: f64,
        c2: f64,
        c3: f64,
    ) -> Self {
        Problem {
            rhs: Arc::new(rhs),
            c1,
            c2,
            c3,
            exact: None,
            constants: None,
        }
    }

    pub fn with_exact(mut self, exact: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact = Some(Arc::new(exact));
        self
    }

    pub fn with_constants(mut self, constants: Constants) -> Self {
        self.constants = Some(constants);
        self
    }

    pub fn is_homogeneous(&self) -> bool {
        self.c1 == 0.0 && self.c2 == 0.0 && self.c3 == 0.0
    }

    #[inline]
    pub fn eval(&self, t: f64, u: f64, up: f64, upp: f64) -> f64 {
        (self.rhs)(t, u, up, upp)
    }
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("c1", &self.c1)
            .field("c2", &self.c2)
            .field("c3", &self.c3)
            .field("exact", &self.exact.is_some())
            .field("constants", &self.constants)
            .finish_non_exhaustive()
    }
}

/// `a0 + a1 t + a2 t^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
}

impl Quadratic {
    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        self.a0 + self.a1 * t + self.a2 * t * t
    }

    #[inline]
    pub fn d1(&self, t: f64) -> f64 {
        self.a1 + 2.0 * self.a2 * t
    }

    #[inline]
    pub fn d2(&self) -> f64 {
        2.0 * self.a2
    }

    pub fn is_zero(&self) -> bool {
        self.a0 == 0.0 && self.a1 == 0.0 && self.a2 == 0.0
    }
}

/// Splits `u = v + P2` with `P2(0) = c1`, `P2'(0) = c2`, `P2'(1) = c3`, returning
/// the zero-boundary problem for `v` and `P2`.
pub fn homogenize(p: &Problem) -> (Problem, Quadratic) {
    let p2 = Quadratic {
        a0: p.c1,
        a1: p.c2,
        a2: 0.5 * (p.c3 - p.c2),
    };
    if p2.is_zero() {
        return (p.clone(), p2);
    }
    let rhs = Arc::clone(&p.rhs);
    let exact = p
        .exact
        .clone()
        .map(|e| Arc::new(move |t: f64| e(t) - p2.value(t)) as Arc<ExactFn>);
    let shifted = Problem {
        rhs: Arc::new(move |t, x, y, z| rhs(t, x + p2.value(t), y + p2.d1(t), z + p2.d2())),
        c1: 0.0,
        c2: 0.0,
        c3: 0.0,
        exact,
        constants: p.constants,
    };
    (shifted, p2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub n: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub method: QuadratureMethod,
    pub summation: Summation,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n: 64,
            tol: 1e-10,
            max_iter: 100,
            method: QuadratureMethod::ModifiedSimpson,
            summation: Summation::Naive,
        }
    }
}

impl SolverConfig {
    pub fn new(n: usize, tol: f64, method: QuadratureMethod) -> Self {
        SolverConfig {
            n,
            tol,
            method,
            ..Default::default()
        }
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn validate(&self) -> Result<Grid, Error> {
        let grid = Grid::new(self.n)?;
        self.method.check_grid(grid)?;
        if self.method.requires_even() && self.n < 2 {
            return Err(Error::TooFewIntervals { n: self.n, min: 2 });
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    /// Approximations of `u`, `u'`, `u''` and `u'''` at the nodes.
    pub u: GridFunction,
    pub y: GridFunction,
    pub z: GridFunction,
    pub phi: GridFunction,
    /// Number of `Phi` updates performed.
    pub iterations: usize,
    /// `max_i |Phi_k - Phi_{k-1}|` for `k = 1..=iterations`.
    pub residuals: Vec<f64>,
    pub converged: bool,
}

impl SolveResult {
    pub fn grid(&self) -> Grid {
        self.u.grid()
    }

    pub fn final_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(f64::NAN)
    }

    /// `max_i |U_i - exact(t_i)|`.
    pub fn max_error(&self, exact: impl Fn(f64) -> f64) -> f64 {
        max_error(&self.u, exact)
    }
}

pub(crate) fn max_error(u: &GridFunction, exact: impl Fn(f64) -> f64) -> f64 {
    let grid = u.grid();
    u.values()
        .iter()
        .enumerate()
        .map(|(i, v)| (v - exact(grid.node(i))).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxIterations,
    Diverged,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Invalid(#[from] Error),

    #[error(
        "right-hand side is not finite ({value}) at node {node} (t = {t}) in iteration {iteration}"
    )]
    NonFiniteIterate {
        iteration: usize,
        node: usize,
        t: f64,
        value: f64,
    },

    #[error("no convergence after {} iterations ({reason:?}), last residual {}",
        .result.iterations, .result.final_residual())]
    NotConverged {
        reason: StopReason,
        result: Box<SolveResult>,
    },
}

/// Snapshot handed to the observer of [`solve_with`] after each update.
/// `u`, `y`, `z` are already shifted back by `P2`.
#[derive(Debug)]
pub struct IterationState<'a> {
    /// `k`, counting from 1.
    pub iteration: usize,
    pub u: &'a GridFunction,
    pub y: &'a GridFunction,
    pub z: &'a GridFunction,
    pub phi_next: &'a GridFunction,
    pub residual: f64,
}

/// One iteration's output on a homogeneous problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Iterate {
    pub u: GridFunction,
    pub y: GridFunction,
    pub z: GridFunction,
    pub phi_next: GridFunction,
}

/// `Phi_0(t_i) = f(t_i, 0, 0, 0)`.
pub fn initial_phi(p: &Problem, grid: Grid) -> Result<GridFunction, SolveError> {
    let values = (0..=grid.n())
        .map(|i| {
            let t = grid.node(i);
            finite(p.eval(t, 0.0, 0.0, 0.0), 0, i, t)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GridFunction::new(grid, values)?)
}

/// Integrates `phi_k` with the given rule and evaluates the right-hand side on
/// the result. `p` must be homogeneous.
pub fn iterate_once(
    p: &Problem,
    phi_k: &GridFunction,
    method: QuadratureMethod,
) -> Result<Iterate, SolveError> {
    step(p, phi_k, method, Summation::Naive, 0)
}

fn step(
    p: &Problem,
    phi: &GridFunction,
    method: QuadratureMethod,
    summation: Summation,
    iteration: usize,
) -> Result<Iterate, SolveError> {
    let u = method.sweep(Kernel::G0, phi, summation)?;
    let y = method.sweep(Kernel::G1, phi, summation)?;
    let z = method.sweep(Kernel::G2Star, phi, summation)?;
    let grid = phi.grid();
    let next = (0..=grid.n())
        .map(|i| {
            let t = grid.node(i);
            finite(
                p.eval(t, u.values()[i], y.values()[i], z.values()[i]),
                iteration,
                i,
                t,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Iterate {
        u,
        y,
        z,
        phi_next: GridFunction::new(grid, next)?,
    })
}

fn finite(value: f64, iteration: usize, node: usize, t: f64) -> Result<f64, SolveError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(SolveError::NonFiniteIterate {
            iteration,
            node,
            t,
            value,
        })
    }
}

pub fn max_norm_diff(a: &GridFunction, b: &GridFunction) -> Result<f64, Error> {
    a.check_same_grid(b)?;
    Ok(a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

pub fn solve(p: &Problem, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    solve_with(p, cfg, |_| {})
}

/// Residual growth past this multiple of the first residual aborts the run.
const DIVERGENCE_FACTOR: f64 = 1e6;

/// [`solve`] with a callback invoked after every iteration.
pub fn solve_with(
    p: &Problem,
    cfg: &SolverConfig,
    mut observer: impl FnMut(&IterationState<'_>),
) -> Result<SolveResult, SolveError> {
    let grid = cfg.validate()?;
    let (hp, p2) = homogenize(p);
    let mut phi = initial_phi(&hp, grid)?;
    let mut residuals = Vec::new();

    for k in 1..=cfg.max_iter {
        let Iterate {
            mut u,
            mut y,
            mut z,
            phi_next,
        } = step(&hp, &phi, cfg.method, cfg.summation, k)?;
        let residual = max_norm_diff(&phi_next, &phi)?;
        residuals.push(residual);
        restore_boundary(p, &p2, &mut u, &mut y, &mut z);
        observer(&IterationState {
            iteration: k,
            u: &u,
            y: &y,
            z: &z,
            phi_next: &phi_next,
            residual,
        });
        phi = phi_next;

        let stop = if residual <= cfg.tol {
            None
        } else if residual > DIVERGENCE_FACTOR * residuals[0] {
            Some(StopReason::Diverged)
        } else if k == cfg.max_iter {
            Some(StopReason::MaxIterations)
        } else {
            continue;
        };

        let result = SolveResult {
            u,
            y,
            z,
            phi,
            iterations: k,
            residuals,
            converged: stop.is_none(),
        };
        return match stop {
            None => Ok(result),
            Some(reason) => Err(SolveError::NotConverged {
                reason,
                result: Box::new(result),
            }),
        };
    }
    unreachable!("max_iter >= 1 is validated")
}

/// Adds `P2` and its derivatives back and pins the three boundary values.
fn restore_boundary(
    p: &Problem,
    p2: &Quadratic,
    u: &mut GridFunction,
    y: &mut GridFunction,
    z: &mut GridFunction,
) {
    let grid = u.grid();
    if !p2.is_zero() {
        for (i, v) in u.values_mut().iter_mut().enumerate() {
            *v += p2.value(grid.node(i));
        }
        for (i, v) in y.values_mut().iter_mut().enumerate() {
            *v += p2.d1(grid.node(i));
        }
        for v in z.values_mut() {
            *v += p2.d2();
        }
    }
    // the homogeneous rows vanish identically at these nodes
    u.values_mut()[0] = p.c1;
    y.values_mut()[0] = p.c2;
    y.values_mut()[grid.n()] = p.c3;
}
