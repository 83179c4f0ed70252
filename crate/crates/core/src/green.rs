//! Green's kernels of `u''' = phi`, `u(0) = u'(0) = u'(1) = 0`.
//!
//! `G0` reproduces `u`, `G1 = dG0/dt` reproduces `u'` and `G2 = d2G0/dt2`
//! reproduces `u''`. `G2` jumps by one across the diagonal `s = t`; `G2Star`
//! replaces the diagonal value by the mean of the one-sided limits.

use crate::error::{Error, Result};

/// Which kernel to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    G0,
    G1,
    G2,
    /// `G2` with the diagonal value `s - 1/2`. Only meaningful inside
    /// quadrature rows.
    G2Star,
}

impl Kernel {
    pub const ALL: [Kernel; 4] = [Kernel::G0, Kernel::G1, Kernel::G2, Kernel::G2Star];

    /// Evaluates the kernel without checking that `t` and `s` lie in `[0, 1]`.
    #[inline]
    pub fn value(self, t: f64, s: f64) -> f64 {
        match self {
            Kernel::G0 => {
                if s <= t {
                    0.5 * s * (t * t - 2.0 * t + s)
                } else {
                    0.5 * t * t * (s - 1.0)
                }
            }
            Kernel::G1 => {
                if s <= t {
                    s * (t - 1.0)
                } else {
                    t * (s - 1.0)
                }
            }
            Kernel::G2 => {
                if s <= t {
                    s
                } else {
                    s - 1.0
                }
            }
            Kernel::G2Star => {
                if s < t {
                    s
                } else if s > t {
                    s - 1.0
                } else {
                    s - 0.5
                }
            }
        }
    }
}

/// `M_l = max_t int_0^1 |G_l(t, s)| ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelBounds {
    pub m0: f64,
    pub m1: f64,
    pub m2: f64,
}

impl KernelBounds {
    pub fn as_array(&self) -> [f64; 3] {
        [self.m0, self.m1, self.m2]
    }
}

/// Evaluates a kernel at `(t, s)`, rejecting arguments outside `[0, 1]`.
///
/// `G2` uses its lower branch (`s`) on the diagonal; only `G2Star` averages.
pub fn eval_kernel(kernel: Kernel, t: f64, s: f64) -> Result<f64> {
    check_unit("t", t)?;
    check_unit("s", s)?;
    Ok(kernel.value(t, s))
}

pub const fn kernel_bounds() -> KernelBounds {
    KernelBounds {
        m0: 1.0 / 12.0,
        m1: 1.0 / 8.0,
        m2: 1.0 / 2.0,
    }
}

/// Closed form of `int_0^1 K(t, s) ds`.
///
/// * `G0`: `t^3/6 - t^2/4`
/// * `G1`: `(t^2 - t)/2`
/// * `G2`: `t - 1/2`
pub fn analytic_row_integral(kernel: Kernel, t: f64) -> Result<f64> {
    check_unit("t", t)?;
    match kernel {
        Kernel::G0 => Ok(t * t * t / 6.0 - t * t / 4.0),
        Kernel::G1 => Ok(0.5 * (t * t - t)),
        Kernel::G2 => Ok(t - 0.5),
        Kernel::G2Star => Err(Error::NoAnalyticIntegral(kernel)),
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { name, value })
    }
}
