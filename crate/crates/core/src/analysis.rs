//! Hypothesis checks and error bookkeeping: the contraction number
//! `q = L0 M0 + L1 M1 + L2 M2`, the a-priori bound `p_k = q^k delta0 / (1 - q)`,
//! empirical convergence orders and a sampling estimate of `M`, `L0`, `L1`, `L2`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::green::kernel_bounds;
use crate::solver::{homogenize, Problem};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniquenessReport {
    pub m_bound: f64,
    /// `(L0, L1, L2)`.
    pub lipschitz: [f64; 3],
    pub q: f64,
    /// `q < 1`.
    pub satisfied: bool,
    /// Half-widths `(M0 M, M1 M, M2 M)` of the box `D_M` in `u`, `u'`, `u''`.
    pub domain_box: [f64; 3],
}

pub fn uniqueness_report(m: f64, l0: f64, l1: f64, l2: f64) -> Result<UniquenessReport> {
    for (name, v) in [("M", m), ("L0", l0), ("L1", l1), ("L2", l2)] {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                value: v,
                context: name.into(),
            });
        }
        if v < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "{name} must be nonnegative, got {v}"
            )));
        }
    }
    if m <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "M must be positive, got {m}"
        )));
    }
    let b = kernel_bounds();
    let q = l0 * b.m0 + l1 * b.m1 + l2 * b.m2;
    Ok(UniquenessReport {
        m_bound: m,
        lipschitz: [l0, l1, l2],
        q,
        satisfied: q < 1.0,
        domain_box: [b.m0 * m, b.m1 * m, b.m2 * m],
    })
}

/// `p_k` and the resulting bounds `(M0 p_k, M1 p_k, M2 p_k)` on the errors in
/// `u`, `u'`, `u''` after `k` continuous iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AprioriBound {
    pub p_k: f64,
    pub u: f64,
    pub y: f64,
    pub z: f64,
}

pub fn apriori_bound(k: u32, q: f64, delta0: f64) -> Result<AprioriBound> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::InvalidArgument(format!(
            "q must lie in [0, 1), got {q}"
        )));
    }
    if !delta0.is_finite() || delta0 < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "delta0 must be finite and nonnegative, got {delta0}"
        )));
    }
    let p_k = q.powi(k as i32) * delta0 / (1.0 - q);
    let b = kernel_bounds();
    Ok(AprioriBound {
        p_k,
        u: b.m0 * p_k,
        y: b.m1 * p_k,
        z: b.m2 * p_k,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub k_iters: usize,
    pub error: f64,
    /// `log2(error(N/2) / error(N))`; absent on the first row.
    pub order: Option<f64>,
    /// Set when an order was due but an error was zero or negative.
    pub degenerate: bool,
}

/// Builds the order column from `(N, K, error)` triples with `N` doubling.
pub fn order_table(rows: &[(usize, usize, f64)]) -> Result<Vec<ConvergenceRow>> {
    let mut out = Vec::with_capacity(rows.len());
    for (idx, &(n, k_iters, error)) in rows.iter().enumerate() {
        let (order, degenerate) = match idx.checked_sub(1).map(|p| rows[p]) {
            None => (None, false),
            Some((prev_n, _, prev_err)) => {
                if prev_n.checked_mul(2) != Some(n) {
                    return Err(Error::InvalidArgument(format!(
                        "grid sizes must double: {prev_n} followed by {n}"
                    )));
                }
                if prev_err > 0.0 && error > 0.0 {
                    (Some((prev_err / error).log2()), false)
                } else {
                    (None, true)
                }
            }
        };
        out.push(ConvergenceRow {
            n,
            k_iters,
            error,
            order,
            degenerate,
        });
    }
    Ok(out)
}

/// Sampled `sup |f|` and per-axis Lipschitz estimates on `D_M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantEstimate {
    pub sup_f: f64,
    pub l0: f64,
    pub l1: f64,
    pub l2: f64,
}

impl ConstantEstimate {
    pub fn report(&self, m: f64) -> Result<UniquenessReport> {
        uniqueness_report(m, self.l0, self.l1, self.l2)
    }
}

/// Samples `f` of the homogenized problem on a uniform lattice over
/// `[0,1] x [-M/12, M/12] x [-M/8, M/8] x [-M/2, M/2]`.
///
/// Each axis is cut into `samples_per_axis` equal pieces, so doubling the
/// count refines the lattice and can only raise the estimates. Lipschitz
/// constants are the largest divided differences between lattice neighbours
/// along one axis. All values are lower estimates of the true suprema; a
/// sampled `q < 1` is evidence, not proof.
pub fn estimate_constants(
    p: &Problem,
    m: f64,
    samples_per_axis: usize,
) -> Result<ConstantEstimate> {
    if samples_per_axis < 2 {
        return Err(Error::InvalidArgument(format!(
            "samples_per_axis must be at least 2, got {samples_per_axis}"
        )));
    }
    if !m.is_finite() || m <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "M must be positive, got {m}"
        )));
    }
    let (hp, _) = homogenize(p);
    let s = samples_per_axis;
    let b = kernel_bounds();
    let half = [b.m0 * m, b.m1 * m, b.m2 * m];
    let coord = |axis: usize, i: usize| -> f64 {
        // exact endpoints, symmetric interior
        let frac = i as f64 / s as f64;
        -half[axis] + 2.0 * half[axis] * frac
    };
    let step = [
        2.0 * half[0] / s as f64,
        2.0 * half[1] / s as f64,
        2.0 * half[2] / s as f64,
    ];
    let np = s + 1;

    // slab per t value: f on the (x, y, z) lattice
    let slabs = (0..np)
        .into_par_iter()
        .map(|it| {
            let t = it as f64 / s as f64;
            let mut slab = Vec::with_capacity(np * np * np);
            for ix in 0..np {
                for iy in 0..np {
                    for iz in 0..np {
                        let v = hp.eval(t, coord(0, ix), coord(1, iy), coord(2, iz));
                        if !v.is_finite() {
                            return Err(Error::NonFinite {
                                value: v,
                                context: format!(
                                    "f({t}, {}, {}, {})",
                                    coord(0, ix),
                                    coord(1, iy),
                                    coord(2, iz)
                                ),
                            });
                        }
                        slab.push(v);
                    }
                }
            }
            Ok(slab)
        })
        .collect::<Result<Vec<_>>>()?;

    let idx = |ix: usize, iy: usize, iz: usize| (ix * np + iy) * np + iz;
    let mut est = ConstantEstimate {
        sup_f: 0.0,
        l0: 0.0,
        l1: 0.0,
        l2: 0.0,
    };
    for slab in &slabs {
        for ix in 0..np {
            for iy in 0..np {
                for iz in 0..np {
                    let v = slab[idx(ix, iy, iz)];
                    est.sup_f = est.sup_f.max(v.abs());
                    if ix + 1 < np {
                        let d = (slab[idx(ix + 1, iy, iz)] - v).abs() / step[0];
                        est.l0 = est.l0.max(d);
                    }
                    if iy + 1 < np {
                        let d = (slab[idx(ix, iy + 1, iz)] - v).abs() / step[1];
                        est.l1 = est.l1.max(d);
                    }
                    if iz + 1 < np {
                        let d = (slab[idx(ix, iy, iz + 1)] - v).abs() / step[2];
                        est.l2 = est.l2.max(d);
                    }
                }
            }
        }
    }
    Ok(est)
}
