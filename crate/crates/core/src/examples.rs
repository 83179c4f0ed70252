//! The four benchmark problems, as native closures and as problem files,
//! together with the convergence tables published for them.

use crate::error::{Error, Result};
use crate::problemspec::read_problem_str;
use crate::solver::{Constants, Problem};

/// One row of a published convergence table. `None` marks a column the table
/// does not report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub n: usize,
    pub k: usize,
    pub error_trap: Option<f64>,
    pub error_simpson: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceTable {
    /// `tol=<TOL>`, e.g. `tol=1e-10`.
    pub label: &'static str,
    pub tol: f64,
    pub rows: &'static [ReferenceRow],
}

impl ReferenceTable {
    pub fn row(&self, n: usize) -> Option<&ReferenceRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

#[derive(Debug, Clone)]
pub struct NamedExample {
    pub id: u8,
    pub problem: Problem,
    pub table_refs: &'static [ReferenceTable],
}

impl NamedExample {
    /// Contents of the shipped problem file.
    pub fn file_source(&self) -> &'static str {
        FILES[usize::from(self.id) - 1]
    }

    pub fn file_problem(&self) -> Problem {
        read_problem_str(self.file_source()).expect("shipped problem files parse")
    }

    pub fn table(&self, label: &str) -> Option<&'static ReferenceTable> {
        self.table_refs.iter().find(|t| t.label == label)
    }
}

const FILES: [&str; 4] = [
    include_str!("../examples/ex1.prob"),
    include_str!("../examples/ex2.prob"),
    include_str!("../examples/ex3.prob"),
    include_str!("../examples/ex4.prob"),
];

pub fn get_example(id: u8) -> Result<NamedExample> {
    let (problem, table_refs) = match id {
        1 => (example1(), &EXAMPLE1_TABLES[..]),
        2 => (example2(), &EXAMPLE2_TABLES[..]),
        3 => (example3(), &EXAMPLE3_TABLES[..]),
        4 => (example4(), &EXAMPLE4_TABLES[..]),
        _ => return Err(Error::InvalidArgument(format!("no example with id {id}"))),
    };
    Ok(NamedExample {
        id,
        problem,
        table_refs,
    })
}

// The closures below follow the operation order of the problem files so the
// two evaluate identically.

fn example1() -> Problem {
    let s1 = 1f64.sin();
    Problem::new(
        |t, u, _, _| {
            let exact = (t - 1.0) * t.sin();
            t.powi(4) * u - u.powi(2) - 3.0 * t.sin() - (t - 1.0) * t.cos() - t.powi(4) * exact
                + exact.powi(2)
        },
        0.0,
        -1.0,
        s1,
    )
    .with_exact(|t| (t - 1.0) * t.sin())
    .with_constants(Constants {
        m: 7.0,
        l0: 1.0 + 2.0 * (7.0 / 12.0 + 1.0 / (2.0 * (s1 + 1.0))),
        l1: 0.0,
        l2: 0.0,
    })
}

fn example2() -> Problem {
    Problem::new(
        |t, _, _, upp| -t * upp - 6.0 * t.powi(2) + 3.0 * t - 6.0,
        0.0,
        0.0,
        0.0,
    )
    .with_exact(|t| t.powi(2) * (1.5 - t))
    .with_constants(Constants {
        m: 9.0,
        l0: 0.0,
        l1: 0.0,
        l2: 1.0,
    })
}

fn example3() -> Problem {
    let e = 1f64.exp();
    Problem::new(|t, u, up, _| u.powi(2) + up - (2.0 * t).exp(), 1.0, 1.0, e)
        .with_exact(f64::exp)
        .with_constants(Constants {
            m: 10.0,
            l0: 2.0 * (10.0 / 12.0 + (3.0 + e) / 2.0),
            l1: 1.0,
            l2: 0.0,
        })
}

fn example4() -> Problem {
    Problem::new(
        |_, u, up, upp| -u.exp() - up.exp() - upp.powi(2) / 10.0,
        0.0,
        0.0,
        0.0,
    )
    .with_constants(Constants {
        m: 3.0,
        l0: 0.25f64.exp(),
        l1: 0.375f64.exp(),
        l2: 3.0 / 10.0,
    })
}

const fn row(n: usize, k: usize, trap: f64, simpson: f64) -> ReferenceRow {
    ReferenceRow {
        n,
        k,
        error_trap: Some(trap),
        error_simpson: Some(simpson),
    }
}

const fn k_only(n: usize, k: usize) -> ReferenceRow {
    ReferenceRow {
        n,
        k,
        error_trap: None,
        error_simpson: None,
    }
}

static EXAMPLE1_TABLES: [ReferenceTable; 3] = [
    ReferenceTable {
        label: "tol=1e-4",
        tol: 1e-4,
        rows: &[
            row(8, 3, 9.9153e-04, 9.7143e-04),
            row(16, 3, 2.4646e-04, 1.3101e-04),
            row(32, 3, 6.0906e-05, 1.6020e-05),
            row(64, 3, 1.4563e-05, 1.2587e-06),
            row(128, 3, 2.9796e-06, 8.8553e-07),
            row(256, 3, 4.3187e-07, 8.8165e-07),
            row(512, 3, 6.7435e-07, 8.8118e-07),
            row(1024, 3, 8.2295e-07, 8.8112e-07),
        ],
    },
    ReferenceTable {
        label: "tol=1e-6",
        tol: 1e-6,
        rows: &[
            row(8, 4, 9.99237e-04, 9.7223e-04),
            row(16, 4, 2.4734e-04, 1.3189e-04),
            row(32, 4, 6.1802e-05, 1.6915e-05),
            row(64, 4, 1.5462e-05, 2.1492e-06),
            row(128, 4, 3.8797e-06, 2.8688e-07),
            row(256, 4, 9.8437e-07, 5.2749e-08),
            row(512, 4, 2.6054e-07, 2.3446e-08),
            row(1024, 4, 7.9583e-08, 1.9786e-08),
        ],
    },
    ReferenceTable {
        label: "tol=1e-10",
        tol: 1e-10,
        rows: &[
            row(8, 7, 9.9235e-04, 9.7222e-04),
            row(16, 7, 2.4732e-04, 1.3187e-04),
            row(32, 7, 6.1782e-05, 1.6896e-05),
            row(64, 7, 1.5443e-05, 2.1301e-06),
            row(128, 7, 3.8605e-06, 2.6774e-07),
            row(256, 7, 9.6511e-07, 3.3544e-08),
            row(512, 7, 2.4128e-07, 4.1977e-09),
            row(1024, 7, 6.0319e-08, 5.2483e-10),
        ],
    },
];

static EXAMPLE2_TABLES: [ReferenceTable; 3] = [
    ReferenceTable {
        label: "tol=1e-4",
        tol: 1e-4,
        rows: &[
            row(8, 6, 0.0078, 9.7662e-04),
            row(16, 6, 0.0020, 1.2215e-04),
            row(32, 6, 4.8837e-04, 1.5345e-05),
            row(64, 6, 1.2216e-04, 1.9936e-06),
            row(128, 6, 3.0604e-05, 3.2471e-07),
            row(256, 6, 7.7157e-06, 1.1612e-07),
            row(512, 6, 1.9937e-06, 9.0051e-08),
            row(1024, 6, 5.6316e-07, 8.6794e-08),
        ],
    },
    ReferenceTable {
        label: "tol=1e-6",
        tol: 1e-6,
        rows: &[
            row(8, 8, 0.0078, 9.7662e-04),
            row(16, 6, 0.0020, 1.2215e-04),
            row(32, 6, 4.8837e-04, 1.5345e-05),
            row(64, 6, 1.2216e-04, 1.9936e-06),
            row(128, 6, 3.0604e-05, 3.2471e-07),
            row(256, 6, 7.7157e-06, 1.1612e-07),
            row(512, 6, 1.9937e-06, 9.0051e-08),
            row(1024, 6, 5.6316e-07, 8.6794e-08),
        ],
    },
    ReferenceTable {
        label: "tol=1e-10",
        tol: 1e-10,
        rows: &[
            row(8, 11, 0.0078, 2.0650e-13),
            row(16, 11, 0.0020, 2.6790e-13),
            row(32, 11, 4.8828e-04, 2.6279e-13),
            row(64, 11, 1.2207e-04, 2.5890e-13),
            row(128, 11, 3.0518e-05, 2.5790e-13),
            row(256, 11, 7.6294e-06, 2.5802e-13),
        ],
    },
];

static EXAMPLE3_TABLES: [ReferenceTable; 2] = [
    ReferenceTable {
        label: "tol=1e-4",
        tol: 1e-4,
        rows: &[
            row(16, 8, 5.4059e-04, 5.2038e-05),
            row(32, 8, 1.3655e-04, 1.4204e-05),
            row(64, 8, 3.5582e-05, 4.9811e-06),
            row(128, 8, 1.0341e-05, 2.6902e-06),
            row(256, 8, 4.0312e-06, 2.1184e-06),
            row(512, 8, 2.4537e-06, 1.9755e-06),
        ],
    },
    ReferenceTable {
        label: "tol=1e-6",
        tol: 1e-6,
        rows: &[
            row(16, 11, 5.3866e-04, 5.0053e-05),
            row(32, 11, 1.3460e-04, 1.2241e-05),
            row(64, 11, 3.3627e-05, 3.0231e-06),
            row(128, 11, 8.3853e-06, 7.3348e-07),
            row(256, 11, 2.0750e-06, 1.6199e-07),
            row(512, 11, 4.9743e-07, 1.9180e-08),
        ],
    },
];

static EXAMPLE4_TABLES: [ReferenceTable; 1] = [ReferenceTable {
    label: "tol=1e-10",
    tol: 1e-10,
    rows: &[
        k_only(8, 15),
        k_only(16, 15),
        k_only(32, 15),
        k_only(64, 15),
    ],
}];
