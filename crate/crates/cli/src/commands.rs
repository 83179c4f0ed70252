use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use thirdbvp_core::{
    estimate_constants, order_table, read_problem_file, solve, uniqueness_report, Grid, Problem,
    ProblemFileError, QuadratureMethod, SolveError, SolveResult, SolverConfig, UniquenessReport,
};

use crate::args::{CheckArgs, Format, PlotArgs, SolveArgs, SolveOptions, StudyArgs};
use crate::table::{StudyColumn, StudyTable};
use crate::{svg, EXIT_HYPOTHESIS, EXIT_NOT_CONVERGED, EXIT_OK};

fn load(path: &Path) -> Result<Problem> {
    // the file errors already carry their cause and line in `Display`
    read_problem_file(path).map_err(|e| match e {
        ProblemFileError::Io { .. } => anyhow!("{e}"),
        e => anyhow!("{}: {e}", path.display()),
    })
}

/// How a single solve ended, short of an input error.
enum Outcome {
    Converged(SolveResult),
    /// Ran out of iterations or diverged; the last iterate is kept.
    Stalled(SolveResult, String),
    /// The right-hand side produced a non-finite value.
    Failed(String),
}

fn run_solve(p: &Problem, cfg: &SolverConfig) -> Result<Outcome> {
    match solve(p, cfg) {
        Ok(r) => Ok(Outcome::Converged(r)),
        Err(SolveError::Invalid(e)) => Err(e.into()),
        Err(e @ SolveError::NonFiniteIterate { .. }) => Ok(Outcome::Failed(e.to_string())),
        Err(SolveError::NotConverged { reason, result }) => {
            let msg = format!(
                "no convergence ({reason:?}) after {} iterations, last residual {:e}",
                result.iterations,
                result.final_residual()
            );
            Ok(Outcome::Stalled(*result, msg))
        }
    }
}

fn config(opts: &SolveOptions) -> SolverConfig {
    SolverConfig::new(opts.n, opts.tol, opts.method.into()).with_max_iter(opts.max_iter)
}

/// `t,u,y,z,phi` rows with 17 significant digits.
pub fn solution_csv(r: &SolveResult) -> String {
    let grid = r.grid();
    let mut s = String::from("t,u,y,z,phi\n");
    for i in 0..grid.len() {
        let _ = writeln!(
            s,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            grid.node(i),
            r.u.values()[i],
            r.y.values()[i],
            r.z.values()[i],
            r.phi.values()[i]
        );
    }
    s
}

fn summary(out: &mut dyn Write, r: &SolveResult) -> Result<()> {
    writeln!(out, "K = {}", r.iterations)?;
    writeln!(out, "converged = {}", r.converged)?;
    writeln!(out, "final residual = {:e}", r.final_residual())?;
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    let p = load(&args.opts.file)?;
    let (r, code) = match run_solve(&p, &config(&args.opts))? {
        Outcome::Converged(r) => (r, EXIT_OK),
        Outcome::Stalled(r, msg) => {
            writeln!(err, "{msg}")?;
            (r, EXIT_NOT_CONVERGED)
        }
        Outcome::Failed(msg) => {
            writeln!(err, "{msg}")?;
            return Ok(EXIT_NOT_CONVERGED);
        }
    };
    if let Some(path) = &args.out {
        write_file(path, &solution_csv(&r))?;
    }
    summary(out, &r)?;
    if let Some(exact) = &p.exact {
        writeln!(out, "max error = {:e}", r.max_error(|t| exact(t)))?;
    }
    Ok(code)
}

pub fn cmd_plot(args: &PlotArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    let p = load(&args.opts.file)?;
    let (r, code) = match run_solve(&p, &config(&args.opts))? {
        Outcome::Converged(r) => (r, EXIT_OK),
        Outcome::Stalled(r, msg) => {
            writeln!(err, "{msg}")?;
            (r, EXIT_NOT_CONVERGED)
        }
        Outcome::Failed(msg) => {
            writeln!(err, "{msg}")?;
            return Ok(EXIT_NOT_CONVERGED);
        }
    };
    let svg = svg::render(&r.grid().nodes(), r.u.values());
    write_file(&args.svg, &svg)?;
    summary(out, &r)?;
    Ok(code)
}

fn validate_n_list(n_list: &[usize], methods: &[QuadratureMethod]) -> Result<()> {
    if n_list.is_empty() {
        bail!("--n-list is empty");
    }
    if let Some(w) = n_list.windows(2).find(|w| w[1] != 2 * w[0]) {
        bail!(
            "--n-list must double at each step ({} is followed by {})",
            w[0],
            w[1]
        );
    }
    for m in methods {
        m.check_grid(Grid::new(n_list[0])?)
            .with_context(|| format!("{m} with N = {}", n_list[0]))?;
    }
    Ok(())
}

/// Error of `r` against `reference`, a solution on a grid that `r`'s grid divides.
fn error_against(r: &SolveResult, reference: &SolveResult) -> f64 {
    let stride = reference.grid().n() / r.grid().n();
    r.u.values()
        .iter()
        .enumerate()
        .map(|(i, u)| (u - reference.u.values()[i * stride]).abs())
        .fold(0.0, f64::max)
}

pub fn cmd_study(args: &StudyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    let p = load(&args.file)?;
    let mut methods: Vec<QuadratureMethod> = Vec::new();
    for m in &args.methods {
        let m = QuadratureMethod::from(*m);
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    if methods.is_empty() {
        bail!("--methods is empty");
    }
    validate_n_list(&args.n_list, &methods)?;

    let reference = if p.exact.is_none() {
        let n_ref = 4 * args.n_list.last().copied().unwrap_or(0);
        let cfg = SolverConfig::new(n_ref, args.tol / 100.0, QuadratureMethod::ModifiedSimpson)
            .with_max_iter(args.max_iter);
        match run_solve(&p, &cfg)? {
            Outcome::Converged(r) => Some(r),
            Outcome::Stalled(_, msg) | Outcome::Failed(msg) => {
                writeln!(err, "reference solve at N = {n_ref}: {msg}")?;
                return Ok(EXIT_NOT_CONVERGED);
            }
        }
    } else {
        None
    };

    // independent solves; rows are reassembled in N order below
    let jobs: Vec<(QuadratureMethod, usize)> = methods
        .iter()
        .flat_map(|&m| args.n_list.iter().map(move |&n| (m, n)))
        .collect();
    let results: Vec<Outcome> = jobs
        .par_iter()
        .map(|&(m, n)| {
            run_solve(
                &p,
                &SolverConfig::new(n, args.tol, m).with_max_iter(args.max_iter),
            )
        })
        .collect::<Result<_>>()?;

    let mut code = EXIT_OK;
    let mut columns = Vec::new();
    for (mi, &method) in methods.iter().enumerate() {
        let mut rows = Vec::new();
        for (ni, &n) in args.n_list.iter().enumerate() {
            let r = match &results[mi * args.n_list.len() + ni] {
                Outcome::Converged(r) => r,
                Outcome::Stalled(r, msg) => {
                    writeln!(err, "{method}, N = {n}: {msg}")?;
                    code = EXIT_NOT_CONVERGED;
                    r
                }
                Outcome::Failed(msg) => {
                    writeln!(err, "{method}, N = {n}: {msg}")?;
                    return Ok(EXIT_NOT_CONVERGED);
                }
            };
            let error = match (&p.exact, &reference) {
                (Some(exact), _) => r.max_error(|t| exact(t)),
                (None, Some(reference)) => error_against(r, reference),
                (None, None) => unreachable!("reference solve runs whenever exact is absent"),
            };
            rows.push((n, r.iterations, error));
        }
        columns.push(StudyColumn {
            method,
            rows: order_table(&rows)?,
        });
    }
    let table = StudyTable {
        n_list: args.n_list.clone(),
        columns,
    };

    let note = reference.as_ref().map(|r| {
        format!(
            "errors measured against a modified Simpson reference solve at N = {} with TOL = {:e} (an oracle, not the exact solution)",
            r.grid().n(),
            args.tol / 100.0
        )
    });
    let text = match args.format {
        Format::Csv => {
            if let Some(note) = &note {
                writeln!(err, "note: {note}")?;
            }
            table.to_csv()
        }
        Format::Markdown => {
            let mut md = table.to_markdown();
            if let Some(note) = &note {
                let _ = write!(md, "\nNote: {note}.\n");
            }
            md
        }
    };
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(code)
}

fn print_report(out: &mut dyn Write, r: &UniquenessReport) -> Result<()> {
    let [l0, l1, l2] = r.lipschitz;
    let [b0, b1, b2] = r.domain_box;
    writeln!(out, "M = {}", r.m_bound)?;
    writeln!(out, "L0 = {l0}, L1 = {l1}, L2 = {l2}")?;
    writeln!(out, "q = L0/12 + L1/8 + L2/2 = {}", r.q)?;
    writeln!(out, "D_M: |u| <= {b0}, |u'| <= {b1}, |u''| <= {b2}")?;
    writeln!(
        out,
        "{}",
        if r.satisfied {
            "q < 1: contraction hypothesis holds"
        } else {
            "q >= 1: contraction hypothesis fails"
        }
    )?;
    Ok(())
}

pub fn cmd_check(args: &CheckArgs, out: &mut dyn Write, _err: &mut dyn Write) -> Result<u8> {
    let p = load(&args.file)?;
    let report = match (args.samples, p.constants) {
        (Some(samples), stated) => {
            let Some(m) = args.m.or(stated.map(|c| c.m)) else {
                bail!("estimating constants needs M: set it in the file or pass --m");
            };
            let est = estimate_constants(&p, m, samples)?;
            writeln!(
                out,
                "sampled on a lattice with {samples} intervals per axis"
            )?;
            writeln!(
                out,
                "sup|f| = {} {} M = {m}",
                est.sup_f,
                if est.sup_f <= m { "<=" } else { ">" }
            )?;
            est.report(m)?
        }
        (None, Some(c)) => uniqueness_report(c.m, c.l0, c.l1, c.l2)?,
        (None, None) => bail!(
            "{} sets no constants (M, L0, L1, L2); add them or pass --samples to estimate them",
            args.file.display()
        ),
    };
    print_report(out, &report)?;
    Ok(if report.satisfied {
        EXIT_OK
    } else {
        EXIT_HYPOTHESIS
    })
}
