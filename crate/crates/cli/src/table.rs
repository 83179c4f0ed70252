//! Rendering of refinement-study tables.

use std::fmt::Write as _;

use thirdbvp_core::{ConvergenceRow, QuadratureMethod};

/// One method's column pair (error, order) over the whole N list.
#[derive(Debug, Clone)]
pub struct StudyColumn {
    pub method: QuadratureMethod,
    pub rows: Vec<ConvergenceRow>,
}

#[derive(Debug, Clone)]
pub struct StudyTable {
    pub n_list: Vec<usize>,
    pub columns: Vec<StudyColumn>,
}

fn error_header(method: QuadratureMethod) -> &'static str {
    match method {
        QuadratureMethod::Trapezium => "Error_trap",
        QuadratureMethod::ModifiedSimpson => "Error_Simp",
        QuadratureMethod::Simpson => "Error_SimpPlain",
    }
}

impl StudyTable {
    fn headers(&self) -> Vec<&'static str> {
        let mut h = vec!["N", "K"];
        for c in &self.columns {
            h.push(error_header(c.method));
            h.push("Order");
        }
        h
    }

    /// Iteration counts for row `r`; shown as `a/b` when the methods disagree.
    fn k_cell(&self, r: usize) -> String {
        let ks: Vec<usize> = self.columns.iter().map(|c| c.rows[r].k_iters).collect();
        if ks.windows(2).all(|w| w[0] == w[1]) {
            ks.first().map(|k| k.to_string()).unwrap_or_default()
        } else {
            ks.iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join("/")
        }
    }

    /// Full-precision CSV; an undefined order is an empty field.
    pub fn to_csv(&self) -> String {
        let mut s = self.headers().join(",");
        s.push('\n');
        for (r, n) in self.n_list.iter().enumerate() {
            let _ = write!(s, "{n},{}", self.k_cell(r));
            for c in &self.columns {
                let row = &c.rows[r];
                let _ = write!(s, ",{:.16e},", row.error);
                if let Some(o) = row.order {
                    let _ = write!(s, "{o:.16e}");
                }
            }
            s.push('\n');
        }
        s
    }

    /// Markdown with errors as `d.dddde-x` and orders to four decimals.
    pub fn to_markdown(&self) -> String {
        let headers = self.headers();
        let mut s = format!("| {} |\n", headers.join(" | "));
        let _ = writeln!(s, "|{}", "---|".repeat(headers.len()));
        for (r, n) in self.n_list.iter().enumerate() {
            let _ = write!(s, "| {n} | {} |", self.k_cell(r));
            for c in &self.columns {
                let row = &c.rows[r];
                let order = match row.order {
                    Some(o) => format!("{o:.4}"),
                    None if row.degenerate => "n/a".to_string(),
                    None => String::new(),
                };
                let _ = write!(s, " {:.4e} | {order} |", row.error);
            }
            s.push('\n');
        }
        s
    }
}
