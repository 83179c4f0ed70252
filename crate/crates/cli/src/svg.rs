//! Minimal SVG 1.1 line plot of grid values over [0, 1].

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 40.0;

/// Render `(t_i, u_i)` as a polyline. A constant series is drawn through the
/// middle of the plot area.
pub fn render(ts: &[f64], us: &[f64]) -> String {
    let (lo, hi) = us
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &u| {
            (a.min(u), b.max(u))
        });
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 0.0) };
    let (plot_w, plot_h) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let x = |t: f64| LEFT + t * plot_w;
    let y = |u: f64| {
        if hi > lo {
            TOP + (hi - u) / (hi - lo) * plot_h
        } else {
            TOP + plot_h / 2.0
        }
    };
    let axis_y = TOP + plot_h;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<g stroke="black" stroke-width="1"><line x1="{LEFT}" y1="{axis_y}" x2="{}" y2="{axis_y}"/><line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{axis_y}"/></g>"#,
        WIDTH - RIGHT
    );

    let _ = writeln!(
        s,
        r#"<g font-family="sans-serif" font-size="12" text-anchor="middle">"#
    );
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{axis_y}" x2="{0:.2}" y2="{1}" stroke="black"/><text x="{0:.2}" y="{2}">{t}</text>"#,
            x(t),
            axis_y + 5.0,
            axis_y + 20.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{}">t</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 4.0
    );
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r#"<g font-family="sans-serif" font-size="12" text-anchor="end">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{:.2}">max {hi:.4e}</text>"#,
        LEFT - 6.0,
        y(hi) + 4.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{:.2}">min {lo:.4e}</text>"#,
        LEFT - 6.0,
        y(lo) + 4.0 + if hi > lo { 0.0 } else { 14.0 }
    );
    let _ = writeln!(s, "</g>");

    let points: Vec<String> = ts
        .iter()
        .zip(us)
        .map(|(&t, &u)| format!("{:.3},{:.3}", x(t), y(u)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#,
        points.join(" ")
    );
    s.push_str("</svg>\n");
    s
}
