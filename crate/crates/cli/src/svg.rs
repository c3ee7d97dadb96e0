//! Plain-text SVG plot of rate against `min(n)`, one polyline per cover and mode.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::rows::ResultRow;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 56.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

pub fn render(title: &str, rows: &[ResultRow]) -> String {
    let mut series: BTreeMap<(String, String), Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.rate.is_finite()) {
        series
            .entry((r.cover.clone(), r.mode.clone()))
            .or_default()
            .push((r.n_min() as f64, r.rate));
    }
    for pts in series.values_mut() {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    }
    let all = series.values().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">min(n)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" font-family="sans-serif" font-size="12" transform="rotate(-90 16 {})" text-anchor="middle">rate</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (v, anchor_x, anchor_y, pos) in [
        (x0, sx(x0), bottom + 16.0, "middle"),
        (x1, sx(x1), bottom + 16.0, "middle"),
    ] {
        let _ = writeln!(
            s,
            r#"<text x="{anchor_x:.2}" y="{anchor_y:.2}" font-family="sans-serif" font-size="11" text-anchor="{pos}">{}</text>"#,
            fmt_tick(v)
        );
    }
    for v in [y0, y1] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            left - 6.0,
            sy(v) + 4.0,
            fmt_tick(v)
        );
    }
    for (i, ((cover, mode), pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{} {}</title></polyline>"#,
            coords.join(" "),
            escape(cover),
            escape(mode)
        );
        if i < 16 {
            let y = top + 14.0 * i as f64;
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{y:.2}" font-family="sans-serif" font-size="10" fill="{color}" text-anchor="end">{} {}</text>"#,
                right,
                escape(cover),
                escape(mode)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_tick(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e9 {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use topress::lattice::LatticePoint;
    use topress::solver::SolveStatus;

    #[test]
    fn one_polyline_per_series() {
        let mut rows = Vec::new();
        for t in 1..=3u64 {
            for mode in ["Q", "S"] {
                let n = LatticePoint::new(vec![t]);
                rows.push(ResultRow::new("d", "a<b", mode, &n, t, t as f64 * 0.7, None, SolveStatus::Exact));
            }
        }
        let svg = render("rates & more", &rows);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("a&lt;b"));
        assert!(svg.contains("rates &amp; more"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(render("empty", &[]).matches("<polyline").count(), 0);
    }
}
