//! Minimal SVG charts: heatmaps and line plots.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 120.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Viridis-like ramp, `t` in `[0, 1]`.
fn color(t: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let t = t.clamp(0.0, 1.0) * 4.0;
    let i = (t.floor() as usize).min(3);
    let f = t - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |x: f64, y: f64| (x + (y - x) * f).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(title)
    );
}

fn axis_labels(out: &mut String, x_label: &str, y_label: &str) {
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + (W - LEFT - RIGHT) / 2.0,
        H - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text transform="translate(20 {}) rotate(-90)" text-anchor="middle">{}</text>"#,
        TOP + (H - TOP - BOTTOM) / 2.0,
        escape(y_label)
    );
}

fn label(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.0e}")
    } else {
        format!("{}", (v * 1e4).round() / 1e4)
    }
}

/// Heatmap of `values[row][col]` with columns along x and rows along y.
/// NaN cells are drawn grey. Values are mapped linearly onto the colour
/// ramp between their finite min and max.
pub fn heatmap(
    title: &str,
    x_label: &str,
    y_label: &str,
    xs: &[f64],
    ys: &[f64],
    values: &[Vec<f64>],
    scale_label: &str,
) -> String {
    let mut out = String::new();
    header(&mut out, title);
    axis_labels(&mut out, x_label, y_label);
    let finite: Vec<f64> = values.iter().flatten().copied().filter(|v| v.is_finite()).collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
    let (cw, ch) = (pw / xs.len().max(1) as f64, ph / ys.len().max(1) as f64);
    for (r, row) in values.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            let fill = if v.is_finite() {
                color((v - lo) / span)
            } else {
                "#bbbbbb".into()
            };
            let (x, y) = (LEFT + c as f64 * cw, TOP + ph - (r + 1) as f64 * ch);
            let _ = writeln!(
                out,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
                cw + 0.3,
                ch + 0.3
            );
        }
    }
    for (c, x) in xs.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + (c as f64 + 0.5) * cw,
            TOP + ph + 16.0,
            label(*x)
        );
    }
    for (r, y) in ys.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            TOP + ph - (r as f64 + 0.5) * ch + 4.0,
            label(*y)
        );
    }
    // Colour bar.
    let bx = W - RIGHT + 20.0;
    for i in 0..50 {
        let t = i as f64 / 49.0;
        let y = TOP + ph - (i + 1) as f64 * ph / 50.0;
        let _ = writeln!(
            out,
            r#"<rect x="{bx}" y="{y:.2}" width="16" height="{:.2}" fill="{}"/>"#,
            ph / 50.0 + 0.3,
            color(t)
        );
    }
    if !finite.is_empty() {
        let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, bx + 20.0, TOP + ph, label(lo));
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">{}</text>"#,
            bx + 20.0,
            TOP + 10.0,
            label(hi)
        );
    }
    let _ = writeln!(
        out,
        r#"<text transform="translate({} {}) rotate(-90)" text-anchor="middle">{}</text>"#,
        bx + 60.0,
        TOP + ph / 2.0,
        escape(scale_label)
    );
    out.push_str("</svg>\n");
    out
}

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Line plot; with `log_y` the y axis is logarithmic and non-positive
/// points are dropped. `reference` draws a dashed horizontal line.
pub fn line_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
    log_y: bool,
    reference: Option<(f64, &str)>,
) -> String {
    let ty = |y: f64| if log_y { y.log10() } else { y };
    let keep = |y: f64| y.is_finite() && (!log_y || y > 0.0);
    let pts: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|&(x, y)| x.is_finite() && keep(y))
        .chain(reference.map(|(y, _)| (f64::NAN, y)).filter(|&(_, y)| keep(y)))
        .collect();
    let xs: Vec<f64> = pts.iter().map(|p| p.0).filter(|x| x.is_finite()).collect();
    let (mut x0, mut x1) = (
        xs.iter().copied().fold(f64::INFINITY, f64::min),
        xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    let (mut y0, mut y1) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
        (a.min(ty(p.1)), b.max(ty(p.1)))
    });
    if !(x1 - x0).is_finite() || x1 <= x0 {
        x0 -= 1.0;
        x1 += 1.0;
    }
    if !(y1 - y0).is_finite() || y1 <= y0 {
        y0 -= 1.0;
        y1 += 1.0;
    }
    if log_y {
        y0 = y0.floor();
        y1 = y1.ceil();
    }
    let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + ph - (ty(y) - y0) / (y1 - y0) * ph;

    let mut out = String::new();
    header(&mut out, title);
    axis_labels(&mut out, x_label, y_label);
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=5 {
        let x = x0 + (x1 - x0) * i as f64 / 5.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            px(x),
            TOP + ph + 16.0,
            label(x)
        );
    }
    if log_y {
        for e in y0 as i32..=y1 as i32 {
            let y = 10f64.powi(e);
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{:.2}" text-anchor="end">1e{e}</text>"#,
                LEFT - 6.0,
                py(y) + 4.0
            );
        }
    } else {
        for i in 0..=5 {
            let y = y0 + (y1 - y0) * i as f64 / 5.0;
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
                LEFT - 6.0,
                py(y) + 4.0,
                label(y)
            );
        }
    }
    if let Some((y, name)) = reference.filter(|&(y, _)| keep(y)) {
        let _ = writeln!(
            out,
            r#"<line x1="{LEFT}" x2="{}" y1="{:.2}" y2="{:.2}" stroke="grey" stroke-dasharray="6 4"/>"#,
            LEFT + pw,
            py(y),
            py(y)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}" fill="grey">{}</text>"#,
            LEFT + pw + 4.0,
            py(y) + 4.0,
            escape(name)
        );
    }
    for (i, s) in series.iter().enumerate() {
        let c = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .filter(|&&(x, y)| x.is_finite() && keep(y))
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        if !path.is_empty() {
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{c}" stroke-width="2"/>"#,
                path.join(" ")
            );
            for p in &path {
                let (x, y) = p.split_once(',').expect("formatted pair");
                let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="3" fill="{c}"/>"#);
            }
        }
        let ly = TOP + 14.0 + 16.0 * i as f64 + 60.0;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{ly}" fill="{c}">{}</text>"#,
            LEFT + pw + 4.0,
            escape(&s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}
