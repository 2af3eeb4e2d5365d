//! Static SVG rendering of entropy-density curves.

use std::fmt::Write;

use crate::page_curves::PageCurve;

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 56.0;
const COLORS: [&str; 7] = ["#1f4e79", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#7f8c8d", "#16a085"];

/// Density `S/N` against `f = N_A/N`, one polyline per curve.
pub fn render_svg(title: &str, curves: &[PageCurve]) -> String {
    let mut y_max: f64 = 0.05;
    for c in curves {
        for d in c.densities() {
            y_max = y_max.max(d);
        }
    }
    y_max = (y_max * 1.1 * 20.0).ceil() / 20.0;
    let sx = |f: f64| PAD + f * (W - 2.0 * PAD);
    let sy = |d: f64| H - PAD - d / y_max * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{x0},{y0} L{x1},{y0} M{x0},{y0} L{x0},{y1}" stroke="black" fill="none"/>"#,
        x0 = sx(0.0),
        x1 = sx(1.0),
        y0 = sy(0.0),
        y1 = sy(y_max)
    );
    for i in 0..=10 {
        let f = i as f64 / 10.0;
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{f:.1}</text>"#, sx(f), sy(0.0) + 16.0);
    }
    for i in 0..=4 {
        let d = y_max * i as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{d:.3}</text>"#, sx(0.0) - 6.0, sy(d) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">f = N_A / N</text>"#, W / 2.0, H - 14.0);
    let _ = writeln!(s, r#"<text x="16" y="{}" transform="rotate(-90 16 {})" text-anchor="middle">S / N (bits)</text>"#, H / 2.0, H / 2.0);
    for (i, c) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = c.fractions().iter().zip(c.densities()).map(|(f, d)| format!("{:.2},{:.2}", sx(*f), sy(d))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, pts.join(" "));
        let ly = PAD + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            W - PAD - 150.0,
            W - PAD - 130.0
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, W - PAD - 124.0, ly + 4.0, escape(c.source.name()));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
