//! Static SVG rendering of phase portraits.

use std::fmt::Write as _;

use hopf_bif::{CriticalPoint, PortraitCurve, Stability};

const PALETTE: &[&str] = &[
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
    "#7f7f7f", "#bcbd22", "#17becf",
];

/// Render level curves, the disk rim and critical-point markers into a
/// standalone SVG document. Curves sharing a level share a colour; the
/// legend lists each level once.
pub fn portrait_svg(
    sigma0: f64,
    levels: &[f64],
    curves: &[PortraitCurve],
    critical_points: &[(CriticalPoint, f64, f64)],
) -> String {
    let size = 760.0;
    let margin = 60.0;
    let radius = (2.0 * sigma0).sqrt();
    let scale = (size - 2.0 * margin) / (2.0 * radius);
    let map = |x: f64, y: f64| -> (f64, f64) {
        (margin + (x + radius) * scale, size - margin - (y + radius) * scale)
    };
    let mut svg = String::new();
    let legend_width = 230.0;
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{size}" viewBox="0 0 {w} {size}">"#,
        w = size + legend_width,
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    // Disk rim.
    let (cx, cy) = map(0.0, 0.0);
    let _ = writeln!(
        svg,
        r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="none" stroke="#333" stroke-width="1.5"/>"##,
        radius * scale,
    );
    for curve in curves {
        let color_idx = levels
            .iter()
            .position(|&l| l == curve.level)
            .unwrap_or(0);
        let color = PALETTE[color_idx % PALETTE.len()];
        if curve.vertices.len() == 1 {
            let (px, py) = map(curve.vertices[0].0, curve.vertices[0].1);
            let _ = writeln!(
                svg,
                r#"<circle cx="{px:.2}" cy="{py:.2}" r="2.5" fill="{color}"/>"#
            );
            continue;
        }
        let mut d = String::new();
        for (k, &(x, y)) in curve.vertices.iter().enumerate() {
            let (px, py) = map(x, y);
            let _ = write!(d, "{}{px:.2} {py:.2} ", if k == 0 { "M" } else { "L" });
        }
        if curve.closed {
            d.push('Z');
        }
        let _ = writeln!(
            svg,
            r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.2"/>"#
        );
    }
    // Critical-point markers: filled disk = stable, open diamond = unstable.
    for (cp, x, y) in critical_points {
        let (px, py) = map(*x, *y);
        match cp.stability {
            Stability::Unstable => {
                let _ = writeln!(
                    svg,
                    r##"<path d="M{px:.2} {:.2} L{:.2} {py:.2} L{px:.2} {:.2} L{:.2} {py:.2} Z" fill="white" stroke="#c00" stroke-width="1.8"/>"##,
                    py - 6.0,
                    px + 6.0,
                    py + 6.0,
                    px - 6.0,
                );
            }
            _ => {
                let _ = writeln!(
                    svg,
                    r##"<circle cx="{px:.2}" cy="{py:.2}" r="5" fill="#06c" stroke="black" stroke-width="0.8"/>"##
                );
            }
        }
    }
    // Legend of level energies.
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{margin}" font-family="monospace" font-size="14">sigma0 = {}</text>"#,
        size + 10.0,
        crate::io::fmt_f64(sigma0),
    );
    for (k, level) in levels.iter().enumerate() {
        let y = margin + 24.0 + 20.0 * k as f64;
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            svg,
            r#"<rect x="{:.2}" y="{:.2}" width="14" height="4" fill="{color}"/>"#,
            size + 10.0,
            y - 4.0,
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{y:.2}" font-family="monospace" font-size="13">E = {}</text>"#,
            size + 32.0,
            crate::io::fmt_f64(*level),
        );
    }
    svg.push_str("</svg>\n");
    svg
}
