//! Deterministic SVG rendering of rotation-number region maps with the
//! curve drawn on top. All coordinates are formatted with four decimal
//! places so identical inputs produce byte-identical documents.

use std::f64::consts::TAU;
use std::fmt::Write;

use crate::winding::{Curve, RegionMap};

/// Plot area in pixels (square); the legend strip sits below it.
const PLOT_SIZE: f64 = 800.0;
const MARGIN: f64 = 30.0;
const LEGEND_HEIGHT: f64 = 46.0;
/// Points on the curve polyline.
const CURVE_SAMPLES: usize = 2048;

/// Sentinel cells (excluded or unresolved) are drawn in this gray.
const SENTINEL_COLOR: &str = "#d9d9d9";

/// Diverging blue–white–red ramp over the resolved value range.
fn ramp(t: f64) -> String {
    let lerp = |a: f64, b: f64, u: f64| a + (b - a) * u;
    let (lo, mid, hi) = ((33.0, 102.0, 172.0), (247.0, 247.0, 247.0), (178.0, 24.0, 43.0));
    let (r, g, b) = if t < 0.5 {
        let u = t * 2.0;
        (lerp(lo.0, mid.0, u), lerp(lo.1, mid.1, u), lerp(lo.2, mid.2, u))
    } else {
        let u = t * 2.0 - 1.0;
        (lerp(mid.0, hi.0, u), lerp(mid.1, hi.1, u), lerp(mid.2, hi.2, u))
    };
    format!("#{:02x}{:02x}{:02x}", r.round() as u8, g.round() as u8, b.round() as u8)
}

fn color_for(value: i64, min: i64, max: i64) -> String {
    if max == min {
        return ramp(0.5);
    }
    ramp((value - min) as f64 / (max - min) as f64)
}

/// Renders the region map as colored cells with the curve overlaid and a
/// legend of the distinct rotation numbers present.
pub fn render_svg(curve: &Curve, map: &RegionMap, title: &str) -> String {
    let width = PLOT_SIZE + 2.0 * MARGIN;
    let height = PLOT_SIZE + 2.0 * MARGIN + LEGEND_HEIGHT;
    let [x0, y0, x1, y1] = map.bounds;
    let sx = PLOT_SIZE / (x1 - x0);
    let sy = PLOT_SIZE / (y1 - y0);
    let to_px = |x: f64| MARGIN + (x - x0) * sx;
    let to_py = |y: f64| MARGIN + PLOT_SIZE - (y - y0) * sy;

    let mut resolved: Vec<i64> =
        map.values.iter().copied().filter(|v| *v != map.sentinel).collect();
    resolved.sort_unstable();
    resolved.dedup();
    let (min, max) = match (resolved.first(), resolved.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (0, 0),
    };
    let has_sentinel = map.values.iter().any(|v| *v == map.sentinel);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    let _ = writeln!(out, "<rect width=\"{width:.0}\" height=\"{height:.0}\" fill=\"#ffffff\"/>");
    let _ = writeln!(
        out,
        "<text x=\"{:.4}\" y=\"{:.4}\" font-family=\"monospace\" font-size=\"14\" \
         text-anchor=\"middle\">{}</text>",
        width / 2.0,
        MARGIN - 10.0,
        xml_escape(title)
    );

    // Grid nodes become equal tiles centered on the node positions; the
    // map is row-major from the bottom row up.
    let cw = PLOT_SIZE / (map.nx - 1).max(1) as f64;
    let ch = PLOT_SIZE / (map.ny - 1).max(1) as f64;
    for iy in 0..map.ny {
        for ix in 0..map.nx {
            let v = map.values[iy * map.nx + ix];
            let color =
                if v == map.sentinel { SENTINEL_COLOR.into() } else { color_for(v, min, max) };
            let cx = MARGIN + ix as f64 * cw;
            let cy = MARGIN + PLOT_SIZE - iy as f64 * ch;
            let _ = writeln!(
                out,
                "<rect x=\"{:.4}\" y=\"{:.4}\" width=\"{:.4}\" height=\"{:.4}\" fill=\"{}\"/>",
                cx - cw / 2.0,
                cy - ch / 2.0,
                cw,
                ch,
                color
            );
        }
    }

    let _ = write!(out, "<polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\" points=\"");
    for i in 0..=CURVE_SAMPLES {
        let t = TAU * (i % CURVE_SAMPLES) as f64 / CURVE_SAMPLES as f64;
        let (x, y) = curve.point_at(t);
        if i > 0 {
            let _ = write!(out, " ");
        }
        let _ = write!(out, "{:.4},{:.4}", to_px(x), to_py(y));
    }
    let _ = writeln!(out, "\"/>");

    let _ = writeln!(
        out,
        "<rect x=\"{MARGIN:.4}\" y=\"{MARGIN:.4}\" width=\"{PLOT_SIZE:.4}\" \
         height=\"{PLOT_SIZE:.4}\" fill=\"none\" stroke=\"#333333\"/>"
    );

    // Legend: one swatch per distinct value, plus one for sentinel cells.
    let ly = MARGIN + PLOT_SIZE + 18.0;
    let mut lx = MARGIN;
    for v in &resolved {
        let _ = writeln!(
            out,
            "<rect x=\"{lx:.4}\" y=\"{ly:.4}\" width=\"18\" height=\"18\" fill=\"{}\" \
             stroke=\"#333333\"/>",
            color_for(*v, min, max)
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.4}\" y=\"{:.4}\" font-family=\"monospace\" font-size=\"13\">{v}</text>",
            lx + 24.0,
            ly + 14.0
        );
        lx += 24.0 + 14.0 * (1 + v.to_string().len()) as f64;
    }
    if has_sentinel {
        let _ = writeln!(
            out,
            "<rect x=\"{lx:.4}\" y=\"{ly:.4}\" width=\"18\" height=\"18\" \
             fill=\"{SENTINEL_COLOR}\" stroke=\"#333333\"/>"
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.4}\" y=\"{:.4}\" font-family=\"monospace\" font-size=\"13\">\
             excluded</text>",
            lx + 24.0,
            ly + 14.0
        );
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigpoly::TrigPoly;
    use crate::winding::region_map;

    fn circle() -> Curve {
        Curve::holonomic(&TrigPoly::harmonic(1, 0.0, 1.0)).unwrap()
    }

    #[test]
    fn svg_is_deterministic_and_well_formed() {
        let curve = circle();
        let map = region_map(&curve, [-2.0, -2.0, 2.0, 2.0], 9, 9);
        let a = render_svg(&curve, &map, "unit circle");
        let b = render_svg(&curve, &map, "unit circle");
        assert_eq!(a, b);
        assert!(a.starts_with("<svg "));
        assert!(a.trim_end().ends_with("</svg>"));
        // background + 81 cells + frame + legend swatches (values {0, 1}
        // plus the excluded entry for the four on-curve nodes).
        assert_eq!(a.matches("<rect").count(), 1 + 81 + 1 + 2 + 1);
        assert_eq!(a.matches(">excluded<").count(), 1);
        assert_eq!(a.matches("<polyline").count(), 1);
    }

    #[test]
    fn ramp_endpoints_and_midpoint() {
        assert_eq!(ramp(0.0), "#2166ac");
        assert_eq!(ramp(0.5), "#f7f7f7");
        assert_eq!(ramp(1.0), "#b2182b");
    }

    #[test]
    fn escapes_markup_in_titles() {
        assert_eq!(xml_escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }
}
