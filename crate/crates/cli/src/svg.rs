//! SVG figure of a six-point configuration: base and platform triangles, legs in red,
//! labelled vertices. Mathematical y-up orientation.

use std::fmt::Write;

const WIDTH: f64 = 480.0;
const MARGIN: f64 = 0.1;

/// Screen transform fitted to the points with a 10% margin on every side.
struct Frame {
    min: [f64; 2],
    scale: f64,
    height: f64,
    pad: [f64; 2],
}

impl Frame {
    fn fit(pts: &[[f64; 2]; 6]) -> Frame {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in pts {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        // a degenerate extent (collinear along an axis, or one point) still needs a box
        let span = [max[0] - min[0], max[1] - min[1]];
        let ext = span[0].max(span[1]).max(1e-9);
        let inner = WIDTH * (1.0 - 2.0 * MARGIN);
        let scale = inner / ext;
        let height = (span[1] * scale / (1.0 - 2.0 * MARGIN)).max(WIDTH * 0.25);
        let pad = [(WIDTH - span[0] * scale) / 2.0, (height - span[1] * scale) / 2.0];
        Frame { min, scale, height, pad }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        let x = self.pad[0] + (p[0] - self.min[0]) * self.scale;
        let y = self.height - (self.pad[1] + (p[1] - self.min[1]) * self.scale);
        (x, y)
    }
}

fn num(v: f64) -> String {
    // fixed precision keeps the output byte-stable
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Points are `x1..x3` (base) then `x4..x6` (platform); leg `i` joins `x_i` and `x_(i+3)`.
pub fn render(points: &[[f64; 2]; 6], title: &str) -> String {
    let fr = Frame::fit(points);
    let p: Vec<(f64, f64)> = points.iter().map(|&q| fr.map(q)).collect();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(WIDTH),
        h = num(fr.height)
    );
    let _ = writeln!(s, "  <title>{}</title>", escape(title));
    let _ = writeln!(s, r##"  <rect width="100%" height="100%" fill="#ffffff"/>"##);
    for (class, idx) in [("base", [0, 1, 2]), ("platform", [3, 4, 5])] {
        let pts: Vec<String> = idx.iter().chain(&idx[..1]).map(|&i| format!("{},{}", num(p[i].0), num(p[i].1))).collect();
        let _ = writeln!(
            s,
            r##"  <polyline class="{class}" points="{}" fill="none" stroke="#000000" stroke-width="1.5"/>"##,
            pts.join(" ")
        );
    }
    for i in 0..3 {
        let (a, b) = (p[i], p[i + 3]);
        let _ = writeln!(
            s,
            r##"  <line class="leg" data-leg="{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#d62728" stroke-width="2.5"/>"##,
            i + 1,
            num(a.0),
            num(a.1),
            num(b.0),
            num(b.1)
        );
    }
    for (i, &(x, y)) in p.iter().enumerate() {
        let _ = writeln!(s, r#"  <g class="vertex" data-label="x{}">"#, i + 1);
        let _ = writeln!(s, r##"    <circle cx="{}" cy="{}" r="3.5" fill="#000000"/>"##, num(x), num(y));
        let _ = writeln!(
            s,
            r#"    <text x="{}" y="{}" font-family="serif" font-size="14">x&#772;<tspan baseline-shift="sub" font-size="10">{}</tspan></text>"#,
            num(x + 6.0),
            num(y - 6.0),
            i + 1
        );
        s.push_str("  </g>\n");
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: [[f64; 2]; 6] = [[0.0, 0.0], [4.0, 0.0], [0.0, 4.0], [1.0, 1.0], [3.0, 1.0], [1.0, 3.0]];

    #[test]
    fn y_axis_points_up() {
        let fr = Frame::fit(&SQUARE);
        let (_, low) = fr.map([0.0, 0.0]);
        let (_, high) = fr.map([0.0, 4.0]);
        assert!(high < low);
    }

    #[test]
    fn margin_is_ten_percent() {
        let fr = Frame::fit(&SQUARE);
        let (x0, y0) = fr.map([0.0, 0.0]);
        let (x1, y1) = fr.map([4.0, 4.0]);
        assert!((x0 - 48.0).abs() < 1e-9 && (WIDTH - x1 - 48.0).abs() < 1e-9);
        assert!((fr.height - y0 - 48.0).abs() < 1e-9 && (y1 - 48.0).abs() < 1e-9);
    }

    #[test]
    fn collinear_points_render() {
        let line = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0], [4.0, 0.0], [5.0, 0.0]];
        let s = render(&line, "line");
        assert!(!s.contains("NaN") && !s.contains("inf"));
    }

    #[test]
    fn output_is_stable() {
        assert_eq!(render(&SQUARE, "a"), render(&SQUARE, "a"));
    }
}
