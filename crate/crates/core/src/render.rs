//! Static SVG of the real zero set of a polynomial in `x, y`.
//!
//! Marching squares on a uniform grid: each cell edge with a sign change
//! gets a crossing by linear interpolation, and the crossings of a cell are
//! joined. Saddle cells are resolved by the value at the cell centre. Even
//! multiplicity components do not change sign, so exact inputs are reduced to
//! their squarefree part first.

use std::fmt::Write as _;

use num_complex::Complex64 as C;

use crate::algebra::{squarefree_part, MultiPoly};
use crate::error::{Error, Result};

pub const VIEW: f64 = 800.0;

#[derive(Clone, Copy, Debug)]
pub struct RenderOptions {
    /// `[xmin, xmax, ymin, ymax]`.
    pub window: [f64; 4],
    /// Cells per side.
    pub grid: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { window: [-2.0, 2.0, -2.0, 2.0], grid: 400 }
    }
}

pub type Segment = [(f64, f64); 2];

/// Contour segments of `f = 0` in plane coordinates.
pub fn zero_set_segments(f: &MultiPoly, opts: &RenderOptions) -> Result<Vec<Segment>> {
    if f.nvars() != 2 {
        return Err(Error::Usage("render needs a polynomial in x and y".into()));
    }
    let [x0, x1, y0, y1] = opts.window;
    if !(x1 > x0 && y1 > y0) || opts.grid < 2 {
        return Err(Error::Usage("empty render window".into()));
    }
    if f.terms().any(|(_, c)| c.to_complex().im.abs() > 1e-12 * (1.0 + c.abs_f64())) {
        return Err(Error::Domain("render needs real coefficients".into()));
    }
    let g = if f.is_exact() && !f.is_constant() { squarefree_part(f)? } else { f.clone() };
    let n = opts.grid;
    let (hx, hy) = ((x1 - x0) / n as f64, (y1 - y0) / n as f64);
    let at = |x: f64, y: f64| g.eval_c(&[C::new(x, 0.0), C::new(y, 0.0)]).re;
    let vals: Vec<Vec<f64>> = (0..=n)
        .map(|j| (0..=n).map(|i| at(x0 + i as f64 * hx, y0 + j as f64 * hy)).collect())
        .collect();
    // zero counts as positive so that every crossing is a strict sign change
    let pos = |v: f64| v >= 0.0;
    let mut segs = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let (xa, ya) = (x0 + i as f64 * hx, y0 + j as f64 * hy);
            let corner = [
                (xa, ya, vals[j][i]),
                (xa + hx, ya, vals[j][i + 1]),
                (xa + hx, ya + hy, vals[j + 1][i + 1]),
                (xa, ya + hy, vals[j + 1][i]),
            ];
            let mut cross = Vec::with_capacity(4);
            for e in 0..4 {
                let (p, q) = (corner[e], corner[(e + 1) % 4]);
                if pos(p.2) != pos(q.2) {
                    let t = p.2 / (p.2 - q.2);
                    cross.push((e, (p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1))));
                }
            }
            match cross.len() {
                2 => segs.push([cross[0].1, cross[1].1]),
                4 => {
                    // saddle: pair edges so that the centre's sign region stays connected
                    let centre = pos(at(xa + hx / 2.0, ya + hy / 2.0));
                    if centre == pos(corner[0].2) {
                        segs.push([cross[0].1, cross[1].1]);
                        segs.push([cross[2].1, cross[3].1]);
                    } else {
                        segs.push([cross[3].1, cross[0].1]);
                        segs.push([cross[1].1, cross[2].1]);
                    }
                }
                _ => {}
            }
        }
    }
    Ok(segs)
}

/// An 800 by 800 SVG with axes and the zero set of `f`.
pub fn render_svg(f: &MultiPoly, opts: &RenderOptions) -> Result<String> {
    let segs = zero_set_segments(f, opts)?;
    let [x0, x1, y0, y1] = opts.window;
    let sx = |x: f64| (x - x0) / (x1 - x0) * VIEW;
    let sy = |y: f64| (y1 - y) / (y1 - y0) * VIEW;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#
    );
    let _ = writeln!(out, r#"<desc>{}  window [{x0}, {x1}] x [{y0}, {y1}]</desc>"#, escape(&f.to_string()));
    let _ = writeln!(out, r##"<rect width="800" height="800" fill="#ffffff"/>"##);
    if x0 < 0.0 && x1 > 0.0 {
        let _ = writeln!(out, r##"<line x1="{0:.2}" y1="0" x2="{0:.2}" y2="800" stroke="#bbbbbb" stroke-width="1"/>"##, sx(0.0));
    }
    if y0 < 0.0 && y1 > 0.0 {
        let _ = writeln!(out, r##"<line x1="0" y1="{0:.2}" x2="800" y2="{0:.2}" stroke="#bbbbbb" stroke-width="1"/>"##, sy(0.0));
    }
    let mut d = String::new();
    for [(ax, ay), (bx, by)] in &segs {
        let _ = write!(d, "M{:.2} {:.2}L{:.2} {:.2}", sx(*ax), sy(*ay), sx(*bx), sy(*by));
    }
    let _ = writeln!(
        out,
        r##"<path d="{d}" fill="none" stroke="#1f4e99" stroke-width="1.6" stroke-linecap="round"/>"##
    );
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Ring;
    use crate::webfile::parse_plane;

    #[test]
    fn circle_segments_lie_on_circle() {
        let f = parse_plane("x^2 + y^2 - 1", Ring::Rational).unwrap();
        let segs = zero_set_segments(&f, &RenderOptions { grid: 100, ..Default::default() }).unwrap();
        assert!(segs.len() > 100);
        for s in &segs {
            for (x, y) in s {
                assert!(((x * x + y * y).sqrt() - 1.0).abs() < 2e-3);
            }
        }
    }

    #[test]
    fn double_component_still_drawn() {
        let f = parse_plane("(y - x)^2", Ring::Rational).unwrap();
        let segs = zero_set_segments(&f, &RenderOptions::default()).unwrap();
        assert!(!segs.is_empty());
        assert!(segs.iter().flatten().all(|(x, y)| (x - y).abs() < 1e-9));
    }

    #[test]
    fn cusp_svg_is_deterministic() {
        let f = parse_plane("y^2 - x^3", Ring::Rational).unwrap();
        let a = render_svg(&f, &RenderOptions::default()).unwrap();
        let b = render_svg(&f, &RenderOptions::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg") && a.contains("viewBox=\"0 0 800 800\"") && a.contains("<path d=\"M"));
        assert!(parse_plane("x", Ring::Complex).map(|p| render_svg(&p, &RenderOptions::default())).is_ok());
    }
}
