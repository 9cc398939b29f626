//! SVG 1.1 renderings of colorings and scans. The plane is drawn with the
//! imaginary axis pointing up.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::abpe::AbpeScan;
use crate::coloring::ColoredScheme;
use crate::geometry::{BarrierCurve, DyadicSquare};

const WIDTH: f64 = 800.0;

struct Canvas {
    min: Complex64,
    max: Complex64,
    scale: f64,
    body: String,
}

impl Canvas {
    fn new(min: Complex64, max: Complex64) -> Self {
        Canvas {
            min,
            max,
            scale: WIDTH / (max.re - min.re),
            body: String::new(),
        }
    }

    fn x(&self, re: f64) -> f64 {
        (re - self.min.re) * self.scale
    }

    fn y(&self, im: f64) -> f64 {
        (self.max.im - im) * self.scale
    }

    fn rect(&mut self, lo: Complex64, side_x: f64, side_y: f64, style: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{:.4}" y="{:.4}" width="{:.4}" height="{:.4}" {style}/>"#,
            self.x(lo.re),
            self.y(lo.im + side_y),
            side_x * self.scale,
            side_y * self.scale
        );
    }

    fn square(&mut self, s: &DyadicSquare, class: &str) {
        let side = s.side();
        self.rect(s.corner(), side, side, &format!(r#"class="{class}""#));
    }

    fn polyline(&mut self, pts: &[Complex64], class: &str) {
        let coords: Vec<String> = pts.iter().map(|p| format!("{:.4},{:.4}", self.x(p.re), self.y(p.im))).collect();
        let _ = writeln!(self.body, r#"<polyline class="{class}" points="{}"/>"#, coords.join(" "));
    }

    fn barrier(&mut self, b: &BarrierCurve, class: &str) {
        for line in b.polylines() {
            self.polyline(&line, class);
        }
    }

    fn finish(self, style: &str) -> String {
        let height = (self.max.im - self.min.im) * self.scale;
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {WIDTH:.4} {height:.4}\">\n\
             <style>{style}</style>\n{}</svg>\n",
            self.body
        )
    }
}

/// Seed square in yellow, then per generation its yellow, green and red
/// squares and the barrier, one `<g>` per generation.
pub fn coloring_svg(scheme: &ColoredScheme) -> String {
    let (min, max) = scheme.window;
    let mut c = Canvas::new(min, max);
    let _ = writeln!(c.body, r#"<g id="seed" data-generation="{}">"#, scheme.k);
    c.square(&scheme.seed, "yellow");
    c.barrier(&scheme.seed_barrier, "barrier");
    c.body.push_str("</g>\n");
    for g in &scheme.generations {
        let _ = writeln!(c.body, r#"<g id="generation-{0}" data-generation="{0}">"#, g.generation);
        for (set, class) in [(&g.yellow, "yellow"), (&g.green, "green"), (&g.red, "red")] {
            for s in set.squares() {
                c.square(&s, class);
            }
        }
        if let Some(b) = &g.barrier {
            c.barrier(b, "barrier");
        }
        c.body.push_str("</g>\n");
    }
    c.finish(
        ".yellow{fill:#f2d024;stroke:#7a6a10;stroke-width:0.3}\
         .green{fill:#3aa655;stroke:#1d5a2c;stroke-width:0.3}\
         .red{fill:#d13b3b;stroke:#6e1d1d;stroke-width:0.3}\
         .barrier{fill:none;stroke:#000;stroke-width:1}",
    )
}

/// Heatmap of `log10 b_N`; divergent cells are white and each component is
/// outlined by its bounding box.
pub fn scan_svg(scan: &AbpeScan) -> String {
    let (min, max) = scan.config.window;
    let h = scan.config.resolution;
    let mut c = Canvas::new(min, max);
    let finite: Vec<f64> = scan
        .bounds
        .iter()
        .zip(&scan.convergent)
        .filter(|(b, &ok)| ok && b.is_finite() && **b > 0.0)
        .map(|(b, _)| b.log10())
        .collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for j in 0..scan.ny {
        for i in 0..scan.nx {
            let n = j * scan.nx + i;
            let corner = min + Complex64::new(i as f64 * h, j as f64 * h);
            let b = scan.bounds[n];
            if !scan.convergent[n] || !(b.is_finite() && b > 0.0) {
                continue;
            }
            let t = if hi > lo { (b.log10() - lo) / (hi - lo) } else { 0.0 };
            let shade = (40.0 + 200.0 * t).round() as u8;
            c.rect(corner, h, h, &format!(r#"fill="rgb({shade},{},{})""#, shade / 2, 255 - shade));
        }
    }
    for comp in &scan.components {
        let (a, b) = comp.bbox;
        c.rect(a, b.re - a.re, b.im - a.im, r#"class="component""#);
    }
    c.finish(".component{fill:none;stroke:#000;stroke-width:1;stroke-dasharray:4 2}")
}
