//! Minimal SVG figures built from the same data as the CSV/JSON outputs.

use std::fmt::Write as _;

use tropdyn_core::dynamics::{ConvergenceReport, PointCloud};

const SIZE: f64 = 480.0;
const PAD: f64 = 40.0;

struct Frame {
    lo: [f64; 2],
    hi: [f64; 2],
}

impl Frame {
    fn px(&self, p: [f64; 2]) -> (f64, f64) {
        let w = SIZE - 2.0 * PAD;
        let sx = PAD + (p[0] - self.lo[0]) / (self.hi[0] - self.lo[0]) * w;
        let sy = SIZE - PAD - (p[1] - self.lo[1]) / (self.hi[1] - self.lo[1]) * w;
        (sx, sy)
    }
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
}

fn axes(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<rect x="{PAD}" y="{PAD}" width="{w}" height="{w}" fill="none" stroke="black"/>"#,
        w = SIZE - 2.0 * PAD
    );
}

/// Amoeba points (grey) over tropical support samples (red). Only the first
/// two coordinates are drawn.
pub fn amoeba(cloud: &PointCloud, spine: &PointCloud, lo: &[f64], hi: &[f64]) -> String {
    let frame = Frame {
        lo: [lo[0], lo.get(1).copied().unwrap_or(lo[0])],
        hi: [hi[0], hi.get(1).copied().unwrap_or(hi[0])],
    };
    let mut out = String::new();
    header(&mut out);
    axes(&mut out);
    for (cls, pts, r) in [("#888888", cloud, 1.0), ("#cc0000", spine, 0.8)] {
        let _ = writeln!(out, r##"<g fill="{cls}">"##);
        for p in &pts.points {
            let (x, y) = frame.px([p[0], p.get(1).copied().unwrap_or(0.0)]);
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}"/>"#);
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

/// log error against log m, with the fitted line C·m^(−ρ).
pub fn loglog(report: &ConvergenceReport) -> String {
    let xs: Vec<f64> = report.ms.iter().map(|m| (*m as f64).ln()).collect();
    let ys: Vec<f64> = report.errors.iter().map(|e| e.max(f64::MIN_POSITIVE).ln()).collect();
    let span = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo < 1e-12 {
            (lo - 1.0, hi + 1.0)
        } else {
            (lo - 0.05 * (hi - lo), hi + 0.05 * (hi - lo))
        }
    };
    let (x0, x1) = span(&xs);
    let (y0, y1) = span(&ys);
    let frame = Frame {
        lo: [x0, y0],
        hi: [x1, y1],
    };
    let mut out = String::new();
    header(&mut out);
    axes(&mut out);
    let fit = |x: f64| report.c.ln() - report.rho * x;
    let (ax, ay) = frame.px([x0, fit(x0)]);
    let (bx, by) = frame.px([x1, fit(x1)]);
    let _ = writeln!(
        out,
        r##"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="#cc0000"/>"##
    );
    for (x, y) in xs.iter().zip(&ys) {
        let (px, py) = frame.px([*x, *y]);
        let _ = writeln!(out, r#"<circle cx="{px:.2}" cy="{py:.2}" r="3" fill="black"/>"#);
    }
    let _ = writeln!(
        out,
        r#"<text x="{PAD}" y="{t}" font-size="12">{}: rho = {:.4}</text>"#,
        report.experiment,
        report.rho,
        t = PAD - 10.0
    );
    out.push_str("</svg>\n");
    out
}
