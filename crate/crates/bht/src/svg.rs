//! Minimal deterministic SVG rendering of a decay scan: axes, sample points,
//! the fitted line, and a slope annotation. Byte output is a pure function
//! of the scan, so golden-file comparisons are stable.

use std::fmt::Write as _;

use crate::error::{BhtError, Result};
use crate::harness::DecayScanResult;

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 52.0;

fn fnum(x: f64) -> String {
    format!("{x:.6}")
}

/// Render a scan to SVG text.
pub fn render_svg(scan: &DecayScanResult) -> Result<String> {
    if scan.axis.is_empty() || scan.values.is_empty() {
        return Err(BhtError::InvalidParameter("empty scan".into()));
    }
    if scan.values.iter().any(|&v| v <= 0.0 || v.is_nan()) {
        return Err(BhtError::InvalidParameter(
            "scan values must be positive for a log plot".into(),
        ));
    }
    let xs = &scan.axis;
    let ys: Vec<f64> = scan.values.iter().map(|v| v.log2()).collect();
    let (xmin, xmax) = bounds(xs);
    let (ymin, ymax) = bounds(&ys);
    let xpad = ((xmax - xmin) * 0.05).max(1e-9);
    let ypad = ((ymax - ymin) * 0.08).max(1e-9);
    let (xmin, xmax) = (xmin - xpad, xmax + xpad);
    let (ymin, ymax) = (ymin - ypad, ymax + ypad);
    let sx = |x: f64| MARGIN + (x - xmin) / (xmax - xmin) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - ymin) / (ymax - ymin) * (H - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" font-family=\"monospace\" font-size=\"12\">"
    );
    let _ = writeln!(out, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    // axes
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        fnum(MARGIN),
        fnum(H - MARGIN),
        fnum(W - MARGIN),
        fnum(H - MARGIN)
    );
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        fnum(MARGIN),
        fnum(MARGIN),
        fnum(MARGIN),
        fnum(H - MARGIN)
    );
    // axis extremes as tick labels
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\">{}</text>",
        fnum(MARGIN),
        fnum(H - MARGIN + 16.0),
        fnum(xmin + xpad)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
        fnum(W - MARGIN),
        fnum(H - MARGIN + 16.0),
        fnum(xmax - xpad)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\">log2 v in [{}, {}]</text>",
        fnum(MARGIN),
        fnum(MARGIN - 8.0),
        fnum(ymin + ypad),
        fnum(ymax - ypad)
    );
    // fitted line across the data span
    let y0 = fit_line_at(scan, xmin + xpad);
    let y1 = fit_line_at(scan, xmax - xpad);
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#888888\" stroke-dasharray=\"5,3\"/>",
        fnum(sx(xmin + xpad)),
        fnum(sy(y0)),
        fnum(sx(xmax - xpad)),
        fnum(sy(y1))
    );
    for (x, y) in xs.iter().zip(ys.iter()) {
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"#1f5fbf\"/>",
            fnum(sx(*x)),
            fnum(sy(*y))
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\">slope {} (r2 {})</text>",
        fnum(W - MARGIN - 220.0),
        fnum(MARGIN + 6.0),
        fnum(scan.slope),
        fnum(scan.r2)
    );
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

fn fit_line_at(scan: &DecayScanResult, x: f64) -> f64 {
    // the fitted line passes through the centroid with the fitted slope
    let n = scan.axis.len() as f64;
    let xbar = scan.axis.iter().sum::<f64>() / n;
    let ybar = scan.values.iter().map(|v| v.log2()).sum::<f64>() / n;
    ybar + scan.slope * (x - xbar)
}

fn bounds(v: &[f64]) -> (f64, f64) {
    (
        v.iter().copied().fold(f64::INFINITY, f64::min),
        v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    )
}

/// Write SVG atomically (temp file + rename).
pub fn emit_svg(scan: &DecayScanResult, path: &std::path::Path) -> Result<()> {
    let text = render_svg(scan)?;
    let tmp = path.with_extension("svg.tmp");
    std::fs::write(&tmp, &text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_scan() -> DecayScanResult {
        DecayScanResult::from_cells(
            vec![4.0, 5.0, 6.0, 7.0],
            vec![0.5, 0.35, 0.25, 0.18],
            1,
            1,
        )
        .unwrap()
    }

    #[test]
    fn render_two_point_and_reject_empty() {
        let scan = toy_scan();
        let svg = render_svg(&scan).unwrap();
        assert!(svg.contains("<svg"));
        assert_eq!(svg.matches("<circle").count(), 4);
        assert!(svg.contains("slope"));

        let empty = DecayScanResult {
            axis: vec![],
            values: vec![],
            slope: 0.0,
            r2: 0.0,
            trials_per_cell: 0,
            seed: 0,
        };
        assert!(render_svg(&empty).is_err());
    }

    #[test]
    fn byte_determinism() {
        let a = render_svg(&toy_scan()).unwrap();
        let b = render_svg(&toy_scan()).unwrap();
        assert_eq!(a, b);
    }
}
