//! CSV and SVG rendering of sampled series.

use std::fmt::Write as _;

use crate::engine::Sample;
use crate::numerics::FormatMode;

pub const SVG_WIDTH: f64 = 800.0;
pub const SVG_HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;
const DECIMALS: usize = 12;

/// Rows `x,value_exact,value_decimal`; failed points leave both value cells empty.
pub fn to_csv(samples: &[Sample]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "value_exact", "value_decimal"]).expect("in-memory write");
    for s in samples {
        let (exact, decimal) = match &s.value {
            Ok(v) => (v.to_string(), v.format(FormatMode::Decimal(DECIMALS))),
            Err(_) => (String::new(), String::new()),
        };
        w.write_record([s.x.to_string(), exact, decimal]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
}

/// A single polyline through the successful points, with linear axes.
pub fn to_svg(samples: &[Sample]) -> String {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter_map(|s| s.value.as_ref().ok().map(|v| (s.x.to_f64(), v.to_f64())))
        .collect();
    let (x0, x1) = bounds(pts.iter().map(|p| p.0));
    let (y0, y1) = bounds(pts.iter().map(|p| p.1).chain([0.0]));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (SVG_WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| SVG_HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (SVG_HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let axis_y = sy(0.0_f64.clamp(y0, y1));
    let axis_x = sx(0.0_f64.clamp(x0, x1));
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN}" y1="{axis_y:.2}" x2="{:.2}" y2="{axis_y:.2}" stroke="black"/>"#,
        SVG_WIDTH - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<line x1="{axis_x:.2}" y1="{MARGIN}" x2="{axis_x:.2}" y2="{:.2}" stroke="black"/>"#,
        SVG_HEIGHT - MARGIN
    );
    let _ = writeln!(out, r#"<text x="{MARGIN}" y="{:.2}" font-size="12">{x0}</text>"#, SVG_HEIGHT - MARGIN / 3.0);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{x1}</text>"#,
        SVG_WIDTH - MARGIN,
        SVG_HEIGHT - MARGIN / 3.0
    );
    let _ = writeln!(out, r#"<text x="4" y="{MARGIN}" font-size="12">{y1}</text>"#);
    let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
    let _ = writeln!(out, r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#, coords.join(" "));
    out.push_str("</svg>\n");
    out
}

fn bounds(it: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{sample_range, AlgoConfig, Budget, EvalError};
    use crate::numerics::Rational;

    #[test]
    fn csv_rows() {
        let s = sample_range(&AlgoConfig::classic(), &Rational::zero(), &Rational::ratio(1, 2), 3, Budget::default()).unwrap();
        let text = to_csv(&s);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,value_exact,value_decimal");
        assert_eq!(lines[1], "0,1/2,0.500000000000");
        assert_eq!(lines[2], "1/4,1/4,0.250000000000");
        assert_eq!(lines[3], "1/2,1/4,0.250000000000");
    }

    #[test]
    fn failures_leave_empty_cells() {
        let s = vec![Sample { x: Rational::one(), value: Err(EvalError::InvalidRange("x".into())) }];
        assert_eq!(to_csv(&s).lines().nth(1), Some("1,,"));
        assert!(to_svg(&s).contains("<polyline"));
    }

    #[test]
    fn svg_has_one_polyline() {
        let s = sample_range(&AlgoConfig::classic(), &Rational::ratio(-1, 2), &Rational::one(), 16, Budget::default()).unwrap();
        let svg = to_svg(&s);
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains(r#"width="800""#));
    }
}
