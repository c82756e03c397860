//! Self-contained SVG renderings of experiment results.
//!
//! Every drawn datum carries `data-*` attributes with its unscaled values so
//! plots can be checked against the numbers they show.

use std::fmt::Write;

use crate::mitigation::{scaling_curve, FitResult, Method};

use super::run::{mean_epsilon_ratios, ExperimentResults};
use super::stats::BoxStats;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 56.0;

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone) -> Frame {
        let range = |it: &mut dyn Iterator<Item = f64>| {
            let (lo, hi) = it.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
            if !lo.is_finite() {
                return (0.0, 1.0);
            }
            let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 };
            (lo - pad, hi + pad)
        };
        Frame { x: range(&mut xs.clone()), y: range(&mut ys.clone()) }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (W - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        H - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (H - 2.0 * MARGIN)
    }
}

fn header(out: &mut String, title: &str, x_label: &str, y_label: &str, f: &Frame) {
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n\
         <text x=\"14\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">{}</text>\n",
        W / 2.0,
        escape(title),
        W / 2.0,
        H - 14.0,
        escape(x_label),
        H / 2.0,
        H / 2.0,
        escape(y_label)
    );
    let (x0, x1, y0, y1) = (MARGIN, W - MARGIN, MARGIN, H - MARGIN);
    let _ = writeln!(out, "<path class=\"axes\" d=\"M{x0} {y0} L{x0} {y1} L{x1} {y1}\" stroke=\"black\" fill=\"none\"/>");
    for (v, anchor_x, anchor_y) in [
        (f.x.0, x0, y1 + 16.0),
        (f.x.1, x1, y1 + 16.0),
    ] {
        let _ = writeln!(out, "<text x=\"{anchor_x}\" y=\"{anchor_y}\" text-anchor=\"middle\">{v:.3}</text>");
    }
    for (v, anchor_y) in [(f.y.0, y1), (f.y.1, y0)] {
        let _ = writeln!(out, "<text x=\"{}\" y=\"{anchor_y}\" text-anchor=\"end\">{v:.3}</text>", x0 - 4.0);
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn polyline(f: &Frame, pts: impl Iterator<Item = (f64, f64)>) -> String {
    let mut d = String::new();
    for (i, (x, y)) in pts.enumerate() {
        let _ = write!(d, "{}{:.2} {:.2} ", if i == 0 { 'M' } else { 'L' }, f.px(x), f.py(y));
    }
    d.trim_end().to_string()
}

/// Data points of one run with the fitted curve through them.
pub fn scatter_svg(title: &str, x_label: &str, points: &[(f64, f64)], fit: Option<&FitResult>) -> String {
    let xs = points.iter().map(|p| p.0).chain(std::iter::once(0.0));
    let mut ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    if let Some(fit) = fit {
        ys.push(fit.zero_noise_value);
    }
    let f = Frame::new(xs, ys.iter().copied());
    let mut out = String::new();
    header(&mut out, title, x_label, "expectation value", &f);
    if let Some(fit) = fit {
        let n = 100;
        let curve = (0..=n).map(|i| {
            let x = f.x.0.max(0.0) + (f.x.1 - f.x.0.max(0.0)) * i as f64 / n as f64;
            (x, fit.predict(x))
        });
        let _ = writeln!(
            out,
            "<path class=\"fit\" d=\"{}\" stroke=\"firebrick\" fill=\"none\" data-zero-noise=\"{}\"/>",
            polyline(&f, curve),
            fit.zero_noise_value
        );
        let _ = writeln!(
            out,
            "<circle class=\"extrapolated\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"5\" fill=\"none\" stroke=\"firebrick\" data-y=\"{}\"/>",
            f.px(0.0),
            f.py(fit.zero_noise_value),
            fit.zero_noise_value
        );
    }
    for &(x, y) in points {
        let _ = writeln!(
            out,
            "<circle class=\"point\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.6\" data-x=\"{x}\" data-y=\"{y}\"/>",
            f.px(x),
            f.py(y)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// One box per labelled sample, with the ideal value as a dashed line.
pub fn box_svg(title: &str, boxes: &[(String, BoxStats)], ideal: f64) -> String {
    let ys = boxes
        .iter()
        .flat_map(|(_, b)| [b.whisker_lo, b.whisker_hi].into_iter().chain(b.outliers.iter().copied()))
        .chain(std::iter::once(ideal));
    let n = boxes.len().max(1) as f64;
    let f = Frame::new([0.0, n].into_iter(), ys.collect::<Vec<_>>().into_iter());
    let mut out = String::new();
    header(&mut out, title, "method", "extrapolated value", &f);
    let _ = writeln!(
        out,
        "<line class=\"ideal\" x1=\"{}\" x2=\"{}\" y1=\"{:.2}\" y2=\"{:.2}\" stroke=\"gray\" stroke-dasharray=\"6 4\" data-value=\"{ideal}\"/>",
        MARGIN,
        W - MARGIN,
        f.py(ideal),
        f.py(ideal)
    );
    for (i, (label, b)) in boxes.iter().enumerate() {
        let cx = f.px(i as f64 + 0.5);
        let half = 0.3 * (f.px(1.0) - f.px(0.0)) / 1.0;
        let _ = writeln!(out, "<g class=\"box-group\" data-label=\"{}\">", escape(label));
        let _ = writeln!(
            out,
            "<line class=\"whisker\" x1=\"{cx:.2}\" x2=\"{cx:.2}\" y1=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" data-lo=\"{}\" data-hi=\"{}\"/>",
            f.py(b.whisker_lo),
            f.py(b.whisker_hi),
            b.whisker_lo,
            b.whisker_hi
        );
        let _ = writeln!(
            out,
            "<rect class=\"box\" x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"lightsteelblue\" stroke=\"black\" data-q1=\"{}\" data-q3=\"{}\"/>",
            cx - half,
            f.py(b.q3),
            2.0 * half,
            (f.py(b.q1) - f.py(b.q3)).max(0.0),
            b.q1,
            b.q3
        );
        let _ = writeln!(
            out,
            "<line class=\"median\" x1=\"{:.2}\" x2=\"{:.2}\" y1=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"2\" data-value=\"{}\"/>",
            cx - half,
            cx + half,
            f.py(b.median),
            f.py(b.median),
            b.median
        );
        for &o in &b.outliers {
            let _ = writeln!(
                out,
                "<circle class=\"outlier\" cx=\"{cx:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"none\" stroke=\"black\" data-value=\"{o}\"/>",
                f.py(o)
            );
        }
        let _ = writeln!(out, "<text x=\"{cx:.2}\" y=\"{}\" text-anchor=\"middle\">{}</text>", H - MARGIN + 30.0, escape(label));
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

/// Measured `ε(λ)/ε(1)` ratios against the exponential-decay curve with
/// rate `a2` (dashed), which passes through 1 at `λ = 1`.
pub fn scaling_svg(title: &str, ratios: &[(f64, f64)], a2: f64) -> String {
    let lmax = ratios.iter().map(|r| r.0).fold(1.0, f64::max);
    let n = 100;
    let curve: Vec<(f64, f64)> = (0..=n).map(|i| {
        let l = 1.0 + (lmax - 1.0) * i as f64 / n as f64;
        (l, scaling_curve(a2, l))
    }).collect();
    let f = Frame::new(
        ratios.iter().map(|r| r.0).chain([1.0, lmax]),
        ratios.iter().map(|r| r.1).chain(curve.iter().map(|c| c.1)).collect::<Vec<_>>().into_iter(),
    );
    let mut out = String::new();
    header(&mut out, title, "noise scaling factor", "error strength ratio", &f);
    let _ = writeln!(
        out,
        "<path class=\"reference\" d=\"{}\" stroke=\"gray\" stroke-dasharray=\"6 4\" fill=\"none\" data-a2=\"{a2}\" data-start-x=\"1\" data-start-y=\"{}\"/>",
        polyline(&f, curve.iter().copied()),
        curve[0].1
    );
    for &(l, r) in ratios {
        let _ = writeln!(
            out,
            "<circle class=\"point\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"darkorange\" data-x=\"{l}\" data-y=\"{r}\"/>",
            f.px(l),
            f.py(r)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// File name and SVG text of every plot for `results`.
pub fn emit_plots(results: &ExperimentResults) -> Vec<(String, String)> {
    let mut plots = Vec::new();
    let bench = results.summary.benchmark.as_str();
    for method in [Method::Szne, Method::Iczne] {
        if let Some(o) = results.outcomes(method).next() {
            let points: Vec<(f64, f64)> = o
                .points
                .iter()
                .map(|p| match method {
                    Method::Iczne => (p.epsilon.unwrap_or(0.0), p.expval),
                    _ => (p.lambda as f64, p.expval),
                })
                .collect();
            let x_label = if method == Method::Iczne { "error strength" } else { "noise scaling factor" };
            let title = format!("{bench} {method}: run {}", first_run(results, method));
            plots.push((format!("scatter_{method}.svg"), scatter_svg(&title, x_label, &points, o.fit.as_ref())));
        }
    }
    let boxes: Vec<(String, BoxStats)> = results
        .summary
        .methods
        .iter()
        .filter_map(|m| m.box_stats.clone().map(|b| (m.method.to_string(), b)))
        .collect();
    if !boxes.is_empty() {
        plots.push(("box.svg".into(), box_svg(&format!("{bench}: {} runs", results.summary.runs), &boxes, results.summary.ideal)));
    }
    if let Some(a2) = results.summary.scaling_rate {
        let ratios = mean_epsilon_ratios(results.records.iter().filter(|r| r.method == Method::Iczne));
        plots.push(("scaling.svg".into(), scaling_svg(&format!("{bench}: error strength scaling"), &ratios, a2)));
    }
    plots
}

fn first_run(results: &ExperimentResults, method: Method) -> usize {
    results.records.iter().find(|r| r.method == method && r.outcome.is_ok()).map(|r| r.run).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::stats::box_stats;

    fn attr_values(svg: &str, class: &str, attr: &str) -> Vec<f64> {
        svg.lines()
            .filter(|l| l.contains(&format!("class=\"{class}\"")))
            .map(|l| {
                let key = format!("{attr}=\"");
                let start = l.find(&key).unwrap() + key.len();
                l[start..start + l[start..].find('"').unwrap()].parse().unwrap()
            })
            .collect()
    }

    #[test]
    fn one_marker_per_point() {
        let pts: Vec<(f64, f64)> = (0..48).map(|i| ((1 + 2 * (i / 16)) as f64, 0.9 - 0.01 * i as f64)).collect();
        let svg = scatter_svg("t", "x", &pts, None);
        assert_eq!(svg.matches("class=\"point\"").count(), 48);
    }

    #[test]
    fn box_geometry_matches_stats() {
        let b = box_stats(&[1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
        let svg = box_svg("t", &[("m".into(), b.clone())], 2.5);
        assert_eq!(attr_values(&svg, "box", "data-q1"), vec![b.q1]);
        assert_eq!(attr_values(&svg, "box", "data-q3"), vec![b.q3]);
        assert_eq!(attr_values(&svg, "median", "data-value"), vec![b.median]);
        assert_eq!(attr_values(&svg, "whisker", "data-hi"), vec![b.whisker_hi]);
        assert_eq!(attr_values(&svg, "outlier", "data-value"), b.outliers);
    }

    #[test]
    fn reference_curve_starts_at_one() {
        for a2 in [-0.3, 0.0, 0.2] {
            let svg = scaling_svg("t", &[(1.0, 1.0), (3.0, 2.9), (5.0, 4.7)], a2);
            assert_eq!(attr_values(&svg, "reference", "data-start-y"), vec![1.0]);
        }
    }
}
