//! Minimal log-log SVG rendering of a spectrum.

use std::fmt::Write as _;

use bec_scatter::AngularSpectrum;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 60.0;

fn log_range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .filter(|v| *v > 0.0 && v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v.log10()), hi.max(v.log10()))
        });
    if lo > hi {
        return None;
    }
    let (lo, hi) = (lo.floor(), hi.ceil());
    Some(if lo == hi { (lo, lo + 1.0) } else { (lo, hi) })
}

fn polyline(points: &[(f64, f64)], x: (f64, f64), y: (f64, f64), style: &str) -> String {
    let map = |(px, py): (f64, f64)| {
        let u = MARGIN + (px.log10() - x.0) / (x.1 - x.0) * (WIDTH - 2.0 * MARGIN);
        let v = HEIGHT - MARGIN - (py.log10() - y.0) / (y.1 - y.0) * (HEIGHT - 2.0 * MARGIN);
        format!("{u:.2},{v:.2}")
    };
    let coords: Vec<String> = points.iter().copied().map(map).collect();
    format!(
        "<polyline fill=\"none\" {style} points=\"{}\"/>\n",
        coords.join(" ")
    )
}

/// Differential rate (solid) and small-angle asymptote (dashed) versus angle.
pub fn spectrum_svg(spectrum: &AngularSpectrum) -> String {
    let rate: Vec<(f64, f64)> = spectrum
        .rows
        .iter()
        .filter(|p| p.theta > 0.0)
        .map(|p| (p.theta, p.dw_domega))
        .collect();
    let asym: Vec<(f64, f64)> = spectrum
        .rows
        .iter()
        .filter_map(|p| p.asymptote.map(|a| (p.theta, a)))
        .collect();

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    let x = log_range(rate.iter().map(|p| p.0));
    let y = log_range(rate.iter().chain(&asym).map(|p| p.1));
    if let (Some(x), Some(y)) = (x, y) {
        let _ = writeln!(
            svg,
            "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
            WIDTH - 2.0 * MARGIN,
            HEIGHT - 2.0 * MARGIN
        );
        for (i, decade) in (x.0 as i32..=x.1 as i32).enumerate() {
            let u = MARGIN + i as f64 / (x.1 - x.0) * (WIDTH - 2.0 * MARGIN);
            let _ = writeln!(
                svg,
                "<text x=\"{u:.2}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">1e{decade}</text>",
                HEIGHT - MARGIN + 18.0
            );
        }
        for (i, decade) in (y.0 as i32..=y.1 as i32).enumerate() {
            let v = HEIGHT - MARGIN - i as f64 / (y.1 - y.0) * (HEIGHT - 2.0 * MARGIN);
            let _ = writeln!(
                svg,
                "<text x=\"{}\" y=\"{v:.2}\" font-size=\"12\" text-anchor=\"end\">1e{decade}</text>",
                MARGIN - 6.0
            );
        }
        svg.push_str(&polyline(
            &rate,
            x,
            y,
            "stroke=\"black\" stroke-width=\"1.5\"",
        ));
        if !asym.is_empty() {
            svg.push_str(&polyline(
                &asym,
                x,
                y,
                "stroke=\"red\" stroke-dasharray=\"6,4\"",
            ));
        }
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">theta (rad)</text>",
            WIDTH / 2.0,
            HEIGHT - 15.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"15\" y=\"{}\" font-size=\"13\" transform=\"rotate(-90 15 {})\" \
             text-anchor=\"middle\">dw/dOmega per gamma</text>",
            HEIGHT / 2.0,
            HEIGHT / 2.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
