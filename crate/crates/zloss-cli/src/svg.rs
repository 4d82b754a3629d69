//! Minimal line chart: mean F1 against batch size for the batch method, with
//! the full-dataset mean as a reference line. No dependencies, one polyline.

use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 56.0;

pub fn render_f1_chart(path: &Path, header: &str, lines: &[String]) -> Result<(), CliError> {
    let cols: Vec<&str> = header.split(',').collect();
    let col = |name: &str| cols.iter().position(|&c| c == name).expect("column");
    let (c_method, c_batch, c_f1) = (col("method"), col("batch_size"), col("f1"));

    let mut batch_f1: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    let mut full_f1: Vec<f64> = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        let f1: f64 = fields[c_f1].parse().unwrap_or(0.0);
        if fields[c_method] == "full" {
            full_f1.push(f1);
        } else {
            let b: usize = fields[c_batch].parse().unwrap_or(0);
            batch_f1.entry(b).or_default().push(f1);
        }
    }
    if batch_f1.is_empty() {
        return Err(CliError::Runtime("svg: no batch rows to plot".into()));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let points: Vec<(usize, f64)> = batch_f1.iter().map(|(&b, v)| (b, mean(v))).collect();
    let full_mean = if full_f1.is_empty() { None } else { Some(mean(&full_f1)) };

    let (b_min, b_max) = (points[0].0 as f64, points[points.len() - 1].0 as f64);
    let x_of = |b: f64| {
        if b_max > b_min {
            MARGIN + (b.ln() - b_min.ln()) / (b_max.ln() - b_min.ln()) * (W - 2.0 * MARGIN)
        } else {
            W / 2.0
        }
    };
    let y_of = |f1: f64| H - MARGIN - f1.clamp(0.0, 1.0) * (H - 2.0 * MARGIN);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n<g stroke=\"black\" stroke-width=\"1\">\n\
         <line x1=\"{m}\" y1=\"{yb}\" x2=\"{xe}\" y2=\"{yb}\"/>\n\
         <line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{yb}\"/>\n</g>\n",
        m = MARGIN,
        yb = H - MARGIN,
        xe = W - MARGIN,
    ));
    for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let y = y_of(frac);
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\">{frac}</text>\n",
            MARGIN - 6.0,
            y + 4.0
        ));
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y:.1}\" x2=\"{}\" y2=\"{y:.1}\" stroke=\"#ddd\"/>\n",
            MARGIN,
            W - MARGIN
        ));
    }
    let poly: Vec<String> = points
        .iter()
        .map(|&(b, f1)| format!("{:.1},{:.1}", x_of(b as f64), y_of(f1)))
        .collect();
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>\n",
        poly.join(" ")
    ));
    for &(b, f1) in &points {
        svg.push_str(&format!(
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"steelblue\"/>\n\
             <text x=\"{:.1}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{b}</text>\n",
            x_of(b as f64),
            y_of(f1),
            x_of(b as f64),
            H - MARGIN + 16.0
        ));
    }
    if let Some(fm) = full_mean {
        let y = y_of(fm);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y:.1}\" x2=\"{}\" y2=\"{y:.1}\" stroke=\"firebrick\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>\n\
             <text x=\"{}\" y=\"{:.1}\" font-size=\"11\" fill=\"firebrick\">full</text>\n",
            MARGIN,
            W - MARGIN,
            W - MARGIN + 4.0,
            y + 4.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">batch size</text>\n\
         <text x=\"16\" y=\"{}\" font-size=\"12\" transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">mean F1</text>\n</svg>\n",
        W / 2.0,
        H - 12.0,
        H / 2.0,
        H / 2.0
    ));

    std::fs::write(path, svg).map_err(|e| CliError::Runtime(format!("cannot write svg: {e}")))?;
    Ok(())
}
