//! Static SVG rendering of sweep and gain CSV files.
//!
//! Pure presentation: the renderer re-plots whatever the CSV holds and
//! computes nothing. Outage sweeps get a log-scale y axis; gain tables a
//! linear one.

use crate::commands::SWEEP_HEADER;
use crate::CliError;
use std::path::Path;

const W: f64 = 640.0;
const H: f64 = 480.0;
const ML: f64 = 70.0;
const MR: f64 = 20.0;
const MT: f64 = 20.0;
const MB: f64 = 50.0;

struct Series {
    name: &'static str,
    color: &'static str,
    dash: Option<&'static str>,
    points: Vec<(f64, f64)>,
    /// Optional (low, high) vertical error bar per point.
    bars: Vec<Option<(f64, f64)>>,
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    log_y: bool,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        ML + (v - self.x_min) / (self.x_max - self.x_min) * (W - ML - MR)
    }

    fn y(&self, v: f64) -> f64 {
        let (v, lo, hi) = if self.log_y {
            (v.log10(), self.y_min.log10(), self.y_max.log10())
        } else {
            (v, self.y_min, self.y_max)
        };
        H - MB - (v - lo) / (hi - lo) * (H - MT - MB)
    }
}

fn parse_csv(path: &Path) -> Result<(String, Vec<Vec<Option<f64>>>), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Usage("empty CSV".into()))?
        .trim()
        .to_string();
    let cols = header.split(',').count();
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<Option<f64>> = line
            .split(',')
            .map(|f| {
                let f = f.trim();
                if f.is_empty() {
                    Ok(None)
                } else {
                    f.parse::<f64>()
                        .map(Some)
                        .map_err(|_| CliError::Usage(format!("row {}: bad number '{f}'", k + 2)))
                }
            })
            .collect::<Result<_, _>>()?;
        if fields.len() != cols {
            return Err(CliError::Usage(format!("row {}: expected {cols} fields", k + 2)));
        }
        rows.push(fields);
    }
    if rows.is_empty() {
        return Err(CliError::Usage("CSV has no data rows".into()));
    }
    Ok((header, rows))
}

fn collect_series(header: &str, rows: &[Vec<Option<f64>>]) -> Result<(Vec<Series>, bool, &'static str, &'static str), CliError> {
    if header == SWEEP_HEADER {
        let make = |name, color, dash: Option<&'static str>, col: usize, bar: bool| Series {
            name,
            color,
            dash,
            points: rows
                .iter()
                .filter_map(|r| match (r[0], r[col]) {
                    (Some(x), Some(y)) if y > 0.0 => Some((x, y)),
                    _ => None,
                })
                .collect(),
            bars: rows
                .iter()
                .filter_map(|r| match (r[0], r[col]) {
                    (Some(_), Some(y)) if y > 0.0 => Some(if bar {
                        match (r[4], r[5]) {
                            (Some(lo), Some(hi)) => Some((lo, hi)),
                            _ => None,
                        }
                    } else {
                        None
                    }),
                    _ => None,
                })
                .collect(),
        };
        let series: Vec<Series> = [
            make("exact", "#1f4e9c", None, 1, false),
            make("asymptotic", "#b03030", Some("6 4"), 2, false),
            make("montecarlo", "#2a7a2a", Some("1 3"), 3, true),
        ]
        .into_iter()
        .filter(|s| !s.points.is_empty())
        .collect();
        Ok((series, true, "SNR (dB)", "outage probability"))
    } else if header == "rate,coding_gain_db" {
        let s = Series {
            name: "coding gain",
            color: "#1f4e9c",
            dash: None,
            points: rows
                .iter()
                .filter_map(|r| match (r[0], r[1]) {
                    (Some(x), Some(y)) => Some((x, y)),
                    _ => None,
                })
                .collect(),
            bars: Vec::new(),
        };
        Ok((vec![s], false, "rate (bps/Hz)", "10 log10 C(R) (dB)"))
    } else {
        Err(CliError::Usage(format!("unrecognized CSV header '{header}'")))
    }
}

fn axis_ticks(frame: &Frame, svg: &mut String) {
    // x ticks: 8 even divisions
    for k in 0..=8 {
        let v = frame.x_min + (frame.x_max - frame.x_min) * k as f64 / 8.0;
        let x = frame.x(v);
        svg.push_str(&format!(
            "<line x1='{x:.1}' y1='{:.1}' x2='{x:.1}' y2='{:.1}' stroke='#ccc'/>\n\
             <text x='{x:.1}' y='{:.1}' text-anchor='middle' font-size='11'>{v:.3}</text>\n",
            MT,
            H - MB,
            H - MB + 16.0
        ));
    }
    if frame.log_y {
        let lo = frame.y_min.log10().floor() as i64;
        let hi = frame.y_max.log10().ceil() as i64;
        for d in lo..=hi {
            let v = 10f64.powi(d as i32);
            if v < frame.y_min || v > frame.y_max {
                continue;
            }
            let y = frame.y(v);
            svg.push_str(&format!(
                "<line x1='{:.1}' y1='{y:.1}' x2='{:.1}' y2='{y:.1}' stroke='#ccc'/>\n\
                 <text x='{:.1}' y='{:.1}' text-anchor='end' font-size='11'>1e{d}</text>\n",
                ML,
                W - MR,
                ML - 6.0,
                y + 4.0
            ));
        }
    } else {
        for k in 0..=6 {
            let v = frame.y_min + (frame.y_max - frame.y_min) * k as f64 / 6.0;
            let y = frame.y(v);
            svg.push_str(&format!(
                "<line x1='{:.1}' y1='{y:.1}' x2='{:.1}' y2='{y:.1}' stroke='#ccc'/>\n\
                 <text x='{:.1}' y='{:.1}' text-anchor='end' font-size='11'>{v:.2}</text>\n",
                ML,
                W - MR,
                ML - 6.0,
                y + 4.0
            ));
        }
    }
}

/// Render a sweep or gain CSV into a self-contained SVG file.
pub fn render_csv(csv_path: &Path, svg_path: &Path) -> Result<(), CliError> {
    let (header, rows) = parse_csv(csv_path)?;
    let (series, log_y, x_label, y_label) = collect_series(&header, &rows)?;
    if series.is_empty() {
        return Err(CliError::Usage("CSV holds no plottable values".into()));
    }

    let xs: Vec<f64> = series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).collect();
    let mut ys: Vec<f64> = series.iter().flat_map(|s| s.points.iter().map(|p| p.1)).collect();
    ys.extend(series.iter().flat_map(|s| {
        s.bars.iter().flatten().flat_map(|&(lo, hi)| [lo, hi]).filter(|&v| !log_y || v > 0.0)
    }));
    let (x_min, x_max) = bounds(&xs, false);
    let (y_min, y_max) = bounds(&ys, log_y);
    let frame = Frame { x_min, x_max, y_min, y_max, log_y };

    let mut svg = format!(
        "<svg xmlns='http://www.w3.org/2000/svg' width='{W}' height='{H}' \
         viewBox='0 0 {W} {H}' font-family='sans-serif'>\n\
         <rect width='{W}' height='{H}' fill='white'/>\n"
    );
    axis_ticks(&frame, &mut svg);
    svg.push_str(&format!(
        "<rect x='{ML}' y='{MT}' width='{:.1}' height='{:.1}' fill='none' stroke='black'/>\n",
        W - ML - MR,
        H - MT - MB
    ));
    svg.push_str(&format!(
        "<text x='{:.1}' y='{:.1}' text-anchor='middle' font-size='13'>{x_label}</text>\n\
         <text x='14' y='{:.1}' text-anchor='middle' font-size='13' \
         transform='rotate(-90 14 {:.1})'>{y_label}</text>\n",
        0.5 * (ML + W - MR),
        H - 12.0,
        0.5 * (MT + H - MB),
        0.5 * (MT + H - MB)
    ));

    for (si, s) in series.iter().enumerate() {
        let dash = s.dash.map(|d| format!(" stroke-dasharray='{d}'")).unwrap_or_default();
        if s.points.len() > 1 {
            let pts: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", frame.x(x), frame.y(y)))
                .collect();
            svg.push_str(&format!(
                "<polyline points='{}' fill='none' stroke='{}' stroke-width='1.5'{dash}/>\n",
                pts.join(" "),
                s.color
            ));
        }
        for (k, &(x, y)) in s.points.iter().enumerate() {
            svg.push_str(&format!(
                "<circle cx='{:.2}' cy='{:.2}' r='3' fill='{}'/>\n",
                frame.x(x),
                frame.y(y),
                s.color
            ));
            if let Some(Some((lo, hi))) = s.bars.get(k) {
                if !log_y || (*lo > 0.0 && *hi > 0.0) {
                    svg.push_str(&format!(
                        "<line x1='{0:.2}' y1='{1:.2}' x2='{0:.2}' y2='{2:.2}' stroke='{3}'/>\n",
                        frame.x(x),
                        frame.y(*lo),
                        frame.y(*hi),
                        s.color
                    ));
                }
            }
        }
        let ly = MT + 16.0 + 16.0 * si as f64;
        svg.push_str(&format!(
            "<line x1='{:.1}' y1='{ly:.1}' x2='{:.1}' y2='{ly:.1}' stroke='{}' stroke-width='1.5'{dash}/>\n\
             <text x='{:.1}' y='{:.1}' font-size='12'>{}</text>\n",
            ML + 10.0,
            ML + 40.0,
            s.color,
            ML + 46.0,
            ly + 4.0,
            s.name
        ));
    }
    svg.push_str("</svg>\n");
    std::fs::write(svg_path, svg)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", svg_path.display())))
}

fn bounds(values: &[f64], log: bool) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if log {
        if hi <= lo {
            (lo * 0.5, hi * 2.0)
        } else {
            (lo * 0.8, hi * 1.25)
        }
    } else if hi <= lo {
        (lo - 1.0, hi + 1.0)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}
