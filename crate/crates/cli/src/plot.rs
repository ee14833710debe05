//! Static SVG line plots rendered straight from the diagnostics records.
//! Self-contained vector output, no styling dependencies.

use sphereflock::DiagnosticsRecord;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 24.0;
const BOTTOM: f64 = 48.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Frame {
        // Degenerate ranges get padded so every point lands inside the box.
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        Frame { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn pad(a: f64, b: f64) -> (f64, f64) {
    if (b - a).abs() > 0.0 {
        (a, b)
    } else {
        (a - 0.5, b + 0.5)
    }
}

fn polyline(frame: &Frame, points: &[(f64, f64)], color: &str) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
        .collect();
    format!(
        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        coords.join(" ")
    )
}

fn axes(frame: &Frame, x_label: &str, y_label: &str, y_tick_fmt: impl Fn(f64) -> String) -> String {
    let mut out = String::new();
    let xb = HEIGHT - BOTTOM;
    out.push_str(&format!(
        "<rect x=\"{LEFT:.1}\" y=\"{TOP:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"#888\"/>\n",
        WIDTH - LEFT - RIGHT,
        HEIGHT - TOP - BOTTOM
    ));
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let x = frame.x0 + f * (frame.x1 - frame.x0);
        let y = frame.y0 + f * (frame.y1 - frame.y0);
        let px = frame.px(x);
        let py = frame.py(y);
        out.push_str(&format!(
            "<line x1=\"{px:.1}\" y1=\"{xb:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"#888\"/>\n",
            xb + 5.0
        ));
        out.push_str(&format!(
            "<text x=\"{px:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{:.2}</text>\n",
            xb + 18.0,
            x
        ));
        out.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{LEFT:.1}\" y2=\"{py:.1}\" stroke=\"#888\"/>\n",
            LEFT - 5.0
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            LEFT - 8.0,
            py + 4.0,
            y_tick_fmt(y)
        ));
    }
    out.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\">{x_label}</text>\n",
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        HEIGHT - 10.0
    ));
    out.push_str(&format!(
        "<text x=\"16\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{y_label}</text>\n",
        TOP + (HEIGHT - TOP - BOTTOM) / 2.0,
        TOP + (HEIGHT - TOP - BOTTOM) / 2.0
    ));
    out
}

fn document(body: String) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" viewBox=\"0 0 {WIDTH:.0} {HEIGHT:.0}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

fn empty_plot(title: &str) -> String {
    document(format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"14\" text-anchor=\"middle\">{title}: no data</text>\n",
        WIDTH / 2.0,
        HEIGHT / 2.0
    ))
}

/// E, E_K, E_C against time on linear axes.
pub fn energy_svg(records: &[DiagnosticsRecord]) -> String {
    if records.is_empty() {
        return empty_plot("energy");
    }
    let t0 = records[0].t;
    let t1 = records[records.len() - 1].t;
    let lo = records.iter().flat_map(|r| [r.e, r.e_k, r.e_c]).fold(f64::INFINITY, f64::min);
    let hi = records.iter().flat_map(|r| [r.e, r.e_k, r.e_c]).fold(f64::NEG_INFINITY, f64::max);
    let frame = Frame::new(t0, t1, lo.min(0.0), hi);
    let series: [(&str, &str, fn(&DiagnosticsRecord) -> f64); 3] = [
        ("E", "#000000", |r| r.e),
        ("E_K", "#1f6fd6", |r| r.e_k),
        ("E_C", "#d67a1f", |r| r.e_c),
    ];
    let mut body = axes(&frame, "t", "energy", |y| format!("{y:.3}"));
    for (idx, (name, color, pick)) in series.iter().enumerate() {
        let points: Vec<(f64, f64)> = records.iter().map(|r| (r.t, pick(r))).collect();
        body.push_str(&polyline(&frame, &points, color));
        body.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" fill=\"{color}\">{name}</text>\n",
            WIDTH - RIGHT - 60.0,
            TOP + 16.0 + 16.0 * idx as f64
        ));
    }
    document(body)
}

/// flock_metric against time with a log10 vertical axis (values clipped
/// below at 1e-16, where the metric is numerically zero).
pub fn flock_metric_svg(records: &[DiagnosticsRecord]) -> String {
    if records.is_empty() {
        return empty_plot("flock_metric");
    }
    let t0 = records[0].t;
    let t1 = records[records.len() - 1].t;
    let logs: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.t, r.flock_metric.max(1e-16).log10()))
        .collect();
    let lo = logs.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi = logs.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let frame = Frame::new(t0, t1, lo, hi);
    let mut body = axes(&frame, "t", "log10 flock_metric", |y| format!("{y:.1}"));
    body.push_str(&polyline(&frame, &logs, "#b02a2a"));
    document(body)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(t: f64, flock: f64) -> DiagnosticsRecord {
        DiagnosticsRecord {
            t,
            e: 2.0 - t,
            e_k: 1.0,
            e_c: 1.0 - t,
            v_max: 1.0,
            dissipation: -0.1,
            flock_metric: flock,
            antipodal_margin: 1.8,
            diameter: 0.5,
        }
    }

    #[test]
    fn renders_well_formed_svg() {
        let records: Vec<_> = (0..20)
            .map(|k| record(k as f64 * 0.1, 10f64.powi(-k)))
            .collect();
        for svg in [energy_svg(&records), flock_metric_svg(&records)] {
            assert!(svg.starts_with("<svg"));
            assert!(svg.trim_end().ends_with("</svg>"));
            assert!(svg.contains("<polyline"));
        }
    }

    #[test]
    fn empty_input_still_renders() {
        assert!(energy_svg(&[]).contains("no data"));
        assert!(flock_metric_svg(&[]).contains("no data"));
    }

    #[test]
    fn zero_flock_metric_is_clipped_not_nan() {
        let records = vec![record(0.0, 0.0), record(1.0, 0.0)];
        let svg = flock_metric_svg(&records);
        assert!(!svg.contains("NaN"));
        assert!(!svg.contains("inf"));
    }
}
