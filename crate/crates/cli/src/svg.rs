//! Static SVG rendering of sweep curves: one `<path>` per microwave Q on a
//! log power axis. Efficiency and cooperativity use a linear y axis,
//! infidelity a log y axis.

use std::fmt::Write;

use xduce_core::SweepRow;

use crate::config::OutputKind;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 70.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn metric(row: &SweepRow, kind: OutputKind) -> Option<f64> {
    match kind {
        OutputKind::Efficiency => Some(row.eta),
        OutputKind::Cooperativity => Some(row.cooperativity),
        OutputKind::Infidelity => row.infidelity,
    }
}

fn label(kind: OutputKind) -> &'static str {
    match kind {
        OutputKind::Efficiency => "conversion efficiency",
        OutputKind::Cooperativity => "cooperativity",
        OutputKind::Infidelity => "heralding infidelity",
    }
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if log {
            (lo, hi) = (lo.floor(), hi.ceil());
        } else {
            lo = lo.min(0.0);
        }
        if hi <= lo {
            hi = lo + 1.0;
        }
        Axis { lo, hi, log }
    }

    fn frac(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    /// Tick positions in data space with their labels.
    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let step = ((self.hi - self.lo) / 10.0).ceil().max(1.0);
            let mut out = Vec::new();
            let mut e = self.lo;
            while e <= self.hi + 1e-9 {
                out.push((10f64.powf(e), format!("1e{}", e as i64)));
                e += step;
            }
            out
        } else {
            (0..=5)
                .map(|i| {
                    let v = self.lo + (self.hi - self.lo) * i as f64 / 5.0;
                    (v, format!("{:.3}", v))
                })
                .collect()
        }
    }
}

fn fmt_q(q: f64) -> String {
    format!("{q:e}")
}

/// Renders the chosen metric against pump power. Rows must come ordered by
/// (Q, power) as produced by the sweep.
pub fn render(rows: &[SweepRow], kind: OutputKind) -> String {
    let log_y = kind == OutputKind::Infidelity;
    let usable = |r: &&SweepRow| {
        r.pump_power_w > 0.0 && metric(r, kind).is_some_and(|v| v.is_finite() && (!log_y || v > 0.0))
    };
    let pts: Vec<&SweepRow> = rows.iter().filter(usable).collect();
    let x = Axis::fit(pts.iter().map(|r| r.pump_power_w), true);
    let y = Axis::fit(pts.iter().filter_map(|r| metric(r, kind)), log_y);

    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |v: f64| LEFT + x.frac(v) * pw;
    let py = |v: f64| TOP + (1.0 - y.frac(v)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);

    for (v, text) in x.ticks() {
        let xp = px(v);
        let _ = writeln!(s, r##"<line x1="{xp:.2}" y1="{TOP}" x2="{xp:.2}" y2="{:.2}" stroke="#ddd"/>"##, TOP + ph);
        let _ = writeln!(s, r#"<text x="{xp:.2}" y="{:.2}" text-anchor="middle">{text}</text>"#, TOP + ph + 18.0);
    }
    for (v, text) in y.ticks() {
        let yp = py(v);
        let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{yp:.2}" x2="{:.2}" y2="{yp:.2}" stroke="#ddd"/>"##, LEFT + pw);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{text}</text>"#, LEFT - 6.0, yp + 4.0);
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">pump power (W)</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 20.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        label(kind)
    );

    let mut qs: Vec<f64> = rows.iter().map(|r| r.q_b).collect();
    qs.dedup();
    for (i, q) in qs.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut d = String::new();
        for r in pts.iter().filter(|r| r.q_b == *q) {
            let cmd = if d.is_empty() { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{:.2},{:.2} ", px(r.pump_power_w), py(metric(r, kind).unwrap_or(0.0)));
        }
        let _ = writeln!(
            s,
            r#"<path d="{}" fill="none" stroke="{color}" stroke-width="2" data-q="{q}"/>"#,
            d.trim_end()
        );
        let ly = TOP + 16.0 + 18.0 * i as f64;
        let lx = LEFT + pw - 150.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 24.0
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">Q = {}</text>"#, lx + 30.0, ly + 4.0, fmt_q(*q));
    }
    s.push_str("</svg>\n");
    s
}
