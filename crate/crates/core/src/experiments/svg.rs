//! Deterministic SVG rendering of experiment tables.

use super::convergence::fit_slope;
use super::table::Table;
use crate::error::{Error, Result};
use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Clone, Debug, Default)]
pub struct PlotSpec {
    pub x: String,
    pub y: Vec<String>,
    /// Splits rows into separate series by this column's value.
    pub group: Option<String>,
    pub log_log: bool,
    pub scatter: bool,
    /// Draws a least-squares line through each series (log-log only) and labels its slope.
    pub fit: bool,
    pub title: String,
}

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn new(vals: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            let v = if log { v.log10() } else { v };
            (a.min(v), b.max(v))
        });
        if log {
            lo = lo.floor();
            hi = hi.ceil();
        }
        if hi - lo < 1e-12 {
            lo -= 0.5;
            hi += 0.5;
        }
        Axis { lo, hi, log }
    }

    fn frac(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let step = ((self.hi - self.lo) / 8.0).ceil().max(1.0) as i32;
            (self.lo as i32..=self.hi as i32).step_by(step as usize).map(|e| (10f64.powi(e), format!("1e{e}"))).collect()
        } else {
            (0..=4).map(|i| self.lo + (self.hi - self.lo) * i as f64 / 4.0).map(|v| (v, format!("{v:.3}"))).collect()
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn collect(table: &Table, spec: &PlotSpec) -> Result<Vec<Series>> {
    let xs = table.numeric(&spec.x)?;
    let groups: Vec<String> = match &spec.group {
        Some(g) => table.text(g)?.into_iter().map(String::from).collect(),
        None => vec![String::new(); xs.len()],
    };
    let mut out: Vec<Series> = Vec::new();
    for name in &spec.y {
        let ys = table.numeric(name)?;
        for ((x, y), g) in xs.iter().zip(&ys).zip(&groups) {
            let label = if g.is_empty() { name.clone() } else { format!("{name} {}={g}", spec.group.as_deref().unwrap_or("")) };
            match out.iter_mut().find(|s| s.label == label) {
                Some(s) => s.points.push((*x, *y)),
                None => out.push(Series { label, points: vec![(*x, *y)] }),
            }
        }
    }
    if out.is_empty() || out.iter().all(|s| s.points.is_empty()) {
        return Err(Error::Csv("nothing to plot: empty series".into()));
    }
    for s in &out {
        for &(x, y) in &s.points {
            if !(x.is_finite() && y.is_finite()) || (spec.log_log && (x <= 0.0 || y <= 0.0)) {
                return Err(Error::Csv(format!("point ({x}, {y}) of '{}' cannot be drawn", s.label)));
            }
        }
    }
    Ok(out)
}

/// Line or scatter plot of `spec.y` against `spec.x`.
pub fn emit_svg(table: &Table, spec: &PlotSpec) -> Result<String> {
    if spec.y.is_empty() {
        return Err(Error::InvalidArgument("no y columns".into()));
    }
    let series = collect(table, spec)?;
    let ax = Axis::new(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)), spec.log_log);
    let ay = Axis::new(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)), spec.log_log);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + pw * ax.frac(x);
    let py = |y: f64| TOP + ph * (1.0 - ay.frac(y));
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(&spec.title));
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for (v, label) in ax.ticks() {
        let x = px(v);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, TOP + ph, TOP + ph + 5.0, TOP + ph + 20.0);
    }
    for (v, label) in ay.ticks() {
        let y = py(v);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, LEFT - 5.0, LEFT - 8.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, HEIGHT - 10.0, escape(&spec.x));
    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        if spec.scatter {
            for &(x, y) in &ser.points {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, px(x), py(y));
            }
        } else {
            let pts: Vec<String> = ser.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, pts.join(" "));
        }
        let mut label = ser.label.clone();
        if spec.fit && spec.log_log && ser.points.len() >= 2 {
            let lx: Vec<f64> = ser.points.iter().map(|p| p.0.ln()).collect();
            let ly: Vec<f64> = ser.points.iter().map(|p| p.1.ln()).collect();
            let slope = fit_slope(&lx, &ly);
            let mx = lx.iter().sum::<f64>() / lx.len() as f64;
            let my = ly.iter().sum::<f64>() / ly.len() as f64;
            let (x0, x1) = (lx.iter().cloned().fold(f64::INFINITY, f64::min), lx.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
            let y = |x: f64| (my + slope * (x - mx)).exp();
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-dasharray="4 3"/>"#,
                px(x0.exp()),
                py(y(x0)),
                px(x1.exp()),
                py(y(x1))
            );
            label = format!("{label} (slope {slope:.2})");
        }
        let ly = TOP + 16.0 + 16.0 * i as f64;
        let _ = writeln!(s, r#"<text x="{:.2}" y="{ly:.2}" fill="{color}">{}</text>"#, LEFT + 10.0, escape(&label));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Two-tone raster of the sign column over an `(x, y)` grid.
pub fn emit_raster_svg(table: &Table, x: &str, y: &str, value: &str, title: &str) -> Result<String> {
    let xs = table.numeric(x)?;
    let ys = table.numeric(y)?;
    let vs = table.numeric(value)?;
    if xs.is_empty() {
        return Err(Error::Csv("nothing to plot: empty series".into()));
    }
    let uniq = |v: &[f64]| {
        let mut u = v.to_vec();
        u.sort_by(f64::total_cmp);
        u.dedup();
        u
    };
    let (ux, uy) = (uniq(&xs), uniq(&ys));
    let ax = Axis::new(ux.iter().copied(), false);
    let ay = Axis::new(uy.iter().copied(), false);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let cw = pw / ux.len() as f64;
    let ch = ph / uy.len() as f64;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    for ((xv, yv), v) in xs.iter().zip(&ys).zip(&vs) {
        let i = ux.partition_point(|u| u < xv);
        let j = uy.partition_point(|u| u < yv);
        let fill = if *v <= 0.0 { "#f4a259" } else { "#ffffff" };
        let _ = writeln!(s, r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#, LEFT + cw * i as f64, TOP + ph - ch * (j + 1) as f64, cw + 0.05, ch + 0.05);
    }
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for (v, label) in ax.ticks() {
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, LEFT + pw * ax.frac(v), TOP + ph + 20.0);
    }
    for (v, label) in ay.ticks() {
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, LEFT - 8.0, TOP + ph * (1.0 - ay.frac(v)) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, HEIGHT - 10.0, escape(x));
    s.push_str("</svg>\n");
    Ok(s)
}
