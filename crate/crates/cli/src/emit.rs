use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use banded_spectra::inclusion::{InclusionResult, Label};
use banded_spectra::oracles::SpectrumCurve;
use serde::Serialize;

use crate::CliError;

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// One `re,im,mu_n,label` row per grid point, in grid order.
pub fn emit_csv(result: &InclusionResult, path: &Path) -> Result<(), CliError> {
    let mut out = String::from("re,im,mu_n,label\n");
    for ((z, mu), label) in result.grid().points.iter().zip(&result.field.values).zip(&result.labels) {
        writeln!(out, "{:.16e},{:.16e},{:.16e},{}", z.re, z.im, mu, label.as_str()).unwrap();
    }
    write(path, &out)
}

/// Samples of a reference curve as `t_index,re,im`.
pub fn emit_curve_csv(curve: &SpectrumCurve, path: &Path) -> Result<(), CliError> {
    let mut out = String::from("t_index,re,im\n");
    for (k, z) in curve.samples.points().iter().enumerate() {
        writeln!(out, "{},{:.16e},{:.16e}", k / curve.q, z.re, z.im).unwrap();
    }
    write(path, &out)
}

pub fn emit_json<T: Serialize>(value: &T, path: &Path) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    write(path, &text)
}

/// Tick spacing of the form 1, 2 or 5 times a power of ten giving at most
/// about six ticks over `span`.
fn tick_step(span: f64) -> f64 {
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * mag)
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = tick_step(hi - lo);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn fmt_tick(x: f64) -> String {
    let s = format!("{:.3}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// Superset cells as gray rectangles (subset cells darker), the reference
/// curve as red dots and labelled axes. Drawing coordinates are `(re, -im)`
/// so the viewBox is the grid rectangle itself.
pub fn emit_svg(result: &InclusionResult, oracle: Option<&SpectrumCurve>, path: &Path) -> Result<(), CliError> {
    let grid = result.grid();
    let r = grid.rect;
    let (w, h) = (r.width(), r.height());
    let unit = w.max(h) / 600.0;
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.0}" height="{:.0}" viewBox="{} {} {} {}">"#,
        600.0 * w / w.max(h),
        600.0 * h / w.max(h),
        r.re_min,
        -r.im_max,
        w,
        h
    )
    .unwrap();

    writeln!(out, r#"<g class="cells" stroke="none">"#).unwrap();
    for (idx, label) in result.labels.iter().enumerate() {
        let fill = match label {
            Label::Subset => "#555555",
            Label::SupersetOnly => "#bbbbbb",
            Label::Outside => continue,
        };
        let (ix, iy) = grid.coords(idx);
        let x = r.re_min + ix as f64 * grid.dx;
        let y = -(r.im_min + (iy + 1) as f64 * grid.dy);
        writeln!(
            out,
            r#"<rect x="{x:.9}" y="{y:.9}" width="{:.9}" height="{:.9}" fill="{fill}"/>"#,
            grid.dx, grid.dy
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();

    if let Some(curve) = oracle {
        writeln!(out, r##"<g class="oracle" fill="#dd0000" stroke="none">"##).unwrap();
        for z in curve.samples.points() {
            writeln!(out, r#"<circle cx="{:.9}" cy="{:.9}" r="{:.6}"/>"#, z.re, -z.im, 1.5 * unit).unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }

    // Axes through the origin when visible, along the edges otherwise.
    let ax = if r.re_min <= 0.0 && 0.0 <= r.re_max { 0.0 } else { r.re_min };
    let ay = if r.im_min <= 0.0 && 0.0 <= r.im_max { 0.0 } else { r.im_min };
    let font = 11.0 * unit;
    let tick = 4.0 * unit;
    writeln!(
        out,
        r#"<g class="axes" stroke="black" stroke-width="{:.6}" font-family="sans-serif" font-size="{font:.6}">"#,
        unit
    )
    .unwrap();
    writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, r.re_min, -ay, r.re_max, -ay).unwrap();
    writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, ax, -r.im_min, ax, -r.im_max).unwrap();
    for x in ticks(r.re_min, r.re_max) {
        writeln!(out, r#"<line x1="{x:.6}" y1="{:.6}" x2="{x:.6}" y2="{:.6}"/>"#, -ay - tick, -ay + tick).unwrap();
        writeln!(
            out,
            r#"<text x="{x:.6}" y="{:.6}" stroke="none" text-anchor="middle">{}</text>"#,
            -ay + tick + font,
            fmt_tick(x)
        )
        .unwrap();
    }
    for y in ticks(r.im_min, r.im_max) {
        writeln!(out, r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#, ax - tick, -y, ax + tick, -y).unwrap();
        writeln!(
            out,
            r#"<text x="{:.6}" y="{:.6}" stroke="none" text-anchor="start">{}i</text>"#,
            ax + 1.5 * tick,
            -y + font / 3.0,
            fmt_tick(y)
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, "</svg>").unwrap();
    write(path, &out)
}
