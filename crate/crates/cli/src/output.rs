//! File emission: CSV tables, the slice SVG and the run manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use cuspidal::atlas::{CountProfile, CuspPoint, DkResult, SingularSlice};
use cuspidal::model::Pose;

use crate::CliError;

pub const CUSP_HEADER: [&str; 8] = ["r1", "r2", "r3", "B1x", "B1y", "tx", "ty", "box_width"];
pub const DK_HEADER: [&str; 5] = ["B1x", "B1y", "tx", "ty", "box_width"];
pub const PROFILE_HEADER: [&str; 3] = ["interval_lo", "interval_hi", "count"];
pub const BREAKPOINT_HEADER: [&str; 5] = ["breakpoint", "bracket_lo", "bracket_hi", "count_below", "count_above"];
pub const POLYLINE_HEADER: [&str; 3] = ["segment_id", "r2", "r3"];

fn write_rows<const N: usize>(path: &Path, header: [&str; N], rows: &[[String; N]]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush().map_err(|e| CliError::Io(path.display().to_string(), e))?;
    Ok(())
}

pub fn write_dk(path: &Path, dk: &DkResult) -> Result<(), CliError> {
    let rows: Vec<[String; 5]> = dk
        .poses
        .iter()
        .zip(&dk.report.roots)
        .map(|(p, root)| {
            [
                p.b1x.to_string(),
                p.b1y.to_string(),
                p.tx.to_string(),
                p.ty.to_string(),
                format!("{:e}", root.width()),
            ]
        })
        .collect();
    write_rows(path, DK_HEADER, &rows)
}

pub fn write_cusps(path: &Path, cusps: &[CuspPoint]) -> Result<(), CliError> {
    let rows: Vec<[String; 8]> = cusps
        .iter()
        .map(|c| {
            let a = c.config.as_array();
            [
                a[0].to_string(),
                a[1].to_string(),
                a[2].to_string(),
                a[3].to_string(),
                a[4].to_string(),
                a[5].to_string(),
                a[6].to_string(),
                format!("{:e}", c.box_width),
            ]
        })
        .collect();
    write_rows(path, CUSP_HEADER, &rows)
}

pub fn write_profile(path: &Path, profile: &CountProfile) -> Result<(), CliError> {
    let rows: Vec<[String; 3]> = profile
        .intervals()
        .into_iter()
        .map(|(lo, hi, c)| [lo.to_string(), hi.to_string(), c.to_string()])
        .collect();
    write_rows(path, PROFILE_HEADER, &rows)
}

pub fn write_breakpoints(path: &Path, profile: &CountProfile) -> Result<(), CliError> {
    let rows: Vec<[String; 5]> = profile
        .breakpoints
        .iter()
        .map(|b| {
            [
                b.value.to_string(),
                b.lo.to_string(),
                b.hi.to_string(),
                b.count_below.to_string(),
                b.count_above.to_string(),
            ]
        })
        .collect();
    write_rows(path, BREAKPOINT_HEADER, &rows)
}

pub fn write_excluded(path: &Path, profile: &CountProfile) -> Result<(), CliError> {
    let rows: Vec<[String; 1]> = profile.excluded_samples.iter().map(|x| [x.to_string()]).collect();
    write_rows(path, ["r1"], &rows)
}

pub fn write_polylines(path: &Path, slice: &SingularSlice) -> Result<(), CliError> {
    let rows: Vec<[String; 3]> = slice
        .polylines
        .iter()
        .enumerate()
        .flat_map(|(id, line)| {
            line.iter()
                .map(move |&(r2, r3)| [id.to_string(), r2.to_string(), r3.to_string()])
        })
        .collect();
    write_rows(path, POLYLINE_HEADER, &rows)
}

pub fn write_ik(path: &Path, pose: &Pose, lengths: [f64; 3]) -> Result<(), CliError> {
    let row = [
        pose.b1x.to_string(),
        pose.b1y.to_string(),
        pose.tx.to_string(),
        pose.ty.to_string(),
        lengths[0].to_string(),
        lengths[1].to_string(),
        lengths[2].to_string(),
    ];
    write_rows(path, ["B1x", "B1y", "tx", "ty", "r1", "r2", "r3"], &[row])
}

const SVG_SIZE: f64 = 640.0;
const SVG_MARGIN: f64 = 56.0;

/// Singular polylines and cusp circles on `(r2, r3)` axes, `r2` to the
/// right and `r3` upwards.
pub fn slice_svg(slice: &SingularSlice, cusps: &[CuspPoint]) -> String {
    let (x0, x1) = slice.grid.r2;
    let (y0, y1) = slice.grid.r3;
    let plot = SVG_SIZE - 2.0 * SVG_MARGIN;
    let sx = |x: f64| SVG_MARGIN + (x - x0) / (x1 - x0) * plot;
    let sy = |y: f64| SVG_SIZE - SVG_MARGIN - (y - y0) / (y1 - y0) * plot;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">Singular curve, r1 = {}</text>"#,
        SVG_SIZE / 2.0,
        cuspidal::numeric::format_rational(&slice.r1)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{m}" y="{m}" width="{plot}" height="{plot}" fill="none" stroke="black"/>"#,
        m = SVG_MARGIN
    );
    for k in 0..=5 {
        let t = k as f64 / 5.0;
        let (vx, vy) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            sx(vx),
            SVG_SIZE - SVG_MARGIN + 18.0,
            tick(vx)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            SVG_MARGIN - 6.0,
            sy(vy) + 4.0,
            tick(vy)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">r2</text>"#,
        SVG_SIZE / 2.0,
        SVG_SIZE - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">r3</text>"#,
        SVG_SIZE / 2.0,
        SVG_SIZE / 2.0
    );
    for line in &slice.polylines {
        let pts: Vec<String> = line.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline class="singular" points="{}" fill="none" stroke="steelblue" stroke-width="1.2"/>"#,
            pts.join(" ")
        );
    }
    for c in cusps {
        let [_, r2, r3] = c.config.lengths;
        let _ = writeln!(
            s,
            r#"<circle class="cusp" cx="{:.2}" cy="{:.2}" r="5" fill="none" stroke="crimson" stroke-width="1.5"/>"#,
            sx(r2),
            sy(r3)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    format!("{r}")
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e))
}
