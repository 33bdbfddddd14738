//! Artifact emission: CSV tables, SVG plots, and run manifests.
//!
//! CSV: UTF-8, comma separators, `.` decimal, LF line endings, header first;
//! floats are serialized in shortest round-trip form (Rust's `{}` for f64),
//! so identical inputs yield byte-identical files.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::errors::CliError;

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Shortest decimal string that round-trips to the identical binary64 value.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Writes header + rows; returns the file's SHA-256. Empty record sets are
/// an error and no file is created.
pub fn write_csv(header: &str, rows: &[Vec<String>], path: &Path) -> Result<String, CliError> {
    if rows.is_empty() {
        return Err(CliError::Runtime(format!(
            "refusing to write empty record set to {}",
            path.display()
        )));
    }
    let mut text = String::new();
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    std::fs::write(path, text.as_bytes())
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(sha256_hex(text.as_bytes()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Scatter,
    Line,
}

const SVG_W: f64 = 1000.0;
const SVG_H: f64 = 700.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 40.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo == hi {
        // degenerate range: expand by one unit each way
        lo -= 1.0;
        hi += 1.0;
    }
    (lo, hi)
}

/// Fixed 1000x700 viewBox, axes with min/max tick labels, one mark element
/// per data point (circles for scatter, a single polyline for line plots).
pub fn render_svg(points: &[(f64, f64)], kind: PlotKind, path: &Path) -> Result<String, CliError> {
    if points.is_empty() {
        return Err(CliError::Runtime(format!(
            "refusing to render empty point set to {}",
            path.display()
        )));
    }
    let (x_lo, x_hi) = span(points.iter().map(|p| p.0));
    let (y_lo, y_hi) = span(points.iter().map(|p| p.1));
    let px = |x: f64| MARGIN_L + (x - x_lo) / (x_hi - x_lo) * (SVG_W - MARGIN_L - MARGIN_R);
    let py = |y: f64| SVG_H - MARGIN_B - (y - y_lo) / (y_hi - y_lo) * (SVG_H - MARGIN_T - MARGIN_B);

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SVG_W} {SVG_H}\">\n"
    ));
    let x_axis_y = SVG_H - MARGIN_B;
    s.push_str(&format!(
        "  <line x1=\"{MARGIN_L}\" y1=\"{x_axis_y}\" x2=\"{}\" y2=\"{x_axis_y}\" stroke=\"black\"/>\n",
        SVG_W - MARGIN_R
    ));
    s.push_str(&format!(
        "  <line x1=\"{MARGIN_L}\" y1=\"{MARGIN_T}\" x2=\"{MARGIN_L}\" y2=\"{x_axis_y}\" stroke=\"black\"/>\n"
    ));
    let tick = |s: &mut String, x: f64, y: f64, anchor: &str, label: String| {
        s.push_str(&format!(
            "  <text x=\"{x}\" y=\"{y}\" text-anchor=\"{anchor}\" font-size=\"14\">{label}</text>\n"
        ));
    };
    tick(&mut s, MARGIN_L, SVG_H - MARGIN_B + 20.0, "middle", fmt_f64(x_lo));
    tick(&mut s, SVG_W - MARGIN_R, SVG_H - MARGIN_B + 20.0, "middle", fmt_f64(x_hi));
    tick(&mut s, MARGIN_L - 8.0, SVG_H - MARGIN_B, "end", fmt_f64(y_lo));
    tick(&mut s, MARGIN_L - 8.0, MARGIN_T + 4.0, "end", fmt_f64(y_hi));

    match kind {
        PlotKind::Scatter => {
            for &(x, y) in points {
                s.push_str(&format!(
                    "  <circle class=\"mark\" cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"steelblue\"/>\n",
                    px(x),
                    py(y)
                ));
            }
        }
        PlotKind::Line => {
            let coords: Vec<String> =
                points.iter().map(|&(x, y)| format!("{},{}", px(x), py(y))).collect();
            s.push_str(&format!(
                "  <polyline class=\"mark\" points=\"{}\" fill=\"none\" stroke=\"steelblue\"/>\n",
                coords.join(" ")
            ));
        }
    }
    s.push_str("</svg>\n");
    std::fs::write(path, s.as_bytes())
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(sha256_hex(s.as_bytes()))
}

/// Manifest path for an output: extension replaced by `manifest`
/// (scan.csv -> scan.manifest).
pub fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest")
}

/// Flat key=value manifest: toolkit version, the fully resolved config, an
/// input hash over that config, one checksum per output file, and wall time.
pub fn write_manifest(
    command: &str,
    resolved: &[(String, String)],
    outputs: &[(PathBuf, String)],
    wall_ms: u128,
    path: &Path,
) -> Result<(), CliError> {
    let mut config_block = String::new();
    for (k, v) in resolved {
        config_block.push_str(&format!("config.{k}={v}\n"));
    }
    let input_hash = sha256_hex(config_block.as_bytes());
    let mut text = String::new();
    text.push_str(&format!("version={}\n", env!("CARGO_PKG_VERSION")));
    text.push_str(&format!("command={command}\n"));
    text.push_str(&config_block);
    text.push_str(&format!("input_sha256={input_hash}\n"));
    for (out, checksum) in outputs {
        let name = out
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| out.display().to_string());
        text.push_str(&format!("output.{name}.sha256={checksum}\n"));
    }
    text.push_str(&format!("wall_time_ms={wall_ms}\n"));
    std::fs::write(path, text.as_bytes())
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}
