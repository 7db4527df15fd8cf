//! JSON, CSV and SVG output of reports and challenge dumps.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use nalgebra::Vector2;

use super::{Plot, Report, Series, SeriesData};
use crate::conics::{Conic, ConicKind};
use crate::fit::{FitReport, Model};

#[derive(Debug, thiserror::Error)]
pub enum ArtifactError {
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
}

/// Which files to emit besides nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmitFlags {
    pub json: bool,
    pub csv: bool,
    pub svg: bool,
}

impl Default for EmitFlags {
    fn default() -> Self {
        EmitFlags {
            json: true,
            csv: true,
            svg: true,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> ArtifactError + '_ {
    move |source| ArtifactError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Write the selected artifacts of `report` into `dir` and record their file
/// names in `report.artifacts`. The JSON is written last so it lists them.
pub fn write_artifacts(report: &mut Report, dir: &Path, flags: EmitFlags) -> Result<Vec<PathBuf>, ArtifactError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::new();
    report.artifacts.clear();
    if flags.csv {
        let name = format!("{}.csv", report.id);
        let path = dir.join(&name);
        write_csv(&report.series, &path)?;
        report.artifacts.push(name);
        written.push(path);
    }
    if flags.svg {
        let name = format!("{}.svg", report.id);
        let path = dir.join(&name);
        fs::write(&path, render_svg(&report.plot, &report.title)).map_err(io_err(&path))?;
        report.artifacts.push(name);
        written.push(path);
    }
    if flags.json {
        let name = format!("{}.json", report.id);
        let path = dir.join(&name);
        report.artifacts.push(name);
        let mut text = report.to_json();
        text.push('\n');
        fs::write(&path, text).map_err(io_err(&path))?;
        written.push(path);
    }
    Ok(written)
}

/// One row per sample: `series,t,feature_x,feature_y,l,m,n`; point rows
/// leave the line columns empty and vice versa.
pub fn write_csv(series: &[Series], path: &Path) -> Result<(), ArtifactError> {
    let csv_err = |source| ArtifactError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["series", "t", "feature_x", "feature_y", "l", "m", "n"])
        .map_err(csv_err)?;
    for s in series {
        match &s.data {
            SeriesData::Points(pts) => {
                for (t, p) in pts {
                    let row = [s.name.clone(), t.to_string(), p.x.to_string(), p.y.to_string()];
                    w.write_record(row.iter().map(String::as_str).chain(["", "", ""]))
                        .map_err(csv_err)?;
                }
            }
            SeriesData::Lines(lines) => {
                for (t, l) in lines {
                    let c = l.coords();
                    let row = [s.name.clone(), t.to_string(), String::new(), String::new()];
                    let tail = [c.x.to_string(), c.y.to_string(), c.z.to_string()];
                    w.write_record(row.iter().chain(tail.iter()).map(String::as_str))
                        .map_err(csv_err)?;
                }
            }
        }
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

const SIZE: f64 = 800.0;
const LOCUS_COLORS: [&str; 6] = ["#d62728", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];

/// World-to-pixel map with the y axis pointing up.
struct View {
    min: Vector2<f64>,
    max: Vector2<f64>,
    scale: f64,
}

impl View {
    fn new(plot: &Plot) -> View {
        let mut pts: Vec<Vector2<f64>> = Vec::new();
        if let Some(g) = plot.conics.first().and_then(|c| c.ellipse_geometry().ok()) {
            pts.extend((0..64).map(|i| g.point_at(i as f64 * std::f64::consts::TAU / 64.0)));
        } else {
            pts.extend(plot.triangles.iter().flatten());
            pts.extend(plot.loci.iter().flatten().filter(|p| p.norm() < 1e6));
        }
        if pts.is_empty() {
            pts.push(Vector2::new(-1.0, -1.0));
            pts.push(Vector2::new(1.0, 1.0));
        }
        let mut min = pts[0];
        let mut max = pts[0];
        for p in &pts {
            min = min.inf(p);
            max = max.sup(p);
        }
        let side = (max - min).max().max(1e-9);
        let c = 0.5 * (min + max);
        let half = 0.5 * side * 1.2;
        let min = c - Vector2::repeat(half);
        let max = c + Vector2::repeat(half);
        View {
            min,
            max,
            scale: SIZE / (2.0 * half),
        }
    }

    fn px(&self, p: Vector2<f64>) -> (f64, f64) {
        ((p.x - self.min.x) * self.scale, (self.max.y - p.y) * self.scale)
    }

    fn inside(&self, p: Vector2<f64>) -> bool {
        let m = 0.5 * (self.max - self.min);
        let c = 0.5 * (self.max + self.min);
        (p.x - c.x).abs() <= 1.5 * m.x && (p.y - c.y).abs() <= 1.5 * m.y
    }

    /// Polyline runs of `pts` that stay near the viewport.
    fn runs(&self, pts: &[Vector2<f64>]) -> Vec<String> {
        let mut out = Vec::new();
        let mut cur = String::new();
        let mut n = 0;
        for p in pts {
            if self.inside(*p) {
                let (x, y) = self.px(*p);
                let _ = write!(cur, "{x:.2},{y:.2} ");
                n += 1;
            } else {
                if n > 1 {
                    out.push(std::mem::take(&mut cur));
                }
                cur.clear();
                n = 0;
            }
        }
        if n > 1 {
            out.push(cur);
        }
        out
    }
}

fn conic_points(c: &Conic, view: &View) -> Vec<Vector2<f64>> {
    match c.kind() {
        ConicKind::Ellipse => match c.ellipse_geometry() {
            Ok(g) => (0..=256)
                .map(|i| g.point_at(i as f64 * std::f64::consts::TAU / 256.0))
                .collect(),
            Err(_) => Vec::new(),
        },
        ConicKind::Parabola => match c.parabola_elements() {
            Ok(e) => {
                let v = e.vertex.xy();
                let axis = (e.focus.xy() - v).normalize();
                let perp = Vector2::new(-axis.y, axis.x);
                let f = e.focal_length();
                let span = 2.0 * (view.max - view.min).norm();
                (-400..=400)
                    .map(|i| {
                        let s = span * i as f64 / 400.0;
                        v + s * perp + (s * s / (4.0 * f)) * axis
                    })
                    .collect()
            }
            Err(_) => Vec::new(),
        },
        _ => Vec::new(),
    }
}

fn polyline(out: &mut String, runs: Vec<String>, stroke: &str, width: f64, dashed: bool) {
    let dash = if dashed { " stroke-dasharray=\"6,4\"" } else { "" };
    for r in runs {
        let _ = writeln!(
            out,
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"{dash}/>",
            r.trim_end()
        );
    }
}

fn model(out: &mut String, r: &FitReport, view: &View) {
    match r.model {
        Model::Point => {
            if let Some(p) = r.point() {
                marker(out, view, p, "#17becf");
            }
        }
        Model::Line => {
            if let Some(l) = r.line() {
                let a = l.anchor();
                let d = l.direction();
                let span = 2.0 * (view.max - view.min).norm();
                let pts: Vec<Vector2<f64>> = (-200..=200).map(|i| a + d * (span * i as f64 / 200.0)).collect();
                polyline(out, view.runs(&pts), "#17becf", 1.5, true);
            }
        }
        _ => {
            if let Some(c) = r.conic() {
                polyline(out, view.runs(&conic_points(&c, view)), "#17becf", 1.5, true);
            }
        }
    }
}

fn marker(out: &mut String, view: &View, p: Vector2<f64>, color: &str) {
    if view.inside(p) {
        let (x, y) = view.px(p);
        let _ = writeln!(out, "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"{color}\"/>");
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Overlay of the family conics, a few triangles, the loci as polylines and
/// the fitted models dashed. The viewport is the outer conic plus a 10% margin.
pub fn render_svg(plot: &Plot, title: &str) -> String {
    let view = View::new(plot);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    let _ = writeln!(out, "  <title>{}</title>", escape(title));
    let _ = writeln!(out, "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    for (i, c) in plot.conics.iter().enumerate() {
        let color = if i < 2 { "#000000" } else { "#7f7f7f" };
        polyline(&mut out, view.runs(&conic_points(c, &view)), color, 1.0, false);
    }
    for t in &plot.triangles {
        let mut pts = t.to_vec();
        pts.push(t[0]);
        polyline(&mut out, view.runs(&pts), "#1f77b4", 0.8, false);
    }
    for (i, l) in plot.loci.iter().enumerate() {
        let color = LOCUS_COLORS[i % LOCUS_COLORS.len()];
        polyline(&mut out, view.runs(l), color, 1.5, false);
    }
    for m in &plot.models {
        model(&mut out, m, &view);
    }
    for p in &plot.markers {
        marker(&mut out, &view, *p, "#000000");
    }
    out.push_str("</svg>\n");
    out
}
