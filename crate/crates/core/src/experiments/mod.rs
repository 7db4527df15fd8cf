//! Registry of numerical experiments. Each experiment sweeps a Poncelet
//! family, tracks a parabola feature, fits the locus or envelope and turns
//! the residuals into pass/fail sub-claims.

mod artifacts;
mod challenges;
mod circum;
mod inpar;

use std::f64::consts::TAU;
use std::str::FromStr;

use nalgebra::{Vector2, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::conics::Conic;
use crate::error::{GeomError, Result};
use crate::fit::{envelope_points_extrapolated, fit_ladder, FitParams, FitReport, Model, Predicate};
use crate::geom::{HLine, HPoint};
use crate::poncelet::{build_family, Family, FamilyKind, FamilySpec, FamilyTriangle};
use crate::triangle::Triangle;

pub use artifacts::{render_svg, write_artifacts, write_csv, ArtifactError, EmitFlags};
pub use challenges::{dump_challenge, ChallengeDump, CHALLENGES};

/// rms threshold for loci sampled directly.
pub const DIRECT_TOL: f64 = 1e-7;
/// rms threshold for envelopes built from adjacent-line intersections.
pub const ENVELOPE_TOL: f64 = 1e-4;
/// Predicate threshold on directly computed objects.
pub const PREDICATE_TOL: f64 = 1e-8;
/// Predicate threshold on envelope-derived objects.
pub const ENVELOPE_PREDICATE_TOL: f64 = 1e-4;
/// Stated centers, axes, incidences and tangencies.
pub const SHAPE_TOL: f64 = 1e-6;
/// Axis-ratio deviation for circle claims.
pub const AXIS_RATIO_TOL: f64 = 1e-6;
/// Largest line distance for a point envelope.
pub const COMMON_POINT_TOL: f64 = 1e-5;
/// Agreement of the complex vertex formula with the construction.
pub const ORACLE_TOL: f64 = 1e-9;
pub const STATIONARY_DIAMETER_TOL: f64 = 1e-7;
pub const COLLINEAR_AREA_TOL: f64 = 1e-9;
pub const DISCRIMINANT_TOL: f64 = 1e-7;
/// Largest share of dropped samples for a passing report.
pub const MAX_DROP_FRACTION: f64 = 0.05;

/// Anchor angle used for single-anchor sub-claims and plots.
pub const PRIMARY_ANCHOR: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum SeedPreset {
    #[default]
    #[serde(rename = "scalene-A")]
    ScaleneA,
    #[serde(rename = "scalene-B")]
    ScaleneB,
    #[serde(rename = "equilateral")]
    Equilateral,
}

impl SeedPreset {
    pub const ALL: [SeedPreset; 3] = [SeedPreset::ScaleneA, SeedPreset::ScaleneB, SeedPreset::Equilateral];

    pub fn name(&self) -> &'static str {
        match self {
            SeedPreset::ScaleneA => "scalene-A",
            SeedPreset::ScaleneB => "scalene-B",
            SeedPreset::Equilateral => "equilateral",
        }
    }

    pub fn triangle(&self) -> Triangle {
        let v = Vector2::new;
        let t = match self {
            SeedPreset::ScaleneA => Triangle::from_xy(v(0.0, 0.0), v(4.0, 0.0), v(1.2, 2.7)),
            SeedPreset::ScaleneB => Triangle::from_xy(v(0.0, 0.0), v(3.0, 0.0), v(2.2, 1.9)),
            SeedPreset::Equilateral => {
                let h = 0.75f64.sqrt();
                Triangle::from_xy(v(1.0, 0.0), v(-0.5, h), v(-0.5, -h))
            }
        };
        t.expect("preset triangles are proper")
    }
}

impl FromStr for SeedPreset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        SeedPreset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown seed preset `{s}`"))
    }
}

/// Interior perspector (barycentric) of the generic circle-inscribed preset.
pub const GENERIC_PERSPECTOR: [f64; 3] = [2.0, 3.0, 4.0];

/// Overrides accepted by [`run_experiment`]. `None` keeps the experiment's default.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunConfig {
    /// Triangles per sweep, `N_t`.
    pub samples: Option<usize>,
    /// Anchors for claims over all foci / tangency points, `N_a`.
    pub anchors: Option<usize>,
    /// Replaces the rms threshold of direct locus fits.
    pub tol: Option<f64>,
    pub seed: SeedPreset,
    /// Bicentric inradius with unit circumradius.
    pub inradius: Option<f64>,
    /// Major semi-axis of the inellipse-family caustic with unit circumradius.
    pub alpha: Option<f64>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.samples {
            if n < 16 {
                return Err(GeomError::InvalidParameter(format!(
                    "samples must be at least 16, got {n}"
                )));
            }
        }
        if let Some(n) = self.anchors {
            if n < 4 {
                return Err(GeomError::InvalidParameter(format!(
                    "anchors must be at least 4, got {n}"
                )));
            }
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(GeomError::InvalidParameter(format!(
                    "tolerance must be positive, got {t}"
                )));
            }
        }
        Ok(())
    }
}

/// Static description of an experiment.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExperimentDef {
    pub id: &'static str,
    pub title: &'static str,
    /// The claim under test, with the family and the tracked object.
    pub claim: &'static str,
    pub family: &'static str,
    pub samples: usize,
    pub anchors: usize,
    #[serde(skip)]
    run: fn(&mut Ctx) -> Result<()>,
}

macro_rules! exp {
    ($id:literal, $title:literal, $claim:literal, $fam:literal, $n:expr, $run:path) => {
        ExperimentDef {
            id: $id,
            title: $title,
            claim: $claim,
            family: $fam,
            samples: $n,
            anchors: 36,
            run: $run,
        }
    };
}

pub static REGISTRY: [ExperimentDef; 23] = [
    exp!("E1", "Focus locus of isogonal circumparabolas, bicentric",
        "fixed tangent at Q to the circumcircle; over the family the focus of its isogonal image moves on a line",
        "bicentric", 360, circum::e1),
    exp!("E2", "Polar-triangle barycenter locus, bicentric",
        "barycenter of the polar triangle of the isogonal circumparabola moves on a line parallel to the focus line",
        "bicentric", 360, circum::e2),
    exp!("E3", "Directrix envelope, bicentric",
        "directrices of isogonal circumparabolas envelop a parabola focused at the incenter X1 whose directrix is parallel to the focus line",
        "bicentric", 720, circum::e3),
    exp!("E4", "Directrix envelope, inellipse family",
        "directrices of isogonal circumparabolas envelop a parabola",
        "inellipse", 720, circum::e4),
    exp!("E5", "Directrix envelope, MacBeath, Brocard and generic",
        "directrices of isogonal circumparabolas envelop a parabola for the MacBeath, Brocard and a generic circle-inscribed family",
        "macbeath, brocard, generic", 720, circum::e5),
    exp!("E6", "Perspector locus, bicentric and MacBeath",
        "perspector of the isogonal circumparabola sweeps an ellipse",
        "bicentric, macbeath", 360, circum::e6),
    exp!("E7", "Perspector locus, Brocard",
        "perspector of the isogonal circumparabola sweeps a circle",
        "brocard", 360, circum::e7),
    exp!("E8", "Isotomic circumparabolas, homothetic",
        "every isotomic circumparabola touches the reflection of the tangent L in X2; together they envelop the ellipse through Q and Q' axis-parallel with the pair",
        "homothetic", 360, circum::e8),
    exp!("E9", "Directrix envelope, homothetic",
        "directrices of isotomic circumparabolas envelop a parabola whose directrix is parallel to L",
        "homothetic", 720, circum::e9),
    exp!("E10", "Polar-triangle barycenter locus, homothetic",
        "barycenter of the polar triangle of the isotomic circumparabola moves on a line parallel to L",
        "homothetic", 360, circum::e10),
    exp!("E11", "Stationary perspector, homothetic",
        "perspector of the isotomic circumparabola is fixed on the Steiner inellipse and collinear with Q and X2",
        "homothetic", 360, circum::e11),
    exp!("E12", "Q, R, X99 collinearity",
        "for every circumparabola of a fixed triangle the tangency points Q and R of its two pre-image lines are collinear with X99",
        "fixed triangle", 72, circum::e12),
    exp!("E13", "Pre-image intersection locus",
        "the meet Z of the isogonal and isotomic pre-image lines maps to the Kiepert parabola under isogonal conjugation",
        "fixed triangle", 360, circum::e13),
    exp!("E14", "Inparabola vertex locus, inellipse family",
        "fixed focus F; the vertex sweeps a circle through F tangent to the caustic at the antipode U of F",
        "inellipse", 360, inpar::e14),
    exp!("E15", "Directrix-foot locus, inellipse family",
        "the reflection C of F in the vertex sweeps a circle of twice the vertex-circle radius centered at U",
        "inellipse", 360, inpar::e15),
    exp!("E16", "Directrix and Simson pencils, inellipse family",
        "directrices pass through W, the reflection of F in U, and Simson lines pass through U",
        "inellipse", 720, inpar::e16),
    exp!("E17", "Loci over all foci, inellipse family",
        "over all F: U runs on the caustic, the vertex-circle center O on an ellipse concentric and axis-aligned with the caustic, W on a circle concentric with the pair",
        "inellipse", 360, inpar::e17),
    exp!("E18", "Inparabola loci, bicentric",
        "vertex and directrix-foot circles with U and W pencils; over all F, O on an ellipse centered at X1385 with minor axis on X1X3, U on an ellipse centered at X1 touching the caustic at its co-vertices, W on a circle centered on X1X3",
        "bicentric", 360, inpar::e18),
    exp!("E19", "Inparabola loci, MacBeath",
        "directrices pass through X4; over all F, O on a circle centered at X140 and U on the circle about X5 through the caustic vertices; X3' of the touchpoint triangle moves on a line whose envelope over F is a conic on the caustic major axis with a focus at X5; the Brianchon point sweeps an ellipse whose center over F is not on a conic",
        "macbeath", 360, inpar::e19),
    exp!("E20", "Inparabola loci, Brocard",
        "over all F: W on a circle centered on X3X39, O on an ellipse centered at the midpoint of X3X39 sharing the caustic minor axis, U on an ellipse concentric and axis-aligned with the caustic touching it at both co-vertices; the Brianchon point sweeps a circle whose center over F sweeps a conic with major axis on X3X39",
        "brocard", 360, inpar::e20),
    exp!("E21", "Vertex formula and conjugate line, generic circle-inscribed",
        "vertex matches the closed complex formula in k = f1 + f2 - f1 f2; its isogonal conjugate runs on the tangent at the antipode of F; Simson lines pass through the antipode of F on the vertex circle, which over F sweeps an ellipse concentric with the caustic",
        "generic, bicentric, macbeath, brocard", 360, inpar::e21),
    exp!("E22", "Focus locus for a fixed Brianchon point, homothetic",
        "inparabolas with a fixed Brianchon point on the outer ellipse have their focus on a circle",
        "homothetic", 360, inpar::e22),
    exp!("E23", "Touchpoint-triangle barycenter, homothetic",
        "for a fixed Brianchon point the barycenter of the touchpoint triangle moves on a line",
        "homothetic", 360, inpar::e23),
];

pub fn list_experiments() -> &'static [ExperimentDef] {
    &REGISTRY
}

/// Case-insensitive lookup by id.
pub fn find_experiment(id: &str) -> Option<&'static ExperimentDef> {
    REGISTRY.iter().find(|d| d.id.eq_ignore_ascii_case(id))
}

/// One checked statement inside a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subclaim {
    pub name: String,
    /// Accepted model for fit-based claims; absent for predicates.
    pub model: Option<Model>,
    pub params: Option<FitParams>,
    pub rms: f64,
    pub max: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Named samples kept for CSV and plots.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesData {
    Points(Vec<(f64, Vector2<f64>)>),
    Lines(Vec<(f64, HLine)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub data: SeriesData,
}

/// Geometry drawn in the SVG overlay.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Plot {
    pub conics: Vec<Conic>,
    pub triangles: Vec<[Vector2<f64>; 3]>,
    pub loci: Vec<Vec<Vector2<f64>>>,
    pub models: Vec<FitReport>,
    pub markers: Vec<Vector2<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub id: String,
    pub title: String,
    pub claim: String,
    pub config: serde_json::Value,
    pub subclaims: Vec<Subclaim>,
    pub dropped: usize,
    pub samples: usize,
    pub artifacts: Vec<String>,
    pub notes: Vec<String>,
    pub pass: bool,
    #[serde(skip)]
    pub series: Vec<Series>,
    #[serde(skip)]
    pub plot: Plot,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn subclaim(&self, name: &str) -> Option<&Subclaim> {
        self.subclaims.iter().find(|s| s.name == name)
    }
}

/// Working state of a running experiment.
pub(crate) struct Ctx<'a> {
    cfg: &'a RunConfig,
    default_samples: usize,
    default_anchors: usize,
    subclaims: Vec<Subclaim>,
    dropped: usize,
    attempted: usize,
    notes: Vec<String>,
    series: Vec<Series>,
    plot: Plot,
}

/// Parameters `(k + 1/4)·2π/n`; the offset keeps samples off symmetric positions.
pub fn t_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| (k as f64 + 0.25) * TAU / n as f64).collect()
}

/// Anchor angles `0.1 + k·2π/n`.
pub fn anchor_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| 0.1 + k as f64 * TAU / n as f64).collect()
}

fn rms(v: &[f64]) -> f64 {
    if v.is_empty() {
        return f64::INFINITY;
    }
    (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
}

fn max_of(v: &[f64]) -> f64 {
    if v.is_empty() {
        return f64::INFINITY;
    }
    v.iter().cloned().fold(0.0, f64::max)
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a RunConfig, default_samples: usize, default_anchors: usize) -> Self {
        Ctx {
            cfg,
            default_samples,
            default_anchors,
            subclaims: Vec::new(),
            dropped: 0,
            attempted: 0,
            notes: Vec::new(),
            series: Vec::new(),
            plot: Plot::default(),
        }
    }

    pub(crate) fn n_t(&self) -> usize {
        self.cfg.samples.unwrap_or(self.default_samples)
    }

    pub(crate) fn n_a(&self) -> usize {
        self.cfg.anchors.unwrap_or(self.default_anchors)
    }

    pub(crate) fn direct_tol(&self) -> f64 {
        self.cfg.tol.unwrap_or(DIRECT_TOL)
    }

    pub(crate) fn seed(&self) -> Triangle {
        self.cfg.seed.triangle()
    }

    pub(crate) fn family(&self, kind: FamilyKind) -> Result<Family> {
        let seed = self.seed();
        let spec = match kind {
            FamilyKind::Inellipse => FamilySpec::Inellipse {
                radius: 1.0,
                alpha: self.cfg.alpha.unwrap_or(0.6),
            },
            FamilyKind::Bicentric => FamilySpec::Bicentric {
                radius: 1.0,
                inradius: self.cfg.inradius.unwrap_or(0.35),
            },
            FamilyKind::MacBeath => FamilySpec::MacBeath { seed },
            FamilyKind::Brocard => FamilySpec::Brocard { seed },
            FamilyKind::Homothetic => FamilySpec::Homothetic { seed },
            FamilyKind::Generic => FamilySpec::Generic {
                seed,
                perspector: Vector3::from(GENERIC_PERSPECTOR),
            },
            FamilyKind::Custom => return Err(GeomError::InvalidParameter("custom families have no preset".into())),
        };
        build_family(spec)
    }

    /// Evaluate `f` on every non-degenerate triangle of a `n`-point grid;
    /// samples where `f` yields nothing are dropped and counted.
    pub(crate) fn sweep<T: Send>(
        &mut self,
        fam: &Family,
        n: usize,
        f: impl Fn(&FamilyTriangle) -> Option<T> + Sync,
    ) -> Vec<(f64, T)> {
        let out: Vec<Option<(f64, T)>> = t_grid(n)
            .into_par_iter()
            .map(|t| {
                let s = fam.triangle_at(t).ok()?;
                if s.degenerate {
                    return None;
                }
                f(&s).map(|v| (t, v))
            })
            .collect();
        self.attempted += n;
        let kept: Vec<(f64, T)> = out.into_iter().flatten().collect();
        self.dropped += n - kept.len();
        kept
    }

    pub(crate) fn push(&mut self, s: Subclaim) {
        self.subclaims.push(s);
    }

    /// Fit claim: the model must be one of `expected` with rms under `threshold`.
    pub(crate) fn fit_claim(&mut self, name: &str, r: &FitReport, expected: &[Model], threshold: f64) {
        let pass = expected.contains(&r.model) && r.passes(threshold);
        self.push(Subclaim {
            name: name.into(),
            model: Some(r.model),
            params: Some(r.params.clone()),
            rms: r.rms_residual,
            max: r.max_residual,
            threshold,
            pass,
        });
    }

    /// Worst of several fits of the same claim (one per anchor).
    pub(crate) fn worst_fit_claim(&mut self, name: &str, fits: &[FitReport], expected: &[Model], threshold: f64) {
        let worst = fits
            .iter()
            .max_by(|a, b| {
                let ka = (!expected.contains(&a.model), a.rms_residual);
                let kb = (!expected.contains(&b.model), b.rms_residual);
                ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
            })
            .cloned()
            .unwrap_or_else(|| FitReport::none(0));
        let mut r = worst;
        r.max_residual = fits.iter().map(|f| f.max_residual).fold(r.max_residual, f64::max);
        self.fit_claim(name, &r, expected, threshold);
    }

    /// Claim on residuals that must all stay under `threshold`.
    pub(crate) fn residual_claim(&mut self, name: &str, residuals: &[f64], threshold: f64) {
        let max = max_of(residuals);
        self.push(Subclaim {
            name: name.into(),
            model: None,
            params: None,
            rms: rms(residuals),
            max,
            threshold,
            pass: max < threshold,
        });
    }

    pub(crate) fn value_claim(&mut self, name: &str, value: f64, threshold: f64) {
        self.residual_claim(name, &[value], threshold);
    }

    pub(crate) fn predicate_claim(&mut self, name: &str, preds: &[Predicate]) {
        let res: Vec<f64> = preds.iter().map(|p| p.residual).collect();
        let thr = preds.first().map_or(0.0, |p| p.threshold);
        self.residual_claim(name, &res, thr);
    }

    /// Negative claim: passes when the value stays above `floor`.
    pub(crate) fn above_claim(&mut self, name: &str, r: &FitReport, floor: f64) {
        self.push(Subclaim {
            name: name.into(),
            model: Some(r.model),
            params: Some(r.params.clone()),
            rms: r.rms_residual,
            max: r.max_residual,
            threshold: floor,
            pass: r.rms_residual > floor,
        });
    }

    pub(crate) fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub(crate) fn points(&mut self, name: &str, data: &[(f64, Vector2<f64>)]) {
        self.plot.loci.push(data.iter().map(|(_, p)| *p).collect());
        self.series.push(Series {
            name: name.into(),
            data: SeriesData::Points(data.to_vec()),
        });
    }

    pub(crate) fn lines(&mut self, name: &str, data: &[(f64, HLine)]) {
        self.series.push(Series {
            name: name.into(),
            data: SeriesData::Lines(data.to_vec()),
        });
    }

    pub(crate) fn plot_family(&mut self, fam: &Family, n_tri: usize) {
        self.plot.conics.push(*fam.outer());
        self.plot.conics.push(*fam.inner());
        for t in t_grid(n_tri) {
            if let Ok(s) = fam.triangle_at(t) {
                self.plot.triangles.push(s.triangle.vertices());
            }
        }
    }

    pub(crate) fn plot_model(&mut self, r: &FitReport) {
        if r.model != Model::None {
            self.plot.models.push(r.clone());
        }
    }

    pub(crate) fn plot_conic(&mut self, c: &Conic) {
        self.plot.conics.push(*c);
    }

    pub(crate) fn marker(&mut self, p: Vector2<f64>) {
        self.plot.markers.push(p);
    }
}

impl Ctx<'_> {
    /// Book-keeping for sweeps that do not go through [`Ctx::sweep`].
    pub(crate) fn count(&mut self, attempted: usize, kept: usize) {
        self.attempted += attempted;
        self.dropped += attempted - kept;
    }

    /// Claim judged on the rms of the residuals rather than the maximum.
    pub(crate) fn rms_claim(&mut self, name: &str, residuals: &[f64], threshold: f64) {
        let r = rms(residuals);
        self.push(Subclaim {
            name: name.into(),
            model: None,
            params: None,
            rms: r,
            max: max_of(residuals),
            threshold,
            pass: r < threshold,
        });
    }
}

pub(crate) fn just_points<T: Copy>(data: &[(f64, T)]) -> Vec<T> {
    data.iter().map(|(_, p)| *p).collect()
}

/// Model accepted by the point/line/circle/conic ladder, or the last
/// candidate tried when none is accepted.
pub(crate) fn ladder(points: &[Vector2<f64>], threshold: f64) -> FitReport {
    match fit_ladder(points, threshold) {
        Ok(l) if l.accepted.model != Model::None => l.accepted,
        Ok(l) => l
            .candidates
            .last()
            .cloned()
            .unwrap_or_else(|| FitReport::none(points.len())),
        Err(_) => FitReport::none(points.len()),
    }
}

/// Envelope points of a sampled line family. Only lines adjacent on the grid
/// of step `step` are intersected, so dropped samples do not bridge gaps.
/// Points farther than `far` from `center` are discarded; the second value
/// counts them.
pub(crate) fn envelope_of(
    lines: &[(f64, HLine)],
    step: f64,
    center: Vector2<f64>,
    far: f64,
) -> (Vec<Vector2<f64>>, usize) {
    let mut out = Vec::with_capacity(lines.len());
    let mut discarded = 0;
    let mut run: Vec<HLine> = Vec::new();
    let flush = |run: &mut Vec<HLine>, out: &mut Vec<Vector2<f64>>, discarded: &mut usize| {
        if run.len() >= 8 {
            if let Ok(env) = envelope_points_extrapolated(run) {
                *discarded += env.dropped;
                for p in env.points {
                    if (p - center).norm() <= far {
                        out.push(p);
                    } else {
                        *discarded += 1;
                    }
                }
            }
        } else {
            *discarded += run.len();
        }
        run.clear();
    };
    let mut prev: Option<f64> = None;
    for (t, l) in lines {
        if let Some(p) = prev {
            if t - p > 1.5 * step {
                flush(&mut run, &mut out, &mut discarded);
            }
        }
        run.push(*l);
        prev = Some(*t);
    }
    flush(&mut run, &mut out, &mut discarded);
    (out, discarded)
}

/// Focus and directrix recorded by a parabola fit.
pub(crate) fn parabola_fit_elements(r: &FitReport) -> Option<(Vector2<f64>, HLine)> {
    match &r.params {
        FitParams::Conic(p) => {
            let f = p.focus?;
            let d = p.directrix?;
            Some((Vector2::new(f[0], f[1]), HLine::new(d[0], d[1], d[2]).ok()?))
        }
        _ => None,
    }
}

/// True when some vertex of `tri` lies within `gap` of `p`.
pub(crate) fn near_vertex(tri: &Triangle, p: Vector2<f64>, gap: f64) -> bool {
    tri.vertices().iter().any(|v| (v - p).norm() < gap)
}

fn config_json(def: &ExperimentDef, cfg: &RunConfig, samples: usize, anchors: usize) -> serde_json::Value {
    json!({
        "family": def.family,
        "seed_preset": cfg.seed.name(),
        "samples": samples,
        "anchors": anchors,
        "primary_anchor": PRIMARY_ANCHOR,
        "inradius": cfg.inradius.unwrap_or(0.35),
        "alpha": cfg.alpha.unwrap_or(0.6),
        "direct_tol": cfg.tol.unwrap_or(DIRECT_TOL),
    })
}

pub fn run_experiment(id: &str, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let def = find_experiment(id).ok_or_else(|| GeomError::InvalidParameter(format!("unknown experiment `{id}`")))?;
    let mut ctx = Ctx::new(cfg, def.samples, def.anchors);
    (def.run)(&mut ctx)?;
    let dropped_ok = (ctx.dropped as f64) < MAX_DROP_FRACTION * ctx.attempted.max(1) as f64;
    if !dropped_ok {
        ctx.notes.push(format!(
            "dropped {} of {} samples, above the {:.0}% limit",
            ctx.dropped,
            ctx.attempted,
            MAX_DROP_FRACTION * 100.0
        ));
    }
    let pass = dropped_ok && !ctx.subclaims.is_empty() && ctx.subclaims.iter().all(|s| s.pass);
    Ok(Report {
        id: def.id.into(),
        title: def.title.into(),
        claim: def.claim.into(),
        config: config_json(def, cfg, ctx.n_t(), ctx.n_a()),
        subclaims: ctx.subclaims,
        dropped: ctx.dropped,
        samples: ctx.attempted,
        artifacts: Vec::new(),
        notes: ctx.notes,
        pass,
        series: ctx.series,
        plot: ctx.plot,
    })
}

/// Run every registered experiment in parallel; results keep registry order.
pub fn run_all(cfg: &RunConfig) -> Vec<(&'static str, Result<Report>)> {
    let ids: Vec<&'static str> = REGISTRY.iter().map(|d| d.id).collect();
    run_many(&ids, cfg)
}

/// Run the given experiments in parallel; results keep the order of `ids`.
pub fn run_many<'a>(ids: &[&'a str], cfg: &RunConfig) -> Vec<(&'a str, Result<Report>)> {
    ids.par_iter().map(|id| (*id, run_experiment(id, cfg))).collect()
}
