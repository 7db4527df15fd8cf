//! Model fits for sampled loci and line families, envelopes, and geometric
//! predicates with residuals.

use nalgebra::{DMatrix, Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::conics::{wrap_half_turn, Conic, ConicKind};
use crate::error::{GeomError, Result};
use crate::geom::{concurrency_point, cross3, meet, tls_line, HLine, HPoint};

/// Condition number above which a pencil of lines has no usable common point.
pub const PENCIL_CONDITION_MAX: f64 = 1e12;
pub const PARALLEL_TOL: f64 = 1e-7;
pub const COLLINEAR_TOL: f64 = 1e-9;
pub const STATIONARY_TOL: f64 = 1e-7;
pub const ON_CONIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Point,
    Line,
    Circle,
    Ellipse,
    Parabola,
    Hyperbola,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConicParams {
    pub coeffs: [f64; 6],
    pub kind: ConicKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub center: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub semi_axes: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub angle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub focus: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub vertex: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub directrix: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FitParams {
    None,
    Point { x: f64, y: f64 },
    Line { l: f64, m: f64, n: f64 },
    Circle { cx: f64, cy: f64, r: f64 },
    Conic(ConicParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: Model,
    pub params: FitParams,
    pub rms_residual: f64,
    pub max_residual: f64,
    pub n_samples: usize,
    pub dropped: usize,
}

fn xy(v: Vector2<f64>) -> [f64; 2] {
    [v.x, v.y]
}

impl ConicParams {
    pub fn from_conic(c: &Conic) -> Self {
        let mut p = ConicParams {
            coeffs: c.coeffs(),
            kind: c.kind(),
            center: None,
            semi_axes: None,
            angle: None,
            focus: None,
            vertex: None,
            directrix: None,
        };
        match c.kind() {
            ConicKind::Ellipse => {
                if let Ok(g) = c.ellipse_geometry() {
                    p.center = Some(xy(g.center));
                    p.semi_axes = Some([g.semi_major, g.semi_minor]);
                    p.angle = Some(g.angle);
                }
            }
            ConicKind::Parabola => {
                if let Ok(e) = c.parabola_elements() {
                    p.focus = Some(xy(e.focus.xy()));
                    p.vertex = Some(xy(e.vertex.xy()));
                    let d = e.directrix.coords();
                    p.directrix = Some([d.x, d.y, d.z]);
                }
            }
            ConicKind::Hyperbola => {
                if let Ok(ctr) = c.center() {
                    if ctr.is_finite() {
                        p.center = Some(xy(ctr.xy()));
                    }
                }
            }
            ConicKind::Degenerate => {}
        }
        p
    }
}

impl FitReport {
    pub fn none(n_samples: usize) -> Self {
        FitReport {
            model: Model::None,
            params: FitParams::None,
            rms_residual: f64::INFINITY,
            max_residual: f64::INFINITY,
            n_samples,
            dropped: 0,
        }
    }

    fn with_residuals(model: Model, params: FitParams, points: &[Vector2<f64>]) -> Self {
        let mut r = FitReport {
            model,
            params,
            rms_residual: 0.0,
            max_residual: 0.0,
            n_samples: points.len(),
            dropped: 0,
        };
        let res = r.residuals(points);
        r.rms_residual = rms(&res);
        r.max_residual = res.iter().cloned().fold(0.0, f64::max);
        r
    }

    /// Per-point residuals under this model: distance to the point, the line
    /// or the circle, or the Sampson distance to the conic.
    pub fn residuals(&self, points: &[Vector2<f64>]) -> Vec<f64> {
        match &self.params {
            FitParams::None => vec![f64::INFINITY; points.len()],
            FitParams::Point { x, y } => points.iter().map(|p| (p - Vector2::new(*x, *y)).norm()).collect(),
            FitParams::Line { l, m, n } => points.iter().map(|p| (l * p.x + m * p.y + n).abs()).collect(),
            FitParams::Circle { cx, cy, r } => points
                .iter()
                .map(|p| ((p - Vector2::new(*cx, *cy)).norm() - r).abs())
                .collect(),
            FitParams::Conic(c) => match Conic::from_coeffs(c.coeffs) {
                Ok(conic) => points
                    .iter()
                    .map(|p| conic.sampson_distance(&HPoint::from_xy(*p)))
                    .collect(),
                Err(_) => vec![f64::INFINITY; points.len()],
            },
        }
    }

    pub fn passes(&self, threshold: f64) -> bool {
        self.model != Model::None && self.rms_residual < threshold
    }

    pub fn point(&self) -> Option<Vector2<f64>> {
        match self.params {
            FitParams::Point { x, y } => Some(Vector2::new(x, y)),
            _ => None,
        }
    }

    pub fn line(&self) -> Option<HLine> {
        match self.params {
            FitParams::Line { l, m, n } => HLine::new(l, m, n).ok(),
            _ => None,
        }
    }

    pub fn circle(&self) -> Option<(Vector2<f64>, f64)> {
        match self.params {
            FitParams::Circle { cx, cy, r } => Some((Vector2::new(cx, cy), r)),
            _ => None,
        }
    }

    pub fn conic(&self) -> Option<Conic> {
        match &self.params {
            FitParams::Conic(c) => Conic::from_coeffs(c.coeffs).ok(),
            FitParams::Circle { cx, cy, r } => Conic::circle(Vector2::new(*cx, *cy), *r).ok(),
            _ => None,
        }
    }
}

fn rms(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    (v.iter().map(|r| r * r).sum::<f64>() / v.len() as f64).sqrt()
}

fn require(points: &[Vector2<f64>], needed: usize) -> Result<()> {
    if points.len() < needed {
        return Err(GeomError::TooFewSamples {
            needed,
            got: points.len(),
        });
    }
    Ok(())
}

/// Similarity `p ↦ s (p − c)` giving the points zero mean and mean distance √2.
#[derive(Debug, Clone, Copy)]
struct Normalizer {
    c: Vector2<f64>,
    s: f64,
}

impl Normalizer {
    fn new(points: &[Vector2<f64>]) -> Self {
        let n = points.len() as f64;
        let c = points.iter().fold(Vector2::zeros(), |a, p| a + p) / n;
        let mean = points.iter().map(|p| (p - c).norm()).sum::<f64>() / n;
        let s = if mean > 0.0 {
            std::f64::consts::SQRT_2 / mean
        } else {
            1.0
        };
        Normalizer { c, s }
    }

    fn apply(&self, p: &Vector2<f64>) -> Vector2<f64> {
        (p - self.c) * self.s
    }

    fn homography(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.s,
            0.0,
            -self.s * self.c.x,
            0.0,
            self.s,
            -self.s * self.c.y,
            0.0,
            0.0,
            1.0,
        )
    }

    /// Conic in normalized coordinates back to the original frame.
    fn conic_back(&self, m: &Matrix3<f64>) -> Matrix3<f64> {
        let t = self.homography();
        t.transpose() * m * t
    }
}

fn coeff_matrix(c: &[f64]) -> Matrix3<f64> {
    Matrix3::new(
        c[0],
        c[1] / 2.0,
        c[3] / 2.0,
        c[1] / 2.0,
        c[2],
        c[4] / 2.0,
        c[3] / 2.0,
        c[4] / 2.0,
        c[5],
    )
}

/// Centroid fit; residuals are distances to the centroid.
pub fn fit_point(points: &[Vector2<f64>]) -> Result<FitReport> {
    require(points, 1)?;
    let c = points.iter().fold(Vector2::zeros(), |a, p| a + p) / points.len() as f64;
    Ok(FitReport::with_residuals(
        Model::Point,
        FitParams::Point { x: c.x, y: c.y },
        points,
    ))
}

/// Total-least-squares line; residuals are perpendicular distances.
pub fn fit_line(points: &[Vector2<f64>]) -> Result<FitReport> {
    require(points, 3)?;
    let Ok(fit) = tls_line(points) else {
        return Ok(FitReport::none(points.len()));
    };
    let v = fit.line.coords();
    Ok(FitReport::with_residuals(
        Model::Line,
        FitParams::Line { l: v.x, m: v.y, n: v.z },
        points,
    ))
}

/// Algebraic circle fit `x² + y² + Dx + Ey + G = 0`; residuals are `|dist − r|`.
pub fn fit_circle(points: &[Vector2<f64>]) -> Result<FitReport> {
    require(points, 4)?;
    let nz = Normalizer::new(points);
    let q: Vec<Vector2<f64>> = points.iter().map(|p| nz.apply(p)).collect();
    let a = DMatrix::from_fn(q.len(), 3, |i, j| match j {
        0 => q[i].x,
        1 => q[i].y,
        _ => 1.0,
    });
    let b = DMatrix::from_fn(q.len(), 1, |i, _| -q[i].norm_squared());
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    if sv.min() <= 1e-10 * sv.max() {
        return Ok(FitReport::none(points.len()));
    }
    let Ok(sol) = svd.solve(&b, 0.0) else {
        return Ok(FitReport::none(points.len()));
    };
    let (d, e, g) = (sol[0], sol[1], sol[2]);
    let ctr = Vector2::new(-d / 2.0, -e / 2.0);
    let r2 = ctr.norm_squared() - g;
    if !(r2 > 0.0) {
        return Ok(FitReport::none(points.len()));
    }
    let center = nz.c + ctr / nz.s;
    let r = r2.sqrt() / nz.s;
    Ok(FitReport::with_residuals(
        Model::Circle,
        FitParams::Circle {
            cx: center.x,
            cy: center.y,
            r,
        },
        points,
    ))
}

fn conic_report(points: &[Vector2<f64>], conic: &Conic) -> FitReport {
    let model = match conic.kind() {
        ConicKind::Ellipse => Model::Ellipse,
        ConicKind::Parabola => Model::Parabola,
        ConicKind::Hyperbola => Model::Hyperbola,
        ConicKind::Degenerate => return FitReport::none(points.len()),
    };
    FitReport::with_residuals(model, FitParams::Conic(ConicParams::from_conic(conic)), points)
}

/// Unconstrained conic through the points: the smallest right singular vector
/// of the monomial design matrix in normalized coordinates.
pub fn fit_conic(points: &[Vector2<f64>]) -> Result<FitReport> {
    require(points, 6)?;
    let nz = Normalizer::new(points);
    let q: Vec<Vector2<f64>> = points.iter().map(|p| nz.apply(p)).collect();
    let a = DMatrix::from_fn(q.len(), 6, |i, j| {
        let p = q[i];
        [p.x * p.x, p.x * p.y, p.y * p.y, p.x, p.y, 1.0][j]
    });
    let svd = a.svd(false, true);
    let vt = svd.v_t.ok_or(GeomError::DegenerateConic)?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let sv = &svd.singular_values;
    // points on a line leave a multi-dimensional null space
    if sv[order[1]] <= 1e-10 * sv[order[order.len() - 1]] {
        return Ok(FitReport::none(points.len()));
    }
    let row = vt.row(order[0]);
    let coeffs: Vec<f64> = row.iter().cloned().collect();
    let m = nz.conic_back(&coeff_matrix(&coeffs));
    let Ok(conic) = Conic::from_matrix(m) else {
        return Ok(FitReport::none(points.len()));
    };
    Ok(conic_report(points, &conic))
}

/// Conic with rank-one quadratic part `(x cos θ + y sin θ)²` and linear part
/// solved by least squares for the given axis-normal angle.
fn parabola_for_angle(q: &[Vector2<f64>], th: f64) -> Option<(Matrix3<f64>, f64)> {
    let (c, s) = (th.cos(), th.sin());
    let a = DMatrix::from_fn(q.len(), 3, |i, j| match j {
        0 => q[i].x,
        1 => q[i].y,
        _ => 1.0,
    });
    let b = DMatrix::from_fn(q.len(), 1, |i, _| -(c * q[i].x + s * q[i].y).powi(2));
    let sol = a.svd(true, true).solve(&b, 1e-14).ok()?;
    let m = coeff_matrix(&[c * c, 2.0 * c * s, s * s, sol[0], sol[1], sol[2]]);
    let conic = Conic::from_matrix(m).ok()?;
    let res: Vec<f64> = q.iter().map(|p| conic.sampson_distance(&HPoint::from_xy(*p))).collect();
    Some((m, rms(&res)))
}

pub(crate) fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Best parabola through approximate data: a scan over the axis direction
/// followed by golden-section refinement, with a linear solve at each angle.
pub fn fit_parabola(points: &[Vector2<f64>]) -> Result<FitReport> {
    require(points, 5)?;
    let nz = Normalizer::new(points);
    let q: Vec<Vector2<f64>> = points.iter().map(|p| nz.apply(p)).collect();
    let obj = |th: f64| parabola_for_angle(&q, th).map_or(f64::INFINITY, |(_, r)| r);
    let n = 360;
    let step = std::f64::consts::PI / n as f64;
    let best = (0..n)
        .map(|i| i as f64 * step)
        .min_by(|a, b| obj(*a).total_cmp(&obj(*b)))
        .unwrap_or(0.0);
    let th = golden_min(obj, best - step, best + step, 1e-13);
    let Some((m, _)) = parabola_for_angle(&q, th) else {
        return Ok(FitReport::none(points.len()));
    };
    let Ok(conic) = Conic::from_matrix(nz.conic_back(&m)) else {
        return Ok(FitReport::none(points.len()));
    };
    // the rank-one quadratic part is exact, so classify by construction
    let params = ConicParams {
        kind: ConicKind::Parabola,
        ..ConicParams::from_conic(&conic)
    };
    let mut report = FitReport::with_residuals(Model::Parabola, FitParams::Conic(params), points);
    if conic.kind() != ConicKind::Parabola {
        if let FitParams::Conic(p) = &mut report.params {
            if let Ok(e) = parabola_elements_forced(&conic) {
                p.focus = Some(xy(e.0));
                p.vertex = Some(xy(e.1));
                p.directrix = Some([e.2.x, e.2.y, e.2.z]);
            }
        }
    }
    Ok(report)
}

/// Parabola elements when rounding pushed the classifier off the parabola
/// class: project the quadratic part onto rank one and extract from that.
fn parabola_elements_forced(conic: &Conic) -> Result<(Vector2<f64>, Vector2<f64>, Vector3<f64>)> {
    let m = conic.matrix();
    let (a, b, c) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
    let th = 0.5 * f64::atan2(2.0 * b, a - c);
    let u = Vector2::new(th.cos(), th.sin());
    let lam = a * u.x * u.x + 2.0 * b * u.x * u.y + c * u.y * u.y;
    let q = u * u.transpose() * lam;
    let fixed = Matrix3::new(
        q[(0, 0)],
        q[(0, 1)],
        m[(0, 2)],
        q[(1, 0)],
        q[(1, 1)],
        m[(1, 2)],
        m[(2, 0)],
        m[(2, 1)],
        m[(2, 2)],
    );
    let e = Conic::from_matrix(fixed)?.parabola_elements()?;
    Ok((e.focus.xy(), e.vertex.xy(), e.directrix.coords()))
}

/// Least-squares common point of a pencil; residuals are point-line distances.
pub fn common_point(lines: &[HLine]) -> Result<FitReport> {
    if lines.len() < 3 {
        return Err(GeomError::TooFewSamples {
            needed: 3,
            got: lines.len(),
        });
    }
    let c = match concurrency_point(lines) {
        Ok(c) if c.condition <= PENCIL_CONDITION_MAX => c,
        _ => return Ok(FitReport::none(lines.len())),
    };
    let p = c.point.xy();
    Ok(FitReport {
        model: Model::Point,
        params: FitParams::Point { x: p.x, y: p.y },
        rms_residual: c.rms_residual,
        max_residual: c.max_residual,
        n_samples: lines.len(),
        dropped: 0,
    })
}

/// Characteristic points of an ordered line family.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub points: Vec<Vector2<f64>>,
    pub dropped: usize,
}

/// Intersections of consecutive lines; near-parallel pairs are dropped.
pub fn envelope_points(lines: &[HLine]) -> Result<Envelope> {
    if lines.len() < 8 {
        return Err(GeomError::TooFewSamples {
            needed: 8,
            got: lines.len(),
        });
    }
    let mut points = Vec::with_capacity(lines.len());
    let mut dropped = 0;
    for w in lines.windows(2) {
        let sin = w[0].normal().perp(&w[1].normal()).abs();
        if sin < 1e-12 {
            dropped += 1;
            continue;
        }
        match meet(&w[0], &w[1]).and_then(|p| p.require_finite()) {
            Ok(p) => points.push(p),
            Err(_) => dropped += 1,
        }
    }
    if points.is_empty() {
        return Err(GeomError::AllParallel);
    }
    Ok(Envelope { points, dropped })
}

/// Consecutive-line intersections with the leading error term removed.
///
/// For lines sampled on a uniform parameter grid, the meet of lines `i, i+1`
/// and the meet of `i-1, i+2` share the center parameter and carry errors
/// in the ratio 1 : 9, so `(9 P1 - P3) / 8` is fourth-order. The first and
/// last pair of the run have no wide partner and are dropped.
pub fn envelope_points_extrapolated(lines: &[HLine]) -> Result<Envelope> {
    if lines.len() < 8 {
        return Err(GeomError::TooFewSamples {
            needed: 8,
            got: lines.len(),
        });
    }
    let pair = |a: &HLine, b: &HLine| -> Option<Vector2<f64>> {
        if a.normal().perp(&b.normal()).abs() < 1e-12 {
            return None;
        }
        meet(a, b).and_then(|p| p.require_finite()).ok()
    };
    let n = lines.len();
    let mut points = Vec::with_capacity(n);
    let mut dropped = 0;
    for i in 0..n - 1 {
        let wide = if i >= 1 && i + 2 < n {
            pair(&lines[i - 1], &lines[i + 2])
        } else {
            None
        };
        match (pair(&lines[i], &lines[i + 1]), wide) {
            (Some(p1), Some(p3)) => points.push((9.0 * p1 - p3) / 8.0),
            _ => dropped += 1,
        }
    }
    if points.is_empty() {
        return Err(GeomError::AllParallel);
    }
    Ok(Envelope { points, dropped })
}

/// Boolean verdict with the residual it was judged on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Predicate {
    pub holds: bool,
    pub residual: f64,
    pub threshold: f64,
}

impl Predicate {
    pub fn new(residual: f64, threshold: f64) -> Self {
        Predicate {
            holds: residual < threshold,
            residual,
            threshold,
        }
    }
}

/// `|sin|` of the angle between the lines.
pub fn parallel(a: &HLine, b: &HLine, tol: f64) -> Predicate {
    Predicate::new(a.direction().perp(&b.direction()).abs(), tol)
}

/// Area of the triangle over its squared longest side.
pub fn collinear(p: Vector2<f64>, q: Vector2<f64>, r: Vector2<f64>, tol: f64) -> Predicate {
    let scale = (p - q).norm().max((q - r).norm()).max((r - p).norm());
    let res = if scale == 0.0 {
        0.0
    } else {
        0.5 * cross3(p, q, r).abs() / (scale * scale)
    };
    Predicate::new(res, tol)
}

/// Largest pairwise distance.
pub fn stationary(points: &[Vector2<f64>], tol: f64) -> Predicate {
    let mut d: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max((p - q).norm());
        }
    }
    Predicate::new(d, tol)
}

pub fn point_on_conic(p: Vector2<f64>, c: &Conic, tol: f64) -> Predicate {
    Predicate::new(c.sampson_distance(&HPoint::from_xy(p)), tol)
}

pub fn line_tangent_to_conic(l: &HLine, c: &Conic, tol: f64) -> Predicate {
    Predicate::new(c.tangency_residual(l), tol)
}

/// Both conics pass through `p` and share the tangent there.
pub fn conics_tangent_at(a: &Conic, b: &Conic, p: Vector2<f64>, tol: f64) -> Predicate {
    let hp = HPoint::from_xy(p);
    let (Ok(ta), Ok(tb)) = (a.polar(&hp), b.polar(&hp)) else {
        return Predicate::new(f64::INFINITY, tol);
    };
    let res = a
        .sampson_distance(&hp)
        .max(b.sampson_distance(&hp))
        .max(ta.direction().perp(&tb.direction()).abs());
    Predicate::new(res, tol)
}

pub fn concentric(a: &Conic, b: &Conic, tol: f64) -> Predicate {
    match (
        a.center().and_then(|c| c.require_finite()),
        b.center().and_then(|c| c.require_finite()),
    ) {
        (Ok(p), Ok(q)) => Predicate::new((p - q).norm(), tol),
        _ => Predicate::new(f64::INFINITY, tol),
    }
}

/// Angular offset of the principal axes, modulo a quarter turn.
pub fn axis_aligned(a: &Conic, b: &Conic, tol: f64) -> Predicate {
    match (a.ellipse_geometry(), b.ellipse_geometry()) {
        (Ok(g), Ok(h)) => {
            let d = wrap_half_turn(2.0 * (g.angle - h.angle)).abs() / 2.0;
            Predicate::new(d, tol)
        }
        _ => Predicate::new(f64::INFINITY, tol),
    }
}

/// Result of trying point, line, circle and conic in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ladder {
    pub accepted: FitReport,
    pub candidates: Vec<FitReport>,
}

/// First model whose rms is under `threshold`; all tried fits are returned.
pub fn fit_ladder(points: &[Vector2<f64>], threshold: f64) -> Result<Ladder> {
    let mut candidates = Vec::new();
    let tries: [fn(&[Vector2<f64>]) -> Result<FitReport>; 4] = [fit_point, fit_line, fit_circle, fit_conic];
    for f in tries {
        let r = match f(points) {
            Ok(r) => r,
            Err(GeomError::TooFewSamples { .. }) => continue,
            Err(e) => return Err(e),
        };
        let ok = r.passes(threshold);
        candidates.push(r.clone());
        if ok {
            return Ok(Ladder {
                accepted: r,
                candidates,
            });
        }
    }
    Ok(Ladder {
        accepted: FitReport::none(points.len()),
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conics::{conic_from_center_axes, parabola_from_focus_directrix};
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn v(x: f64, y: f64) -> Vector2<f64> {
        Vector2::new(x, y)
    }

    fn circle_pts(c: Vector2<f64>, r: f64, n: usize) -> Vec<Vector2<f64>> {
        (0..n)
            .map(|k| {
                let t = k as f64 * TAU / n as f64;
                c + r * v(t.cos(), t.sin())
            })
            .collect()
    }

    fn ellipse_pts(c: Vector2<f64>, a: f64, b: f64, ang: f64, n: usize) -> Vec<Vector2<f64>> {
        let (ca, sa) = (ang.cos(), ang.sin());
        (0..n)
            .map(|k| {
                let t = 0.1 + k as f64 * TAU / n as f64;
                let (x, y) = (a * t.cos(), b * t.sin());
                c + v(ca * x - sa * y, sa * x + ca * y)
            })
            .collect()
    }

    #[test]
    fn line_examples() {
        let r = fit_line(&[v(0.0, 0.0), v(1.0, 1.0), v(2.0, 2.0)]).unwrap();
        let l = r.line().unwrap();
        assert!(l.approx_eq(&HLine::new(1.0, -1.0, 0.0).unwrap(), 1e-15));
        assert!(r.rms_residual < 1e-15);
        let r = fit_line(&[v(0.0, 0.0), v(1.0, 0.0), v(0.5, 1e-12)]).unwrap();
        assert!(r.line().unwrap().approx_eq(&HLine::new(0.0, 1.0, 0.0).unwrap(), 1e-11));
        let r = fit_line(&circle_pts(v(0.0, 0.0), 1.0, 90)).unwrap();
        assert!(!r.passes(1e-7));
        assert!(fit_line(&[v(0.0, 0.0), v(1.0, 0.0)]).is_err());
    }

    #[test]
    fn circle_examples() {
        let r = fit_circle(&circle_pts(v(0.0, 0.0), 1.0, 360)).unwrap();
        let (c, rad) = r.circle().unwrap();
        assert!(c.norm() < 1e-12 && (rad - 1.0).abs() < 1e-12 && r.rms_residual < 1e-12);
        let r = fit_circle(&ellipse_pts(v(0.0, 0.0), 0.6, 0.4, 0.0, 200)).unwrap();
        assert!(r.rms_residual > 1e-3 && !r.passes(1e-7));
        let line: Vec<_> = (0..10).map(|k| v(k as f64, 2.0 * k as f64)).collect();
        assert_eq!(fit_circle(&line).unwrap().model, Model::None);
    }

    #[test]
    fn conic_examples() {
        let pts: Vec<_> = (0..40).map(|k| -2.0 + k as f64 * 0.1).map(|x| v(x, x * x)).collect();
        let r = fit_conic(&pts).unwrap();
        assert_eq!(r.model, Model::Parabola);
        let FitParams::Conic(p) = &r.params else { panic!() };
        let f = p.focus.unwrap();
        assert!((f[0]).abs() < 1e-9 && (f[1] - 0.25).abs() < 1e-9);

        let r = fit_conic(&ellipse_pts(v(0.1, 0.2), 0.6, 0.4, 0.0, 50)).unwrap();
        assert_eq!(r.model, Model::Ellipse);
        let FitParams::Conic(p) = &r.params else { panic!() };
        let (c, ax) = (p.center.unwrap(), p.semi_axes.unwrap());
        assert!((c[0] - 0.1).abs() < 1e-8 && (c[1] - 0.2).abs() < 1e-8);
        assert!((ax[0] - 0.6).abs() < 1e-8 && (ax[1] - 0.4).abs() < 1e-8);

        let line: Vec<_> = (0..10).map(|k| v(k as f64, 1.0 - k as f64)).collect();
        assert_eq!(fit_conic(&line).unwrap().model, Model::None);
    }

    #[test]
    fn circle_and_conic_fits_agree_on_circles() {
        let pts = circle_pts(v(0.3, -0.7), 1.7, 100);
        let c = fit_circle(&pts).unwrap();
        let e = fit_conic(&pts).unwrap();
        assert_eq!(e.model, Model::Ellipse);
        let g = e.conic().unwrap().ellipse_geometry().unwrap();
        assert!((g.axis_ratio() - 1.0).abs() < 1e-7);
        assert!((g.center - c.circle().unwrap().0).norm() < 1e-9);
    }

    #[test]
    fn parabola_fit_recovers_exact_and_perturbed() {
        let f = HPoint::finite(0.4, -0.2);
        let d = HLine::new(1.0, 2.0, 3.0).unwrap();
        let target = parabola_from_focus_directrix(&f, &d).unwrap();
        let e = target.parabola_elements().unwrap();
        let axis = e.axis.direction();
        let perp = v(-axis.y, axis.x);
        let p = e.focal_length();
        let pts: Vec<_> = (0..60)
            .map(|k| -3.0 + k as f64 * 0.1)
            .map(|s| e.vertex.xy() + perp * s + axis * (s * s / (4.0 * p)))
            .collect();
        let r = fit_parabola(&pts).unwrap();
        assert!(r.rms_residual < 1e-10, "{}", r.rms_residual);
        let FitParams::Conic(cp) = &r.params else { panic!() };
        let got = cp.focus.unwrap();
        assert!((v(got[0], got[1]) - f.xy()).norm() < 1e-8);
        // a wobble of 1e-6 moves the fit by a comparable amount
        let noisy: Vec<_> = pts
            .iter()
            .enumerate()
            .map(|(i, q)| q + perp * (1e-6 * (i as f64 * 1.3).sin()))
            .collect();
        let r = fit_parabola(&noisy).unwrap();
        assert!(r.rms_residual < 2e-6);
        let FitParams::Conic(cp) = &r.params else { panic!() };
        let got = cp.focus.unwrap();
        assert!((v(got[0], got[1]) - f.xy()).norm() < 1e-4);
    }

    #[test]
    fn common_point_examples() {
        let lines = [
            HLine::new(1.0, 0.0, 0.0).unwrap(),
            HLine::new(0.0, 1.0, 0.0).unwrap(),
            HLine::new(1.0, 1.0, 0.0).unwrap(),
        ];
        let r = common_point(&lines).unwrap();
        assert!(r.point().unwrap().norm() < 1e-15 && r.max_residual < 1e-15);
        let par = [
            HLine::new(0.0, 1.0, 0.0).unwrap(),
            HLine::new(0.0, 1.0, -1.0).unwrap(),
            HLine::new(0.0, 1.0, -2.0).unwrap(),
        ];
        assert_eq!(common_point(&par).unwrap().model, Model::None);
        let mixed = [
            HLine::new(0.0, 1.0, 0.0).unwrap(),
            HLine::new(0.0, 1.0, -1.0).unwrap(),
            HLine::new(1.0, 0.0, 0.0).unwrap(),
        ];
        assert!(common_point(&mixed).unwrap().max_residual >= 0.5 - 1e-12);
    }

    #[test]
    fn envelope_of_circle_tangents() {
        let lines: Vec<_> = (0..360)
            .map(|k| k as f64 * TAU / 360.0)
            .map(|t| HLine::new(t.cos(), t.sin(), -1.0).unwrap())
            .collect();
        let env = envelope_points(&lines).unwrap();
        assert_eq!(env.dropped, 0);
        for p in &env.points {
            assert!((p.norm() - 1.0).abs() < 1e-4);
        }
        assert!(envelope_points(&lines[..5]).is_err());
        let flat = vec![HLine::new(0.0, 1.0, 0.0).unwrap(); 10];
        assert_eq!(envelope_points(&flat).unwrap_err(), GeomError::AllParallel);
    }

    #[test]
    fn envelope_of_parabola_tangents_refits() {
        // tangent to y = x² at (s, s²): 2s x − y − s² = 0
        let lines: Vec<_> = (0..720)
            .map(|k| -2.0 + 4.0 * k as f64 / 719.0)
            .map(|s| HLine::new(2.0 * s, -1.0, -s * s).unwrap())
            .collect();
        let env = envelope_points(&lines).unwrap();
        let r = fit_parabola(&env.points).unwrap();
        let FitParams::Conic(cp) = &r.params else { panic!() };
        let f = cp.focus.unwrap();
        assert!((v(f[0], f[1]) - v(0.0, 0.25)).norm() < 1e-4);
        let c = fit_conic(&env.points).unwrap().conic().unwrap();
        let truth = Conic::from_coeffs([1.0, 0.0, 0.0, 0.0, -1.0, 0.0]).unwrap();
        assert!(c.distance(&truth) < 1e-3);
    }

    #[test]
    fn extrapolated_envelope_is_higher_order() {
        let lines: Vec<_> = (0..360)
            .map(|k| k as f64 * TAU / 360.0)
            .map(|t| HLine::new(t.cos() / 0.6, t.sin() / 0.4, -1.0).unwrap())
            .collect();
        let truth = Conic::from_coeffs([1.0 / 0.36, 0.0, 1.0 / 0.16, 0.0, 0.0, -1.0]).unwrap();
        let worst = |pts: &[Vector2<f64>]| {
            pts.iter()
                .map(|p| truth.sampson_distance(&HPoint::from_xy(*p)).abs())
                .fold(0.0, f64::max)
        };
        let plain = worst(&envelope_points(&lines).unwrap().points);
        let fine = worst(&envelope_points_extrapolated(&lines).unwrap().points);
        assert!(fine < 1e-8 && fine < plain * 1e-3, "{plain:e} {fine:e}");
    }

    #[test]
    fn ellipse_tangent_envelope_refits() {
        let (a, b) = (0.6, 0.4);
        let lines: Vec<_> = (0..720)
            .map(|k| k as f64 * TAU / 720.0)
            .map(|t| HLine::new(t.cos() / a, t.sin() / b, -1.0).unwrap())
            .collect();
        let env = envelope_points(&lines).unwrap();
        let g = fit_conic(&env.points)
            .unwrap()
            .conic()
            .unwrap()
            .ellipse_geometry()
            .unwrap();
        assert!((g.semi_major - a).abs() < 1e-3 && (g.semi_minor - b).abs() < 1e-3);
        assert!(g.center.norm() < 1e-3);
    }

    #[test]
    fn predicate_examples() {
        let p = parallel(
            &HLine::new(0.0, 1.0, 0.0).unwrap(),
            &HLine::new(0.0, 1.0, -5.0).unwrap(),
            PARALLEL_TOL,
        );
        assert!(p.holds && p.residual == 0.0);
        assert!(collinear(v(0.0, 0.0), v(1.0, 1.0), v(2.0, 2.0), COLLINEAR_TOL).holds);
        assert!(!collinear(v(0.0, 0.0), v(1.0, 1.0), v(2.0, 2.1), COLLINEAR_TOL).holds);
        assert!(stationary(&[v(1.0, 1.0); 5], STATIONARY_TOL).holds);
        let c1 = Conic::circle(v(0.0, 0.0), 1.0).unwrap();
        let c2 = Conic::circle(v(0.5, 0.0), 0.5).unwrap();
        assert!(conics_tangent_at(&c1, &c2, v(1.0, 0.0), 1e-12).holds);
        assert!(!conics_tangent_at(&c1, &c2, v(0.0, 1.0), 1e-12).holds);
        let e1 = conic_from_center_axes(v(0.0, 0.0), (2.0, 1.0), 0.0).unwrap();
        let e2 = conic_from_center_axes(v(0.0, 0.0), (1.0, 3.0), 0.0).unwrap();
        let e3 = conic_from_center_axes(v(1.0, 0.0), (1.0, 3.0), 0.3).unwrap();
        assert!(axis_aligned(&e1, &e2, 1e-12).holds && concentric(&e1, &e2, 1e-12).holds);
        assert!(!axis_aligned(&e1, &e3, 1e-3).holds && !concentric(&e1, &e3, 1e-3).holds);
        assert!(point_on_conic(v(0.0, 1.0), &e1, ON_CONIC_TOL).holds);
        assert!(line_tangent_to_conic(&HLine::new(0.0, 1.0, -1.0).unwrap(), &e1, 1e-12).holds);
    }

    #[test]
    fn ladder_picks_simplest_model() {
        let l = fit_ladder(&[v(1.0, 2.0); 10], 1e-7).unwrap();
        assert_eq!(l.accepted.model, Model::Point);
        let pts: Vec<_> = (0..10).map(|k| v(k as f64, 0.5 * k as f64)).collect();
        assert_eq!(fit_ladder(&pts, 1e-7).unwrap().accepted.model, Model::Line);
        let l = fit_ladder(&circle_pts(v(1.0, 1.0), 2.0, 50), 1e-7).unwrap();
        assert_eq!(l.accepted.model, Model::Circle);
        assert_eq!(l.candidates.len(), 3);
        let l = fit_ladder(&ellipse_pts(v(0.0, 0.0), 0.6, 0.4, 0.4, 50), 1e-7).unwrap();
        assert_eq!(l.accepted.model, Model::Ellipse);
        let wiggle: Vec<_> = (0..50).map(|k| k as f64 * 0.1).map(|t| v(t, (3.0 * t).sin())).collect();
        assert_eq!(fit_ladder(&wiggle, 1e-7).unwrap().accepted.model, Model::None);
    }

    fn rms_direct(r: &[f64]) -> f64 {
        (r.iter().map(|x| x * x).sum::<f64>() / r.len() as f64).sqrt()
    }

    proptest! {
        #[test]
        fn reported_rms_matches_residuals(
            cx in -2.0..2.0f64, cy in -2.0..2.0f64, a in 0.5..3.0f64, ratio in 0.2..0.95f64,
            ang in -PI..PI, noise in 0.0..1e-3f64,
        ) {
            let pts: Vec<_> = ellipse_pts(v(cx, cy), a, a * ratio, ang, 40)
                .into_iter()
                .enumerate()
                .map(|(i, p)| p + v(noise * (i as f64).sin(), noise * (i as f64 * 0.7).cos()))
                .collect();
            for r in [fit_line(&pts).unwrap(), fit_circle(&pts).unwrap(), fit_conic(&pts).unwrap()] {
                if r.model == Model::None { continue; }
                let res: Vec<f64> = match &r.params {
                    FitParams::Line { l, m, n } => pts.iter().map(|p| (l * p.x + m * p.y + n).abs()).collect(),
                    FitParams::Circle { cx, cy, r } => pts.iter().map(|p| ((p.x - cx).hypot(p.y - cy) - r).abs()).collect(),
                    FitParams::Conic(c) => {
                        let q = Conic::from_coeffs(c.coeffs).unwrap();
                        pts.iter().map(|p| q.sampson_distance(&HPoint::from_xy(*p))).collect()
                    }
                    _ => unreachable!(),
                };
                prop_assert!((rms_direct(&res) - r.rms_residual).abs() <= 1e-14 * (1.0 + r.rms_residual));
                prop_assert!(r.max_residual >= r.rms_residual);
            }
        }

        #[test]
        fn conic_fit_round_trips_ellipses(
            cx in -2.0..2.0f64, cy in -2.0..2.0f64, a in 0.5..3.0f64, ratio in 0.2..0.95f64, ang in -1.5..1.5f64,
        ) {
            let r = fit_conic(&ellipse_pts(v(cx, cy), a, a * ratio, ang, 30)).unwrap();
            prop_assert_eq!(r.model, Model::Ellipse);
            let g = r.conic().unwrap().ellipse_geometry().unwrap();
            prop_assert!((g.center - v(cx, cy)).norm() < 1e-8);
            prop_assert!((g.semi_major - a).abs() < 1e-8 && (g.semi_minor - a * ratio).abs() < 1e-8);
        }
    }
}
