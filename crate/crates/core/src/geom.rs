//! Homogeneous points and lines of the real projective plane.
//!
//! Finite points are stored with `w = 1`, ideal points with a unit `(x, y)`
//! part. Lines are stored with `l² + m² = 1`, except the line at infinity
//! which is always `(0, 0, 1)`. Signs of ideal points and lines are fixed so
//! that the first non-negligible component is positive.

use nalgebra::{Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Absolute tolerance used for comparisons at unit scale.
pub const EPS: f64 = 1e-9;

/// Relative size below which a homogeneous component counts as zero.
const ZERO_REL: f64 = 1e-12;

fn canonical_sign(v: Vector3<f64>) -> Vector3<f64> {
    for c in v.iter() {
        if c.abs() > ZERO_REL {
            return if *c < 0.0 { -v } else { v };
        }
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint(Vector3<f64>);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HLine(Vector3<f64>);

impl HPoint {
    /// Normalizes an arbitrary homogeneous triple.
    pub fn from_homogeneous(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(GeomError::ZeroVector);
        }
        let u = v / norm;
        if u.z.abs() < ZERO_REL {
            let xy = Vector2::new(u.x, u.y).normalize();
            Ok(Self(canonical_sign(Vector3::new(xy.x, xy.y, 0.0))))
        } else {
            Ok(Self(Vector3::new(v.x / v.z, v.y / v.z, 1.0)))
        }
    }

    pub fn new(x: f64, y: f64, w: f64) -> Result<Self> {
        Self::from_homogeneous(Vector3::new(x, y, w))
    }

    pub fn finite(x: f64, y: f64) -> Self {
        Self(Vector3::new(x, y, 1.0))
    }

    pub fn from_xy(p: Vector2<f64>) -> Self {
        Self::finite(p.x, p.y)
    }

    /// The point at infinity in direction `(dx, dy)`.
    pub fn ideal(dx: f64, dy: f64) -> Result<Self> {
        Self::from_homogeneous(Vector3::new(dx, dy, 0.0))
    }

    pub fn coords(&self) -> Vector3<f64> {
        self.0
    }

    /// Unit-norm homogeneous representative.
    pub fn unit(&self) -> Vector3<f64> {
        self.0.normalize()
    }

    pub fn is_finite(&self) -> bool {
        self.0.z != 0.0
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }

    pub fn y(&self) -> f64 {
        self.0.y
    }

    /// Cartesian coordinates; for an ideal point this is its direction.
    pub fn xy(&self) -> Vector2<f64> {
        Vector2::new(self.0.x, self.0.y)
    }

    pub fn require_finite(&self) -> Result<Vector2<f64>> {
        if self.is_finite() {
            Ok(self.xy())
        } else {
            Err(GeomError::IdealPoint)
        }
    }

    pub fn dist(&self, other: &HPoint) -> f64 {
        (self.xy() - other.xy()).norm()
    }

    /// Distance between finite points, or between directions (up to sign) for ideal ones.
    pub fn approx_eq(&self, other: &HPoint, tol: f64) -> bool {
        if self.is_finite() != other.is_finite() {
            return false;
        }
        if self.is_finite() {
            self.dist(other) <= tol
        } else {
            (self.0 - other.0).norm().min((self.0 + other.0).norm()) <= tol
        }
    }

    pub fn midpoint(&self, other: &HPoint) -> HPoint {
        HPoint::from_xy((self.xy() + other.xy()) * 0.5)
    }

    /// `self + s·(other − self)` for finite points.
    pub fn lerp(&self, other: &HPoint, s: f64) -> HPoint {
        HPoint::from_xy(self.xy() + (other.xy() - self.xy()) * s)
    }
}

impl HLine {
    pub fn from_homogeneous(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(GeomError::ZeroVector);
        }
        let u = v / norm;
        let lm = u.x.hypot(u.y);
        if lm < ZERO_REL {
            Ok(Self(Vector3::new(0.0, 0.0, 1.0)))
        } else {
            Ok(Self(canonical_sign(u / lm)))
        }
    }

    pub fn new(l: f64, m: f64, n: f64) -> Result<Self> {
        Self::from_homogeneous(Vector3::new(l, m, n))
    }

    pub fn at_infinity() -> Self {
        Self(Vector3::new(0.0, 0.0, 1.0))
    }

    /// The line through `p` with direction `dir`.
    pub fn through(p: Vector2<f64>, dir: Vector2<f64>) -> Result<Self> {
        let normal = Vector2::new(-dir.y, dir.x);
        Self::new(normal.x, normal.y, -normal.dot(&p))
    }

    pub fn coords(&self) -> Vector3<f64> {
        self.0
    }

    pub fn is_at_infinity(&self) -> bool {
        self.0.x == 0.0 && self.0.y == 0.0
    }

    /// Unit normal `(l, m)`.
    pub fn normal(&self) -> Vector2<f64> {
        Vector2::new(self.0.x, self.0.y)
    }

    /// Unit direction `(−m, l)`.
    pub fn direction(&self) -> Vector2<f64> {
        Vector2::new(-self.0.y, self.0.x)
    }

    /// Signed distance of a finite point.
    pub fn signed_dist(&self, p: Vector2<f64>) -> f64 {
        self.0.x * p.x + self.0.y * p.y + self.0.z
    }

    pub fn dist(&self, p: &HPoint) -> f64 {
        self.signed_dist(p.xy()).abs()
    }

    /// Incidence residual `|l·x + m·y + n·w|` on the stored representatives.
    pub fn incidence(&self, p: &HPoint) -> f64 {
        self.0.dot(&p.coords()).abs()
    }

    pub fn approx_eq(&self, other: &HLine, tol: f64) -> bool {
        (self.0 - other.0).norm().min((self.0 + other.0).norm()) <= tol
    }

    /// Closest point of the line to the origin.
    pub fn anchor(&self) -> Vector2<f64> {
        -self.normal() * self.0.z
    }
}

/// Line through two points.
pub fn join(a: &HPoint, b: &HPoint) -> Result<HLine> {
    let c = a.unit().cross(&b.unit());
    if c.norm() < ZERO_REL {
        return Err(GeomError::DegenerateJoinMeet);
    }
    HLine::from_homogeneous(c)
}

/// Intersection point of two lines.
pub fn meet(a: &HLine, b: &HLine) -> Result<HPoint> {
    let c = a.coords().normalize().cross(&b.coords().normalize());
    if c.norm() < ZERO_REL {
        return Err(GeomError::DegenerateJoinMeet);
    }
    HPoint::from_homogeneous(c)
}

#[derive(Debug, Clone, Copy)]
pub enum Mirror {
    Point(HPoint),
    Line(HLine),
}

impl From<HPoint> for Mirror {
    fn from(p: HPoint) -> Self {
        Mirror::Point(p)
    }
}

impl From<HLine> for Mirror {
    fn from(l: HLine) -> Self {
        Mirror::Line(l)
    }
}

/// Point reflection `2·m − p` or Euclidean mirror image in a line.
pub fn reflect(p: &HPoint, mirror: impl Into<Mirror>) -> Result<HPoint> {
    let xy = p.require_finite()?;
    match mirror.into() {
        Mirror::Point(m) => Ok(HPoint::from_xy(m.require_finite()? * 2.0 - xy)),
        Mirror::Line(l) => {
            if l.is_at_infinity() {
                return Err(GeomError::LineAtInfinity);
            }
            Ok(HPoint::from_xy(xy - l.normal() * (2.0 * l.signed_dist(xy))))
        }
    }
}

pub fn foot_of_perpendicular(p: &HPoint, line: &HLine) -> Result<HPoint> {
    let xy = p.require_finite()?;
    if line.is_at_infinity() {
        return Err(GeomError::LineAtInfinity);
    }
    Ok(HPoint::from_xy(xy - line.normal() * line.signed_dist(xy)))
}

/// Least-squares common point of a pencil of finite lines.
#[derive(Debug, Clone, Copy)]
pub struct Concurrency {
    pub point: HPoint,
    /// Largest distance from the point to any of the lines.
    pub max_residual: f64,
    pub rms_residual: f64,
    /// Condition number of the 2×2 normal matrix.
    pub condition: f64,
}

pub fn concurrency_point(lines: &[HLine]) -> Result<Concurrency> {
    if lines.len() < 2 {
        return Err(GeomError::TooFewSamples {
            needed: 2,
            got: lines.len(),
        });
    }
    let (mut sll, mut slm, mut smm, mut sln, mut smn) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for line in lines {
        if line.is_at_infinity() {
            return Err(GeomError::LineAtInfinity);
        }
        let v = line.coords();
        sll += v.x * v.x;
        slm += v.x * v.y;
        smm += v.y * v.y;
        sln += v.x * v.z;
        smn += v.y * v.z;
    }
    // eigenvalues of the symmetric normal matrix
    let tr = sll + smm;
    let disc = ((sll - smm).powi(2) + 4.0 * slm * slm).sqrt();
    let (hi, lo) = (0.5 * (tr + disc), 0.5 * (tr - disc));
    let condition = if lo <= 0.0 { f64::INFINITY } else { hi / lo };
    let det = sll * smm - slm * slm;
    if det.abs() < f64::MIN_POSITIVE || !condition.is_finite() {
        return Err(GeomError::DegenerateJoinMeet);
    }
    let x = (-sln * smm + smn * slm) / det;
    let y = (-smn * sll + sln * slm) / det;
    let p = Vector2::new(x, y);
    let residuals: Vec<f64> = lines.iter().map(|l| l.signed_dist(p).abs()).collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    let rms_residual = (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt();
    Ok(Concurrency {
        point: HPoint::from_xy(p),
        max_residual,
        rms_residual,
        condition,
    })
}

/// Total-least-squares line through planar points.
#[derive(Debug, Clone, Copy)]
pub struct LineFit {
    pub line: HLine,
    pub max_residual: f64,
    pub rms_residual: f64,
}

/// Line minimizing the summed squared perpendicular distances: it passes
/// through the centroid along the direction of largest scatter.
pub fn tls_line(points: &[Vector2<f64>]) -> Result<LineFit> {
    if points.len() < 2 {
        return Err(GeomError::TooFewSamples {
            needed: 2,
            got: points.len(),
        });
    }
    let n = points.len() as f64;
    let mean = points.iter().fold(Vector2::zeros(), |acc, p| acc + p) / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let d = p - mean;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    if sxx + syy == 0.0 {
        return Err(GeomError::DegenerateJoinMeet);
    }
    // direction of the largest eigenvalue of the scatter matrix
    let theta = 0.5 * f64::atan2(2.0 * sxy, sxx - syy);
    let dir = Vector2::new(theta.cos(), theta.sin());
    let line = HLine::through(mean, dir)?;
    let residuals: Vec<f64> = points.iter().map(|p| line.signed_dist(*p).abs()).collect();
    Ok(LineFit {
        line,
        max_residual: residuals.iter().cloned().fold(0.0, f64::max),
        rms_residual: (residuals.iter().map(|r| r * r).sum::<f64>() / n).sqrt(),
    })
}

/// Twice the signed area of the triangle `p q r`.
pub fn cross3(p: Vector2<f64>, q: Vector2<f64>, r: Vector2<f64>) -> f64 {
    (q - p).perp(&(r - p))
}
