//! Conic sections as symmetric 3×3 matrices.
//!
//! A point `p` lies on the conic when `pᵀ·M·p = 0`. Matrices are stored with
//! unit Frobenius norm and the first non-negligible coefficient (in the order
//! `x², xy, y², x, y, 1`) positive, so two conics describing the same curve
//! compare equal entry by entry.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::geom::{join, HLine, HPoint, EPS};

/// Threshold on the upper-left 2×2 determinant separating parabolas from central conics.
pub const PARABOLA_TOL: f64 = 1e-9;
/// Threshold on `|det M|` below which a conic counts as degenerate.
pub const DEGENERATE_TOL: f64 = 1e-12;
/// Relative size of the line/conic discriminant treated as a double root.
const DOUBLE_ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConicKind {
    Ellipse,
    Parabola,
    Hyperbola,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conic {
    m: Matrix3<f64>,
    kind: ConicKind,
}

/// Focus, vertex, directrix and axis of a parabola.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParabolaElements {
    pub focus: HPoint,
    pub vertex: HPoint,
    pub directrix: HLine,
    pub axis: HLine,
}

impl ParabolaElements {
    /// Foot of the focus on the directrix (the reflection of the focus about the vertex).
    pub fn directrix_foot(&self) -> HPoint {
        HPoint::from_xy(self.vertex.xy() * 2.0 - self.focus.xy())
    }

    /// Signed focal distance `|FV|`.
    pub fn focal_length(&self) -> f64 {
        self.focus.dist(&self.vertex)
    }
}

/// Euclidean description of an ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseGeometry {
    pub center: Vector2<f64>,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Direction of the major axis, in `(−π/2, π/2]`.
    pub angle: f64,
}

impl EllipseGeometry {
    pub fn major_dir(&self) -> Vector2<f64> {
        Vector2::new(self.angle.cos(), self.angle.sin())
    }

    pub fn minor_dir(&self) -> Vector2<f64> {
        Vector2::new(-self.angle.sin(), self.angle.cos())
    }

    pub fn focal_half_distance(&self) -> f64 {
        (self.semi_major.powi(2) - self.semi_minor.powi(2)).max(0.0).sqrt()
    }

    pub fn foci(&self) -> (Vector2<f64>, Vector2<f64>) {
        let c = self.focal_half_distance() * self.major_dir();
        (self.center + c, self.center - c)
    }

    /// Principal-axes parametrization `center + a·cos t·e₁ + b·sin t·e₂`.
    pub fn point_at(&self, t: f64) -> Vector2<f64> {
        self.center + self.major_dir() * (self.semi_major * t.cos()) + self.minor_dir() * (self.semi_minor * t.sin())
    }

    /// Derivative of [`point_at`](Self::point_at) with respect to `t`.
    pub fn tangent_at(&self, t: f64) -> Vector2<f64> {
        self.major_dir() * (-self.semi_major * t.sin()) + self.minor_dir() * (self.semi_minor * t.cos())
    }

    /// Ratio minor/major, 1 for a circle.
    pub fn axis_ratio(&self) -> f64 {
        self.semi_minor / self.semi_major
    }
}

/// Real intersections of a conic with a line.
#[derive(Debug, Clone, PartialEq)]
pub struct LineIntersection {
    pub points: Vec<HPoint>,
    /// `b² − a·c` of the restricted quadratic; zero for a tangent line.
    pub discriminant: f64,
}

/// A tangent line together with its point of contact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangent {
    pub line: HLine,
    pub touch: HPoint,
}

fn sign_key(m: &Matrix3<f64>) -> [f64; 6] {
    [m[(0, 0)], m[(0, 1)], m[(1, 1)], m[(0, 2)], m[(1, 2)], m[(2, 2)]]
}

/// Classify a conic matrix (any scale) by its determinants.
pub fn classify_conic(m: &Matrix3<f64>) -> ConicKind {
    let n = m.norm();
    if n == 0.0 || !n.is_finite() {
        return ConicKind::Degenerate;
    }
    let m = m / n;
    if m.determinant().abs() < DEGENERATE_TOL {
        return ConicKind::Degenerate;
    }
    let delta = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    if delta > PARABOLA_TOL {
        ConicKind::Ellipse
    } else if delta < -PARABOLA_TOL {
        ConicKind::Hyperbola
    } else {
        ConicKind::Parabola
    }
}

impl Conic {
    pub fn from_matrix(m: Matrix3<f64>) -> Result<Self> {
        let sym = (m + m.transpose()) * 0.5;
        let n = sym.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(GeomError::ZeroVector);
        }
        let mut sym = sym / n;
        if let Some(first) = sign_key(&sym).iter().find(|c| c.abs() > 1e-12) {
            if *first < 0.0 {
                sym = -sym;
            }
        }
        Ok(Self {
            kind: classify_conic(&sym),
            m: sym,
        })
    }

    /// `A·x² + B·xy + C·y² + D·x + E·y + F = 0`.
    pub fn from_coeffs(coeffs: [f64; 6]) -> Result<Self> {
        let [a, b, c, d, e, f] = coeffs;
        Self::from_matrix(Matrix3::new(
            a,
            b / 2.0,
            d / 2.0,
            b / 2.0,
            c,
            e / 2.0,
            d / 2.0,
            e / 2.0,
            f,
        ))
    }

    pub fn circle(center: Vector2<f64>, radius: f64) -> Result<Self> {
        conic_from_center_axes(center, (radius, radius), 0.0)
    }

    pub fn from_ellipse(g: &EllipseGeometry) -> Result<Self> {
        conic_from_center_axes(g.center, (g.semi_major, g.semi_minor), g.angle)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn kind(&self) -> ConicKind {
        self.kind
    }

    /// Coefficients `[A, B, C, D, E, F]` of the normalized matrix.
    pub fn coeffs(&self) -> [f64; 6] {
        let m = &self.m;
        [
            m[(0, 0)],
            2.0 * m[(0, 1)],
            m[(1, 1)],
            2.0 * m[(0, 2)],
            2.0 * m[(1, 2)],
            m[(2, 2)],
        ]
    }

    pub fn is_degenerate(&self) -> bool {
        self.kind == ConicKind::Degenerate
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(GeomError::DegenerateConic)
        } else {
            Ok(())
        }
    }

    /// `pᵀ·M·p` on the stored representative of `p`.
    pub fn algebraic(&self, p: &HPoint) -> f64 {
        let v = p.coords();
        v.dot(&(self.m * v))
    }

    /// First-order geometric distance `|f| / |∇f|` of a finite point.
    pub fn sampson_distance(&self, p: &HPoint) -> f64 {
        let v = p.coords();
        let mv = self.m * v;
        let f = v.dot(&mv);
        let g = 2.0 * Vector2::new(mv.x, mv.y).norm();
        if g == 0.0 {
            f.abs() / f64::MIN_POSITIVE
        } else {
            f.abs() / g
        }
    }

    /// Adjugate matrix, i.e. the dual (line) conic up to scale.
    pub fn adjugate(&self) -> Matrix3<f64> {
        let m = &self.m;
        let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)];
        Matrix3::new(
            c(1, 2, 1, 2),
            -c(0, 2, 1, 2),
            c(0, 1, 1, 2),
            -c(1, 2, 0, 2),
            c(0, 2, 0, 2),
            -c(0, 1, 0, 2),
            c(1, 2, 0, 1),
            -c(0, 2, 0, 1),
            c(0, 1, 0, 1),
        )
    }

    /// Normalized `|Lᵀ·adj(M)·L|`; zero exactly when `line` is tangent.
    pub fn tangency_residual(&self, line: &HLine) -> f64 {
        let adj = self.adjugate();
        let l = line.coords();
        l.dot(&(adj * l)).abs() / (adj.norm() * l.norm_squared())
    }

    pub fn polar(&self, p: &HPoint) -> Result<HLine> {
        self.require_nondegenerate()?;
        HLine::from_homogeneous(self.m * p.unit())
    }

    pub fn pole(&self, line: &HLine) -> Result<HPoint> {
        self.require_nondegenerate()?;
        HPoint::from_homogeneous(self.adjugate() * line.coords())
    }

    /// Pole of the line at infinity: the center, ideal for a parabola.
    pub fn center(&self) -> Result<HPoint> {
        self.pole(&HLine::at_infinity())
    }

    pub fn intersect_line(&self, line: &HLine) -> LineIntersection {
        let v = line.coords();
        let (l, m, n) = (v.x, v.y, v.z);
        if line.is_at_infinity() {
            // intersections with the line at infinity: asymptotic directions
            let q = Matrix2::new(self.m[(0, 0)], self.m[(0, 1)], self.m[(1, 0)], self.m[(1, 1)]);
            let disc = -q.determinant();
            let mut points = Vec::new();
            if disc >= -DOUBLE_ROOT_TOL {
                let (a, b, c) = (q[(0, 0)], q[(0, 1)], q[(1, 1)]);
                let root = disc.max(0.0).sqrt();
                let dirs = if a.abs() > c.abs() {
                    vec![Vector2::new(-b + root, a), Vector2::new(-b - root, a)]
                } else {
                    vec![Vector2::new(c, -b + root), Vector2::new(c, -b - root)]
                };
                let take = if disc.abs() <= DOUBLE_ROOT_TOL { 1 } else { 2 };
                for d in dirs.into_iter().take(take) {
                    if let Ok(p) = HPoint::ideal(d.x, d.y) {
                        points.push(p);
                    }
                }
            }
            return LineIntersection {
                points,
                discriminant: disc,
            };
        }
        let p0 = Vector3::new(-l * n, -m * n, 1.0);
        let d = Vector3::new(-m, l, 0.0);
        let a = d.dot(&(self.m * d));
        let b = p0.dot(&(self.m * d));
        let c = p0.dot(&(self.m * p0));
        let disc = b * b - a * c;
        let scale = (b * b).max((a * c).abs()).max(1e-300);
        let mut points = Vec::new();
        let at = |s: f64| HPoint::from_xy(Vector2::new(p0.x + s * d.x, p0.y + s * d.y));
        if a.abs() < DOUBLE_ROOT_TOL * (a.abs() + b.abs() + c.abs()) {
            // one root at infinity along the line
            if b.abs() > 0.0 {
                points.push(at(-c / (2.0 * b)));
            }
        } else if disc.abs() <= DOUBLE_ROOT_TOL * scale {
            points.push(at(-b / a));
        } else if disc > 0.0 {
            let root = disc.sqrt();
            // numerically stable pair of roots
            let q = -(b + b.signum() * root);
            let (s1, s2) = if q != 0.0 {
                (q / a, c / q)
            } else {
                (root / a, -root / a)
            };
            points.push(at(s1));
            points.push(at(s2));
        }
        LineIntersection {
            points,
            discriminant: disc,
        }
    }

    /// Tangent lines through `p` and their contact points.
    pub fn tangents_from_point(&self, p: &HPoint) -> Result<Vec<Tangent>> {
        self.require_nondegenerate()?;
        if p.is_finite() && self.sampson_distance(p) < EPS {
            return Ok(vec![Tangent {
                line: self.polar(p)?,
                touch: *p,
            }]);
        }
        let polar = self.polar(p)?;
        let hits = self.intersect_line(&polar);
        let mut out = Vec::with_capacity(2);
        for touch in hits.points {
            out.push(Tangent {
                line: join(p, &touch)?,
                touch,
            });
        }
        Ok(out)
    }

    pub fn parabola_elements(&self) -> Result<ParabolaElements> {
        match self.kind {
            ConicKind::Parabola => {}
            ConicKind::Degenerate => return Err(GeomError::DegenerateConic),
            _ => return Err(GeomError::NotAParabola),
        }
        let m = &self.m;
        let q = Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        // rank-one block: q ≈ λ·n·nᵀ, n is the column of largest norm
        let c0 = q.column(0).into_owned();
        let c1 = q.column(1).into_owned();
        let n = if c0.norm() >= c1.norm() {
            c0.normalize()
        } else {
            c1.normalize()
        };
        let lambda = n.dot(&(q * n));
        let u = Vector2::new(-n.y, n.x);
        let g = Vector2::new(2.0 * m[(0, 2)], 2.0 * m[(1, 2)]);
        let (dn, du, f) = (g.dot(&n), g.dot(&u), m[(2, 2)]);
        if du.abs() < DEGENERATE_TOL {
            return Err(GeomError::DegenerateConic);
        }
        // λ·s² + dn·s + du·r + f = 0  ⇒  r − r0 = k·(s − s0)²
        let s0 = -dn / (2.0 * lambda);
        let r0 = (dn * dn / (4.0 * lambda) - f) / du;
        let k = -lambda / du;
        let focal = 1.0 / (4.0 * k);
        let vertex = n * s0 + u * r0;
        let focus = vertex + u * focal;
        let directrix = HLine::new(u.x, u.y, -(r0 - focal))?;
        let axis = HLine::new(n.x, n.y, -s0)?;
        Ok(ParabolaElements {
            focus: HPoint::from_xy(focus),
            vertex: HPoint::from_xy(vertex),
            directrix,
            axis,
        })
    }

    /// Center, semi-axes and orientation of a real ellipse.
    pub fn ellipse_geometry(&self) -> Result<EllipseGeometry> {
        if self.kind != ConicKind::Ellipse {
            return Err(GeomError::NotAnEllipse);
        }
        let m = &self.m;
        let q = Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        let g = Vector2::new(m[(0, 2)], m[(1, 2)]);
        let center = -q.try_inverse().ok_or(GeomError::DegenerateConic)? * g;
        let k = g.dot(&center) + m[(2, 2)];
        if k == 0.0 {
            return Err(GeomError::DegenerateConic);
        }
        let s = -q / k;
        let (s00, s01, s11) = (s[(0, 0)], s[(0, 1)], s[(1, 1)]);
        let mean = 0.5 * (s00 + s11);
        let half = (0.25 * (s00 - s11).powi(2) + s01 * s01).sqrt();
        let (mu_small, mu_big) = (mean - half, mean + half);
        if mu_small <= 0.0 {
            // imaginary ellipse
            return Err(GeomError::NotAnEllipse);
        }
        let angle = if half <= 1e-14 * mean.abs() {
            0.0
        } else {
            let big_dir = 0.5 * f64::atan2(2.0 * s01, s00 - s11);
            wrap_half_turn(big_dir + std::f64::consts::FRAC_PI_2)
        };
        Ok(EllipseGeometry {
            center,
            semi_major: 1.0 / mu_small.sqrt(),
            semi_minor: 1.0 / mu_big.sqrt(),
            angle,
        })
    }

    /// Matrix distance up to sign between two normalized conics.
    pub fn distance(&self, other: &Conic) -> f64 {
        (self.m - other.m).norm().min((self.m + other.m).norm())
    }

    /// Conic image under an affine map `p ↦ A·p + b`.
    pub fn transformed(&self, a: &Matrix2<f64>, b: &Vector2<f64>) -> Result<Conic> {
        let inv = a.try_inverse().ok_or(GeomError::DegenerateConic)?;
        let ib = -(inv * b);
        let h = Matrix3::new(
            inv[(0, 0)],
            inv[(0, 1)],
            ib.x,
            inv[(1, 0)],
            inv[(1, 1)],
            ib.y,
            0.0,
            0.0,
            1.0,
        );
        Conic::from_matrix(h.transpose() * self.m * h)
    }
}

/// Wrap an axis angle into `(−π/2, π/2]`.
pub fn wrap_half_turn(a: f64) -> f64 {
    use std::f64::consts::PI;
    let mut a = a.rem_euclid(PI);
    if a > PI / 2.0 {
        a -= PI;
    }
    a
}

/// Ellipse (a circle when the semi-axes agree) from center, semi-axes and rotation.
pub fn conic_from_center_axes(center: Vector2<f64>, semiaxes: (f64, f64), angle: f64) -> Result<Conic> {
    let (alpha, beta) = semiaxes;
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(GeomError::InvalidParameter(format!(
            "semi-axes must be positive, got ({alpha}, {beta})"
        )));
    }
    let (s, c) = angle.sin_cos();
    // world → local frame
    let t = Matrix3::new(
        c,
        s,
        -(c * center.x + s * center.y),
        -s,
        c,
        s * center.x - c * center.y,
        0.0,
        0.0,
        1.0,
    );
    let m0 = Matrix3::from_diagonal(&Vector3::new(1.0 / (alpha * alpha), 1.0 / (beta * beta), -1.0));
    Conic::from_matrix(t.transpose() * m0 * t)
}

/// Locus of points equidistant from `focus` and `directrix`.
pub fn parabola_from_focus_directrix(focus: &HPoint, directrix: &HLine) -> Result<Conic> {
    let f = focus.require_finite()?;
    if directrix.is_at_infinity() {
        return Err(GeomError::LineAtInfinity);
    }
    if directrix.dist(focus) < EPS {
        return Err(GeomError::DegenerateConic);
    }
    let v = directrix.coords();
    let (l, m, n) = (v.x, v.y, v.z);
    Conic::from_matrix(Matrix3::new(
        1.0 - l * l,
        -l * m,
        -f.x - l * n,
        -l * m,
        1.0 - m * m,
        -f.y - m * n,
        -f.x - l * n,
        -f.y - m * n,
        f.norm_squared() - n * n,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn v(x: f64, y: f64) -> Vector2<f64> {
        Vector2::new(x, y)
    }

    fn pt(x: f64, y: f64) -> HPoint {
        HPoint::finite(x, y)
    }

    fn unit_circle() -> Conic {
        Conic::circle(v(0.0, 0.0), 1.0).unwrap()
    }

    fn y_eq_x2() -> Conic {
        Conic::from_coeffs([1.0, 0.0, 0.0, 0.0, -1.0, 0.0]).unwrap()
    }

    #[test]
    fn center_axes_builds_expected_matrices() {
        let c = unit_circle();
        let expected = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0)) / 3f64.sqrt();
        assert!((c.matrix() - expected).norm() < 1e-15);
        assert_eq!(c.kind(), ConicKind::Ellipse);

        let e = conic_from_center_axes(v(0.0, 0.0), (0.6, 0.4), 0.0).unwrap();
        let g = e.ellipse_geometry().unwrap();
        assert!((g.semi_major - 0.6).abs() < 1e-14 && (g.semi_minor - 0.4).abs() < 1e-14);
        assert!((g.semi_major + g.semi_minor - 1.0).abs() < 1e-14);

        let shifted = Conic::circle(v(2.0, 0.0), 1.0).unwrap();
        assert!(shifted.algebraic(&pt(3.0, 0.0)).abs() < 1e-15);

        assert!(conic_from_center_axes(v(0.0, 0.0), (0.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn classification() {
        assert_eq!(unit_circle().kind(), ConicKind::Ellipse);
        assert_eq!(y_eq_x2().kind(), ConicKind::Parabola);
        let xy = Conic::from_coeffs([0.0, 1.0, 0.0, 0.0, 0.0, -1.0]).unwrap();
        assert_eq!(xy.kind(), ConicKind::Hyperbola);
        let pair = Conic::from_coeffs([1.0, 0.0, -1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(pair.kind(), ConicKind::Degenerate);
        // scale invariance is literal after normalization
        let scaled = Conic::from_coeffs([-7.0, 0.0, 0.0, 0.0, 7.0, 0.0]).unwrap();
        assert!((scaled.matrix() - y_eq_x2().matrix()).norm() < 1e-15);
        assert_eq!(scaled.kind(), y_eq_x2().kind());
    }

    #[test]
    fn canonical_parabola_elements() {
        let e = y_eq_x2().parabola_elements().unwrap();
        assert!(e.focus.approx_eq(&pt(0.0, 0.25), 1e-14));
        assert!(e.vertex.approx_eq(&pt(0.0, 0.0), 1e-14));
        assert!(e.directrix.approx_eq(&HLine::new(0.0, 1.0, 0.25).unwrap(), 1e-14));
        assert!(e.axis.approx_eq(&HLine::new(1.0, 0.0, 0.0).unwrap(), 1e-14));
    }

    #[test]
    fn translated_sideways_parabola_elements() {
        // x − 1 = (y − 2)²
        let c = Conic::from_coeffs([0.0, 0.0, 1.0, -1.0, -4.0, 5.0]).unwrap();
        let e = c.parabola_elements().unwrap();
        assert!(e.focus.approx_eq(&pt(1.25, 2.0), 1e-13));
        assert!(e.vertex.approx_eq(&pt(1.0, 2.0), 1e-13));
        assert!(e.directrix.approx_eq(&HLine::new(1.0, 0.0, -0.75).unwrap(), 1e-13));
    }

    #[test]
    fn rotated_parabola_elements_match_rotated_canonical() {
        let rot = nalgebra::Rotation2::new(PI / 4.0).into_inner();
        let c = y_eq_x2().transformed(&rot, &v(0.0, 0.0)).unwrap();
        let e = c.parabola_elements().unwrap();
        assert!(e.focus.approx_eq(&HPoint::from_xy(rot * v(0.0, 0.25)), 1e-10));
        assert!(e.vertex.approx_eq(&pt(0.0, 0.0), 1e-10));
        let d_point = HPoint::from_xy(rot * v(3.0, -0.25));
        assert!(e.directrix.incidence(&d_point) < 1e-10);
    }

    #[test]
    fn parabola_elements_rejects_non_parabolas() {
        assert_eq!(unit_circle().parabola_elements(), Err(GeomError::NotAParabola));
        let pair = Conic::from_coeffs([1.0, 0.0, 0.0, 0.0, 0.0, -1.0]).unwrap();
        assert_eq!(pair.parabola_elements(), Err(GeomError::DegenerateConic));
    }

    #[test]
    fn pole_and_polar_of_unit_circle() {
        let c = unit_circle();
        let t = c.polar(&pt(1.0, 0.0)).unwrap();
        assert!(t.approx_eq(&HLine::new(1.0, 0.0, -1.0).unwrap(), 1e-15));
        assert_eq!(c.polar(&pt(0.0, 0.0)).unwrap(), HLine::at_infinity());
        let p = c.pole(&HLine::new(1.0, 0.0, -2.0).unwrap()).unwrap();
        assert!(p.approx_eq(&pt(0.5, 0.0), 1e-15));
    }

    #[test]
    fn tangents_from_exterior_point() {
        let c = unit_circle();
        let ts = c.tangents_from_point(&pt(2.0, 0.0)).unwrap();
        assert_eq!(ts.len(), 2);
        // oracle: touchpoint T with OT ⟂ PT on the unit circle, T = (cos θ, sin θ), cos θ = 1/2
        let h = 3f64.sqrt() / 2.0;
        let mut ys: Vec<f64> = ts.iter().map(|t| t.touch.y()).collect();
        ys.sort_by(f64::total_cmp);
        assert!((ys[0] + h).abs() < 1e-14 && (ys[1] - h).abs() < 1e-14);
        for t in &ts {
            assert!((t.touch.x() - 0.5).abs() < 1e-14);
            assert!(c.intersect_line(&t.line).discriminant.abs() < 1e-9);
        }
        let on = c.tangents_from_point(&pt(1.0, 0.0)).unwrap();
        assert_eq!(on.len(), 1);
        assert!(on[0].line.approx_eq(&HLine::new(1.0, 0.0, -1.0).unwrap(), 1e-15));
        assert!(c.tangents_from_point(&pt(0.0, 0.0)).unwrap().is_empty());
    }

    #[test]
    fn line_intersections() {
        let c = unit_circle();
        let hit = c.intersect_line(&HLine::new(0.0, 1.0, 0.0).unwrap());
        assert_eq!(hit.points.len(), 2);
        let mut xs: Vec<f64> = hit.points.iter().map(|p| p.x()).collect();
        xs.sort_by(f64::total_cmp);
        assert!((xs[0] + 1.0).abs() < 1e-15 && (xs[1] - 1.0).abs() < 1e-15);
        let touch = c.intersect_line(&HLine::new(1.0, 0.0, -1.0).unwrap());
        assert_eq!(touch.points.len(), 1);
        assert!(touch.points[0].approx_eq(&pt(1.0, 0.0), 1e-15));
        assert!(c.intersect_line(&HLine::new(1.0, 0.0, -2.0).unwrap()).points.is_empty());
    }

    #[test]
    fn focus_directrix_constructions() {
        let c = parabola_from_focus_directrix(&pt(0.0, 0.25), &HLine::new(0.0, 1.0, 0.25).unwrap()).unwrap();
        assert!(c.distance(&y_eq_x2()) < 1e-15);
        let c = parabola_from_focus_directrix(&pt(0.0, 0.0), &HLine::new(1.0, 0.0, -1.0).unwrap()).unwrap();
        // y² = −2x + 1
        let expected = Conic::from_coeffs([0.0, 0.0, 1.0, 2.0, 0.0, -1.0]).unwrap();
        assert!(c.distance(&expected) < 1e-15);
        assert!(c.parabola_elements().unwrap().vertex.approx_eq(&pt(0.5, 0.0), 1e-14));
        assert_eq!(
            parabola_from_focus_directrix(&pt(0.0, 0.0), &HLine::new(1.0, 0.0, 0.0).unwrap()),
            Err(GeomError::DegenerateConic)
        );
    }

    #[test]
    fn rotated_ellipse_geometry_round_trip() {
        let c = conic_from_center_axes(v(0.1, 0.2), (0.6, 0.4), 0.3).unwrap();
        let g = c.ellipse_geometry().unwrap();
        assert!((g.center - v(0.1, 0.2)).norm() < 1e-14);
        assert!((g.angle - 0.3).abs() < 1e-13);
        for k in 0..8 {
            let p = HPoint::from_xy(g.point_at(k as f64));
            assert!(c.sampson_distance(&p) < 1e-14);
        }
        let back = Conic::from_ellipse(&g).unwrap();
        assert!(back.distance(&c) < 1e-14);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn pole_polar_round_trip(cx in -1.0..1.0f64, cy in -1.0..1.0f64, a in 0.3..2.0f64, b in 0.3..2.0f64,
                                     ang in 0.0..3.0f64, px in -3.0..3.0f64, py in -3.0..3.0f64) {
                let c = conic_from_center_axes(v(cx, cy), (a, b), ang).unwrap();
                let p = pt(px, py);
                prop_assume!((p.xy() - v(cx, cy)).norm() > 1e-2);
                let back = c.pole(&c.polar(&p).unwrap()).unwrap();
                prop_assert!(back.approx_eq(&p, 1e-10));
            }

            #[test]
            fn focus_directrix_round_trip(fx in -2.0..2.0f64, fy in -2.0..2.0f64, th in 0.0..6.3f64, n in -2.0..2.0f64) {
                let focus = pt(fx, fy);
                let d = HLine::new(th.cos(), th.sin(), n).unwrap();
                prop_assume!(d.dist(&focus) > 1e-2);
                let c = parabola_from_focus_directrix(&focus, &d).unwrap();
                prop_assert_eq!(c.kind(), ConicKind::Parabola);
                let e = c.parabola_elements().unwrap();
                prop_assert!(e.focus.approx_eq(&focus, 1e-10));
                prop_assert!(e.directrix.approx_eq(&d, 1e-10));
                // element invariants
                prop_assert!(e.axis.incidence(&e.focus) < 1e-10 && e.axis.incidence(&e.vertex) < 1e-10);
                prop_assert!(e.axis.normal().dot(&e.directrix.normal()).abs() < 1e-10);
                prop_assert!(e.directrix.incidence(&e.directrix_foot()) < 1e-10);
            }

            #[test]
            fn tangents_have_zero_discriminant(a in 0.3..2.0f64, b in 0.3..2.0f64, ang in 0.0..3.0f64, t in 0.0..6.3f64, r in 1.1..3.0f64) {
                let c = conic_from_center_axes(v(0.2, -0.1), (a, b), ang).unwrap();
                let g = c.ellipse_geometry().unwrap();
                let p = HPoint::from_xy(g.center + (g.point_at(t) - g.center) * r);
                let ts = c.tangents_from_point(&p).unwrap();
                prop_assert_eq!(ts.len(), 2);
                for tan in ts {
                    prop_assert!(c.intersect_line(&tan.line).discriminant.abs() < 1e-9);
                    prop_assert!(c.tangency_residual(&tan.line) < 1e-9);
                }
            }
        }
    }
}
