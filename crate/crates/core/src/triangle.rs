//! Reference triangles: coordinate systems, conjugations, centers, Simson
//! lines and the named triangle conics.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::conics::{conic_from_center_axes, Conic};
use crate::error::{GeomError, Result};
use crate::geom::{cross3, foot_of_perpendicular, join, tls_line, HLine, HPoint, EPS};
use crate::triconics::inparabola_from_focus;

/// Relative size under which a trilinear/barycentric coordinate counts as zero.
const COORD_ZERO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordSystem {
    Trilinear,
    Barycentric,
    /// Homogeneous Cartesian `(x, y, w)`.
    Cartesian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Conjugation {
    Isogonal,
    Isotomic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CenterId {
    X1,
    X2,
    X3,
    X4,
    X5,
    X39,
    X99,
    X110,
    X140,
    X1385,
    Omega1,
    Omega2,
}

impl CenterId {
    pub const ALL: [CenterId; 12] = [
        CenterId::X1,
        CenterId::X2,
        CenterId::X3,
        CenterId::X4,
        CenterId::X5,
        CenterId::X39,
        CenterId::X99,
        CenterId::X110,
        CenterId::X140,
        CenterId::X1385,
        CenterId::Omega1,
        CenterId::Omega2,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedConic {
    Circumcircle,
    SteinerCircumellipse,
    SteinerInellipse,
    MacbeathInellipse,
    BrocardInellipse,
    KiepertParabola,
}

/// Simson line of a circumcircle point and its double homothet, the Steiner line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimsonSteiner {
    pub simson: HLine,
    pub steiner: HLine,
    /// Feet of the perpendiculars on BC, CA, AB.
    pub feet: [HPoint; 3],
    /// Largest distance of a foot from the fitted Simson line.
    pub collinearity_residual: f64,
    /// Set when the point sits on a vertex and the pedal triangle collapses.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    v: [Vector2<f64>; 3],
    sides: [f64; 3],
}

impl Triangle {
    pub fn new(a: &HPoint, b: &HPoint, c: &HPoint) -> Result<Self> {
        Self::from_xy(a.require_finite()?, b.require_finite()?, c.require_finite()?)
    }

    pub fn from_xy(a: Vector2<f64>, b: Vector2<f64>, c: Vector2<f64>) -> Result<Self> {
        if cross3(a, b, c).abs() <= EPS {
            return Err(GeomError::DegenerateTriangle);
        }
        let sides = [(c - b).norm(), (a - c).norm(), (b - a).norm()];
        let [sa, sb, sc] = sides;
        if !(sa < sb + sc && sb < sc + sa && sc < sa + sb) {
            return Err(GeomError::DegenerateTriangle);
        }
        Ok(Self { v: [a, b, c], sides })
    }

    pub fn vertices(&self) -> [Vector2<f64>; 3] {
        self.v
    }

    pub fn vertex(&self, i: usize) -> HPoint {
        HPoint::from_xy(self.v[i])
    }

    /// Sidelengths `(a, b, c) = (|BC|, |CA|, |AB|)`.
    pub fn sides(&self) -> [f64; 3] {
        self.sides
    }

    pub fn signed_area(&self) -> f64 {
        0.5 * cross3(self.v[0], self.v[1], self.v[2])
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    /// Sideline opposite vertex `i` (0 → BC).
    pub fn sideline(&self, i: usize) -> HLine {
        let (p, q) = (self.vertex((i + 1) % 3), self.vertex((i + 2) % 3));
        join(&p, &q).expect("triangle vertices are distinct")
    }

    pub fn sidelines(&self) -> [HLine; 3] {
        [self.sideline(0), self.sideline(1), self.sideline(2)]
    }

    /// Smallest pairwise vertex distance.
    pub fn min_vertex_gap(&self) -> f64 {
        let [a, b, c] = self.v;
        (a - b).norm().min((b - c).norm()).min((c - a).norm())
    }

    pub fn centroid(&self) -> Vector2<f64> {
        (self.v[0] + self.v[1] + self.v[2]) / 3.0
    }

    /// Columns are the homogeneous vertices, so `cartesian = V · barycentric`.
    fn vertex_matrix(&self) -> Matrix3<f64> {
        let [a, b, c] = self.v;
        Matrix3::new(a.x, b.x, c.x, a.y, b.y, c.y, 1.0, 1.0, 1.0)
    }

    fn inverse_vertex_matrix(&self) -> Matrix3<f64> {
        self.vertex_matrix()
            .try_inverse()
            .expect("non-degenerate triangle has an invertible vertex matrix")
    }

    pub fn to_barycentric(&self, p: &HPoint) -> Vector3<f64> {
        self.inverse_vertex_matrix() * p.coords()
    }

    pub fn from_barycentric(&self, bary: &Vector3<f64>) -> Result<HPoint> {
        HPoint::from_homogeneous(self.vertex_matrix() * bary)
    }

    pub fn trilinear_to_barycentric(&self, tri: &Vector3<f64>) -> Vector3<f64> {
        let [a, b, c] = self.sides;
        Vector3::new(a * tri.x, b * tri.y, c * tri.z)
    }

    pub fn barycentric_to_trilinear(&self, bary: &Vector3<f64>) -> Vector3<f64> {
        let [a, b, c] = self.sides;
        Vector3::new(bary.x / a, bary.y / b, bary.z / c)
    }

    pub fn to_trilinear(&self, p: &HPoint) -> Vector3<f64> {
        self.barycentric_to_trilinear(&self.to_barycentric(p))
    }

    pub fn from_trilinear(&self, tri: &Vector3<f64>) -> Result<HPoint> {
        self.from_barycentric(&self.trilinear_to_barycentric(tri))
    }

    /// Homogeneous conversion between coordinate systems. Cartesian triples are `(x, y, w)`.
    pub fn convert(&self, v: &Vector3<f64>, from: CoordSystem, to: CoordSystem) -> Result<Vector3<f64>> {
        if v.norm() == 0.0 {
            return Err(GeomError::ZeroVector);
        }
        let bary = match from {
            CoordSystem::Barycentric => *v,
            CoordSystem::Trilinear => self.trilinear_to_barycentric(v),
            CoordSystem::Cartesian => self.inverse_vertex_matrix() * v,
        };
        Ok(match to {
            CoordSystem::Barycentric => bary,
            CoordSystem::Trilinear => self.barycentric_to_trilinear(&bary),
            CoordSystem::Cartesian => self.from_barycentric(&bary)?.coords(),
        })
    }

    /// Barycentric line coordinates `(p, q, r)` of a Cartesian line.
    pub fn line_to_barycentric(&self, line: &HLine) -> Vector3<f64> {
        self.vertex_matrix().transpose() * line.coords()
    }

    /// Cartesian conic whose barycentric matrix is `mb`.
    pub fn conic_from_barycentric(&self, mb: &Matrix3<f64>) -> Result<Conic> {
        let k = self.inverse_vertex_matrix();
        Conic::from_matrix(k.transpose() * mb * k)
    }

    /// Barycentric matrix of a Cartesian conic.
    pub fn conic_to_barycentric(&self, conic: &Conic) -> Matrix3<f64> {
        let v = self.vertex_matrix();
        v.transpose() * conic.matrix() * v
    }

    pub fn conjugate(&self, p: &HPoint, kind: Conjugation) -> Result<HPoint> {
        let coords = match kind {
            Conjugation::Isogonal => self.to_trilinear(p),
            Conjugation::Isotomic => self.to_barycentric(p),
        };
        let scale = coords.amax();
        if coords.iter().any(|c| c.abs() <= COORD_ZERO * scale) {
            return Err(GeomError::ConjugateUndefined);
        }
        let inv = coords.map(|c| 1.0 / c);
        match kind {
            Conjugation::Isogonal => self.from_trilinear(&inv),
            Conjugation::Isotomic => self.from_barycentric(&inv),
        }
    }

    pub fn circumcenter(&self) -> Vector2<f64> {
        let [a, b, c] = self.v;
        let (ab, ac) = (b - a, c - a);
        let d = 2.0 * ab.perp(&ac);
        let (bb, cc) = (ab.norm_squared(), ac.norm_squared());
        a + Vector2::new(ac.y * bb - ab.y * cc, ab.x * cc - ac.x * bb) / d
    }

    pub fn circumradius(&self) -> f64 {
        (self.v[0] - self.circumcenter()).norm()
    }

    pub fn orthocenter(&self) -> Vector2<f64> {
        self.v[0] + self.v[1] + self.v[2] - 2.0 * self.circumcenter()
    }

    pub fn inradius(&self) -> f64 {
        let [a, b, c] = self.sides;
        2.0 * self.area() / (a + b + c)
    }

    /// Brocard angle ω with `cot ω = (a² + b² + c²) / 4Δ`.
    pub fn brocard_angle(&self) -> f64 {
        let [a, b, c] = self.sides;
        (4.0 * self.area() / (a * a + b * b + c * c)).atan()
    }

    fn squared_side_differences(&self) -> Result<[f64; 3]> {
        let [a, b, c] = self.sides.map(|s| s * s);
        let d = [b - c, c - a, a - b];
        let scale = a.max(b).max(c);
        if d.iter().any(|x| x.abs() <= 1e-12 * scale) {
            return Err(GeomError::UndefinedCenter);
        }
        Ok(d)
    }

    pub fn center(&self, id: CenterId) -> Result<HPoint> {
        let [a, b, c] = self.sides;
        let [a2, b2, c2] = [a * a, b * b, c * c];
        match id {
            CenterId::X1 => self.from_trilinear(&Vector3::new(1.0, 1.0, 1.0)),
            CenterId::X2 => Ok(HPoint::from_xy(self.centroid())),
            CenterId::X3 => Ok(HPoint::from_xy(self.circumcenter())),
            CenterId::X4 => Ok(HPoint::from_xy(self.orthocenter())),
            CenterId::X5 => Ok(HPoint::from_xy(0.5 * (self.circumcenter() + self.orthocenter()))),
            CenterId::X39 => self.from_barycentric(&Vector3::new(a2 * (b2 + c2), b2 * (c2 + a2), c2 * (a2 + b2))),
            CenterId::X99 => {
                let d = self.squared_side_differences()?;
                self.from_barycentric(&Vector3::new(1.0 / d[0], 1.0 / d[1], 1.0 / d[2]))
            }
            CenterId::X110 => {
                let d = self.squared_side_differences()?;
                self.from_barycentric(&Vector3::new(a2 / d[0], b2 / d[1], c2 / d[2]))
            }
            CenterId::X140 => {
                let x3 = self.circumcenter();
                let x5 = 0.5 * (x3 + self.orthocenter());
                Ok(HPoint::from_xy(0.5 * (x3 + x5)))
            }
            CenterId::X1385 => {
                let x1 = self.center(CenterId::X1)?;
                Ok(x1.midpoint(&HPoint::from_xy(self.circumcenter())))
            }
            CenterId::Omega1 => self.from_trilinear(&Vector3::new(c / b, a / c, b / a)),
            CenterId::Omega2 => self.from_trilinear(&Vector3::new(b / c, c / a, a / b)),
        }
    }

    /// Finite center as Cartesian coordinates.
    pub fn center_xy(&self, id: CenterId) -> Result<Vector2<f64>> {
        self.center(id)?.require_finite()
    }

    pub fn simson_steiner(&self, f: &HPoint) -> Result<SimsonSteiner> {
        let fxy = f.require_finite()?;
        let off = ((fxy - self.circumcenter()).norm() - self.circumradius()).abs();
        if off > EPS {
            return Err(GeomError::OffCircumcircle(off));
        }
        let lines = self.sidelines();
        let feet = [
            foot_of_perpendicular(f, &lines[0])?,
            foot_of_perpendicular(f, &lines[1])?,
            foot_of_perpendicular(f, &lines[2])?,
        ];
        let fit = tls_line(&feet.map(|p| p.xy()))?;
        let simson = fit.line;
        let v = simson.coords();
        // homothety (F, 2): l·x + m·y + (l·Fx + m·Fy + 2n) = 0
        let steiner = HLine::new(v.x, v.y, v.x * fxy.x + v.y * fxy.y + 2.0 * v.z)?;
        let degenerate = self.v.iter().any(|p| (p - fxy).norm() < 1e-6);
        Ok(SimsonSteiner {
            simson,
            steiner,
            feet,
            collinearity_residual: fit.max_residual,
            degenerate,
        })
    }

    /// Inellipse with the given foci; the major axis is sized by tangency to
    /// sideline BC and tangency to the other two sidelines is then checked.
    pub fn inellipse_from_foci(&self, f1: Vector2<f64>, f2: Vector2<f64>) -> Result<Conic> {
        let bc = self.sideline(0);
        let s1 = bc.signed_dist(f1);
        let s2 = bc.signed_dist(f2);
        if s1 * s2 <= 0.0 {
            return Err(GeomError::InvalidParameter(
                "foci on opposite sides of a sideline".into(),
            ));
        }
        // reflecting one focus in a tangent line puts it at distance 2a from the other
        let f1r = f1 - bc.normal() * (2.0 * s1);
        let semi_major = 0.5 * (f1r - f2).norm();
        let half_focal = 0.5 * (f1 - f2).norm();
        let semi_minor = (semi_major * semi_major - half_focal * half_focal).sqrt();
        let angle = if half_focal > 0.0 {
            (f1.y - f2.y).atan2(f1.x - f2.x)
        } else {
            0.0
        };
        let conic = conic_from_center_axes(0.5 * (f1 + f2), (semi_major, semi_minor), angle)?;
        for line in &self.sidelines()[1..] {
            let r = conic.tangency_residual(line);
            if r > 1e-8 {
                return Err(GeomError::InvalidParameter(format!(
                    "foci do not admit an inellipse (tangency residual {r:.3e})"
                )));
            }
        }
        Ok(conic)
    }

    pub fn named_conic(&self, name: NamedConic) -> Result<Conic> {
        match name {
            NamedConic::Circumcircle => Conic::circle(self.circumcenter(), self.circumradius()),
            NamedConic::SteinerCircumellipse => {
                let mb = Matrix3::new(0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0);
                self.conic_from_barycentric(&mb)
            }
            NamedConic::SteinerInellipse => {
                let outer = self.named_conic(NamedConic::SteinerCircumellipse)?;
                let g = self.centroid();
                outer.transformed(&(Matrix2::identity() * 0.5), &(g * 0.5))
            }
            NamedConic::MacbeathInellipse => self.inellipse_from_foci(self.circumcenter(), self.orthocenter()),
            NamedConic::BrocardInellipse => {
                self.inellipse_from_foci(self.center_xy(CenterId::Omega1)?, self.center_xy(CenterId::Omega2)?)
            }
            NamedConic::KiepertParabola => inparabola_from_focus(self, &self.center(CenterId::X110)?),
        }
    }

    /// Euler line `X2 X3`.
    pub fn euler_line(&self) -> Result<HLine> {
        join(&HPoint::from_xy(self.centroid()), &HPoint::from_xy(self.circumcenter()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conics::ConicKind;
    use crate::geom::reflect;
    use std::f64::consts::PI;

    fn v(x: f64, y: f64) -> Vector2<f64> {
        Vector2::new(x, y)
    }

    pub(crate) fn right_345() -> Triangle {
        Triangle::from_xy(v(0.0, 0.0), v(4.0, 0.0), v(0.0, 3.0)).unwrap()
    }

    pub(crate) fn scalene() -> Triangle {
        Triangle::from_xy(v(0.0, 0.0), v(4.0, 0.0), v(1.2, 2.7)).unwrap()
    }

    fn equilateral() -> Triangle {
        let p = |k: f64| v((2.0 * PI * k / 3.0).cos(), (2.0 * PI * k / 3.0).sin());
        Triangle::from_xy(p(0.0), p(1.0), p(2.0)).unwrap()
    }

    #[test]
    fn rejects_degenerate_triangles() {
        assert_eq!(
            Triangle::from_xy(v(0.0, 0.0), v(1.0, 1.0), v(2.0, 2.0)),
            Err(GeomError::DegenerateTriangle)
        );
    }

    #[test]
    fn coordinate_conversions() {
        let t = scalene();
        let [a, b, c] = t.sides();
        let bary = t
            .convert(
                &Vector3::new(1.0, 1.0, 1.0),
                CoordSystem::Trilinear,
                CoordSystem::Barycentric,
            )
            .unwrap();
        assert!((bary - Vector3::new(a, b, c)).norm() < 1e-15);
        let g = t
            .convert(
                &Vector3::new(1.0, 1.0, 1.0),
                CoordSystem::Barycentric,
                CoordSystem::Cartesian,
            )
            .unwrap();
        assert!((v(g.x, g.y) - t.centroid()).norm() < 1e-15 && g.z == 1.0);
        let va = t
            .convert(&t.vertex(0).coords(), CoordSystem::Cartesian, CoordSystem::Barycentric)
            .unwrap();
        let va = va / va.sum();
        assert!((va - Vector3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
        // zero-sum barycentrics are ideal points
        let ideal = t.from_barycentric(&Vector3::new(1.0, -1.0, 0.0)).unwrap();
        assert!(!ideal.is_finite());
        assert!(t
            .convert(&Vector3::zeros(), CoordSystem::Trilinear, CoordSystem::Cartesian)
            .is_err());
    }

    #[test]
    fn conjugation_fixed_points() {
        let t = scalene();
        let x1 = t.center(CenterId::X1).unwrap();
        assert!(t.conjugate(&x1, Conjugation::Isogonal).unwrap().approx_eq(&x1, 1e-13));
        let x2 = t.center(CenterId::X2).unwrap();
        assert!(t.conjugate(&x2, Conjugation::Isotomic).unwrap().approx_eq(&x2, 1e-13));
    }

    #[test]
    fn conjugate_of_sideline_point_is_undefined() {
        let t = scalene();
        let on_ab = HPoint::finite(2.0, 0.0);
        assert_eq!(
            t.conjugate(&on_ab, Conjugation::Isogonal),
            Err(GeomError::ConjugateUndefined)
        );
        assert_eq!(
            t.conjugate(&on_ab, Conjugation::Isotomic),
            Err(GeomError::ConjugateUndefined)
        );
    }

    /// Reflect the cevians through `p` in the angle bisectors and intersect them.
    fn isogonal_by_cevian_reflection(t: &Triangle, p: &HPoint) -> HPoint {
        let vs = t.vertices();
        let mut lines = Vec::new();
        for i in 0..3 {
            let a = vs[i];
            let (b, c) = (vs[(i + 1) % 3], vs[(i + 2) % 3]);
            let bis = (b - a).normalize() + (c - a).normalize();
            let bisector = HLine::through(a, bis).unwrap();
            let pr = reflect(p, bisector).unwrap();
            lines.push(join(&HPoint::from_xy(a), &pr).unwrap());
        }
        crate::geom::concurrency_point(&lines).unwrap().point
    }

    #[test]
    fn isogonal_conjugate_of_circumcenter_is_orthocenter() {
        // use an interior probe: the right triangle's X3 and X4 sit on the sidelines
        for t in [scalene(), right_345()] {
            let x3 = t.center(CenterId::X3).unwrap();
            let x4 = t.center(CenterId::X4).unwrap();
            match t.conjugate(&x3, Conjugation::Isogonal) {
                Ok(g) => assert!(g.approx_eq(&x4, 1e-12)),
                Err(e) => assert_eq!(e, GeomError::ConjugateUndefined),
            }
            let probe = HPoint::finite(1.1, 0.9);
            let g = t.conjugate(&probe, Conjugation::Isogonal).unwrap();
            assert!(g.approx_eq(&isogonal_by_cevian_reflection(&t, &probe), 1e-12));
        }
        // on 3-4-5 the circumcenter is the midpoint of the hypotenuse and the
        // conjugate collapses onto the right-angle vertex, the orthocenter
        let t = right_345();
        let near = HPoint::from_xy(t.circumcenter() + v(-1e-7, -1e-7));
        let g = t.conjugate(&near, Conjugation::Isogonal).unwrap();
        assert!(g.approx_eq(&t.center(CenterId::X4).unwrap(), 1e-5));
    }

    #[test]
    fn right_triangle_centers() {
        let t = right_345();
        assert!(t
            .center(CenterId::X3)
            .unwrap()
            .approx_eq(&HPoint::finite(2.0, 1.5), 1e-15));
        // legs 4 and 3, hypotenuse 5: r = (3 + 4 − 5)/2 = 1
        assert!(t
            .center(CenterId::X1)
            .unwrap()
            .approx_eq(&HPoint::finite(1.0, 1.0), 1e-14));
        assert!((t.inradius() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn equilateral_centers_coincide() {
        let t = equilateral();
        use CenterId::*;
        for id in [X1, X2, X3, X4, X5, X39, X140, X1385] {
            let p = t.center(id).unwrap();
            assert!(p.approx_eq(&HPoint::finite(0.0, 0.0), 1e-12), "{id:?}");
        }
        assert_eq!(t.center(X99), Err(GeomError::UndefinedCenter));
        assert_eq!(t.center(X110), Err(GeomError::UndefinedCenter));
    }

    #[test]
    fn geometric_and_barycentric_centers_agree() {
        let t = scalene();
        let [a, b, c] = t.sides().map(|s| s * s);
        let x3 = t
            .from_barycentric(&Vector3::new(a * (b + c - a), b * (c + a - b), c * (a + b - c)))
            .unwrap();
        assert!(x3.approx_eq(&t.center(CenterId::X3).unwrap(), 1e-13));
        let x4 = t
            .from_barycentric(&Vector3::new(1.0 / (b + c - a), 1.0 / (c + a - b), 1.0 / (a + b - c)))
            .unwrap();
        assert!(x4.approx_eq(&t.center(CenterId::X4).unwrap(), 1e-13));
        let x5 = t
            .from_barycentric(&Vector3::new(
                a * (b + c) - (b - c).powi(2),
                b * (c + a) - (c - a).powi(2),
                c * (a + b) - (a - b).powi(2),
            ))
            .unwrap();
        assert!(x5.approx_eq(&t.center(CenterId::X5).unwrap(), 1e-13));
        // Brocard points: equal angles ω at each vertex
        let w = t.brocard_angle();
        let o1 = t.center_xy(CenterId::Omega1).unwrap();
        let vs = t.vertices();
        for i in 0..3 {
            let (p, q) = (vs[i], vs[(i + 1) % 3]);
            let ang = (q - p).angle(&(o1 - p));
            let ang2 = (vs[(i + 2) % 3] - p).angle(&(o1 - p));
            assert!((ang - w).abs() < 1e-12 || (ang2 - w).abs() < 1e-12);
        }
        // X39 is the midpoint of the Brocard points
        let mid = 0.5 * (o1 + t.center_xy(CenterId::Omega2).unwrap());
        assert!((mid - t.center_xy(CenterId::X39).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn steiner_point_on_both_circumconics() {
        let t = scalene();
        let x99 = t.center(CenterId::X99).unwrap();
        let circ = t.named_conic(NamedConic::Circumcircle).unwrap();
        let steiner = t.named_conic(NamedConic::SteinerCircumellipse).unwrap();
        assert!(circ.sampson_distance(&x99) < 1e-9);
        assert!(steiner.sampson_distance(&x99) < 1e-9);
    }

    #[test]
    fn simson_of_a_vertex_is_flagged() {
        let t = scalene();
        let s = t.simson_steiner(&t.vertex(0)).unwrap();
        assert!(s.degenerate);
        // the altitude from A: through A, perpendicular to BC
        assert!(s.simson.incidence(&t.vertex(0)) < 1e-12);
        assert!(s.simson.direction().dot(&t.sideline(0).direction()).abs() < 1e-12);
    }

    #[test]
    fn steiner_line_through_orthocenter() {
        let t = scalene();
        let x4 = t.center(CenterId::X4).unwrap();
        for k in 0..24 {
            let th = 0.1 + k as f64 * 2.0 * PI / 24.0;
            let f = HPoint::from_xy(t.circumcenter() + t.circumradius() * v(th.cos(), th.sin()));
            let s = t.simson_steiner(&f).unwrap();
            assert!(s.steiner.incidence(&x4) < 1e-9);
            assert!(s.collinearity_residual < 1e-12);
            // homothety (F, 2) carries each foot to the corresponding reflection
            for foot in s.feet {
                let image = HPoint::from_xy(2.0 * foot.xy() - f.xy());
                assert!(s.steiner.incidence(&image) < 1e-12);
            }
        }
        assert!(matches!(
            t.simson_steiner(&HPoint::finite(5.0, 5.0)),
            Err(GeomError::OffCircumcircle(_))
        ));
    }

    #[test]
    fn simson_of_equilateral_matches_pedal_feet() {
        let t = equilateral();
        let f = HPoint::finite(1.0, 0.0);
        let s = t.simson_steiner(&f).unwrap();
        // brute-force pedal feet: project F on each side by the parametric formula
        let vs = t.vertices();
        for i in 0..3 {
            let (p, q) = (vs[(i + 1) % 3], vs[(i + 2) % 3]);
            let d = q - p;
            let s_par = (f.xy() - p).dot(&d) / d.norm_squared();
            let foot = HPoint::from_xy(p + d * s_par);
            assert!(s.simson.incidence(&foot) < 1e-12);
        }
    }

    #[test]
    fn equilateral_steiner_conics_are_circles() {
        let t = equilateral();
        let circ = t.named_conic(NamedConic::Circumcircle).unwrap();
        let outer = t.named_conic(NamedConic::SteinerCircumellipse).unwrap();
        assert!(outer.distance(&circ) < 1e-13);
        let inner = t.named_conic(NamedConic::SteinerInellipse).unwrap();
        let incircle = Conic::circle(v(0.0, 0.0), t.inradius()).unwrap();
        assert!(inner.distance(&incircle) < 1e-13);
    }

    #[test]
    fn steiner_inellipse_touches_midpoints() {
        let t = scalene();
        let inner = t.named_conic(NamedConic::SteinerInellipse).unwrap();
        for i in 0..3 {
            let side = t.sideline(i);
            assert!(inner.intersect_line(&side).discriminant.abs() < 1e-12);
            let mid = t.vertex((i + 1) % 3).midpoint(&t.vertex((i + 2) % 3));
            assert!(inner.sampson_distance(&mid) < 1e-12);
        }
    }

    #[test]
    fn macbeath_and_brocard_inellipses() {
        let t = scalene();
        let mb = t.named_conic(NamedConic::MacbeathInellipse).unwrap();
        let g = mb.ellipse_geometry().unwrap();
        assert!((g.center - t.center_xy(CenterId::X5).unwrap()).norm() < 1e-12);
        // semi-major of the MacBeath inellipse is R/2
        assert!((g.semi_major - t.circumradius() / 2.0).abs() < 1e-12);
        let br = t.named_conic(NamedConic::BrocardInellipse).unwrap();
        let gb = br.ellipse_geometry().unwrap();
        assert!((gb.center - t.center_xy(CenterId::X39).unwrap()).norm() < 1e-12);
        for line in t.sidelines() {
            assert!(mb.tangency_residual(&line) < 1e-9);
            assert!(br.tangency_residual(&line) < 1e-9);
        }
        // obtuse: X4 outside, no MacBeath inellipse
        let obtuse = Triangle::from_xy(v(0.0, 0.0), v(4.0, 0.0), v(0.5, 0.6)).unwrap();
        assert!(obtuse.named_conic(NamedConic::MacbeathInellipse).is_err());
    }

    #[test]
    fn kiepert_parabola_directrix_is_euler_line() {
        let t = scalene();
        let k = t.named_conic(NamedConic::KiepertParabola).unwrap();
        assert_eq!(k.kind(), ConicKind::Parabola);
        let e = k.parabola_elements().unwrap();
        let euler = t.euler_line().unwrap();
        assert!(e.directrix.approx_eq(&euler, 1e-9));
        assert!(e.focus.approx_eq(&t.center(CenterId::X110).unwrap(), 1e-10));
        let iso = Triangle::from_xy(v(-1.0, 0.0), v(1.0, 0.0), v(0.0, 2.0)).unwrap();
        assert!(iso.named_conic(NamedConic::KiepertParabola).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn conjugations_are_involutions(x in -3.0..6.0f64, y in -3.0..5.0f64) {
                let t = scalene();
                let p = HPoint::finite(x, y);
                let bary = t.to_barycentric(&p);
                let tri = t.to_trilinear(&p);
                prop_assume!(bary.iter().all(|c| c.abs() > 1e-3) && tri.iter().all(|c| c.abs() > 1e-3));
                for kind in [Conjugation::Isogonal, Conjugation::Isotomic] {
                    let q = t.conjugate(&p, kind).unwrap();
                    prop_assume!(q.is_finite());
                    let back = t.conjugate(&q, kind).unwrap();
                    prop_assert!(back.approx_eq(&p, 1e-10 * (1.0 + p.xy().norm())));
                }
            }

            #[test]
            fn circumcircle_points_have_ideal_isogonal_conjugates(th in 0.0..std::f64::consts::TAU) {
                let t = scalene();
                let p = HPoint::from_xy(t.circumcenter() + t.circumradius() * v(th.cos(), th.sin()));
                prop_assume!(t.vertices().iter().all(|q| (q - p.xy()).norm() > 1e-3));
                let tri = t.to_trilinear(&p).map(|c| 1.0 / c);
                let unit = t.trilinear_to_barycentric(&tri);
                let homog = t.vertex_matrix() * unit;
                prop_assert!((homog / homog.norm()).z.abs() < 1e-9);
            }

            #[test]
            fn steiner_ellipse_points_have_ideal_isotomic_conjugates(th in 0.0..std::f64::consts::TAU) {
                let t = scalene();
                let g = t.named_conic(NamedConic::SteinerCircumellipse).unwrap().ellipse_geometry().unwrap();
                let p = HPoint::from_xy(g.point_at(th));
                prop_assume!(t.vertices().iter().all(|q| (q - p.xy()).norm() > 1e-3));
                let inv = t.to_barycentric(&p).map(|c| 1.0 / c);
                let homog = t.vertex_matrix() * inv;
                prop_assert!((homog / homog.norm()).z.abs() < 1e-9);
            }
        }
    }
}
