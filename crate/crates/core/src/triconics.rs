//! Parabolas attached to a triangle: circumparabolas as isogonal/isotomic
//! images of tangent lines, inparabolas from a focus or a Brianchon point,
//! polar triangles and perspectors.

use nalgebra::{Matrix3, SymmetricEigen, Vector2};
use serde::{Deserialize, Serialize};

use crate::conics::{parabola_from_focus_directrix, Conic};
use crate::error::{GeomError, Result};
use crate::geom::{concurrency_point, join, HLine, HPoint};
use crate::triangle::{Conjugation, NamedConic, Triangle};

/// Tolerance for tangency and incidence preconditions.
pub const TANGENCY_TOL: f64 = 1e-9;
/// Largest cevian-to-point distance accepted for a perspector.
pub const PERSPECTOR_TOL: f64 = 1e-8;

/// A circumparabola given by the tangency point of its pre-image line.
///
/// Isogonal specs touch the circumcircle, isotomic specs the Steiner circumellipse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpSpec {
    pub kind: Conjugation,
    pub tangency: HPoint,
}

impl CpSpec {
    pub fn new(kind: Conjugation, tangency: HPoint) -> Self {
        Self { kind, tangency }
    }

    /// Tangency at parameter `t` on the carrier conic of `tri`: the polar angle
    /// on the circumcircle, or the principal-axes parameter on the Steiner
    /// circumellipse.
    pub fn at_parameter(tri: &Triangle, kind: Conjugation, t: f64) -> Result<Self> {
        let carrier = carrier_conic(tri, kind)?.ellipse_geometry()?;
        let q = match kind {
            Conjugation::Isogonal => carrier.center + carrier.semi_major * Vector2::new(t.cos(), t.sin()),
            Conjugation::Isotomic => carrier.point_at(t),
        };
        Ok(Self::new(kind, HPoint::from_xy(q)))
    }
}

/// Inparabola anchor: its focus on the circumcircle or its Brianchon point on
/// the Steiner circumellipse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IpSpec {
    Focus(HPoint),
    Brianchon(HPoint),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolarMode {
    /// Triangle bounded by the tangents at the vertices of a circumconic.
    Circum,
    /// Touchpoint triangle of an inconic.
    In,
}

/// The conic whose tangent lines are pre-images of circumparabolas.
pub fn carrier_conic(tri: &Triangle, kind: Conjugation) -> Result<Conic> {
    match kind {
        Conjugation::Isogonal => tri.named_conic(NamedConic::Circumcircle),
        Conjugation::Isotomic => tri.named_conic(NamedConic::SteinerCircumellipse),
    }
}

/// The tangent at the tangency point of `spec`, i.e. the conjugation pre-image line.
pub fn preimage_tangent(tri: &Triangle, spec: &CpSpec) -> Result<HLine> {
    let carrier = carrier_conic(tri, spec.kind)?;
    let off = carrier.sampson_distance(&spec.tangency);
    if off > TANGENCY_TOL {
        return Err(GeomError::InvalidParameter(format!(
            "tangency point off its carrier conic by {off:.3e}"
        )));
    }
    carrier.polar(&spec.tangency)
}

/// Image of a tangent line under isogonal or isotomic conjugation.
pub fn circumparabola(tri: &Triangle, spec: &CpSpec) -> Result<Conic> {
    let line = preimage_tangent(tri, spec)?;
    if tri
        .vertices()
        .iter()
        .any(|v| (v - spec.tangency.xy()).norm() < TANGENCY_TOL)
    {
        return Err(GeomError::DegenerateConic);
    }
    circumconic_from_line(tri, &line, spec.kind)
}

/// Conjugation image of any line not through a vertex: a circumconic.
pub fn circumconic_from_line(tri: &Triangle, line: &HLine, kind: Conjugation) -> Result<Conic> {
    let p = tri.line_to_barycentric(line);
    let w = match kind {
        Conjugation::Isotomic => p,
        Conjugation::Isogonal => {
            let [a, b, c] = tri.sides();
            p.component_mul(&nalgebra::Vector3::new(a * a, b * b, c * c))
        }
    };
    // w0·vw + w1·wu + w2·uv = 0
    let mb = Matrix3::new(0.0, w.z, w.y, w.z, 0.0, w.x, w.y, w.x, 0.0) * 0.5;
    let conic = tri.conic_from_barycentric(&mb)?;
    if conic.is_degenerate() {
        return Err(GeomError::DegenerateConic);
    }
    Ok(conic)
}

/// Pre-image line of a circumconic under a conjugation, recovered from
/// conjugated sample points by a homogeneous least-squares line fit.
pub fn preimage_line(tri: &Triangle, conic: &Conic, kind: Conjugation) -> Result<HLine> {
    let m = conic.matrix();
    let apex = tri.vertex(0).coords();
    let mut scatter = Matrix3::zeros();
    let mut used = 0;
    // rational parametrization by the pencil of lines through vertex A
    for k in 0..9 {
        let th = 0.17 + k as f64 * std::f64::consts::PI / 9.0;
        let d = nalgebra::Vector3::new(th.cos(), th.sin(), 0.0);
        let dmd = d.dot(&(m * d));
        if dmd.abs() < 1e-12 {
            continue;
        }
        let s = -2.0 * apex.dot(&(m * d)) / dmd;
        let p = HPoint::from_homogeneous(apex + d * s)?;
        if tri.vertices().iter().any(|v| (v - p.xy()).norm() < 1e-6) {
            continue;
        }
        let Ok(q) = tri.conjugate(&p, kind) else { continue };
        let u = q.unit();
        scatter += u * u.transpose();
        used += 1;
    }
    if used < 5 {
        return Err(GeomError::TooFewSamples { needed: 5, got: used });
    }
    let eig = SymmetricEigen::new(scatter);
    let imin = eig.eigenvalues.imin();
    HLine::from_homogeneous(eig.eigenvectors.column(imin).into_owned())
}

/// Inparabola with the given focus: its directrix is the Steiner line of the focus.
pub fn inparabola_from_focus(tri: &Triangle, focus: &HPoint) -> Result<Conic> {
    let ss = tri.simson_steiner(focus)?;
    if ss.degenerate {
        return Err(GeomError::FocusAtVertex);
    }
    parabola_from_focus_directrix(focus, &ss.steiner)
}

/// Inconic with Brianchon point (perspector) `pi`.
pub fn inconic_from_perspector(tri: &Triangle, pi: &HPoint) -> Result<Conic> {
    let b = tri.to_barycentric(pi);
    let scale = b.amax();
    if b.iter().any(|c| c.abs() <= 1e-12 * scale) {
        return Err(GeomError::InvalidParameter("zero barycentric component".into()));
    }
    let (p, q, r) = (b.x, b.y, b.z);
    let mb = Matrix3::new(
        1.0 / (p * p),
        -1.0 / (p * q),
        -1.0 / (r * p),
        -1.0 / (p * q),
        1.0 / (q * q),
        -1.0 / (q * r),
        -1.0 / (r * p),
        -1.0 / (q * r),
        1.0 / (r * r),
    );
    tri.conic_from_barycentric(&mb)
}

pub fn inparabola(tri: &Triangle, spec: &IpSpec) -> Result<Conic> {
    match spec {
        IpSpec::Focus(f) => inparabola_from_focus(tri, f),
        IpSpec::Brianchon(pi) => {
            let steiner = tri.named_conic(NamedConic::SteinerCircumellipse)?;
            let off = steiner.sampson_distance(pi);
            if off > TANGENCY_TOL {
                return Err(GeomError::InvalidParameter(format!(
                    "Brianchon point off the Steiner circumellipse by {off:.3e}"
                )));
            }
            inconic_from_perspector(tri, pi)
        }
    }
}

/// Polar triangle of `tri` with respect to `conic`. Vertex `i` of the result
/// is opposite vertex `i` of `tri`.
pub fn polar_triangle(tri: &Triangle, conic: &Conic, mode: PolarMode) -> Result<Triangle> {
    let pts = match mode {
        PolarMode::Circum => {
            for i in 0..3 {
                if conic.sampson_distance(&tri.vertex(i)) > 1e-8 {
                    return Err(GeomError::InvalidParameter(
                        "conic does not pass through the vertices".into(),
                    ));
                }
            }
            let tangents = [
                conic.polar(&tri.vertex(0))?,
                conic.polar(&tri.vertex(1))?,
                conic.polar(&tri.vertex(2))?,
            ];
            let mut out = [Vector2::zeros(); 3];
            for (i, slot) in out.iter_mut().enumerate() {
                let p = crate::geom::meet(&tangents[(i + 1) % 3], &tangents[(i + 2) % 3])?;
                *slot = p.require_finite()?;
            }
            out
        }
        PolarMode::In => {
            let mut out = [Vector2::zeros(); 3];
            for (i, slot) in out.iter_mut().enumerate() {
                let side = tri.sideline(i);
                if conic.tangency_residual(&side) > 1e-8 {
                    return Err(GeomError::InvalidParameter(
                        "conic is not tangent to the sidelines".into(),
                    ));
                }
                *slot = conic.pole(&side)?.require_finite()?;
            }
            out
        }
    };
    Triangle::from_xy(pts[0], pts[1], pts[2])
}

/// Least-squares perspector of two triangles with corresponding vertices.
#[derive(Debug, Clone, Copy)]
pub struct Perspector {
    pub point: HPoint,
    pub residual: f64,
}

pub fn perspector(t1: &Triangle, t2: &Triangle) -> Result<Perspector> {
    let mut cevians = Vec::with_capacity(3);
    for i in 0..3 {
        cevians.push(join(&t1.vertex(i), &t2.vertex(i))?);
    }
    let c = concurrency_point(&cevians)?;
    if c.max_residual > PERSPECTOR_TOL {
        return Err(GeomError::NotPerspective(c.max_residual));
    }
    Ok(Perspector {
        point: c.point,
        residual: c.max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conics::ConicKind;
    use crate::triangle::CenterId;
    use nalgebra::{DMatrix, Vector3};
    use std::f64::consts::PI;

    fn v(x: f64, y: f64) -> Vector2<f64> {
        Vector2::new(x, y)
    }

    fn scalene() -> Triangle {
        Triangle::from_xy(v(0.0, 0.0), v(4.0, 0.0), v(1.2, 2.7)).unwrap()
    }

    fn right_345() -> Triangle {
        Triangle::from_xy(v(0.0, 0.0), v(4.0, 0.0), v(0.0, 3.0)).unwrap()
    }

    fn equilateral() -> Triangle {
        let p = |k: f64| v((2.0 * PI * k / 3.0).cos(), (2.0 * PI * k / 3.0).sin());
        Triangle::from_xy(p(0.0), p(1.0), p(2.0)).unwrap()
    }

    /// Null vector of the 5×6 monomial matrix: the conic through five points.
    fn conic_through(points: &[Vector2<f64>]) -> Conic {
        let rows: Vec<f64> = points
            .iter()
            .flat_map(|p| [p.x * p.x, p.x * p.y, p.y * p.y, p.x, p.y, 1.0])
            .collect();
        let mut a = DMatrix::from_row_slice(points.len(), 6, &rows);
        // pad to square so the SVD exposes the full right null space
        a = a.resize_vertically(6, 0.0);
        let svd = a.svd(false, true);
        let vt = svd.v_t.unwrap();
        let imin = svd.singular_values.imin();
        let c = vt.row(imin);
        Conic::from_coeffs([c[0], c[1], c[2], c[3], c[4], c[5]]).unwrap()
    }

    #[test]
    fn circumparabolas_pass_through_vertices_and_are_parabolas() {
        for tri in [scalene(), right_345()] {
            for kind in [Conjugation::Isogonal, Conjugation::Isotomic] {
                for k in 0..12 {
                    let spec = CpSpec::at_parameter(&tri, kind, 0.05 + k as f64 * PI / 6.0).unwrap();
                    let cp = circumparabola(&tri, &spec).unwrap();
                    assert_eq!(cp.kind(), ConicKind::Parabola, "{kind:?} {k}");
                    let q = cp.matrix();
                    assert!((q[(0, 0)] * q[(1, 1)] - q[(0, 1)] * q[(1, 0)]).abs() < 1e-9);
                    for i in 0..3 {
                        assert!(cp.sampson_distance(&tri.vertex(i)) < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn circumparabola_matches_five_point_oracle() {
        let tri = right_345();
        let spec = CpSpec::at_parameter(&tri, Conjugation::Isogonal, 1.0).unwrap();
        let cp = circumparabola(&tri, &spec).unwrap();
        // isogonal images of two points of the tangent line lie on the conic
        let line = preimage_tangent(&tri, &spec).unwrap();
        let mut pts: Vec<Vector2<f64>> = tri.vertices().to_vec();
        for s in [0.7, -1.3] {
            let p = HPoint::from_xy(line.anchor() + line.direction() * s);
            pts.push(tri.conjugate(&p, Conjugation::Isogonal).unwrap().xy());
        }
        let oracle = conic_through(&pts);
        assert!(cp.distance(&oracle) < 1e-10, "{}", cp.distance(&oracle));
    }

    #[test]
    fn tangency_at_vertex_is_rejected() {
        let tri = scalene();
        let spec = CpSpec::new(Conjugation::Isogonal, tri.vertex(1));
        assert_eq!(circumparabola(&tri, &spec), Err(GeomError::DegenerateConic));
        let off = CpSpec::new(Conjugation::Isogonal, HPoint::finite(9.0, 9.0));
        assert!(circumparabola(&tri, &off).is_err());
    }

    #[test]
    fn preimage_lines_are_tangent_to_carriers() {
        let tri = scalene();
        let circ = carrier_conic(&tri, Conjugation::Isogonal).unwrap();
        let steiner = carrier_conic(&tri, Conjugation::Isotomic).unwrap();
        for k in 0..10 {
            let spec = CpSpec::at_parameter(&tri, Conjugation::Isogonal, 0.3 + k as f64 * 0.6).unwrap();
            let cp = circumparabola(&tri, &spec).unwrap();
            let iso_g = preimage_line(&tri, &cp, Conjugation::Isogonal).unwrap();
            let iso_t = preimage_line(&tri, &cp, Conjugation::Isotomic).unwrap();
            assert!(iso_g.approx_eq(&preimage_tangent(&tri, &spec).unwrap(), 1e-8));
            assert!(circ.tangency_residual(&iso_g) < 1e-8);
            assert!(steiner.tangency_residual(&iso_t) < 1e-8);
        }
    }

    #[test]
    fn inparabola_from_focus_properties() {
        let tri = scalene();
        let x4 = tri.center(CenterId::X4).unwrap();
        for k in 0..16 {
            let th = 0.2 + k as f64 * 2.0 * PI / 16.0;
            let f = HPoint::from_xy(tri.circumcenter() + tri.circumradius() * v(th.cos(), th.sin()));
            let ip = inparabola_from_focus(&tri, &f).unwrap();
            assert_eq!(ip.kind(), ConicKind::Parabola);
            for side in tri.sidelines() {
                assert!(ip.tangency_residual(&side) < 1e-9);
            }
            let e = ip.parabola_elements().unwrap();
            assert!(e.directrix.incidence(&x4) < 1e-9);
            let ss = tri.simson_steiner(&f).unwrap();
            let foot = crate::geom::foot_of_perpendicular(&f, &ss.simson).unwrap();
            assert!(e.vertex.dist(&foot) < 1e-9);
        }
        assert_eq!(
            inparabola_from_focus(&tri, &tri.vertex(2)),
            Err(GeomError::FocusAtVertex)
        );
    }

    #[test]
    fn centroid_perspector_gives_steiner_inellipse() {
        let tri = scalene();
        let c = inconic_from_perspector(&tri, &tri.center(CenterId::X2).unwrap()).unwrap();
        let s = tri.named_conic(NamedConic::SteinerInellipse).unwrap();
        assert!(c.distance(&s) < 1e-10);
    }

    #[test]
    fn incenter_perspector_gives_incircle() {
        let tri = scalene();
        let [a, b, c] = tri.sides();
        // the Gergonne point [1/(s−a), …] is the perspector of the incircle
        let s = 0.5 * (a + b + c);
        let ge = tri
            .from_barycentric(&Vector3::new(1.0 / (s - a), 1.0 / (s - b), 1.0 / (s - c)))
            .unwrap();
        let conic = inconic_from_perspector(&tri, &ge).unwrap();
        let incircle = Conic::circle(tri.center_xy(CenterId::X1).unwrap(), tri.inradius()).unwrap();
        assert!(conic.distance(&incircle) < 1e-10);
        let x1 = inconic_from_perspector(&tri, &tri.center(CenterId::X1).unwrap()).unwrap();
        for side in tri.sidelines() {
            assert!(x1.tangency_residual(&side) < 1e-9);
        }
    }

    #[test]
    fn brocard_inellipse_has_symmedian_perspector() {
        let tri = scalene();
        let [a, b, c] = tri.sides();
        let x6 = tri.from_barycentric(&Vector3::new(a * a, b * b, c * c)).unwrap();
        let c1 = inconic_from_perspector(&tri, &x6).unwrap();
        let c2 = tri.named_conic(NamedConic::BrocardInellipse).unwrap();
        assert!(c1.distance(&c2) < 1e-10);
    }

    #[test]
    fn perspectors_on_steiner_ellipse_give_parabolas() {
        let tri = scalene();
        let steiner = tri.named_conic(NamedConic::SteinerCircumellipse).unwrap();
        let g = steiner.ellipse_geometry().unwrap();
        for k in 0..12 {
            let pi = HPoint::from_xy(g.point_at(0.1 + k as f64 * PI / 6.0));
            let c = inparabola(&tri, &IpSpec::Brianchon(pi)).unwrap();
            assert_eq!(c.kind(), ConicKind::Parabola);
        }
        // off the Steiner ellipse: not a parabola
        let inside = inconic_from_perspector(&tri, &HPoint::from_xy(g.center + v(0.1, 0.05))).unwrap();
        assert_eq!(inside.kind(), ConicKind::Ellipse);
        let outside = inconic_from_perspector(&tri, &HPoint::from_xy(g.point_at(0.4) * 1.2 - g.center * 0.2)).unwrap();
        assert_ne!(outside.kind(), ConicKind::Parabola);
    }

    #[test]
    fn polar_triangles() {
        let eq = equilateral();
        let circ = eq.named_conic(NamedConic::Circumcircle).unwrap();
        let tangential = polar_triangle(&eq, &circ, PolarMode::Circum).unwrap();
        for i in 0..3 {
            // opposite the vertex at angle 2πi/3, at distance 2 from the center
            let th = 2.0 * PI * i as f64 / 3.0 + PI;
            assert!((tangential.vertices()[i] - 2.0 * v(th.cos(), th.sin())).norm() < 1e-12);
        }
        let tri = scalene();
        let inner = tri.named_conic(NamedConic::SteinerInellipse).unwrap();
        let touch = polar_triangle(&tri, &inner, PolarMode::In).unwrap();
        for i in 0..3 {
            let mid = 0.5 * (tri.vertices()[(i + 1) % 3] + tri.vertices()[(i + 2) % 3]);
            assert!((touch.vertices()[i] - mid).norm() < 1e-12);
        }
        let spec = CpSpec::at_parameter(&tri, Conjugation::Isotomic, 0.9).unwrap();
        let cp = circumparabola(&tri, &spec).unwrap();
        let pol = polar_triangle(&tri, &cp, PolarMode::Circum).unwrap();
        for i in 0..3 {
            let tan = cp.polar(&tri.vertex((i + 1) % 3)).unwrap();
            assert!(tan.incidence(&pol.vertex(i)) < 1e-9);
        }
    }

    #[test]
    fn perspectors() {
        let tri = scalene();
        let inner = tri.named_conic(NamedConic::SteinerInellipse).unwrap();
        let medial = polar_triangle(&tri, &inner, PolarMode::In).unwrap();
        let p = perspector(&tri, &medial).unwrap();
        assert!(p.point.approx_eq(&tri.center(CenterId::X2).unwrap(), 1e-12));

        let steiner = tri.named_conic(NamedConic::SteinerCircumellipse).unwrap();
        let steiner_in = tri.named_conic(NamedConic::SteinerInellipse).unwrap();
        for k in 0..8 {
            let th = 0.3 + k as f64 * PI / 4.0;
            let f = HPoint::from_xy(tri.circumcenter() + tri.circumradius() * v(th.cos(), th.sin()));
            let ip = inparabola_from_focus(&tri, &f).unwrap();
            let touch = polar_triangle(&tri, &ip, PolarMode::In).unwrap();
            let pi = perspector(&tri, &touch).unwrap();
            assert!(steiner.sampson_distance(&pi.point) < 1e-8);
            // reconstructing from the Brianchon point gives back the same parabola
            let again = inconic_from_perspector(&tri, &pi.point).unwrap();
            assert!(again.distance(&ip) < 1e-8);

            let spec = CpSpec::at_parameter(&tri, Conjugation::Isogonal, th).unwrap();
            let cp = circumparabola(&tri, &spec).unwrap();
            let pol = polar_triangle(&tri, &cp, PolarMode::Circum).unwrap();
            let pc = perspector(&tri, &pol).unwrap();
            assert!(steiner_in.sampson_distance(&pc.point) < 1e-8);
        }
        // a rotated copy is not in perspective
        let rot = Triangle::from_xy(v(0.3, 0.1), v(3.9, 0.8), v(0.6, 2.2)).unwrap();
        assert!(matches!(perspector(&tri, &rot), Err(GeomError::NotPerspective(_))));
    }
}
