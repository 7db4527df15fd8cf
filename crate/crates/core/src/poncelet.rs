//! Poncelet triangle families: a closed pair of conics and the tangent-chord
//! stepper that walks triangles around it.

use nalgebra::{Vector2, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conics::{conic_from_center_axes, Conic, EllipseGeometry};
use crate::error::{GeomError, Result};
use crate::geom::{HPoint, EPS};
use crate::triangle::{NamedConic, Triangle};
use crate::triconics::inconic_from_perspector;

/// Grid used to verify closure when a family is built.
pub const CLOSURE_GRID: usize = 32;
/// Largest return error accepted by [`build_family`].
pub const CLOSURE_TOL: f64 = 1e-8;
/// Vertices closer than this make a sample degenerate.
pub const DEGENERATE_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Inellipse,
    Bicentric,
    MacBeath,
    Brocard,
    Homothetic,
    /// Circumcircle of a seed triangle with the inconic of a fixed perspector.
    Generic,
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    /// Unit-free circle of radius `radius` about the origin; caustic semi-axes
    /// `alpha` and `radius − alpha`, major axis along x.
    Inellipse {
        radius: f64,
        alpha: f64,
    },
    /// Circle about the origin and incircle centered at `(d, 0)`.
    Bicentric {
        radius: f64,
        inradius: f64,
    },
    MacBeath {
        seed: Triangle,
    },
    Brocard {
        seed: Triangle,
    },
    Homothetic {
        seed: Triangle,
    },
    /// `perspector` is in barycentrics of the seed and must be interior.
    Generic {
        seed: Triangle,
        perspector: Vector3<f64>,
    },
    Custom {
        outer: Conic,
        inner: Conic,
    },
}

impl FamilySpec {
    pub fn kind(&self) -> FamilyKind {
        match self {
            FamilySpec::Inellipse { .. } => FamilyKind::Inellipse,
            FamilySpec::Bicentric { .. } => FamilyKind::Bicentric,
            FamilySpec::MacBeath { .. } => FamilyKind::MacBeath,
            FamilySpec::Brocard { .. } => FamilyKind::Brocard,
            FamilySpec::Homothetic { .. } => FamilyKind::Homothetic,
            FamilySpec::Generic { .. } => FamilyKind::Generic,
            FamilySpec::Custom { .. } => FamilyKind::Custom,
        }
    }

    pub fn seed(&self) -> Option<&Triangle> {
        match self {
            FamilySpec::MacBeath { seed }
            | FamilySpec::Brocard { seed }
            | FamilySpec::Homothetic { seed }
            | FamilySpec::Generic { seed, .. } => Some(seed),
            _ => None,
        }
    }

    /// Outer and inner conic before closure is checked.
    pub fn conics(&self) -> Result<(Conic, Conic)> {
        match self {
            FamilySpec::Inellipse { radius, alpha } => {
                if !(*radius > 0.0 && *alpha > 0.0 && alpha < radius) {
                    return Err(GeomError::InvalidParameter(format!(
                        "inellipse family needs 0 < alpha < R, got alpha={alpha}, R={radius}"
                    )));
                }
                let outer = Conic::circle(Vector2::zeros(), *radius)?;
                let inner = conic_from_center_axes(Vector2::zeros(), (*alpha, radius - alpha), 0.0)?;
                Ok((outer, inner))
            }
            FamilySpec::Bicentric { radius, inradius } => {
                if !(*radius > 0.0 && *inradius > 0.0 && *inradius <= 0.5 * radius) {
                    return Err(GeomError::InvalidParameter(format!(
                        "bicentric family needs 0 < r <= R/2, got r={inradius}, R={radius}"
                    )));
                }
                let d = bicentric_offset(*radius, *inradius);
                let outer = Conic::circle(Vector2::zeros(), *radius)?;
                let inner = Conic::circle(Vector2::new(d, 0.0), *inradius)?;
                Ok((outer, inner))
            }
            FamilySpec::MacBeath { seed } => {
                require_scalene(seed)?;
                Ok((
                    seed.named_conic(NamedConic::Circumcircle)?,
                    seed.named_conic(NamedConic::MacbeathInellipse)?,
                ))
            }
            FamilySpec::Brocard { seed } => {
                require_scalene(seed)?;
                Ok((
                    seed.named_conic(NamedConic::Circumcircle)?,
                    seed.named_conic(NamedConic::BrocardInellipse)?,
                ))
            }
            FamilySpec::Homothetic { seed } => Ok((
                seed.named_conic(NamedConic::SteinerCircumellipse)?,
                seed.named_conic(NamedConic::SteinerInellipse)?,
            )),
            FamilySpec::Generic { seed, perspector } => {
                if perspector.iter().any(|c| *c <= 0.0) {
                    return Err(GeomError::InvalidParameter(
                        "generic family needs an interior perspector".into(),
                    ));
                }
                let pi = seed.from_barycentric(perspector)?;
                Ok((
                    seed.named_conic(NamedConic::Circumcircle)?,
                    inconic_from_perspector(seed, &pi)?,
                ))
            }
            FamilySpec::Custom { outer, inner } => Ok((*outer, *inner)),
        }
    }
}

/// `d = sqrt(R (R − 2r))`.
pub fn bicentric_offset(radius: f64, inradius: f64) -> f64 {
    (radius * (radius - 2.0 * inradius)).max(0.0).sqrt()
}

fn require_scalene(seed: &Triangle) -> Result<()> {
    let [a, b, c] = seed.sides();
    let scale = a.max(b).max(c);
    if (a - b).abs() < 1e-9 * scale || (b - c).abs() < 1e-9 * scale || (c - a).abs() < 1e-9 * scale {
        return Err(GeomError::InvalidParameter("seed triangle must be scalene".into()));
    }
    Ok(())
}

/// A verified Poncelet pair. Immutable once built.
#[derive(Debug, Clone)]
pub struct Family {
    spec: FamilySpec,
    outer: Conic,
    inner: Conic,
    outer_geom: EllipseGeometry,
    inner_geom: EllipseGeometry,
    circle_outer: bool,
    closure_error: f64,
}

/// One triangle of a family.
#[derive(Debug, Clone, Copy)]
pub struct FamilyTriangle {
    pub t: f64,
    pub triangle: Triangle,
    /// `|next_vertex(P₃) − P₁|`.
    pub closure: f64,
    /// Two vertices within [`DEGENERATE_GAP`].
    pub degenerate: bool,
}

pub fn build_family(spec: FamilySpec) -> Result<Family> {
    let (outer, inner) = spec.conics()?;
    let outer_geom = outer.ellipse_geometry()?;
    let inner_geom = inner.ellipse_geometry()?;
    let circle_outer = (1.0 - outer_geom.axis_ratio()).abs() < 1e-12;
    let inside = outer.algebraic(&HPoint::from_xy(outer_geom.center)).signum();
    for k in 0..64 {
        let p = HPoint::from_xy(inner_geom.point_at(k as f64 * std::f64::consts::TAU / 64.0));
        if outer.algebraic(&p).signum() != inside || outer.sampson_distance(&p) < EPS {
            return Err(GeomError::InvalidParameter(
                "caustic is not inside the outer conic".into(),
            ));
        }
    }
    let mut fam = Family {
        spec,
        outer,
        inner,
        outer_geom,
        inner_geom,
        circle_outer,
        closure_error: 0.0,
    };
    let mut worst: f64 = 0.0;
    for k in 0..CLOSURE_GRID {
        let t = k as f64 * std::f64::consts::TAU / CLOSURE_GRID as f64;
        worst = worst.max(fam.return_error(t)?);
    }
    if !(worst < CLOSURE_TOL) {
        return Err(GeomError::PonceletViolated(worst));
    }
    fam.closure_error = worst;
    Ok(fam)
}

impl Family {
    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn kind(&self) -> FamilyKind {
        self.spec.kind()
    }

    pub fn outer(&self) -> &Conic {
        &self.outer
    }

    pub fn inner(&self) -> &Conic {
        &self.inner
    }

    pub fn outer_geometry(&self) -> &EllipseGeometry {
        &self.outer_geom
    }

    pub fn inner_geometry(&self) -> &EllipseGeometry {
        &self.inner_geom
    }

    pub fn closure_error(&self) -> f64 {
        self.closure_error
    }

    pub fn is_circle_inscribed(&self) -> bool {
        self.circle_outer
    }

    /// Foci of the caustic; equal for a circular caustic.
    pub fn caustic_foci(&self) -> (Vector2<f64>, Vector2<f64>) {
        self.inner_geom.foci()
    }

    /// Point of the outer conic at parameter `t`: polar angle about the
    /// center for a circle, principal-axes parameter for an ellipse.
    pub fn outer_point(&self, t: f64) -> Vector2<f64> {
        let g = &self.outer_geom;
        if self.circle_outer {
            g.center + g.semi_major * Vector2::new(t.cos(), t.sin())
        } else {
            g.point_at(t)
        }
    }

    /// Tangent-chord step from `p` on the outer conic. Orientation `+1` takes
    /// the tangent whose contact point lies counterclockwise of `p` about the
    /// caustic center.
    pub fn next_vertex(&self, p: &HPoint, orientation: i8) -> Result<HPoint> {
        let off = self.outer.sampson_distance(p);
        if !(off < EPS) {
            return Err(GeomError::OffOuterConic(off));
        }
        let c = self.inner_geom.center;
        let pv = p.xy();
        let tangents = self.inner.tangents_from_point(p)?;
        let want = if orientation >= 0 { 1.0 } else { -1.0 };
        let tangent = tangents
            .iter()
            .find(|tg| {
                let touch = tg.touch.xy();
                (pv - c).perp(&(touch - c)) * want > 0.0
            })
            .ok_or(GeomError::DegenerateJoinMeet)?;
        let dir = tangent.touch.xy() - pv;
        let m = self.outer.matrix();
        let ph = Vector3::new(pv.x, pv.y, 1.0);
        let d = Vector3::new(dir.x, dir.y, 0.0);
        let dmd = d.dot(&(m * d));
        if dmd.abs() < 1e-300 {
            return Err(GeomError::DegenerateJoinMeet);
        }
        let s = -2.0 * ph.dot(&(m * d)) / dmd;
        Ok(HPoint::from_xy(pv + dir * s))
    }

    fn return_error(&self, t: f64) -> Result<f64> {
        let p1 = HPoint::from_xy(self.outer_point(t));
        let p2 = self.next_vertex(&p1, 1)?;
        let p3 = self.next_vertex(&p2, 1)?;
        let p4 = self.next_vertex(&p3, 1)?;
        Ok(p4.dist(&p1))
    }

    pub fn triangle_at(&self, t: f64) -> Result<FamilyTriangle> {
        let p1 = HPoint::from_xy(self.outer_point(t));
        let p2 = self.next_vertex(&p1, 1)?;
        let p3 = self.next_vertex(&p2, 1)?;
        let p4 = self.next_vertex(&p3, 1)?;
        let v = [p1.xy(), p2.xy(), p3.xy()];
        let gap = (v[0] - v[1]).norm().min((v[1] - v[2]).norm()).min((v[2] - v[0]).norm());
        let triangle = Triangle::from_xy(v[0], v[1], v[2])?;
        Ok(FamilyTriangle {
            t,
            triangle,
            closure: p4.dist(&p1),
            degenerate: gap < DEGENERATE_GAP,
        })
    }

    /// Point on the outer circle at polar angle `angle` about its center.
    pub fn circle_point(&self, angle: f64) -> Result<HPoint> {
        if !self.circle_outer {
            return Err(GeomError::NotCircleInscribed);
        }
        let g = &self.outer_geom;
        Ok(HPoint::from_xy(
            g.center + g.semi_major * Vector2::new(angle.cos(), angle.sin()),
        ))
    }
}

pub fn next_vertex(fam: &Family, p: &HPoint, orientation: i8) -> Result<HPoint> {
    fam.next_vertex(p, orientation)
}

pub fn triangle_at(fam: &Family, t: f64) -> Result<FamilyTriangle> {
    fam.triangle_at(t)
}

/// Similarity taking the outer circle to the unit circle and the point at
/// polar angle `f_angle` to 1.
#[derive(Debug, Clone, Copy)]
pub struct UnitFrame {
    center: Vector2<f64>,
    /// `R·e^{iφ}`
    scale: Complex64,
}

impl UnitFrame {
    pub fn new(fam: &Family, f_angle: f64) -> Result<Self> {
        if !fam.circle_outer {
            return Err(GeomError::NotCircleInscribed);
        }
        Ok(Self {
            center: fam.outer_geom.center,
            scale: Complex64::from_polar(fam.outer_geom.semi_major, f_angle),
        })
    }

    pub fn to_unit(&self, p: Vector2<f64>) -> Complex64 {
        Complex64::new(p.x - self.center.x, p.y - self.center.y) / self.scale
    }

    pub fn from_unit(&self, z: Complex64) -> Vector2<f64> {
        let w = z * self.scale;
        Vector2::new(w.re + self.center.x, w.im + self.center.y)
    }

    pub fn scale_length(&self, r: f64) -> f64 {
        r * self.scale.norm()
    }
}

/// `k = f₁ + f₂ − f₁f₂` of the caustic foci in the unit frame.
pub fn focal_invariant(fam: &Family, f_angle: f64) -> Result<Complex64> {
    let frame = UnitFrame::new(fam, f_angle)?;
    let (g1, g2) = fam.caustic_foci();
    let (f1, f2) = (frame.to_unit(g1), frame.to_unit(g2));
    Ok(f1 + f2 - f1 * f2)
}

fn unit_vertex_product(fam: &Family, frame: &UnitFrame, t: f64) -> Result<Complex64> {
    let tri = fam.triangle_at(t)?.triangle;
    Ok(tri.vertices().iter().map(|v| frame.to_unit(*v)).product())
}

/// Vertex of the inparabola with focus at polar angle `f_angle` on the outer
/// circle, from the vertex product of the triangle at `t`:
/// `V = (3 + k + (1 − k̄)·abc) / 4` in the unit frame.
pub fn vertex_formula_oracle(fam: &Family, f_angle: f64, t: f64) -> Result<HPoint> {
    let frame = UnitFrame::new(fam, f_angle)?;
    let k = focal_invariant(fam, f_angle)?;
    let abc = unit_vertex_product(fam, &frame, t)?;
    let v = (3.0 + k + (1.0 - k.conj()) * abc) / 4.0;
    Ok(HPoint::from_xy(frame.from_unit(v)))
}

/// The closed form `V = (1 + k − k̄·abc) / 2`. It does not reproduce the
/// constructed vertex; kept so the discrepancy can be measured.
pub fn printed_vertex_formula(fam: &Family, f_angle: f64, t: f64) -> Result<HPoint> {
    let frame = UnitFrame::new(fam, f_angle)?;
    let k = focal_invariant(fam, f_angle)?;
    let abc = unit_vertex_product(fam, &frame, t)?;
    let v = (1.0 + k - k.conj() * abc) / 2.0;
    Ok(HPoint::from_xy(frame.from_unit(v)))
}

/// Circle traced by a formula as `abc` runs over the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedCircle {
    pub center: Vector2<f64>,
    pub radius: f64,
}

/// Vertex locus implied by [`vertex_formula_oracle`]: center `(3 + k)/4`,
/// radius `|1 − k|/4`; it always passes through the focus.
pub fn predicted_vertex_circle(fam: &Family, f_angle: f64) -> Result<PredictedCircle> {
    let frame = UnitFrame::new(fam, f_angle)?;
    let k = focal_invariant(fam, f_angle)?;
    Ok(PredictedCircle {
        center: frame.from_unit((3.0 + k) / 4.0),
        radius: frame.scale_length((1.0 - k).norm() / 4.0),
    })
}

/// Vertex locus implied by [`printed_vertex_formula`]: center `(1 + k)/2`,
/// radius `|k|/2`.
pub fn printed_vertex_circle(fam: &Family, f_angle: f64) -> Result<PredictedCircle> {
    let frame = UnitFrame::new(fam, f_angle)?;
    let k = focal_invariant(fam, f_angle)?;
    Ok(PredictedCircle {
        center: frame.from_unit((1.0 + k) / 2.0),
        radius: frame.scale_length(k.norm() / 2.0),
    })
}
