//! Inparabola experiments E14 to E23.

use std::f64::consts::TAU;

use nalgebra::Vector2;
use num_complex::Complex64;

use super::circum::axis_ratio_claim;
use super::*;
use crate::conics::EllipseGeometry;
use crate::fit::{axis_aligned, common_point, concentric, conics_tangent_at, fit_circle, fit_conic, point_on_conic};
use crate::geom::join;
use crate::poncelet::{predicted_vertex_circle, printed_vertex_formula, vertex_formula_oracle, UnitFrame};
use crate::triangle::Conjugation;
use crate::triconics::{inparabola, inparabola_from_focus, perspector, polar_triangle, IpSpec, PolarMode};

/// Samples with a vertex this close to the focus (or Brianchon point) are
/// dropped, relative to the outer semi-major axis.
const IP_VERTEX_GAP: f64 = 2e-3;
/// Fitted circle against the closed-form prediction.
const PREDICTION_TOL: f64 = 1e-8;
/// Isogonal-conjugate line and its tangency point.
const CONJUGATE_LINE_TOL: f64 = 1e-7;
/// Anchors for the envelope of the X3' lines over all foci.
const X3P_ENVELOPE_ANCHORS: usize = 720;
/// Triangles per X3' line.
const X3P_SAMPLES: usize = 24;
/// Negative claim factor: a non-conic locus must miss the best conic by this
/// many direct-fit thresholds.
const NOT_A_CONIC_FACTOR: f64 = 10.0;

pub(super) fn ip(s: &FamilyTriangle, fam: &Family, f: Vector2<f64>) -> Option<Conic> {
    if near_vertex(&s.triangle, f, IP_VERTEX_GAP * fam.outer_geometry().semi_major) {
        return None;
    }
    inparabola_from_focus(&s.triangle, &HPoint::from_xy(f)).ok()
}

pub(super) fn vertex(s: &FamilyTriangle, fam: &Family, f: Vector2<f64>) -> Option<Vector2<f64>> {
    ip(s, fam, f)?.parabola_elements().ok().map(|e| e.vertex.xy())
}

fn directrix_foot(s: &FamilyTriangle, fam: &Family, f: Vector2<f64>) -> Option<Vector2<f64>> {
    ip(s, fam, f)?.parabola_elements().ok().map(|e| e.directrix_foot().xy())
}

pub(super) fn directrix(s: &FamilyTriangle, fam: &Family, f: Vector2<f64>) -> Option<HLine> {
    ip(s, fam, f)?.parabola_elements().ok().map(|e| e.directrix)
}

pub(super) fn simson(s: &FamilyTriangle, fam: &Family, f: Vector2<f64>) -> Option<HLine> {
    if near_vertex(&s.triangle, f, IP_VERTEX_GAP * fam.outer_geometry().semi_major) {
        return None;
    }
    s.triangle.simson_steiner(&HPoint::from_xy(f)).ok().map(|ss| ss.simson)
}

fn touch_triangle(s: &FamilyTriangle, c: &Conic) -> Option<Triangle> {
    polar_triangle(&s.triangle, c, PolarMode::In).ok()
}

fn brianchon(s: &FamilyTriangle, fam: &Family, f: Vector2<f64>) -> Option<Vector2<f64>> {
    let c = ip(s, fam, f)?;
    let t = touch_triangle(s, &c)?;
    perspector(&s.triangle, &t).ok()?.point.require_finite().ok()
}

fn touch_circumcenter(s: &FamilyTriangle, fam: &Family, f: Vector2<f64>) -> Option<Vector2<f64>> {
    let c = ip(s, fam, f)?;
    Some(touch_triangle(s, &c)?.circumcenter())
}

pub(super) type Feature = fn(&FamilyTriangle, &Family, Vector2<f64>) -> Option<Vector2<f64>>;

pub(super) fn locus(ctx: &mut Ctx, fam: &Family, f: Vector2<f64>, n: usize, g: Feature) -> Vec<(f64, Vector2<f64>)> {
    ctx.sweep(fam, n, |s| g(s, fam, f))
}

/// The vertex circle of a fixed focus and the points derived from it.
struct FocusFrame {
    f: Vector2<f64>,
    /// Center of the vertex circle.
    o: Vector2<f64>,
    rho: f64,
    /// Antipode of `f` on the vertex circle.
    u: Vector2<f64>,
    /// Reflection of `f` in `u`.
    w: Vector2<f64>,
    fit: FitReport,
    vertices: Vec<(f64, Vector2<f64>)>,
}

fn focus_frame(ctx: &mut Ctx, fam: &Family, a: f64, n: usize) -> Option<FocusFrame> {
    let f = fam.outer_point(a);
    let vertices = locus(ctx, fam, f, n, vertex);
    let fit = fit_circle(&just_points(&vertices)).ok()?;
    let (o, rho) = fit.circle()?;
    let u = 2.0 * o - f;
    Some(FocusFrame {
        f,
        o,
        rho,
        u,
        w: 2.0 * u - f,
        fit,
        vertices,
    })
}

fn frame_or_fail(ctx: &mut Ctx, fam: &Family, a: f64, n: usize) -> Option<FocusFrame> {
    let fr = focus_frame(ctx, fam, a, n);
    if fr.is_none() {
        ctx.value_claim("vertex circle fit", f64::INFINITY, ctx.direct_tol());
    }
    fr
}

/// Vertex circle, directrix-foot circle and the two pencils at the primary focus.
fn fixed_focus_claims(ctx: &mut Ctx, fam: &Family, label: &str, n_pencil: usize) -> Option<FocusFrame> {
    let tol = ctx.direct_tol();
    let n = ctx.n_t();
    let fr = frame_or_fail(ctx, fam, PRIMARY_ANCHOR, n)?;
    let v = ladder(&just_points(&fr.vertices), tol);
    ctx.fit_claim(&format!("{label}vertex locus is a circle"), &v, &[Model::Circle], tol);
    axis_ratio_claim(
        ctx,
        &format!("{label}vertex locus conic axis ratio"),
        &just_points(&fr.vertices),
    );
    ctx.value_claim(
        &format!("{label}vertex circle passes through F"),
        ((fr.f - fr.o).norm() - fr.rho).abs(),
        SHAPE_TOL,
    );
    let feet = locus(ctx, fam, fr.f, n, directrix_foot);
    let c = ladder(&just_points(&feet), tol);
    ctx.fit_claim(
        &format!("{label}directrix-foot locus is a circle"),
        &c,
        &[Model::Circle],
        tol,
    );
    let (cc, cr) = c.circle().unwrap_or((Vector2::repeat(f64::INFINITY), f64::INFINITY));
    ctx.value_claim(
        &format!("{label}directrix-foot circle centered at U"),
        (cc - fr.u).norm(),
        SHAPE_TOL,
    );
    ctx.value_claim(
        &format!("{label}directrix-foot circle radius 2 rho"),
        (cr - 2.0 * fr.rho).abs(),
        SHAPE_TOL,
    );

    let dirs = ctx.sweep(fam, n_pencil, |s| directrix(s, fam, fr.f));
    let simsons = ctx.sweep(fam, n_pencil, |s| simson(s, fam, fr.f));
    pencil_claim(ctx, &format!("{label}directrices pass through W"), &dirs, fr.w);
    pencil_claim(ctx, &format!("{label}Simson lines pass through U"), &simsons, fr.u);

    ctx.points(&format!("{label}vertex"), &fr.vertices);
    ctx.points(&format!("{label}directrix_foot"), &feet);
    ctx.lines(&format!("{label}directrix"), &dirs);
    ctx.lines(&format!("{label}simson"), &simsons);
    ctx.plot_model(&v);
    ctx.plot_model(&c);
    ctx.marker(fr.f);
    ctx.marker(fr.u);
    ctx.marker(fr.w);
    Some(fr)
}

/// Common point of a pencil within the point-envelope tolerance of `expected`.
fn pencil_claim(ctx: &mut Ctx, name: &str, lines: &[(f64, HLine)], expected: Vector2<f64>) {
    let r = common_point(&just_points(lines)).unwrap_or_else(|_| FitReport::none(lines.len()));
    let mut s = Subclaim {
        name: name.into(),
        model: Some(r.model),
        params: Some(r.params.clone()),
        rms: r.rms_residual,
        max: r.max_residual,
        threshold: COMMON_POINT_TOL,
        pass: false,
    };
    let off = r.point().map_or(f64::INFINITY, |p| (p - expected).norm());
    s.max = s.max.max(off);
    s.pass = r.model == Model::Point && s.max < COMMON_POINT_TOL;
    ctx.push(s);
}

/// Vertex-circle frames over the anchor grid.
fn over_foci(ctx: &mut Ctx, fam: &Family) -> Vec<FocusFrame> {
    let n = ctx.n_t();
    let mut out = Vec::new();
    let anchors = anchor_grid(ctx.n_a());
    let total = anchors.len();
    for a in anchors {
        if let Some(fr) = focus_frame(ctx, fam, a, n) {
            out.push(fr);
        }
    }
    if out.len() < total {
        ctx.note(format!(
            "{} of {} foci without a vertex circle",
            total - out.len(),
            total
        ));
    }
    out
}

fn indexed(pts: impl IntoIterator<Item = Vector2<f64>>) -> Vec<(f64, Vector2<f64>)> {
    pts.into_iter().enumerate().map(|(i, p)| (i as f64, p)).collect()
}

fn geometry(r: &FitReport) -> Option<EllipseGeometry> {
    r.conic()?.ellipse_geometry().ok()
}

fn dist_to_line(p: Vector2<f64>, a: Vector2<f64>, b: Vector2<f64>) -> f64 {
    join(&HPoint::from_xy(a), &HPoint::from_xy(b)).map_or(f64::INFINITY, |l| l.signed_dist(p).abs())
}

fn dir_sin(u: Vector2<f64>, v: Vector2<f64>) -> f64 {
    (u.perp(&v) / (u.norm() * v.norm())).abs()
}

pub(crate) fn e14(ctx: &mut Ctx) -> Result<()> {
    let fam = ctx.family(FamilyKind::Inellipse)?;
    let tol = ctx.direct_tol();
    let n = ctx.n_t();
    let mut fits = Vec::new();
    let mut tangency = Vec::new();
    let mut through_f = Vec::new();
    let mut anchors = anchor_grid(ctx.n_a());
    anchors.push(PRIMARY_ANCHOR);
    let mut primary = None;
    for a in anchors {
        let Some(fr) = frame_or_fail(ctx, &fam, a, n) else {
            continue;
        };
        fits.push(ladder(&just_points(&fr.vertices), tol));
        through_f.push(((fr.f - fr.o).norm() - fr.rho).abs());
        let circle = Conic::circle(fr.o, fr.rho)?;
        tangency.push(point_on_conic(fr.u, fam.inner(), SHAPE_TOL).residual);
        tangency.push(conics_tangent_at(&circle, fam.inner(), fr.u, SHAPE_TOL).residual);
        if a == PRIMARY_ANCHOR {
            primary = Some(fr);
        }
    }
    ctx.worst_fit_claim("vertex locus is a circle at every focus", &fits, &[Model::Circle], tol);
    ctx.residual_claim("vertex circle passes through F", &through_f, SHAPE_TOL);
    ctx.residual_claim("vertex circle touches the caustic at U", &tangency, SHAPE_TOL);
    ctx.plot_family(&fam, 4);
    if let Some(fr) = primary {
        axis_ratio_claim(ctx, "vertex locus conic axis ratio", &just_points(&fr.vertices));
        ctx.points("vertex", &fr.vertices);
        ctx.plot_model(&fr.fit);
        ctx.marker(fr.f);
        ctx.marker(fr.u);
    }
    Ok(())
}

pub(crate) fn e15(ctx: &mut Ctx) -> Result<()> {
    let fam = ctx.family(FamilyKind::Inellipse)?;
    let tol = ctx.direct_tol();
    let n = ctx.n_t();
    let Some(fr) = frame_or_fail(ctx, &fam, PRIMARY_ANCHOR, n) else {
        return Ok(());
    };
    let feet = locus(ctx, &fam, fr.f, n, directrix_foot);
    let c = ladder(&just_points(&feet), tol);
    ctx.fit_claim("directrix-foot locus is a circle", &c, &[Model::Circle], tol);
    axis_ratio_claim(ctx, "directrix-foot locus conic axis ratio", &just_points(&feet));
    let (cc, cr) = c.circle().unwrap_or((Vector2::repeat(f64::INFINITY), f64::INFINITY));
    ctx.value_claim("directrix-foot circle centered at U", (cc - fr.u).norm(), SHAPE_TOL);
    ctx.value_claim(
        "directrix-foot circle radius 2 rho",
        (cr - 2.0 * fr.rho).abs(),
        SHAPE_TOL,
    );
    ctx.plot_family(&fam, 4);
    ctx.points("vertex", &fr.vertices);
    ctx.points("directrix_foot", &feet);
    ctx.plot_model(&fr.fit);
    ctx.plot_model(&c);
    ctx.marker(fr.f);
    ctx.marker(fr.u);
    Ok(())
}

pub(crate) fn e16(ctx: &mut Ctx) -> Result<()> {
    let fam = ctx.family(FamilyKind::Inellipse)?;
    let n = ctx.n_t();
    let Some(fr) = frame_or_fail(ctx, &fam, PRIMARY_ANCHOR, n.min(360)) else {
        return Ok(());
    };
    let dirs = ctx.sweep(&fam, n, |s| directrix(s, &fam, fr.f));
    let simsons = ctx.sweep(&fam, n, |s| simson(s, &fam, fr.f));
    pencil_claim(ctx, "directrices pass through W", &dirs, fr.w);
    pencil_claim(ctx, "Simson lines pass through U", &simsons, fr.u);
    ctx.plot_family(&fam, 4);
    ctx.lines("directrix", &dirs);
    ctx.lines("simson", &simsons);
    ctx.marker(fr.f);
    ctx.marker(fr.u);
    ctx.marker(fr.w);
    Ok(())
}

pub(crate) fn e17(ctx: &mut Ctx) -> Result<()> {
    let fam = ctx.family(FamilyKind::Inellipse)?;
    let tol = ctx.direct_tol();
    let frames = over_foci(ctx, &fam);
    let caustic = *fam.inner();
    let outer_center = fam.outer_geometry().center;
    let us: Vec<Vector2<f64>> = frames.iter().map(|f| f.u).collect();
    let os: Vec<Vector2<f64>> = frames.iter().map(|f| f.o).collect();
    let ws: Vec<Vector2<f64>> = frames.iter().map(|f| f.w).collect();

    let on: Vec<f64> = us
        .iter()
        .map(|u| point_on_conic(*u, &caustic, SHAPE_TOL).residual)
        .collect();
    ctx.residual_claim("U runs on the caustic", &on, SHAPE_TOL);

    let o = ladder(&os, tol);
    ctx.fit_claim("O locus is an ellipse", &o, &[Model::Ellipse], tol);
    let oc = o.conic();
    let res = oc.map_or([f64::INFINITY; 2], |c| {
        [
            concentric(&c, &caustic, SHAPE_TOL).residual,
            axis_aligned(&c, &caustic, SHAPE_TOL).residual,
        ]
    });
    ctx.residual_claim(
        "O ellipse concentric and axis-aligned with the caustic",
        &res,
        SHAPE_TOL,
    );

    let w = ladder(&ws, tol);
    ctx.fit_claim("W locus is a circle", &w, &[Model::Circle], tol);
    axis_ratio_claim(ctx, "W locus conic axis ratio", &ws);
    let wc = w.circle().map_or(f64::INFINITY, |(c, _)| (c - outer_center).norm());
    ctx.value_claim("W circle concentric with the Poncelet pair", wc, SHAPE_TOL);

    ctx.plot_family(&fam, 3);
    ctx.points("U", &indexed(us));
    ctx.points("O", &indexed(os));
    ctx.points("W", &indexed(ws));
    ctx.plot_model(&o);
    ctx.plot_model(&w);
    Ok(())
}

pub(crate) fn e18(ctx: &mut Ctx) -> Result<()> {
    let fam = ctx.family(FamilyKind::Bicentric)?;
    let tol = ctx.direct_tol();
    ctx.plot_family(&fam, 3);
    let n = ctx.n_t();
    fixed_focus_claims(ctx, &fam, "", 2 * n);
    let x3 = fam.outer_geometry().center;
    let x1 = fam.inner_geometry().center;
    let x1385 = 0.5 * (x1 + x3);
    let axis = x1 - x3;
    let frames = over_foci(ctx, &fam);
    let os: Vec<Vector2<f64>> = frames.iter().map(|f| f.o).collect();
    let us: Vec<Vector2<f64>> = frames.iter().map(|f| f.u).collect();
    let ws: Vec<Vector2<f64>> = frames.iter().map(|f| f.w).collect();

    let o = ladder(&os, tol);
    ctx.fit_claim("O locus is an ellipse", &o, &[Model::Ellipse], tol);
    let res = geometry(&o).map_or([f64::INFINITY; 2], |g| {
        [(g.center - x1385).norm(), dir_sin(g.minor_dir(), axis)]
    });
    ctx.residual_claim("O ellipse centered at X1385 with minor axis on X1X3", &res, SHAPE_TOL);

    let u = ladder(&us, tol);
    ctx.fit_claim("U locus is an ellipse", &u, &[Model::Ellipse], tol);
    let res = match (geometry(&u), u.conic()) {
        (Some(g), Some(c)) => {
            let mut r = vec![(g.center - x1).norm(), dir_sin(g.minor_dir(), axis)];
            for s in [1.0, -1.0] {
                let p = g.center + s * g.semi_minor * g.minor_dir();
                r.push(conics_tangent_at(&c, fam.inner(), p, SHAPE_TOL).residual);
            }
            r
        }
        _ => vec![f64::INFINITY],
    };
    ctx.residual_claim(
        "U ellipse centered at X1, minor axis on X1X3, touching the caustic at its co-vertices",
        &res,
        SHAPE_TOL,
    );

    let w = ladder(&ws, tol);
    ctx.fit_claim("W locus is a circle", &w, &[Model::Circle], tol);
    axis_ratio_claim(ctx, "W locus conic axis ratio", &ws);
    let wc = w.circle().map_or(f64::INFINITY, |(c, _)| dist_to_line(c, x1, x3));
    ctx.value_claim("W circle centered on X1X3", wc, SHAPE_TOL);

    ctx.points("O", &indexed(os));
    ctx.points("U", &indexed(us));
    ctx.points("W", &indexed(ws));
    ctx.plot_model(&o);
    ctx.plot_model(&u);
    ctx.plot_model(&w);
    Ok(())
}

/// Center, semi-axes and focal points of a central conic, from the fit.
struct Central {
    center: Vector2<f64>,
    /// Unit direction of the focal axis.
    focal_dir: Vector2<f64>,
    foci: [Vector2<f64>; 2],
}

fn central(c: &Conic) -> Option<Central> {
    if let Ok(g) = c.ellipse_geometry() {
        let (f1, f2) = g.foci();
        return Some(Central {
            center: g.center,
            focal_dir: g.major_dir(),
            foci: [f1, f2],
        });
    }
    // hyperbola: diagonalize the quadratic part about the center
    let center = c.center().ok()?.require_finite().ok()?;
    let m = c.matrix();
    let q = nalgebra::Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let k = c.algebraic(&HPoint::from_xy(center));
    let eig = nalgebra::SymmetricEigen::new(q / -k);
    let (l0, l1) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    if l0 * l1 >= 0.0 {
        return None;
    }
    // x²/a² − y²/b² = 1 along the eigenvector with positive eigenvalue
    let (ip, ineg) = if l0 > 0.0 { (0, 1) } else { (1, 0) };
    let dir = eig.eigenvectors.column(ip).into_owned();
    let a2 = 1.0 / eig.eigenvalues[ip];
    let b2 = -1.0 / eig.eigenvalues[ineg];
    let e = (a2 + b2).sqrt();
    Some(Central {
        center,
        focal_dir: dir,
        foci: [center + e * dir, center - e * dir],
    })
}

pub(crate) fn e19(ctx: &mut Ctx) -> Result<()> {
    let fam = ctx.family(FamilyKind::MacBeath)?;
    let tol = ctx.direct_tol();
    let n = ctx.n_t();
    ctx.plot_family(&fam, 3);
    let caustic = *fam.inner();
    let cg = *fam.inner_geometry();
    let x3 = fam.outer_geometry().center;
    let x5 = cg.center;
    let x4 = 2.0 * x5 - x3;
    let x140 = 0.5 * (x3 + x5);

    if let Some(fr) = fixed_focus_claims(ctx, &fam, "", 2 * n) {
        ctx.value_claim("directrix common point is X4", (fr.w - x4).norm(), COMMON_POINT_TOL);
    }
    let dirs = ctx.sweep(&fam, 2 * n, |s| directrix(s, &fam, fam.outer_point(PRIMARY_ANCHOR)));
    pencil_claim(ctx, "directrices pass through X4", &dirs, x4);

    let frames = over_foci(ctx, &fam);
    let os: Vec<Vector2<f64>> = frames.iter().map(|f| f.o).collect();
    let us: Vec<Vector2<f64>> = frames.iter().map(|f| f.u).collect();
    let o = ladder(&os, tol);
    ctx.fit_claim("O locus is a circle", &o, &[Model::Circle], tol);
    axis_ratio_claim(ctx, "O locus conic axis ratio", &os);
    let oc = o.circle().map_or(f64::INFINITY, |(c, _)| (c - x140).norm());
    ctx.value_claim("O circle centered at X140", oc, SHAPE_TOL);

    let u = ladder(&us, tol);
    ctx.fit_claim("U locus is a circle", &u, &[Model::Circle], tol);
    axis_ratio_claim(ctx, "U locus conic axis ratio", &us);
    let res = match (u.circle(), u.conic()) {
        (Some((c, _)), Some(uc)) => {
            let mut r = vec![(c - x5).norm()];
            for s in [1.0, -1.0] {
                let p = x5 + s * cg.semi_major * cg.major_dir();
                r.push(conics_tangent_at(&uc, &caustic, p, SHAPE_TOL).residual);
            }
            r
        }
        _ => vec![f64::INFINITY],
    };
    ctx.residual_claim(
        "U circle centered at X5, touching the caustic at its vertices",
        &res,
        SHAPE_TOL,
    );

    // circumcenter of the touchpoint triangle
    let mut x3p_fits = Vec::new();
    for a in anchor_grid(ctx.n_a()) {
        let f = fam.outer_point(a);
        x3p_fits.push(ladder(&just_points(&locus(ctx, &fam, f, n, touch_circumcenter)), tol));
    }
    ctx.worst_fit_claim("X3' locus is a line at every focus", &x3p_fits, &[Model::Line], tol);
    let env_lines: Vec<(f64, HLine)> = t_grid(X3P_ENVELOPE_ANCHORS)
        .into_iter()
        .filter_map(|a| {
            let f = fam.outer_point(a);
            let pts = locus(ctx, &fam, f, X3P_SAMPLES, touch_circumcenter);
            crate::fit::fit_line(&just_points(&pts)).ok()?.line().map(|l| (a, l))
        })
        .collect();
    let (env, discarded) = envelope_of(
        &env_lines,
        TAU / X3P_ENVELOPE_ANCHORS as f64,
        x3,
        20.0 * fam.outer_geometry().semi_major,
    );
    if discarded > 0 {
        ctx.note(format!("{discarded} X3' envelope points discarded"));
    }
    let er = fit_conic(&env).unwrap_or_else(|_| FitReport::none(env.len()));
    ctx.fit_claim(
        "X3' lines envelop a conic over all foci",
        &er,
        &[Model::Ellipse, Model::Hyperbola],
        ENVELOPE_TOL,
    );
    let res = er.conic().as_ref().and_then(central).map_or(vec![f64::INFINITY], |c| {
        vec![
            dist_to_line(c.center, x3, x5),
            dir_sin(c.focal_dir, cg.major_dir()),
            c.foci.iter().map(|f| (f - x5).norm()).fold(f64::INFINITY, f64::min),
        ]
    });
    ctx.residual_claim(
        "X3' envelope on the caustic major axis with a focus at X5",
        &res,
        ENVELOPE_PREDICATE_TOL,
    );

    let f = fam.outer_point(PRIMARY_ANCHOR);
    let pi = locus(ctx, &fam, f, n, brianchon);
    let pr = ladder(&just_points(&pi), tol);
    ctx.fit_claim("Brianchon locus is an ellipse", &pr, &[Model::Ellipse], tol);
    let mut centers = Vec::new();
    for a in anchor_grid(ctx.n_a()) {
        let f = fam.outer_point(a);
        let pts = just_points(&locus(ctx, &fam, f, n, brianchon));
        if let Some(g) = fit_conic(&pts).ok().as_ref().and_then(geometry) {
            centers.push(g.center);
        }
    }
    let cr = fit_conic(&centers).unwrap_or_else(|_| FitReport::none(centers.len()));
    ctx.above_claim(
        "Brianchon-ellipse center locus is not a conic",
        &cr,
        NOT_A_CONIC_FACTOR * DIRECT_TOL,
    );
    ctx.note("the Brianchon-ellipse center claim is negative: the best conic must miss by 10x the direct threshold");

    ctx.points("O", &indexed(os));
    ctx.points("U", &indexed(us));
    let x3p = locus(ctx, &fam, f, n, touch_circumcenter);
    ctx.points("X3_touch", &x3p);
    ctx.points("X3_touch_envelope", &indexed(env));
    ctx.points("brianchon", &pi);
    ctx.points("brianchon_center", &indexed(centers));
    ctx.plot_model(&o);
    ctx.plot_model(&u);
    ctx.plot_model(&er);
    ctx.marker(x4);
    ctx.marker(x5);
    ctx.marker(x140);
    Ok(())
}

pub(crate) fn e20(ctx: &mut Ctx) -> Result<()> {
    let fam = ctx.family(FamilyKind::Brocard)?;
    let tol = ctx.direct_tol();
    let n = ctx.n_t();
    ctx.plot_family(&fam, 3);
    let caustic = *fam.inner();
    let cg = *fam.inner_geometry();
    let x3 = fam.outer_geometry().center;
    let x39 = cg.center;
    let mid = 0.5 * (x3 + x39);
    fixed_focus_claims(ctx, &fam, "", 2 * n);

    let frames = over_foci(ctx, &fam);
    let os: Vec<Vector2<f64>> = frames.iter().map(|f| f.o).collect();
    let us: Vec<Vector2<f64>> = frames.iter().map(|f| f.u).collect();
    let ws: Vec<Vector2<f64>> = frames.iter().map(|f| f.w).collect();

    let w = ladder(&ws, tol);
    ctx.fit_claim("W locus is a circle", &w, &[Model::Circle], tol);
    axis_ratio_claim(ctx, "W locus conic axis ratio", &ws);
    let wc = w.circle().map_or(f64::INFINITY, |(c, _)| dist_to_line(c, x3, x39));
    ctx.value_claim("W circle centered on X3X39", wc, SHAPE_TOL);

    let o = ladder(&os, tol);
    ctx.fit_claim("O locus is an ellipse", &o, &[Model::Ellipse], tol);
    let res = geometry(&o).map_or([f64::INFINITY; 3], |g| {
        [
            (g.center - mid).norm(),
            dir_sin(g.minor_dir(), cg.minor_dir()),
            HLine::through(x39, cg.minor_dir()).map_or(f64::INFINITY, |l| l.signed_dist(g.center).abs()),
        ]
    });
    ctx.residual_claim(
        "O ellipse centered at the midpoint of X3X39, minor axis on the caustic minor axis",
        &res,
        SHAPE_TOL,
    );

    let u = ladder(&us, tol);
    ctx.fit_claim("U locus is an ellipse", &u, &[Model::Ellipse], tol);
    let res = u.conic().map_or(vec![f64::INFINITY], |uc| {
        let mut r = vec![
            concentric(&uc, &caustic, SHAPE_TOL).residual,
            axis_aligned(&uc, &caustic, SHAPE_TOL).residual,
        ];
        for s in [1.0, -1.0] {
            let p = x39 + s * cg.semi_minor * cg.minor_dir();
            r.push(conics_tangent_at(&uc, &caustic, p, SHAPE_TOL).residual);
        }
        r
    });
    ctx.residual_claim(
        "U ellipse concentric and axis-aligned with the caustic, touching it at both co-vertices",
        &res,
        SHAPE_TOL,
    );

    let f = fam.outer_point(PRIMARY_ANCHOR);
    let pi = locus(ctx, &fam, f, n, brianchon);
    let pr = ladder(&just_points(&pi), tol);
    ctx.fit_claim("Brianchon locus is a circle", &pr, &[Model::Circle], tol);
    axis_ratio_claim(ctx, "Brianchon locus conic axis ratio", &just_points(&pi));

    let mut centers = Vec::new();
    for a in anchor_grid(ctx.n_a()) {
        let f = fam.outer_point(a);
        let pts = just_points(&locus(ctx, &fam, f, n, brianchon));
        if let Some((c, _)) = fit_circle(&pts).ok().and_then(|r| r.circle()) {
            centers.push(c);
        }
    }
    let cr = ladder(&centers, tol);
    ctx.fit_claim(
        "Brianchon-circle center locus is a conic",
        &cr,
        &[Model::Ellipse, Model::Hyperbola, Model::Parabola],
        tol,
    );
    let axis = x39 - x3;
    let res = cr.conic().as_ref().and_then(central).map_or([f64::INFINITY; 2], |c| {
        [dist_to_line(c.center, x3, x39), dir_sin(c.focal_dir, axis)]
    });
    ctx.residual_claim(
        "Brianchon-circle center conic has its major axis on X3X39",
        &res,
        SHAPE_TOL,
    );

    ctx.points("O", &indexed(os));
    ctx.points("U", &indexed(us));
    ctx.points("W", &indexed(ws));
    ctx.points("brianchon", &pi);
    ctx.points("brianchon_center", &indexed(centers));
    ctx.plot_model(&o);
    ctx.plot_model(&u);
    ctx.plot_model(&w);
    ctx.plot_model(&cr);
    ctx.marker(x39);
    Ok(())
}

pub(crate) fn e21(ctx: &mut Ctx) -> Result<()> {
    let n = ctx.n_t();
    let tol = ctx.direct_tol();
    let anchors = anchor_grid(ctx.n_a());
    for (kind, label) in [
        (FamilyKind::Bicentric, "bicentric"),
        (FamilyKind::MacBeath, "macbeath"),
        (FamilyKind::Brocard, "brocard"),
        (FamilyKind::Generic, "generic"),
    ] {
        let fam = ctx.family(kind)?;
        let mut dev = Vec::new();
        let mut printed = 0.0f64;
        for &a in &anchors {
            let f = fam.outer_point(a);
            let res = ctx.sweep(&fam, n, |s| {
                let v = vertex(s, &fam, f)?;
                let o = vertex_formula_oracle(&fam, a, s.t).ok()?.xy();
                let p = printed_vertex_formula(&fam, a, s.t).ok()?.xy();
                Some(((v - o).norm(), (v - p).norm()))
            });
            dev.extend(res.iter().map(|(_, d)| d.0));
            printed = res.iter().fold(printed, |m, (_, d)| m.max(d.1));
        }
        ctx.residual_claim(&format!("{label}: vertex matches the closed form"), &dev, ORACLE_TOL);
        ctx.note(format!(
            "{label}: largest deviation of the form (1 + k - conj(k) abc)/2 from the constructed vertex is {printed:.3e}"
        ));
    }

    let fam = ctx.family(FamilyKind::Generic)?;
    ctx.plot_family(&fam, 3);
    let Some(fr) = frame_or_fail(ctx, &fam, PRIMARY_ANCHOR, n) else {
        return Ok(());
    };
    let v = ladder(&just_points(&fr.vertices), tol);
    ctx.fit_claim("vertex locus is a circle", &v, &[Model::Circle], tol);
    let pred = predicted_vertex_circle(&fam, PRIMARY_ANCHOR)?;
    ctx.residual_claim(
        "vertex circle matches the center (3 + k)/4 and radius |1 - k|/4",
        &[(pred.center - fr.o).norm(), (pred.radius - fr.rho).abs()],
        PREDICTION_TOL,
    );

    let frame = UnitFrame::new(&fam, PRIMARY_ANCHOR)?;
    let conj = ctx.sweep(&fam, n, |s| {
        let v = vertex(s, &fam, fr.f)?;
        s.triangle
            .conjugate(&HPoint::from_xy(v), Conjugation::Isogonal)
            .ok()?
            .require_finite()
            .ok()
    });
    let cl = ladder(&just_points(&conj), tol);
    ctx.fit_claim(
        "isogonal conjugate of the vertex runs on a line",
        &cl,
        &[Model::Line],
        tol,
    );
    let antipode = 2.0 * fam.outer_geometry().center - fr.f;
    let touch = cl
        .line()
        .and_then(|l| fam.outer().pole(&l).ok())
        .and_then(|p| p.require_finite().ok())
        .map_or(f64::INFINITY, |p| (p - antipode).norm());
    ctx.value_claim(
        "conjugate line touches the circumcircle at the antipode of F",
        touch,
        CONJUGATE_LINE_TOL,
    );
    let re: Vec<f64> = conj
        .iter()
        .map(|(_, p)| {
            let z: Complex64 = frame.to_unit(*p);
            (z.re + 1.0).abs()
        })
        .collect();
    ctx.residual_claim("conjugate satisfies V' + conj(V') = -2", &re, CONJUGATE_LINE_TOL);

    let simsons = ctx.sweep(&fam, 2 * n, |s| simson(s, &fam, fr.f));
    pencil_claim(
        ctx,
        "Simson lines pass through the antipode of F on the vertex circle",
        &simsons,
        fr.u,
    );

    let frames = over_foci(ctx, &fam);
    let us: Vec<Vector2<f64>> = frames.iter().map(|f| f.u).collect();
    let u = ladder(&us, tol);
    ctx.fit_claim("antipode locus over all foci is an ellipse", &u, &[Model::Ellipse], tol);
    let cc = u
        .conic()
        .map_or(f64::INFINITY, |c| concentric(&c, fam.inner(), SHAPE_TOL).residual);
    ctx.value_claim("antipode ellipse concentric with the caustic", cc, SHAPE_TOL);

    ctx.points("vertex", &fr.vertices);
    ctx.points("vertex_conjugate", &conj);
    ctx.lines("simson", &simsons);
    ctx.points("U", &indexed(us));
    ctx.plot_model(&v);
    ctx.plot_model(&cl);
    ctx.plot_model(&u);
    ctx.marker(fr.f);
    ctx.marker(fr.u);
    Ok(())
}

pub(super) fn brianchon_ip(s: &FamilyTriangle, fam: &Family, pi: Vector2<f64>) -> Option<Conic> {
    if near_vertex(&s.triangle, pi, IP_VERTEX_GAP * fam.outer_geometry().semi_major) {
        return None;
    }
    inparabola(&s.triangle, &IpSpec::Brianchon(HPoint::from_xy(pi))).ok()
}

pub(super) fn fixed_pi_focus(s: &FamilyTriangle, fam: &Family, pi: Vector2<f64>) -> Option<Vector2<f64>> {
    brianchon_ip(s, fam, pi)?.parabola_elements().ok().map(|e| e.focus.xy())
}

fn fixed_pi_touch_barycenter(s: &FamilyTriangle, fam: &Family, pi: Vector2<f64>) -> Option<Vector2<f64>> {
    let c = brianchon_ip(s, fam, pi)?;
    Some(touch_triangle(s, &c)?.centroid())
}

fn fixed_pi(ctx: &mut Ctx, g: Feature, name: &str, series: &str, expected: Model) -> Result<()> {
    let fam = ctx.family(FamilyKind::Homothetic)?;
    let tol = ctx.direct_tol();
    let n = ctx.n_t();
    let mut fits = Vec::new();
    for a in anchor_grid(ctx.n_a()) {
        let pi = fam.outer_point(a);
        fits.push(ladder(&just_points(&locus(ctx, &fam, pi, n, g)), tol));
    }
    ctx.worst_fit_claim(&format!("{name} at every Brianchon point"), &fits, &[expected], tol);
    let pi = fam.outer_point(PRIMARY_ANCHOR);
    let pts = locus(ctx, &fam, pi, n, g);
    let r = ladder(&just_points(&pts), tol);
    ctx.fit_claim(name, &r, &[expected], tol);
    if expected == Model::Circle {
        axis_ratio_claim(ctx, &format!("{series} locus conic axis ratio"), &just_points(&pts));
    }
    ctx.plot_family(&fam, 4);
    ctx.points(series, &pts);
    ctx.plot_model(&r);
    ctx.marker(pi);
    Ok(())
}

pub(crate) fn e22(ctx: &mut Ctx) -> Result<()> {
    fixed_pi(ctx, fixed_pi_focus, "focus locus is a circle", "focus", Model::Circle)
}

pub(crate) fn e23(ctx: &mut Ctx) -> Result<()> {
    ctx.note("the statement reads 'is a circle is a line'; the locus is tested as a line");
    fixed_pi(
        ctx,
        fixed_pi_touch_barycenter,
        "touchpoint-triangle barycenter locus is a line",
        "touch_barycenter",
        Model::Line,
    )
}
