//! Circumparabola experiments E1 to E13.

use std::f64::consts::TAU;

use nalgebra::{Matrix2, Vector2};

use super::*;
use crate::conics::EllipseGeometry;
use crate::fit::{
    axis_aligned, collinear, conics_tangent_at, fit_parabola, golden_min, parallel, point_on_conic, stationary,
};
use crate::geom::meet;
use crate::triangle::{CenterId, Conjugation, NamedConic};
use crate::triconics::{circumparabola, perspector, polar_triangle, preimage_line, CpSpec, PolarMode};

/// Samples with a vertex this close to the tangency point are dropped,
/// relative to the outer semi-major axis.
const CP_VERTEX_GAP: f64 = 2e-3;
/// Envelope points beyond this many outer semi-major axes are left out of the
/// fit; the grid step along the envelope grows without bound out there.
const ENVELOPE_FAR: f64 = 5.0;
/// Parallelism of two directly fitted lines.
const DIRECT_PARALLEL_TOL: f64 = 1e-7;
/// Parallelism involving an envelope-derived line.
const ENVELOPE_PARALLEL_TOL: f64 = 1e-4;

/// Tangency point and kind of the circumparabolas of a family at anchor `a`:
/// isogonal on a circle-inscribed family, isotomic on the homothetic one.
fn tangency(fam: &Family, a: f64) -> (Conjugation, Vector2<f64>) {
    let kind = if fam.kind() == FamilyKind::Homothetic {
        Conjugation::Isotomic
    } else {
        Conjugation::Isogonal
    };
    (kind, fam.outer_point(a))
}

pub(super) fn cp(s: &FamilyTriangle, fam: &Family, a: f64) -> Option<Conic> {
    let (kind, q) = tangency(fam, a);
    if near_vertex(&s.triangle, q, CP_VERTEX_GAP * fam.outer_geometry().semi_major) {
        return None;
    }
    circumparabola(&s.triangle, &CpSpec::new(kind, HPoint::from_xy(q))).ok()
}

pub(super) fn focus(s: &FamilyTriangle, fam: &Family, a: f64) -> Option<Vector2<f64>> {
    cp(s, fam, a)?.parabola_elements().ok().map(|e| e.focus.xy())
}

pub(super) fn directrix(s: &FamilyTriangle, fam: &Family, a: f64) -> Option<HLine> {
    cp(s, fam, a)?.parabola_elements().ok().map(|e| e.directrix)
}

pub(super) fn polar_barycenter(s: &FamilyTriangle, fam: &Family, a: f64) -> Option<Vector2<f64>> {
    let c = cp(s, fam, a)?;
    Some(polar_triangle(&s.triangle, &c, PolarMode::Circum).ok()?.centroid())
}

pub(super) fn cp_perspector(s: &FamilyTriangle, fam: &Family, a: f64) -> Option<Vector2<f64>> {
    let c = cp(s, fam, a)?;
    let pt = polar_triangle(&s.triangle, &c, PolarMode::Circum).ok()?;
    perspector(&s.triangle, &pt).ok()?.point.require_finite().ok()
}

pub(super) type Feature = fn(&FamilyTriangle, &Family, f64) -> Option<Vector2<f64>>;

pub(super) fn locus(ctx: &mut Ctx, fam: &Family, a: f64, n: usize, f: Feature) -> Vec<(f64, Vector2<f64>)> {
    ctx.sweep(fam, n, |s| f(s, fam, a))
}

/// Ladder fits of a feature locus at every anchor.
fn anchor_fits(ctx: &mut Ctx, fam: &Family, f: Feature, thr: f64) -> Vec<FitReport> {
    let n = ctx.n_t();
    anchor_grid(ctx.n_a())
        .into_iter()
        .map(|a| ladder(&just_points(&locus(ctx, fam, a, n, f)), thr))
        .collect()
}

pub(super) fn directrix_envelope(ctx: &mut Ctx, fam: &Family, a: f64) -> (Vec<(f64, HLine)>, Vec<Vector2<f64>>) {
    let n = ctx.n_t();
    let lines = ctx.sweep(fam, n, |s| directrix(s, fam, a));
    let g = fam.outer_geometry();
    let (pts, discarded) = envelope_of(&lines, TAU / n as f64, g.center, ENVELOPE_FAR * g.semi_major);
    if discarded > 0 {
        ctx.note(format!(
            "{discarded} envelope points outside the fitting window or at run ends discarded"
        ));
    }
    (lines, pts)
}

pub(crate) fn e1(ctx: &mut Ctx) -> Result<()> {
    let fam = ctx.family(FamilyKind::Bicentric)?;
    let tol = ctx.direct_tol();
    let fits = anchor_fits(ctx, &fam, focus, tol);
    ctx.worst_fit_claim("focus locus is a line at every anchor", &fits, &[Model::Line], tol);
    let n = ctx.n_t();
    let pts = locus(ctx, &fam, PRIMARY_ANCHOR, n, focus);
    let r = ladder(&just_points(&pts), tol);
    ctx.fit_claim("focus locus is a line", &r, &[Model::Line], tol);
    ctx.plot_family(&fam, 6);
    ctx.marker(fam.outer_point(PRIMARY_ANCHOR));
    ctx.points("focus", &pts);
    ctx.plot_model(&r);
    Ok(())
}

pub(crate) fn e2(ctx: &mut Ctx) -> Result<()> {
    let fam = ctx.family(FamilyKind::Bicentric)?;
    let tol = ctx.direct_tol();
    let n = ctx.n_t();
    let mut fits = Vec::new();
    let mut par = Vec::new();
    for a in anchor_grid(ctx.n_a()) {
        let bary = ladder(&just_points(&locus(ctx, &fam, a, n, polar_barycenter)), tol);
        let foc = ladder(&just_points(&locus(ctx, &fam, a, n, focus)), tol);
        if let (Some(l1), Some(l2)) = (bary.line(), foc.line()) {
            par.push(parallel(&l1, &l2, DIRECT_PARALLEL_TOL));
        } else {
            par.push(Predicate::new(f64::INFINITY, DIRECT_PARALLEL_TOL));
        }
        fits.push(bary);
    }
    ctx.worst_fit_claim("barycenter locus is a line at every anchor", &fits, &[Model::Line], tol);
    ctx.predicate_claim("barycenter line parallel to the focus line", &par);
    let pts = locus(ctx, &fam, PRIMARY_ANCHOR, n, polar_barycenter);
    let foc = locus(ctx, &fam, PRIMARY_ANCHOR, n, focus);
    let r = ladder(&just_points(&pts), tol);
    ctx.plot_family(&fam, 6);
    ctx.points("polar_barycenter", &pts);
    ctx.points("focus", &foc);
    ctx.plot_model(&r);
    Ok(())
}

/// Envelope parabola of the directrices at the primary anchor.
fn envelope_claim(ctx: &mut Ctx, fam: &Family, label: &str) -> Result<Option<FitReport>> {
    let (lines, pts) = directrix_envelope(ctx, fam, PRIMARY_ANCHOR);
    if pts.len() < 5 {
        ctx.residual_claim(
            &format!("{label}directrix envelope is a parabola"),
            &[f64::INFINITY],
            ENVELOPE_TOL,
        );
        return Ok(None);
    }
    let r = fit_parabola(&pts)?;
    ctx.fit_claim(
        &format!("{label}directrix envelope is a parabola"),
        &r,
        &[Model::Parabola],
        ENVELOPE_TOL,
    );
    ctx.lines(&format!("{label}directrix"), &lines);
    let env: Vec<(f64, Vector2<f64>)> = pts.iter().enumerate().map(|(i, p)| (i as f64, *p)).collect();
    ctx.points(&format!("{label}envelope"), &env);
    ctx.plot_model(&r);
    Ok(Some(r))
}

pub(crate) fn e3(ctx: &mut Ctx) -> Result<()> {
    let fam = ctx.family(FamilyKind::Bicentric)?;
    ctx.plot_family(&fam, 4);
    let Some(r) = envelope_claim(ctx, &fam, "")? else {
        return Ok(());
    };
    let x1 = fam.inner_geometry().center;
    let tol = ctx.direct_tol();
    let n = ctx.n_t().min(360);
    let foc = ladder(&just_points(&locus(ctx, &fam, PRIMARY_ANCHOR, n, focus)), tol);
    match (parabola_fit_elements(&r), foc.line()) {
        (Some((f, d)), Some(fl)) => {
            ctx.value_claim("envelope focus at X1", (f - x1).norm(), ENVELOPE_TOL);
            ctx.predicate_claim(
                "envelope directrix parallel to the focus line",
                &[parallel(&d, &fl, ENVELOPE_PARALLEL_TOL)],
            );
        }
        _ => {
            ctx.value_claim("envelope focus at X1", f64::INFINITY, ENVELOPE_TOL);
            ctx.value_claim(
                "envelope directrix parallel to the focus line",
                f64::INFINITY,
                ENVELOPE_PARALLEL_TOL,
            );
        }
    }
    ctx.marker(x1);
    Ok(())
}

pub(crate) fn e4(ctx: &mut Ctx) -> Result<()> {
    let fam = ctx.family(FamilyKind::Inellipse)?;
    ctx.plot_family(&fam, 4);
    envelope_claim(ctx, &fam, "")?;
    Ok(())
}

pub(crate) fn e5(ctx: &mut Ctx) -> Result<()> {
    for (kind, label) in [
        (FamilyKind::MacBeath, "macbeath: "),
        (FamilyKind::Brocard, "brocard: "),
        (FamilyKind::Generic, "generic: "),
    ] {
        let fam = ctx.family(kind)?;
        if kind == FamilyKind::MacBeath {
            ctx.plot_family(&fam, 4);
        }
        envelope_claim(ctx, &fam, label)?;
    }
    Ok(())
}

fn perspector_claims(ctx: &mut Ctx, kind: FamilyKind, label: &str, expected: Model) -> Result<()> {
    let fam = ctx.family(kind)?;
    let tol = ctx.direct_tol();
    let fits = anchor_fits(ctx, &fam, cp_perspector, tol);
    ctx.worst_fit_claim(
        &format!("{label}perspector locus at every anchor"),
        &fits,
        &[expected],
        tol,
    );
    let n = ctx.n_t();
    let pts = locus(ctx, &fam, PRIMARY_ANCHOR, n, cp_perspector);
    let r = ladder(&just_points(&pts), tol);
    ctx.fit_claim(&format!("{label}perspector locus"), &r, &[expected], tol);
    if expected == Model::Circle {
        axis_ratio_claim(
            ctx,
            &format!("{label}perspector locus conic axis ratio"),
            &just_points(&pts),
        );
    }
    if ctx.plot.conics.is_empty() {
        ctx.plot_family(&fam, 4);
    }
    ctx.points(&format!("{label}perspector"), &pts);
    ctx.plot_model(&r);
    Ok(())
}

/// Deviation from 1 of the axis ratio of a general conic fit.
pub(crate) fn axis_ratio_claim(ctx: &mut Ctx, name: &str, pts: &[Vector2<f64>]) {
    let dev = crate::fit::fit_conic(pts)
        .ok()
        .and_then(|r| r.conic())
        .and_then(|c| c.ellipse_geometry().ok())
        .map_or(f64::INFINITY, |g| 1.0 - g.axis_ratio());
    ctx.value_claim(name, dev.abs(), AXIS_RATIO_TOL);
}

pub(crate) fn e6(ctx: &mut Ctx) -> Result<()> {
    perspector_claims(ctx, FamilyKind::Bicentric, "bicentric: ", Model::Ellipse)?;
    perspector_claims(ctx, FamilyKind::MacBeath, "macbeath: ", Model::Ellipse)
}

pub(crate) fn e7(ctx: &mut Ctx) -> Result<()> {
    perspector_claims(ctx, FamilyKind::Brocard, "", Model::Circle)
}

/// Signed Sampson value of `c` at `p`.
fn signed_sampson(c: &Conic, p: Vector2<f64>) -> f64 {
    let h = HPoint::from_xy(p);
    let g = c.matrix() * h.coords();
    c.algebraic(&h) / (2.0 * Vector2::new(g.x, g.y).norm())
}

/// Smallest |signed Sampson value| of `c` at a local extremum along the
/// ellipse `e`; zero exactly when `c` touches `e`.
fn contact_residual(c: &Conic, e: &EllipseGeometry) -> f64 {
    const N: usize = 720;
    let step = TAU / N as f64;
    let f = |t: f64| signed_sampson(c, e.point_at(t));
    let vals: Vec<f64> = (0..N).map(|i| f(i as f64 * step)).collect();
    let mut best = f64::INFINITY;
    for i in 0..N {
        let (a, b, d) = (vals[(i + N - 1) % N], vals[i], vals[(i + 1) % N]);
        let sign = if b <= a && b <= d {
            1.0
        } else if b >= a && b >= d {
            -1.0
        } else {
            continue;
        };
        let t0 = i as f64 * step;
        let t = golden_min(|t| sign * f(t), t0 - step, t0 + step, 1e-12);
        best = best.min(f(t).abs());
    }
    best
}

fn homothetic_setup(ctx: &Ctx) -> Result<(Family, Vector2<f64>)> {
    let fam = ctx.family(FamilyKind::Homothetic)?;
    let x2 = fam.outer_geometry().center;
    Ok((fam, x2))
}

pub(crate) fn e8(ctx: &mut Ctx) -> Result<()> {
    let (fam, x2) = homothetic_setup(ctx)?;
    let outer = *fam.outer();
    let n = ctx.n_t();
    let mut disc = Vec::new();
    let mut contact = Vec::new();
    let mut shape = Vec::new();
    let mut primary = None;
    let mut anchors = anchor_grid(ctx.n_a());
    anchors.push(PRIMARY_ANCHOR);
    for a in anchors {
        let q = fam.outer_point(a);
        let reflected = outer.polar(&HPoint::from_xy(2.0 * x2 - q))?;
        let q2 = x2 - 0.5 * (q - x2);
        let predicted = outer.transformed(&(Matrix2::identity() * 0.75), &(0.25 * q))?;
        let pg = predicted.ellipse_geometry()?;
        shape.push(conics_tangent_at(&outer, &predicted, q, SHAPE_TOL).residual);
        shape.push(conics_tangent_at(fam.inner(), &predicted, q2, SHAPE_TOL).residual);
        shape.push(axis_aligned(&outer, &predicted, SHAPE_TOL).residual);
        shape.push((pg.center - 0.5 * (q + q2)).norm());
        let res = ctx.sweep(&fam, n, |s| {
            let c = cp(s, &fam, a)?;
            Some((
                c.intersect_line(&reflected).discriminant.abs(),
                contact_residual(&c, &pg),
                c,
            ))
        });
        disc.extend(res.iter().map(|(_, r)| r.0));
        contact.extend(res.iter().map(|(_, r)| r.1));
        if a == PRIMARY_ANCHOR {
            primary = Some((
                predicted,
                reflected,
                res.iter().take(8).map(|(_, r)| r.2).collect::<Vec<_>>(),
            ));
        }
    }
    ctx.residual_claim(
        "every CP touches the reflected tangent (discriminant)",
        &disc,
        DISCRIMINANT_TOL,
    );
    ctx.residual_claim(
        "every CP touches the predicted envelope ellipse",
        &contact,
        PREDICATE_TOL,
    );
    ctx.residual_claim(
        "envelope ellipse touches the outer ellipse at Q and the caustic at Q', axis-parallel, centered at their midpoint",
        &shape,
        SHAPE_TOL,
    );
    ctx.plot_family(&fam, 4);
    if let Some((pred, _, cps)) = primary {
        ctx.plot_conic(&pred);
        for c in cps {
            ctx.plot_conic(&c);
        }
    }
    ctx.marker(fam.outer_point(PRIMARY_ANCHOR));
    Ok(())
}

pub(crate) fn e9(ctx: &mut Ctx) -> Result<()> {
    let (fam, _) = homothetic_setup(ctx)?;
    ctx.plot_family(&fam, 4);
    let Some(r) = envelope_claim(ctx, &fam, "")? else {
        return Ok(());
    };
    let l = fam.outer().polar(&HPoint::from_xy(fam.outer_point(PRIMARY_ANCHOR)))?;
    let res = parabola_fit_elements(&r).map_or(f64::INFINITY, |(_, d)| parallel(&d, &l, 0.0).residual);
    ctx.value_claim("envelope directrix parallel to L", res, ENVELOPE_PARALLEL_TOL);
    Ok(())
}

pub(crate) fn e10(ctx: &mut Ctx) -> Result<()> {
    let (fam, _) = homothetic_setup(ctx)?;
    let tol = ctx.direct_tol();
    let n = ctx.n_t();
    let mut fits = Vec::new();
    let mut par = Vec::new();
    for a in anchor_grid(ctx.n_a()) {
        let r = ladder(&just_points(&locus(ctx, &fam, a, n, polar_barycenter)), tol);
        let l = fam.outer().polar(&HPoint::from_xy(fam.outer_point(a)))?;
        par.push(
            r.line()
                .map_or(Predicate::new(f64::INFINITY, DIRECT_PARALLEL_TOL), |m| {
                    parallel(&m, &l, DIRECT_PARALLEL_TOL)
                }),
        );
        fits.push(r);
    }
    ctx.worst_fit_claim("barycenter locus is a line at every anchor", &fits, &[Model::Line], tol);
    ctx.predicate_claim("barycenter line parallel to L", &par);
    let pts = locus(ctx, &fam, PRIMARY_ANCHOR, n, polar_barycenter);
    let r = ladder(&just_points(&pts), tol);
    ctx.plot_family(&fam, 6);
    ctx.points("polar_barycenter", &pts);
    ctx.plot_model(&r);
    Ok(())
}

pub(crate) fn e11(ctx: &mut Ctx) -> Result<()> {
    let (fam, x2) = homothetic_setup(ctx)?;
    let n = ctx.n_t();
    let mut diam = Vec::new();
    let mut on = Vec::new();
    let mut col = Vec::new();
    let mut anchors = anchor_grid(ctx.n_a());
    anchors.push(PRIMARY_ANCHOR);
    for a in anchors {
        let pts = just_points(&locus(ctx, &fam, a, n, cp_perspector));
        if pts.is_empty() {
            diam.push(f64::INFINITY);
            continue;
        }
        let q = fam.outer_point(a);
        diam.push(stationary(&pts, STATIONARY_DIAMETER_TOL).residual);
        for p in &pts {
            on.push(point_on_conic(*p, fam.inner(), PREDICATE_TOL).residual);
            col.push(collinear(*p, q, x2, PREDICATE_TOL).residual);
        }
    }
    ctx.residual_claim("perspector is stationary", &diam, STATIONARY_DIAMETER_TOL);
    ctx.residual_claim("perspector on the Steiner inellipse", &on, PREDICATE_TOL);
    ctx.residual_claim("perspector collinear with Q and X2", &col, PREDICATE_TOL);
    let pts = locus(ctx, &fam, PRIMARY_ANCHOR, n, cp_perspector);
    ctx.plot_family(&fam, 4);
    ctx.points("perspector", &pts);
    ctx.marker(fam.outer_point(PRIMARY_ANCHOR));
    ctx.marker(x2);
    Ok(())
}

/// Tangency points Q, R of the two pre-image lines of the isogonal
/// circumparabola at circumcircle angle `a`, and their meet Z.
fn generatrices(tri: &Triangle, a: f64) -> Option<(Vector2<f64>, Vector2<f64>, Vector2<f64>)> {
    let spec = CpSpec::at_parameter(tri, Conjugation::Isogonal, a).ok()?;
    let q = spec.tangency.xy();
    let scale = tri.circumradius();
    if near_vertex(tri, q, CP_VERTEX_GAP * scale) {
        return None;
    }
    let c = circumparabola(tri, &spec).ok()?;
    let iso = preimage_line(tri, &c, Conjugation::Isotomic).ok()?;
    let steiner = tri.named_conic(NamedConic::SteinerCircumellipse).ok()?;
    let r = steiner.pole(&iso).ok()?.require_finite().ok()?;
    let tq = tri
        .named_conic(NamedConic::Circumcircle)
        .ok()?
        .polar(&spec.tangency)
        .ok()?;
    let z = meet(&tq, &iso).ok()?.require_finite().ok()?;
    Some((q, r, z))
}

pub(crate) fn e12(ctx: &mut Ctx) -> Result<()> {
    let tri = ctx.seed();
    let x99 = tri.center_xy(CenterId::X99)?;
    let n = 72;
    let grid = t_grid(n);
    let res: Vec<(f64, Vector2<f64>, Vector2<f64>)> = grid
        .iter()
        .filter_map(|&a| generatrices(&tri, a).map(|(q, r, _)| (a, q, r)))
        .collect();
    ctx.count(n, res.len());
    let area: Vec<f64> = res
        .iter()
        .map(|(_, q, r)| collinear(*q, *r, x99, COLLINEAR_AREA_TOL).residual)
        .collect();
    ctx.residual_claim("Q, R and X99 collinear", &area, COLLINEAR_AREA_TOL);
    ctx.plot_conic(&tri.named_conic(NamedConic::Circumcircle)?);
    ctx.plot_conic(&tri.named_conic(NamedConic::SteinerCircumellipse)?);
    ctx.plot.triangles.push(tri.vertices());
    let qs: Vec<(f64, Vector2<f64>)> = res.iter().map(|(a, q, _)| (*a, *q)).collect();
    let rs: Vec<(f64, Vector2<f64>)> = res.iter().map(|(a, _, r)| (*a, *r)).collect();
    ctx.points("Q", &qs);
    ctx.points("R", &rs);
    ctx.marker(x99);
    Ok(())
}

pub(crate) fn e13(ctx: &mut Ctx) -> Result<()> {
    let tri = ctx.seed();
    let kiepert = tri.named_conic(NamedConic::KiepertParabola)?;
    let n = ctx.n_t();
    let mut zs = Vec::new();
    let mut images = Vec::new();
    for a in t_grid(n) {
        let Some((_, _, z)) = generatrices(&tri, a) else {
            continue;
        };
        let Ok(zi) = tri.conjugate(&HPoint::from_xy(z), Conjugation::Isogonal) else {
            continue;
        };
        let Ok(p) = zi.require_finite() else {
            continue;
        };
        zs.push((a, z));
        images.push((a, p));
    }
    ctx.count(n, zs.len());
    let res: Vec<f64> = images
        .iter()
        .map(|(_, p)| kiepert.sampson_distance(&HPoint::from_xy(*p)))
        .collect();
    ctx.rms_claim("isogonal images of Z on the Kiepert parabola", &res, DIRECT_TOL);
    ctx.plot_conic(&tri.named_conic(NamedConic::Circumcircle)?);
    ctx.plot_conic(&kiepert);
    ctx.plot.triangles.push(tri.vertices());
    ctx.points("Z", &zs);
    ctx.points("Z_isogonal", &images);
    Ok(())
}
