//! Raw loci and envelopes for the open questions. No verdict is attached.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use nalgebra::Vector2;

use super::artifacts::{write_csv, ArtifactError};
use super::*;
use crate::fit::{fit_circle, fit_conic, fit_line, fit_parabola};

/// Anchors for dumps that trace an object over all tangency points or all
/// Brianchon points.
const DUMP_ANCHORS: usize = 180;
/// Anchors for dumps whose per-anchor work is an envelope fit.
const DUMP_ENVELOPE_ANCHORS: usize = 36;

pub static CHALLENGES: [(u8, &str); 6] = [
    (
        1,
        "bicentric: envelope over all Q of the focus line of isogonal circumparabolas",
    ),
    (
        2,
        "MacBeath, Brocard, generic: focus of the directrix-envelope parabola over all Q",
    ),
    (
        3,
        "bicentric, MacBeath, Brocard: center of the perspector locus over all Q",
    ),
    (
        4,
        "homothetic: focus of the directrix-envelope parabola of isotomic circumparabolas over all Q",
    ),
    (
        5,
        "homothetic, fixed Brianchon point: directrix and Simson-line envelopes",
    ),
    (6, "homothetic: center of the focus circle over all Brianchon points"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ChallengeDump {
    pub challenge: u8,
    pub description: &'static str,
    pub series: Vec<Series>,
}

impl ChallengeDump {
    /// Write `challenge<N>.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> std::result::Result<PathBuf, ArtifactError> {
        std::fs::create_dir_all(dir).map_err(|source| ArtifactError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let path = dir.join(format!("challenge{}.csv", self.challenge));
        write_csv(&self.series, &path)?;
        Ok(path)
    }
}

fn pts(name: &str, data: Vec<(f64, Vector2<f64>)>) -> Series {
    Series {
        name: name.into(),
        data: SeriesData::Points(data),
    }
}

fn lines(name: &str, data: Vec<(f64, HLine)>) -> Series {
    Series {
        name: name.into(),
        data: SeriesData::Lines(data),
    }
}

fn envelope_series(name: &str, data: &[(f64, HLine)], step: f64, fam: &Family) -> Series {
    let g = fam.outer_geometry();
    let (env, _) = envelope_of(data, step, g.center, 50.0 * g.semi_major);
    pts(name, env.into_iter().enumerate().map(|(i, p)| (i as f64, p)).collect())
}

fn envelope_focus(ctx: &mut Ctx, fam: &Family, a: f64) -> Option<Vector2<f64>> {
    let (_, env) = circum::directrix_envelope(ctx, fam, a);
    parabola_fit_elements(&fit_parabola(&env).ok()?).map(|(f, _)| f)
}

pub fn dump_challenge(id: u8, cfg: &RunConfig) -> Result<ChallengeDump> {
    cfg.validate()?;
    let (_, description) = *CHALLENGES
        .iter()
        .find(|(n, _)| *n == id)
        .ok_or_else(|| GeomError::InvalidParameter(format!("unknown challenge {id}")))?;
    let mut ctx = Ctx::new(cfg, 360, DUMP_ANCHORS);
    let n = ctx.n_t();
    let mut series = Vec::new();
    match id {
        1 => {
            let fam = ctx.family(FamilyKind::Bicentric)?;
            let na = ctx.n_a();
            let mut ls = Vec::new();
            for a in t_grid(na) {
                let p = circum::locus(&mut ctx, &fam, a, n, circum::focus);
                if let Some(l) = fit_line(&just_points(&p)).ok().and_then(|r| r.line()) {
                    ls.push((a, l));
                }
            }
            series.push(envelope_series("focus_line_envelope", &ls, TAU / na as f64, &fam));
            series.push(lines("focus_line", ls));
        }
        2 => {
            let mut env_ctx = Ctx::new(cfg, 720, DUMP_ENVELOPE_ANCHORS);
            for (kind, name) in [
                (FamilyKind::MacBeath, "macbeath"),
                (FamilyKind::Brocard, "brocard"),
                (FamilyKind::Generic, "generic"),
            ] {
                let fam = env_ctx.family(kind)?;
                let data = t_grid(env_ctx.n_a())
                    .into_iter()
                    .filter_map(|a| envelope_focus(&mut env_ctx, &fam, a).map(|f| (a, f)))
                    .collect();
                series.push(pts(&format!("{name}_envelope_focus"), data));
            }
        }
        3 => {
            for (kind, name) in [
                (FamilyKind::Bicentric, "bicentric"),
                (FamilyKind::MacBeath, "macbeath"),
                (FamilyKind::Brocard, "brocard"),
            ] {
                let fam = ctx.family(kind)?;
                let mut data = Vec::new();
                for a in t_grid(ctx.n_a()) {
                    let p = just_points(&circum::locus(&mut ctx, &fam, a, n, circum::cp_perspector));
                    let c = fit_conic(&p).ok().and_then(|r| r.conic()).and_then(|c| c.center().ok());
                    if let Some(c) = c.and_then(|c| c.require_finite().ok()) {
                        data.push((a, c));
                    }
                }
                series.push(pts(&format!("{name}_perspector_center"), data));
            }
        }
        4 => {
            let mut env_ctx = Ctx::new(cfg, 720, DUMP_ENVELOPE_ANCHORS);
            let fam = env_ctx.family(FamilyKind::Homothetic)?;
            let data = t_grid(env_ctx.n_a())
                .into_iter()
                .filter_map(|a| envelope_focus(&mut env_ctx, &fam, a).map(|f| (a, f)))
                .collect();
            series.push(pts("envelope_focus", data));
        }
        5 => {
            let fam = ctx.family(FamilyKind::Homothetic)?;
            let pi = fam.outer_point(PRIMARY_ANCHOR);
            let m = 2 * n;
            let pairs = ctx.sweep(&fam, m, |s| {
                let c = inpar::brianchon_ip(s, &fam, pi)?;
                let e = c.parabola_elements().ok()?;
                let ss = s.triangle.simson_steiner(&e.focus).ok()?;
                Some((e.directrix, ss.simson))
            });
            let dirs: Vec<(f64, HLine)> = pairs.iter().map(|(t, p)| (*t, p.0)).collect();
            let sims: Vec<(f64, HLine)> = pairs.iter().map(|(t, p)| (*t, p.1)).collect();
            let step = TAU / m as f64;
            series.push(envelope_series("directrix_envelope", &dirs, step, &fam));
            series.push(envelope_series("simson_envelope", &sims, step, &fam));
            series.push(lines("directrix", dirs));
            series.push(lines("simson", sims));
        }
        6 => {
            let fam = ctx.family(FamilyKind::Homothetic)?;
            let mut data = Vec::new();
            for a in t_grid(ctx.n_a()) {
                let pi = fam.outer_point(a);
                let p = just_points(&inpar::locus(&mut ctx, &fam, pi, n, inpar::fixed_pi_focus));
                if let Some((c, _)) = fit_circle(&p).ok().and_then(|r| r.circle()) {
                    data.push((a, c));
                }
            }
            series.push(pts("focus_circle_center", data));
        }
        _ => unreachable!("challenge ids are checked above"),
    }
    Ok(ChallengeDump {
        challenge: id,
        description,
        series,
    })
}
