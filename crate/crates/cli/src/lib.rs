//! `poncelet` command line: list, run and dump.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use poncelet::experiments::{
    dump_challenge, find_experiment, list_experiments, run_many, write_artifacts, EmitFlags, Report, RunConfig,
    SeedPreset, CHALLENGES,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_OUT_DIR: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "poncelet",
    version,
    about = "Parabola loci and envelopes over Poncelet triangle families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the experiment registry.
    List,
    /// Run experiments and write their reports.
    Run {
        /// Experiment ids (E1..E23) or `all`.
        #[arg(required = true, value_name = "ID")]
        ids: Vec<String>,
        #[command(flatten)]
        common: Common,
        /// Write only the JSON report.
        #[arg(long, conflicts_with = "svg")]
        json_only: bool,
        /// Write the SVG plot (`--svg false` to skip it).
        #[arg(long, value_name = "BOOL", num_args = 0..=1, default_value_t = true, default_missing_value = "true", action = clap::ArgAction::Set)]
        svg: bool,
    },
    /// Write the raw locus or envelope CSV of an open challenge.
    Dump {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
        challenge: u8,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Triangles per sweep (at least 16).
    #[arg(long)]
    samples: Option<usize>,
    /// Anchors for claims over all foci, tangency or Brianchon points (at least 4).
    #[arg(long)]
    anchors: Option<usize>,
    /// Threshold for direct locus fits.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed triangle: scalene-A, scalene-B or equilateral.
    #[arg(long, default_value = "scalene-A", value_parser = parse_seed)]
    seed_preset: SeedPreset,
    /// Output directory.
    #[arg(long, default_value = "reports")]
    out: PathBuf,
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            samples: self.samples,
            anchors: self.anchors,
            tol: self.tol,
            seed: self.seed_preset,
            ..RunConfig::default()
        }
    }
}

fn parse_seed(s: &str) -> Result<SeedPreset, String> {
    s.parse::<SeedPreset>().map_err(|e| e.to_string())
}

/// Parse `argv` (program name first) and execute; returns the process exit code.
pub fn run_cli<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match cli.command {
        Command::List => list(),
        Command::Run {
            ids,
            common,
            json_only,
            svg,
        } => {
            let flags = EmitFlags {
                json: true,
                csv: !json_only,
                svg: svg && !json_only,
            };
            run(&ids, &common, flags)
        }
        Command::Dump { challenge, common } => dump(challenge, &common),
    }
}

fn list() -> i32 {
    let mut out = std::io::stdout().lock();
    for d in list_experiments() {
        let _ = writeln!(
            out,
            "{:<4} {:<12} N_t={:<4} N_a={:<3} {}",
            d.id, d.family, d.samples, d.anchors, d.title
        );
    }
    let _ = writeln!(out, "\nchallenges (dump --challenge N):");
    for (n, desc) in CHALLENGES {
        let _ = writeln!(out, "  {n} {desc}");
    }
    EXIT_PASS
}

fn resolve_ids(raw: &[String]) -> Result<Vec<&'static str>, String> {
    let mut ids: Vec<&'static str> = Vec::new();
    for r in raw {
        if r.eq_ignore_ascii_case("all") {
            ids.extend(list_experiments().iter().map(|d| d.id));
            continue;
        }
        match find_experiment(r) {
            Some(d) => ids.push(d.id),
            None => return Err(format!("unknown experiment id `{r}`")),
        }
    }
    let mut seen = std::collections::HashSet::new();
    ids.retain(|id| seen.insert(*id));
    Ok(ids)
}

/// Create `dir` and make sure a file can be written inside it.
fn check_out_dir(dir: &Path) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let probe = dir.join(".poncelet-write-check");
    std::fs::write(&probe, b"").map_err(|e| format!("cannot write to {}: {e}", dir.display()))?;
    let _ = std::fs::remove_file(&probe);
    Ok(())
}

fn print_report(out: &mut impl Write, r: &Report, secs: f64) {
    let verdict = if r.pass { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "{} {verdict} {:.2}s {}", r.id, secs, r.title);
    for s in r.subclaims.iter().filter(|s| !s.pass) {
        let _ = writeln!(
            out,
            "    failed: {} (rms {:.3e}, max {:.3e}, threshold {:.1e})",
            s.name, s.rms, s.max, s.threshold
        );
    }
    for n in &r.notes {
        let _ = writeln!(out, "    note: {n}");
    }
}

fn run(raw: &[String], common: &Common, flags: EmitFlags) -> i32 {
    let ids = match resolve_ids(raw) {
        Ok(ids) => ids,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let cfg = common.config();
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    if let Err(msg) = check_out_dir(&common.out) {
        eprintln!("error: {msg}");
        return EXIT_OUT_DIR;
    }
    let start = Instant::now();
    let results = run_many(&ids, &cfg);
    let mut passed = 0;
    let mut out = std::io::stdout().lock();
    for (id, res) in results {
        match res {
            Ok(mut report) => {
                if let Err(e) = write_artifacts(&mut report, &common.out, flags) {
                    eprintln!("error: {e}");
                    return EXIT_OUT_DIR;
                }
                passed += usize::from(report.pass);
                print_report(&mut out, &report, start.elapsed().as_secs_f64());
            }
            Err(e) => {
                let _ = writeln!(out, "{id} FAIL error: {e}");
            }
        }
    }
    let _ = writeln!(
        out,
        "{passed}/{} passed in {:.2}s",
        ids.len(),
        start.elapsed().as_secs_f64()
    );
    if passed == ids.len() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn dump(challenge: u8, common: &Common) -> i32 {
    let cfg = common.config();
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    if let Err(msg) = check_out_dir(&common.out) {
        eprintln!("error: {msg}");
        return EXIT_OUT_DIR;
    }
    let d = match dump_challenge(challenge, &cfg) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match d.write(&common.out) {
        Ok(path) => {
            let desc = CHALLENGES.iter().find(|(n, _)| *n == challenge).map_or("", |(_, s)| *s);
            println!("challenge {challenge}: {desc}");
            println!("wrote {}", path.display());
            EXIT_PASS
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_OUT_DIR
        }
    }
}
