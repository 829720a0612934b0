use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chromatope::algebra::characteristic::SignVector;
use chromatope::algebra::identities::special_reference_vertex;
use chromatope::algebra::{canonical_identities, special_identities, CohomologyRing};
use chromatope::cover::{CoverFile, FuzzConfig, PolytopeSource, Profile, Theorem, Verifier, Witness};
use chromatope::hex::{no_tie_check, playout, trial_rng, Board, GameSpec, Policy, SiteSpec};
use chromatope::polytope::{chromatic_number, find_coloring, PolytopeFile};
use chromatope::{BuiltPolytope, Coloring};
use log::info;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::error::CliError;

/// A finished run: the JSON result and whether it is a clean success.
pub struct Outcome {
    pub value: Value,
    pub output: Output,
    /// False when a theorem witness is missing or an identity fails.
    pub ok: bool,
}

impl Outcome {
    fn new(value: impl Serialize, output: &Output, ok: bool) -> Result<Self, CliError> {
        let value = serde_json::to_value(value).map_err(|e| CliError::Internal(e.to_string()))?;
        Ok(Self { value, output: output.clone(), ok })
    }

    /// Pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.value).expect("serializable");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            1
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn polytope_source(src: &Source) -> Result<PolytopeSource, CliError> {
    match (&src.builder, &src.input) {
        (Some(d), None) => Ok(PolytopeSource::Named(d.clone())),
        (None, Some(p)) => Ok(PolytopeSource::Inline(PolytopeFile::from_json(&read(p)?)?)),
        _ => Err(CliError::Usage("exactly one of --builder or --input is required".into())),
    }
}

fn load(src: &Source) -> Result<(BuiltPolytope, PolytopeSource), CliError> {
    let source = polytope_source(src)?;
    Ok((source.build()?, source))
}

/// A string polytope in a cover file is a path when such a file exists
/// (relative to the cover file, then the working directory), otherwise a
/// builder descriptor.
fn resolve_named(source: PolytopeSource, base: &Path) -> Result<PolytopeSource, CliError> {
    let PolytopeSource::Named(name) = &source else { return Ok(source) };
    let candidates = [base.join(name), PathBuf::from(name)];
    match candidates.iter().find(|p| p.is_file()) {
        Some(p) => Ok(PolytopeSource::Inline(PolytopeFile::from_json(&read(p)?)?)),
        None => Ok(source),
    }
}

fn explicit_coloring(colors: &[usize]) -> Result<Coloring, CliError> {
    let k = colors.iter().max().map_or(0, |c| c + 1);
    Ok(Coloring::new(colors.to_vec(), k)?)
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Polytope(cmd) => polytope(cmd),
        Command::Ring(cmd) => ring(cmd),
        Command::Cover(cmd) => cover(cmd),
        Command::Hex(cmd) => hex(cmd),
    }
}

fn polytope(cmd: PolytopeCmd) -> Result<Outcome, CliError> {
    match cmd {
        PolytopeCmd::Build { source, output } => {
            let (built, _) = load(&source)?;
            Outcome::new(PolytopeFile::from_built(&built), &output, true)
        }
        PolytopeCmd::Validate { source, output } => {
            let (built, _) = load(&source)?;
            let p = &built.polytope;
            let report = p.validate_simple();
            let value = json!({
                "dim": p.dim(),
                "facets": p.num_facets(),
                "vertices": p.num_vertices(),
                "simple": report.is_simple(),
                "violations": report.violations,
            });
            Outcome::new(value, &output, true)
        }
        PolytopeCmd::Color { source, colors, output } => {
            let (built, _) = load(&source)?;
            let p = &built.polytope;
            let value = match colors {
                Some(k) => {
                    let found = find_coloring(p, k)?;
                    json!({ "colors": k, "coloring": found.map(|c| c.colors().to_vec()) })
                }
                None => {
                    let (k, c) = chromatic_number(p)?;
                    json!({ "colors": k, "coloring": c.colors() })
                }
            };
            Outcome::new(value, &output, true)
        }
        PolytopeCmd::Faces { source, dim, output } => {
            let (built, _) = load(&source)?;
            let faces = built.polytope.enumerate_faces(dim)?;
            Outcome::new(json!({ "dim": dim, "count": faces.len(), "faces": faces }), &output, true)
        }
    }
}

struct RingSetup {
    ring: CohomologyRing<i128>,
    coloring: Coloring,
    special: bool,
}

fn ring_setup(args: &RingSource) -> Result<RingSetup, CliError> {
    let (built, _) = load(&args.source)?;
    let p = built.polytope;
    let n = p.dim();
    let coloring = match &args.coloring {
        Some(c) => explicit_coloring(c)?,
        None => match built.coloring {
            Some(c) => c,
            None => match find_coloring(&p, n)? {
                Some(c) => c,
                None => find_coloring(&p, n + 1)?
                    .ok_or_else(|| CliError::Hypothesis(format!("no {n}- or {}-coloring", n + 1)))?,
            },
        },
    };
    coloring.validate(&p)?;
    let k = coloring.num_colors();
    if k == n {
        Ok(RingSetup { ring: CohomologyRing::canonical(p, &coloring)?, coloring, special: false })
    } else if k == n + 1 {
        let signs = args.signs.clone().map(SignVector::new).transpose()?;
        Ok(RingSetup { ring: CohomologyRing::special(p, &coloring, signs.as_ref())?, coloring, special: true })
    } else {
        Err(CliError::Hypothesis(format!("rings need {n} or {} colors, got {k}", n + 1)))
    }
}

fn ring(cmd: RingCmd) -> Result<Outcome, CliError> {
    match cmd {
        RingCmd::CheckIdentities { ring, output } => {
            let s = ring_setup(&ring)?;
            let checks = if s.special {
                special_identities(&s.ring, &s.coloring)?
            } else {
                canonical_identities(&s.ring, &s.coloring)?
            };
            let holds = checks.iter().all(|c| c.holds);
            let value = json!({
                "ring": if s.special { "special" } else { "canonical" },
                "coloring": s.coloring.colors(),
                "holds": holds,
                "checks": checks,
            });
            Outcome::new(value, &output, holds)
        }
        RingCmd::Integrate { ring, class, vertex, output } => {
            let s = ring_setup(&ring)?;
            let x = s.ring.parse(&class)?;
            let vertex = match vertex {
                Some(v) => v,
                None if s.special => special_reference_vertex(&s.ring, &s.coloring).unwrap_or(0),
                None => 0,
            };
            let value = s.ring.integrate(&x, vertex)?;
            let nf = s.ring.normal_form(&x)?;
            let out = json!({
                "class": class,
                "normal_form": s.ring.render(&nf),
                "vertex": vertex,
                "value": value,
            });
            Outcome::new(out, &output, true)
        }
        RingCmd::NormalForm { ring, class, output } => {
            let s = ring_setup(&ring)?;
            let x = s.ring.parse(&class)?;
            let nf = s.ring.normal_form(&x)?;
            Outcome::new(json!({ "class": class, "normal_form": s.ring.render(&nf) }), &output, true)
        }
    }
}

fn cover(cmd: CoverCmd) -> Result<Outcome, CliError> {
    match cmd {
        CoverCmd::Verify { cover, theorem, k, vertex, coloring, output } => {
            let file = CoverFile::from_json(&read(&cover)?)?;
            let base = cover.parent().unwrap_or(Path::new("."));
            let built: BuiltPolytope = resolve_named(file.polytope.clone(), base)?.build()?;
            let mut verifier = Verifier::new(built, file.grid)?;
            if let Some(c) = coloring {
                verifier = verifier.with_coloring(explicit_coloring(&c)?)?;
            }
            let complex = verifier.complex();
            let need_k = || CliError::Usage("--k is required for this theorem".into());
            let (sets, witness): (_, Option<Witness>) = match theorem {
                CheckKind::Lebesgue => {
                    let s = file.to_cover(complex)?;
                    let w = verifier.lebesgue(&s)?;
                    (s, w)
                }
                CheckKind::Kkm => {
                    let s = file.to_cover(complex)?;
                    let w = verifier.kkm(&s)?;
                    (s, w)
                }
                CheckKind::Karasev => {
                    let s = file.to_cover(complex)?;
                    let w = verifier.karasev(&s)?;
                    (s, w)
                }
                CheckKind::General => {
                    let s = file.to_cover(complex)?;
                    let w = verifier.general(&s, k)?;
                    (s, w)
                }
                CheckKind::QuantitativeLebesgue => {
                    let s = file.to_family(complex)?;
                    let w = verifier.quantitative_lebesgue(&s, k.ok_or_else(need_k)?, vertex)?;
                    (s, w)
                }
                CheckKind::QuantitativeKkm => {
                    let s = file.to_family(complex)?;
                    let w = verifier.quantitative_kkm(&s, k.ok_or_else(need_k)?)?;
                    (s, w)
                }
            };
            let check = witness.as_ref().map(|w| verifier.verify(&sets, w));
            let sound = matches!(check, Some(Ok(())));
            let value = json!({
                "theorem": format!("{theorem:?}"),
                "witness": witness,
                "sound": sound,
                "recheck_error": check.and_then(Result::err),
            });
            Outcome::new(value, &output, sound)
        }
        CoverCmd::Fuzz { source, theorem, profile, trials, seed, grid, coloring, repro_dir, output } => {
            let (built, source) = load(&source)?;
            let grid = grid.unwrap_or_else(|| chromatope::cover::default_resolution(built.polytope.dim()));
            let mut verifier = Verifier::new(built, grid)?;
            if let Some(c) = coloring {
                verifier = verifier.with_coloring(explicit_coloring(&c)?)?;
            }
            let theorem = match theorem {
                FuzzTheorem::Lebesgue => Theorem::Lebesgue,
                FuzzTheorem::Kkm => Theorem::Kkm,
                FuzzTheorem::Karasev => Theorem::Karasev,
                FuzzTheorem::General => Theorem::General,
            };
            let profile = match profile {
                FuzzProfile::Partition => Profile::Partition,
                FuzzProfile::ShiftedBricks => Profile::ShiftedBricks,
                FuzzProfile::VoronoiMerge => Profile::VoronoiMerge,
                FuzzProfile::RandomGrowth => Profile::RandomGrowth,
            };
            info!("fuzzing {theorem} with {profile}: {trials} trials, grid {grid}, seed {seed}");
            let report = verifier.fuzz(&FuzzConfig::new(theorem, profile, seed, trials), &source)?;
            let mut absences = Vec::new();
            if !report.absences.is_empty() {
                fs::create_dir_all(&repro_dir)?;
            }
            for a in &report.absences {
                let path = repro_dir.join(format!("{theorem}-{profile}-seed{seed}-trial{}.json", a.trial));
                fs::write(&path, a.cover.to_json())?;
                absences.push(json!({ "trial": a.trial, "repro": path }));
            }
            let value = json!({
                "theorem": theorem,
                "profile": profile,
                "seed": seed,
                "grid": grid,
                "trials": report.trials,
                "accepted": report.accepted,
                "rejected": report.rejected,
                "generation_failures": report.generation_failures,
                "witnesses_found": report.found(),
                "witnesses": report.witnesses,
                "unsound": report.unsound,
                "absences": absences,
            });
            let ok = report.absences.is_empty() && report.unsound.is_empty();
            Outcome::new(value, &output, ok)
        }
    }
}

fn board(args: &BoardArgs) -> Result<(Board<f64>, GameSpec), CliError> {
    let sites = if args.sites.starts_with("random:") {
        SiteSpec::Random(args.sites.clone())
    } else {
        let text = read(Path::new(&args.sites))?;
        SiteSpec::Points(serde_json::from_str(&text).map_err(|e| CliError::Malformed(format!("sites: {e}")))?)
    };
    let spec = GameSpec {
        polytope: polytope_source(&args.source)?,
        coloring: args.coloring.clone(),
        vertex: args.vertex,
        sites,
        players: Vec::new(),
        seed: 0,
    };
    Ok((spec.build_board()?, spec))
}

#[derive(Serialize)]
struct GameResult {
    game: usize,
    winner: Option<usize>,
    facets: Option<[usize; 2]>,
    moves: usize,
}

fn hex(cmd: HexCmd) -> Result<Outcome, CliError> {
    match cmd {
        HexCmd::Simulate { board: args, policies, games, seed, output } => {
            let (board, _) = board(&args)?;
            let board = Arc::new(board);
            let policies: Vec<Policy> = match policies {
                Some(list) => list
                    .iter()
                    .map(|s| s.parse::<Policy>().map_err(|e| CliError::Usage(e.to_string())))
                    .collect::<Result<_, _>>()?,
                None => vec![Policy::UniformRandom; board.players()],
            };
            if policies.len() != board.players() {
                return Err(CliError::Usage(format!("{} policies for {} players", policies.len(), board.players())));
            }
            let mut wins: BTreeMap<usize, usize> = BTreeMap::new();
            let mut results = Vec::with_capacity(games);
            for g in 0..games {
                let game = playout(board.clone(), &policies, &mut trial_rng(seed, g as u64))?;
                let win = game.winner();
                if let Some(w) = win {
                    *wins.entry(w.player).or_default() += 1;
                }
                results.push(GameResult {
                    game: g,
                    winner: win.map(|w| w.player),
                    facets: win.map(|w| w.facets),
                    moves: game.history().len(),
                });
            }
            let undecided = results.iter().filter(|r| r.winner.is_none()).count();
            let value = json!({
                "cells": board.num_cells(),
                "players": board.players(),
                "policies": policies,
                "seed": seed,
                "games": games,
                "wins": wins,
                "undecided": undecided,
                "results": results,
            });
            Outcome::new(value, &output, undecided == 0)
        }
        HexCmd::NoTie { board: args, trials, seed, instrument, repro_dir, output } => {
            let (board, spec) = board(&args)?;
            let board = Arc::new(board);
            info!("no-tie sweep: {trials} trials on {} cells", board.num_cells());
            let report = no_tie_check(board.clone(), trials, seed, instrument)?;
            let mut ties = Vec::new();
            if !report.ties.is_empty() {
                fs::create_dir_all(&repro_dir)?;
            }
            for tie in &report.ties {
                let path = repro_dir.join(format!("tie-seed{seed}-trial{}.json", tie.trial));
                let body = json!({ "board": spec, "trial": tie.trial, "moves": tie.moves });
                fs::write(&path, serde_json::to_string_pretty(&body).expect("serializable"))?;
                ties.push(json!({ "trial": tie.trial, "repro": path }));
            }
            let value = json!({
                "cells": board.num_cells(),
                "players": board.players(),
                "trials": report.trials,
                "seed": seed,
                "instrumented": instrument,
                "wins": report.wins,
                "ties": ties,
                "mismatches": report.mismatches,
                "max_moves": report.max_moves,
            });
            let ok = report.is_clean();
            Outcome::new(value, &output, ok)
        }
        HexCmd::Serve { .. } => Err(CliError::Usage("serve is handled by the binary".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_checks_exit_one() {
        let out = Outcome::new(json!({}), &Output::default(), false).unwrap();
        assert_eq!(out.exit_code(), 1);
        let out = Outcome::new(json!({ "b": 1, "a": 2 }), &Output::default(), true).unwrap();
        assert_eq!(out.exit_code(), 0);
        assert_eq!(out.render(), "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
    }
}
