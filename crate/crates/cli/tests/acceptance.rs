//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use chromatope::algebra::identities::special_reference_vertex;
use chromatope::algebra::{
    canonical_characteristic, canonical_identities, special_characteristic, special_identities,
    validate_characteristic, CharacteristicMatrix, CohomologyRing,
};
use chromatope::cover::{
    default_resolution, CoverInstance, FuzzConfig, FuzzReport, PolytopeSource, Profile, Theorem, Verifier, Witness,
};
use chromatope::hex::{no_tie_check, random_sites, Board, NoTieReport};
use chromatope::polytope::{descriptor, find_coloring, joswig_colorable, Coloring};
use chromatope::{CombinatorialPolytope, GenericBuiltPolytope};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Built = GenericBuiltPolytope<f64>;

const CATALOG: &[&str] = &[
    "cube:2",
    "cube:3",
    "cube:4",
    "simplex:2",
    "simplex:3",
    "simplex:4",
    "prism:3",
    "prism:4",
    "prism:5",
    "prism:6",
    "prism:7",
    "prism:8",
    "cube:3/trunc:0",
    "cube:3/trunc:0,3,5",
    "cube:4/trunc:0",
    "simplex:3/trunc:0",
    "prism:5/trunc:0",
    "simplex:3/total",
    "cube:3/total",
];

struct Line {
    pass: bool,
    detail: String,
}

type Check = Result<Line, String>;

/// Name, check, time limit in seconds.
type Criterion = (&'static str, fn() -> Check, Option<u64>);

fn line(pass: bool, detail: impl Into<String>) -> Check {
    Ok(Line { pass, detail: detail.into() })
}

fn build(desc: &str) -> Result<Built, String> {
    descriptor::build::<f64>(desc).map_err(|e| format!("{desc}: {e}"))
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn special_ring(desc: &str) -> Result<(CohomologyRing<i128>, Coloring), String> {
    let b = build(desc)?;
    let h = b.coloring.clone().ok_or("no coloring")?;
    Ok((CohomologyRing::special(b.polytope, &h, None).map_err(err)?, h))
}

fn c1() -> Check {
    let mut failures = Vec::new();
    let mut cases = 0;
    for (n, expected) in [(2usize, 2i128), (3, 6), (4, 24)] {
        let b = build(&format!("cube:{n}"))?;
        let ring = CohomologyRing::<i128>::canonical(b.polytope, b.coloring.as_ref().unwrap()).map_err(err)?;
        let omega = ring.vertex_class(0).map_err(err)?;
        let got = ring.integrate(&omega.pow(n as u32), 0).map_err(err)?;
        cases += 1;
        if got != expected {
            failures.push(format!("cube({n}) omega^n = {got}"));
        }
    }
    for (desc, k) in [("cube:3/trunc:0", 1i128), ("cube:3/trunc:0,3,5", 3)] {
        let (ring, h) = special_ring(desc)?;
        let r = special_reference_vertex(&ring, &h).ok_or("no reference vertex")?;
        let got = ring.integrate(&ring.simplicial_class().pow(3), r).map_err(err)?;
        cases += 1;
        if got != k {
            failures.push(format!("{desc} t^3 = {got}"));
        }
        for &tj in ring.names().special() {
            let got = ring.integrate(&ring.var(tj).pow(3), r).map_err(err)?;
            cases += 1;
            if got != 1 {
                failures.push(format!("{desc} t_{tj}^3 = {got}"));
            }
        }
    }
    line(failures.is_empty(), format!("{cases} exact integrals, failures {failures:?}"))
}

fn c2() -> Check {
    let mut checks = 0;
    let mut failed = Vec::new();
    for n in 2..=4 {
        let b = build(&format!("cube:{n}"))?;
        let h = b.coloring.clone().unwrap();
        let ring = CohomologyRing::<i128>::canonical(b.polytope, &h).map_err(err)?;
        for c in canonical_identities(&ring, &h).map_err(err)? {
            checks += c.cases;
            if !c.holds {
                failed.push(format!("cube({n}) {}: {:?}", c.name, c.failure));
            }
        }
    }
    for desc in ["cube:3/trunc:0", "cube:3/trunc:0,3,5", "cube:4/trunc:0"] {
        let (ring, h) = special_ring(desc)?;
        for c in special_identities(&ring, &h).map_err(err)? {
            checks += c.cases;
            if !c.holds {
                failed.push(format!("{desc} {}: {:?}", c.name, c.failure));
            }
        }
    }
    line(failed.is_empty(), format!("{checks} normal-form identities, failures {failed:?}"))
}

fn c3() -> Check {
    let mut disagreements = Vec::new();
    let mut colorable = 0;
    for desc in CATALOG {
        let b = build(desc)?;
        let n = b.polytope.dim();
        let joswig = joswig_colorable(&b.polytope).map_err(err)?.colorable;
        let search = find_coloring(&b.polytope, n).map_err(err)?.is_some();
        colorable += usize::from(search);
        if joswig != search {
            disagreements.push(desc.to_string());
        }
    }
    line(
        disagreements.is_empty(),
        format!(
            "{}/{} polytopes agree ({colorable} n-colorable), disagreements {disagreements:?}",
            CATALOG.len() - disagreements.len(),
            CATALOG.len()
        ),
    )
}

/// Laplace expansion; independent of the library's elimination.
fn det(m: &[Vec<i64>]) -> i128 {
    if m.len() == 1 {
        return m[0][0] as i128;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] as i128 * det(&minor)
        })
        .sum()
}

fn oracle_valid(p: &CombinatorialPolytope, lambda: &CharacteristicMatrix) -> bool {
    (0..p.num_vertices()).all(|v| {
        let fs = p.vertex_facets(v);
        let rows: Vec<Vec<i64>> = (0..lambda.n).map(|r| fs.iter().map(|&f| lambda.entry(r, f)).collect()).collect();
        det(&rows).abs() == 1
    })
}

#[derive(Default)]
struct MutationTally {
    matrices: usize,
    oracle_disagreements: usize,
    support: usize,
    support_rejected: usize,
    zero: usize,
    zero_rejected: usize,
}

fn mutate(
    p: &CombinatorialPolytope,
    lambda: &CharacteristicMatrix,
    rng: &mut ChaCha8Rng,
    t: &mut MutationTally,
) -> Result<(), String> {
    let base = validate_characteristic(p, lambda).map_err(err)?;
    t.matrices += 1;
    if !base.valid || !oracle_valid(p, lambda) {
        t.oracle_disagreements += 1;
    }
    let cells: Vec<(usize, usize)> =
        (0..lambda.n).flat_map(|r| (0..lambda.columns.len()).map(move |c| (r, c))).collect();
    let (support, zeros): (Vec<_>, Vec<_>) = cells.into_iter().partition(|&(r, c)| lambda.entry(r, c) != 0);
    for (pool, on_support) in [(support, true), (zeros, false)] {
        for _ in 0..50 {
            let (r, c) = pool[rng.gen_range(0..pool.len())];
            let mut columns = lambda.columns.clone();
            columns[c][r] += if rng.gen_bool(0.5) { 1 } else { -1 };
            let m = CharacteristicMatrix::new(lambda.n, columns).map_err(err)?;
            let rejected = !validate_characteristic(p, &m).map_err(err)?.valid;
            if rejected == oracle_valid(p, &m) {
                t.oracle_disagreements += 1;
            }
            if on_support {
                t.support += 1;
                t.support_rejected += usize::from(rejected);
            } else {
                t.zero += 1;
                t.zero_rejected += usize::from(rejected);
            }
        }
    }
    Ok(())
}

fn c4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut t = MutationTally::default();
    for desc in CATALOG {
        let b = build(desc)?;
        let n = b.polytope.dim();
        if let Some(h) = find_coloring(&b.polytope, n).map_err(err)? {
            let lambda = canonical_characteristic(&b.polytope, &h).map_err(err)?;
            mutate(&b.polytope, &lambda, &mut rng, &mut t)?;
        }
        if let Some(h) = b.coloring.as_ref().filter(|h| h.num_colors() == n + 1) {
            if let Ok(lambda) = special_characteristic(&b.polytope, h, None) {
                mutate(&b.polytope, &lambda, &mut rng, &mut t)?;
            }
        }
    }
    line(
        t.oracle_disagreements == 0 && t.support_rejected == t.support,
        format!(
            "{} matrices valid; support-entry mutations rejected {}/{}; zero-entry mutations rejected {}/{} \
             (the rest stay unimodular at every vertex); determinant-oracle disagreements {}",
            t.matrices, t.support_rejected, t.support, t.zero_rejected, t.zero, t.oracle_disagreements
        ),
    )
}

fn c5() -> Check {
    let repro = tempfile::tempdir().map_err(err)?;
    let repro_dir = repro.path().join("repro");
    let mut total = 0;
    let mut found = 0;
    let mut bad_exits = Vec::new();
    for desc in ["cube:2", "cube:3", "hexagon"] {
        for (i, profile) in ["partition", "shifted-bricks", "voronoi-merge", "random-growth"].iter().enumerate() {
            let out = Command::new(env!("CARGO_BIN_EXE_chromatope"))
                .args(["cover", "fuzz", "--builder", desc, "--theorem", "lebesgue", "--profile", profile])
                .args(["--trials", "125", "--seed", &(500 + i).to_string()])
                .arg("--repro-dir")
                .arg(&repro_dir)
                .output()
                .map_err(err)?;
            if !out.status.success() {
                bad_exits.push(format!("{desc}/{profile}: {:?}", out.status.code()));
                continue;
            }
            let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(err)?;
            total += v["trials"].as_u64().unwrap_or(0);
            found += v["witnesses_found"].as_u64().unwrap_or(0);
            if !v["unsound"].as_array().is_some_and(|u| u.is_empty()) {
                bad_exits.push(format!("{desc}/{profile}: unsound witnesses"));
            }
        }
    }
    let clean = bad_exits.is_empty() && found == 1500 && total == 1500 && !repro_dir.exists();
    line(
        clean,
        format!(
            "{found}/{total} witnesses over cube(2), cube(3), hexagon; repro files {}; {bad_exits:?}",
            repro_dir.exists()
        ),
    )
}

/// 4 profiles sharing `trials` between them.
fn fuzz_all(desc: &str, theorem: Theorem, trials: usize, seed: u64) -> Result<Vec<FuzzReport>, String> {
    let b = build(desc)?;
    let grid = default_resolution(b.polytope.dim());
    let v = Verifier::new(b, grid).map_err(err)?;
    let source = PolytopeSource::Named(desc.into());
    Profile::ALL
        .iter()
        .enumerate()
        .map(|(i, &p)| v.fuzz(&FuzzConfig::new(theorem, p, seed + i as u64, trials / 4), &source).map_err(err))
        .collect()
}

fn fuzz_criterion(cases: &[&str], theorem: Theorem, trials: usize, variant: &str) -> Check {
    let mut pass = true;
    let mut parts = Vec::new();
    for desc in cases {
        let reports = fuzz_all(desc, theorem, trials, 600)?;
        let found: usize = reports.iter().map(|r| r.witnesses.get(variant).copied().unwrap_or(0)).sum();
        let clean = reports.iter().all(FuzzReport::is_clean);
        pass &= clean && found == trials;
        parts.push(format!("{desc} {found}/{trials}"));
    }
    line(pass, format!("{} witnesses: {}", variant, parts.join(", ")))
}

fn c8() -> Check {
    let built = build("cube:3")?;
    let v = Verifier::new(built, 8).map_err(err)?;
    let cells = |f: &dyn Fn(&[usize]) -> bool| -> Vec<usize> {
        (0..v.complex().num_cells()).filter(|&c| f(&v.complex().cell(c).grid)).collect()
    };
    let family = |sets: Vec<Vec<usize>>| {
        let labels = (0..sets.len()).map(|i| format!("Y{i}")).collect();
        CoverInstance::family(v.complex(), labels, sets).map_err(err)
    };
    let plates =
        family(vec![cells(&|g| g[0] < 2 && g[1] < 2 && g[2] < 4), cells(&|g| g[0] >= 6 && g[1] >= 6 && g[2] >= 4)])?;
    let ball = family(vec![cells(&|g| g.iter().all(|&t| (3..5).contains(&t)))])?;
    let mut parts = Vec::new();
    let mut pass = true;
    for (k, fam) in [(1usize, &plates), (2, &ball)] {
        let need = 1 << (3 - k);
        let w = v.quantitative_lebesgue(fam, k, Some(0)).map_err(err)?;
        let Some(w) = w else {
            pass = false;
            parts.push(format!("k={k}: none"));
            continue;
        };
        let sound = v.verify(fam, &w).is_ok();
        let Witness::EssentialComponent { faces, colors, .. } = &w else { return Err("wrong witness".into()) };
        let has_vertex = faces.iter().any(|f| f.vertices.contains(&0) && f.dim == k);
        pass &= sound && faces.len() == need && has_vertex;
        parts.push(format!(
            "k={k}: {} faces of class {colors:?} (need {need}), vertex 0 included {has_vertex}",
            faces.len()
        ));
    }
    line(pass, parts.join("; "))
}

fn c9() -> Check {
    let mut parts = Vec::new();
    let mut pass = true;
    for desc in ["pyramid:4", "octahedron"] {
        let reports = fuzz_all(desc, Theorem::General, 100, 900)?;
        let found: usize = reports.iter().map(|r| r.witnesses.get("two_k_faces").copied().unwrap_or(0)).sum();
        pass &= found == 100 && reports.iter().all(FuzzReport::is_clean);
        parts.push(format!("{desc} {found}/100"));
    }
    // same seeds, so both checkers see identical covers
    let leb = fuzz_all("cube:3", Theorem::Lebesgue, 100, 950)?;
    let gen = fuzz_all("cube:3", Theorem::General, 100, 950)?;
    let agree = leb.iter().zip(&gen).all(|(a, b)| {
        a.accepted == b.accepted && a.found() == b.found() && a.absences.is_empty() && b.absences.is_empty()
    });
    let found: usize = gen.iter().map(FuzzReport::found).sum();
    pass &= agree && found == 100;
    parts.push(format!("cube(3) general {found}/100, agrees with lebesgue {agree}"));
    line(pass, parts.join(", "))
}

fn board(desc: &str, sites: usize, seed: u64) -> Result<Arc<Board<f64>>, String> {
    let b = build(desc)?;
    let h = b.coloring.clone().ok_or("no coloring")?;
    let s = random_sites(&b.realization, sites, seed);
    Ok(Arc::new(Board::new(&b, h, 0, s).map_err(err)?))
}

fn c10() -> Check {
    let mut plain: Vec<NoTieReport> = Vec::new();
    for s in 0..10 {
        plain.push(no_tie_check(board("hexagon", 20 + s as usize, s)?, 100, s, false).map_err(err)?);
    }
    for s in 0..5 {
        plain.push(no_tie_check(board("cube:3", 32, 100 + s)?, 100, s, false).map_err(err)?);
    }
    let instrumented = [
        no_tie_check(board("hexagon", 24, 7)?, 25, 7, true).map_err(err)?,
        no_tie_check(board("cube:3", 32, 7)?, 25, 7, true).map_err(err)?,
    ];
    let games: usize = plain.iter().map(|r| r.trials).sum();
    let checked: usize = instrumented.iter().map(|r| r.trials).sum();
    let all = || plain.iter().chain(&instrumented);
    let ties: usize = all().map(|r| r.ties.len()).sum();
    let mismatches: usize = all().map(|r| r.mismatches.len()).sum();
    line(
        ties == 0 && mismatches == 0 && games == 1500 && checked == 50,
        format!("{games} playouts (1000 hexagon, 500 cube(3)) plus {checked} instrumented: ties {ties}, mismatches {mismatches}"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("ring golden values", c1, Some(10)),
        ("relation suite", c2, None),
        ("Joswig criterion equivalence", c3, Some(30)),
        ("characteristic validation", c4, None),
        ("colorful Lebesgue fuzz", c5, Some(60)),
        (
            "colorful KKM fuzz",
            || fuzz_criterion(&["simplex:2", "simplex:3", "cube:3/trunc:0"], Theorem::Kkm, 300, "all_colors"),
            None,
        ),
        ("Karasev check", || fuzz_criterion(&["cube:3", "hexagon"], Theorem::Karasev, 300, "many_facets"), None),
        ("quantitative checks", c8, None),
        ("general polytopes", c9, None),
        ("hex no-tie", c10, None),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|s| elapsed < Duration::from_secs(s));
        let (pass, detail) = match result {
            Ok(l) => (l.pass && in_time, l.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let limit = limit.map(|s| format!(", limit {s}s")).unwrap_or_default();
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.2}s{limit}]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        failed += usize::from(!pass);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
