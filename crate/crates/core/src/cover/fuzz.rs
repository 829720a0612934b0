//! Seeded random covers of multiplicity at most `n`, run through a checker.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checkers::Verifier;
use super::complex::CellComplex;
use super::instance::{CoverFile, CoverInstance, PolytopeSource};
use crate::error::CoverError;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// Nested jittered stripes, at most `n - 1` levels deep.
    Partition,
    /// Recursive slabs of equal width with offsets per parent slab.
    ShiftedBricks,
    /// Nearest random site, then labels merged at overfull points.
    VoronoiMerge,
    /// Random region growth, merging, then optional overlapping dilation.
    RandomGrowth,
}

impl Profile {
    pub const ALL: [Profile; 4] =
        [Profile::Partition, Profile::ShiftedBricks, Profile::VoronoiMerge, Profile::RandomGrowth];

    pub fn name(self) -> &'static str {
        match self {
            Profile::Partition => "partition",
            Profile::ShiftedBricks => "shifted-bricks",
            Profile::VoronoiMerge => "voronoi-merge",
            Profile::RandomGrowth => "random-growth",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = CoverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Profile::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| CoverError::InvalidCover(format!("unknown profile {s}")))
    }
}

/// Which checker a fuzz run exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    Lebesgue,
    Kkm,
    Karasev,
    General,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::Lebesgue, Theorem::Kkm, Theorem::Karasev, Theorem::General];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Lebesgue => "lebesgue",
            Theorem::Kkm => "kkm",
            Theorem::Karasev => "karasev",
            Theorem::General => "general",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = CoverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| CoverError::InvalidCover(format!("unknown theorem {s}")))
    }
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub theorem: Theorem,
    pub profile: Profile,
    pub seed: u64,
    pub trials: usize,
    /// Generation attempts per trial before giving up.
    pub attempts: usize,
}

impl FuzzConfig {
    pub fn new(theorem: Theorem, profile: Profile, seed: u64, trials: usize) -> Self {
        Self { theorem, profile, seed, trials, attempts: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Absence {
    pub trial: usize,
    pub cover: CoverFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub theorem: Theorem,
    pub profile: Profile,
    pub seed: u64,
    pub trials: usize,
    /// Trials that produced a cover passing the multiplicity filter.
    pub accepted: usize,
    /// Generated covers discarded for exceeding multiplicity `n`.
    pub rejected: usize,
    /// Trials that ran out of attempts.
    pub generation_failures: usize,
    pub witnesses: BTreeMap<String, usize>,
    /// Witnesses that failed the independent re-check, with the reason.
    pub unsound: Vec<(usize, String)>,
    pub absences: Vec<Absence>,
}

impl FuzzReport {
    pub fn found(&self) -> usize {
        self.witnesses.values().sum()
    }

    /// Every accepted cover produced a sound witness.
    pub fn is_clean(&self) -> bool {
        self.absences.is_empty() && self.unsound.is_empty() && self.generation_failures == 0
    }
}

enum Outcome {
    Failed { rejected: usize },
    Checked { rejected: usize, witness: Option<String>, unsound: Option<String>, cover: CoverInstance },
}

impl<S: Scalar> Verifier<S> {
    /// Runs `trials` seeded covers through the checker of `theorem`.
    /// Trial `t` draws from stream `t` of a ChaCha generator seeded with
    /// `seed`, so reports do not depend on scheduling.
    pub fn fuzz(&self, cfg: &FuzzConfig, source: &PolytopeSource) -> Result<FuzzReport, CoverError> {
        let outcomes: Vec<Outcome> =
            (0..cfg.trials).into_par_iter().map(|t| self.trial(cfg, t)).collect::<Result<_, _>>()?;
        let mut report = FuzzReport {
            theorem: cfg.theorem,
            profile: cfg.profile,
            seed: cfg.seed,
            trials: cfg.trials,
            accepted: 0,
            rejected: 0,
            generation_failures: 0,
            witnesses: BTreeMap::new(),
            unsound: Vec::new(),
            absences: Vec::new(),
        };
        for (trial, outcome) in outcomes.into_iter().enumerate() {
            match outcome {
                Outcome::Failed { rejected } => {
                    report.rejected += rejected;
                    report.generation_failures += 1;
                }
                Outcome::Checked { rejected, witness, unsound, cover } => {
                    report.rejected += rejected;
                    report.accepted += 1;
                    match witness {
                        Some(kind) => *report.witnesses.entry(kind).or_default() += 1,
                        None => report
                            .absences
                            .push(Absence { trial, cover: cover.to_file(source.clone(), self.complex().resolution()) }),
                    }
                    if let Some(reason) = unsound {
                        report.unsound.push((trial, reason));
                    }
                }
            }
        }
        Ok(report)
    }

    fn trial(&self, cfg: &FuzzConfig, trial: usize) -> Result<Outcome, CoverError> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(trial as u64);
        let n = self.dim();
        let mut rejected = 0;
        for _ in 0..cfg.attempts.max(1) {
            let cover = generate(self.complex(), cfg.profile, n, &mut rng)?;
            if cover.violation(self.complex(), n).is_some() {
                rejected += 1;
                continue;
            }
            let found = match cfg.theorem {
                Theorem::Lebesgue => self.lebesgue(&cover)?,
                Theorem::Kkm => self.kkm(&cover)?,
                Theorem::Karasev => self.karasev(&cover)?,
                Theorem::General => self.general(&cover, None)?,
            };
            let unsound = found.as_ref().and_then(|w| self.verify(&cover, w).err());
            return Ok(Outcome::Checked { rejected, witness: found.map(|w| w.variant().to_string()), unsound, cover });
        }
        Ok(Outcome::Failed { rejected })
    }
}

/// Cell centroids rescaled to the unit box.
fn unit_centroids<S: Scalar>(complex: &CellComplex<S>) -> Vec<Vec<f64>> {
    let (lo, hi) = complex.bounds();
    complex
        .cells()
        .iter()
        .map(|c| {
            c.centroid
                .iter()
                .enumerate()
                .map(|(a, x)| (x.real() - lo[a].real()) / (hi[a].real() - lo[a].real()))
                .collect()
        })
        .collect()
}

/// One random cover; may exceed multiplicity `n` for the stripe profiles.
pub fn generate<S: Scalar>(
    complex: &CellComplex<S>,
    profile: Profile,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<CoverInstance, CoverError> {
    match profile {
        Profile::Partition => {
            let depth = rng.gen_range(1..=n.saturating_sub(1).max(1));
            nested_slabs(complex, depth, rng, |rng, _| {
                let parts = rng.gen_range(2..=4);
                let mut cuts: Vec<f64> = (1..parts).map(|_| rng.gen_range(0.1..0.9)).collect();
                cuts.sort_by(f64::total_cmp);
                Slab::Cuts(cuts)
            })
        }
        Profile::ShiftedBricks => {
            let depth = rng.gen_range(1..=n);
            let widths: Vec<f64> = (0..depth).map(|_| rng.gen_range(0.2..0.5)).collect();
            nested_slabs(complex, depth, rng, |rng, level| {
                let w = widths[level];
                Slab::Bricks { width: w, offset: rng.gen_range(0.0..w) }
            })
        }
        Profile::VoronoiMerge => {
            let sites: Vec<Vec<f64>> =
                (0..rng.gen_range(n + 1..=3 * n + 3)).map(|_| (0..n).map(|_| rng.gen::<f64>()).collect()).collect();
            let assignment: Vec<usize> = unit_centroids(complex)
                .iter()
                .map(|x| {
                    (0..sites.len())
                        .min_by(|&a, &b| dist2(x, &sites[a]).total_cmp(&dist2(x, &sites[b])))
                        .expect("at least one site")
                })
                .collect();
            merge_until(complex, assignment, n, rng)
        }
        Profile::RandomGrowth => {
            let assignment = grow(complex, rng.gen_range(2..=2 * n + 2), rng);
            let mut cover = merge_until(complex, assignment, n, rng)?;
            if rng.gen_bool(0.5) {
                dilate(complex, &mut cover, n, rng.gen_range(1..=3), rng);
            }
            Ok(cover)
        }
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

enum Slab {
    Cuts(Vec<f64>),
    Bricks { width: f64, offset: f64 },
}

impl Slab {
    fn index(&self, u: f64) -> i64 {
        match self {
            Slab::Cuts(cuts) => cuts.iter().filter(|&&c| u > c).count() as i64,
            Slab::Bricks { width, offset } => ((u - offset) / width).floor() as i64,
        }
    }
}

/// Labels cells by a path of slab indices along `depth` random axes; the
/// slabs at each level depend on the path so far.
fn nested_slabs<S: Scalar>(
    complex: &CellComplex<S>,
    depth: usize,
    rng: &mut ChaCha8Rng,
    mut slab: impl FnMut(&mut ChaCha8Rng, usize) -> Slab,
) -> Result<CoverInstance, CoverError> {
    let n = complex.dim();
    let mut axes: Vec<usize> = (0..n).collect();
    axes.shuffle(rng);
    // draw every slab up front, level by level, so the draw order is fixed
    let centroids = unit_centroids(complex);
    let mut slabs: HashMap<Vec<i64>, Slab> = HashMap::new();
    let mut paths: Vec<Vec<i64>> = vec![Vec::new(); centroids.len()];
    for (level, &axis) in axes.iter().take(depth).enumerate() {
        let mut prefixes: Vec<Vec<i64>> = paths.clone();
        prefixes.sort();
        prefixes.dedup();
        for prefix in prefixes {
            let s = slab(rng, level);
            slabs.insert(prefix, s);
        }
        for (path, x) in paths.iter_mut().zip(&centroids) {
            let i = slabs[path.as_slice()].index(x[axis]);
            path.push(i);
        }
    }
    let mut ids: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for path in &paths {
        let next = ids.len();
        ids.entry(path.clone()).or_insert(next);
    }
    let assignment: Vec<usize> = paths.iter().map(|p| ids[p]).collect();
    CoverInstance::from_assignment(complex, &assignment)
}

/// Multi-source growth across walls from random seed cells.
fn grow<S: Scalar>(complex: &CellComplex<S>, seeds: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let total = complex.num_cells();
    let mut label = vec![usize::MAX; total];
    let mut frontier = Vec::new();
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(rng);
    for (i, &c) in order.iter().take(seeds.min(total)).enumerate() {
        label[c] = i;
        frontier.push(c);
    }
    while !frontier.is_empty() {
        let c = frontier.swap_remove(rng.gen_range(0..frontier.len()));
        let nbs: Vec<usize> = complex.wall_neighbors(c).iter().copied().filter(|&d| label[d] == usize::MAX).collect();
        if let Some(&d) = nbs.get(rng.gen_range(0..nbs.len().max(1))) {
            label[d] = label[c];
            frontier.push(d);
            frontier.push(c);
        }
    }
    // cells unreachable across walls keep their own label
    let mut next = seeds;
    for l in &mut label {
        if *l == usize::MAX {
            *l = next;
            next += 1;
        }
    }
    label
}

/// Merges two labels at an overfull point until the multiplicity is at
/// most `limit`.
fn merge_until<S: Scalar>(
    complex: &CellComplex<S>,
    mut assignment: Vec<usize>,
    limit: usize,
    rng: &mut ChaCha8Rng,
) -> Result<CoverInstance, CoverError> {
    loop {
        let cover = CoverInstance::from_assignment(complex, &assignment)?;
        let Some(p) = cover.violation(complex, limit) else { return Ok(cover) };
        // labels of a from_assignment cover are renumbered densely; map back
        // through any cell of each label
        let at: Vec<usize> = cover.labels_at_point(complex, p).iter().map(|&l| assignment[cover.set(l)[0]]).collect();
        let a = at[rng.gen_range(0..at.len())];
        let mut b = at[rng.gen_range(0..at.len())];
        while b == a {
            b = at[rng.gen_range(0..at.len())];
        }
        for x in &mut assignment {
            if *x == b {
                *x = a;
            }
        }
    }
}

/// Grows labels into neighboring cells while keeping the multiplicity at
/// most `limit`, producing overlapping sets.
fn dilate<S: Scalar>(
    complex: &CellComplex<S>,
    cover: &mut CoverInstance,
    limit: usize,
    rounds: usize,
    rng: &mut ChaCha8Rng,
) {
    for _ in 0..rounds {
        let mut labels: Vec<usize> = (0..cover.num_labels()).collect();
        labels.shuffle(rng);
        for label in labels {
            let mut boundary: Vec<usize> = cover
                .set(label)
                .iter()
                .flat_map(|&c| complex.wall_neighbors(c).iter().copied())
                .filter(|&d| !cover.contains(label, d))
                .collect();
            boundary.sort_unstable();
            boundary.dedup();
            boundary.shuffle(rng);
            let take = boundary.len().div_ceil(2);
            for &d in &boundary[..take] {
                let fits = complex.cell(d).vertices.iter().all(|&p| {
                    let at = cover.labels_at_point(complex, p);
                    at.contains(&label) || at.len() < limit
                });
                if fits {
                    cover.extend_label(label, &[d]);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::builders;

    fn square() -> (Verifier<f64>, PolytopeSource) {
        (Verifier::new(builders::cube::<f64>(2), 8).unwrap(), PolytopeSource::Named("cube:2".into()))
    }

    #[test]
    fn zero_trials_is_an_empty_report() {
        let (v, src) = square();
        let r = v.fuzz(&FuzzConfig::new(Theorem::Lebesgue, Profile::Partition, 1, 0), &src).unwrap();
        assert_eq!((r.accepted, r.rejected, r.found()), (0, 0, 0));
        assert!(r.is_clean());
    }

    #[test]
    fn every_profile_generates_valid_covers() {
        let (v, src) = square();
        for profile in Profile::ALL {
            let r = v.fuzz(&FuzzConfig::new(Theorem::Lebesgue, profile, 3, 20), &src).unwrap();
            assert_eq!(r.accepted, 20, "{profile}");
            assert!(r.is_clean(), "{profile}: {r:?}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let (v, src) = square();
        let cfg = FuzzConfig::new(Theorem::Karasev, Profile::RandomGrowth, 11, 12);
        let a = serde_json::to_string(&v.fuzz(&cfg, &src).unwrap()).unwrap();
        let b = serde_json::to_string(&v.fuzz(&cfg, &src).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn names_round_trip() {
        for p in Profile::ALL {
            assert_eq!(p.name().parse::<Profile>().unwrap(), p);
        }
        for t in Theorem::ALL {
            assert_eq!(t.name().parse::<Theorem>().unwrap(), t);
        }
        assert!("bricks".parse::<Profile>().is_err());
    }
}
